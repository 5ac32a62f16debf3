/** The console proper: holds the current view, talks to the API, renders
 * to a markup string. All state is refetchable; killing the page loses
 * nothing but the scroll position.
 *
 * Conflict handling follows the server's once-only rule: a 409 is
 * surfaced verbatim and the record is refetched so the frozen verdict
 * shows up disabled. A connection failure clears the run list rather
 * than leaving stale rows on screen. */

import { ApiError, type ReviewApi } from "./api.js";
import { renderBanner, renderDetail, renderReviewerBox, renderRunList } from "./render.js";
import { sortRows, type SortKey } from "./state.js";
import type { RunRecord, RunRow } from "./types.js";

export class Console {
  private readonly api: ReviewApi;
  reviewer = "";
  view: "list" | "detail" = "list";
  rows: RunRow[] = [];
  record: RunRecord | null = null;
  selectedItem: string | null = null;
  sortKey: SortKey = "served";
  banner: string | null = null;

  constructor(api: ReviewApi) {
    this.api = api;
  }

  setReviewer(name: string): void {
    this.reviewer = name.trim();
  }

  setSort(key: SortKey): void {
    this.sortKey = key;
  }

  select(item: string): void {
    this.selectedItem = this.selectedItem === item ? null : item;
  }

  async refresh(): Promise<void> {
    try {
      this.rows = await this.api.listRuns();
      this.banner = null;
    } catch (err) {
      this.rows = [];
      this.banner = messageOf(err);
    }
  }

  async open(runId: string): Promise<void> {
    try {
      this.record = await this.api.getRun(runId);
      this.view = "detail";
      this.selectedItem = null;
      this.banner = null;
    } catch (err) {
      this.banner = messageOf(err);
    }
  }

  async back(): Promise<void> {
    this.view = "list";
    this.record = null;
    this.selectedItem = null;
    await this.refresh();
  }

  async retry(): Promise<void> {
    if (this.view === "detail" && this.record) {
      await this.open(this.record.run_id);
    } else {
      await this.refresh();
    }
  }

  async resolve(item: string, outcome: "pass" | "fail"): Promise<void> {
    if (!this.record) return;
    if (!this.reviewer) {
      this.banner = "enter a reviewer id first";
      return;
    }
    try {
      this.record = await this.api.postVerdict(this.record.run_id, {
        item,
        outcome,
        reviewer: this.reviewer,
      });
      this.banner = null;
    } catch (err) {
      this.banner = messageOf(err);
      if (err instanceof ApiError && err.status === 409) {
        // someone got there first; show their frozen verdict
        this.record = await this.api.getRun(this.record.run_id);
      }
    }
  }

  async flagSyntax(value: boolean): Promise<void> {
    if (!this.record) return;
    if (!this.reviewer) {
      this.banner = "enter a reviewer id first";
      return;
    }
    try {
      this.record = await this.api.postSyntaxFlag(this.record.run_id, {
        reviewer: this.reviewer,
        value,
      });
      this.banner = null;
    } catch (err) {
      this.banner = messageOf(err);
    }
  }

  html(): string {
    const banner = this.banner === null ? "" : renderBanner(this.banner) + "\n";
    if (this.view === "detail" && this.record) {
      return banner + renderDetail(this.record, this.reviewer, this.selectedItem);
    }
    return (
      banner +
      renderReviewerBox(this.reviewer) +
      "\n" +
      renderRunList(sortRows(this.rows, this.sortKey), this.sortKey)
    );
  }
}

function messageOf(err: unknown): string {
  if (err instanceof ApiError) return err.detail;
  return err instanceof Error ? err.message : String(err);
}
