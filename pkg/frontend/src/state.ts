/** Pure view-state helpers. Sorting only reorders server rows; it never
 * touches the numbers inside them. */

import type { RunRow, VerdictRow } from "./types.js";

export type SortKey = "served" | "unresolved" | "score";

export const SORT_KEYS: readonly SortKey[] = ["served", "unresolved", "score"];

/** Stable copy-sort. "served" keeps the server order (benchmark, then run
 * index); "unresolved" floats runs waiting on a human; "score" floats the
 * worst cn/auc so negative results get eyes first. */
export function sortRows(rows: RunRow[], key: SortKey): RunRow[] {
  const copy = rows.slice();
  if (key === "unresolved") {
    copy.sort((a, b) => b.needs_human - a.needs_human);
  } else if (key === "score") {
    copy.sort((a, b) => a.score.cn - b.score.cn || a.score.auc - b.score.auc);
  }
  return copy;
}

/** The once-only rule: a verdict is editable while the checker owns it. */
export function canResolve(verdict: VerdictRow): boolean {
  return verdict.resolved_by === "auto";
}

export function unresolvedCount(verdicts: VerdictRow[]): number {
  return verdicts.filter((v) => v.outcome === "needs-human").length;
}
