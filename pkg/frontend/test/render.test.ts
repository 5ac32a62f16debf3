import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import {
  escapeHtml,
  evidenceTokens,
  highlightTokens,
  renderBanner,
  renderDetail,
  renderRunList,
} from "../src/render.js";
import { echoRecord, goldenRecord, seededStore, twinFetch } from "./twin.js";

describe("escaping", () => {
  it("neutralizes markup", () => {
    expect(escapeHtml(`<b a="1">&'`)).toBe("&lt;b a=&quot;1&quot;&gt;&amp;&#39;");
  });
});

describe("evidence highlighting", () => {
  it("keeps identifiers and drops prose", () => {
    const tokens = evidenceTokens(
      "2 actions share the signature (department, workshop): approveWorkShop, reviewWorkShop",
    );
    expect(tokens).toContain("approveWorkShop");
    expect(tokens).toContain("reviewWorkShop");
    expect(tokens).not.toContain("actions");
    expect(tokens).not.toContain("share");
  });

  it("marks whole tokens only, after escaping", () => {
    const html = highlightTokens("(:action approveWorkShop) <x>", ["approveWorkShop"]);
    expect(html).toContain("<mark>approveWorkShop</mark>");
    expect(html).toContain("&lt;x&gt;");
    expect(highlightTokens("approveWorkShops", ["approveWorkShop"])).not.toContain("<mark>");
  });
});

describe("run list", () => {
  it("shows an empty-state message for an empty store", () => {
    expect(renderRunList([], "served")).toContain("no runs in the store yet");
  });

  it("renders one clickable row per run", async () => {
    const rows = await new ReviewApi("http://twin", twinFetch(seededStore())).listRuns();
    const html = renderRunList(rows, "served");
    expect(html.match(/data-action="open"/g)).toHaveLength(6);
    expect(html).toContain(`data-run="echo-education01"`);
    expect(html).toContain("<td>1.00</td>");
    expect(html).toContain("<td>2</td>");
  });

  it("marks flagged runs", async () => {
    const store = seededStore();
    store.records.get("golden-0")!.syntax_flag = { value: true, reviewer: "dana" };
    const rows = await new ReviewApi("http://twin", twinFetch(store)).listRuns();
    expect(renderRunList(rows, "served")).toContain("<td>flagged</td>");
  });
});

describe("banner", () => {
  it("carries the message and a retry affordance", () => {
    const html = renderBanner("cannot reach the review service");
    expect(html).toContain("cannot reach the review service");
    expect(html).toContain(`data-action="retry"`);
  });
});

describe("run detail", () => {
  it("renders the three panes in order with verbatim text", () => {
    const record = goldenRecord(0);
    const html = renderDetail(record, "dana", null);
    const panes = [...html.matchAll(/data-pane="(\w+)"/g)].map((m) => m[1]);
    expect(panes).toEqual(["ll", "generated", "reference"]);
    expect(html).toContain(escapeHtml(record.ll_domain_text));
    expect(html).toContain(escapeHtml(record.reference_hl_problem_text));
  });

  it("escapes hostile text instead of rendering it", () => {
    const record = goldenRecord(0);
    record.ll_domain_text = `<script>alert("x")</script>`;
    const html = renderDetail(record, "dana", null);
    expect(html).not.toContain(`<script>alert`);
    expect(html).toContain("&lt;script&gt;");
  });

  it("shows a placeholder when nothing was extracted", () => {
    const record = goldenRecord(0);
    record.extraction = null;
    expect(renderDetail(record, "dana", null)).toContain("no usable output");
  });

  it("renders the plan steps", () => {
    const html = renderDetail(goldenRecord(0), "dana", null);
    expect(html).toContain("plan: 2 step(s)");
    expect(html).toContain("(book_accommodation hotel1 room1)");
  });

  it("enables pass/fail only while the checker owns the verdict", () => {
    const record = echoRecord();
    record.verdicts[0]!.resolved_by = "human:bo";
    const html = renderDetail(record, "dana", null);
    expect(html).toContain(`disabled title="already resolved by human:bo"`);
    const enabled = html.match(/data-action="resolve"(?![^>]*disabled)/g) ?? [];
    expect(enabled.length).toBe((record.verdicts.length - 1) * 2);
  });

  it("selecting an item marks its evidence tokens in the panes", () => {
    const html = renderDetail(echoRecord(), "dana", "merge-request-processing");
    expect(html).toContain("<mark>approveWorkShop</mark>");
    expect(html).not.toContain("<mark>actions</mark>");
    expect(html).toContain(`class="needs-human selected"`);
  });
});
