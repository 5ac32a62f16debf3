/** End-to-end console flows against the twin: the golden batch plus one
 * run whose rubric needs a human. The same store semantics are pinned
 * against the real server by the backend's own review tests. */

import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { Console } from "../src/console.js";
import { seededStore, twinFetch, type TwinStore } from "./twin.js";

function consoleOver(store: TwinStore = seededStore()): Console {
  return new Console(new ReviewApi("http://twin", twinFetch(store)));
}

describe("browsing", () => {
  it("lists the golden batch plus the injected run", async () => {
    const con = consoleOver();
    await con.refresh();
    const html = con.html();
    expect(html.match(/data-action="open"/g)).toHaveLength(6);
    expect(html).toContain(`data-run="echo-education01"`);
  });

  it("shows the empty state on an empty store", async () => {
    const con = consoleOver({ records: new Map() });
    await con.refresh();
    expect(con.html()).toContain("no runs in the store yet");
  });

  it("a dead service gives a banner and no stale rows", async () => {
    const store = seededStore();
    let alive = true;
    const flaky = twinFetch(store);
    const api = new ReviewApi("http://twin", (input, init) => {
      if (!alive) throw new TypeError("fetch failed");
      return flaky(input, init);
    });
    const con = new Console(api);
    await con.refresh();
    expect(con.rows).toHaveLength(6);
    alive = false;
    await con.refresh();
    expect(con.rows).toHaveLength(0);
    expect(con.html()).toContain("cannot reach the review service");
    expect(con.html()).toContain(`data-action="retry"`);
    alive = true;
    await con.retry();
    expect(con.rows).toHaveLength(6);
    expect(con.banner).toBeNull();
  });

  it("sorting reorders without refetching", async () => {
    const con = consoleOver();
    await con.refresh();
    con.setSort("unresolved");
    const firstRow = con.html().match(/data-run="([^"]+)"/);
    expect(firstRow?.[1]).toBe("echo-education01");
  });

  it("opening an unknown run surfaces the server detail", async () => {
    const con = consoleOver();
    await con.refresh();
    await con.open("nope");
    expect(con.view).toBe("list");
    expect(con.html()).toContain("unknown run nope");
  });
});

describe("resolving", () => {
  it("requires a reviewer id before posting", async () => {
    const store = seededStore();
    const con = consoleOver(store);
    await con.open("echo-education01");
    await con.resolve("merge-request-processing", "pass");
    expect(con.html()).toContain("enter a reviewer id first");
    const untouched = store.records.get("echo-education01")!;
    expect(untouched.verdicts[0]!.resolved_by).toBe("auto");
  });

  it("updates cn server-side and in the refreshed list", async () => {
    const con = consoleOver();
    con.setReviewer("dana");
    await con.refresh();
    await con.open("echo-education01");
    await con.resolve("merge-request-processing", "pass");
    expect(con.record!.score.cn).toBeCloseTo(0.25, 10);
    expect(con.record!.verdicts[0]!.resolved_by).toBe("human:dana");

    await con.back();
    expect(con.view).toBe("list");
    const echoRow = con.rows.find((r) => r.benchmark === "education01")!;
    expect(echoRow.score.cn).toBeCloseTo(0.25, 10);
    expect(echoRow.needs_human).toBe(1);
    expect(con.html()).toContain("<td>0.25</td>");
  });

  it("surfaces a second override as the server's 409 and freezes the buttons", async () => {
    const con = consoleOver();
    con.setReviewer("dana");
    await con.open("echo-education01");
    await con.resolve("merge-request-processing", "pass");

    con.setReviewer("eve");
    await con.resolve("merge-request-processing", "fail");
    expect(con.banner).toBe(
      "item 'merge-request-processing' was already resolved by human:dana",
    );
    const html = con.html();
    expect(html).toContain("was already resolved by human:dana");
    expect(html).toContain(`disabled title="already resolved by human:dana"`);
    expect(con.record!.verdicts[0]!.outcome).toBe("pass");
  });
});

describe("syntax flag", () => {
  it("round-trips through the server and shows up in the list", async () => {
    const con = consoleOver();
    con.setReviewer("dana");
    await con.open("golden-0");
    expect(con.html()).toContain("flag syntax repair");

    await con.flagSyntax(true);
    expect(con.record!.score.hde).toBe(true);
    expect(con.record!.score.cn).toBe(1);
    expect(con.html()).toContain("clear syntax flag");

    await con.back();
    const flagged = con.rows.find((r) => r.run_id === "golden-0")!;
    expect(flagged.syntax_flag).toBe(true);
    expect(flagged.score.hde).toBe(true);

    await con.open("golden-0");
    await con.flagSyntax(false);
    expect(con.record!.score.hde).toBe(false);
  });
});

describe("selection", () => {
  it("toggles evidence highlighting", async () => {
    const con = consoleOver();
    con.setReviewer("dana");
    await con.open("echo-education01");
    con.select("merge-request-processing");
    expect(con.html()).toContain("<mark>approveWorkShop</mark>");
    con.select("merge-request-processing");
    expect(con.html()).not.toContain("<mark>");
  });
});
