import { describe, expect, it } from "vitest";

import { ApiError, ReviewApi } from "../src/api.js";
import { seededStore, twinFetch } from "./twin.js";

function apiOver(store = seededStore()): ReviewApi {
  return new ReviewApi("http://twin", twinFetch(store));
}

describe("listRuns", () => {
  it("returns server rows in server order", async () => {
    const rows = await apiOver().listRuns();
    expect(rows).toHaveLength(6);
    expect(rows[0]!.benchmark).toBe("education01");
    expect(rows[0]!.needs_human).toBe(2);
    expect(rows.slice(1).map((r) => r.run_index)).toEqual([0, 1, 2, 3, 4]);
    for (const row of rows.slice(1)) {
      expect(row.score.cn).toBe(1);
      expect(row.score.auc).toBe(1);
      expect(row.needs_human).toBe(0);
      expect(row.syntax_flag).toBe(false);
      expect(row.error).toBeNull();
    }
  });
});

describe("getRun", () => {
  it("serves the full record", async () => {
    const record = await apiOver().getRun("golden-3");
    expect(record.run_index).toBe(3);
    expect(record.ll_domain_text).toContain("(define (domain");
    expect(record.verdicts).toHaveLength(record.rubric_items.length);
  });

  it("maps 404 onto ApiError with the server detail", async () => {
    const err = await apiOver().getRun("nope").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).detail).toBe("unknown run nope");
  });
});

describe("postVerdict", () => {
  it("returns the rescored record", async () => {
    const api = apiOver();
    const record = await api.postVerdict("echo-education01", {
      item: "merge-request-processing",
      outcome: "pass",
      reviewer: "dana",
    });
    const verdict = record.verdicts.find((v) => v.item === "merge-request-processing");
    expect(verdict?.resolved_by).toBe("human:dana");
    expect(record.score.cn).toBeCloseTo(0.25, 10);
  });

  it("joins validation messages from a 422", async () => {
    const err = await apiOver()
      .postVerdict("echo-education01", {
        item: "merge-request-processing",
        outcome: "maybe" as never,
        reviewer: "dana",
      })
      .catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).detail).toContain("'pass' or 'fail'");
  });
});

describe("transport failures", () => {
  it("wraps a thrown fetch as status 0", async () => {
    const api = new ReviewApi("http://down", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await api.listRuns().catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(0);
    expect((err as ApiError).detail).toBe("cannot reach the review service");
  });

  it("falls back to the status code when the error body is not JSON", async () => {
    const api = new ReviewApi("http://odd", async () => new Response("boom", { status: 500 }));
    const err = await api.listRuns().catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(500);
    expect((err as ApiError).detail).toBe("HTTP 500");
  });
});
