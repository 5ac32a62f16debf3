/** Thin client for the review API. Every number shown anywhere in the
 * console comes out of these responses; nothing is recomputed here. */

import type { RunRecord, RunRow, SyntaxFlagPost, VerdictPost } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

/** Error bodies are {"detail": string} or {"detail": [{msg}, ...]}. */
function detailOf(body: unknown, fallback: string): string {
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (typeof detail === "string") return detail;
    if (Array.isArray(detail)) {
      const msgs = detail
        .map((entry) =>
          entry && typeof entry === "object" && "msg" in entry
            ? String((entry as { msg: unknown }).msg)
            : String(entry),
        )
        .join("; ");
      if (msgs) return msgs;
    }
  }
  return fallback;
}

export class ReviewApi {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch {
      throw new ApiError(0, "cannot reach the review service");
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, detailOf(body, `HTTP ${response.status}`));
    }
    return body;
  }

  private post(path: string, payload: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async listRuns(): Promise<RunRow[]> {
    return (await this.request("/runs")) as RunRow[];
  }

  async getRun(runId: string): Promise<RunRecord> {
    return (await this.request(`/runs/${encodeURIComponent(runId)}`)) as RunRecord;
  }

  async postVerdict(runId: string, post: VerdictPost): Promise<RunRecord> {
    return (await this.post(
      `/runs/${encodeURIComponent(runId)}/verdicts`,
      post,
    )) as RunRecord;
  }

  async postSyntaxFlag(runId: string, post: SyntaxFlagPost): Promise<RunRecord> {
    return (await this.post(
      `/runs/${encodeURIComponent(runId)}/syntax-flag`,
      post,
    )) as RunRecord;
  }
}
