/** JSON shapes served by the review API. Field names mirror the wire format. */

export interface Score {
  cn: number;
  auc: number;
  hde: boolean;
  fd: boolean;
  val: boolean;
}

export type Outcome = "pass" | "fail" | "needs-human";

export interface VerdictRow {
  item: string;
  outcome: Outcome;
  evidence: string;
  resolved_by: string;
}

export interface RubricItemRef {
  id: string;
  kind: string;
}

export interface PlanEntry {
  attempted: boolean;
  found: boolean;
  length: number | null;
  steps: string[];
  reason: string;
}

export interface Extraction {
  domain_text: string;
  problem_text: string;
  rationale: string;
}

export interface StageError {
  stage: string;
  kind: string;
  detail: string;
}

export interface SyntaxFlag {
  value: boolean;
  reviewer: string;
}

export interface ModelResponse {
  content: string;
  model: string;
  latency_s: number;
}

/** One row of GET /runs. Scores and counts are server-computed. */
export interface RunRow {
  run_id: string;
  benchmark: string;
  category: string;
  shot: string;
  run_index: number;
  created_at: string;
  score: Score;
  needs_human: number;
  syntax_flag: boolean;
  error: string | null;
}

/** Full record of GET /runs/{id}; self-contained, no corpus access needed. */
export interface RunRecord {
  schema_version: number;
  run_id: string;
  benchmark: string;
  category: string;
  shot: string;
  run_index: number;
  template_version: string;
  model: string;
  bundle_hash: string;
  created_at: string;
  ll_domain_text: string;
  ll_problem_text: string;
  reference_hl_domain_text: string;
  reference_hl_problem_text: string;
  rubric_items: RubricItemRef[];
  response: ModelResponse | null;
  extraction: Extraction | null;
  warnings: string[];
  diagnostics: string[];
  parse_ok: boolean;
  plan: PlanEntry;
  error: StageError | null;
  bisim: null;
  verdicts: VerdictRow[];
  score: Score;
  completed_at: string;
  syntax_flag?: SyntaxFlag;
}

export interface VerdictPost {
  item: string;
  outcome: "pass" | "fail";
  reviewer: string;
}

export interface SyntaxFlagPost {
  reviewer: string;
  value: boolean;
}
