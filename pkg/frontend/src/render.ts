/** HTML renderers. Pure functions from server data to markup strings; the
 * browser glue swaps innerHTML and delegates clicks on data-action
 * attributes. PDDL and rationale text is escaped but never reformatted,
 * so the syntax errors reviewers must catch stay visible. */

import { canResolve, SORT_KEYS, type SortKey } from "./state.js";
import type { RunRecord, RunRow, VerdictRow } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

// Prose words that show up in checker evidence but are not identifiers.
const EVIDENCE_PROSE = new Set([
  "the", "and", "into", "now", "share", "span", "still", "kept", "with",
  "same", "action", "actions", "type", "types", "object", "objects",
  "predicate", "predicates", "parameter", "parameters", "signature",
  "signatures", "goal", "reachable", "step", "steps", "declared", "merged",
  "match", "matches", "expected", "carries", "survive", "survives", "full",
  "all", "source",
]);

/** Identifier-looking tokens of an evidence string, prose filtered out. */
export function evidenceTokens(evidence: string): string[] {
  const raw = evidence.match(/[A-Za-z][A-Za-z0-9_-]{2,}/g) ?? [];
  const seen = new Set<string>();
  const tokens: string[] = [];
  for (const token of raw) {
    if (EVIDENCE_PROSE.has(token.toLowerCase()) || seen.has(token)) continue;
    seen.add(token);
    tokens.push(token);
  }
  return tokens;
}

/** Escape text, wrapping whole-token occurrences in <mark>. */
export function highlightTokens(text: string, tokens: string[]): string {
  if (tokens.length === 0) return escapeHtml(text);
  const alternation = tokens.map(escapeRegExp).join("|");
  const pattern = new RegExp(`((?<![\\w-])(?:${alternation})(?![\\w-]))`, "g");
  return text
    .split(pattern)
    .map((part, i) => (i % 2 ? `<mark>${escapeHtml(part)}</mark>` : escapeHtml(part)))
    .join("");
}

export function renderBanner(message: string): string {
  return (
    `<div class="banner" role="alert">${escapeHtml(message)} ` +
    `<button data-action="retry">retry</button></div>`
  );
}

export function renderReviewerBox(reviewer: string): string {
  return (
    `<label class="reviewer">reviewer ` +
    `<input data-field="reviewer" value="${escapeHtml(reviewer)}" ` +
    `placeholder="your id"></label>`
  );
}

function fmtScore(value: number): string {
  return value.toFixed(2);
}

export function renderRunList(rows: RunRow[], sortKey: SortKey): string {
  if (rows.length === 0) {
    return `<p class="empty">no runs in the store yet</p>`;
  }
  const sorters = SORT_KEYS.map(
    (key) =>
      `<button data-action="sort" data-key="${key}"` +
      (key === sortKey ? ` class="active"` : ``) +
      `>${key}</button>`,
  ).join(" ");
  const body = rows
    .map((row) => {
      const cells = [
        escapeHtml(row.run_id),
        escapeHtml(row.benchmark),
        escapeHtml(row.category),
        escapeHtml(row.shot),
        String(row.run_index),
        fmtScore(row.score.cn),
        fmtScore(row.score.auc),
        String(row.needs_human),
        row.syntax_flag ? "flagged" : "",
        row.error === null ? "" : escapeHtml(row.error),
      ];
      return (
        `<tr data-action="open" data-run="${escapeHtml(row.run_id)}">` +
        cells.map((cell) => `<td>${cell}</td>`).join("") +
        `</tr>`
      );
    })
    .join("\n");
  return (
    `<div class="toolbar">sort: ${sorters} ` +
    `<button data-action="refresh">refresh</button></div>\n` +
    `<table class="runs"><thead><tr>` +
    `<th>run</th><th>benchmark</th><th>category</th><th>shot</th><th>#</th>` +
    `<th>cn</th><th>auc</th><th>unresolved</th><th>syntax</th><th>error</th>` +
    `</tr></thead><tbody>\n${body}\n</tbody></table>`
  );
}

function renderPane(name: string, title: string, texts: (string | null)[], tokens: string[]): string {
  const blocks = texts
    .map((text) =>
      text === null
        ? `<p class="missing">no usable output</p>`
        : `<pre>${highlightTokens(text, tokens)}</pre>`,
    )
    .join("\n");
  return `<div class="pane" data-pane="${name}"><h3>${escapeHtml(title)}</h3>\n${blocks}</div>`;
}

function renderVerdict(verdict: VerdictRow, selected: boolean): string {
  const editable = canResolve(verdict);
  const tooltip = editable ? "" : ` title="already resolved by ${escapeHtml(verdict.resolved_by)}"`;
  const disabled = editable ? "" : " disabled";
  const buttons = (["pass", "fail"] as const)
    .map(
      (outcome) =>
        `<button data-action="resolve" data-item="${escapeHtml(verdict.item)}" ` +
        `data-outcome="${outcome}"${disabled}${tooltip}>${outcome}</button>`,
    )
    .join(" ");
  const resolver = editable ? "" : ` <span class="resolver">${escapeHtml(verdict.resolved_by)}</span>`;
  return (
    `<li data-action="select" data-item="${escapeHtml(verdict.item)}" ` +
    `class="${verdict.outcome}${selected ? " selected" : ""}">` +
    `<span class="outcome">[${verdict.outcome}]</span> ` +
    `<span class="item">${escapeHtml(verdict.item)}</span>: ` +
    `<span class="evidence">${escapeHtml(verdict.evidence)}</span>` +
    `${resolver} ${buttons}</li>`
  );
}

function renderPlan(record: RunRecord): string {
  const plan = record.plan;
  if (!plan.attempted) return `<p class="plan">plan: not attempted</p>`;
  if (!plan.found) return `<p class="plan">plan: none (${escapeHtml(plan.reason)})</p>`;
  const steps = plan.steps.map((step) => `<li>${escapeHtml(step)}</li>`).join("");
  return `<p class="plan">plan: ${plan.length} step(s)</p><ol class="steps">${steps}</ol>`;
}

function renderNotes(label: string, notes: string[]): string {
  if (notes.length === 0) return "";
  const items = notes.map((note) => `<li>${escapeHtml(note)}</li>`).join("");
  return `<details class="notes" open><summary>${label}</summary><ul>${items}</ul></details>`;
}

export function renderDetail(
  record: RunRecord,
  reviewer: string,
  selectedItem: string | null,
): string {
  const selected = record.verdicts.find((v) => v.item === selectedItem) ?? null;
  const tokens = selected ? evidenceTokens(selected.evidence) : [];
  const flagged = Boolean(record.syntax_flag?.value);

  const header =
    `<div class="toolbar">` +
    `<button data-action="back">back</button> ` +
    `<button data-action="refresh">refresh</button> ` +
    `<span class="title">${escapeHtml(record.benchmark)} ` +
    `${escapeHtml(record.shot)}-shot run ${record.run_index} ` +
    `(${escapeHtml(record.run_id)})</span> ` +
    `<button data-action="flag" data-value="${flagged ? "false" : "true"}">` +
    `${flagged ? "clear syntax flag" : "flag syntax repair"}</button>` +
    `</div>`;

  const errorBlock = record.error
    ? `<p class="stage-error">${escapeHtml(record.error.stage)} failed: ` +
      `${escapeHtml(record.error.kind)}: ${escapeHtml(record.error.detail)}</p>`
    : "";

  const panes =
    `<section class="panes">\n` +
    renderPane("ll", "low-level", [record.ll_domain_text, record.ll_problem_text], tokens) +
    "\n" +
    renderPane(
      "generated",
      "generated",
      record.extraction
        ? [record.extraction.domain_text, record.extraction.problem_text]
        : [null],
      tokens,
    ) +
    "\n" +
    renderPane(
      "reference",
      "reference",
      [record.reference_hl_domain_text, record.reference_hl_problem_text],
      tokens,
    ) +
    `\n</section>`;

  const rationale = record.extraction
    ? `<details class="rationale"><summary>rationale</summary>` +
      `<pre>${escapeHtml(record.extraction.rationale)}</pre></details>`
    : "";

  const rubric =
    `<ul class="rubric">\n` +
    record.verdicts.map((v) => renderVerdict(v, v.item === selectedItem)).join("\n") +
    `\n</ul>`;

  return [
    header,
    renderReviewerBox(reviewer),
    errorBlock,
    renderNotes("warnings", record.warnings),
    renderNotes("diagnostics", record.diagnostics),
    panes,
    rationale,
    renderPlan(record),
    rubric,
  ]
    .filter((part) => part !== "")
    .join("\n");
}
