"""Batch orchestration: prompt, complete, extract, parse, plan, judge, persist.

Each run is isolated. A refused completion, a response with no PDDL in
it, or a domain that will not parse all land in the run record as data
and the batch moves on to the next run. Only configuration mistakes
(unknown transport, unsupported shot, missing store) abort up front.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone

from ..gateway import (
    GatewayClient,
    GatewayError,
    LlmConfig,
    MissingDomain,
    MissingProblem,
    UnbalancedExpression,
    bundle_hash,
    extract_pddl,
)
from ..pddl import parse_domain_with_diagnostics, parse_problem_with_diagnostics
from ..planning import GroundingLimitExceeded, Plan, Unsolvable, ground, solve
from ..prompts import Shot, assemble
from ..scoring import check_rubric, failed_verdicts, score
from ..verifier import BisimReport, Mapping, check_bisimulation, check_instance
from .manifest import Artifacts, BenchmarkEntry, Manifest, load_artifacts
from .store import RUN_SCHEMA_VERSION, RunStore


def run_id_for(benchmark: str, shot: Shot, index: int, template_version: str, model: str) -> str:
    """Stable identifier so re-runs collide instead of multiplying."""
    key = json.dumps([benchmark, shot.value, index, template_version, model])
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _plan_entry(attempted: bool, found: bool, length: int | None, steps: list[str], reason: str) -> dict:
    return {
        "attempted": attempted,
        "found": found,
        "length": length,
        "steps": steps,
        "reason": reason,
    }


def _solve_generated(domain, problem) -> dict:
    try:
        task = ground(domain, problem)
    except GroundingLimitExceeded as err:
        return _plan_entry(True, False, None, [], f"does not ground: {err}")
    result = solve(task, strategy="bfs")
    if isinstance(result, Plan):
        steps = [str(action.signature) for action in result.steps]
        return _plan_entry(True, True, len(steps), steps, "")
    if isinstance(result, Unsolvable):
        return _plan_entry(True, False, None, [], "goal unreachable")
    return _plan_entry(True, False, None, [], f"search gave up: {result.reason}")


def run_benchmark(
    manifest: Manifest,
    entry: BenchmarkEntry,
    shot: Shot,
    *,
    n_runs: int,
    config: LlmConfig,
    store: RunStore,
    transport: str = "replay",
    force: bool = False,
    http_transport=None,
) -> list[dict]:
    """Execute n_runs completions of one benchmark and persist each record."""
    if shot not in entry.supported_shots:
        raise ValueError(
            f"benchmark {entry.id!r} does not support shot {shot.value};"
            f" it supports {', '.join(s.value for s in entry.supported_shots)}"
        )
    store.ensure_layout()
    artifacts = load_artifacts(manifest, entry)
    client = GatewayClient(
        config, store.fixtures_dir, transport=transport, http_transport=http_transport
    )
    records = []
    for index in range(n_runs):
        record = _one_run(entry, artifacts, shot, index, config, client)
        store.write_run(record, force=force)
        records.append(record)
    return records


def _one_run(
    entry: BenchmarkEntry,
    artifacts: Artifacts,
    shot: Shot,
    index: int,
    config: LlmConfig,
    client: GatewayClient,
) -> dict:
    rubric = artifacts.rubric
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        bundle = assemble(
            entry.category,
            shot,
            description=entry.description,
            domain_text=artifacts.ll_domain_text,
            problem_text=artifacts.ll_problem_text,
            purpose=entry.purpose,
            topic=entry.id,
        )
    record: dict = {
        "schema_version": RUN_SCHEMA_VERSION,
        "run_id": run_id_for(entry.id, shot, index, bundle.template_version, config.model),
        "benchmark": entry.id,
        "category": entry.category.value,
        "shot": shot.value,
        "run_index": index,
        "template_version": bundle.template_version,
        "model": config.model,
        "bundle_hash": bundle_hash(bundle),
        "created_at": _now(),
        "ll_domain_text": artifacts.ll_domain_text,
        "ll_problem_text": artifacts.ll_problem_text,
        "reference_hl_domain_text": artifacts.hl_domain_text,
        "reference_hl_problem_text": artifacts.hl_problem_text,
        "rubric_items": [{"id": item.id, "kind": item.kind} for item in rubric.items],
        "response": None,
        "extraction": None,
        "warnings": [str(w.message) for w in caught],
        "diagnostics": [],
        "parse_ok": False,
        "plan": _plan_entry(False, False, None, [], "not attempted"),
        "error": None,
        "bisim": None,
    }

    def fail(stage: str, kind: str, detail: str, reason: str) -> dict:
        record["error"] = {"stage": stage, "kind": kind, "detail": detail}
        record["verdicts"] = [v.to_json() for v in failed_verdicts(rubric, reason)]
        record["score"] = score(
            rubric,
            failed_verdicts(rubric, reason),
            parse_ok=False,
            plan_found=False,
        ).to_json()
        record["completed_at"] = _now()
        return record

    try:
        response = client.complete(bundle)
    except GatewayError as err:
        return fail("complete", type(err).__name__, str(err), "no model response")
    record["response"] = {
        "content": response.content,
        "model": response.model,
        "latency_s": response.latency_s,
    }

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            extraction = extract_pddl(response.content)
    except (MissingDomain, MissingProblem, UnbalancedExpression) as err:
        return fail("extract", type(err).__name__, str(err), "response carries no usable listing")
    record["warnings"].extend(str(w.message) for w in caught)
    record["extraction"] = {
        "domain_text": extraction.domain_text,
        "problem_text": extraction.problem_text,
        "rationale": extraction.rationale,
    }

    domain, domain_diags = parse_domain_with_diagnostics(extraction.domain_text)
    record["diagnostics"] = [str(d) for d in domain_diags]
    problem = None
    if domain is not None:
        problem, problem_diags = parse_problem_with_diagnostics(extraction.problem_text, domain)
        record["diagnostics"].extend(str(d) for d in problem_diags)
    if domain is None or problem is None:
        record["verdicts"] = [
            v.to_json() for v in failed_verdicts(rubric, "output did not parse")
        ]
        record["score"] = score(
            rubric,
            failed_verdicts(rubric, "output did not parse"),
            parse_ok=False,
            plan_found=False,
        ).to_json()
        record["completed_at"] = _now()
        return record
    record["parse_ok"] = True

    record["plan"] = _solve_generated(domain, problem)
    verdicts = check_rubric(
        domain, problem, artifacts.ll_domain, artifacts.ll_problem, rubric
    )
    record["verdicts"] = [v.to_json() for v in verdicts]
    record["score"] = score(
        rubric, verdicts, parse_ok=True, plan_found=record["plan"]["found"]
    ).to_json()
    record["completed_at"] = _now()
    return record


@dataclass(frozen=True)
class Skipped:
    benchmark: str
    reason: str


@dataclass(frozen=True)
class Verified:
    benchmark: str
    report: BisimReport
    mapping: Mapping
    instance_problems: list[str]


def verify(manifest: Manifest, entry: BenchmarkEntry) -> Verified | Skipped:
    """Check the reference abstraction against its refinement mapping."""
    artifacts = load_artifacts(manifest, entry)
    if artifacts.mapping is None:
        return Skipped(entry.id, "no refinement mapping is shipped for this benchmark")
    problems = check_instance(
        artifacts.mapping,
        artifacts.hl_domain,
        artifacts.ll_domain,
        artifacts.hl_problem,
        artifacts.ll_problem,
    )
    hl_task = ground(artifacts.hl_domain, artifacts.hl_problem)
    ll_task = ground(artifacts.ll_domain, artifacts.ll_problem)
    report = check_bisimulation(artifacts.mapping, hl_task, ll_task)
    return Verified(entry.id, report, artifacts.mapping, problems)


def eval_reference(manifest: Manifest, entry: BenchmarkEntry) -> list:
    """Judge the shipped reference solution against its own rubric.

    A benchmark whose reference does not pass every rubric item is
    miswired; this is the authoring self-check.
    """
    artifacts = load_artifacts(manifest, entry)
    return check_rubric(
        artifacts.hl_domain,
        artifacts.hl_problem,
        artifacts.ll_domain,
        artifacts.ll_problem,
        artifacts.rubric,
    )
