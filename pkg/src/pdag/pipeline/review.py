"""HTTP API for human review of stored runs.

The store is the only state; every request re-reads from disk, so the
server can be killed and restarted without losing a verdict. Verdict
writes are the one mutation the system allows after a run: an item the
checker could not settle (or settled automatically) may be resolved by
a human exactly once, after which it is frozen.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from ..scoring import NEEDS_HUMAN, Rubric, RubricItem, Verdict, score
from .store import RunStore


class VerdictPost(BaseModel):
    item: str
    outcome: Literal["pass", "fail"]
    reviewer: str


class SyntaxFlagPost(BaseModel):
    reviewer: str
    value: bool = True


def _rubric_of(record: dict) -> Rubric:
    items = tuple(
        RubricItem(id=item["id"], kind=item["kind"]) for item in record["rubric_items"]
    )
    return Rubric(benchmark=record["benchmark"], items=items)


def _rescore(record: dict) -> None:
    verdicts = [Verdict.from_json(v) for v in record["verdicts"]]
    record["score"] = score(
        _rubric_of(record),
        verdicts,
        parse_ok=record["parse_ok"],
        plan_found=record["plan"]["found"],
        human_syntax_flag=bool(record.get("syntax_flag", {}).get("value")),
    ).to_json()


def _row(record: dict) -> dict:
    unresolved = sum(1 for v in record["verdicts"] if v["outcome"] == NEEDS_HUMAN)
    return {
        "run_id": record["run_id"],
        "benchmark": record["benchmark"],
        "category": record["category"],
        "shot": record["shot"],
        "run_index": record["run_index"],
        "created_at": record["created_at"],
        "score": record["score"],
        "needs_human": unresolved,
        "syntax_flag": bool(record.get("syntax_flag", {}).get("value")),
        "error": record["error"]["kind"] if record["error"] else None,
    }


def create_app(store: RunStore) -> FastAPI:
    app = FastAPI(title="abstraction review")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def load(run_id: str) -> dict:
        record = store.read_run(run_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        return record

    @app.get("/runs")
    def list_runs() -> list[dict]:
        return [_row(record) for record in store.list_runs()]

    @app.get("/runs/{run_id}")
    def run_detail(run_id: str) -> dict:
        return load(run_id)

    @app.post("/runs/{run_id}/verdicts")
    def post_verdict(run_id: str, body: VerdictPost) -> dict:
        record = load(run_id)
        for verdict in record["verdicts"]:
            if verdict["item"] == body.item:
                break
        else:
            raise HTTPException(
                status_code=404, detail=f"run has no rubric item {body.item!r}"
            )
        if verdict["resolved_by"] != "auto":
            raise HTTPException(
                status_code=409,
                detail=f"item {body.item!r} was already resolved by {verdict['resolved_by']}",
            )
        verdict["outcome"] = body.outcome
        verdict["resolved_by"] = f"human:{body.reviewer}"
        _rescore(record)
        store.update_run(record)
        return record

    @app.post("/runs/{run_id}/syntax-flag")
    def post_syntax_flag(run_id: str, body: SyntaxFlagPost) -> dict:
        record = load(run_id)
        record["syntax_flag"] = {"value": body.value, "reviewer": body.reviewer}
        _rescore(record)
        store.update_run(record)
        return record

    return app
