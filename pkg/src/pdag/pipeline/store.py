"""Filesystem layout for run records, reports, and response fixtures.

Everything is plain JSON under one root directory so a batch can be
inspected with nothing but a text editor. Writes go through a temp
file and an atomic rename: a crash mid-write leaves either the old
record or nothing, never a torn file.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

RUN_SCHEMA_VERSION = 1


class StoreError(Exception):
    pass


class RunExistsError(StoreError):
    def __init__(self, run_id: str):
        self.run_id = run_id
        super().__init__(f"run {run_id} already exists")


class RunStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.runs_dir = self.root / "runs"
        self.reports_dir = self.root / "reports"
        self.fixtures_dir = self.root / "fixtures"

    def ensure_layout(self) -> None:
        for directory in (self.runs_dir, self.reports_dir, self.fixtures_dir):
            directory.mkdir(parents=True, exist_ok=True)

    def run_path(self, benchmark: str, run_id: str) -> Path:
        return self.runs_dir / benchmark / f"{run_id}.json"

    def write_run(self, record: dict, *, force: bool = False) -> Path:
        """Persist one run record atomically; refuse silent overwrites."""
        benchmark = record["benchmark"]
        run_id = record["run_id"]
        if record.get("schema_version") != RUN_SCHEMA_VERSION:
            raise StoreError(f"run {run_id} has no schema_version")
        path = self.run_path(benchmark, run_id)
        if path.exists() and not force:
            raise RunExistsError(run_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(payload, encoding="utf-8")
        os.replace(tmp, path)
        return path

    def update_run(self, record: dict) -> Path:
        return self.write_run(record, force=True)

    def find_run(self, run_id: str) -> Path | None:
        if not self.runs_dir.is_dir():
            return None
        for path in sorted(self.runs_dir.glob(f"*/{run_id}.json")):
            return path
        return None

    def read_run(self, run_id: str) -> dict | None:
        path = self.find_run(run_id)
        if path is None:
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def list_runs(self, benchmark: str | None = None) -> list[dict]:
        """All stored records, ordered by benchmark then run index."""
        if not self.runs_dir.is_dir():
            return []
        records = []
        pattern = f"{benchmark}/*.json" if benchmark else "*/*.json"
        for path in sorted(self.runs_dir.glob(pattern)):
            records.append(json.loads(path.read_text(encoding="utf-8")))
        records.sort(key=lambda r: (r["benchmark"], r.get("run_index", 0), r["run_id"]))
        return records
