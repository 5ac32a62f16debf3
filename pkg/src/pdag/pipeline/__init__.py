"""End-to-end batch pipeline: manifest, runs, storage, review, reporting."""

from .golden import golden_content, make_golden_fixtures
from .manifest import (
    Artifacts,
    BenchmarkEntry,
    Manifest,
    ManifestError,
    default_manifest_path,
    load_artifacts,
    load_manifest,
)
from .reporting import ReportError, ReportResult, build_report
from .review import create_app
from .runner import Skipped, Verified, eval_reference, run_benchmark, run_id_for, verify
from .store import RUN_SCHEMA_VERSION, RunExistsError, RunStore, StoreError

__all__ = [
    "Artifacts",
    "BenchmarkEntry",
    "Manifest",
    "ManifestError",
    "RUN_SCHEMA_VERSION",
    "ReportError",
    "ReportResult",
    "RunExistsError",
    "RunStore",
    "Skipped",
    "StoreError",
    "Verified",
    "build_report",
    "create_app",
    "default_manifest_path",
    "eval_reference",
    "golden_content",
    "load_artifacts",
    "load_manifest",
    "make_golden_fixtures",
    "run_benchmark",
    "run_id_for",
    "verify",
]
