"""Benchmark catalog.

The manifest is a JSON file living next to the corpus it describes.
Ready entries carry everything a run needs (concrete pair, purpose,
reference solution, rubric, optional refinement mapping); placeholder
entries reserve a benchmark name and category until someone authors
the files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..pddl import DomainAst, ParseError, ProblemAst, parse_domain, parse_problem
from ..prompts import Category, Shot, supported_combinations
from ..scoring import Rubric, RubricError, load_rubric, validate_rubric
from ..verifier import Mapping, MappingError, parse_mapping

SCHEMA_VERSION = "1"


class ManifestError(Exception):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


@dataclass(frozen=True)
class BenchmarkEntry:
    id: str
    category: Category
    status: str
    supported_shots: tuple[Shot, ...]
    description: str = ""
    purpose: str = ""
    ll_domain: str = ""
    ll_problem: str = ""
    reference_hl_domain: str = ""
    reference_hl_problem: str = ""
    rubric: str = ""
    mapping: str | None = None
    notes: str = ""

    @property
    def ready(self) -> bool:
        return self.status == "ready"


@dataclass(frozen=True)
class Manifest:
    version: str
    root: Path
    entries: tuple[BenchmarkEntry, ...]

    def entry(self, benchmark_id: str) -> BenchmarkEntry | None:
        for entry in self.entries:
            if entry.id == benchmark_id:
                return entry
        return None

    def ready_entries(self) -> list[BenchmarkEntry]:
        return [entry for entry in self.entries if entry.ready]


@dataclass(frozen=True)
class Artifacts:
    """Parsed sources of one ready benchmark."""

    ll_domain_text: str
    ll_problem_text: str
    hl_domain_text: str
    hl_problem_text: str
    ll_domain: DomainAst
    ll_problem: ProblemAst
    hl_domain: DomainAst
    hl_problem: ProblemAst
    rubric: Rubric
    mapping: Mapping | None


def default_manifest_path() -> Path:
    return Path(__file__).resolve().parent.parent / "corpus" / "manifest.json"


_READY_FIELDS = (
    "description",
    "purpose",
    "ll_domain",
    "ll_problem",
    "reference_hl_domain",
    "reference_hl_problem",
    "rubric",
)


def _parse_entry(raw: dict, where: str, problems: list[str]) -> BenchmarkEntry | None:
    entry_id = raw.get("id")
    if not isinstance(entry_id, str) or not entry_id:
        problems.append(f"{where}: entry has no id")
        return None
    try:
        category = Category(raw.get("category"))
    except ValueError:
        problems.append(f"{where}: entry {entry_id!r} has unknown category {raw.get('category')!r}")
        return None
    status = raw.get("status")
    if status not in ("ready", "placeholder"):
        problems.append(f"{where}: entry {entry_id!r} has unknown status {status!r}")
        return None
    shots = []
    for name in raw.get("supported_shots", []):
        try:
            shot = Shot(name)
        except ValueError:
            problems.append(f"{where}: entry {entry_id!r} has unknown shot {name!r}")
            continue
        if (category, shot) not in supported_combinations():
            problems.append(
                f"{where}: entry {entry_id!r} claims unsupported combination "
                f"{category.value}/{shot.value}"
            )
            continue
        shots.append(shot)
    if not shots:
        problems.append(f"{where}: entry {entry_id!r} supports no shot")
        return None
    if status == "ready":
        missing = [f for f in _READY_FIELDS if not raw.get(f)]
        if missing:
            problems.append(
                f"{where}: ready entry {entry_id!r} is missing {', '.join(missing)}"
            )
            return None
    return BenchmarkEntry(
        id=entry_id,
        category=category,
        status=status,
        supported_shots=tuple(shots),
        description=raw.get("description", ""),
        purpose=raw.get("purpose", ""),
        ll_domain=raw.get("ll_domain", ""),
        ll_problem=raw.get("ll_problem", ""),
        reference_hl_domain=raw.get("reference_hl_domain", ""),
        reference_hl_problem=raw.get("reference_hl_problem", ""),
        rubric=raw.get("rubric", ""),
        mapping=raw.get("mapping") or None,
        notes=raw.get("notes", ""),
    )


def _check_entry_files(entry: BenchmarkEntry, root: Path, problems: list[str]) -> None:
    def read(rel: str, what: str) -> str | None:
        path = root / rel
        if not path.is_file():
            problems.append(f"entry {entry.id!r}: {what} file {rel!r} does not exist")
            return None
        return path.read_text(encoding="utf-8")

    texts = {}
    for field_name, what in (
        ("ll_domain", "concrete domain"),
        ("ll_problem", "concrete problem"),
        ("reference_hl_domain", "reference domain"),
        ("reference_hl_problem", "reference problem"),
    ):
        texts[field_name] = read(getattr(entry, field_name), what)
    rubric_text = read(entry.rubric, "rubric")
    mapping_text = read(entry.mapping, "mapping") if entry.mapping else None

    def parse_pair(domain_key: str, problem_key: str):
        if texts[domain_key] is None or texts[problem_key] is None:
            return None, None
        try:
            domain = parse_domain(texts[domain_key])
            return domain, parse_problem(texts[problem_key], domain)
        except ParseError as err:
            problems.append(f"entry {entry.id!r}: {err}")
            return None, None

    ll_domain, ll_problem = parse_pair("ll_domain", "ll_problem")
    hl_domain, _ = parse_pair("reference_hl_domain", "reference_hl_problem")

    rubric = None
    if rubric_text is not None:
        try:
            rubric = load_rubric(rubric_text, where=entry.rubric)
        except RubricError as err:
            problems.extend(f"entry {entry.id!r}: {p}" for p in err.problems)
    if rubric is not None:
        if rubric.benchmark != entry.id:
            problems.append(
                f"entry {entry.id!r}: rubric names benchmark {rubric.benchmark!r}"
            )
        if ll_domain is not None and ll_problem is not None:
            problems.extend(
                f"entry {entry.id!r}: {p}"
                for p in validate_rubric(rubric, ll_domain, ll_problem)
            )
    if mapping_text is not None and hl_domain is not None and ll_domain is not None:
        try:
            parse_mapping(mapping_text, hl_domain, ll_domain, source=entry.mapping)
        except MappingError as err:
            problems.extend(f"entry {entry.id!r}: {p}" for p in err.problems)


def load_manifest(path: str | Path) -> Manifest:
    """Read and validate a manifest; every problem is reported at once."""
    path = Path(path)
    problems: list[str] = []
    where = path.name
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError([f"{path}: no such file"]) from None
    except json.JSONDecodeError as err:
        raise ManifestError([f"{where}: not valid JSON: {err}"]) from err
    if doc.get("schema_version") != SCHEMA_VERSION:
        problems.append(f"{where}: schema_version must be {SCHEMA_VERSION!r}")
    version = doc.get("version")
    if not isinstance(version, str) or not version:
        problems.append(f"{where}: missing version")
        version = ""
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list) or not raw_entries:
        problems.append(f"{where}: no entries")
        raise ManifestError(problems)

    entries: list[BenchmarkEntry] = []
    for raw in raw_entries:
        entry = _parse_entry(raw, where, problems)
        if entry is not None:
            entries.append(entry)

    ids = [entry.id for entry in entries]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        problems.append(f"{where}: duplicate entry id {dup!r}")

    covered = {entry.category for entry in entries}
    for category in Category:
        if category not in covered:
            problems.append(f"{where}: category {category.value} has no entries")

    root = path.parent
    for entry in entries:
        if entry.ready:
            _check_entry_files(entry, root, problems)

    if problems:
        raise ManifestError(problems)
    return Manifest(version=version, root=root, entries=tuple(entries))


def load_artifacts(manifest: Manifest, entry: BenchmarkEntry) -> Artifacts:
    """Re-read and parse one ready entry's files.

    The manifest was validated on load, so failures here mean the files
    changed underneath us; let the parse errors propagate.
    """
    if not entry.ready:
        raise ValueError(f"benchmark {entry.id!r} has no shipped files")
    root = manifest.root
    ll_domain_text = (root / entry.ll_domain).read_text(encoding="utf-8")
    ll_problem_text = (root / entry.ll_problem).read_text(encoding="utf-8")
    hl_domain_text = (root / entry.reference_hl_domain).read_text(encoding="utf-8")
    hl_problem_text = (root / entry.reference_hl_problem).read_text(encoding="utf-8")
    ll_domain = parse_domain(ll_domain_text)
    ll_problem = parse_problem(ll_problem_text, ll_domain)
    hl_domain = parse_domain(hl_domain_text)
    hl_problem = parse_problem(hl_problem_text, hl_domain)
    rubric = load_rubric((root / entry.rubric).read_text(encoding="utf-8"))
    mapping = None
    if entry.mapping:
        mapping = parse_mapping(
            (root / entry.mapping).read_text(encoding="utf-8"),
            hl_domain,
            ll_domain,
            source=entry.mapping,
        )
    return Artifacts(
        ll_domain_text=ll_domain_text,
        ll_problem_text=ll_problem_text,
        hl_domain_text=hl_domain_text,
        hl_problem_text=hl_problem_text,
        ll_domain=ll_domain,
        ll_problem=ll_problem,
        hl_domain=hl_domain,
        hl_problem=hl_problem,
        rubric=rubric,
        mapping=mapping,
    )
