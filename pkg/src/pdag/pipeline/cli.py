"""Command line front end.

Exit codes: 0 clean, 1 per-run failures or a negative verdict,
2 configuration or usage errors.
"""

from __future__ import annotations

from pathlib import Path

import click

from ..gateway import LlmConfig
from ..pddl import ParseError, parse_domain, parse_domain_with_diagnostics, parse_problem, parse_problem_with_diagnostics
from ..planning import GroundingLimitExceeded, Plan, Unsolvable, format_plan, ground, solve
from ..prompts import Shot
from ..scoring import PASS
from ..verifier import MappingError, soundness_summary
from .golden import make_golden_fixtures
from .manifest import Manifest, ManifestError, default_manifest_path, load_manifest
from .reporting import ReportError, build_report
from .runner import Skipped, eval_reference, run_benchmark, verify
from .store import RunExistsError, RunStore


class ConfigError(click.ClickException):
    exit_code = 2


_SHOTS = {"zero": Shot.ZERO, "one": Shot.ONE}


@click.group()
@click.option(
    "--store",
    "store_root",
    envvar="PDAG_STORE",
    default=".pdag_store",
    show_default=True,
    type=click.Path(path_type=Path),
    help="root directory for runs, reports, and fixtures",
)
@click.option(
    "--manifest",
    "manifest_path",
    type=click.Path(path_type=Path),
    default=None,
    help="benchmark manifest (defaults to the shipped corpus)",
)
@click.pass_context
def main(ctx: click.Context, store_root: Path, manifest_path: Path | None) -> None:
    """Generate, judge, and review planning domain abstractions."""
    ctx.obj = {
        "store": RunStore(store_root),
        "manifest_path": manifest_path or default_manifest_path(),
    }


def _manifest(ctx: click.Context) -> Manifest:
    try:
        return load_manifest(ctx.obj["manifest_path"])
    except ManifestError as err:
        raise ConfigError("manifest is not usable:\n" + "\n".join(err.problems)) from err


def _entries(manifest: Manifest, benchmark: str) -> list:
    if benchmark == "all":
        return manifest.ready_entries()
    entry = manifest.entry(benchmark)
    if entry is None:
        known = ", ".join(e.id for e in manifest.ready_entries())
        raise ConfigError(f"unknown benchmark {benchmark!r}; ready benchmarks: {known}")
    if not entry.ready:
        raise ConfigError(f"benchmark {benchmark!r} is a placeholder with no files")
    return [entry]


@main.command()
@click.option("--benchmark", required=True, help="benchmark id, or 'all' for every ready entry")
@click.option("--shot", type=click.Choice(sorted(_SHOTS)), default="zero", show_default=True)
@click.option("--runs", "n_runs", type=click.IntRange(min=0), default=1, show_default=True)
@click.option(
    "--transport",
    type=click.Choice(["live", "record", "replay"]),
    default="replay",
    show_default=True,
)
@click.option("--model", default=None, help="override the configured model name")
@click.option("--temperature", type=float, default=None)
@click.option("--force", is_flag=True, help="overwrite existing run records")
@click.pass_context
def run(ctx, benchmark, shot, n_runs, transport, model, temperature, force):
    """Run completions for a benchmark and persist one record per run."""
    manifest = _manifest(ctx)
    store: RunStore = ctx.obj["store"]
    shot_value = _SHOTS[shot]
    overrides = {}
    if model is not None:
        overrides["model"] = model
    if temperature is not None:
        overrides["temperature"] = temperature
    try:
        config = LlmConfig(**overrides)
    except ValueError as err:
        raise ConfigError(str(err)) from err

    failures = 0
    for entry in _entries(manifest, benchmark):
        if shot_value not in entry.supported_shots:
            if benchmark == "all":
                click.echo(f"{entry.id}: skipped, does not support shot {shot_value.value}")
                continue
            raise ConfigError(
                f"benchmark {entry.id!r} does not support shot {shot_value.value}"
            )
        try:
            records = run_benchmark(
                manifest,
                entry,
                shot_value,
                n_runs=n_runs,
                config=config,
                store=store,
                transport=transport,
                force=force,
            )
        except RunExistsError as err:
            raise ConfigError(f"{err}  (use --force to overwrite)") from err
        for record in records:
            run_score = record["score"]
            if record["error"] is not None:
                failures += 1
                detail = record["error"]
                click.echo(
                    f"{entry.id} run {record['run_index']}: {detail['kind']} at"
                    f" {detail['stage']}: {detail['detail']}"
                )
            else:
                if run_score["val"]:
                    failures += 1
                click.echo(
                    f"{entry.id} run {record['run_index']}: cn={run_score['cn']:.2f}"
                    f" auc={run_score['auc']:.2f} [{record['run_id']}]"
                )
    if failures:
        click.echo(f"{failures} run(s) failed")
        ctx.exit(1)


@main.command()
@click.argument("domain", type=click.Path(exists=True, path_type=Path))
@click.argument("problem", type=click.Path(exists=True, path_type=Path))
@click.pass_context
def validate(ctx, domain, problem):
    """Parse a domain and problem pair and print all diagnostics."""
    domain_ast, diagnostics = parse_domain_with_diagnostics(domain.read_text(encoding="utf-8"))
    problem_ast = None
    if domain_ast is not None:
        problem_ast, problem_diags = parse_problem_with_diagnostics(
            problem.read_text(encoding="utf-8"), domain_ast
        )
        diagnostics = diagnostics + problem_diags
    for diagnostic in diagnostics:
        click.echo(str(diagnostic))
    if domain_ast is None or problem_ast is None:
        ctx.exit(1)
    click.echo(
        f"ok: {len(domain_ast.types.declared)} types,"
        f" {len(domain_ast.predicates)} predicates,"
        f" {len(domain_ast.actions)} actions,"
        f" {len(problem_ast.objects)} objects"
    )


@main.command()
@click.argument("domain", type=click.Path(exists=True, path_type=Path))
@click.argument("problem", type=click.Path(exists=True, path_type=Path))
@click.option("--strategy", type=click.Choice(["bfs", "greedy"]), default="bfs", show_default=True)
@click.pass_context
def plan(ctx, domain, problem, strategy):
    """Ground a pair and search for a plan."""
    try:
        domain_ast = parse_domain(domain.read_text(encoding="utf-8"))
        problem_ast = parse_problem(problem.read_text(encoding="utf-8"), domain_ast)
    except ParseError as err:
        click.echo(str(err))
        ctx.exit(1)
    try:
        task = ground(domain_ast, problem_ast)
    except GroundingLimitExceeded as err:
        click.echo(f"does not ground: {err}")
        ctx.exit(1)
    result = solve(task, strategy=strategy)
    if isinstance(result, Plan):
        click.echo(format_plan(result.steps))
        click.echo(f"plan: {len(result.steps)} step(s)")
    elif isinstance(result, Unsolvable):
        click.echo("unsolvable")
        ctx.exit(1)
    else:
        click.echo(f"search gave up: {result.reason}")
        ctx.exit(1)


@main.command("verify")
@click.option("--benchmark", required=True, help="benchmark id, or 'all'")
@click.pass_context
def verify_cmd(ctx, benchmark):
    """Check a reference abstraction against its refinement mapping."""
    manifest = _manifest(ctx)
    bad = 0
    for entry in _entries(manifest, benchmark):
        try:
            result = verify(manifest, entry)
        except MappingError as err:
            for problem in err.problems:
                click.echo(problem)
            bad += 1
            continue
        if isinstance(result, Skipped):
            click.echo(f"{result.benchmark}: skipped ({result.reason})")
            continue
        for problem in result.instance_problems:
            click.echo(f"note: {problem}")
        click.echo(soundness_summary(result.report, result.mapping))
        if not result.report.bisimilar or result.instance_problems:
            bad += 1
    if bad:
        ctx.exit(1)


@main.command("eval")
@click.option("--benchmark", required=True, help="benchmark id, or 'all'")
@click.pass_context
def eval_cmd(ctx, benchmark):
    """Judge each shipped reference solution against its own rubric."""
    manifest = _manifest(ctx)
    bad = 0
    for entry in _entries(manifest, benchmark):
        verdicts = eval_reference(manifest, entry)
        for verdict in verdicts:
            click.echo(f"{entry.id} [{verdict.outcome}] {verdict.item_id}: {verdict.evidence}")
            if verdict.outcome != PASS:
                bad += 1
    if bad:
        click.echo(f"{bad} rubric item(s) did not pass")
        ctx.exit(1)


@main.command()
@click.option("--benchmark", default=None, help="restrict to one benchmark")
@click.pass_context
def report(ctx, benchmark):
    """Aggregate stored runs and write the table, CSV, and figure."""
    store: RunStore = ctx.obj["store"]
    try:
        result = build_report(store, benchmark)
    except ReportError as err:
        raise click.ClickException(str(err)) from err
    click.echo(result.text, nl=False)
    click.echo(f"table:  {result.table_path}")
    click.echo(f"csv:    {result.csv_path}")
    click.echo(f"figure: {result.figure_path}")


@main.command()
@click.pass_context
def fixtures(ctx):
    """Seed golden replay fixtures from the reference solutions."""
    manifest = _manifest(ctx)
    store: RunStore = ctx.obj["store"]
    store.ensure_layout()
    written = make_golden_fixtures(manifest, store.fixtures_dir)
    for name, digest in sorted(written.items()):
        click.echo(f"{name}: {digest}")
    click.echo(f"{len(written)} fixture(s) in {store.fixtures_dir}")


@main.command("review-serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.pass_context
def review_serve(ctx, host, port):
    """Serve the human review API over HTTP."""
    import uvicorn

    from .review import create_app

    store: RunStore = ctx.obj["store"]
    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
