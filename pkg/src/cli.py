# src/cli.py
from __future__ import annotations

"""Command-line interface
------------------------
List, validate and run convergence experiments, and view the effective
config. Thin wrapper around the experiment loader and engine.

`splice-bench <experiment-id> ...` is accepted as shorthand for
`splice-bench run <experiment-id> ...`.
"""

import json
import sys
from pathlib import Path
from typing import List, Optional

import click
from rich.table import Table

from src.core.engine import Engine
from src.core.errors import ExperimentError
from src.core.experiment_loader import (
    Experiment,
    ExperimentLoader,
    apply_override,
    find_yaml_files,
    load_experiments_file,
    load_override,
)
from src.harness.results import write_summary
from src.utils.config import SolverOptions, get_settings
from src.utils.logger import get_console, get_logger, set_color, set_log_level


# -------- helpers --------


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, indent=2, ensure_ascii=False))


def _resolve_paths(paths: List[str]) -> List[Path]:
    return [Path(p).resolve() for p in paths]


def _print_table(outcome) -> None:
    """Convergence table of one experiment on the log console."""
    result = outcome.result
    if result is None:
        return
    table = Table(title=outcome.experiment_id, show_lines=False)
    for col in result.header():
        table.add_column(col, justify="left" if col == "status" else "right")
    for row in result.csv_rows():
        table.add_row(*row)
    get_console().print(table)


def _parse_n_list(value: Optional[str]) -> Optional[List[int]]:
    if not value:
        return None
    try:
        ns = [int(tok) for tok in value.replace(" ", "").split(",") if tok]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'") from e
    if not ns or any(n < 4 for n in ns):
        raise click.BadParameter("every n must be >= 4")
    return sorted(set(ns))


# -------- CLI root --------


class _DefaultRunGroup(click.Group):
    """Routes an unknown first argument to the `run` command."""

    def resolve_command(self, ctx: click.Context, args: List[str]):
        if args and args[0] not in self.commands and not args[0].startswith("-"):
            return super().resolve_command(ctx, ["run", *args])
        return super().resolve_command(ctx, args)


@click.group(cls=_DefaultRunGroup, context_settings=dict(help_option_names=["-h", "--help"]))
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Override LOG_LEVEL from settings",
)
@click.option("--color/--no-color", default=None, help="Force-enable/disable colorized console output")
@click.version_option(package_name="jump-splice")
def cli(log_level: Optional[str], color: Optional[bool]):
    _ = get_settings()
    if log_level:
        set_log_level(log_level.upper())
    if color is not None:
        set_color(color)


# -------- commands --------


@cli.command("config")
def cmd_config():
    """Print effective configuration (after .env & env vars)."""
    s = get_settings()
    data = {k: (str(v) if isinstance(v, Path) else v) for k, v in s.__dict__.items()}
    _echo_json(data)


@cli.command("list")
@click.option(
    "--dir", "experiments_dir",
    type=click.Path(file_okay=False, dir_okay=True, exists=True),
    default=lambda: str(get_settings().EXPERIMENTS_DIR),
    show_default=True,
    help="Directory containing experiment YAML files",
)
@click.option("--recursive/--no-recursive", default=True, show_default=True)
@click.option("--kind", "filter_kind", type=str, default=None, help="Filter by experiment kind (e.g. poisson)")
def cmd_list(experiments_dir: str, recursive: bool, filter_kind: Optional[str]):
    """List experiments available in a directory."""
    experiments = ExperimentLoader(Path(experiments_dir), recursive).load_directory()
    if filter_kind:
        experiments = [e for e in experiments if e.kind.value == filter_kind]
    if not experiments:
        click.echo("No experiments found.")
        return

    click.echo(f"Found {len(experiments)} experiment(s):\n")
    for e in experiments:
        ns = ",".join(str(n) for n in e.n_list)
        click.echo(f" - {e.id}  [{e.kind.value}, {e.dim}D]  n={ns}  {e.title}")


@cli.command("validate")
@click.argument("targets", nargs=-1, required=False)
@click.option("--dir", "experiments_dir", type=click.Path(file_okay=False, dir_okay=True, exists=True), help="Validate all experiments under this directory")
@click.option("--recursive/--no-recursive", default=True, show_default=True)
def cmd_validate(targets: List[str], experiments_dir: Optional[str], recursive: bool):
    """Validate experiment files or a directory (supports multi-doc YAML)."""
    paths: list[Path] = []
    if targets:
        for p in _resolve_paths(targets):
            if p.is_dir():
                paths.extend(find_yaml_files(p, recursive=True))
            else:
                paths.append(p)
    elif experiments_dir:
        paths.extend(find_yaml_files(Path(experiments_dir), recursive=recursive))
    else:
        click.echo("Provide file(s) or --dir to validate.")
        sys.exit(2)

    ok = True
    for fp in paths:
        try:
            for e in load_experiments_file(fp):
                click.echo(f"OK  {fp}  ->  {e.id} [{e.kind.value}] ({len(e.n_list)} resolutions)")
        except (ValueError, FileNotFoundError) as e:
            ok = False
            click.echo(f"ERR {fp}  ->  {e}")

    sys.exit(0 if ok else 1)


@cli.command("run")
@click.argument("ids", nargs=-1, required=False)
@click.option("--all", "run_all", is_flag=True, default=False, help="Run every experiment in the experiments directory")
@click.option("--dir", "experiments_dir", type=click.Path(file_okay=False, dir_okay=True, exists=True), default=None,
              help="Experiments directory (defaults to EXPERIMENTS_DIR)")
@click.option("--n-list", "n_list", type=str, default=None, help="Comma-separated resolutions, e.g. 64,128,256")
@click.option("--golden/--no-golden", default=False, show_default=True, help="Check against published values and rate floors")
@click.option("--baseline", is_flag=True, default=False, help="Run the smoothed-delta baseline of a flow experiment")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None, help="Output directory (defaults to OUTPUT_DIR)")
@click.option("--override", "override_file", type=click.Path(dir_okay=False, exists=True), default=None,
              help="YAML mapping deep-merged into every selected experiment")
@click.option("--q", "order", type=click.IntRange(1, 3), default=None, help="Jump extrapolation order")
@click.option("--parallel/--no-parallel", default=None, help="Override PARALLEL_EXECUTION from settings")
@click.option("--max-workers", type=int, default=None, help="Override MAX_WORKERS from settings")
@click.option("--json-out", type=click.Path(dir_okay=False), default=None, help="Write a JSON summary to this file")
def cmd_run(
    ids: List[str],
    run_all: bool,
    experiments_dir: Optional[str],
    n_list: Optional[str],
    golden: bool,
    baseline: bool,
    out_dir: Optional[str],
    override_file: Optional[str],
    order: Optional[int],
    parallel: Optional[bool],
    max_workers: Optional[int],
    json_out: Optional[str],
):
    """
    Run one or more experiments.

    Examples:
      splice-bench run poisson-circle-log --n-list 40,80,160 --golden
      splice-bench ns-ellipse-re10 --baseline --out results/delta
    """
    settings = get_settings()
    log = get_logger(__name__)
    ns = _parse_n_list(n_list)

    loader = ExperimentLoader(Path(experiments_dir) if experiments_dir else None)
    try:
        if run_all:
            experiments: List[Experiment] = loader.load_directory()
        elif ids:
            experiments = [loader.get(i) for i in ids]
        else:
            click.echo("Nothing to run. Provide experiment id(s) or --all.")
            sys.exit(2)
    except ExperimentError as e:
        click.echo(f"ERR {e}")
        sys.exit(2)

    override = load_override(override_file) if override_file else {}
    if order is not None:
        override = {**override, "q": order}
    if override:
        try:
            experiments = [apply_override(e, override) for e in experiments]
        except ValueError as e:
            click.echo(f"ERR {e}")
            sys.exit(2)

    run_parallel = settings.PARALLEL_EXECUTION if parallel is None else bool(parallel)
    workers = settings.MAX_WORKERS if max_workers is None else int(max_workers)
    engine = Engine(
        settings=settings,
        options=SolverOptions.from_settings(settings),
        out_dir=Path(out_dir).resolve() if out_dir else None,
        golden=golden,
    )

    click.echo(f"Running {len(experiments)} experiment(s){' in parallel' if run_parallel else ''}...")
    if baseline:
        outcomes = [engine.run_experiment(e, ns, baseline=True) for e in experiments]
    else:
        outcomes = engine.run_many(experiments, ns, parallel=run_parallel, max_workers=workers)

    for out in outcomes:
        _print_table(out)
        if out.ok:
            click.echo(f"OK  {out.experiment_id} -> {out.csv_path}")
        elif out.error:
            click.echo(f"ERR {out.experiment_id} -> {out.error_type}: {out.error}")
        else:
            click.echo(f"FAIL {out.experiment_id} -> {len(out.failures)} golden failure(s)")
            for msg in out.failures:
                click.echo(f"    - {msg}")

    ok_count = sum(1 for o in outcomes if o.ok)
    fail_count = len(outcomes) - ok_count
    click.echo(f"Done. OK={ok_count}  FAIL={fail_count}")
    log.debug("run finished: ok=%d fail=%d", ok_count, fail_count)

    if json_out:
        outp = write_summary(json_out, [o.to_dict() for o in outcomes])
        click.echo(f"Wrote summary: {outp}")

    sys.exit(0 if fail_count == 0 else 1)


def main() -> None:
    cli(prog_name="splice-bench")


if __name__ == "__main__":
    main()
