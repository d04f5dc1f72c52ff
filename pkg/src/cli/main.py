"""
Command-line experiment driver.

Every command is deterministic for a given config and seed. Exit codes:
0 success, 1 mismatch or domain error, 2 usage error.
"""
from functools import wraps
from pathlib import Path
from typing import List, Optional
import json
import logging
import math

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from config.settings import settings
from src.analysis import (
    UNIFORM_P,
    ExponentQuery,
    exponent_table,
    fit_growth_exponent,
    measure_growth,
    solve_size_exponent,
    uniform_bound,
)
from src.cli.config_file import load_experiment_config
from src.cli.golden import GOLDEN_SEQUENCE, golden_report
from src.dntree import DnTreeConfig
from src.errors import DydapError
from src.partitioner import (
    PartitionSpec,
    build_access_graph,
    build_constraints,
    derive_distribution,
    evaluate,
    get_engine,
    marginal_load,
    read_edge_list,
    read_matrix_csv,
    read_tags_csv,
    write_distribution_csv,
)
from src.simulator import compare_systems, write_comparison
from src.workload import ERROR_DISTRIBUTIONS, RmatParams, error_sweep, read_sequence

logger = logging.getLogger(__name__)

console = Console()

CSV_FLOAT_FORMAT = "%.10g"
EXPONENT_COLUMNS = ["p0", "p1", "p2", "p3", "k", "s", "bound"]


def setup_logging(level: str) -> None:
    """Route all log records through rich on stderr (and LOG_FILE when set)."""
    handlers: List[logging.Handler] = [
        RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    ]
    if settings.LOG_FILE:
        file_handler = logging.FileHandler(settings.LOG_FILE, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s: %(message)s"))
        handlers.append(file_handler)
    logging.basicConfig(level=level.upper(), format="%(message)s", datefmt="[%X]", handlers=handlers, force=True)


# ----------------------------------------------------------------------
# option helpers


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}") from e


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from e


def _distribution(ctx, param, value):
    """Named error distribution or four comma-separated probabilities."""
    if value is None:
        return None
    if value in ERROR_DISTRIBUTIONS:
        return ERROR_DISTRIBUTIONS[value]
    p = _float_list(ctx, param, value)
    if len(p) != 4:
        raise click.BadParameter(f"expected 4 probabilities or one of {sorted(ERROR_DISTRIBUTIONS)}")
    try:
        RmatParams(p=tuple(p), depth=0)
    except ValidationError as e:
        raise click.BadParameter(e.errors()[0]["msg"]) from e
    return tuple(p)


def common_options(func):
    """--config, --seed and --out, shared by every command."""
    func = click.option(
        "--out", type=click.Path(file_okay=False, path_type=Path), default=None,
        help="Output directory (default: DYDAP_OUTPUT_DIR or ./results)."
    )(func)
    func = click.option(
        "--seed", type=int, default=None,
        help="Random seed (default: config file value or DYDAP_DEFAULT_SEED)."
    )(func)
    func = click.option(
        "--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
        help="Key-value experiment config file."
    )(func)
    return func


def handle_errors(func):
    """Map domain errors to exit 1 and invalid input to exit 2."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DydapError as e:
            logger.debug("Domain error", exc_info=True)
            raise click.ClickException(str(e)) from e
        except (ValidationError, ValueError, FileNotFoundError) as e:
            raise click.UsageError(str(e)) from e
    return wrapper


def _seed(seed: Optional[int], config_path: Optional[Path]) -> int:
    if seed is not None:
        return seed
    if config_path is not None:
        return load_experiment_config(config_path).seed
    return settings.DEFAULT_SEED


def _write_csv(frame, path: Path) -> None:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")


# ----------------------------------------------------------------------
# commands


@click.group()
@click.option(
    "--log-level", envvar="DYDAP_LOG_LEVEL", default=settings.LOG_LEVEL, show_default=True,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Log verbosity (also DYDAP_LOG_LEVEL)."
)
def cli(log_level: str):
    """DYDAP toolkit: DN-tree summaries, partitioning and cluster simulation."""
    setup_logging(log_level)


@cli.command("replay-golden")
@common_options
@click.option("--sequence-file", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Newline-delimited access sequence replacing the built-in one.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@handle_errors
def replay_golden(config_path, seed, out, sequence_file, as_json):
    """Replay the four-extent example and check every derived value."""
    sequence = read_sequence(sequence_file) if sequence_file else list(GOLDEN_SEQUENCE)
    report, mismatches = golden_report(sequence)
    report["mismatches"] = mismatches

    if as_json:
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    else:
        for name in ("M", "M_hat", "adjacency"):
            table = Table(title=name, show_header=False)
            for row in report[name]:
                table.add_row(*[str(v) for v in row])
            console.print(table)
        cuts = Table(title="Edge cuts of balanced splits")
        cuts.add_column("split")
        cuts.add_column("M", justify="right")
        cuts.add_column("M_hat", justify="right")
        for i, split in enumerate(report["splits"]):
            cuts.add_row(f"{split[0]} | {split[1]}", str(report["cuts"]["M"][i]), str(report["cuts"]["M_hat"][i]))
        console.print(cuts)
        console.print(f"Optimum (M): {report['optimum']['M']}  Optimum (M_hat): {report['optimum']['M_hat']}")

    if mismatches:
        for line in mismatches:
            click.echo(f"MISMATCH {line}", err=True)
        raise SystemExit(1)
    if not as_json:
        console.print("[green]All reference values match[/green]")


@cli.command("error-sweep")
@common_options
@click.option("--p", "p", default="near-uniform", callback=_distribution, show_default=True,
              help="Quadrant probabilities p0,p1,p2,p3 or a named distribution.")
@click.option("--sides", default="64,512", callback=_int_list, show_default=True,
              help="Comma-separated matrix sides (powers of two).")
@click.option("--k-list", default="1.5,2,4,8", callback=_float_list, show_default=True,
              help="Comma-separated growth factors.")
@click.option("--n", "n", type=click.IntRange(min=2), default=100_000, show_default=True,
              help="Accesses per stream.")
@click.option("--t", "t", type=click.IntRange(min=0), default=None, help="Base threshold (default: DYDAP_BASE_THRESHOLD).")
@click.option("--seeds", type=click.IntRange(min=1), default=1, show_default=True,
              help="Number of consecutive seeds starting at --seed.")
@handle_errors
def error_sweep_cmd(config_path, seed, out, p, sides, k_list, n, t, seeds):
    """Compression error per (side, k) on shared seeded streams; writes error.csv."""
    base = _seed(seed, config_path)
    t = settings.BASE_THRESHOLD if t is None else t
    frame = error_sweep(p, sides, k_list, n, t, seeds=range(base, base + seeds))
    path = settings.output_path(out) / "error.csv"
    _write_csv(frame, path)

    summary = frame.groupby(["side", "k"], as_index=False)["error"].mean()
    table = Table(title=f"Mean error over {seeds} seed(s), p={list(p)}, t={t}, N={n}")
    for col in ("side", "k", "error"):
        table.add_column(col, justify="right")
    for row in summary.itertuples(index=False):
        table.add_row(str(row.side), f"{row.k:g}", f"{row.error:.6f}")
    console.print(table)


@cli.command("size-sweep")
@common_options
@click.option("--p", "p", default="intermediate", callback=_distribution, show_default=True,
              help="Quadrant probabilities p0,p1,p2,p3 or a named distribution.")
@click.option("--k", "k", type=click.FloatRange(min=1.0), default=2.0, show_default=True, help="Growth factor.")
@click.option("--t", "t", type=click.IntRange(min=0), default=16, show_default=True, help="Base threshold.")
@click.option("--depth", type=click.IntRange(min=1, max=30), default=20, show_default=True,
              help="log2 of the extent space.")
@click.option("--max-n", type=click.IntRange(min=1000), default=1_000_000, show_default=True,
              help="Largest access count sampled.")
@click.option("--points-per-decade", type=click.IntRange(min=1), default=3, show_default=True,
              help="Checkpoints per factor of ten, starting at 1000.")
@handle_errors
def size_sweep(config_path, seed, out, p, k, t, depth, max_n, points_per_decade):
    """Node count growth of a streamed R-MAT workload; writes growth.csv."""
    params = RmatParams(p=p, depth=depth, seed=_seed(seed, config_path))
    config = DnTreeConfig(base_threshold=t, growth_factor=k, extent_space=1 << depth)
    decades = math.log10(max_n) - 3
    count = max(3, int(round(decades * points_per_decade)) + 1)
    checkpoints = sorted({int(round(x)) for x in np.logspace(3, math.log10(max_n), count)})

    sample = measure_growth(params, config, checkpoints)
    frame = sample.to_frame()
    _write_csv(frame, settings.output_path(out) / "growth.csv")

    fitted = fit_growth_exponent(sample)
    solved = solve_size_exponent(ExponentQuery(p=p, growth_factor=k))
    console.print(f"fitted exponent {fitted:.4f}, solved exponent {solved:.4f}, bound {uniform_bound(k):.4f}")


@cli.command("exponent")
@common_options
@click.option("--p", "p", default=",".join(str(x) for x in UNIFORM_P), callback=_distribution, show_default=True,
              help="Quadrant probabilities p0,p1,p2,p3 or a named distribution.")
@click.option("--k-list", default="1.5,2,4,8", callback=_float_list, show_default=True,
              help="Comma-separated growth factors.")
@click.option("--table", "as_table", is_flag=True,
              help="Grid over p = (p_max, r, r, r) for p_max in 0.25..0.95 instead of a single p.")
@handle_errors
def exponent(config_path, seed, out, p, k_list, as_table):
    """Size exponent s solving sum p_i^s = k^s; writes exponent.csv."""
    if as_table:
        frame = exponent_table(np.round(np.arange(0.25, 0.96, 0.05), 2), k_list)
    else:
        frame = pd.DataFrame([
            {"p0": p[0], "p1": p[1], "p2": p[2], "p3": p[3], "k": k,
             "s": solve_size_exponent(ExponentQuery(p=p, growth_factor=k)), "bound": uniform_bound(k)}
            for k in k_list
        ], columns=EXPONENT_COLUMNS)
    _write_csv(frame, settings.output_path(out) / "exponent.csv")

    table = Table(title="Size exponents")
    for col in frame.columns:
        table.add_column(col, justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*[f"{v:.6g}" for v in row])
    console.print(table)


@cli.command("partition")
@common_options
@click.option("--matrix", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Dense transition matrix CSV (no header).")
@click.option("--edges", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Edge list with `u v weight` lines.")
@click.option("--parts", type=click.IntRange(min=1), required=True, help="Number of parts (cluster nodes).")
@click.option("--tolerance", type=click.FloatRange(min=1.0), default=None,
              help="Imbalance tolerance per constraint (default: DYDAP_TOLERANCE).")
@click.option("--load-tolerance", type=click.FloatRange(min=1.0), default=None,
              help="Add an access-load constraint with this tolerance (matrix input only).")
@click.option("--tags", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="CSV `extent_id,ds` adding one constraint per data structure.")
@click.option("--engine", type=click.Choice(["heuristic", "exhaustive"]), default="heuristic", show_default=True,
              help="Partitioning engine.")
@handle_errors
def partition(config_path, seed, out, matrix, edges, parts, tolerance, load_tolerance, tags, engine):
    """Partition an access graph into balanced parts; writes partition.csv."""
    if (matrix is None) == (edges is None):
        raise click.UsageError("Give exactly one of --matrix and --edges")
    load = None
    if matrix is not None:
        m_hat = read_matrix_csv(matrix)
        graph = build_access_graph(m_hat)
        if load_tolerance is not None:
            load = marginal_load(m_hat)
    else:
        graph = read_edge_list(edges)
    n = graph.num_vertices
    ds_tags = read_tags_csv(tags, n) if tags else None
    constraints = build_constraints(n, ds_tags, load)
    spec = PartitionSpec.for_constraints(
        parts, constraints, settings.TOLERANCE if tolerance is None else tolerance, load_tolerance
    )

    result = get_engine(engine, seed=_seed(seed, config_path)).partition(graph, constraints, spec)
    df = derive_distribution(result)
    path = settings.output_path(out) / "partition.csv"
    write_distribution_csv(df, path)
    logger.info(f"Wrote partition of {n} extents to {path}")

    quality = evaluate(graph, constraints, result)
    table = Table(title=f"{engine} partitioning into {parts} parts")
    table.add_column("measure")
    table.add_column("value", justify="right")
    for key, value in quality.as_dict().items():
        table.add_row(key, f"{value:.6g}")
    console.print(table)


@cli.command("compare")
@common_options
@click.option("--nodes", type=click.IntRange(min=1), default=None, help="Simulated cluster nodes (overrides config).")
@handle_errors
def compare(config_path, seed, out, nodes):
    """Static hash versus DYDAP, two executions each; writes trace, metrics and stddev CSVs."""
    experiment = load_experiment_config(config_path, seed=seed, nodes=nodes)
    graph = experiment.build_graph()
    workload = experiment.build_workload(graph)
    result = compare_systems(graph, workload, experiment.cluster_config())
    write_comparison(result, settings.output_path(out))

    table = Table(title=f"{experiment.workload} on 2^{experiment.scale} vertices, {experiment.nodes} nodes")
    for col in ("run", "makespan", "teps_proxy", "cut messages", "mean load stddev"):
        table.add_column(col, justify="right")
    for label, run in result.runs.items():
        table.add_row(
            label, f"{run.makespan:.1f}", f"{run.teps_proxy:.4f}",
            str(run.edge_cut_messages), f"{run.mean_load_stddev:.3f}",
        )
    console.print(table)
    for name, holds in result.directions().items():
        console.print(f"{name}: {'improved' if holds else 'not improved'}")
    if not result.recorded_cut_ok:
        raise click.ClickException("Repartitioned cut exceeds the hash cut on the recorded workload")
