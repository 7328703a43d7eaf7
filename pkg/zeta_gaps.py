#!/usr/bin/env python3
"""
Command-line interface for the zeta-gaps toolkit.

Usage:
    python zeta_gaps.py constants --k 2                 # b(h,2), a(2) and the ratio report
    python zeta_gaps.py bounds --method all --format csv
    python zeta_gaps.py zeros --from 10 --to 100 --out zeros.csv
    python zeta_gaps.py moments --k 1 --h 0 --T 5000
    python zeta_gaps.py verify --trials 1000 --seed 7

Exit status: 0 success, 2 computed-vs-published discrepancies or other
warnings, 1 computation errors, 64 usage errors.
"""

import json
import sys
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import click
import pandas as pd
import structlog
from pydantic import BaseModel, Field

from gap_bounds import (
    GapBound,
    Method,
    all_bounds,
    ap_table,
    best_bounds,
    bounds_frame,
    bp_table,
    opial_table,
    reference_bounds,
    unconditional_base,
    unconditional_bound,
)
from hardy_z import empirical_moment, find_zeros, gap_stats, zeros_frame
from ineq_verify import INEQUALITIES, run_property_suite, suite_by_inequality
from rmt_constants import MAX_K, b_value_report, classical_constants, mixed_moment_coefficients, ratio_table
from wirtinger_constants import inequality_constants
from zeta_config import (
    ARTIFACT_NAME,
    ARTIFACT_VERSION,
    DEFAULT_SEED,
    configure_logging,
    default_tolerances,
    get_prime_cutoff,
    get_threads,
    parse_tolerance_override,
)
from zeta_errors import DomainError, ZetaGapsError, describe

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_WARNING = 2
EXIT_USAGE = 64

# How far a recomputed bound may sit from its printed value before it is reported
PUBLISHED_TOLERANCE = {
    Method.UNCONDITIONAL: 1e-3,
    Method.OPIAL: 5e-4,
    Method.WIRTINGER_AP: 2e-3,
    Method.WIRTINGER_BP: 2e-3,
}


class Subcommand(Enum):
    CONSTANTS = "constants"
    BOUNDS = "bounds"
    ZEROS = "zeros"
    MOMENTS = "moments"
    VERIFY = "verify"


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class RunConfig(BaseModel):
    subcommand: Subcommand
    output_format: OutputFormat = OutputFormat.JSON
    output_path: Optional[str] = None
    seed: int = DEFAULT_SEED
    threads: int = 1
    timestamp: bool = True
    tolerances: Dict[str, Union[int, float]] = Field(default_factory=default_tolerances)
    arguments: Dict[str, Any] = Field(default_factory=dict)


class ZetaGapsGroup(click.Group):
    """Click group mapping outcomes onto the toolkit's exit codes"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(args=args, prog_name=prog_name or ARTIFACT_NAME,
                                  complete_var=complete_var, standalone_mode=False, **extra)
            code = result if isinstance(result, int) else EXIT_OK
        except click.UsageError as e:
            e.show()
            code = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_ERROR

        if standalone_mode:
            sys.exit(code)
        return code


def _parse_tolerances(ctx, param, values) -> Dict[str, float]:
    overrides: Dict[str, float] = {}
    for text in values:
        try:
            overrides.update(parse_tolerance_override(text))
        except ValueError as e:
            raise click.BadParameter(str(e), ctx=ctx, param=param)
    return overrides


def common_options(default_format: OutputFormat = OutputFormat.JSON):
    """Output, threading and tolerance options shared by every subcommand"""

    def decorator(command):
        options = [
            click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat]),
                         default=default_format.value, show_default=True, help="Output format"),
            click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None,
                         help="Write the artifact to this file instead of stdout"),
            click.option("--threads", type=click.IntRange(min=1), default=None,
                         help="Worker cap (falls back to ZETA_GAPS_THREADS, then 1)"),
            click.option("--no-timestamp", is_flag=True, help="Omit the timestamp from the meta block"),
            click.option("--tol", "tolerances", multiple=True, callback=_parse_tolerances,
                         metavar="NAME=VALUE", help="Override a named tolerance (repeatable)"),
        ]
        for option in reversed(options):
            command = option(command)
        return command

    return decorator


def build_config(subcommand: Subcommand, common: Dict[str, Any], arguments: Dict[str, Any],
                 seed: int = DEFAULT_SEED) -> RunConfig:
    tolerances = default_tolerances()
    tolerances["prime_cutoff"] = get_prime_cutoff()
    tolerances.update(common["tolerances"])

    try:
        threads = get_threads(common["threads"])
    except ValueError as e:
        raise click.UsageError(str(e))

    return RunConfig(
        subcommand=subcommand,
        output_format=OutputFormat(common["output_format"]),
        output_path=common["output_path"],
        seed=seed,
        threads=threads,
        timestamp=not common["no_timestamp"],
        tolerances=tolerances,
        arguments=arguments,
    )


def meta_block(config: RunConfig) -> Dict[str, Any]:
    meta = {
        "artifact": ARTIFACT_NAME,
        "version": ARTIFACT_VERSION,
        "config": config.model_dump(mode="json"),
    }
    if config.timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def _comment_lines(meta: Dict[str, Any], notes: Optional[Dict[str, Any]] = None) -> str:
    lines = [f"# artifact={meta['artifact']} version={meta['version']}",
             f"# config={json.dumps(meta['config'], sort_keys=True)}"]
    if "timestamp" in meta:
        lines.append(f"# timestamp={meta['timestamp']}")
    for key, value in (notes or {}).items():
        lines.append(f"# {key}={value}")
    return "\n".join(lines) + "\n"


def emit(config: RunConfig, document: Dict[str, Any], frame: pd.DataFrame,
         notes: Optional[Dict[str, Any]] = None) -> None:
    """Render the artifact in the configured format to stdout or --out"""
    meta = meta_block(config)

    if config.output_format is OutputFormat.JSON:
        try:
            text = json.dumps({"meta": meta, **document}, indent=2, allow_nan=False) + "\n"
        except ValueError as e:
            raise DomainError(f"artifact holds a non-finite value: {e}") from e
    elif config.output_format is OutputFormat.CSV:
        text = _comment_lines(meta, notes) + frame.to_csv(index=False)
    else:
        text = _comment_lines(meta, notes) + frame.to_string(index=False, na_rep="---") + "\n"

    if config.output_path:
        with open(config.output_path, "w") as handle:
            handle.write(text)
        logger.info("artifact_written", path=config.output_path, format=config.output_format.value)
    else:
        click.echo(text, nl=False)


def _nan_to_none(values: List[float]) -> List[Optional[float]]:
    return [None if pd.isna(v) else float(v) for v in values]


def dispatch(config: RunConfig) -> int:
    """Run the subcommand a RunConfig describes, emit its artifact and return the exit code"""
    handlers = {
        Subcommand.CONSTANTS: run_constants,
        Subcommand.BOUNDS: run_bounds,
        Subcommand.ZEROS: run_zeros,
        Subcommand.MOMENTS: run_moments,
        Subcommand.VERIFY: run_verify,
    }
    logger.info("dispatch", subcommand=config.subcommand.value, threads=config.threads)
    try:
        return handlers[config.subcommand](config)
    except ZetaGapsError as e:
        logger.error("command_failed", subcommand=config.subcommand.value, error=type(e).__name__)
        click.echo(describe(e, "Error"), err=True)
        return EXIT_ERROR
    except OSError as e:
        logger.error("artifact_write_failed", subcommand=config.subcommand.value, path=config.output_path)
        click.echo(describe(e, "Error"), err=True)
        return EXIT_ERROR


@click.group(cls=ZetaGapsGroup)
@click.version_option(version=ARTIFACT_VERSION, prog_name=ARTIFACT_NAME)
@click.option("--log-level", default=None, help="Logging level (falls back to LOG_LEVEL, then WARNING)")
def cli(log_level: Optional[str]):
    """
    Constants, bounds and numerical checks for large gaps between zeta zeros.

    Examples:

        zeta_gaps.py constants --k 2

        zeta_gaps.py bounds --method all --format csv

        zeta_gaps.py zeros --from 10 --to 100
    """
    configure_logging(log_level)


@cli.command()
@click.option("--k", "k_values", type=click.IntRange(1, MAX_K), multiple=True,
              help="Restrict the coefficient listing to these k (repeatable, default 1..7)")
@click.option("--inequalities", is_flag=True, help="Also emit I(k) and the Agarwal-Pang constants")
@common_options()
def constants(k_values, inequalities, **common):
    """
    Moment coefficients b(h,k), a(k) and the published-value reports.

    Examples:

        zeta_gaps.py constants --k 2

        zeta_gaps.py constants --inequalities --format csv
    """
    return dispatch(build_config(Subcommand.CONSTANTS, common, {"k": list(k_values), "inequalities": inequalities}))


def run_constants(config: RunConfig) -> int:
    tolerances = config.tolerances
    ks = config.arguments["k"] or list(range(1, MAX_K + 1))

    coefficients = [
        coefficient
        for k in ks
        for coefficient in mixed_moment_coefficients(
            k, int(tolerances["prime_cutoff"]), tolerances["euler_tail"], int(tolerances["euler_max_terms"]))
    ]
    ratios = ratio_table()
    b_values = b_value_report()

    warnings = [f"b(0,{entry.k})/b({entry.k},{entry.k}) differs from the published value"
                for entry in ratios if not entry.matches]
    warnings += [f"b({entry.h},{entry.k}) differs from the published value"
                 for entry in b_values if not entry.matches]

    document = {
        "coefficients": [c.to_dict() for c in coefficients],
        "ratio_table": [entry.to_dict() for entry in ratios],
        "b_values": [entry.to_dict() for entry in b_values],
        "classical": [constant.to_dict() for constant in classical_constants()],
        "warnings": warnings,
    }
    if config.arguments["inequalities"]:
        document["inequalities"] = [inequality_constants(k, tolerances["quadrature_tol"]) for k in ks]

    frame = pd.DataFrame([c.to_dict() for c in coefficients],
                         columns=["k", "h", "b_hk", "a_k", "growth_exponent"])
    emit(config, document, frame, {"warnings": len(warnings)})
    return EXIT_WARNING if warnings else EXIT_OK


# thm21 unconditional, thm22 Opial, thm23 Agarwal-Pang, thm24 Brnetić-Pečarić
BOUND_METHODS = ["all", "thm21", "thm22", "thm23", "thm24", "refs", "best"]


def _select_bounds(method: str, tol: float) -> List[GapBound]:
    if method == "all":
        return all_bounds(tol)
    if method == "thm21":
        return [unconditional_bound(tol)]
    if method == "thm22":
        return opial_table()
    if method == "thm23":
        return ap_table()
    if method == "thm24":
        return bp_table(tol)
    if method == "refs":
        return reference_bounds()
    return best_bounds(tol)


@cli.command()
@click.option("--method", type=click.Choice(BOUND_METHODS), default="all", show_default=True,
              help="Which family of bounds to evaluate")
@common_options()
def bounds(method, **common):
    """
    Lower bounds for the normalised gaps, next to their published values.

    Examples:

        zeta_gaps.py bounds --method all --format csv

        zeta_gaps.py bounds --method thm24
    """
    return dispatch(build_config(Subcommand.BOUNDS, common, {"method": method}))


def run_bounds(config: RunConfig) -> int:
    tol = config.tolerances["quadrature_tol"]

    rows = _select_bounds(config.arguments["method"], tol)
    unconditional = unconditional_bound(tol)

    warnings = []
    for bound in rows:
        limit = PUBLISHED_TOLERANCE.get(bound.method)
        if limit is not None and bound.abs_diff is not None and bound.abs_diff > limit:
            logger.warning("bound_mismatch", method=bound.method.value, k=bound.k, h=bound.h,
                           value=bound.value, published=bound.paper_value)
            warnings.append(f"{bound.method.value} k={bound.k} h={bound.h} differs from its published value")

    document = {
        "unconditional": {
            "value": unconditional.value,
            "recomputed": unconditional.recomputed,
            "base": str(unconditional_base()),
        },
        "bounds": [bound.to_dict() for bound in rows],
        "warnings": warnings,
    }
    notes = {"unconditional_recomputed": repr(unconditional.recomputed), "warnings": len(warnings)}
    emit(config, document, bounds_frame(rows), notes)
    return EXIT_WARNING if warnings else EXIT_OK


@cli.command()
@click.option("--from", "t_from", type=float, default=None, help="Scan start (default: t_lower)")
@click.option("--to", "t_to", type=float, required=True, help="Scan end")
@click.option("--grid", "grid_factor", type=float, default=None,
              help="Step as a fraction of 2pi/log t (default: grid_factor tolerance)")
@click.option("--checkpoint", type=click.Path(dir_okay=False), default=None,
              help="CSV checkpoint for resuming long scans")
@common_options(OutputFormat.CSV)
def zeros(t_from, t_to, grid_factor, checkpoint, **common):
    """
    Zeros of Z(t) on a range, with gaps and normalised gaps.

    Examples:

        zeta_gaps.py zeros --from 10 --to 100 --out zeros.csv

        zeta_gaps.py zeros --to 10000 --threads 4 --format json
    """
    return dispatch(build_config(Subcommand.ZEROS, common,
                                 {"from": t_from, "to": t_to, "grid": grid_factor, "checkpoint": checkpoint}))


def run_zeros(config: RunConfig) -> int:
    tolerances = config.tolerances
    arguments = config.arguments
    t_min = tolerances["t_lower"] if arguments["from"] is None else arguments["from"]
    grid = tolerances["grid_factor"] if arguments["grid"] is None else arguments["grid"]

    table = find_zeros(t_min, arguments["to"], grid, tolerances["refine_tol"], config.threads,
                       arguments["checkpoint"])
    frame = zeros_frame(table)

    summary: Dict[str, Any] = {
        "count": table.count,
        "range": list(table.range),
        "expected_count": table.expected_count,
        "allowance": table.allowance,
        "suspect_intervals": len(table.suspect_intervals),
    }
    if table.count >= 2:
        summary["gap_statistics"] = gap_stats(table).to_dict()

    document = {
        "summary": summary,
        "warnings": list(table.warnings),
        "zeros": {
            "t": frame["t"].tolist(),
            "gap": _nan_to_none(frame["gap"].tolist()),
            "r": _nan_to_none(frame["r"].tolist()),
        },
    }
    notes = {key: summary[key] for key in ("count", "expected_count", "allowance")}
    if "gap_statistics" in summary:
        stats = summary["gap_statistics"]
        notes.update({"max_r": stats["max_gap"], "mean_r": stats["mean_gap"],
                      "mean_local_r": stats["mean_local_gap"]})
    emit(config, document, frame, notes)
    return EXIT_WARNING if table.warnings else EXIT_OK


@cli.command()
@click.option("--k", type=click.IntRange(1, 3), required=True, help="Half the total power")
@click.option("--h", type=click.IntRange(0, 3), default=0, show_default=True, help="Half the power of Z'")
@click.option("--T", "T", type=float, required=True, help="Upper integration limit")
@click.option("--panels", type=click.IntRange(min=2), default=None,
              help="Simpson panels (default: moment_panels tolerance)")
@common_options()
def moments(k, h, T, panels, **common):
    """
    Empirical mixed moment of Z and Z' against its predicted size.

    Examples:

        zeta_gaps.py moments --k 1 --h 0 --T 5000

        zeta_gaps.py moments --k 2 --h 1 --T 5000
    """
    return dispatch(build_config(Subcommand.MOMENTS, common, {"k": k, "h": h, "T": T, "panels": panels}))


def run_moments(config: RunConfig) -> int:
    tolerances = config.tolerances
    arguments = config.arguments
    panels = arguments["panels"]

    moment = empirical_moment(
        arguments["k"], arguments["h"], arguments["T"],
        panels=int(tolerances["moment_panels"]) if panels is None else panels,
        t_lower=tolerances["t_lower"],
        max_panels=int(tolerances["moment_max_panels"]),
        derivative_step=tolerances["derivative_step"],
        prime_cutoff=int(tolerances["prime_cutoff"]),
    )
    emit(config, {"moment": moment.to_dict()}, pd.DataFrame([moment.to_dict()]))
    return EXIT_OK


@cli.command()
@click.option("--trials", type=click.IntRange(min=1), default=1000, show_default=True,
              help="Seeded trials per inequality and k")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="Seed of the first trial")
@click.option("--inequality", type=click.Choice(list(INEQUALITIES) + ["all"]), default="all",
              show_default=True, help="Which inequality to test")
@click.option("--k", "k_values", type=click.IntRange(1, 7), multiple=True,
              help="Degrees to test (repeatable, default 1 2 3)")
@click.option("--terms", type=click.IntRange(1, 64), default=8, show_default=True,
              help="Sine terms per trial function")
@common_options()
def verify(trials, seed, inequality, k_values, terms, **common):
    """
    Property-test the Wirtinger and Opial inequalities on random trial functions.

    Examples:

        zeta_gaps.py verify --trials 1000 --seed 7

        zeta_gaps.py verify --inequality yang --k 2 --format csv
    """
    ks = list(k_values) or [1, 2, 3]
    return dispatch(build_config(Subcommand.VERIFY, common,
                                 {"trials": trials, "inequality": inequality, "k": ks, "terms": terms}, seed=seed))


def run_verify(config: RunConfig) -> int:
    arguments = config.arguments
    inequality = arguments["inequality"]
    selected = list(INEQUALITIES) if inequality == "all" else [inequality]
    summaries = run_property_suite(arguments["trials"], config.seed, selected, arguments["k"],
                                   n_terms=arguments["terms"],
                                   margin_floor=config.tolerances["margin_floor"], threads=config.threads)
    violations = sum(summary.violations for summary in summaries)
    warnings = [f"{summary.inequality} k={summary.k}: {summary.violations} of {summary.trials} trials violate it"
                for summary in summaries if summary.violations]

    document = {
        "summary": list(suite_by_inequality(summaries).values()),
        "groups": [summary.to_dict() for summary in summaries],
        "warnings": warnings,
    }
    frame = pd.DataFrame([summary.to_dict() for summary in summaries])
    emit(config, document, frame, {"violations": violations})
    return EXIT_WARNING if violations else EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    return cli.main(args=argv, standalone_mode=False)


if __name__ == "__main__":
    cli()
