"""
Command-line front end for zetabounds.

Usage:
    python main.py bound --field Q --T 11 --a 1
    python main.py mult --field Q --T 10 --sigma 0.75
    python main.py cor1 --field Q --T 100
    python main.py cor2-check
    python main.py verify --suite lemmas
    python main.py measure solve --csv five_delta.csv
    python main.py measure check --a 0.5 --alpha 0.25 --b 0.3535533906
    python main.py compare --zeros zeros.txt --a 0.5,1,1.9 --T-range 11:1000:0.5
    python main.py table --field Q --T-range 10:100:10
"""

import csv
import json
import math
import sys
from typing import Dict, Iterable, List, Optional, Sequence

import click
import numpy as np
from loguru import logger
from prometheus_client import start_http_server

import config
from bounds import (
    bound_multiplicity,
    bound_window,
    corollary1_bound,
    corollary1_sigma,
    corollary2_margin,
    f_tilde,
    threshold_L,
)
from core import BoundBreakdown, conductor_q, load_field
from exceptions import ZetaBoundsError
from measures import covering_slack, export_measure_csv, solve_five_delta, three_delta, weights_by_center
from suites import SUITE_NAMES, run_suite
from zerodata import comparison_table, load_zeros, parse_range, resolve_zeros_path

COMPARE_COLUMNS = ["T", "a", "empirical", "grh_bound", "uncond_bound", "grh_slack", "uncond_slack"]
TABLE_COLUMNS = ["T", "Q", "f_tilde", "bound_a_half", "bound_a_one", "multiplicity"]


def fmt(value) -> str:
    """Fixed 10-significant-digit formatting; None prints as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.10g}"


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(fmt(value))


def emit_rows(columns: Sequence[str], rows: Iterable[Sequence], as_json: bool) -> None:
    rows = list(rows)
    if as_json:
        records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        click.echo(json.dumps(records, indent=2))
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def emit_mapping(values: Dict[str, object], as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps({k: _json_value(v) for k, v in values.items()}, indent=2))
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    for key, value in values.items():
        writer.writerow([key, value if isinstance(value, str) else fmt(value)])


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {text!r}")


class ZetaBoundsGroup(click.Group):
    """Reports library errors as ``<ErrorName>: message`` with exit status 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ZetaBoundsError as e:
            logger.error(f"Error processing command: {e.qualified_name}: {e}")
            click.echo(f"{type(e).__name__}: {e}", err=True)
            ctx.exit(2)


field_option = click.option("--field", "field_spec", default="Q", show_default=True, help="'Q' or a field-descriptor file.")
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of CSV.")


@click.group(cls=ZetaBoundsGroup)
@click.option("--log-level", default=None, help="Override ZETABOUNDS_LOG_LEVEL.")
def cli(log_level: Optional[str]):
    """Explicit GRH bounds for zeros of Dedekind zeta functions, and their verification."""
    config.setup_logging(log_level)


@cli.command()
@field_option
@click.option("--T", "T", type=float, required=True)
@click.option("--a", "a", type=float, required=True)
@json_option
def bound(field_spec: str, T: float, a: float, as_json: bool):
    """(a/2) f~_K(1/2 + a/4 + iT), the bound for zeros with |gamma - T| <= a."""
    field = load_field(field_spec)
    result = bound_window(field, T, a)
    logger.info(f"bound_window({field.describe()}, T={T}, a={a}) = {result.total}")
    emit_mapping(result.as_dict(), as_json)


@cli.command()
@field_option
@click.option("--T", "T", type=float, required=True)
@click.option("--sigma", type=float, default=0.75, show_default=True)
@json_option
def mult(field_spec: str, T: float, sigma: float, as_json: bool):
    """(3/10)(2 sigma - 1) f~_K(sigma + iT), the multiplicity bound."""
    result: BoundBreakdown = bound_multiplicity(load_field(field_spec), T, sigma)
    emit_mapping(result.as_dict(), as_json)


@cli.command()
@field_option
@click.option("--T", "T", type=float, required=True)
@json_option
def cor1(field_spec: str, T: float, as_json: bool):
    """Multiplicity bound with sigma tied to log log Q."""
    field = load_field(field_spec)
    sigma = corollary1_sigma(field, T)
    values = {
        "bound": corollary1_bound(field, T),
        "sigma": sigma,
        "Q": conductor_q(field, T),
        "multiplicity_at_sigma": bound_multiplicity(field, T, sigma).total,
    }
    emit_mapping(values, as_json)


@cli.command("cor2-check")
@click.option("--samples", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@json_option
def cor2_check(samples: int, seed: int, as_json: bool):
    """Check the pieces of n_Q(T; 0+) <= 4 log T / log log T on 23 <= log T <= 1e55."""
    rng = np.random.default_rng(seed)
    log_ts = np.exp(rng.uniform(math.log(23.0), math.log(1e55), samples))
    failures = 0
    worst_ratio = 0.0
    for log_t in log_ts:
        margin = corollary2_margin(float(log_t))
        worst_ratio = max(worst_ratio, margin.bound_ratio)
        if not (margin.subcheck1 and margin.subcheck2):
            failures += 1
    L = threshold_L()
    values = {
        "samples": samples,
        "failures": failures,
        "worst_bound_ratio": worst_ratio,
        "L_threshold": L,
        "L_162546.6_ok": corollary2_margin(L=162546.6).L_threshold_ok,
    }
    emit_mapping(values, as_json)
    if failures:
        sys.exit(1)


@cli.command()
@click.option("--suite", type=click.Choice(SUITE_NAMES), default=None, help="Run one suite (default: all).")
@click.option("--zeros", default=None, help="Zero table for the riemann dual-oracle check.")
@field_option
def verify(suite: Optional[str], zeros: Optional[str], field_spec: str):
    """Run the verification suites and print pass/fail per check."""
    port = config.metrics_port()
    if port is not None:
        start_http_server(port)
        logger.info(f"Serving metrics on port {port}")
    zero_table = None
    if zeros is not None:
        zero_table = load_zeros(resolve_zeros_path(zeros, config.ZETA_ZEROS_DIR), load_field(field_spec))

    failed = 0
    for name in [suite] if suite else SUITE_NAMES:
        for check_name, passed, message in run_suite(name, zero_table):
            click.echo(f"{name}.{check_name}\t{'PASS' if passed else 'FAIL'}\t{message}")
            failed += not passed
    if failed:
        click.echo(f"{failed} check(s) failed", err=True)
        sys.exit(1)


@cli.group()
def measure():
    """Covering measures: the five-delta optimum and three-delta certificates."""


def _report_measure(m, csv_path: Optional[str], as_json: bool) -> bool:
    report = covering_slack(m)
    values = {"alpha": m.alpha, "window_a": m.window_a}
    for i, (b, c) in enumerate(weights_by_center(m)):
        values[f"b{i}"] = b
        values[f"c{i}"] = c
    values.update(
        {
            "cost": m.cost,
            "covering_holds": report.holds,
            "min_slack": report.min_slack,
            "certificate": report.root_certificate,
        }
    )
    emit_mapping(values, as_json)
    if csv_path:
        export_measure_csv(m, csv_path)
    return report.holds


@measure.command()
@click.option("--csv", "csv_path", default=None, help="Also write the measure as CSV.")
@json_option
def solve(csv_path: Optional[str], as_json: bool):
    """Solve for the five-delta measure with a = 1, alpha = 1/4 and certify it."""
    if not _report_measure(solve_five_delta(), csv_path, as_json):
        sys.exit(1)


@measure.command()
@click.option("--a", "a", type=float, required=True)
@click.option("--alpha", type=float, required=True)
@click.option("--b", "b", type=float, required=True)
@click.option("--csv", "csv_path", default=None, help="Also write the measure as CSV.")
@json_option
def check(a: float, alpha: float, b: float, csv_path: Optional[str], as_json: bool):
    """Build the three-delta measure and certify the covering inequality."""
    if not _report_measure(three_delta(a, alpha, b), csv_path, as_json):
        sys.exit(1)


@cli.command()
@click.option("--zeros", required=True, help="Zero table path (searched in ZETA_ZEROS_DIR too).")
@field_option
@click.option("--a", "a_list", default="0.5,1,1.9", show_default=True, help="Comma-separated half-widths.")
@click.option("--T-range", "t_range", required=True, help="lo:hi:step")
@json_option
def compare(zeros: str, field_spec: str, a_list: str, t_range: str, as_json: bool):
    """Empirical window counts against the GRH and unconditional bounds."""
    table = load_zeros(resolve_zeros_path(zeros, config.ZETA_ZEROS_DIR), load_field(field_spec))
    rows = comparison_table(table, parse_range(t_range), parse_float_list(a_list))
    emit_rows(
        COMPARE_COLUMNS,
        ((r.T, r.a, r.empirical, r.grh_bound, r.uncond_bound, r.grh_slack, r.uncond_slack) for r in rows),
        as_json,
    )
    violations = sum(r.violation for r in rows)
    if violations:
        click.echo(f"{violations} row(s) violate a bound", err=True)
        sys.exit(1)


@cli.command()
@field_option
@click.option("--T-range", "t_range", default="10:100:10", show_default=True, help="lo:hi:step")
@click.option("--sigma", type=float, default=0.75, show_default=True)
@json_option
def table(field_spec: str, t_range: str, sigma: float, as_json: bool):
    """f~_K and the window / multiplicity bounds on a grid of heights."""
    field = load_field(field_spec)
    rows = []
    for T in parse_range(t_range):
        T = float(T)
        rows.append(
            (
                T,
                conductor_q(field, T),
                f_tilde(field, sigma, T).total,
                bound_window(field, T, 0.5).total if T >= 10.5 else None,
                bound_window(field, T, 1.0).total if T >= 11 else None,
                bound_multiplicity(field, T, sigma).total,
            )
        )
    emit_rows(TABLE_COLUMNS, rows, as_json)


if __name__ == "__main__":
    cli()
