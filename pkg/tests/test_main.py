import csv
import io
import json
import math
import sys

import pytest
from click.testing import CliRunner
from loguru import logger

from main import COMPARE_COLUMNS, TABLE_COLUMNS, cli


@pytest.fixture
def runner():
    yield CliRunner()
    # the CLI points loguru at the runner's captured stderr
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


def _mapping(output):
    return dict(csv.reader(io.StringIO(output.strip())))


def test_bound(runner):
    result = runner.invoke(cli, ["bound", "--T", "11", "--a", "1"])
    assert result.exit_code == 0, result.output
    values = _mapping(result.stdout)
    assert math.isclose(float(values["total"]), 46.544977, abs_tol=1e-6)
    assert values["a"] == "1"


def test_bound_json(runner):
    result = runner.invoke(cli, ["bound", "--field", "Q", "--T", "20", "--a", "0.5", "--json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert set(payload) >= {"total", "main_term", "middle_term", "degree_term", "T", "a", "Q"}


def test_bound_outside_domain(runner):
    result = runner.invoke(cli, ["bound", "--T", "11", "--a", "2"])
    assert result.exit_code == 2
    assert "DomainError" in result.output


def test_mult_and_cor1(runner):
    result = runner.invoke(cli, ["mult", "--T", "10"])
    assert result.exit_code == 0, result.output
    assert float(_mapping(result.stdout)["sigma"]) == 0.75
    result = runner.invoke(cli, ["cor1", "--T", "10"])
    assert result.exit_code == 0, result.output
    values = _mapping(result.stdout)
    assert math.isclose(float(values["bound"]), 17.74, abs_tol=0.01)
    assert float(values["multiplicity_at_sigma"]) <= float(values["bound"])


def test_cor2_check(runner):
    result = runner.invoke(cli, ["cor2-check", "--samples", "50"])
    assert result.exit_code == 0, result.output
    values = _mapping(result.stdout)
    assert values["failures"] == "0"
    assert values["L_162546.6_ok"] == "true"


def test_measure_solve(runner, tmp_path):
    path = tmp_path / "five_delta.csv"
    result = runner.invoke(cli, ["measure", "solve", "--csv", str(path)])
    assert result.exit_code == 0, result.output
    values = _mapping(result.stdout)
    assert values["covering_holds"] == "true"
    assert float(values["cost"]) < 0.5
    assert path.read_text(encoding="utf-8").startswith("alpha,0.25\n")


def test_measure_check(runner):
    failing = runner.invoke(cli, ["measure", "check", "--a", "1", "--alpha", "0.25", "--b", repr(1.0 / math.sqrt(2.0))])
    assert failing.exit_code == 1
    assert _mapping(failing.stdout)["covering_holds"] == "false"
    holding = runner.invoke(cli, ["measure", "check", "--a", "0.5", "--alpha", "0.25", "--b", repr(0.5 / math.sqrt(2.0))])
    assert holding.exit_code == 0, holding.output
    degenerate = runner.invoke(cli, ["measure", "check", "--a", "1", "--alpha", "0.25", "--b", "0"])
    assert degenerate.exit_code == 2
    assert "DegenerateDenominator" in degenerate.output


def test_mapping_rows_quote_commas(runner):
    result = runner.invoke(cli, ["measure", "check", "--a", "0.5", "--alpha", "0.25", "--b", repr(0.5 / math.sqrt(2.0))])
    assert result.exit_code == 0, result.output
    certificate = _mapping(result.stdout)["certificate"]
    assert certificate.startswith("0(x2), ±0.5(x1); ")
    assert "residual degree" in certificate
    assert '"0(x2), ' in result.stdout


def test_compare(runner, zeta_zero_file):
    result = runner.invoke(cli, ["compare", "--zeros", str(zeta_zero_file), "--a", "1", "--T-range", "11:20:1"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.strip().splitlines()
    assert lines[0] == ",".join(COMPARE_COLUMNS)
    assert len(lines) == 11
    assert lines[1].startswith("11,1,0,46.5")


def test_compare_missing_table(runner, tmp_path):
    result = runner.invoke(cli, ["compare", "--zeros", str(tmp_path / "none.txt"), "--T-range", "11:20:1"])
    assert result.exit_code == 2
    assert "ParseError" in result.output


def test_table(runner):
    result = runner.invoke(cli, ["table"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.strip().splitlines()
    assert lines[0] == ",".join(TABLE_COLUMNS)
    assert len(lines) == 11
    first = lines[1].split(",")
    assert first[0] == "10" and first[3] == "" and first[4] == ""


def test_unknown_command(runner):
    result = runner.invoke(cli, ["frobnicate"])
    assert result.exit_code == 2


@pytest.mark.slow
def test_verify_measures_suite(runner):
    result = runner.invoke(cli, ["verify", "--suite", "measures"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.strip().splitlines()
    assert lines and all("\tPASS\t" in line for line in lines)
    assert all(line.startswith("measures.") for line in lines)
