import numpy as np
import numpy.testing as npt
import pytest

from bounds import trudgian_count
from core import RATIONALS
from exceptions import CoverageError, DomainError, MetaError, OrderError, ParseError
from zerodata import (
    ComparisonRow,
    comparison_table,
    empirical_count,
    load_zeros,
    max_multiplicity,
    parse_range,
    parse_zeros,
    resolve_zeros_path,
    write_zeros,
    zero_count,
)

FIRST_ZEROS = "# first zeta zeros\nheight = 30\n14.134725\n21.022040  # second\n\n25.010858\n"


def test_parse_zeros():
    table = parse_zeros(FIRST_ZEROS)
    assert len(table) == 3
    assert table.height == 30.0
    assert table.field is RATIONALS
    npt.assert_allclose(table.ordinates, [14.134725, 21.022040, 25.010858])
    assert table.covers(30.0) and not table.covers(30.5)


def test_parse_zeros_without_height_uses_last_ordinate():
    assert parse_zeros("14.134725\n21.022040\n").height == 21.022040


def test_parse_zeros_errors():
    with pytest.raises(ParseError) as info:
        parse_zeros("height = 30\n14.1\nabc\n")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        parse_zeros("-14.1\n")
    with pytest.raises(ParseError):
        parse_zeros("0\n")
    with pytest.raises(OrderError) as info:
        parse_zeros("21.0\n14.1\n")
    assert info.value.line == 2
    with pytest.raises(MetaError):
        parse_zeros("height = 30\nheight = 40\n14.1\n")
    with pytest.raises(MetaError):
        parse_zeros("height = 0\n")
    with pytest.raises(MetaError):
        parse_zeros("# nothing here\n")


def test_load_zeros(tmp_path):
    path = tmp_path / "zeros.txt"
    write_zeros(path, [14.134725, 21.02204], 22.0, comment="two zeros")
    table = load_zeros(path, "Q")
    assert len(table) == 2 and table.height == 22.0
    assert table.source == str(path)

    bom = tmp_path / "bom.txt"
    bom.write_bytes(b"\xef\xbb\xbf14.134725\n")
    with pytest.raises(ParseError) as info:
        load_zeros(bom)
    assert info.value.line == 1
    with pytest.raises(ParseError):
        load_zeros(tmp_path / "missing.txt")


def test_empirical_count_examples(zeta_table):
    assert empirical_count(zeta_table, 14.134725, 0.5) == 1
    assert empirical_count(zeta_table, 100.0, 1.0) == 0
    assert empirical_count(zeta_table, 50.0, 5.0) == 3


def test_empirical_count_closed_window(zeta_table):
    first = float(zeta_table.ordinates[0])
    assert empirical_count(zeta_table, first, 0.0) == 1
    assert empirical_count(zeta_table, first + 1e-9, 0.0) == 0
    assert empirical_count(zeta_table, first - 1e-9, 0.0) == 0


def test_empirical_count_additive(zeta_table):
    assert not np.any(zeta_table.ordinates == 200.0)
    whole = empirical_count(zeta_table, 200.0, 20.0)
    assert whole == empirical_count(zeta_table, 190.0, 10.0) + empirical_count(zeta_table, 210.0, 10.0)


def test_empirical_count_errors(zeta_table):
    with pytest.raises(CoverageError):
        empirical_count(zeta_table, 1000.0, 20.0)
    with pytest.raises(DomainError):
        empirical_count(zeta_table, 0.5, 1.0)
    with pytest.raises(DomainError):
        empirical_count(zeta_table, 50.0, -1.0)


def test_zero_count_against_trudgian(zeta_table):
    assert zero_count(zeta_table, 1000.0) == 1298
    for T in (10.0, *parse_range("11:1000:0.5")):
        bracket = trudgian_count(RATIONALS, float(T))
        assert bracket.lower <= zero_count(zeta_table, float(T)) <= bracket.upper, T
    with pytest.raises(CoverageError):
        zero_count(zeta_table, 2000.0)


def test_max_multiplicity(zeta_table):
    assert max_multiplicity(zeta_table) == 1
    assert max_multiplicity(parse_zeros("14.1\n14.1\n14.1\n20.0\n")) == 3
    assert max_multiplicity(parse_zeros("height = 5\n")) == 0


def test_comparison_rows(zeta_table):
    below, above = comparison_table(zeta_table, [9.0, 11.0], [1.0])
    assert below.grh_bound is None and below.uncond_bound is not None
    assert below.grh_slack is None
    assert above.empirical == 0
    npt.assert_allclose(above.grh_bound, 46.544977, atol=1e-6)
    assert above.grh_slack == above.grh_bound
    assert not above.violation and not below.violation


def test_comparison_row_violation():
    row = ComparisonRow(20.0, 1.0, 5, 4.5, 10.0)
    assert row.grh_slack == -0.5
    assert row.violation


@pytest.mark.slow
def test_comparison_sweep_has_no_violations(zeta_table):
    rows = comparison_table(zeta_table, parse_range("11:1000:0.5"), [0.5, 1.0, 1.9])
    assert len(rows) == 3 * 1979
    assert not any(row.violation for row in rows)


def test_parse_range():
    npt.assert_allclose(parse_range("10:100:10"), np.arange(10.0, 101.0, 10.0))
    assert parse_range("11:12:0.5").size == 3
    for bad in ("10:100", "a:b:c", "10:100:0", "100:10:1"):
        with pytest.raises(DomainError):
            parse_range(bad)


def test_resolve_zeros_path(tmp_path):
    path = tmp_path / "zeros.txt"
    write_zeros(path, [14.134725], 15.0)
    assert resolve_zeros_path("zeros.txt", str(tmp_path)) == path
    assert resolve_zeros_path(str(path), None) == path
    assert resolve_zeros_path("absent.txt", str(tmp_path)).name == "absent.txt"
