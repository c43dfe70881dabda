import math

import numpy.testing as npt
import pytest

from core import (
    RATIONALS,
    BoundBreakdown,
    CertValue,
    WindowQuery,
    build_field,
    cert_sum,
    conductor_q,
    load_field,
    parse_field_descriptor,
    w_term,
    with_log_disc,
)
from exceptions import DomainError, NegativeDiscriminant, ParseError, PrecisionError, SignatureMismatch


def test_build_field_validates_signature():
    with pytest.raises(SignatureMismatch):
        build_field(3, 2, 1, 3.0)
    with pytest.raises(NegativeDiscriminant):
        build_field(2, 2, 0, -1.0)
    with pytest.raises(DomainError):
        build_field(0, 0, 0, 0.0)
    with pytest.raises(DomainError):
        build_field(1, 1, 0, 0.5)
    with pytest.raises(DomainError):
        build_field(2, 0, 1, 0.0)


def test_rationals(rationals):
    assert rationals.is_rational
    assert rationals.describe() == "Q"
    assert (rationals.degree, rationals.r1, rationals.r2, rationals.log_disc) == (1, 1, 0, 0.0)


def test_conductor_and_w_term(rationals, quadratic_field):
    npt.assert_allclose(conductor_q(rationals, 10.0), math.log(10.0) + 31.0)
    npt.assert_allclose(conductor_q(quadratic_field, 100.0), math.log(3.0) + 2.0 * (math.log(100.0) + 20.0) + 11.0)
    npt.assert_allclose(w_term(rationals, 2.0 * math.pi), 0.0, atol=1e-15)
    with pytest.raises(DomainError):
        conductor_q(rationals, 1.0)
    with pytest.raises(DomainError):
        w_term(rationals, 0.0)


def test_cert_value_arithmetic_encloses_interval_images():
    x = CertValue(1.0, 0.1)
    y = CertValue(2.0, 0.1)
    product = x * y
    assert product.lower <= 0.9 * 1.9 and product.upper >= 1.1 * 2.1
    quotient = x / y
    assert quotient.lower <= 0.9 / 2.1 and quotient.upper >= 1.1 / 1.9
    difference = x - y
    assert difference.contains(-1.2) and difference.contains(-0.8)
    assert (3.0 - x).contains(2.1)


def test_cert_value_elementary_functions():
    third = CertValue.exact(1.0) / 3.0
    assert third.contains(1.0 / 3.0)
    assert third.exp().contains(math.exp(1.0 / 3.0))
    assert third.log().contains(math.log(1.0 / 3.0))
    assert CertValue.exact(2.0).sqrt().contains(math.sqrt(2.0))
    assert CertValue.exact(3.0).hypot(CertValue.exact(4.0)).contains(5.0)


def test_cert_value_errors():
    with pytest.raises(PrecisionError):
        CertValue(1.0) / CertValue(0.0, 0.5)
    with pytest.raises(PrecisionError):
        CertValue(0.1, 0.2).log()
    with pytest.raises(PrecisionError):
        CertValue(1.0, -1.0)
    with pytest.raises(PrecisionError):
        CertValue.from_bounds(2.0, 1.0)


def test_cert_value_hull_and_widen():
    a = CertValue.from_bounds(0.0, 1.0)
    b = CertValue.from_bounds(2.0, 3.0)
    hull = a.hull(b)
    assert hull.encloses(a) and hull.encloses(b)
    assert a.widen(1.0).contains(-0.9)
    assert cert_sum([CertValue.exact(0.1)] * 10).contains(1.0)


def test_window_query():
    w = WindowQuery(20.0, 1.5)
    assert (w.low, w.high) == (18.5, 21.5)
    with pytest.raises(DomainError):
        WindowQuery(20.0, -1.0)


def test_bound_breakdown_scaling():
    b = BoundBreakdown.from_terms(10.0, 4.0, -2.0, T=11.0)
    assert b.total == 12.0
    half = b.scaled(0.5, a=1.0)
    assert half.total == 6.0
    assert half.as_dict() == {"total": 6.0, "main_term": 5.0, "middle_term": 2.0, "degree_term": -1.0, "T": 11.0, "a": 1.0}


def test_parse_field_descriptor():
    field = parse_field_descriptor("# Q(sqrt 5)\ndegree = 2\nr1 = 2\nr2 = 0\nlog_disc = 1.6094379124341003\n")
    assert field.degree == 2 and field.r1 == 2
    with pytest.raises(ParseError) as info:
        parse_field_descriptor("degree = 2\nrank = 1\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_field_descriptor("degree = 2\ndegree = 2\n")
    with pytest.raises(ParseError):
        parse_field_descriptor("degree = 2\nr1 = 2\n")
    with pytest.raises(SignatureMismatch):
        parse_field_descriptor("degree = 3\nr1 = 2\nr2 = 0\nlog_disc = 2.0\n")


def test_load_field(tmp_path):
    assert load_field("Q") is RATIONALS
    assert load_field(None) is RATIONALS
    path = tmp_path / "field.txt"
    path.write_text("degree = 2\nr1 = 0\nr2 = 1\nlog_disc = 1.0986122886681098\n", encoding="utf-8")
    assert load_field(str(path)).r2 == 1
    with pytest.raises(ParseError):
        load_field(str(tmp_path / "missing.txt"))


def test_with_log_disc(quadratic_field):
    bigger = with_log_disc(quadratic_field, 5.0)
    assert bigger.log_disc == 5.0 and bigger.degree == quadratic_field.degree
