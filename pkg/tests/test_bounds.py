import math

import numpy as np
import numpy.testing as npt
import pytest

from bounds import (
    CORRECTED_LEVEL,
    ContourTerm,
    ContourTermKind,
    bound_multiplicity,
    bound_window,
    contour_sum,
    contour_term_bound,
    corollary1_bound,
    corollary1_sigma,
    corollary2_margin,
    critical_line_remainder_bound,
    elementary_window_bound,
    f_tilde,
    f_upper_assembly,
    multiplicity_sigma_scan,
    richardson_window_limit,
    rounded_multiplicity_bound,
    rounded_window_bound,
    subcheck1_value,
    term_iii_sharp,
    threshold_L,
    trudgian_count,
    unconditional_window_bound,
    unit_window_count_bound,
    window_bound_limit,
    zero_sum_bound,
    zeta_logderiv_bound,
)
from core import RATIONALS, build_field, conductor_q, with_log_disc
from exceptions import DomainError


def _random_fields(count, seed=5):
    rng = np.random.default_rng(seed)
    fields = []
    for _ in range(count):
        degree = int(rng.integers(2, 11))
        r2 = int(rng.integers(0, degree // 2 + 1))
        fields.append(build_field(degree, degree - 2 * r2, r2, float(rng.uniform(0.5, 100.0))))
    return fields


def test_trudgian_count_bracket(rationals):
    count = trudgian_count(rationals, 100.0)
    main = (100.0 / math.pi) * math.log(100.0 / (2.0 * math.pi * math.e))
    npt.assert_allclose(count.main, main)
    npt.assert_allclose(count.upper - count.lower, 2.0 * (0.317 * math.log(100.0 / (2.0 * math.pi)) + 6.9157 + 3.482))
    # zeta has 29 zeros with 0 < gamma <= 100
    assert count.lower <= 58 <= count.upper
    with pytest.raises(DomainError):
        trudgian_count(rationals, 0.5)


def test_unconditional_window_bound(rationals):
    value = unconditional_window_bound(rationals, 100.0, 1.0)
    assert value > 0
    with pytest.raises(DomainError):
        unconditional_window_bound(rationals, 1.5, 1.0)


def test_unit_window_and_zero_sum(rationals, quadratic_field):
    npt.assert_allclose(unit_window_count_bound(rationals, 0.5), 5.19 + 3.49)
    npt.assert_allclose(unit_window_count_bound(rationals, 100.0), 0.636 * math.log(100.0 / (2.0 * math.pi)) + 6.92 + 3.49)
    assert unit_window_count_bound(quadratic_field, 100.0) > unit_window_count_bound(rationals, 100.0)
    npt.assert_allclose(zero_sum_bound(rationals, 1.0, 100.0, 0.25), 46.9449, atol=2e-3)
    with pytest.raises(DomainError):
        zero_sum_bound(rationals, 1.0, 1.5, 0.5)


def test_zero_sum_bound_dominates_zero_table(rationals, zeta_table):
    gammas = np.concatenate([-zeta_table.ordinates, zeta_table.ordinates])
    for t in np.arange(15.0, 900.0, 7.3):
        for c in (0.5, 1.0, 2.0):
            near = gammas[np.abs(gammas - t) <= c]
            for u in (0.05, 0.25, 1.0):
                total = float(np.sum(1.0 / np.abs(u + 1j * (near - t))))
                assert total <= zero_sum_bound(rationals, c, float(t), u), (t, c, u)


def test_contour_terms(rationals):
    term_i = contour_term_bound(ContourTermKind(ContourTerm.TERM_I, 0.75, 0.0, 0.01), rationals)
    npt.assert_allclose(term_i, 0.01 ** -0.25 / 0.25 + 0.14 + 4.0)
    npt.assert_allclose(term_i, 16.79, atol=5e-3)
    with pytest.raises(DomainError):
        contour_term_bound(ContourTermKind(ContourTerm.TERM_II, 0.75, 1.0, 0.01), rationals)
    with pytest.raises(DomainError):
        contour_term_bound(ContourTermKind(ContourTerm.TERM_III, 0.75, 5.0, 0.01), rationals)
    with pytest.raises(DomainError):
        contour_term_bound(ContourTermKind(ContourTerm.TERM_I, 0.5, 0.0, 0.01), rationals)
    with pytest.raises(DomainError):
        contour_term_bound(ContourTermKind(ContourTerm.TERM_I, 0.75, 0.0, 1.5), rationals)


def test_term_iv_pieces(rationals):
    delta = conductor_q(rationals, 100.0) ** -2
    kinds = {term: ContourTermKind(term, 0.75, 100.0, delta) for term in ContourTerm}
    iva = contour_term_bound(kinds[ContourTerm.TERM_IVa], rationals)
    ivb = contour_term_bound(kinds[ContourTerm.TERM_IVb], rationals)
    iv = contour_term_bound(kinds[ContourTerm.TERM_IV], rationals)
    assert iva + ivb <= iv
    npt.assert_allclose(iv, 1.947, atol=2e-3)


def test_term_iii_sharp_below_simplified(rationals):
    sharp = term_iii_sharp(rationals, 0.75, 100.0, 0.01)
    simplified = contour_term_bound(ContourTermKind(ContourTerm.TERM_III, 0.75, 100.0, 0.01), rationals)
    assert sharp <= simplified


def test_contour_sum_below_logderiv_bound(rationals):
    total = contour_sum(rationals, 0.75, 100.0)
    bound = zeta_logderiv_bound(rationals, 0.75, 100.0)
    npt.assert_allclose(total, 38.41, atol=0.02)
    npt.assert_allclose(bound.total, 45.14, atol=0.02)
    assert total <= bound.total
    assert bound.main_term == 0.0


def test_f_tilde_and_assembly(rationals):
    ft = f_tilde(rationals, 0.75, 100.0)
    npt.assert_allclose(ft.total, 97.87, atol=0.02)
    npt.assert_allclose(ft.main_term, conductor_q(rationals, 100.0))
    assembled = f_upper_assembly(rationals, 0.75, 100.0)
    npt.assert_allclose(assembled, 93.05, atol=0.02)
    assert assembled <= ft.total
    with pytest.raises(DomainError):
        f_tilde(rationals, 0.75, 9.0)
    with pytest.raises(DomainError):
        f_tilde(rationals, 1.0, 20.0)


def test_bound_window(rationals):
    result = bound_window(rationals, 11.0, 1.0)
    npt.assert_allclose(result.total, 46.544977, atol=1e-6)
    assert result.params["a"] == 1.0
    npt.assert_allclose(result.main_term + result.middle_term + result.degree_term, result.total)
    with pytest.raises(DomainError):
        bound_window(rationals, 11.0, 2.0)
    with pytest.raises(DomainError):
        bound_window(rationals, 10.5, 1.0)


def test_bound_window_monotone_in_discriminant(quadratic_field):
    values = [bound_window(with_log_disc(quadratic_field, d), 50.0, 1.0).total for d in (1.0, 5.0, 20.0, 80.0)]
    assert values == sorted(values)


@pytest.mark.parametrize("sigma", [0.55, 0.75, 0.95])
def test_bound_multiplicity_monotone_in_discriminant(quadratic_field, sigma):
    values = [bound_multiplicity(with_log_disc(quadratic_field, d), 50.0, sigma).total for d in (1.0, 5.0, 20.0, 80.0, 1000.0)]
    assert all(low < high for low, high in zip(values[:-1], values[1:]))


def test_rounded_displays_dominate_exact_values():
    for field in [RATIONALS] + _random_fields(50):
        assert bound_window(field, 11.0, 1.0).total <= rounded_window_bound(field, 11.0, 1.0)
        assert bound_window(field, 10.5, 0.5).total <= rounded_window_bound(field, 10.5, 0.5)
        assert bound_multiplicity(field, 10.0, 0.75).total <= rounded_multiplicity_bound(field, 10.0)
    npt.assert_allclose(bound_window(RATIONALS, 10.5, 0.5).total, 52.315, atol=0.01)
    with pytest.raises(DomainError):
        rounded_window_bound(RATIONALS, 20.0, 0.75)


def test_elementary_window_bound(rationals):
    value = elementary_window_bound(rationals, 20.0, 0.25)
    npt.assert_allclose(value.total, 0.25 * f_tilde(rationals, 0.75, 20.0).total)
    with pytest.raises(DomainError):
        elementary_window_bound(rationals, 20.0, 0.5)


def test_multiplicity_and_corollary1(rationals):
    scan = multiplicity_sigma_scan(rationals, 100.0, (0.6, 0.75, 0.9))
    assert set(scan) == {0.6, 0.75, 0.9}
    npt.assert_allclose(corollary1_bound(rationals, 10.0), 17.74, atol=0.01)
    sigma = corollary1_sigma(rationals, 10.0)
    npt.assert_allclose(bound_multiplicity(rationals, 10.0, sigma).total, 14.93, atol=0.01)
    assert bound_multiplicity(rationals, 10.0, sigma).total <= corollary1_bound(rationals, 10.0)


def test_multiplicity_sigma_scan_interior_minimum(quadratic_field):
    field = with_log_disc(quadratic_field, 1000.0)
    sigmas = np.linspace(0.51, 0.99, 49)
    scan = multiplicity_sigma_scan(field, 100.0, sigmas)
    values = np.array(list(scan.values()))
    best = int(np.argmin(values))
    assert 0 < best < len(sigmas) - 1
    assert 0.7 <= sigmas[best] <= 0.85
    assert values[best] < 0.7 * min(values[0], values[-1])


def test_critical_line_remainder_bound(rationals, quadratic_field):
    value = critical_line_remainder_bound(rationals, 100.5)
    npt.assert_allclose(value, 11.7 + 7.0 / (1.0 + 2.0 * 100.5 ** 2) + 2.18 * math.log(101.5) + 21.6 + 10.0 / abs(complex(1.0, 402.0)))
    assert critical_line_remainder_bound(quadratic_field, 100.5) > value


def test_corollary2_endpoints():
    low = corollary2_margin(23.0)
    high = corollary2_margin(1e55)
    assert low.subcheck1 and low.subcheck2
    assert high.subcheck1 and high.subcheck2
    npt.assert_allclose(subcheck1_value(math.log(54.0)), 1.882, atol=1e-3)
    npt.assert_allclose(subcheck1_value(math.log(1e55 + 31.0)), 1.996, atol=1e-3)
    with pytest.raises(DomainError):
        corollary2_margin(10.0)
    with pytest.raises(DomainError):
        corollary2_margin(L=3.0)


def test_corollary2_log_uniform_sweep():
    rng = np.random.default_rng(0)
    for log_t in np.exp(rng.uniform(math.log(23.0), math.log(1e55), 1000)):
        margin = corollary2_margin(float(log_t))
        assert margin.subcheck1 and margin.subcheck2


def test_threshold_L():
    L = threshold_L()
    assert abs(L - 162546.6) <= 0.1
    assert subcheck1_value(L) <= CORRECTED_LEVEL
    assert corollary2_margin(L=162546.6).L_threshold_ok
    assert not corollary2_margin(L=162546.7).L_threshold_ok


def test_richardson_window_limit(rationals, cubic_field):
    for field in (rationals, cubic_field):
        limit = window_bound_limit(field, 100.0)
        extrapolated = richardson_window_limit(field, 100.0)
        raw = bound_window(field, 100.0, 0.001).total
        assert abs(extrapolated - limit) <= 2e-4 * limit
        assert abs(raw - limit) > 10.0 * abs(extrapolated - limit)
    npt.assert_allclose(window_bound_limit(rationals, 100.0), 1.28 * (math.log(100.0) + 31.0) + 0.14)
    with pytest.raises(DomainError):
        richardson_window_limit(rationals, 100.0, (0.004, 0.003))
