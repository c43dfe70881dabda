import math

import mpmath
import numpy as np
import numpy.testing as npt
import pytest

from bounds import f_tilde
from core import RATIONALS as RATIONALS_FIELD
from exceptions import DomainError, InsufficientTable, PoleError, RangeError, UnsupportedField
from riemann import (
    chebyshev_psi1,
    chebyshev_psi1_sweep,
    critical_line_remainder,
    dirichlet_dominance,
    f_explicit,
    f_from_zeros,
    prime_exp_sum,
    prime_table,
    xi_symmetry_check,
    zeta_em,
    zeta_logderiv,
)


def _overlap(x, y):
    return x.lower <= y.upper and y.lower <= x.upper


@pytest.fixture(scope="module")
def primes():
    return prime_table(10000)


def test_zeta_reference_values():
    at_two = zeta_em(2.0, 0.0, want_derivative=True)
    assert at_two.zeta.contains(math.pi ** 2 / 6.0)
    assert at_two.zeta.rad <= 1e-12
    assert at_two.derivative.contains(-0.93754825431584375)
    assert abs(zeta_em(0.5, 14.134725141734693).zeta.mid) < 1e-6


def test_zeta_against_mpmath():
    rng = np.random.default_rng(17)
    for _ in range(30):
        sigma = float(rng.uniform(-1.0, 3.0))
        t = float(rng.uniform(0.5, 300.0))
        ball = zeta_em(sigma, t).zeta
        reference = complex(mpmath.zeta(mpmath.mpc(sigma, t)))
        assert abs(reference - ball.mid) <= ball.rad + 1e-12 * abs(reference)
        assert ball.rad <= 1e-8 * max(1.0, abs(reference))


def test_zeta_derivative_against_mpmath():
    rng = np.random.default_rng(23)
    for _ in range(30):
        sigma = float(rng.uniform(-1.0, 3.0))
        t = float(rng.uniform(0.5, 300.0))
        ball = zeta_em(sigma, t, want_derivative=True).derivative
        reference = complex(mpmath.zeta(mpmath.mpc(sigma, t), derivative=1))
        assert abs(reference - ball.mid) <= ball.rad + 1e-12 * abs(reference)
        assert ball.rad <= 1e-7 * max(1.0, abs(reference))


def test_zeta_errors():
    with pytest.raises(RangeError):
        zeta_em(0.5, 2000.0)
    with pytest.raises(RangeError):
        zeta_em(-2.0, 10.0)
    with pytest.raises(PoleError):
        zeta_em(1.0, 0.0)


def test_zeta_logderiv():
    ball = zeta_logderiv(2.0, 0.0)
    npt.assert_allclose(ball.mid.real, -0.5699610, atol=1e-7)
    assert abs(ball.mid.imag) <= ball.rad
    with pytest.raises(PoleError):
        zeta_logderiv(1.0, 0.0)


def test_f_explicit():
    value = f_explicit(RATIONALS_FIELD, 2.0, 0.0)
    npt.assert_allclose(value.mid, 0.138132, atol=1e-6)
    for sigma, t in ((1.5, 0.0), (2.0, 0.0), (0.75, 10.0), (0.75, 30.0)):
        assert f_explicit(RATIONALS_FIELD, sigma, t).lower > 0
    # the first zero sits at distance 0.1
    assert f_explicit(RATIONALS_FIELD, 0.6, 14.134725).lower > 5.0


def test_f_explicit_errors(quadratic_field):
    with pytest.raises(UnsupportedField):
        f_explicit(quadratic_field, 2.0, 0.0)
    with pytest.raises(DomainError):
        f_explicit(RATIONALS_FIELD, 2.5, 0.0)
    with pytest.raises(PoleError):
        f_explicit(RATIONALS_FIELD, 1.0, 0.0)


def test_f_explicit_below_f_tilde():
    assert f_explicit(RATIONALS_FIELD, 0.75, 100.0).upper <= f_tilde(RATIONALS_FIELD, 0.75, 100.0).total


def test_prime_table(primes):
    npt.assert_allclose(primes.mangoldt[8], math.log(2.0))
    assert primes.mangoldt[12] == 0.0
    assert primes.is_prime_power(49) and not primes.is_prime_power(1)
    npt.assert_allclose(primes.psi[100], 94.0453, atol=1e-4)
    with pytest.raises(DomainError):
        prime_table(0)
    with pytest.raises(RangeError):
        prime_table(10 ** 7 + 1)


def test_chebyshev_psi1(primes):
    check = chebyshev_psi1(10.0, primes)
    npt.assert_allclose(check.value, 33.764173, atol=1e-6)
    assert check.bound_holds
    with pytest.raises(DomainError):
        chebyshev_psi1(0.5, primes)
    with pytest.raises(RangeError):
        chebyshev_psi1(20000.0, primes)
    values, holds = chebyshev_psi1_sweep(primes, np.linspace(1.0, 10000.0, 5000))
    assert values.shape == (5000,)
    assert holds.all()


def test_prime_exp_sum(primes):
    check = prime_exp_sum(0.75, 0.01, primes)
    npt.assert_allclose(check.rhs, 16.79, atol=5e-3)
    npt.assert_allclose(check.lhs.mid, 6.854887, atol=1e-4)
    assert check.holds
    with pytest.raises(RangeError):
        prime_exp_sum(0.75, 0.001, primes)
    with pytest.raises(DomainError):
        prime_exp_sum(1.0, 0.01, primes)


def test_xi_symmetry_and_dirichlet_dominance():
    assert xi_symmetry_check(0.3, 20.0).holds
    assert xi_symmetry_check(0.9, 100.0).holds
    assert dirichlet_dominance(1.5, 10.0).holds
    assert dirichlet_dominance(2.0, 50.0).holds
    with pytest.raises(DomainError):
        dirichlet_dominance(1.0, 10.0)


def test_f_from_zeros_matches_f_explicit(zeta_table):
    from_zeros = f_from_zeros(zeta_table, 2.0, 0.0, 1000.0)
    assert _overlap(from_zeros, f_explicit(RATIONALS_FIELD, 2.0, 0.0))
    assert from_zeros.rad < 0.2
    at_hundred = f_from_zeros(zeta_table, 0.75, 100.0, 900.0)
    assert _overlap(at_hundred, f_explicit(RATIONALS_FIELD, 0.75, 100.0))


def test_f_from_zeros_errors(zeta_table):
    with pytest.raises(InsufficientTable):
        f_from_zeros(zeta_table, 0.75, 100.0, 950.0)
    with pytest.raises(DomainError):
        f_from_zeros(zeta_table, 0.5, 100.0, 100.0)
    with pytest.raises(DomainError):
        f_from_zeros(zeta_table, 0.75, 100.0, 1.0)


@pytest.mark.slow
def test_dual_oracle(zeta_table):
    for t in (10.0, 20.0, 50.0, 100.0, 500.0):
        for sigma in (0.6, 0.75, 0.9):
            from_zeros = f_from_zeros(zeta_table, sigma, t, zeta_table.height - t)
            assert _overlap(from_zeros, f_explicit(RATIONALS_FIELD, sigma, t))


def test_critical_line_remainder(zeta_table):
    check = critical_line_remainder(zeta_table, 100.5)
    assert check.holds
    assert critical_line_remainder(zeta_table, 14.5).holds
    with pytest.raises(DomainError):
        critical_line_remainder(zeta_table, 100.0)
    with pytest.raises(InsufficientTable):
        critical_line_remainder(zeta_table, 1009.5)
