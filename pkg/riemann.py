"""
Desk-scale oracles for K = Q.

Euler-Maclaurin evaluation of zeta and zeta', the zero-free representation
of f_Q(s) = sum_rho Re 2/(s - rho), the same quantity summed over a zero
table with a certified tail, the von Mangoldt sieve with the weighted
Chebyshev function psi1(x) = sum_{n<=x} Lambda(n)(x - n) and the smoothed
prime sum sum Lambda(n) n^-sigma e^(-delta n).
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from bounds import ContourTerm, ContourTermKind, contour_term_bound, critical_line_remainder_bound, unit_window_count_bound
from config import get_cache
from core import RATIONALS, CertValue, FieldInvariants
from exceptions import DomainError, InsufficientTable, PoleError, RangeError, UnsupportedField
from specfun import GammaKind, eval_gamma, log_abs_gamma_parts
from zerodata import ZeroTable

_EPS = float(np.finfo(float).eps)
_LOG_PI = math.log(math.pi)

# B_2, ..., B_8 in the correction, B_10 in the remainder
_EM_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30)
_EM_REMAINDER_BERNOULLI = 5 / 66
_EM_MIN_TERMS = 50

MAX_HEIGHT = 1000.0
MIN_SIGMA = -1.0
MAX_SIEVE = 10 ** 7
PSI1_COEFFS = (0.0462, 1.838)
TAIL_EXPLICIT_TERMS = 20000
PRIME_SUM_CUTOFF = 50.0


@dataclass(frozen=True)
class ComplexBall:
    """A complex enclosure: every value within ``rad`` of ``mid``."""

    mid: complex
    rad: float

    @property
    def re(self) -> CertValue:
        return CertValue(self.mid.real, self.rad)

    @property
    def im(self) -> CertValue:
        return CertValue(self.mid.imag, self.rad)

    @property
    def abs(self) -> CertValue:
        return CertValue(abs(self.mid), self.rad)

    def contains(self, z: complex) -> bool:
        return abs(z - self.mid) <= self.rad


@dataclass(frozen=True)
class ZetaEnclosure:
    zeta: ComplexBall
    derivative: Optional[ComplexBall] = None


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    mangoldt: np.ndarray
    psi: np.ndarray
    weighted: np.ndarray

    def is_prime_power(self, n: int) -> bool:
        return bool(self.mangoldt[n] > 0)


@dataclass(frozen=True)
class Psi1Check:
    value: float
    bound: float
    bound_holds: bool


@dataclass(frozen=True)
class PrimeSumCheck:
    lhs: CertValue
    rhs: float
    holds: bool


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool


# Sieve


def _mangoldt(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime)
    mangoldt = np.zeros(limit + 1, dtype=float)
    mangoldt[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)]:
        power = int(p) * int(p)
        while power <= limit:
            mangoldt[power] = math.log(p)
            power *= int(p)
    logger.info(f"Sieved {primes.size} primes up to {limit}")
    return mangoldt


def prime_table(limit: int) -> PrimeTable:
    """Lambda(n) for n <= limit, with running sums of Lambda(n) and n Lambda(n)."""
    if int(limit) != limit or limit < 1:
        raise DomainError(f"prime table limit must be a positive integer, got {limit}")
    limit = int(limit)
    if limit > MAX_SIEVE:
        raise RangeError(f"prime table limit {limit} exceeds {MAX_SIEVE}")

    cache = get_cache()
    key = f"mangoldt:{limit}"
    if cache is not None and key in cache:
        mangoldt = cache[key]
        logger.debug(f"von Mangoldt table up to {limit} from cache")
    else:
        mangoldt = _mangoldt(limit)
        if cache is not None:
            cache[key] = mangoldt

    n = np.arange(limit + 1, dtype=float)
    return PrimeTable(limit, mangoldt, np.cumsum(mangoldt), np.cumsum(n * mangoldt))


def _psi1_bound(x):
    a, b = PSI1_COEFFS
    return a * np.power(x, 1.5) + b * x


def chebyshev_psi1(x: float, table: PrimeTable) -> Psi1Check:
    """psi1(x) = x psi(x) - sum_{n<=x} n Lambda(n), tested against |psi1(x) - x^2/2| <= 0.0462 x^1.5 + 1.838 x."""
    if x < 1:
        raise DomainError(f"chebyshev_psi1 needs x >= 1, got {x}")
    if x > table.limit:
        raise RangeError(f"x = {x} exceeds the prime table limit {table.limit}")
    k = int(math.floor(x))
    value = x * float(table.psi[k]) - float(table.weighted[k])
    bound = float(_psi1_bound(x))
    return Psi1Check(value, bound, abs(value - 0.5 * x * x) <= bound)


def chebyshev_psi1_sweep(table: PrimeTable, xs: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised chebyshev_psi1: (values, bound_holds) arrays."""
    xs = np.asarray(xs, dtype=float)
    if xs.size and (xs.min() < 1 or xs.max() > table.limit):
        raise RangeError(f"sweep must lie in [1, {table.limit}]")
    k = np.floor(xs).astype(np.int64)
    values = xs * table.psi[k] - table.weighted[k]
    return values, np.abs(values - 0.5 * xs * xs) <= _psi1_bound(xs)


def prime_exp_sum(sigma: float, delta: float, table: PrimeTable) -> PrimeSumCheck:
    """
    sum_n Lambda(n) n^-sigma e^(-delta n) against delta^(sigma-1)/(1-sigma) + 0.07/(2 sigma-1) + 4.

    The sum is cut at N = ceil(50 / delta); with r = e^-delta the rest is at most
    r^(N+1) (log N / (1 - r) + 1 / (N (1 - r)^2)).
    """
    if not 0.5 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (1/2, 1), got {sigma}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    N = int(math.ceil(PRIME_SUM_CUTOFF / delta))
    if table.limit < N:
        raise RangeError(f"prime table up to {table.limit} is too short for delta = {delta}; need {N}")

    n = np.arange(1, N + 1, dtype=float)
    terms = table.mangoldt[1 : N + 1] * np.exp(-sigma * np.log(n) - delta * n)
    total = math.fsum(terms)
    r = math.exp(-delta)
    one_minus_r = -math.expm1(-delta)
    tail = r ** (N + 1) * (math.log(N) / one_minus_r + 1.0 / (N * one_minus_r ** 2))
    lhs = CertValue(total, tail + 4.0 * _EPS * N * total)

    rhs = contour_term_bound(ContourTermKind(ContourTerm.TERM_I, sigma, 0.0, delta), RATIONALS)
    logger.debug(f"prime_exp_sum sigma={sigma} delta={delta}: {lhs} vs {rhs:.10g} (N={N})")
    return PrimeSumCheck(lhs, rhs, lhs.upper <= rhs)


# Zeta


def _check_zeta_range(sigma: float, t: float) -> None:
    if abs(t) > MAX_HEIGHT or sigma < MIN_SIGMA:
        raise RangeError(f"zeta oracle supports sigma >= {MIN_SIGMA}, |t| <= {MAX_HEIGHT}; got ({sigma}, {t})")
    if sigma == 1.0 and t == 0.0:
        raise PoleError("zeta has a pole at s = 1", module="riemann")


def zeta_em(sigma: float, t: float, want_derivative: bool = False) -> ZetaEnclosure:
    """
    zeta(s) (and zeta'(s)) by Euler-Maclaurin with N = max(50, ceil(2|t|)) terms:
        zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
                  + sum_{k=1..4} B_2k/(2k)! s(s+1)...(s+2k-2) N^(-s-2k+1) + R,
        |R| <= |s(s+1)...(s+9) B_10| / (10! (sigma+9)) N^(-sigma-9).
    R' differentiates both the rising factorial and x^(-s-10) under the remainder integral.
    """
    _check_zeta_range(sigma, t)
    s = complex(sigma, t)
    N = max(_EM_MIN_TERMS, int(math.ceil(2.0 * abs(t))))
    log_N = math.log(N)

    n = np.arange(1, N, dtype=float)
    log_n = np.log(n)
    powers = np.exp(-s * log_n)
    head = complex(powers.sum())
    magnitude = float(np.abs(powers).sum())

    N_s = complex(np.exp(-s * log_N))
    value = head + N * N_s / (s - 1.0) + 0.5 * N_s
    deriv = complex(-(log_n * powers).sum()) - log_N * N * N_s / (s - 1.0) - N * N_s / (s - 1.0) ** 2
    deriv -= 0.5 * log_N * N_s

    # rising factorial (s)_j and its derivative, updated in place
    rising, rising_d = 1.0 + 0j, 0j
    j = 0
    for k, b2k in enumerate(_EM_BERNOULLI, start=1):
        while j < 2 * k - 1:
            rising, rising_d = rising * (s + j), rising_d * (s + j) + rising
            j += 1
        factorial = math.factorial(2 * k)
        power = complex(np.exp(-(s + 2 * k - 1) * log_N))
        value += b2k / factorial * rising * power
        deriv += b2k / factorial * (rising_d - log_N * rising) * power
        magnitude += abs(b2k / factorial * rising * power)

    # R(s) = -(s)_p / p! * int_N^oo B~_p(x) x^(-s-p) dx with p = 2m + 2, |B~_p| <= |B_p|
    m = len(_EM_BERNOULLI)
    factors = [abs(s + i) for i in range(2 * m + 2)]
    poch = math.prod(factors)
    # |d/ds (s)_p| <= sum_i prod_{j != i} |s + j|
    poch_d = math.fsum(math.prod(factors[:i] + factors[i + 1 :]) for i in range(len(factors)))
    scale = abs(_EM_REMAINDER_BERNOULLI) / math.factorial(2 * m + 2)
    q = sigma + 2 * m + 1
    tail = N ** (-q)
    remainder = scale * poch * tail / q
    rounding = (N + abs(t) * log_N + 10.0) * _EPS * (magnitude + abs(N * N_s / (s - 1.0)))
    zeta = ComplexBall(value, remainder + rounding)

    derivative = None
    if want_derivative:
        # int_N^oo x^(-q-1) log x dx = N^(-q) (log N / q + 1 / q^2)
        d_remainder = scale * tail * (poch_d / q + poch * (log_N / q + 1.0 / q ** 2))
        d_rounding = (N + abs(t) * log_N + 10.0) * _EPS * (magnitude * log_N + abs(deriv))
        derivative = ComplexBall(deriv, d_remainder + d_rounding)
    logger.debug(f"zeta_em at {s}: N={N}, zeta={value:.12g} rad={zeta.rad:.3g}")
    return ZetaEnclosure(zeta, derivative)


def zeta_logderiv(sigma: float, t: float) -> ComplexBall:
    """zeta'/zeta(s) as a ball; PoleError when the zeta enclosure reaches zero."""
    result = zeta_em(sigma, t, want_derivative=True)
    Z, D = result.zeta, result.derivative
    if abs(Z.mid) <= Z.rad:
        raise PoleError(f"zeta enclosure at {complex(sigma, t)} contains zero", module="riemann")
    w = D.mid / Z.mid
    rad = (D.rad + abs(w) * Z.rad) / (abs(Z.mid) - Z.rad)
    return ComplexBall(w, rad + 4.0 * _EPS * abs(w))


def xi_completed(sigma: float, t: float) -> CertValue:
    """log|xi(s)| for xi(s) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s)."""
    s = complex(sigma, t)
    if s == 0:
        raise PoleError("xi is evaluated through Gamma(s/2), which has a pole at s = 0", module="riemann")
    zeta = zeta_em(sigma, t).zeta
    log_gamma_mid, log_gamma_rad = log_abs_gamma_parts(0.5 * s)
    log_zeta = zeta.abs.log()
    polar = math.log(abs(s)) + math.log(abs(s - 1.0)) - math.log(2.0) - 0.5 * sigma * _LOG_PI
    return log_zeta + CertValue(float(log_gamma_mid[0]), float(log_gamma_rad[0])) + polar


def xi_symmetry_check(sigma: float, t: float) -> InequalityCheck:
    """|log|xi(s)| - log|xi(1 - s)|| against the sum of the two radii."""
    lhs = xi_completed(sigma, t)
    rhs = xi_completed(1.0 - sigma, -t)
    gap = abs(lhs.mid - rhs.mid)
    allowed = lhs.rad + rhs.rad + 8.0 * _EPS * (abs(lhs.mid) + 1.0)
    return InequalityCheck(gap, allowed, gap <= allowed)


def dirichlet_dominance(sigma: float, t: float) -> InequalityCheck:
    """|zeta'/zeta(sigma + it)| <= -zeta'/zeta(sigma) for sigma > 1."""
    if sigma <= 1:
        raise DomainError(f"dirichlet_dominance needs sigma > 1, got {sigma}")
    lhs = zeta_logderiv(sigma, t)
    rhs = zeta_logderiv(sigma, 0.0)
    upper = abs(lhs.mid) + lhs.rad
    lower = -rhs.mid.real - rhs.rad
    return InequalityCheck(upper, lower, upper <= lower)


# f_K


def f_explicit(field: FieldInvariants, sigma: float, t: float) -> CertValue:
    """
    f_K(s) = 2 Re zeta'/zeta(s) + log(disc_K / pi^n_K) + Re(2/s + 2/(s-1))
             + (r1 + r2) Re psi(s/2) + r2 Re psi((s+1)/2),
    available for K = Q only.
    """
    if not field.is_rational:
        raise UnsupportedField(f"f_explicit needs a zeta oracle for K; only Q is available, got {field.describe()}")
    if not 0.0 < sigma <= 2.0:
        raise DomainError(f"f_explicit needs sigma in (0, 2], got {sigma}")
    s = complex(sigma, t)
    if s == 1.0:
        raise PoleError("f_explicit has a pole at s = 1", module="riemann")

    logderiv = zeta_logderiv(sigma, t)
    polar = (2.0 / s + 2.0 / (s - 1.0)).real
    digamma = eval_gamma(GammaKind.DIGAMMA, 0.5 * sigma, 0.5 * t)
    value = 2.0 * logderiv.re + CertValue.exact(polar - _LOG_PI) + digamma
    return value.widen(4.0 * _EPS * (abs(polar) + _LOG_PI))


def _tail_bound(field: FieldInvariants, alpha: float, t: float, cutoff_G: float) -> float:
    # zeros beyond the cutoff sit in unit windows around t +- k, k >= floor(G), at distance >= k - 1
    k0 = int(math.floor(cutoff_G))
    k = np.arange(k0, k0 + TAIL_EXPLICIT_TERMS, dtype=float)
    counts = np.array([unit_window_count_bound(field, t + kk) + unit_window_count_bound(field, t - kk) for kk in k])
    explicit = math.fsum(2.0 * alpha * counts / (alpha * alpha + (k - 1.0) ** 2))

    # unit_window_count_bound(x) <= A + c log max(|x|, 1); sum_{j >= v+1} log(B + j) / j^2 <= int_v^inf
    n = field.degree
    A = 0.954 * field.log_disc + 6.92 * n + 3.49
    c = 0.636 * n
    v = float(k0 + TAIL_EXPLICIT_TERMS - 1)
    B = abs(t) + 2.0
    rest = 4.0 * alpha * (A / (v - 1.0) + c * (math.log(B + v - 1.0) / (v - 1.0) + math.log((B + v - 1.0) / (v - 1.0)) / B))
    return explicit + rest


def f_from_zeros(table: ZeroTable, sigma: float, t: float, cutoff_G: float) -> CertValue:
    """
    f_K(s) = sum_rho Re 2/(s - rho) over the table zeros (both conjugates) with
    |gamma - t| <= G, plus a radius covering every zero beyond the cutoff.
    """
    if sigma <= 0.5:
        raise DomainError(f"f_from_zeros needs sigma > 1/2, got {sigma}")
    if cutoff_G < 2:
        raise DomainError(f"cutoff_G must be at least 2, got {cutoff_G}")
    if abs(t) + cutoff_G > table.height:
        raise InsufficientTable(f"need zeros up to {abs(t) + cutoff_G}, table covers {table.height}")

    alpha = sigma - 0.5
    gammas = np.concatenate([table.ordinates, -table.ordinates])
    offsets = gammas - t
    near = offsets[np.abs(offsets) <= cutoff_G]
    terms = 2.0 * alpha / (alpha * alpha + near * near)
    partial = math.fsum(terms)
    tail = _tail_bound(table.field, alpha, t, cutoff_G)
    logger.debug(f"f_from_zeros at ({sigma}, {t}): {near.size} zeros, partial={partial:.12g}, tail<={tail:.3g}")
    return CertValue(partial, tail + 4.0 * _EPS * max(near.size, 1) * partial)


def critical_line_remainder(table: ZeroTable, t: float) -> InequalityCheck:
    """
    |zeta'/zeta(1/4 + it) - sum_{|gamma - t| <= 1} 1/(s - rho)| for zeta against
    critical_line_remainder_bound.
    """
    if not table.field.is_rational:
        raise UnsupportedField("critical_line_remainder evaluates zeta itself; the table must be for Q")
    if float(t).is_integer() or abs(t) < 2:
        raise DomainError(f"t must be a non-integer with |t| >= 2, got {t}")
    if abs(t) + 1 > table.height:
        raise InsufficientTable(f"need zeros up to {abs(t) + 1}, table covers {table.height}")
    s = complex(0.25, t)
    gammas = np.concatenate([table.ordinates, -table.ordinates])
    near = gammas[np.abs(gammas - t) <= 1.0]
    local = complex(np.sum(1.0 / (s - (0.5 + 1j * near)))) if near.size else 0j
    logderiv = zeta_logderiv(0.25, t)
    lhs = abs(logderiv.mid - local) + logderiv.rad
    rhs = critical_line_remainder_bound(RATIONALS, t)
    return InequalityCheck(lhs, rhs, lhs <= rhs)
