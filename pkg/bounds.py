"""
Explicit bounds for zeros of Dedekind zeta functions.

Unconditional counting (Trudgian's N_K bracket and its unit-window and
zero-sum corollaries), the four contour terms bounding zeta_K'/zeta_K in the
critical strip, the GRH majorant f~_K and the window / multiplicity bounds
built on it, and the two corollaries for the multiplicity of a zero.

Everything here is plain binary64: each value is an upper bound with slack
far above rounding level.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence

from loguru import logger

from core import BoundBreakdown, FieldInvariants, conductor_q, w_term
from exceptions import DomainError


@dataclass(frozen=True)
class TrudgianConstants:
    d1: float = 0.317
    d2: float = 6.9157
    d3: float = 3.482


TRUDGIAN = TrudgianConstants()


class ContourTerm(Enum):
    TERM_I = "I"
    TERM_II = "II"
    TERM_III = "III"
    TERM_IVa = "IVa"
    TERM_IVb = "IVb"
    TERM_IV = "IV"


@dataclass(frozen=True)
class ContourTermKind:
    """One contour term together with the point and smoothing parameter."""

    term: ContourTerm
    sigma: float
    t: float = 0.0
    delta: float = 0.5


@dataclass(frozen=True)
class TrudgianCount:
    main: float
    remainder_bound: float

    @property
    def lower(self) -> float:
        return self.main - self.remainder_bound

    @property
    def upper(self) -> float:
        return self.main + self.remainder_bound


@dataclass(frozen=True)
class Corollary2Margin:
    bound_ratio: float
    subcheck1: bool
    subcheck2: bool
    L_threshold_ok: bool
    L: float


def _check_sigma(sigma: float) -> None:
    if not 0.5 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (1/2, 1), got {sigma}")


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")


def trudgian_count(field: FieldInvariants, T: float) -> TrudgianCount:
    """
    N_K(T) (zeros with |gamma| <= T) lies within remainder_bound of
    (T/pi) (n_K log(T / 2 pi e) + log disc_K).
    """
    if T < 1:
        raise DomainError(f"trudgian_count needs T >= 1, got {T}")
    main = (T / math.pi) * (field.degree * math.log(T / (2.0 * math.pi * math.e)) + field.log_disc)
    remainder = TRUDGIAN.d1 * w_term(field, T) + TRUDGIAN.d2 * field.degree + TRUDGIAN.d3
    return TrudgianCount(main, remainder)


def unconditional_window_bound(field: FieldInvariants, T: float, a: float) -> float:
    """n_K(T; a) <= (N_K(T+a) - N_K(T-a)) / 2 with both ends taken from the Trudgian bracket."""
    if a <= 0 or T - a < 1:
        raise DomainError(f"unconditional_window_bound needs a > 0 and T - a >= 1, got T={T}, a={a}")
    high = trudgian_count(field, T + a)
    low = trudgian_count(field, T - a)
    return 0.5 * (high.upper - low.lower)


def unit_window_count_bound(field: FieldInvariants, t: float) -> float:
    """Upper bound for n_K(t; 1)."""
    if abs(t) > 1:
        return 0.636 * w_term(field, abs(t)) + 6.92 * field.degree + 3.49
    return 0.954 * field.log_disc + 5.19 * field.degree + 3.49


def zero_sum_bound(field: FieldInvariants, c: float, t: float, u: float) -> float:
    """Upper bound for the sum over |gamma - t| <= c of 1 / |u + i(gamma - t)|."""
    if c <= 0 or u <= 0 or abs(t) <= c + 1:
        raise DomainError(f"zero_sum_bound needs c > 0, u > 0, |t| > c + 1; got c={c}, t={t}, u={u}")
    w = w_term(field, abs(t))
    return (math.asinh(c / u) / math.pi + TRUDGIAN.d1 / u) * w + (TRUDGIAN.d2 * field.degree + TRUDGIAN.d3) / u


def critical_line_remainder_bound(field: FieldInvariants, t: float) -> float:
    """
    Bound for |zeta_K'/zeta_K(1/4 + it) - sum_{|gamma-t|<=1} 1/(s - rho)|, t not an integer.
    """
    t2 = t * t
    return (
        (2.18 + 3.2 / (1.0 + t2)) * field.log_disc
        + 11.7
        + 7.0 / (1.0 + 2.0 * t2)
        + (2.18 * math.log(abs(t) + 1.0) + 21.6 + 10.0 / abs(complex(1.0, 4.0 * t))) * field.degree
    )


def _term_iii_check(kind: ContourTermKind) -> None:
    if abs(kind.t) < 10:
        raise DomainError(f"{kind.term.value} needs |t| >= 10, got {kind.t}")


def contour_term_bound(kind: ContourTermKind, field: FieldInvariants) -> float:
    """Bound for one term of the contour decomposition of -zeta_K'/zeta_K(s)."""
    sigma, t, delta = kind.sigma, kind.t, kind.delta
    _check_sigma(sigma)
    _check_delta(delta)
    n = field.degree
    eps = 2.0 * sigma - 1.0
    term = kind.term

    if term is ContourTerm.TERM_I:
        return (delta ** (sigma - 1.0) / (1.0 - sigma) + 0.07 / eps + 4.0) * n

    if term is ContourTerm.TERM_II:
        if abs(t) < 2:
            raise DomainError(f"TERM_II needs |t| >= 2, got {t}")
        return math.sqrt(2.0 * math.pi) * math.exp(-0.5 * math.pi * abs(t)) * delta ** (sigma - 1.0)

    _term_iii_check(kind)
    if term is ContourTerm.TERM_III:
        w = w_term(field, abs(t))
        return delta ** (sigma - 0.5) * (
            (math.log(1.0 / eps) / math.pi + 0.64 / eps + 0.82) * w
            + (13.9 / eps + 1.6) * n
            + 6.9 / eps
            + 0.8
        )

    quarter = delta ** (sigma - 0.25) / (2.0 * math.pi)
    log_t1 = math.log(abs(t) + 1.0)
    if term is ContourTerm.TERM_IVa:
        return quarter * (9.16 * field.log_disc + (9.16 * log_t1 + 114.03) * n + 65.88)
    if term is ContourTerm.TERM_IVb:
        return quarter * (
            (4.73 * 2.18 + 0.013 * 3.2) * field.log_disc
            + 4.73 * 11.7
            + 0.007 * 7.0
            + (4.73 * 2.18 * log_t1 + 4.73 * 21.6 + 0.171 * 10.0) * n
        )
    if term is ContourTerm.TERM_IV:
        return (3.11 * field.log_disc + (3.11 * math.log(abs(t)) + 35.0) * n + 20.0) * delta ** (sigma - 0.25)
    raise DomainError(f"unknown contour term {term}")


def term_iii_sharp(field: FieldInvariants, sigma: float, t: float, delta: float) -> float:
    """TERM_III before asinh(4/u) <= log(1/u) + asinh 4 is applied."""
    _check_sigma(sigma)
    _check_delta(delta)
    if abs(t) < 10:
        raise DomainError(f"TERM_III needs |t| >= 10, got {t}")
    eps = 2.0 * sigma - 1.0
    w = w_term(field, abs(t))
    d = TRUDGIAN
    return delta ** (sigma - 0.5) * (
        (math.asinh(4.0 / eps) / math.pi + 2.0 * d.d1 / eps + 0.15) * w
        + (2.0 * d.d2 * field.degree + 2.0 * d.d3) / eps
        + 1.6 * field.degree
        + 0.8
    )


def contour_sum(field: FieldInvariants, sigma: float, t: float, delta: Optional[float] = None) -> float:
    """I + II + III + IV; delta defaults to Q^-2 with Q taken at |t|."""
    if abs(t) < 10:
        raise DomainError(f"contour_sum needs |t| >= 10, got {t}")
    if delta is None:
        delta = conductor_q(field, abs(t)) ** -2
    terms = (ContourTerm.TERM_I, ContourTerm.TERM_II, ContourTerm.TERM_III, ContourTerm.TERM_IV)
    return sum(contour_term_bound(ContourTermKind(term, sigma, t, delta), field) for term in terms)


def _middle_coefficient(field: FieldInvariants, sigma: float) -> float:
    eps = 2.0 * sigma - 1.0
    return field.degree / (1.0 - sigma) + math.log(1.0 / eps) / math.pi + 0.64 / eps + 1.37


def zeta_logderiv_bound(field: FieldInvariants, sigma: float, t: float) -> BoundBreakdown:
    """GRH bound for |zeta_K'/zeta_K(sigma + it)| with Q taken at |t|."""
    _check_sigma(sigma)
    if abs(t) < 10:
        raise DomainError(f"zeta_logderiv_bound needs |t| >= 10, got {t}")
    Q = conductor_q(field, abs(t))
    eps = 2.0 * sigma - 1.0
    middle = _middle_coefficient(field, sigma) * Q ** (2.0 - 2.0 * sigma)
    degree = (0.07 / eps + 4.0) * field.degree
    return BoundBreakdown.from_terms(0.0, middle, degree, sigma=sigma, T=t, Q=Q)


def f_tilde(field: FieldInvariants, sigma: float, T: float) -> BoundBreakdown:
    """
    f~_K(sigma + iT) = Q + 2 (n_K/(1-sigma) + log(1/(2 sigma-1))/pi + 0.64/(2 sigma-1) + 1.37) Q^(2-2 sigma)
                       + (0.14/(2 sigma-1) - 20) n_K
    """
    _check_sigma(sigma)
    if T < 10:
        raise DomainError(f"f_tilde needs T >= 10, got {T}")
    Q = conductor_q(field, T)
    eps = 2.0 * sigma - 1.0
    middle = 2.0 * _middle_coefficient(field, sigma) * Q ** (2.0 - 2.0 * sigma)
    degree = (0.14 / eps - 20.0) * field.degree
    return BoundBreakdown.from_terms(Q, middle, degree, sigma=sigma, T=T, Q=Q)


def f_upper_assembly(field: FieldInvariants, sigma: float, t: float) -> float:
    """
    Upper bound for f_K(s) from its zero-free representation
        f_K(s) = 2 Re zeta_K'/zeta_K(s) + log(disc_K / pi^n_K) + Re(2/s + 2/(s-1))
                 + (r1 + r2) Re psi(s/2) + r2 Re psi((s+1)/2),
    with |zeta_K'/zeta_K| from zeta_logderiv_bound and Re psi(z) <= log|z - 1/2|.
    """
    _check_sigma(sigma)
    if abs(t) < 10:
        raise DomainError(f"f_upper_assembly needs |t| >= 10, got {t}")
    s = complex(sigma, t)
    value = 2.0 * zeta_logderiv_bound(field, sigma, t).total
    value += field.log_disc - field.degree * math.log(math.pi)
    value += (2.0 / s + 2.0 / (s - 1.0)).real
    value += (field.r1 + field.r2) * math.log(abs(0.5 * s - 0.5))
    value += field.r2 * math.log(abs(0.5 * (s + 1.0) - 0.5))
    return value


def bound_window(field: FieldInvariants, T: float, a: float) -> BoundBreakdown:
    """GRH bound for n_K(T; a): (a/2) f~_K(1/2 + a/4 + iT)."""
    if not 0.0 < a < 2.0:
        raise DomainError(f"window half-width must lie in (0, 2), got {a}")
    if T < 10.0 + a:
        raise DomainError(f"bound_window needs T >= 10 + a, got T={T}, a={a}")
    return f_tilde(field, 0.5 + 0.25 * a, T).scaled(0.5 * a, a=a)


def bound_multiplicity(field: FieldInvariants, T: float, sigma: float) -> BoundBreakdown:
    """GRH bound for the multiplicity n_K(T; 0+): (3/10)(2 sigma - 1) f~_K(sigma + iT)."""
    return f_tilde(field, sigma, T).scaled(0.3 * (2.0 * sigma - 1.0))


def elementary_window_bound(field: FieldInvariants, T: float, a: float) -> BoundBreakdown:
    """The single-point bound a f~_K(1/2 + a + iT), a in (0, 1/2)."""
    if not 0.0 < a < 0.5:
        raise DomainError(f"elementary_window_bound needs a in (0, 1/2), got {a}")
    return f_tilde(field, 0.5 + a, T).scaled(a, a=a)


def rounded_window_bound(field: FieldInvariants, T: float, a: float) -> float:
    """The published rounded forms of bound_window for a = 1/2 (T >= 10.5) and a = 1 (T >= 11)."""
    n = field.degree
    if a == 0.5:
        if T < 10.5:
            raise DomainError(f"the a = 1/2 display needs T >= 10.5, got {T}")
        Q = conductor_q(field, T)
        return 0.25 * Q + (1.4 * n + 2.2) * Q ** 0.75 - 4.0 * n
    if a == 1.0:
        if T < 11:
            raise DomainError(f"the a = 1 display needs T >= 11, got {T}")
        Q = conductor_q(field, T)
        return 0.5 * Q + (4.0 * n + 2.9) * math.sqrt(Q) - 9.0 * n
    raise DomainError(f"rounded forms exist only for a in {{1/2, 1}}, got {a}")


def rounded_multiplicity_bound(field: FieldInvariants, T: float) -> float:
    """The published rounded form of bound_multiplicity at sigma = 3/4."""
    if T < 10:
        raise DomainError(f"rounded_multiplicity_bound needs T >= 10, got {T}")
    Q = conductor_q(field, T)
    n = field.degree
    return 0.15 * Q + (1.2 * n + 0.9) * math.sqrt(Q) - 2.9 * n


def corollary1_bound(field: FieldInvariants, T: float) -> float:
    """
    (0.3 log L + 0.4 + 0.2 log^2 L / L + (log L / L)(1.9 n_K + 0.9)) Q / log Q, L = log Q;
    this is bound_multiplicity at 2 sigma - 1 = log L / log Q, relaxed.
    """
    if T < 10:
        raise DomainError(f"corollary1_bound needs T >= 10, got {T}")
    Q = conductor_q(field, T)
    L = math.log(Q)
    log_L = math.log(L)
    eps = log_L / L
    if eps > 0.36:
        raise DomainError(f"log L / log Q = {eps:.4f} exceeds 0.36; Q = {Q:.4f} is below 33")
    factor = 0.3 * log_L + 0.4 + 0.2 * log_L ** 2 / L + eps * (1.9 * field.degree + 0.9)
    return factor * Q / L


def corollary1_sigma(field: FieldInvariants, T: float) -> float:
    """The sigma = (1 + log L / log Q) / 2 at which corollary1_bound relaxes bound_multiplicity."""
    L = math.log(conductor_q(field, T))
    return 0.5 * (1.0 + math.log(L) / L)


def subcheck1_value(L: float) -> float:
    """0.3 log L + 2.8 log L / L + 0.2 log^2 L / L + 0.4."""
    log_L = math.log(L)
    return 0.3 * log_L + 2.8 * log_L / L + 0.2 * log_L ** 2 / L + 0.4


CORRECTED_LEVEL = 4.0 * (1.0 - 1e-10)


def corollary2_margin(logT: Optional[float] = None, *, L: Optional[float] = None) -> Corollary2Margin:
    """
    Pieces of the proof that n_Q(T; 0+) <= 4 log T / log log T.

    Give either logT, or L = log(log T + 31) for log T too large for a float.
    All comparisons are made in (L, log L) coordinates.
    """
    if (logT is None) == (L is None):
        raise DomainError("give exactly one of logT and L")
    if logT is not None:
        if not logT >= 23:
            raise DomainError(f"corollary2_margin needs log T >= 23, got {logT}")
        Q = logT + 31.0
        L = math.log(Q)
        log_logT = math.log(logT)
    else:
        if L < math.log(54.0):
            raise DomainError(f"L = {L} corresponds to log T < 23")
        # log T = e^L - 31
        log_logT = L + math.log1p(-31.0 * math.exp(-L))

    log_L = math.log(L)
    log_log_logT = math.log(log_logT)
    g = subcheck1_value(L)
    # log of (Q / log Q) and of log T / log log T
    log_q_over_L = L - log_L
    log_T_ratio = log_logT - log_log_logT
    bound_ratio = math.exp(math.log(g) + log_q_over_L - math.log(4.0) - log_T_ratio)
    margin = Corollary2Margin(
        bound_ratio=bound_ratio,
        subcheck1=g <= 2.0,
        subcheck2=log_q_over_L <= math.log(2.0) + log_T_ratio,
        L_threshold_ok=g <= CORRECTED_LEVEL,
        L=L,
    )
    logger.debug(f"corollary2_margin L={L:.6g}: {margin}")
    return margin


def threshold_L(level: float = CORRECTED_LEVEL, lo: float = 10.0, hi: float = 1e9, tol: float = 1e-10) -> float:
    """The L where subcheck1_value crosses ``level``; below 2 on [10, 1e5] it crosses 4 once."""
    if subcheck1_value(lo) > level or subcheck1_value(hi) < level:
        raise DomainError(f"level {level} is not bracketed on [{lo}, {hi}]")
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if subcheck1_value(mid) <= level:
            lo = mid
        else:
            hi = mid
    return lo


def multiplicity_sigma_scan(field: FieldInvariants, T: float, sigmas: Sequence[float]) -> Dict[float, float]:
    """bound_multiplicity on a grid of sigma values."""
    return {sigma: bound_multiplicity(field, T, sigma).total for sigma in sigmas}


def window_bound_limit(field: FieldInvariants, T: float) -> float:
    """lim_{a -> 0+} bound_window(T, a) = 1.28 Q + 0.14 n_K."""
    return 1.28 * conductor_q(field, T) + 0.14 * field.degree


def richardson_window_limit(field: FieldInvariants, T: float, a_values: Sequence[float] = (0.004, 0.002, 0.001)) -> float:
    """
    Extrapolate bound_window(T, a).total to a -> 0+ with repeated Richardson
    steps on halving a_values. The expansion has an a log a term; the first
    step turns it into a linear one, so three levels leave O(a^2 log a).
    """
    if len(a_values) < 2 or any(not math.isclose(fine, 0.5 * coarse) for coarse, fine in zip(a_values[:-1], a_values[1:])):
        raise DomainError(f"Richardson extrapolation needs halving window widths, got {tuple(a_values)}")
    column = [bound_window(field, T, a).total for a in a_values]
    while len(column) > 1:
        column = [2.0 * fine - coarse for coarse, fine in zip(column[:-1], column[1:])]
    return column[0]
