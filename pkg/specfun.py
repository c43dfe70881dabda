"""
Certified Gamma-family numerics.

log Gamma and digamma come from the Euler-Maclaurin (Stirling) expansion
after an upward shift to Re z >= 8; the truncation error is bounded through
the Bernoulli-polynomial remainder integral
    |int_0^inf B_2m({x}) / (z + x)^p dx| <= |B_2m| int_0^inf (|z|^2 + x^2)^(-p/2) dx,
which holds for Re z >= 0.

The Gamma-kernel integrals of the critical-strip estimates are computed with
panelled Gauss-Legendre quadrature (15 nodes, 7-node embedded estimate) and
truncated where the 5.3 exp(-pi |v| / 2) envelope makes the tail negligible.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss

from core import CertValue, FieldInvariants
from exceptions import DomainError, PoleError, PrecisionError

_EPS = np.finfo(float).eps
_LOG_2PI = math.log(2.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# B_2, B_4, ..., B_16
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)
_TERMS = len(_BERNOULLI) - 1
_SHIFT_TARGET = 8.0

CRUDE_ENVELOPE = 5.3
QUARTER_STRIP = (-0.75, -0.25)

DEFAULT_MAX_RAD = 1e-10


class GammaKind(Enum):
    LOG_GAMMA = "log_gamma"
    DIGAMMA = "digamma"
    ABS_GAMMA = "abs_gamma"


class KernelKind(Enum):
    ABS_LINE = "abs_line"
    LOG_WEIGHT = "log_weight"
    QUARTER_POLE = "quarter_pole"
    LORENTZ = "lorentz"


# Constants displayed for each kernel integral (LORENTZ keyed by alpha).
KERNEL_CONSTANTS = {
    KernelKind.ABS_LINE: 4.73,
    KernelKind.QUARTER_POLE: 0.171,
    (KernelKind.LORENTZ, 1): 0.013,
    (KernelKind.LORENTZ, 2): 0.007,
}


@dataclass(frozen=True)
class DigammaLogCheck:
    holds: bool
    margin: CertValue


@dataclass(frozen=True)
class GammaKDiffCheck:
    lhs: CertValue
    rhs: float
    holds: bool


@dataclass(frozen=True)
class LogWeightCertificate:
    lhs: CertValue
    rhs: CertValue
    holds: bool


def _half_line_integral(r: np.ndarray, p: int) -> np.ndarray:
    """int_0^inf (r^2 + x^2)^(-p/2) dx for p > 1."""
    c = math.sqrt(math.pi) * math.gamma((p - 1) / 2) / (2.0 * math.gamma(p / 2))
    return c * r ** (1 - p)


def _as_points(s) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if not np.all(np.isfinite(s)):
        raise DomainError("Gamma evaluation needs finite arguments")
    poles = (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))
    if np.any(poles):
        raise PoleError(f"Gamma has a pole at {s[poles][0].real:g}")
    return s


def _shift_counts(s: np.ndarray) -> np.ndarray:
    return np.maximum(0, np.ceil(_SHIFT_TARGET - s.real)).astype(np.int64)


def log_abs_gamma_parts(s) -> Tuple[np.ndarray, np.ndarray]:
    """
    Midpoints and radii of log|Gamma(s)| (= Re log Gamma(s)) for an array of
    complex points.
    """
    s = _as_points(s)
    n = _shift_counts(s)
    z = s + n
    logz = np.log(z)
    lead = (z - 0.5) * logz - z
    series = lead + 0.5 * _LOG_2PI
    magnitude = np.abs(lead) + 1.0
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    power = zinv
    for k in range(1, _TERMS + 1):
        term = _BERNOULLI[k - 1] / (2 * k * (2 * k - 1)) * power
        series = series + term
        magnitude = magnitude + np.abs(term)
        power = power * zinv2

    m = _TERMS + 1
    b2m = abs(_BERNOULLI[m - 1])
    r = np.abs(z)
    truncation = b2m / (2 * m) * (r ** (1 - 2 * m) / (2 * m - 1) + _half_line_integral(r, 2 * m))

    shift = np.zeros(s.shape)
    with np.errstate(divide="ignore"):
        for k in range(int(n.max(initial=0))):
            step = np.where(k < n, np.log(np.abs(s + k)), 0.0)
            shift = shift + step
            magnitude = magnitude + np.abs(step)

    rounding = 4.0 * _EPS * (n + _TERMS + 6) * magnitude
    return series.real - shift, truncation + rounding


def digamma_parts(s) -> Tuple[np.ndarray, np.ndarray]:
    """Complex midpoints and radii (bounding |error|) of psi(s)."""
    s = _as_points(s)
    n = _shift_counts(s)
    z = s + n
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    value = np.log(z) - 0.5 * zinv
    magnitude = np.abs(value) + np.abs(0.5 * zinv)
    power = zinv2
    for k in range(1, _TERMS + 1):
        term = _BERNOULLI[k - 1] / (2 * k) * power
        value = value - term
        magnitude = magnitude + np.abs(term)
        power = power * zinv2

    m = _TERMS + 1
    b2m = abs(_BERNOULLI[m - 1])
    r = np.abs(z)
    truncation = b2m / (2 * m) * r ** (-2 * m) + b2m * _half_line_integral(r, 2 * m + 1)

    for k in range(int(n.max(initial=0))):
        active = k < n
        step = np.where(active, 1.0 / np.where(active, s + k, 1.0), 0.0)
        value = value - step
        magnitude = magnitude + np.abs(step)

    rounding = 4.0 * _EPS * (n + _TERMS + 6) * magnitude
    return value, truncation + rounding


def eval_gamma(kind: GammaKind, sigma: float, t: float, max_rad: Optional[float] = None) -> CertValue:
    """
    Certified log|Gamma(s)|, Re psi(s) or |Gamma(s)| at s = sigma + it.

    When ``max_rad`` is given, a PrecisionError is raised if the enclosure
    is wider than requested.
    """
    s = complex(sigma, t)
    if kind is GammaKind.DIGAMMA:
        value, rad = digamma_parts(s)
        result = CertValue(float(value[0].real), float(rad[0]))
    else:
        value, rad = log_abs_gamma_parts(s)
        result = CertValue(float(value[0]), float(rad[0]))
        if kind is GammaKind.ABS_GAMMA:
            result = result.exp()
    if max_rad is not None and result.rad > max_rad:
        raise PrecisionError(f"{kind.value} at {s} has radius {result.rad:.3g} > {max_rad:.3g}")
    logger.debug(f"eval_gamma {kind.value} at {s}: {result}")
    return result


def digamma_complex(sigma: float, t: float) -> Tuple[CertValue, CertValue]:
    """Real and imaginary parts of psi(sigma + it)."""
    value, rad = digamma_parts(complex(sigma, t))
    return CertValue(float(value[0].real), float(rad[0])), CertValue(float(value[0].imag), float(rad[0]))


def abs_gamma_values(u: float, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """|Gamma(u + iv)| and its radius on an array of ordinates."""
    mid, rad = log_abs_gamma_parts(u + 1j * np.asarray(v, dtype=float))
    value = np.exp(mid)
    return value, value * np.expm1(rad) + 2.0 * _EPS * value


def critical_gamma_envelope(sigma: float, t: float) -> CertValue:
    """|Gamma(sigma + it)| exp(pi |t| / 2), evaluated in log space."""
    mid, rad = log_abs_gamma_parts(complex(sigma, t))
    return CertValue(float(mid[0]) + 0.5 * math.pi * abs(t), float(rad[0])).exp()


def _effective_stirling(u: float, v: float) -> float:
    # |Gamma(u+iv)| = sqrt(2 pi) |s|^(u-1/2) e^(-pi v/2) e^(-u + v arctan(u/v)) e^R,
    # |R| <= (pi/2 - arctan(u/v)) / (8v), valid for u < 0, v > 0.
    ratio = math.atan(u / v)
    remainder = (0.5 * math.pi - ratio) / (8.0 * v)
    log_bound = (
        0.5 * _LOG_2PI
        + (u - 0.5) * math.log(math.hypot(u, v))
        - 0.5 * math.pi * v
        - u
        + v * ratio
        + remainder
    )
    return math.exp(log_bound)


def _in_quarter_strip(u: float) -> bool:
    return QUARTER_STRIP[0] <= u <= QUARTER_STRIP[1]


def stirling_envelope(u: float, v: float) -> CertValue:
    """
    Upper bound for |Gamma(u + iv)|: the smaller of the effective Stirling
    bound (u < 0, v > 0) and the crude 5.3 exp(-pi |v| / 2) envelope
    (u in [-3/4, -1/4]).
    """
    candidates = []
    if u < 0 and v > 0:
        candidates.append(_effective_stirling(u, v))
    if _in_quarter_strip(u):
        candidates.append(CRUDE_ENVELOPE * math.exp(-0.5 * math.pi * abs(v)))
    if not candidates:
        raise DomainError(f"no envelope available at u={u}, v={v} (effective form needs u < 0 and v > 0)")
    bound = min(candidates)
    return CertValue(bound, math.ulp(bound))


# ---------------------------------------------------------------------------
# quadrature

_GL15 = leggauss(15)
_GL7 = leggauss(7)

Integrand = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _panel(func: Integrand, lo: float, hi: float) -> Tuple[float, float]:
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    f15, r15 = func(c + h * _GL15[0])
    f7, _ = func(c + h * _GL7[0])
    i15 = h * float(np.dot(_GL15[1], f15))
    i7 = h * float(np.dot(_GL7[1], f7))
    value_rad = h * float(np.dot(_GL15[1], r15))
    return i15, 10.0 * abs(i15 - i7) + value_rad


def integrate_panels(
    func: Integrand,
    breakpoints: Sequence[float],
    panel_width: float = 1.0,
    tol_density: float = 1e-11,
    max_depth: int = 40,
) -> CertValue:
    """
    Adaptive panel Gauss-Legendre quadrature over [breakpoints[0], breakpoints[-1]].

    Panels never straddle a breakpoint; each panel is bisected until its
    error estimate is below ``tol_density`` times its width. Panels are
    processed left to right so the summation order is fixed.
    """
    points = sorted(set(float(b) for b in breakpoints))
    edges = []
    for lo, hi in zip(points[:-1], points[1:]):
        count = max(1, int(math.ceil((hi - lo) / panel_width)))
        edges.extend(lo + (hi - lo) * np.arange(count) / count)
    edges.append(points[-1])

    total = 0.0
    rad = 0.0
    magnitude = 0.0
    panels = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        stack = [(lo, hi, 0)]
        while stack:
            a, b, depth = stack.pop()
            value, err = _panel(func, a, b)
            if err > tol_density * (b - a) and depth < max_depth:
                m = 0.5 * (a + b)
                stack.append((m, b, depth + 1))
                stack.append((a, m, depth + 1))
                continue
            total += value
            rad += err
            magnitude += abs(value)
            panels += 1
    logger.debug(f"integrate_panels: {panels} panels over [{points[0]}, {points[-1]}]")
    return CertValue(total, rad + 4.0 * _EPS * panels * magnitude)


def _crude_tail(y_cut: float) -> float:
    """int_{|w| > y_cut} 5.3 exp(-pi |w| / 2) dw."""
    return 2.0 * CRUDE_ENVELOPE * (2.0 / math.pi) * math.exp(-0.5 * math.pi * y_cut)


def _tail_cut(target: float = 1e-10) -> float:
    # smallest Y (on a 0.5 grid) whose crude tail is below target
    y = 2.0
    while _crude_tail(y) > target:
        y += 0.5
    return y


_Y_CUT = _tail_cut()


def _check_quarter_strip(u: float) -> None:
    if not _in_quarter_strip(u):
        raise DomainError(f"u must lie in [-3/4, -1/4], got {u}")


def kernel_integral(kind: KernelKind, u: float, t: Optional[float] = None, alpha: Optional[int] = None) -> CertValue:
    """
    Certified value of one of the four Gamma-kernel integrals:
        ABS_LINE      int |Gamma(u+iy)| dy
        LOG_WEIGHT    int |Gamma(u+i(t-y))| log(1+|y|) dy
        QUARTER_POLE  int |Gamma(u+i(t-y))| / |1+4iy| dy
        LORENTZ       int |Gamma(u+i(t-y))| / (1+alpha y^2) dy,  alpha in {1, 2}
    The integrals other than ABS_LINE need |t| >= 10.
    """
    _check_quarter_strip(u)
    if kind is KernelKind.LORENTZ and alpha not in (1, 2):
        raise DomainError(f"LORENTZ kernel needs alpha in {{1, 2}}, got {alpha}")
    if kind is not KernelKind.ABS_LINE:
        if t is None or abs(t) < 10:
            raise DomainError(f"{kind.value} kernel needs |t| >= 10, got {t}")
        t = abs(t)

    y_cut = _Y_CUT
    tail = _crude_tail(y_cut)

    if kind is KernelKind.ABS_LINE:
        def func(w):
            return abs_gamma_values(u, w)
        half = integrate_panels(func, [0.0, y_cut])
        result = (2.0 * half).widen(tail)
    else:
        # substitute w = t - y so the Gamma factor is centred at w = 0
        if kind is KernelKind.LOG_WEIGHT:
            def weight(w):
                return np.log1p(np.abs(t - w))
            # log(1+t+|w|) <= log(1+t+Y) + (|w|-Y)/(1+t+Y) beyond the cut
            tail = _crude_tail(y_cut) * (math.log1p(t + y_cut) + (2.0 / math.pi) / (1.0 + t + y_cut))
        elif kind is KernelKind.QUARTER_POLE:
            def weight(w):
                return 1.0 / np.hypot(1.0, 4.0 * (t - w))
        else:
            def weight(w):
                return 1.0 / (1.0 + alpha * (t - w) ** 2)

        def func(w):
            g, g_rad = abs_gamma_values(u, w)
            wt = weight(w)
            return g * wt, g_rad * wt + 2.0 * _EPS * g * wt

        breaks = [-y_cut, 0.0, y_cut]
        if t < y_cut:
            breaks.append(t)
        result = integrate_panels(func, breaks).widen(tail)

    logger.debug(f"kernel_integral {kind.value} u={u} t={t} alpha={alpha}: {result}")
    return result


def kernel_constant(kind: KernelKind, t: Optional[float] = None, alpha: Optional[int] = None) -> float:
    """The constant displayed for a kernel integral."""
    if kind is KernelKind.LOG_WEIGHT:
        return KERNEL_CONSTANTS[KernelKind.ABS_LINE] * math.log1p(abs(t))
    if kind is KernelKind.LORENTZ:
        return KERNEL_CONSTANTS[(kind, alpha)]
    return KERNEL_CONSTANTS[kind]


def exp_kernel(kind: KernelKind, t: float, alpha: Optional[int] = None) -> CertValue:
    """
    Comparison functions for the crude envelope:
        F(t)       = int exp(-pi |t-y| / 2) / |1+4iy| dy        (QUARTER_POLE)
        F_alpha(t) = int exp(-pi |t-y| / 2) / (1+alpha y^2) dy  (LORENTZ)
    F and F_alpha are the bounded solutions of F'' - (pi^2/4) F = -pi h(t).
    """
    if kind is KernelKind.QUARTER_POLE:
        def weight(y):
            return 1.0 / np.hypot(1.0, 4.0 * y)
    elif kind is KernelKind.LORENTZ and alpha in (1, 2):
        def weight(y):
            return 1.0 / (1.0 + alpha * y ** 2)
    else:
        raise DomainError(f"exp_kernel is defined for QUARTER_POLE and LORENTZ(1|2), got {kind} {alpha}")

    def func(w):
        value = np.exp(-0.5 * math.pi * np.abs(w)) * weight(t - w)
        return value, 2.0 * _EPS * value

    y_cut = 24.0
    tail = 2.0 * (2.0 / math.pi) * math.exp(-0.5 * math.pi * y_cut)
    return integrate_panels(func, [-y_cut, 0.0, y_cut]).widen(tail)


def ode_lower_bound(kind: KernelKind, t: float, alpha: Optional[int] = None) -> float:
    """
    The forcing term (4/pi) h(t); F(10) above it makes t = 10 the maximum of
    F on [10, inf).
    """
    if kind is KernelKind.QUARTER_POLE:
        return (4.0 / math.pi) / math.hypot(1.0, 4.0 * t)
    if kind is KernelKind.LORENTZ and alpha in (1, 2):
        return (4.0 / math.pi) / (1.0 + alpha * t * t)
    raise DomainError(f"ode_lower_bound is defined for QUARTER_POLE and LORENTZ(1|2), got {kind} {alpha}")


def iterated_tail(order: int, u: float, v: float) -> CertValue:
    """
    F_1(u, v) = -int_v^inf |Gamma(u+iw)| dw    (order 1)
    F_2(u, v) =  int_v^inf (w - v) |Gamma(u+iw)| dw   (order 2)
    """
    _check_quarter_strip(u)
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order}")
    if v < 0:
        raise DomainError(f"iterated_tail needs v >= 0, got {v}")
    y_cut = _Y_CUT
    decay = CRUDE_ENVELOPE * math.exp(-0.5 * math.pi * (v + y_cut))
    if order == 1:
        def func(w):
            return abs_gamma_values(u, w)
        tail = decay * (2.0 / math.pi)
        return -integrate_panels(func, [v, v + y_cut]).widen(tail)

    def func(w):
        g, g_rad = abs_gamma_values(u, w)
        return (w - v) * g, (w - v) * g_rad
    tail = decay * (y_cut * 2.0 / math.pi + (2.0 / math.pi) ** 2)
    return integrate_panels(func, [v, v + y_cut]).widen(tail)


def log_weight_certificate(u: float, t: float) -> LogWeightCertificate:
    """
    Reduction of the LOG_WEIGHT constant to 2 (1+t)^2 F_2(u,t) <= int_0^t F_2(u,y) dy,
    which makes int |Gamma(u+i(t-y))| log((1+|y|)/(1+t)) dy negative.
    """
    _check_quarter_strip(u)
    if t < 10:
        raise DomainError(f"log_weight_certificate needs t >= 10, got {t}")
    lhs = 2.0 * (1.0 + t) ** 2 * iterated_tail(2, u, t)

    # int_0^t F_2(u,y) dy = 1/2 int_0^t w^2 |Gamma| dw + int_t^inf (w t - t^2/2) |Gamma| dw
    def inner(w):
        g, g_rad = abs_gamma_values(u, w)
        return 0.5 * w * w * g, 0.5 * w * w * g_rad

    def outer(w):
        g, g_rad = abs_gamma_values(u, w)
        k = w * t - 0.5 * t * t
        return k * g, k * g_rad

    y_cut = _Y_CUT
    decay = CRUDE_ENVELOPE * math.exp(-0.5 * math.pi * (t + y_cut))
    tail = decay * (2.0 / math.pi) * ((t + y_cut) * t + (2.0 / math.pi) * t)
    rhs = integrate_panels(inner, [0.0, t]) + integrate_panels(outer, [t, t + y_cut]).widen(tail)
    return LogWeightCertificate(lhs=lhs, rhs=rhs, holds=lhs.upper <= rhs.lower)


def check_digamma_log_bound(sigma: float, t: float) -> DigammaLogCheck:
    """Re psi(s) <= log|s - 1/2| for sigma >= 0 and |t| >= sigma + 2."""
    if sigma < 0 or abs(t) < sigma + 2:
        raise DomainError(f"digamma log bound needs sigma >= 0 and |t| >= sigma + 2, got ({sigma}, {t})")
    psi = eval_gamma(GammaKind.DIGAMMA, sigma, t)
    log_mod = math.log(abs(complex(sigma - 0.5, t)))
    margin = CertValue(log_mod, math.ulp(log_mod)) - psi
    return DigammaLogCheck(holds=margin.lower > 0, margin=margin)


def gammaK_logderiv_diff(field: FieldInvariants, t: float) -> GammaKDiffCheck:
    """
    |Gamma_K'/Gamma_K(1/4 + it) - Gamma_K'/Gamma_K(2 + it)| against 10 n_K / |1 + 4it|.

    With Gamma_K(s) = [pi^(-(s+1)/2) Gamma((s+1)/2)]^r2 [pi^(-s/2) Gamma(s/2)]^(r1+r2)
    the pi factors cancel and the difference is
    r2/2 (psi(5/8 + it/2) - psi(3/2 + it/2)) + (r1+r2)/2 (psi(1/8 + it/2) - psi(1 + it/2)).
    """
    half_t = 0.5 * t
    points = np.array([complex(5 / 8, half_t), complex(1.5, half_t), complex(1 / 8, half_t), complex(1.0, half_t)])
    value, rad = digamma_parts(points)
    complex_diff = 0.5 * field.r2 * (value[0] - value[1]) + 0.5 * (field.r1 + field.r2) * (value[2] - value[3])
    diff_rad = 0.5 * field.r2 * (rad[0] + rad[1]) + 0.5 * (field.r1 + field.r2) * (rad[2] + rad[3])
    re = CertValue(complex_diff.real, diff_rad)
    im = CertValue(complex_diff.imag, diff_rad)
    lhs = re.hypot(im)
    rhs = 10.0 * field.degree / abs(complex(1.0, 4.0 * t))
    return GammaKDiffCheck(lhs=lhs, rhs=rhs, holds=lhs.upper <= rhs)


def reflection_residual(sigma: float, t: float) -> Tuple[float, float]:
    """
    |Gamma(s)| |Gamma(1-s)| - pi / |sin(pi s)| and the combined radius.
    """
    g1 = eval_gamma(GammaKind.ABS_GAMMA, sigma, t)
    g2 = eval_gamma(GammaKind.ABS_GAMMA, 1.0 - sigma, -t)
    product = g1 * g2
    exact = math.pi / abs(cmath.sin(math.pi * complex(sigma, t)))
    return product.mid - exact, product.rad + 8.0 * _EPS * exact
