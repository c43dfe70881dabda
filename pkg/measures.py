"""
Symmetric atomic measures covering the window indicator.

A measure with weight c_j at +-b_j and half-width alpha covers [-a, a] when
    sum_j c_j / (alpha^2 + (gamma - b_j)^2) >= 1   on [-a, a]
and the left side is non-negative everywhere. Its cost is mu(R) / (2 alpha).
"""

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from loguru import logger
from numpy.polynomial import Polynomial
from scipy import ndimage, optimize

from config import get_cache
from exceptions import DegenerateDenominator, DomainError, MalformedMeasure, MultipleSolutions, NoSolution

Contact = Tuple[float, int]

FIVE_DELTA_ALPHA = 0.25
FIVE_DELTA_NODES = (0.0, 0.6, 1.0)
FIVE_DELTA_CONTACTS: Tuple[Contact, ...] = ((0.0, 4), (0.6, 2), (1.0, 1))

SCAN_STRIDE = 1e-3
RESIDUAL_TOL = 1e-11
SLACK_TOL = 1e-12
DEFLATION_TOL = 1e-8
OUTSIDE_REACH = 4.0


@dataclass(frozen=True)
class DeltaMeasure:
    """
    Weights c_j at +-b_j; centers[0] is the atom at 0, counted once.
    ``contacts`` lists the non-negative points (with multiplicity) where the
    kernel sum touches 1.
    """

    alpha: float
    window_a: float
    centers: Tuple[float, ...]
    weights: Tuple[float, ...]
    contacts: Tuple[Contact, ...] = field(default_factory=tuple)

    def __post_init__(self):
        values = (self.alpha, self.window_a) + tuple(self.centers) + tuple(self.weights)
        if not all(math.isfinite(v) for v in values):
            raise MalformedMeasure("measure parameters must be finite")
        if self.alpha <= 0 or self.window_a <= 0:
            raise MalformedMeasure(f"alpha and window_a must be positive, got {self.alpha}, {self.window_a}")
        if len(self.centers) != len(self.weights) or not self.centers:
            raise MalformedMeasure("centers and weights must be non-empty and of equal length")
        if self.centers[0] != 0.0:
            raise MalformedMeasure("the first center must be 0")
        if any(b < 0 for b in self.centers) or list(self.centers) != sorted(self.centers):
            raise MalformedMeasure("centers must be non-negative and ascending")

    def atoms(self) -> List[Tuple[float, float]]:
        """(position, weight) for every atom, mirrored ones included."""
        out = [(0.0, self.weights[0])]
        for b, c in zip(self.centers[1:], self.weights[1:]):
            out.append((-b, c))
            out.append((b, c))
        return out

    @property
    def mass(self) -> float:
        return self.weights[0] + 2.0 * sum(self.weights[1:])

    @property
    def cost(self) -> float:
        return self.mass / (2.0 * self.alpha)


@dataclass(frozen=True)
class CoveringReport:
    holds: bool
    min_slack: float
    root_certificate: str
    residual_roots: int
    outside_ok: bool


@dataclass(frozen=True)
class RescaleResult:
    cost: float
    rescaled: DeltaMeasure


def kernel_sum(m: DeltaMeasure, gamma) -> np.ndarray:
    """sum_j c_j / (alpha^2 + (gamma - b_j)^2) over all atoms."""
    gamma = np.asarray(gamma, dtype=float)
    a2 = m.alpha * m.alpha
    total = np.zeros_like(gamma)
    for position, weight in m.atoms():
        total = total + weight / (a2 + (gamma - position) ** 2)
    return total


# ---------------------------------------------------------------------------
# five deltas

def _pair_kernel(gamma: float, b: np.ndarray, a2: float) -> np.ndarray:
    """Kernel of the atoms at +-b, or of the single atom at 0 where b == 0."""
    single = 1.0 / (a2 + gamma * gamma)
    pair = 1.0 / (a2 + (gamma - b) ** 2) + 1.0 / (a2 + (gamma + b) ** 2)
    return np.where(b == 0, single, pair)


def _interpolation_matrix(b1: np.ndarray, b2: np.ndarray, alpha: float) -> np.ndarray:
    a2 = alpha * alpha
    zero = np.zeros_like(b1)
    rows = []
    for gamma in FIVE_DELTA_NODES:
        rows.append(np.stack([_pair_kernel(gamma, zero, a2), _pair_kernel(gamma, b1, a2), _pair_kernel(gamma, b2, a2)], axis=-1))
    return np.stack(rows, axis=-2)


def interpolation_weights(b1, b2, alpha: float = FIVE_DELTA_ALPHA) -> np.ndarray:
    """(c0, c1, c2) making the kernel sum equal 1 at gamma = 0, 3/5, 1."""
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    A = _interpolation_matrix(b1, b2, alpha)
    rhs = np.ones(A.shape[:-1] + (1,))
    return np.linalg.solve(A, rhs)[..., 0]


def _tangency_residuals(b1: np.ndarray, b2: np.ndarray, weights: np.ndarray, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Double contact at 3/5 and fourfold contact at 0:
        sum_atoms c_j (3/5 - b_j) / (alpha^2 + (3/5 - b_j)^2)^2 = 0
        sum_atoms c_j (alpha^2 - 3 b_j^2) / (alpha^2 + b_j^2)^3 = 0
    """
    a2 = alpha * alpha
    g = FIVE_DELTA_NODES[1]
    c0, c1, c2 = weights[..., 0], weights[..., 1], weights[..., 2]

    def slope(b):
        return (g - b) / (a2 + (g - b) ** 2) ** 2 + (g + b) / (a2 + (g + b) ** 2) ** 2

    def curvature(b):
        return 2.0 * (a2 - 3.0 * b * b) / (a2 + b * b) ** 3

    e1 = c0 * g / (a2 + g * g) ** 2 + c1 * slope(b1) + c2 * slope(b2)
    e2 = c0 / (a2 * a2) + c1 * curvature(b1) + c2 * curvature(b2)
    return e1, e2


def _residual_grid(grid: np.ndarray, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    n = grid.size
    e1 = np.full((n, n), np.nan)
    e2 = np.full((n, n), np.nan)
    for i, b1 in enumerate(grid):
        cols = np.nonzero(grid > b1)[0]
        if cols.size == 0:
            continue
        b2 = grid[cols]
        b1_row = np.full_like(b2, b1)
        A = _interpolation_matrix(b1_row, b2, alpha)
        det = np.linalg.det(A)
        ok = np.abs(det) > 1e-14
        if not np.any(ok):
            continue
        weights = np.linalg.solve(A[ok], np.ones((int(ok.sum()), 3, 1)))[..., 0]
        r1, r2 = _tangency_residuals(b1_row[ok], b2[ok], weights, alpha)
        e1[i, cols[ok]] = r1
        e2[i, cols[ok]] = r2
    return e1, e2


def _sign_change_cells(values: np.ndarray) -> np.ndarray:
    corners = np.stack([values[:-1, :-1], values[1:, :-1], values[:-1, 1:], values[1:, 1:]])
    finite = np.all(np.isfinite(corners), axis=0)
    with np.errstate(invalid="ignore"):
        lo = np.min(corners, axis=0)
        hi = np.max(corners, axis=0)
    return finite & (lo <= 0) & (hi >= 0)


def _residual_vector(x: np.ndarray, alpha: float) -> np.ndarray:
    b1, b2 = np.asarray(x[0]), np.asarray(x[1])
    weights = interpolation_weights(b1, b2, alpha)
    e1, e2 = _tangency_residuals(b1, b2, weights, alpha)
    return np.array([float(e1), float(e2)])


def _refine(start: Tuple[float, float], alpha: float) -> Optional[Tuple[float, float, float]]:
    try:
        sol = optimize.root(_residual_vector, np.array(start), args=(alpha,), method="hybr", tol=1e-15)
    except np.linalg.LinAlgError:
        return None
    b1, b2 = (float(v) for v in sol.x)
    if not 0.0 < b1 < b2 < 1.0:
        return None
    try:
        residual = float(np.max(np.abs(_residual_vector(sol.x, alpha))))
    except np.linalg.LinAlgError:
        return None
    if residual >= RESIDUAL_TOL:
        logger.debug(f"Discarding start {start}: residual {residual:.3g} after {sol.nfev} evaluations")
        return None
    return b1, b2, residual


def find_five_delta_roots(alpha: float = FIVE_DELTA_ALPHA, stride: float = SCAN_STRIDE) -> List[Tuple[float, float, float]]:
    """
    All solutions (b1, b2, residual) with 0 < b1 < b2 < 1: grid scan for
    cells where both residuals change sign, one Newton start per connected
    basin, duplicates merged.
    """
    grid = np.arange(1, int(round(1.0 / stride))) * stride
    e1, e2 = _residual_grid(grid, alpha)
    candidates = _sign_change_cells(e1) & _sign_change_cells(e2)
    labels, count = ndimage.label(candidates)
    logger.info(f"Five-delta scan: {count} sign-change basins on a {grid.size}x{grid.size} grid")
    if count == 0:
        return []
    centres = ndimage.center_of_mass(candidates, labels, range(1, count + 1))
    roots: List[Tuple[float, float, float]] = []
    for ci, cj in centres:
        start = (grid[0] + (ci + 0.5) * stride, grid[0] + (cj + 0.5) * stride)
        refined = _refine(start, alpha)
        if refined is None:
            continue
        if any(abs(refined[0] - r[0]) < 1e-7 and abs(refined[1] - r[1]) < 1e-7 for r in roots):
            continue
        roots.append(refined)
    return roots


def solve_five_delta() -> DeltaMeasure:
    """The five-delta measure for a = 1, alpha = 1/4 with contacts 0 (x4), +-3/5 (x2), +-1."""
    cache = get_cache()
    key = f"five_delta:{FIVE_DELTA_ALPHA}:{FIVE_DELTA_NODES}:{SCAN_STRIDE}"
    if cache is not None and key in cache:
        b1, b2 = cache[key]
        logger.debug(f"Five-delta optimum from cache: b1={b1}, b2={b2}")
    else:
        roots = find_five_delta_roots()
        if not roots:
            raise NoSolution("no solution with 0 < b1 < b2 < 1 found by the grid scan")
        if len(roots) > 1:
            found = ", ".join(f"({r[0]:.6f}, {r[1]:.6f})" for r in roots)
            raise MultipleSolutions(f"{len(roots)} distinct solutions: {found}")
        b1, b2, residual = roots[0]
        logger.info(f"Five-delta optimum b1={b1:.12f} b2={b2:.12f} residual={residual:.3g}")
        if cache is not None:
            cache[key] = (b1, b2)

    weights = interpolation_weights(np.array(b1), np.array(b2))
    c0, c1, c2 = (float(c) for c in weights)
    m = DeltaMeasure(FIVE_DELTA_ALPHA, 1.0, (0.0, b1, b2), (c0, c1, c2), FIVE_DELTA_CONTACTS)
    if min(m.weights) < 0:
        raise NoSolution(f"five-delta weights are not all non-negative: {m.weights}")
    if m.cost > 0.5:
        raise NoSolution(f"five-delta cost {m.cost:.6f} exceeds 1/2")
    return m


# ---------------------------------------------------------------------------
# three deltas

def three_delta(a: float, alpha: float, b: float) -> DeltaMeasure:
    """Weights c0 at 0 and c1 at +-b with the kernel sum equal to 1 at 0 and +-a."""
    if not (a > 0 and alpha > 0 and b >= 0):
        raise DomainError(f"three_delta needs a > 0, alpha > 0, b > 0; got a={a}, alpha={alpha}, b={b}")
    a2, b2, al2 = a * a, b * b, alpha * alpha
    den = b2 * (5.0 * al2 + a2 + b2)
    if den == 0:
        raise DegenerateDenominator("three_delta is undefined for b = 0")
    c0 = (-al2 ** 3 + (3.0 * b2 - 2.0 * a2) * al2 ** 2 + (3.0 * b2 - a2) * a2 * al2) / den
    c1 = (al2 ** 3 + (2.0 * a2 + 3.0 * b2) * al2 ** 2 + (a2 * a2 + 3.0 * b2 * b2) * al2 + (a2 - b2) ** 2 * b2) / (2.0 * den)
    return DeltaMeasure(alpha, a, (0.0, b), (c0, c1), ((0.0, 2), (a, 1)))


def three_delta_cost_closed_form(a: float, alpha: float) -> float:
    """Cost of three_delta(a, alpha, a / sqrt 2)."""
    a2, al2 = a * a, alpha * alpha
    return (24.0 * al2 * al2 + 18.0 * a2 * al2 + a2 * a2) / (4.0 * (10.0 * al2 + 3.0 * a2) * alpha)


def three_delta_extra_roots(a: float, alpha: float) -> float:
    """gamma*^2 of the two remaining contacts of three_delta(a, alpha, a / sqrt 2)."""
    a2, al2 = a * a, alpha * alpha
    return (a2 * a2 - 36.0 * al2 * al2) / (20.0 * al2 + 6.0 * a2)


# ---------------------------------------------------------------------------
# certification

def covering_polynomial(m: DeltaMeasure) -> Polynomial:
    """D(gamma) = sum_j c_j prod_{k != j} q_k - prod_k q_k, q_k = alpha^2 + (gamma - b_k)^2."""
    a2 = m.alpha * m.alpha
    atoms = m.atoms()
    factors = [Polynomial([a2 + p * p, -2.0 * p, 1.0]) for p, _ in atoms]
    total = Polynomial([0.0])
    for j, (_, weight) in enumerate(atoms):
        term = Polynomial([weight])
        for k, q in enumerate(factors):
            if k != j:
                term = term * q
        total = total + term
    full = Polynomial([1.0])
    for q in factors:
        full = full * q
    return total - full


def _deflate(poly: Polynomial, root: float, multiplicity: int, tol: float) -> Tuple[Polynomial, int]:
    divisor = Polynomial([-root, 1.0])
    removed = 0
    for _ in range(multiplicity):
        quotient, remainder = divmod(poly, divisor)
        if abs(remainder.coef[0]) > tol:
            break
        poly = quotient
        removed += 1
    return poly, removed


def _sturm_count(poly: Polynomial, lo: float, hi: float) -> int:
    x = sp.Symbol("x")
    coeffs = [sp.Rational(float(c)) for c in poly.coef[::-1]]
    if all(c == 0 for c in coeffs):
        return -1
    return int(sp.Poly(coeffs, x).count_roots(sp.Rational(lo), sp.Rational(hi)))


def covering_slack(m: DeltaMeasure) -> CoveringReport:
    """
    Certify the covering inequality on [-a, a]: deflate the contacts out of
    D, count real roots of what remains in the window with a Sturm sequence,
    and back this with a grid check of the slack (and of non-negativity
    outside the window).
    """
    a = m.window_a
    D = covering_polynomial(m)
    lead = D.coef[-1]
    tol = DEFLATION_TOL * abs(lead)

    residual = D
    parts = []
    accounted = 0
    complete = True
    for gamma, mult in m.contacts:
        points = [gamma] if gamma == 0 else [gamma, -gamma]
        for p in points:
            residual, removed = _deflate(residual, p, mult, tol)
            accounted += removed
            if removed < mult:
                complete = False
        label = "0" if gamma == 0 else f"±{gamma:.6g}"
        parts.append(f"{label}(x{mult})")

    sturm = _sturm_count(residual, -a, a)
    degree = D.degree()
    certificate = (
        f"{', '.join(parts)}; {accounted} of degree {degree} deflated; "
        f"residual degree {residual.degree()} has {sturm} real roots in [-{a:.6g}, {a:.6g}]; "
        f"leading coefficient {lead:+.3g}"
    )

    # grids in units of a, so the report is unchanged by cost_and_rescale
    inside = a * np.linspace(-1.0, 1.0, int(round(2.0 / SCAN_STRIDE)) + 1)
    min_slack = float(np.min(kernel_sum(m, inside) - 1.0))
    outside = a * np.linspace(1.0, OUTSIDE_REACH, int(round((OUTSIDE_REACH - 1.0) / SCAN_STRIDE)) + 1)
    outside_ok = bool(np.min(kernel_sum(m, outside)) >= -SLACK_TOL) and m.mass >= 0

    holds = complete and sturm == 0 and min_slack >= -SLACK_TOL and outside_ok
    logger.debug(f"covering_slack: holds={holds} min_slack={min_slack:.3g} {certificate}")
    return CoveringReport(holds, min_slack, certificate, sturm, outside_ok)


def cost_and_rescale(m: DeltaMeasure, new_a: float) -> RescaleResult:
    """Move the measure to window new_a: (alpha, b_j, c_j) -> (l alpha, l b_j, l^2 c_j), l = new_a / a."""
    if new_a <= 0:
        raise DomainError(f"new window must be positive, got {new_a}")
    lam = new_a / m.window_a
    rescaled = replace(
        m,
        alpha=lam * m.alpha,
        window_a=new_a,
        centers=tuple(lam * b for b in m.centers),
        weights=tuple(lam * lam * c for c in m.weights),
        contacts=tuple((lam * g, k) for g, k in m.contacts),
    )
    return RescaleResult(m.cost, rescaled)


def export_measure_csv(m: DeltaMeasure, target: Union[str, Path, IO[str]]) -> None:
    """Write alpha and window_a header rows, then center,weight rows."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as handle:
            _write_measure(m, handle)
    else:
        _write_measure(m, target)


def _write_measure(m: DeltaMeasure, handle: IO[str]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["alpha", f"{m.alpha:.10g}"])
    writer.writerow(["window_a", f"{m.window_a:.10g}"])
    writer.writerow(["center", "weight"])
    for b, c in zip(m.centers, m.weights):
        writer.writerow([f"{b:.10g}", f"{c:.10g}"])


def weights_by_center(m: DeltaMeasure) -> Sequence[Tuple[float, float]]:
    return list(zip(m.centers, m.weights))
