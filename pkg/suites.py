"""
Verification suites run by ``main.py verify``.

Each check returns ``(passed, message)``; a suite runs its checks in order
and reports ``(name, passed, message)`` rows.
"""

import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from prometheus_client import Counter, Summary

from bounds import (
    bound_multiplicity,
    bound_window,
    corollary2_margin,
    f_tilde,
    rounded_multiplicity_bound,
    rounded_window_bound,
    threshold_L,
    zeta_logderiv_bound,
)
from core import RATIONALS, build_field
from exceptions import ZetaBoundsError
from measures import (
    cost_and_rescale,
    covering_slack,
    solve_five_delta,
    three_delta,
    three_delta_cost_closed_form,
)
from riemann import (
    chebyshev_psi1_sweep,
    dirichlet_dominance,
    f_explicit,
    f_from_zeros,
    prime_exp_sum,
    prime_table,
    xi_symmetry_check,
    zeta_em,
    zeta_logderiv,
)
from specfun import (
    CRUDE_ENVELOPE,
    GammaKind,
    KernelKind,
    abs_gamma_values,
    check_digamma_log_bound,
    eval_gamma,
    exp_kernel,
    gammaK_logderiv_diff,
    iterated_tail,
    kernel_constant,
    kernel_integral,
    log_abs_gamma_parts,
    log_weight_certificate,
    ode_lower_bound,
)
from zerodata import ZeroTable

SUITE_TIME = Summary("zetabounds_suite_seconds", "Time spent running a verification suite", ["suite"])
CHECK_FAILURES = Counter("zetabounds_check_failures_total", "Failed verification checks", ["suite"])

CheckResult = Tuple[str, bool, str]
Check = Callable[[], Tuple[bool, str]]

SEED = 20240501
DUAL_ORACLE_SIGMAS = (0.6, 0.75, 0.9)
DUAL_ORACLE_HEIGHTS = (10.0, 20.0, 50.0, 100.0, 500.0)
FIVE_DELTA_WEIGHTS = (0.0200, 0.0491, 0.0651)


def _random_field(rng: np.random.Generator):
    degree = int(rng.integers(1, 11))
    if degree == 1:
        return RATIONALS
    r2 = int(rng.integers(0, degree // 2 + 1))
    return build_field(degree, degree - 2 * r2, r2, float(rng.uniform(0.5, 100.0)))


# ---------------------------------------------------------------------------
# specfun

def check_gamma_values() -> Tuple[bool, str]:
    cases = (
        (GammaKind.ABS_GAMMA, 0.5, math.sqrt(math.pi)),
        (GammaKind.DIGAMMA, 1.0, -0.57721566490153286),
        (GammaKind.LOG_GAMMA, 5.0, math.log(24.0)),
    )
    bad = [kind.value for kind, x, exact in cases if not eval_gamma(kind, x, 0.0).widen(1e-15).contains(exact)]
    return not bad, f"reference values missed: {bad}" if bad else "Gamma(1/2), psi(1), log Gamma(5) enclosed"


def check_abs_line_constants() -> Tuple[bool, str]:
    results = []
    for u, limit in ((-0.25, 4.73), (-0.75, 4.43)):
        value = kernel_integral(KernelKind.ABS_LINE, u)
        results.append((u, value, value.upper <= limit and value.width <= 1e-3))
    ok = all(r[2] for r in results)
    return ok, "; ".join(f"u={u}: {v.upper:.6f}" for u, v, _ in results)


def check_quarter_pole_constant() -> Tuple[bool, str]:
    limit = kernel_constant(KernelKind.QUARTER_POLE)
    worst = max(kernel_integral(KernelKind.QUARTER_POLE, u, 10.0).upper for u in (-0.75, -0.5, -0.25))
    return worst <= limit, f"max over u = {worst:.6f} vs {limit}"


def check_lorentz_envelope() -> Tuple[bool, str]:
    messages = []
    ok = True
    for alpha in (1, 2):
        envelope = CRUDE_ENVELOPE * exp_kernel(KernelKind.LORENTZ, 10.0, alpha).upper
        value = kernel_integral(KernelKind.LORENTZ, -0.25, 10.0, alpha)
        ok = ok and value.upper <= envelope
        messages.append(f"alpha={alpha}: {value.upper:.6f} <= 5.3 F_alpha(10) = {envelope:.6f}")
    return ok, "; ".join(messages)


def check_comparison_functions() -> Tuple[bool, str]:
    cases = (
        ("F", exp_kernel(KernelKind.QUARTER_POLE, 10.0), (0.0315, 0.0325), ode_lower_bound(KernelKind.QUARTER_POLE, 10.0)),
        ("F1", exp_kernel(KernelKind.LORENTZ, 10.0, 1), (0.0125, 0.0131), ode_lower_bound(KernelKind.LORENTZ, 10.0, 1)),
        ("F2", exp_kernel(KernelKind.LORENTZ, 10.0, 2), (0.0063, 0.0067), ode_lower_bound(KernelKind.LORENTZ, 10.0, 2)),
    )
    ok = all(lo <= v.lower and v.upper <= hi and v.lower > floor for _, v, (lo, hi), floor in cases)
    return ok, ", ".join(f"{name}(10)={v.mid:.5f}" for name, v, _, _ in cases)


def check_log_weight() -> Tuple[bool, str]:
    failed = [u for u in (-0.75, -0.5, -0.25) if not log_weight_certificate(u, 10.0).holds]
    direct = kernel_integral(KernelKind.LOG_WEIGHT, -0.25, 10.0)
    limit = kernel_constant(KernelKind.LOG_WEIGHT, 10.0)
    ok = not failed and direct.upper <= limit
    return ok, f"certificate failures at u={failed}; direct {direct.upper:.5f} vs {limit:.5f}"


def check_kernel_monotone() -> Tuple[bool, str]:
    ok = True
    for kind, alpha in ((KernelKind.QUARTER_POLE, None), (KernelKind.LORENTZ, 1), (KernelKind.LORENTZ, 2)):
        at_ten = kernel_integral(kind, -0.25, 10.0, alpha).lower
        later = max(kernel_integral(kind, -0.25, t, alpha).upper for t in (15.0, 20.0, 50.0))
        ok = ok and later <= at_ten
    return ok, "values at t = 10 dominate t in {15, 20, 50}"


def check_iterated_tails() -> Tuple[bool, str]:
    # d/dv F_2 = F_1 by a centred difference
    h = 1e-3
    f1 = iterated_tail(1, -0.25, 1.0).mid
    slope = (iterated_tail(2, -0.25, 1.0 + h).mid - iterated_tail(2, -0.25, 1.0 - h).mid) / (2.0 * h)
    return abs(slope - f1) <= 1e-6, f"dF2/dv = {slope:.8f}, F1 = {f1:.8f}"


def check_critical_envelope() -> Tuple[bool, str]:
    """
    |Gamma(s)| e^(pi |t| / 2) <= sqrt(2 pi) on the boundary of Re s in [0, 1/2], Im s >= 10.
    On Re s = 1/2 the two sides agree to within e^(-2 pi t), so only the lower ends are compared.
    """
    t = np.arange(10.0, 200.0 + 1e-9, 0.05)
    sides = [0.0 + 1j * t, 0.5 + 1j * t, np.arange(0.0, 0.5 + 1e-9, 0.05) + 10.0j]
    worst = -math.inf
    for points in sides:
        mid, rad = log_abs_gamma_parts(points)
        worst = max(worst, float(np.max(mid - rad + 0.5 * math.pi * points.imag)))
    limit = 0.5 * math.log(2.0 * math.pi)
    return worst <= limit, f"max log envelope {worst:.12f} vs log sqrt(2 pi) = {limit:.12f}"


def check_gamma_minimum() -> Tuple[bool, str]:
    """|Gamma| > 0.4 on the boundary of [-3/4, -1/4] x [0, 1]."""
    v = np.linspace(0.0, 1.0, 201)
    lows = []
    for u in (-0.75, -0.25):
        value, rad = abs_gamma_values(u, v)
        lows.append(float(np.min(value - rad)))
    for u in np.linspace(-0.75, -0.25, 101):
        value, rad = abs_gamma_values(float(u), np.array([0.0, 1.0]))
        lows.append(float(np.min(value - rad)))
    return min(lows) > 0.4, f"minimum |Gamma| on the boundary {min(lows):.6f}"


def specfun_checks() -> List[Tuple[str, Check]]:
    return [
        ("gamma_values", check_gamma_values),
        ("abs_line_constants", check_abs_line_constants),
        ("quarter_pole_constant", check_quarter_pole_constant),
        ("lorentz_envelope", check_lorentz_envelope),
        ("comparison_functions", check_comparison_functions),
        ("log_weight", check_log_weight),
        ("kernel_monotone", check_kernel_monotone),
        ("iterated_tails", check_iterated_tails),
        ("critical_envelope", check_critical_envelope),
        ("gamma_minimum", check_gamma_minimum),
    ]


# ---------------------------------------------------------------------------
# lemmas

def check_digamma_log_grid() -> Tuple[bool, str]:
    failures = 0
    total = 0
    for sigma in np.arange(0.0, 5.0 + 1e-9, 0.25):
        for t in np.arange(sigma + 2.0, 50.0 + 1e-9, 0.25):
            total += 1
            if not check_digamma_log_bound(float(sigma), float(t)).holds:
                failures += 1
    return failures == 0, f"{total - failures}/{total} grid points hold"


def check_gammaK_random() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    failures = []
    for _ in range(1000):
        field = _random_field(rng)
        t = float(rng.uniform(-200.0, 200.0))
        if not gammaK_logderiv_diff(field, t).holds:
            failures.append((field.describe(), t))
    return not failures, f"{len(failures)} failures" + (f", first {failures[0]}" if failures else "")


def check_corollary2_range() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    log_ts = np.exp(rng.uniform(math.log(23.0), math.log(1e55), 1000))
    bad = []
    for log_t in log_ts:
        margin = corollary2_margin(float(log_t))
        if not (margin.subcheck1 and margin.subcheck2):
            bad.append(float(log_t))
    L = threshold_L()
    ok = not bad and abs(L - 162546.6) <= 0.1
    return ok, f"{len(bad)} failing log T samples; L threshold {L:.4f}"


def check_display_consistency() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    fields = [RATIONALS] + [_random_field(rng) for _ in range(50)]
    failures = []
    for field in fields:
        pairs = (
            (bound_window(field, 11.0, 1.0).total, rounded_window_bound(field, 11.0, 1.0)),
            (bound_window(field, 10.5, 0.5).total, rounded_window_bound(field, 10.5, 0.5)),
            (bound_multiplicity(field, 10.0, 0.75).total, rounded_multiplicity_bound(field, 10.0)),
        )
        if any(exact > shown for exact, shown in pairs):
            failures.append(field.describe())
    return not failures, f"{len(fields) - len(failures)}/{len(fields)} fields below the rounded displays"


def check_psi1_sweep() -> Tuple[bool, str]:
    table = prime_table(10 ** 5)
    _, holds = chebyshev_psi1_sweep(table, np.arange(1, table.limit + 1))
    return bool(holds.all()), f"{int(holds.sum())}/{holds.size} integers hold"


def check_prime_sum_grid() -> Tuple[bool, str]:
    table = prime_table(10 ** 5)
    failures = []
    for sigma in (0.55, 0.65, 0.75, 0.85, 0.95):
        for delta in (0.001, 0.01, 0.05, 0.1, 0.5):
            if not prime_exp_sum(sigma, delta, table).holds:
                failures.append((sigma, delta))
    return not failures, f"failures: {failures}" if failures else "25/25 (sigma, delta) pairs hold"


def lemmas_checks() -> List[Tuple[str, Check]]:
    return [
        ("digamma_log_grid", check_digamma_log_grid),
        ("gammaK_random", check_gammaK_random),
        ("corollary2_range", check_corollary2_range),
        ("display_consistency", check_display_consistency),
        ("psi1_sweep", check_psi1_sweep),
        ("prime_sum_grid", check_prime_sum_grid),
    ]


# ---------------------------------------------------------------------------
# measures

def check_five_delta() -> Tuple[bool, str]:
    m = solve_five_delta()
    _, b1, b2 = m.centers
    weights_ok = all(abs(w - e) <= 5e-4 for w, e in zip(sorted(m.weights), FIVE_DELTA_WEIGHTS))
    ok = 0.355 <= b1 <= 0.356 and 0.875 <= b2 <= 0.876 and weights_ok and m.cost <= 0.5
    return ok, f"b1={b1:.6f} b2={b2:.6f} weights={tuple(round(w, 4) for w in m.weights)} cost={m.cost:.6f}"


def check_five_delta_covering() -> Tuple[bool, str]:
    report = covering_slack(solve_five_delta())
    return report.holds, report.root_certificate


def check_three_delta_closed_form() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        a, alpha = float(rng.uniform(0.05, 2.0)), float(rng.uniform(0.05, 1.0))
        m = three_delta(a, alpha, a / math.sqrt(2.0))
        worst = max(worst, abs(m.cost - three_delta_cost_closed_form(a, alpha)) / m.cost)
    return worst <= 1e-12, f"max relative gap {worst:.3g}"


def check_three_delta_covering() -> Tuple[bool, str]:
    narrow = covering_slack(three_delta(0.5, 0.25, 0.5 / math.sqrt(2.0))).holds
    wide = covering_slack(three_delta(1.0, 0.25, 1.0 / math.sqrt(2.0))).holds
    return narrow and not wide, f"a=0.5 holds={narrow}, a=1 holds={wide}"


def check_cost_limit() -> Tuple[bool, str]:
    a = 1e-3
    cost = three_delta(a, 0.25, a / math.sqrt(2.0)).cost
    return abs(cost - 0.15) < 1e-4, f"cost at a = 1e-3: {cost:.8f}"


def check_rescale_identity() -> Tuple[bool, str]:
    m = solve_five_delta()
    result = cost_and_rescale(m, 1.0)
    return result.rescaled == m, "rescale to a = 1 is the identity"


def measures_checks() -> List[Tuple[str, Check]]:
    return [
        ("five_delta", check_five_delta),
        ("five_delta_covering", check_five_delta_covering),
        ("three_delta_closed_form", check_three_delta_closed_form),
        ("three_delta_covering", check_three_delta_covering),
        ("cost_limit", check_cost_limit),
        ("rescale_identity", check_rescale_identity),
    ]


# ---------------------------------------------------------------------------
# riemann

def check_zeta_values() -> Tuple[bool, str]:
    at_two = zeta_em(2.0, 0.0, want_derivative=True)
    first_zero = zeta_em(0.5, 14.134725141734693).zeta
    ok = (
        at_two.zeta.contains(math.pi ** 2 / 6.0 + 0j)
        and at_two.derivative.re.widen(1e-12).contains(-0.93754825431584375)
        and abs(first_zero.mid) + first_zero.rad <= 1e-5
    )
    return ok, f"zeta(2)={at_two.zeta.mid.real:.12f}, |zeta(rho_1)|={abs(first_zero.mid):.3g}"


def check_xi_symmetry() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    failures = 0
    for _ in range(10):
        if not xi_symmetry_check(float(rng.uniform(-0.5, 1.5)), float(rng.uniform(2.0, 100.0))).holds:
            failures += 1
    return failures == 0, f"{10 - failures}/10 points satisfy xi(s) = xi(1 - s)"


def check_dirichlet_dominance() -> Tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    failures = [
        (sigma, t)
        for sigma in (1.1, 1.5, 2.0)
        for t in rng.uniform(1.0, 500.0, 5)
        if not dirichlet_dominance(sigma, float(t)).holds
    ]
    return not failures, f"failures: {failures}" if failures else "15/15 points hold"


def check_logderiv_bound() -> Tuple[bool, str]:
    failures = []
    for sigma in DUAL_ORACLE_SIGMAS:
        for t in DUAL_ORACLE_HEIGHTS:
            direct = zeta_logderiv(sigma, t)
            if abs(direct.mid) + direct.rad > zeta_logderiv_bound(RATIONALS, sigma, t).total:
                failures.append((sigma, t))
    return not failures, f"failures: {failures}" if failures else "bound dominates at 15 grid points"


def check_f_domination() -> Tuple[bool, str]:
    failures = []
    for sigma in DUAL_ORACLE_SIGMAS:
        for t in DUAL_ORACLE_HEIGHTS:
            if f_explicit(RATIONALS, sigma, t).upper > f_tilde(RATIONALS, sigma, t).total:
                failures.append((sigma, t))
    return not failures, f"failures: {failures}" if failures else "f_Q <= f~_Q at 15 grid points"


def _dual_oracle(table: ZeroTable) -> Check:
    def check() -> Tuple[bool, str]:
        failures = []
        compared = 0
        for sigma in DUAL_ORACLE_SIGMAS:
            for t in DUAL_ORACLE_HEIGHTS:
                cutoff = table.height - t
                if cutoff < 2:
                    continue
                compared += 1
                explicit = f_explicit(table.field, sigma, t)
                summed = f_from_zeros(table, sigma, t, cutoff)
                if abs(explicit.mid - summed.mid) > explicit.rad + summed.rad:
                    failures.append((sigma, t))
        ok = compared > 0 and not failures
        return ok, f"{compared - len(failures)}/{compared} grid points agree"

    return check


def riemann_checks(table: Optional[ZeroTable] = None) -> List[Tuple[str, Check]]:
    checks = [
        ("zeta_values", check_zeta_values),
        ("xi_symmetry", check_xi_symmetry),
        ("dirichlet_dominance", check_dirichlet_dominance),
        ("logderiv_bound", check_logderiv_bound),
        ("f_domination", check_f_domination),
    ]
    if table is not None:
        checks.append(("dual_oracle", _dual_oracle(table)))
    return checks


SUITE_NAMES = ("specfun", "lemmas", "measures", "riemann")


def _suite_checks(name: str, table: Optional[ZeroTable]) -> List[Tuple[str, Check]]:
    builders: Dict[str, Callable[[], List[Tuple[str, Check]]]] = {
        "specfun": specfun_checks,
        "lemmas": lemmas_checks,
        "measures": measures_checks,
        "riemann": lambda: riemann_checks(table),
    }
    if name not in builders:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    return builders[name]()


def run_suite(name: str, table: Optional[ZeroTable] = None) -> List[CheckResult]:
    """Run one suite; a check that raises counts as failed with the error as its message."""
    results = []
    with SUITE_TIME.labels(name).time():
        for check_name, check in _suite_checks(name, table):
            try:
                passed, message = check()
            except ZetaBoundsError as e:
                passed, message = False, f"{e.qualified_name}: {e}"
            if not passed:
                CHECK_FAILURES.labels(name).inc()
                logger.error(f"{name}.{check_name} failed: {message}")
            else:
                logger.info(f"{name}.{check_name} passed: {message}")
            results.append((check_name, bool(passed), message))
    return results


def run_all(table: Optional[ZeroTable] = None) -> Dict[str, List[CheckResult]]:
    return {name: run_suite(name, table) for name in SUITE_NAMES}
