"""Cross-verification checks: every claim the package makes about its own
numbers, runnable as one battery.

Each check pins its tolerance and its parameter set, computes a worst-case
metric, and reports pass/fail with the metric in the detail string. The
battery runs on the two reference configurations used throughout the
package: the threshold surface set (beta=2, gamma=3, mu=1) and the peak
surface set (beta=3, gamma=3).
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    asymptotic_u,
    asymptotic_v,
    bounds_u,
    bounds_v,
    solve_anchor,
    u_integral,
    v_integral,
)
from .core import ModelParams, exact_u_at_x0, psi
from .gridrun import GridSpec
from .ode import hitting_time_u, hitting_time_v, integrate
from .pde import (
    check_boundary_u,
    check_boundary_v,
    check_characteristic_identity,
    pde_residual,
)

__all__ = ["CheckOutcome", "run_all", "ALL_CHECKS"]

U_PARAMS = ModelParams(beta=2.0, gamma=3.0, mu=1.0)
V_PARAMS = ModelParams(beta=3.0, gamma=3.0, mu=1.0)

U_GRID = GridSpec(0.1, 6.0, 61, 1.01, 5.0, 41)
V_GRID = GridSpec(1.01, 20.0, 77, 0.5, 5.0, 19)
U_GRID_QUICK = GridSpec(0.1, 6.0, 13, 1.01, 5.0, 9)
V_GRID_QUICK = GridSpec(1.01, 20.0, 16, 0.5, 5.0, 5)

CROSS_METHOD_TOL = 1e-6
CROSS_METHOD_BUDGET_S = 60.0
BOUND_SLACK = 1e-9
ORDERING_TOL = 1e-9
PSI_DRIFT_TOL = 1e-8
ORDER_RANGE = (1.7, 2.3)
RESIDUAL_SMALL_H_TOL = 1e-5
CHARACTERISTIC_TOL = 1e-6
EXACT_X0_TOL = 1e-9
ASYM_RATIO_BAND = (0.9, 1.1)
VANISHING_V_TOL = 0.05

# interior points chosen where the leading truncation term is well above the
# rounding floor, so the convergence order is observable (it vanishes along a
# curve where the third derivatives cancel)
PDE_POINTS_U = [
    (0.8, 1.5),
    (2.0, 1.5),
    (4.5, 1.5),
    (0.8, 2.0),
    (2.5, 2.0),
    (5.0, 2.0),
    (2.0, 2.75),
    (3.5, 2.75),
    (5.0, 4.0),
]
PDE_POINTS_V = [(xx, yy) for xx in (3.0, 8.0, 14.0) for yy in (1.0, 2.5, 4.0)]


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)


def _outcome(name, passed, detail, **metrics):
    return CheckOutcome(name, bool(passed), detail, metrics)


def _sample_trajectories(params, n_ic, n_times, seed, horizon=3.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_ic):
        x = float(rng.uniform(0.2, 6.0))
        y = float(rng.uniform(0.5, 5.0))
        traj = integrate(params, x, y, horizon)
        times = np.linspace(0.0, horizon, n_times)
        states = [traj.eval(float(t)) for t in times]
        out.append((x, y, states))
    return out


def check_psi_conservation(quick=False):
    """Relative drift of the conserved level-set value along solved paths."""
    n_ic = 5 if quick else 20
    worst = 0.0
    for x, y, states in _sample_trajectories(U_PARAMS, n_ic, 50, seed=7):
        p0 = psi(U_PARAMS, x, y)
        scale = max(1.0, abs(p0))
        for st in states:
            if st.s <= 0.0:
                continue
            worst = max(worst, abs(psi(U_PARAMS, st.s, st.i) - p0) / scale)
    return _outcome(
        "psi_conservation",
        worst <= PSI_DRIFT_TOL,
        f"max relative drift {worst:.3e} (tol {PSI_DRIFT_TOL:g}) over "
        f"{n_ic} paths x 50 times",
        worst=worst,
    )


def check_mass_and_positivity(quick=False):
    """Total mass S+I never increases and both counts stay positive."""
    n_ic = 5 if quick else 20
    worst_rise = 0.0
    min_count = math.inf
    for x, y, states in _sample_trajectories(U_PARAMS, n_ic, 50, seed=8):
        mass0 = x + y
        prev = math.inf
        for st in states:
            m = st.s + st.i
            worst_rise = max(worst_rise, (m - prev) / max(1.0, mass0))
            prev = m
            min_count = min(min_count, st.s, st.i)
    ok = worst_rise <= 1e-10 and min_count > 0.0
    return _outcome(
        "mass_and_positivity",
        ok,
        f"max mass rise {worst_rise:.3e} (tol 1e-10), min count {min_count:.3e}",
        worst_rise=worst_rise,
        min_count=min_count,
    )


def check_boundary_u_zero(quick=False):
    """u vanishes identically on the inflow boundary y = mu, x <= rho."""
    xs = np.linspace(0.0, U_PARAMS.rho, 10)
    worst = check_boundary_u(U_PARAMS, [float(v) for v in xs])
    return _outcome(
        "boundary_u_zero",
        worst == 0.0,
        f"max |u| on the boundary {worst!r} (must be exactly 0), 10 points, "
        "both methods",
        worst=worst,
    )


def check_boundary_v_zero(quick=False):
    """v vanishes identically on the inflow boundary x = rho."""
    ys = [0.1, 1.0, 10.0, 1e6]
    worst = check_boundary_v(V_PARAMS, ys)
    return _outcome(
        "boundary_v_zero",
        worst == 0.0,
        f"max |v| on the boundary {worst!r} (must be exactly 0), "
        f"y in {ys}, both methods",
        worst=worst,
    )


def _cross_method(params, grid, which, quick):
    if which == "u":
        by_ode, by_int = hitting_time_u, (lambda p, x, y: u_integral(p, x, y))
    else:
        by_ode, by_int = hitting_time_v, (lambda p, x, y: v_integral(p, x, y))
    xs = grid.xs()
    ys = grid.ys()
    # warm the kernels so the budget measures the sweep, not compilation
    by_ode(params, float(xs[-1]), float(ys[-1]))
    by_int(params, float(xs[-1]), float(ys[-1]))
    worst = 0.0
    t0 = time.perf_counter()
    for y in ys:
        for x in xs:
            a = by_ode(params, float(x), float(y)).value
            b = by_int(params, float(x), float(y)).value
            worst = max(worst, abs(a - b) / max(1.0, b))
    elapsed = time.perf_counter() - t0
    n = len(xs) * len(ys)
    ok = worst <= CROSS_METHOD_TOL and (quick or elapsed <= CROSS_METHOD_BUDGET_S)
    detail = (
        f"max discrepancy {worst:.3e} (tol {CROSS_METHOD_TOL:g}) over {n} nodes, "
        f"{elapsed:.2f}s single-threaded (budget {CROSS_METHOD_BUDGET_S:.0f}s)"
    )
    return ok, detail, worst, elapsed, n


def check_cross_method_u(quick=False):
    """ODE event route and integral route agree on the threshold surface."""
    grid = U_GRID_QUICK if quick else U_GRID
    ok, detail, worst, elapsed, n = _cross_method(U_PARAMS, grid, "u", quick)
    return _outcome("cross_method_u", ok, detail, worst=worst, elapsed=elapsed, nodes=n)


def check_cross_method_v(quick=False):
    """ODE event route and integral route agree on the peak-time surface."""
    grid = V_GRID_QUICK if quick else V_GRID
    ok, detail, worst, elapsed, n = _cross_method(V_PARAMS, grid, "v", quick)
    return _outcome("cross_method_v", ok, detail, worst=worst, elapsed=elapsed, nodes=n)


def _pde_order(params, points, which, quick):
    if which == "u":
        fld = lambda a, b: u_integral(params, a, b).value
        lower = (0.0, params.mu)
    else:
        fld = lambda a, b: v_integral(params, a, b).value
        lower = (params.rho, 0.0)
    pts = points[::4] if quick else points
    orders = []
    worst_resid = 0.0
    for x, y in pts:
        rep = pde_residual(fld, params, x, y, 1e-3, domain_lower=lower)
        small = pde_residual(fld, params, x, y, 2.5e-4, domain_lower=lower)
        orders.append(rep.order_estimate)
        worst_resid = max(worst_resid, abs(small.residual))
    order_ok = all(
        o is not None and ORDER_RANGE[0] <= o <= ORDER_RANGE[1] for o in orders
    )
    ok = order_ok and worst_resid <= RESIDUAL_SMALL_H_TOL
    shown = ", ".join("None" if o is None else f"{o:.2f}" for o in orders)
    detail = (
        f"orders [{shown}] (range {ORDER_RANGE}), max |residual| at h=2.5e-4 "
        f"{worst_resid:.3e} (tol {RESIDUAL_SMALL_H_TOL:g})"
    )
    return ok, detail, orders, worst_resid


def check_pde_order_u(quick=False):
    """Central-difference residual of the u transport equation shrinks at
    second order across h in {1e-3, 5e-4, 2.5e-4}."""
    ok, detail, orders, worst = _pde_order(U_PARAMS, PDE_POINTS_U, "u", quick)
    return _outcome("pde_order_u", ok, detail, orders=orders, worst_resid=worst)


def check_pde_order_v(quick=False):
    """Same residual study for the peak-time surface."""
    ok, detail, orders, worst = _pde_order(V_PARAMS, PDE_POINTS_V, "v", quick)
    return _outcome("pde_order_v", ok, detail, orders=orders, worst_resid=worst)


def check_bounds_sandwich_u(quick=False):
    """Closed-form bounds sandwich the computed u across the reference grid."""
    grid = U_GRID_QUICK if quick else U_GRID
    violations = 0
    worst = -math.inf
    for y in grid.ys():
        for x in grid.xs():
            x = float(x)
            y = float(y)
            u = u_integral(U_PARAMS, x, y).value
            b = bounds_u(U_PARAMS, x, y)
            gap = max(b.lower - u, u - b.crude_upper)
            if b.subcritical_upper is not None:
                gap = max(gap, u - b.subcritical_upper)
            worst = max(worst, gap)
            if gap > BOUND_SLACK:
                violations += 1
    return _outcome(
        "bounds_sandwich_u",
        violations == 0,
        f"{violations} violations, worst overshoot {worst:.3e} "
        f"(slack {BOUND_SLACK:g})",
        violations=violations,
        worst=worst,
    )


def check_bounds_sandwich_v(quick=False):
    """Chord/tangent and crude bounds sandwich the computed v."""
    grid = V_GRID_QUICK if quick else V_GRID
    violations = 0
    worst = -math.inf
    for y in grid.ys():
        for x in grid.xs():
            x = float(x)
            y = float(y)
            v = v_integral(V_PARAMS, x, y).value
            b = bounds_v(V_PARAMS, x, y)
            gap = max(b.lower - v, v - b.upper, v - b.crude_upper)
            worst = max(worst, gap)
            if gap > BOUND_SLACK:
                violations += 1
    return _outcome(
        "bounds_sandwich_v",
        violations == 0,
        f"{violations} violations, worst overshoot {worst:.3e} "
        f"(slack {BOUND_SLACK:g})",
        violations=violations,
        worst=worst,
    )


def check_ordering_v_le_u(quick=False):
    """The peak precedes the threshold crossing: v <= u wherever y >= mu."""
    n = 40 if quick else 200
    rng = np.random.default_rng(11)
    worst = -math.inf
    for _ in range(n):
        x = float(rng.uniform(0.0, 6.0))
        y = float(rng.uniform(U_PARAMS.mu, 5.0))
        u = hitting_time_u(U_PARAMS, x, y).value
        v = hitting_time_v(U_PARAMS, x, y).value
        worst = max(worst, v - u)
    return _outcome(
        "ordering_v_le_u",
        worst <= ORDERING_TOL,
        f"max (v - u) = {worst:.3e} over {n} random states (tol {ORDERING_TOL:g})",
        worst=worst,
    )


def check_characteristic_u(quick=False):
    """u decreases at unit rate along solved orbits (u route)."""
    n = 3 if quick else 10
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(n):
        x = float(rng.uniform(0.5, 6.0))
        y = float(rng.uniform(1.2, 5.0))
        worst = max(
            worst,
            check_characteristic_identity(U_PARAMS, x, y, (0.25, 0.5, 0.75), "u"),
        )
    return _outcome(
        "characteristic_u",
        worst <= CHARACTERISTIC_TOL,
        f"max relative defect {worst:.3e} over {n} orbits at fractions "
        f"(0.25, 0.5, 0.75) (tol {CHARACTERISTIC_TOL:g})",
        worst=worst,
    )


def check_characteristic_v(quick=False):
    """Same identity for the peak time."""
    n = 3 if quick else 10
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(n):
        x = float(rng.uniform(1.5, 20.0))
        y = float(rng.uniform(0.5, 5.0))
        worst = max(
            worst,
            check_characteristic_identity(V_PARAMS, x, y, (0.25, 0.5, 0.75), "v"),
        )
    return _outcome(
        "characteristic_v",
        worst <= CHARACTERISTIC_TOL,
        f"max relative defect {worst:.3e} over {n} orbits at fractions "
        f"(0.25, 0.5, 0.75) (tol {CHARACTERISTIC_TOL:g})",
        worst=worst,
    )


def check_exact_x0(quick=False):
    """With no susceptibles the ODE route reproduces the closed form."""
    worst = 0.0
    for y in (2.0, 10.0, 1e3):
        y *= U_PARAMS.mu
        got = hitting_time_u(U_PARAMS, 0.0, y).value
        want = exact_u_at_x0(U_PARAMS, y)
        worst = max(worst, abs(got - want) / max(1.0, want))
    return _outcome(
        "exact_x0",
        worst <= EXACT_X0_TOL,
        f"max relative error {worst:.3e} vs ln(y/mu)/gamma at "
        f"y/mu in (2, 10, 1e3) (tol {EXACT_X0_TOL:g})",
        worst=worst,
    )


def check_asymptotic_u(quick=False):
    """u approaches (1/gamma) ln((x+y)/mu) along x = y = r/2 as r grows."""
    rs = (1e3, 1e6) if quick else (1e3, 1e4, 1e5, 1e6)
    devs = []
    for r in rs:
        val = u_integral(U_PARAMS, r / 2.0, r / 2.0).value
        ratio = val / asymptotic_u(U_PARAMS, r / 2.0, r / 2.0)
        devs.append(abs(ratio - 1.0))
    in_band = devs[-1] <= max(1.0 - ASYM_RATIO_BAND[0], ASYM_RATIO_BAND[1] - 1.0)
    closer = devs[-1] < devs[0]
    shrinking = all(devs[j + 1] < devs[j] for j in range(len(devs) - 1))
    ok = in_band and closer and shrinking
    shown = ", ".join(f"{d:.2e}" for d in devs)
    return _outcome(
        "asymptotic_u",
        ok,
        f"|ratio-1| along r in {rs}: [{shown}]; within band at r=1e6 and "
        "strictly shrinking",
        devs=devs,
    )


def check_asymptotic_v(quick=False):
    """beta*(x - rho + y)*v / ln[(x/rho)((x-rho)/y + 1)] is near 1 for large x."""
    x, y = 1e6, 1.0
    val = v_integral(V_PARAMS, x, y).value
    ratio = val / asymptotic_v(V_PARAMS, x, y)
    ok = ASYM_RATIO_BAND[0] <= ratio <= ASYM_RATIO_BAND[1]
    return _outcome(
        "asymptotic_v",
        ok,
        f"ratio {ratio:.8f} at (x, y) = (1e6, 1) (band {ASYM_RATIO_BAND}), "
        "integral route",
        ratio=ratio,
    )


def check_vanishing_v(quick=False):
    """The peak time is tiny whenever the total mass is huge and y >= 0.5."""
    points = []
    for x in np.geomspace(1e4, 1e6, 10):
        points.append((float(x), 0.5))
    for r in np.geomspace(1e4, 1e6, 5):
        points.append((float(r) / 2.0, float(r) / 2.0))
    for y in np.geomspace(0.5, 1e4, 5):
        points.append((1e4, float(y)))
    if quick:
        points = points[::4]
    worst = 0.0
    for x, y in points:
        worst = max(worst, v_integral(V_PARAMS, x, y).value)
    return _outcome(
        "vanishing_v",
        worst <= VANISHING_V_TOL,
        f"max v {worst:.3e} over {len(points)} states with x + y >= 1e4, "
        f"y >= 0.5 (tol {VANISHING_V_TOL:g})",
        worst=worst,
    )


def check_log_slope_bounds(quick=False):
    """(ln x - ln rho)/(x - rho) lies between 1/x and beta/gamma for x > rho.

    The slack per point tracks the rounding noise of the printed formula:
    the numerator cancels to eps * |ln rho| absolute, which dominates as x
    approaches rho.
    """
    eps = 2.220446049250313e-16
    worst = -math.inf
    for params in (U_PARAMS, V_PARAMS):
        rho = params.rho
        for f in np.geomspace(1e-9, 99.0, 40):
            x = rho * (1.0 + float(f))
            dlog = math.log(x) - math.log(rho)
            slope = dlog / (x - rho)
            tol = 8.0 * eps * (1.0 + abs(math.log(rho))) / abs(dlog)
            worst = max(
                worst,
                (1.0 / x) / slope - 1.0 - tol,
                slope / (params.beta / params.gamma) - 1.0 - tol,
            )
    return _outcome(
        "log_slope_bounds",
        worst <= 0.0,
        f"max relative violation beyond rounding noise {worst:.3e} over "
        "80 states in two parameter sets",
        worst=worst,
    )


def check_anchor_quality(quick=False):
    """Anchor root residual stays at rounding level and a <= min(x, rho)."""
    worst_resid = 0.0
    worst_pos = 0.0
    xs = np.geomspace(1e-3, 50.0, 12)
    for y in (U_PARAMS.mu, 1.5, 5.0, 100.0):
        for x in xs:
            x = float(x)
            res = solve_anchor(U_PARAMS, x, y)
            psiv = psi(U_PARAMS, x, y)
            scale = max(1.0, abs(psiv))
            worst_resid = max(worst_resid, res.residual / scale)
            worst_pos = max(
                worst_pos,
                res.a - U_PARAMS.rho * (1.0 + 1e-12),
                res.a - x * (1.0 + 1e-12) if x <= U_PARAMS.rho else -1.0,
            )
    ok = worst_resid <= 1e-12 and worst_pos <= 0.0
    return _outcome(
        "anchor_quality",
        ok,
        f"max scaled residual {worst_resid:.3e} (tol 1e-12), "
        f"max position violation {worst_pos:.3e}",
        worst_resid=worst_resid,
    )


def check_integrand_positivity(quick=False):
    """Along the orbit the infected count stays above mu strictly between the
    anchor and x, and equals mu / y at the endpoints."""
    worst = 0.0
    for x, y in ((4.0, 2.0), (0.5, 3.0), (6.0, 5.0)):
        res = solve_anchor(U_PARAMS, x, y)
        psiv = psi(U_PARAMS, x, y)
        rho = U_PARAMS.rho
        scale = max(1.0, abs(psiv))
        la, lx = res.log_a, math.log(x)
        span = lx - la
        for f in np.linspace(1e-3, 1.0 - 1e-3, 40):
            z = math.exp(la + float(f) * span)
            g = rho * math.log(z) - z + psiv
            worst = max(worst, U_PARAMS.mu - g - 1e-12 * scale)
        g_a = rho * la - math.exp(la) + psiv
        g_x = rho * lx - x + psiv
        worst = max(
            worst,
            abs(g_a - U_PARAMS.mu) - 1e-9 * scale,
            abs(g_x - y) - 1e-9 * scale,
        )
    return _outcome(
        "integrand_positivity",
        worst <= 0.0,
        f"max violation {worst:.3e} over interior nodes and endpoint identities",
        worst=worst,
    )


ALL_CHECKS = [
    check_psi_conservation,
    check_mass_and_positivity,
    check_boundary_u_zero,
    check_boundary_v_zero,
    check_cross_method_u,
    check_cross_method_v,
    check_pde_order_u,
    check_pde_order_v,
    check_bounds_sandwich_u,
    check_bounds_sandwich_v,
    check_ordering_v_le_u,
    check_characteristic_u,
    check_characteristic_v,
    check_exact_x0,
    check_asymptotic_u,
    check_asymptotic_v,
    check_vanishing_v,
    check_log_slope_bounds,
    check_anchor_quality,
    check_integrand_positivity,
]


def run_all(quick=False):
    return [fn(quick=quick) for fn in ALL_CHECKS]
