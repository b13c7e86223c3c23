"""Adaptive ODE integration of the SIR system with event location.

The hitting-time entry points integrate until a watched component crosses its
level and refine the crossing on the integrator's dense output, so the event
time carries the integrator's accuracy rather than the step size.
Closed-form caps bound how long integration may run: the threshold time is
at most (x + y)/(gamma*mu) and the peak time at most ln(x/rho)/(beta*y), so
passing a cap signals numerical breakdown, not a long transient.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .core import CriticalTimeResult, Method, ModelParams, SirState, _require_finite
from .errors import DomainError, IntegrationStall, NeverReached, TimeCapExceeded

__all__ = [
    "IntegratorConfig",
    "EventKind",
    "Event",
    "Trajectory",
    "integrate",
    "hitting_time_u",
    "hitting_time_v",
]

# safety margin on the closed-form caps; the true event time is strictly
# below the cap, the margin only absorbs rounding in the cap itself
_CAP_SLACK = 1.0 + 1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances for the adaptive integrator.

    rel_tol/abs_tol control the per-step error; event_time_tol is the
    relative width to which an event time is refined; max_step caps the step
    size (unbounded by default).
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    event_time_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "event_time_tol"):
            value = float(getattr(self, name))
            if math.isnan(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive, got {value!r}")
            object.__setattr__(self, name, value)


_DEFAULT_CONFIG = IntegratorConfig()


class EventKind(Enum):
    """Which level crossing an event records."""

    I_REACHES_MU = "i_reaches_mu"
    S_REACHES_RHO = "s_reaches_rho"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    state: SirState
    err_estimate: float = 0.0

    @property
    def t(self) -> float:
        return self.state.t


class Trajectory:
    """A solved path with dense evaluation between accepted steps.

    ``samples`` holds the accepted step endpoints as states; ``eval`` gives
    the continuous interpolant (locally of the integrator's order) at any
    time in [0, t_end]. ``events`` records the first downward crossing of
    I through mu and of S through rho, when they occur in the window.
    """

    def __init__(self, params, initial, ts, states, stages, events):
        self.params = params
        self.initial = initial
        self._ts = ts
        self._states = states
        self._stages = stages
        self.events = tuple(events)
        self.samples = [
            SirState(states[j, 0], states[j, 1], ts[j]) for j in range(len(ts))
        ]

    @property
    def t_end(self) -> float:
        return float(self._ts[-1])

    def eval(self, t: float) -> SirState:
        """Interpolated state at time t, 0 <= t <= t_end."""
        t = _require_finite("t", t)
        ts = self._ts
        if t < ts[0] or t > ts[-1]:
            raise DomainError(f"t={t!r} outside the solved window [0, {ts[-1]!r}]")
        j = int(np.searchsorted(ts, t, side="right")) - 1
        if j >= len(ts) - 1:
            j = len(ts) - 2
        if j < 0:
            j = 0
        h = ts[j + 1] - ts[j]
        if h <= 0.0:
            return SirState(self._states[j, 0], self._states[j, 1], t)
        theta = (t - ts[j]) / h
        k = self._stages[j]
        qs = kernels._dense_coeffs(k, 0)
        qi = kernels._dense_coeffs(k, 1)
        s = kernels._dense_eval(self._states[j, 0], h, qs[0], qs[1], qs[2], qs[3], theta)
        i = kernels._dense_eval(self._states[j, 1], h, qi[0], qi[1], qi[2], qi[3], theta)
        return SirState(max(s, 0.0), max(i, 0.0), t)


def _event_err(bracket_width: float, t_event: float, cfg: IntegratorConfig) -> float:
    # the refined bracket can collapse to zero width; the global integration
    # error (roughly the tolerance accumulated over O(10) steps) still applies
    return max(bracket_width, 10.0 * cfg.rel_tol * max(1.0, t_event))


def _check_initial(x: float, y: float) -> tuple[float, float]:
    x = _require_finite("x", x)
    y = _require_finite("y", y)
    if x < 0.0 or y < 0.0:
        raise DomainError(f"initial counts must be nonnegative, got x={x!r} y={y!r}")
    return x, y


def integrate(
    params: ModelParams,
    x: float,
    y: float,
    t_end: float,
    config: IntegratorConfig | None = None,
) -> Trajectory:
    """Solve the SIR system from (x, y) over [0, t_end]."""
    x, y = _check_initial(x, y)
    t_end = _require_finite("t_end", t_end)
    if t_end < 0.0:
        raise DomainError(f"t_end must be >= 0, got {t_end!r}")
    cfg = config or _DEFAULT_CONFIG
    (
        status,
        ts,
        states,
        stages,
        u_found,
        u_t,
        u_s,
        u_i,
        u_err,
        v_found,
        v_t,
        v_s,
        v_i,
        v_err,
        t_reached,
    ) = kernels._integrate_path(
        params.beta,
        params.gamma,
        x,
        y,
        t_end,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
        params.mu,
        params.rho,
        cfg.event_time_tol,
    )
    if status == kernels.ODE_STALL:
        raise IntegrationStall(t_reached)
    events = []
    if u_found:
        events.append(
            Event(
                EventKind.I_REACHES_MU,
                SirState(max(u_s, 0.0), max(u_i, 0.0), u_t),
                u_err,
            )
        )
    if v_found:
        events.append(
            Event(
                EventKind.S_REACHES_RHO,
                SirState(max(v_s, 0.0), max(v_i, 0.0), v_t),
                v_err,
            )
        )
    events.sort(key=lambda e: e.t)
    return Trajectory(params, SirState(x, y, 0.0), ts, states, stages, events)


def hitting_time_u(
    params: ModelParams,
    x: float,
    y: float,
    config: IntegratorConfig | None = None,
) -> CriticalTimeResult:
    """First time the infected count falls to mu, located on the ODE path.

    Returns 0 immediately when y <= mu (the threshold is already met).
    """
    x, y = _check_initial(x, y)
    if y <= params.mu:
        return CriticalTimeResult(0.0, Method.BOUNDARY_ZERO, 0.0)
    cfg = config or _DEFAULT_CONFIG
    cap = (x + y) / (params.gamma * params.mu) * _CAP_SLACK
    status, te, se, ie, err, t_reached = kernels._hit_time(
        params.beta,
        params.gamma,
        x,
        y,
        1,
        params.mu,
        cap,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
        cfg.event_time_tol,
    )
    if status == kernels.ODE_STALL:
        raise IntegrationStall(t_reached)
    if status == kernels.ODE_CAP:
        raise TimeCapExceeded(cap, t_reached)
    return CriticalTimeResult(max(te, 0.0), Method.ODE_EVENT, _event_err(err, te, cfg))


def hitting_time_v(
    params: ModelParams,
    x: float,
    y: float,
    config: IntegratorConfig | None = None,
) -> CriticalTimeResult:
    """First time the susceptible count falls to rho = gamma/beta, located on
    the ODE path.

    Returns 0 immediately when x <= rho. Raises NeverReached when x > rho and
    y = 0: S is then constant and never reaches rho.
    """
    x, y = _check_initial(x, y)
    rho = params.rho
    if x <= rho:
        return CriticalTimeResult(0.0, Method.BOUNDARY_ZERO, 0.0)
    if y == 0.0:
        raise NeverReached(
            f"S is constant at x={x!r} > rho={rho!r} with no infection present"
        )
    cfg = config or _DEFAULT_CONFIG
    cap = (math.log(x) - math.log(rho)) / (params.beta * y) * _CAP_SLACK
    status, te, se, ie, err, t_reached = kernels._hit_time(
        params.beta,
        params.gamma,
        x,
        y,
        0,
        rho,
        cap,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
        cfg.event_time_tol,
    )
    if status == kernels.ODE_STALL:
        raise IntegrationStall(t_reached)
    if status == kernels.ODE_CAP:
        raise TimeCapExceeded(cap, t_reached)
    return CriticalTimeResult(max(te, 0.0), Method.ODE_EVENT, _event_err(err, te, cfg))
