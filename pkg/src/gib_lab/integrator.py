"""Fixed-step classical RK4 for the gIB system, with sampled observers."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import AliasingError, BlowUpError, BoundaryTailError, ConfigError
from .model import State, check_finite, rhs

log = logging.getLogger(__name__)

TAIL_WARN = 1e-8
TAIL_ABORT = 1e-6
BOUNDARY_WARN = 1e-12


@dataclass(frozen=True)
class Schedule:
    t_final: float
    dt: float
    sample_every: int = 10

    def __post_init__(self):
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ConfigError("sample_every must be a positive integer", key="sample_every")
        if self.dt * self.sample_every > 1 + 1e-12:
            raise ConfigError("dt * sample_every must be <= 1", key="sample_every")

    @property
    def n_steps(self):
        """Number of steps; the last one is shortened to land on ``t_final``."""
        return int(math.ceil(self.t_final / self.dt - 1e-9))

    @classmethod
    def from_params(cls, params, sample_every=10):
        return cls(params.t_final, params.dt, sample_every)


def rk4_step(state, dt, params):
    u, v = state.u, state.v
    t = state.t
    try:
        k1 = rhs(state, params)
        k2 = rhs(State(state.grid, u + 0.5 * dt * k1.du, v + 0.5 * dt * k1.dv, t + 0.5 * dt), params)
        k3 = rhs(State(state.grid, u + 0.5 * dt * k2.du, v + 0.5 * dt * k2.dv, t + 0.5 * dt), params)
        k4 = rhs(State(state.grid, u + dt * k3.du, v + dt * k3.dv, t + dt), params)
    except BlowUpError as exc:
        raise BlowUpError(f"blow-up during RK4 step from t = {t!r}: {exc}", t=t) from exc
    return State(
        state.grid,
        u + dt / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
        v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
        t + dt,
    )


def advance(state, params, t_end, dt=None):
    """Step from ``state.t`` to ``t_end`` with (at most) ``dt``, landing exactly."""
    dt = params.dt if dt is None else dt
    span = t_end - state.t
    if span == 0:
        return state
    n = max(1, int(math.ceil(abs(span) / abs(dt) - 1e-9)))
    h = span / n
    for _ in range(n):
        state = rk4_step(state, h, params)
    return State(state.grid, state.u, state.v, t_end)


def monitor(state):
    """Spectrum tail of u and field magnitude at the box edge; raises on aliasing."""
    tail = spectral.spectral_tail(state.grid, state.u)
    edge = max(spectral.boundary_magnitude(state.u), spectral.boundary_magnitude(state.v))
    if tail > TAIL_ABORT:
        raise AliasingError(
            f"spectral tail {tail:.3g} of u exceeds {TAIL_ABORT:g} at t = {state.t:.6g}; "
            "raise n_points"
        )
    return tail, edge


def evolve(initial, params, schedule, observers=(), check_boundary=True):
    """Integrate and yield one record per sample time.

    Each observer is ``callable(state) -> dict``; records are the merged dicts
    plus ``t``, ``sup_u`` and ``tail_spec``.  The final time is always emitted.
    """
    report = check_finite(initial)
    if not report:
        raise BlowUpError(
            f"initial {report.bad_field} is non-finite at index {report.bad_index}", t=initial.t
        )
    if check_boundary and max(report.boundary_u, report.boundary_v) > BOUNDARY_WARN:
        raise BoundaryTailError(
            f"initial data is {max(report.boundary_u, report.boundary_v):.3g} at the box edge"
        )

    warned = set()

    def sample(state):
        tail, edge = monitor(state)
        if tail > TAIL_WARN and "tail" not in warned:
            warned.add("tail")
            log.warning("spectral tail %.3g above %.0e at t = %.6g", tail, TAIL_WARN, state.t)
        if edge > BOUNDARY_WARN and "edge" not in warned:
            warned.add("edge")
            log.warning("field magnitude %.3g at box edge at t = %.6g", edge, state.t)
        row = {"t": state.t, "sup_u": float(np.max(np.abs(state.u))), "tail_spec": tail}
        for obs in observers:
            row.update(obs(state))
        return row

    t0 = initial.t
    state = initial
    yield sample(state)
    n = schedule.n_steps
    dt = schedule.dt
    for step in range(1, n + 1):
        t_next = t0 + step * dt if step < n else t0 + schedule.t_final
        state = rk4_step(state, t_next - state.t, params)
        # pin t to the schedule so sample times carry no accumulated drift
        state.t = t_next
        if step % schedule.sample_every == 0 or step == n:
            yield sample(state)


def run(initial, params, t_end, dt=None):
    """Final state at ``t_end`` without any sampling."""
    return advance(initial, params, t_end, dt)
