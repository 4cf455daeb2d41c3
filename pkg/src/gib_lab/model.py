"""State container and vector field of the generalized Improved Boussinesq system.

The second-order equation ``u_tt - u_xxtt - u_xx - (|u|^{p-1} u)_xx = 0`` is
integrated in first-order form::

    u_t = v_x
    v_t = (1 - d_xx)^{-1} d_x (u + |u|^{p-1} u)
"""
from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import BlowUpError, ConfigError


@dataclass(frozen=True)
class ModelParams:
    p: float = 2.0
    half_length: float = 50.0
    n_points: int = 1024
    dt: float = 0.01
    t_final: float = 10.0
    dealias: bool = False

    def __post_init__(self):
        if not self.p > 1:
            raise ConfigError(f"p must exceed 1, got {self.p!r}", key="p")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}", key="dt")
        if self.t_final < 0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final!r}", key="t_final")
        if self.t_final > 0 and self.dt > self.t_final:
            raise ConfigError("dt must not exceed t_final", key="dt")
        # the linear propagator has |eigenvalue| <= 1; keep dt well inside RK4's
        # stability interval on the imaginary axis (|dt * lambda| < 2.8)
        if self.dt > 0.5:
            raise ConfigError(f"dt = {self.dt} fails the stability sanity bound dt <= 0.5", key="dt")
        if self.dealias and float(self.p) != int(self.p):
            raise ConfigError("the 2/3 dealiasing filter is only offered for integer p", key="dealias")

    def grid(self):
        return spectral.make_grid(self.half_length, self.n_points)


@dataclass
class State:
    grid: spectral.Grid
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        n = self.grid.n_points
        if self.u.shape != (n,) or self.v.shape != (n,):
            raise ValueError(f"u and v must have shape ({n},)")

    def copy(self):
        return State(self.grid, self.u.copy(), self.v.copy(), self.t)

    @classmethod
    def zeros(cls, grid, t=0.0):
        return cls(grid, grid.zeros(), grid.zeros(), t)


@dataclass
class StateDerivative:
    du: np.ndarray
    dv: np.ndarray


@dataclass
class FiniteReport:
    finite: bool
    sup_u: float
    sup_v: float
    boundary_u: float
    boundary_v: float
    bad_index: int = None
    bad_field: str = None

    def __bool__(self):
        return self.finite


def signed_power(u, p):
    """Pointwise ``|u|^{p-1} u``; zero maps to zero."""
    u = np.asarray(u, dtype=float)
    return np.sign(u) * np.abs(u) ** p


def rhs(state, params, check=True):
    """Right-hand side of the first-order system at ``state``."""
    grid = state.grid
    ik = grid.multiplier(1)
    # non-finite values are reported below as a blow-up, not as numpy warnings
    with np.errstate(invalid="ignore", over="ignore"):
        du = np.fft.irfft(ik * np.fft.rfft(state.v), n=grid.n_points)
        w_hat = np.fft.rfft(state.u + signed_power(state.u, params.p))
        if params.dealias:
            w_hat = w_hat * spectral.two_thirds_filter(grid)
        dv = np.fft.irfft(ik * grid._helm * w_hat, n=grid.n_points)
    if check and not (np.isfinite(du).all() and np.isfinite(dv).all()):
        raise BlowUpError(f"non-finite right-hand side at t = {state.t!r}", t=state.t)
    return StateDerivative(du, dv)


def check_finite(state):
    report = {}
    for name in ("u", "v"):
        bad = np.flatnonzero(~np.isfinite(getattr(state, name)))
        if bad.size:
            report.setdefault("bad_index", int(bad[0]))
            report.setdefault("bad_field", name)
    finite = "bad_index" not in report
    with np.errstate(invalid="ignore"):
        return FiniteReport(
            finite=finite,
            sup_u=float(np.nanmax(np.abs(state.u))),
            sup_v=float(np.nanmax(np.abs(state.v))),
            boundary_u=spectral.boundary_magnitude(state.u),
            boundary_v=spectral.boundary_magnitude(state.v),
            **report,
        )
