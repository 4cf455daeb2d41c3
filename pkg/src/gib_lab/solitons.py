"""Super-luminal solitary waves ``(u, v) = (Q_c, -c Q_c)(x - c t - x0)``."""
import warnings
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import BoundaryTailError, ConfigError
from .model import State, signed_power

NEAR_SONIC = 1e-3
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class SolitonSpec:
    p: float = 2.0
    c: float = 1.5
    x0: float = 0.0

    def __post_init__(self):
        if not self.p > 1:
            raise ConfigError(f"p must exceed 1, got {self.p!r}", key="p")
        if not abs(self.c) > 1:
            raise ConfigError(f"|c| must exceed 1, got c = {self.c!r}", key="c")
        if abs(self.c) - 1 < NEAR_SONIC:
            warnings.warn(
                f"near-sonic soliton speed c = {self.c}; the profile is very wide",
                stacklevel=2,
            )

    @property
    def amplitude(self):
        """Peak value of Q_c."""
        p = self.p
        return ((self.c**2 - 1) * (p + 1) / 2) ** (1 / (p - 1))

    @property
    def inverse_width(self):
        """Scale factor sqrt((c^2 - 1) / c^2) applied to the argument of Q."""
        return np.sqrt((self.c**2 - 1) / self.c**2)


def base_profile(s, p):
    """Ground state Q of ``Q'' - Q + Q^p = 0``."""
    s = np.asarray(s, dtype=float)
    # sech form avoids cosh overflow in the far tail
    sech = 1.0 / np.cosh(np.minimum(np.abs((p - 1) * s / 2), 700.0))
    return ((p + 1) / 2 * sech**2) ** (1 / (p - 1))


def scaled_profile(s, spec):
    return (spec.c**2 - 1) ** (1 / (spec.p - 1)) * base_profile(spec.inverse_width * s, spec.p)


def scaled_profile_derivative(s, spec):
    """Closed-form d/ds of Q_c."""
    p, k = spec.p, spec.inverse_width
    y = (p - 1) * k * np.asarray(s, dtype=float) / 2
    return -k * np.tanh(y) * scaled_profile(s, spec)


def soliton_state(grid, spec, t=0.0, tail_tol=TAIL_TOL):
    """Soliton data on ``grid`` centred at ``x0 + c t``."""
    u = spectral.sample_function(grid, lambda x: scaled_profile(x - spec.x0 - spec.c * t, spec))
    edge = spectral.boundary_magnitude(u)
    if edge > tail_tol:
        raise BoundaryTailError(
            f"soliton tail is {edge:.3g} at the box edge (> {tail_tol:g}); "
            "increase half_length or move x0 toward the centre"
        )
    return State(grid, u, -spec.c * u, t)


def soliton_residual(grid, spec):
    """Sup-norm of ``c^2 Q_c'' - (c^2 - 1) Q_c + Q_c^p`` on the grid."""
    q = spectral.sample_function(grid, lambda x: scaled_profile(x - spec.x0, spec))
    c2 = spec.c**2
    res = c2 * spectral.deriv(grid, q, 2) - (c2 - 1) * q + signed_power(q, spec.p)
    return float(np.max(np.abs(res)))


def superpose(grid, specs, tail_tol=TAIL_TOL):
    """Linear superposition of several solitons (not an exact solution)."""
    states = [soliton_state(grid, s, tail_tol=tail_tol) for s in specs]
    return State(grid, sum(s.u for s in states), sum(s.v for s in states), 0.0)
