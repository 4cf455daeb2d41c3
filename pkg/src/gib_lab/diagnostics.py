"""Conserved quantities, localized virial functionals and their time derivatives.

Weights are written ``phi((x + sigma t - x_offset) / L)``.  ``weight_fields``
returns the shape function and its derivatives with respect to its own
argument, so every ``1/L`` factor coming from the chain rule appears
explicitly in the formulas below.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import PreconditionError
from .model import signed_power

SHAPES = ("tanh", "minus_tanh", "half_one_plus_tanh", "half_one_minus_tanh", "sech2")
INCREASING_SHAPES = ("tanh", "half_one_plus_tanh")


@dataclass(frozen=True)
class WeightSpec:
    shape: str = "tanh"
    L: float = 20.0
    x_offset: float = 0.0
    drift_speed: float = 0.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown weight shape {self.shape!r}; expected one of {SHAPES}")
        if not self.L > 1:
            raise ValueError(f"weight scale L must exceed 1, got {self.L!r}")

    @property
    def static(self):
        return self.drift_speed == 0

    def argument(self, x, t):
        return (x + self.drift_speed * t - self.x_offset) / self.L


@dataclass(frozen=True)
class VirialTerms:
    Qt: float
    SQt: float
    PQt: float

    @property
    def total(self):
        return self.Qt + self.SQt + self.PQt


@dataclass(frozen=True)
class LyapunovTerms:
    term_v2: float
    term_uHu: float
    term_up1: float
    term_uHup: float

    @property
    def total(self):
        return self.term_v2 + self.term_uHu + self.term_up1 + self.term_uHup


def shape_derivatives(shape, y):
    """``(phi, phi', phi''')`` of the shape function at ``y``."""
    th = np.tanh(y)
    # 1 - tanh^2 cancels to zero for |y| > 19; sech keeps phi' > 0 in the tails
    s2 = 1.0 / np.cosh(np.minimum(np.abs(y), 350.0)) ** 2
    if shape == "sech2":
        return s2, -2.0 * s2 * th, -8.0 * s2 * th**3 + 16.0 * s2**2 * th
    d1 = s2
    d3 = 4.0 * s2 * th**2 - 2.0 * s2**2
    if shape == "tanh":
        return th, d1, d3
    if shape == "minus_tanh":
        return -th, -d1, -d3
    if shape == "half_one_plus_tanh":
        return 0.5 * (1.0 + th), 0.5 * d1, 0.5 * d3
    if shape == "half_one_minus_tanh":
        return 0.5 * (1.0 - th), -0.5 * d1, -0.5 * d3
    raise ValueError(f"unknown weight shape {shape!r}")


def weight_fields(spec, grid, t=0.0):
    return shape_derivatives(spec.shape, spec.argument(grid.nodes, t))


def _integral(grid, f):
    return grid.dx * float(np.sum(f))


def _dx(grid, f):
    return spectral.deriv(grid, f, 1)


def _require_static(spec, what):
    if not spec.static:
        raise PreconditionError(f"{what} needs a static weight (drift_speed = 0)")


# -- conserved quantities --------------------------------------------------

def energy(state, p):
    grid, u, v = state.grid, state.u, state.v
    vx = _dx(grid, v)
    return 0.5 * _integral(grid, u**2 + v**2 + vx**2) + _integral(grid, np.abs(u) ** (p + 1)) / (p + 1)


def momentum(state):
    grid, u, v = state.grid, state.u, state.v
    return _integral(grid, u * v + _dx(grid, u) * _dx(grid, v))


# -- virial functionals ----------------------------------------------------

def virial_I(state, spec, p):
    grid, u, v = state.grid, state.u, state.v
    phi, _, _ = weight_fields(spec, grid, state.t)
    vx = _dx(grid, v)
    return 0.5 * _integral(grid, phi * (u**2 + v**2 + vx**2 + 2.0 / (p + 1) * np.abs(u) ** (p + 1)))


def virial_J(state, spec):
    grid, u, v = state.grid, state.u, state.v
    phi, _, _ = weight_fields(spec, grid, state.t)
    return _integral(grid, phi * (u * v + _dx(grid, u) * _dx(grid, v)))


def virial_N(state, spec):
    _require_static(spec, "virial_N")
    grid, u, v = state.grid, state.u, state.v
    _, dphi, _ = weight_fields(spec, grid, state.t)
    return _integral(grid, dphi * u * _dx(grid, v)) / (2.0 * spec.L)


def dIdt_formula(state, spec, p):
    grid, u, v = state.grid, state.u, state.v
    L, sigma = spec.L, spec.drift_speed
    _, dphi, _ = weight_fields(spec, grid, state.t)
    vx = _dx(grid, v)
    g = spectral.helmholtz_inverse(grid, u + signed_power(u, p))
    return (
        sigma / (2 * L) * _integral(grid, dphi * (u**2 + v**2 + vx**2 + 2.0 / (p + 1) * np.abs(u) ** (p + 1)))
        - 1.0 / L * _integral(grid, dphi * v * g)
    )


def dJdt_formula(state, spec, p):
    grid, u, v = state.grid, state.u, state.v
    L, sigma = spec.L, spec.drift_speed
    _, dphi, _ = weight_fields(spec, grid, state.t)
    ux, vx = _dx(grid, u), _dx(grid, v)
    g = spectral.helmholtz_inverse(grid, u + signed_power(u, p))
    return (
        sigma / L * _integral(grid, dphi * (u * v + ux * vx))
        + 1.0 / (2 * L) * _integral(grid, dphi * (u**2 + 2.0 / (p + 1) * np.abs(u) ** (p + 1) - v**2 - vx**2))
        - 1.0 / L * _integral(grid, dphi * u * g)
    )


def dNdt_formula(state, spec, p):
    _require_static(spec, "dNdt_formula")
    grid, u, v = state.grid, state.u, state.v
    L = spec.L
    _, dphi, _ = weight_fields(spec, grid, state.t)
    vx = _dx(grid, v)
    f = spectral.helmholtz_inverse(grid, u)
    h = spectral.helmholtz_inverse(grid, signed_power(u, p))
    return (
        1.0 / (2 * L) * _integral(grid, dphi * (vx**2 - u**2 + u * f))
        + 1.0 / (2 * L) * _integral(grid, dphi * (-np.abs(u) ** (p + 1) + u * h))
    )


# -- canonical variable ----------------------------------------------------

def canonical_variable(grid, u):
    """``f`` solving ``(1 - d_xx) f = u``."""
    return spectral.helmholtz_inverse(grid, u)


def canonical_identity_sides(grid, u, spec, t=0.0):
    """Both sides of the weighted-L2 identity for ``u`` in terms of ``f``.

    Left: int phi' u^2.  Right: int phi' (f^2 + 2 f_x^2 + f_xx^2) - L^-2 int phi''' f^2.
    """
    _, dphi, d3phi = weight_fields(spec, grid, t)
    f = canonical_variable(grid, u)
    fx, fxx = spectral.deriv(grid, f, 1), spectral.deriv(grid, f, 2)
    lhs = _integral(grid, dphi * u**2)
    rhs = _integral(grid, dphi * (f**2 + 2.0 * fx**2 + fxx**2)) - _integral(grid, d3phi * f**2) / spec.L**2
    return lhs, rhs


def canonical_identity_residual(grid, u, spec, t=0.0):
    lhs, rhs = canonical_identity_sides(grid, u, spec, t)
    return abs(lhs - rhs)


def qsqpq_split(state, spec, p):
    grid, u, v = state.grid, state.u, state.v
    L, sigma = spec.L, spec.drift_speed
    _, dphi, d3phi = weight_fields(spec, grid, state.t)
    f = canonical_variable(grid, u)
    fx, fxx = spectral.deriv(grid, f, 1), spectral.deriv(grid, f, 2)
    vx = _dx(grid, v)
    h = spectral.helmholtz_inverse(grid, signed_power(u, p))
    q = sigma / (2 * L) * _integral(grid, dphi * (f**2 + 2 * fx**2 + fxx**2 + v**2 + vx**2)) - _integral(
        grid, dphi * v * f
    ) / L
    sq = -sigma / (2 * L**3) * _integral(grid, d3phi * f**2)
    pq = sigma / (L * (p + 1)) * _integral(grid, dphi * np.abs(u) ** (p + 1)) - _integral(grid, dphi * v * h) / L
    return VirialTerms(q, sq, pq)


def lyapunov_terms(state, spec, p):
    """The four nonnegative-by-design pieces of ``-d/dt (J + N)``.

    The ``|u|^{p+1}`` coefficient is ``(p - 1) / (2 (p + 1) L)``, which is what
    summing the J and N derivative formulas gives.
    """
    _require_static(spec, "lyapunov_terms")
    if spec.shape not in INCREASING_SHAPES:
        raise PreconditionError(f"lyapunov_terms needs phi' > 0; shape {spec.shape!r} is not increasing")
    grid, u, v = state.grid, state.u, state.v
    L = spec.L
    _, dphi, _ = weight_fields(spec, grid, state.t)
    f = spectral.helmholtz_inverse(grid, u)
    h = spectral.helmholtz_inverse(grid, signed_power(u, p))
    return LyapunovTerms(
        term_v2=_integral(grid, dphi * v**2) / (2 * L),
        term_uHu=_integral(grid, dphi * u * f) / (2 * L),
        term_up1=(p - 1) / (2 * (p + 1) * L) * _integral(grid, dphi * np.abs(u) ** (p + 1)),
        term_uHup=_integral(grid, dphi * u * h) / (2 * L),
    )


def canonical_lower_bound(grid, u, L):
    """``(1/4) (1/2L) int sech^2(x/L) (f^2 + f_x^2)``, a floor for ``term_uHu``."""
    f = canonical_variable(grid, u)
    w = 1.0 / np.cosh(grid.nodes / L) ** 2
    return 0.25 / (2 * L) * _integral(grid, w * (f**2 + spectral.deriv(grid, f, 1) ** 2))


def norm_equivalence_ratio(grid, u, L=20.0, coeffs=(1.0, 1.0, 1.0)):
    """``int phi (a1 f^2 + a2 f_x^2 + a3 f_xx^2) / int phi u^2`` with phi = sech^2(x/L)."""
    a1, a2, a3 = coeffs
    f = canonical_variable(grid, u)
    fx, fxx = spectral.deriv(grid, f, 1), spectral.deriv(grid, f, 2)
    phi = 1.0 / np.cosh(grid.nodes / L) ** 2
    return _integral(grid, phi * (a1 * f**2 + a2 * fx**2 + a3 * fxx**2)) / _integral(grid, phi * u**2)


# -- comparison principle --------------------------------------------------

def comparison_check(grid, v, w, tol=1e-12):
    """Whether ``v <= w`` implies ``H v <= H w`` for this pair, H the Helmholtz inverse.

    A pair that is not ordered raises ``PreconditionError``; a genuine failure
    of the comparison property returns False.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    bad = np.flatnonzero(v > w)
    if bad.size:
        raise PreconditionError(f"v <= w violated at node {int(bad[0])}")
    return bool(np.all(spectral.helmholtz_inverse(grid, v) <= spectral.helmholtz_inverse(grid, w) + tol))


# -- regions ---------------------------------------------------------------

def exterior_region(t, a, b, grid, warn=True):
    """The two rays ``x < -(1+a) t`` and ``x > (1+b) t``, clipped to the box."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if not (a > 0 and b > 0):
        raise ValueError("cone openings a and b must be positive")
    lo, hi = -grid.half_length, grid.half_length
    left = (lo, max(lo, -(1 + a) * t))
    right = (min(hi, (1 + b) * t), hi)
    out = [iv for iv in (left, right) if iv[1] > iv[0]]
    if not out and warn:
        warnings.warn(f"exterior region is empty at t = {t}", stacklevel=2)
    return out


def region_mask(grid, region):
    x = grid.nodes
    mask = np.zeros(grid.n_points, dtype=bool)
    for a, b in region:
        mask |= (x >= a) & (x <= b)
    return mask


def region_norm(state, region):
    """Sharp-cutoff ``(L^2 x H^1)`` norm of ``(u, v)`` over a union of intervals."""
    grid = state.grid
    mask = region_mask(grid, region)
    if not mask.any():
        warnings.warn("region_norm over an empty region", stacklevel=2)
        return 0.0
    vx = _dx(grid, state.v)
    dens = state.u**2 + state.v**2 + vx**2
    return math.sqrt(grid.dx * float(np.sum(dens[mask])))
