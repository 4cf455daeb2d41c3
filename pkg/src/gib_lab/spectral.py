"""Periodic Fourier grid and the spectral operators used by every solver piece.

The real line is replaced by the box ``[-half_length, half_length)`` with
``n_points`` equispaced nodes.  All operators act on real numpy arrays and
are diagonal in Fourier space, computed with real-to-complex FFTs.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, NonFiniteError

MIN_POINTS = 16


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid.

    ``wavenumbers`` is in standard (full) FFT ordering; the operators use the
    half spectrum ``rk`` of the real transform internally.
    """

    half_length: float
    n_points: int
    nodes: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)
    dx: float = field(init=False)
    rk: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, half = self.n_points, self.half_length
        dx = 2.0 * half / n
        nodes = -half + dx * np.arange(n)
        k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
        rk = 2.0 * np.pi * np.fft.rfftfreq(n, d=dx)
        for name, value in (("nodes", nodes), ("wavenumbers", k), ("rk", rk)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "dx", dx)
        # odd-order derivative multiplier drops the Nyquist mode
        ik = 1j * rk
        ik[-1] = 0.0
        ik.setflags(write=False)
        object.__setattr__(self, "_ik", ik)
        helm = 1.0 / (1.0 + rk**2)
        helm.setflags(write=False)
        object.__setattr__(self, "_helm", helm)

    @property
    def length(self):
        return 2.0 * self.half_length

    def multiplier(self, order):
        """Fourier multiplier of ``d^order/dx^order`` on the half spectrum."""
        if order == 1:
            return self._ik
        if order % 2 == 0:
            return (-1.0) ** (order // 2) * self.rk**order
        return (-1.0) ** (order // 2) * self._ik * self.rk ** (order - 1)

    def zeros(self):
        return np.zeros(self.n_points)

    def __repr__(self):
        return f"Grid(half_length={self.half_length!r}, n_points={self.n_points!r})"


def make_grid(half_length, n_points):
    if not half_length > 0 or not np.isfinite(half_length):
        raise GridError(f"half_length must be positive, got {half_length!r}")
    if int(n_points) != n_points or n_points % 2 or n_points < MIN_POINTS:
        raise GridError(f"n_points must be an even integer >= {MIN_POINTS}, got {n_points!r}")
    return Grid(float(half_length), int(n_points))


def _require_finite(f, what="field"):
    f = np.asarray(f, dtype=float)
    bad = ~np.isfinite(f)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise NonFiniteError(f"{what} has a non-finite value at index {idx}", index=idx)
    return f


def _apply(grid, f, mult):
    return np.fft.irfft(np.fft.rfft(f) * mult, n=grid.n_points)


def deriv(grid, f, order=1):
    """Spectral derivative of ``f``; ``order`` in {1, 2, 3}."""
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order!r}")
    f = _require_finite(f)
    return _apply(grid, f, grid.multiplier(order))


def helmholtz_inverse(grid, f):
    """Solve ``(1 - d^2/dx^2) g = f`` on the periodic box."""
    f = _require_finite(f)
    return _apply(grid, f, grid._helm)


def helmholtz(grid, f):
    """Apply ``1 - d^2/dx^2``."""
    f = _require_finite(f)
    return _apply(grid, f, 1.0 + grid.rk**2)


def integrate(grid, f):
    """Rectangle rule on the periodic box (spectrally accurate)."""
    f = _require_finite(f)
    return grid.dx * float(np.sum(f))


def shift(grid, f, delta):
    """Translate ``f`` by ``delta``: returns ``f(x - delta)``."""
    f = _require_finite(f)
    return _apply(grid, f, np.exp(-1j * grid.rk * delta))


def sample_function(grid, fn):
    """Evaluate ``fn`` at the grid nodes; ``fn`` must accept an array."""
    values = np.asarray(fn(grid.nodes), dtype=float)
    if values.shape == ():
        values = np.full(grid.n_points, float(values))
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NonFiniteError(
            f"non-finite sample at node {j} (x = {grid.nodes[j]!r})", index=j
        )
    return values


def l2_norm(grid, f):
    return float(np.sqrt(grid.dx * np.sum(np.asarray(f) ** 2)))


def boundary_magnitude(f, width=1):
    """Largest |f| within ``width`` nodes of either end of the box."""
    f = np.asarray(f)
    return float(max(np.max(np.abs(f[:width])), np.max(np.abs(f[-width:]))))


def spectral_tail(grid, f, fraction=0.1):
    """Relative spectral energy in the top ``fraction`` of resolved modes.

    Returned as a ratio of amplitudes: sqrt(tail energy / total energy).
    """
    fh = np.abs(np.fft.rfft(f)) ** 2
    total = fh.sum()
    if total == 0.0:
        return 0.0
    m = len(fh)
    cut = int(np.floor(m * (1.0 - fraction)))
    return float(np.sqrt(fh[cut:].sum() / total))


def two_thirds_filter(grid):
    """Boolean mask on the half spectrum keeping |k| < (2/3) k_max."""
    m = np.arange(len(grid.rk))
    return m < (grid.n_points // 3)
