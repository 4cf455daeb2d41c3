"""Seeded random ensembles of smooth, localized fields for the property probes.

Fields are sums of Gaussian-modulated cosine packets centred in the middle of
the box.  They are effectively band limited and vanish to round-off at the
box edge, so the periodic operators act on them as on functions on the line.
"""
import numpy as np


def gaussian(grid, amplitude=1.0, width=2.0, center=0.0):
    return amplitude * np.exp(-((grid.nodes - center) ** 2) / (2.0 * width**2))


def _packets(grid, rng, n_packets, sign, center_span, width_range, k_max):
    x = grid.nodes
    u = np.zeros(grid.n_points)
    for _ in range(n_packets):
        c = rng.uniform(-center_span, center_span)
        s = rng.uniform(*width_range)
        a = rng.uniform(0.2, 1.0)
        env = np.exp(-((x - c) ** 2) / (2.0 * s**2))
        if sign == 0:
            k, theta = rng.uniform(0.0, k_max), rng.uniform(0.0, 2 * np.pi)
            u += a * env * np.cos(k * x + theta)
        else:
            u += a * env
    return u if sign >= 0 else -u


def random_field(grid, rng, sign=0, n_packets=4, center_span=10.0, width_range=(1.0, 3.0), k_max=2.0):
    """One random field; ``sign`` = 1, -1 or 0 for nonnegative, nonpositive or mixed."""
    return _packets(grid, rng, n_packets, sign, center_span, width_range, k_max)


def random_sign_changing(grid, rng, **kw):
    """Mixed-sign field, resampled until it really takes both signs."""
    while True:
        u = random_field(grid, rng, sign=0, **kw)
        scale = np.max(np.abs(u))
        if u.max() > 1e-3 * scale and u.min() < -1e-3 * scale:
            return u


def random_state_fields(grid, rng, sign=0, amplitude=1.0):
    """A random ``(u, v)`` pair; the sign constraint applies to ``u`` only."""
    u = random_field(grid, rng, sign=sign)
    v = random_field(grid, rng, sign=0)
    return amplitude * u, amplitude * v
