"""Small data leave every exterior cone |x| > (1 + a) t.

A Gaussian of amplitude 0.01 disperses.  The energy norm restricted to the
rays x < -(1+a)t and x > (1+b)t drops to round-off, and the space-time sums of
sech-weighted u^2, v^2, v_x^2 seen from frames moving at speed 1 + a, 1 + b
settle to finite limits.

Run:  python demos/05_exterior_decay.py        (a few seconds)
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid

from gib_lab import ModelParams, Schedule, State, evolve, make_grid
from gib_lab import diagnostics as dg
from gib_lab.ensembles import gaussian
from gib_lab.spectral import deriv

a = b = 1.0
L = 10.0
grid = make_grid(200.0, 4096)
params = ModelParams(p=2.0, half_length=200.0, n_points=4096, t_final=60.0)
initial = State(grid, gaussian(grid, 0.01, 2.0), grid.zeros())


def observe(state):
    t, x = state.t, grid.nodes
    ext = dg.exterior_region(t, a, b, grid, warn=False)
    vx = deriv(grid, state.v, 1)
    w = 1 / np.cosh((x - (1 + b) * t) / L) + 1 / np.cosh((x + (1 + a) * t) / L)
    return {
        "ext": dg.region_norm(state, ext) if ext else 0.0,
        "u2": grid.dx * np.sum(w * state.u**2),
        "v2": grid.dx * np.sum(w * state.v**2),
        "vx2": grid.dx * np.sum(w * vx**2),
    }


rows = list(evolve(initial, params, Schedule(60.0, 0.01, 50), [observe]))
t = np.array([r["t"] for r in rows])
for k in (2, 20, 60, 120):
    print(f"t = {t[k]:5.1f}  exterior norm {rows[k]['ext']:.3e}")
for key in ("u2", "v2", "vx2"):
    cum = cumulative_trapezoid([r[key] for r in rows], t, initial=0.0)
    j = np.searchsorted(t, 50.0)
    print(f"space-time {key:3s}: total {cum[-1]:.4e}, last 10 units add {(cum[-1] - cum[j]) / cum[-1]:.2%}")
