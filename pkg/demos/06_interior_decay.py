"""Every bounded region empties out, for solitons and for dispersing data.

A soliton simply travels away from [-5, 5].  A Gaussian of amplitude 0.5
splits into left- and right-going pulses; the sech^2 weighted integral of
v^2 + u f + |u|^{p+1}, f = (1 - d_xx)^{-1} u, is integrable in time.

Run:  python demos/06_interior_decay.py        (a few seconds)
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid

from gib_lab import ModelParams, Schedule, SolitonSpec, State, evolve, make_grid, soliton_state
from gib_lab import diagnostics as dg
from gib_lab.ensembles import gaussian
from gib_lab.spectral import helmholtz_inverse

region = [(-5.0, 5.0)]

grid = make_grid(100.0, 2048)
params = ModelParams(p=2.0, half_length=100.0, n_points=2048, t_final=30.0)
rows = list(evolve(soliton_state(grid, SolitonSpec(2.0, 2.0)), params, Schedule(30.0, 0.01, 100),
                   [lambda s: {"n": dg.region_norm(s, region)}], check_boundary=True))
print(f"soliton c=2: interior norm {rows[0]['n']:.3e} -> {rows[-1]['n']:.3e} at t = 30")

grid = make_grid(200.0, 4096)
params = ModelParams(p=2.0, half_length=200.0, n_points=4096, t_final=60.0)
L = 20.0


def observe(state):
    u, v = state.u, state.v
    w = 1 / np.cosh(grid.nodes / L) ** 2
    dens = v**2 + u * helmholtz_inverse(grid, u) + np.abs(u) ** 3
    return {"n": dg.region_norm(state, region), "g": grid.dx * np.sum(w * dens)}


rows = list(evolve(State(grid, gaussian(grid, 0.5, 2.0), grid.zeros()), params, Schedule(60.0, 0.01, 50), [observe]))
t = np.array([r["t"] for r in rows])
cum = cumulative_trapezoid([r["g"] for r in rows], t, initial=0.0)
j = np.searchsorted(t, 50.0)
print(f"gaussian 0.5: interior norm {rows[2]['n']:.3e} at t = 1, {rows[-1]['n']:.3e} at t = 60")
print(f"time integral {cum[-1]:.5f}; last 10 units add {(cum[-1] - cum[j]) / cum[-1]:.2%}")
