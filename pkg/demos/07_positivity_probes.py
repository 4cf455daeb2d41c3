"""Randomized probes of the sign structure behind the decay estimates.

The Helmholtz inverse has the positive kernel e^{-|x|}/2, so it is order
preserving.  That gives nonnegativity of int phi' u (1 - d_xx)^{-1}(|u|^{p-1} u)
whenever u has one sign.  For sign-changing u no proof is available; the
last probe just reports what the ensemble shows.

Run:  python demos/07_positivity_probes.py
"""
import numpy as np

from gib_lab import State, WeightSpec, make_grid
from gib_lab import diagnostics as dg
from gib_lab.ensembles import random_field, random_sign_changing, random_state_fields

grid = make_grid(50.0, 1024)
rng = np.random.default_rng(2024)
weight = WeightSpec("tanh", 20.0)

ok = sum(dg.comparison_check(grid, v, v + random_field(grid, rng, sign=1))
         for v in (random_field(grid, rng) for _ in range(100)))
print(f"comparison principle: {ok}/100 ordered pairs stay ordered")

mins = []
for sign in (1, -1):
    for _ in range(50):
        terms = dg.lyapunov_terms(State(grid, *random_state_fields(grid, rng, sign=sign)), weight, 2.0)
        mins.append(min(terms.term_v2, terms.term_uHu, terms.term_up1, terms.term_uHup))
print(f"single-signed states: smallest Lyapunov piece {min(mins):.3e}")

vals = [dg.lyapunov_terms(State(grid, random_sign_changing(grid, rng), grid.zeros()), weight, 2.0).term_uHup
        for _ in range(500)]
print(f"sign-changing states: term_uHup ranges over [{min(vals):.3e}, {max(vals):.3e}]")

ratios = [dg.norm_equivalence_ratio(grid, random_field(grid, rng)) for _ in range(100)]
print(f"canonical/physical weighted norm ratio in [{min(ratios):.3f}, {max(ratios):.3f}]")
