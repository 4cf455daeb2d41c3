"""Pseudospectral simulation and virial diagnostics for the generalized Improved Boussinesq equation."""
from .diagnostics import (
    LyapunovTerms,
    VirialTerms,
    WeightSpec,
    canonical_identity_residual,
    canonical_variable,
    comparison_check,
    dIdt_formula,
    dJdt_formula,
    dNdt_formula,
    energy,
    exterior_region,
    lyapunov_terms,
    momentum,
    qsqpq_split,
    region_norm,
    virial_I,
    virial_J,
    virial_N,
    weight_fields,
)
from .integrator import Schedule, evolve, rk4_step
from .model import ModelParams, State, StateDerivative, check_finite, rhs, signed_power
from .solitons import SolitonSpec, base_profile, scaled_profile, soliton_residual, soliton_state
from .spectral import Grid, deriv, helmholtz_inverse, integrate, make_grid, sample_function, shift

__version__ = "0.1.0"
