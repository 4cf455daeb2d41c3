import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from gib_lab import diagnostics as dg
from gib_lab import ModelParams, SolitonSpec, State, make_grid, soliton_state
from gib_lab.diagnostics import WeightSpec
from gib_lab.ensembles import gaussian, random_field, random_sign_changing, random_state_fields
from gib_lab.errors import PreconditionError
from gib_lab.integrator import advance
from gib_lab.solitons import scaled_profile, scaled_profile_derivative
from gib_lab.spectral import deriv, helmholtz

STATIC = WeightSpec("tanh", 20.0)
MOVING = WeightSpec("tanh", 10.0, 0.0, -2.0)
FLAT = WeightSpec("tanh", 20.0, x_offset=-1e4)  # phi == 1 on the box


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture(scope="module")
def trajectory_state(grid, params):
    """A Gaussian evolved to t = 2, where every functional is changing."""
    u = gaussian(grid, 0.5, 2.0)
    return advance(State(grid, u, grid.zeros()), params, 2.0)


@pytest.fixture(scope="module")
def random_states(grid):
    rng = np.random.default_rng(123)
    return [State(grid, *random_state_fields(grid, rng, sign=0, amplitude=0.5)) for _ in range(20)]


class TestWeights:
    def test_tanh_at_origin(self, grid):
        y = np.array([0.0])
        phi, d1, _ = dg.shape_derivatives("tanh", y)
        assert phi[0] == 0.0 and d1[0] == 1.0

    def test_sech2_decays(self, grid):
        phi, _, _ = dg.weight_fields(WeightSpec("sech2", 1.5), grid)
        assert phi[0] < 1e-15

    def test_drift_center(self, grid):
        phi, d1, _ = dg.weight_fields(WeightSpec("tanh", 10.0, 0.0, -2.0), grid, t=5.0)
        assert grid.nodes[np.argmax(d1)] == pytest.approx(10.0, abs=grid.dx)

    @pytest.mark.parametrize("shape", dg.SHAPES)
    def test_derivatives_match_finite_differences(self, shape):
        y = np.linspace(-4, 4, 81)
        h = 1e-3
        phi = lambda z: dg.shape_derivatives(shape, z)[0]  # noqa: E731
        d1 = (phi(y + h) - phi(y - h)) / (2 * h)
        d3 = (phi(y + 2 * h) - 2 * phi(y + h) + 2 * phi(y - h) - phi(y - 2 * h)) / (2 * h**3)
        _, a1, a3 = dg.shape_derivatives(shape, y)
        assert np.max(np.abs(a1 - d1)) < 1e-6
        assert np.max(np.abs(a3 - d3)) < 1e-4

    def test_sign_of_phi_prime(self):
        y = np.linspace(-30, 30, 601)
        for shape in dg.INCREASING_SHAPES:
            assert np.all(dg.shape_derivatives(shape, y)[1] > 0)
        assert np.all(dg.shape_derivatives("minus_tanh", y)[1] < 0)

    def test_bad_specs(self):
        with pytest.raises(ValueError):
            WeightSpec("gauss")
        with pytest.raises(ValueError):
            WeightSpec("tanh", 0.5)


class TestConservedQuantities:
    def test_zero(self, grid):
        z = State.zeros(grid)
        assert dg.energy(z, 2.0) == 0.0 and dg.momentum(z) == 0.0

    def test_energy_sine(self, grid_pi):
        s = State(grid_pi, grid_pi.zeros(), np.sin(grid_pi.nodes))
        assert dg.energy(s, 2.0) == pytest.approx(np.pi, rel=1e-14)

    @pytest.mark.parametrize("p,c", [(2.0, 1.5), (3.0, 2.0)])
    def test_soliton_against_quadrature(self, grid, p, c):
        spec = SolitonSpec(p, c)
        s = soliton_state(grid, spec)
        q = lambda x: scaled_profile(x, spec)  # noqa: E731
        dq = lambda x: scaled_profile_derivative(x, spec)  # noqa: E731
        opts = dict(limit=400, epsabs=0, epsrel=1e-13)
        q2 = quad(lambda x: q(x) ** 2, -50, 50, **opts)[0]
        dq2 = quad(lambda x: dq(x) ** 2, -50, 50, **opts)[0]
        qp = quad(lambda x: q(x) ** (p + 1), -50, 50, **opts)[0]
        h_exact = 0.5 * (q2 + c**2 * q2 + c**2 * dq2) + qp / (p + 1)
        p_exact = -c * (q2 + dq2)
        assert _rel(dg.energy(s, p), h_exact) < 1e-8
        assert _rel(dg.momentum(s), p_exact) < 1e-8
        assert dg.momentum(s) < 0

    def test_energy_nonnegative(self, random_states):
        assert all(dg.energy(s, 2.0) >= 0 for s in random_states)


class TestVirialFunctionals:
    def test_zero(self, grid):
        z = State.zeros(grid)
        assert dg.virial_I(z, MOVING, 2.0) == 0 and dg.virial_J(z, STATIC) == 0 and dg.virial_N(z, STATIC) == 0

    def test_flat_weight_limits(self, soliton):
        assert _rel(dg.virial_I(soliton, FLAT, 2.0), dg.energy(soliton, 2.0)) < 1e-14
        assert _rel(dg.virial_J(soliton, FLAT), dg.momentum(soliton)) < 1e-14

    def test_I_far_from_left_weight(self):
        g = make_grid(100.0, 2048)
        spec = SolitonSpec(2.0, 1.5, 30.0)
        s = soliton_state(g, spec)
        w = WeightSpec("half_one_minus_tanh", 2.0, x_offset=-30.0)
        value = dg.virial_I(s, w, 2.0)
        phi = lambda x: 0.5 * (1 - np.tanh((x + 30.0) / 2.0))  # noqa: E731
        q = lambda x: scaled_profile(x - 30.0, spec)  # noqa: E731
        dq = lambda x: scaled_profile_derivative(x - 30.0, spec)  # noqa: E731
        oracle = quad(
            lambda x: 0.5 * phi(x) * (q(x) ** 2 * (1 + 2.25) + 2.25 * dq(x) ** 2 + 2 / 3 * q(x) ** 3),
            -100, 100, points=[-30.0, 30.0], limit=400, epsabs=1e-22,
        )[0]
        assert value < 1e-10
        assert value == pytest.approx(oracle, rel=1e-3)

    def test_J_odd_in_v(self, random_states):
        s = random_states[0]
        flipped = State(s.grid, s.u, -s.v)
        assert dg.virial_J(flipped, STATIC) == pytest.approx(-dg.virial_J(s, STATIC), rel=1e-14)

    def test_N_parity(self, grid):
        x = grid.nodes
        s = State(grid, np.exp(-(x**2) / 4), np.exp(-(x**2) / 9) * (1 + x**2 / 10))
        assert abs(dg.virial_N(s, STATIC)) < 1e-12

    def test_N_linear_in_u(self, random_states):
        s = random_states[1]
        scaled = State(s.grid, 3.0 * s.u, s.v)
        assert dg.virial_N(scaled, STATIC) == pytest.approx(3.0 * dg.virial_N(s, STATIC), rel=1e-13)

    def test_N_needs_static_weight(self, soliton):
        with pytest.raises(PreconditionError):
            dg.virial_N(soliton, MOVING)
        with pytest.raises(PreconditionError):
            dg.dNdt_formula(soliton, MOVING, 2.0)


class TestDerivativeFormulas:
    def test_zero(self, grid):
        z = State.zeros(grid)
        assert dg.dIdt_formula(z, MOVING, 2.0) == 0
        assert dg.dJdt_formula(z, STATIC, 2.0) == 0
        assert dg.dNdt_formula(z, STATIC, 2.0) == 0

    def test_dI_static_without_v(self, grid):
        s = State(grid, gaussian(grid, 0.5), grid.zeros())
        assert dg.dIdt_formula(s, STATIC, 2.0) == 0

    def test_dJ_with_u_zero(self, grid):
        v = gaussian(grid, 0.7, 3.0, 4.0)
        s = State(grid, grid.zeros(), v)
        _, d1, _ = dg.weight_fields(STATIC, grid)
        expected = -grid.dx * np.sum(d1 * (v**2 + deriv(grid, v, 1) ** 2)) / (2 * STATIC.L)
        assert dg.dJdt_formula(s, STATIC, 2.0) == pytest.approx(expected, rel=1e-13)
        assert expected < 0

    def test_dN_with_u_zero(self, grid):
        v = gaussian(grid, 0.7, 3.0, 4.0)
        s = State(grid, grid.zeros(), v)
        _, d1, _ = dg.weight_fields(STATIC, grid)
        expected = grid.dx * np.sum(d1 * deriv(grid, v, 1) ** 2) / (2 * STATIC.L)
        assert dg.dNdt_formula(s, STATIC, 2.0) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize(
        "name,weight",
        [
            ("I", MOVING),
            ("I", WeightSpec("sech2", 10.0, 3.0, 1.5)),
            ("J", STATIC),
            ("J", WeightSpec("sech2", 10.0, 0.0, -2.0)),
            ("N", STATIC),
            ("N", WeightSpec("half_one_plus_tanh", 20.0, 5.0)),
        ],
    )
    def test_against_time_differences(self, trajectory_state, params, name, weight):
        fn = {
            "I": (lambda s: dg.virial_I(s, weight, 2.0), dg.dIdt_formula),
            "J": (lambda s: dg.virial_J(s, weight), dg.dJdt_formula),
            "N": (lambda s: dg.virial_N(s, weight), dg.dNdt_formula),
        }
        functional, formula = fn[name]
        h = 1e-3
        s = trajectory_state
        fd = (functional(advance(s, params, s.t + h, dt=h)) - functional(advance(s, params, s.t - h, dt=h))) / (2 * h)
        exact = formula(s, weight, 2.0)
        assert abs(fd - exact) < 1e-6
        assert abs(exact) > 1e-5  # not a trivially vanishing comparison

    def test_fractional_p_time_difference(self, grid):
        params = ModelParams(p=2.5)
        s = advance(State(grid, gaussian(grid, 0.5), grid.zeros()), params, 1.5)
        h = 1e-3
        fd = (dg.virial_J(advance(s, params, s.t + h, dt=h), STATIC) - dg.virial_J(advance(s, params, s.t - h, dt=h), STATIC)) / (2 * h)
        assert abs(fd - dg.dJdt_formula(s, STATIC, 2.5)) < 1e-6


class TestCanonical:
    def test_cos(self, grid_pi):
        f = dg.canonical_variable(grid_pi, np.cos(grid_pi.nodes))
        assert np.max(np.abs(f - np.cos(grid_pi.nodes) / 2)) < 1e-15

    def test_inverse_of_known(self, grid):
        g = np.exp(-grid.nodes**2 / 5)
        assert np.max(np.abs(dg.canonical_variable(grid, helmholtz(grid, g)) - g)) < 1e-12

    def test_soliton_positive(self, grid, soliton):
        f = dg.canonical_variable(grid, soliton.u)
        assert f.min() >= -1e-12
        assert dg.comparison_check(grid, grid.zeros(), soliton.u)

    def test_identity_zero(self, grid):
        assert dg.canonical_identity_residual(grid, grid.zeros(), STATIC) == 0

    @pytest.mark.parametrize("shape", dg.SHAPES)
    def test_identity_random(self, grid, shape):
        rng = np.random.default_rng(9)
        spec = WeightSpec(shape, 20.0, 2.0)
        for _ in range(10):
            u = random_field(grid, rng)
            lhs, rhs = dg.canonical_identity_sides(grid, u, spec)
            assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))

    def test_identity_soliton(self, grid, soliton):
        lhs, rhs = dg.canonical_identity_sides(grid, soliton.u, STATIC)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    def test_identity_at_time_with_drift(self, grid, soliton):
        lhs, rhs = dg.canonical_identity_sides(grid, soliton.u, MOVING, t=3.0)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))


class TestSplit:
    def test_zero(self, grid):
        t = dg.qsqpq_split(State.zeros(grid), MOVING, 2.0)
        assert (t.Qt, t.SQt, t.PQt) == (0, 0, 0)

    @pytest.mark.parametrize("p", [2.0, 3.0, 2.5])
    def test_sum_is_dIdt(self, random_states, p):
        for s in random_states:
            split = dg.qsqpq_split(s, MOVING, p)
            assert _rel(split.total, dg.dIdt_formula(s, MOVING, p)) <= 1e-10

    def test_Q_nonpositive_small_data(self, grid):
        rng = np.random.default_rng(10)
        for _ in range(100):
            s = State(grid, *random_state_fields(grid, rng, amplitude=0.01))
            assert dg.qsqpq_split(s, MOVING, 2.0).Qt <= 0


class TestLyapunov:
    def test_zero(self, grid):
        assert dg.lyapunov_terms(State.zeros(grid), STATIC, 2.0).total == 0

    @pytest.mark.parametrize("p", [2.0, 3.0, 1.5])
    def test_sum_matches_derivatives(self, random_states, p):
        for s in random_states:
            total = dg.lyapunov_terms(s, STATIC, p).total
            target = -(dg.dJdt_formula(s, STATIC, p) + dg.dNdt_formula(s, STATIC, p))
            assert _rel(total, target) <= 1e-10

    @pytest.mark.parametrize("sign", [1, -1])
    def test_single_signed_positive(self, grid, sign):
        rng = np.random.default_rng(11 + sign)
        for _ in range(25):
            s = State(grid, *random_state_fields(grid, rng, sign=sign))
            terms = dg.lyapunov_terms(s, STATIC, 2.0)
            assert min(terms.term_v2, terms.term_uHu, terms.term_up1, terms.term_uHup) >= -1e-12

    def test_canonical_lower_bound(self, grid):
        rng = np.random.default_rng(12)
        for _ in range(25):
            u = random_field(grid, rng)
            s = State(grid, u, grid.zeros())
            assert dg.lyapunov_terms(s, STATIC, 2.0).term_uHu >= dg.canonical_lower_bound(grid, u, 20.0)

    def test_rejects_moving_or_decreasing_weight(self, soliton):
        with pytest.raises(PreconditionError):
            dg.lyapunov_terms(soliton, MOVING, 2.0)
        with pytest.raises(PreconditionError):
            dg.lyapunov_terms(soliton, WeightSpec("minus_tanh", 20.0), 2.0)

    def test_sign_changing_is_finite(self, grid):
        rng = np.random.default_rng(13)
        u = random_sign_changing(grid, rng)
        assert u.min() < 0 < u.max()
        assert np.isfinite(dg.lyapunov_terms(State(grid, u, grid.zeros()), STATIC, 2.0).term_uHup)


class TestNormEquivalence:
    def test_bracket(self, grid):
        rng = np.random.default_rng(14)
        ratios = [dg.norm_equivalence_ratio(grid, random_field(grid, rng)) for _ in range(50)]
        assert min(ratios) > 1e-3 and max(ratios) < 1e3


class TestComparison:
    def test_equal(self, grid):
        w = gaussian(grid)
        assert dg.comparison_check(grid, w, w)

    def test_sech(self, grid):
        w = 1 / np.cosh(grid.nodes)
        assert dg.comparison_check(grid, grid.zeros(), w)
        from gib_lab.spectral import helmholtz_inverse

        assert helmholtz_inverse(grid, w).min() >= -1e-12

    def test_random_bumps(self, grid):
        rng = np.random.default_rng(15)
        for _ in range(100):
            v = random_field(grid, rng)
            w = v + random_field(grid, rng, sign=1)
            assert dg.comparison_check(grid, v, w)

    def test_precondition_distinct(self, grid):
        w = gaussian(grid)
        with pytest.raises(PreconditionError, match="node"):
            dg.comparison_check(grid, w, 0.5 * w)


class TestRegions:
    def test_exterior_at_zero(self, grid):
        assert dg.exterior_region(0.0, 1.0, 1.0, grid) == [(-50.0, 0.0), (0.0, 50.0)]

    def test_exterior_t10(self, grid):
        assert dg.exterior_region(10.0, 1.0, 1.0, grid) == [(-50.0, -20.0), (20.0, 50.0)]

    def test_exterior_empty(self, grid):
        with pytest.warns(UserWarning, match="empty"):
            assert dg.exterior_region(30.0, 1.0, 1.0, grid) == []
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert dg.exterior_region(30.0, 1.0, 1.0, grid, warn=False) == []

    def test_exterior_validation(self, grid):
        with pytest.raises(ValueError):
            dg.exterior_region(-1.0, 1.0, 1.0, grid)
        with pytest.raises(ValueError):
            dg.exterior_region(1.0, 0.0, 1.0, grid)

    def test_zero_state(self, grid):
        assert dg.region_norm(State.zeros(grid), [(-5, 5)]) == 0.0

    def test_whole_box(self, soliton):
        g = soliton.grid
        vx = deriv(g, soliton.v, 1)
        expected = np.sqrt(g.dx * np.sum(soliton.u**2 + soliton.v**2 + vx**2))
        assert dg.region_norm(soliton, [(-50, 50)]) == pytest.approx(expected, rel=1e-15)

    def test_soliton_tail(self, grid, soliton):
        spec = SolitonSpec(2.0, 1.5)
        q = lambda x: scaled_profile(x, spec)  # noqa: E731
        dq = lambda x: scaled_profile_derivative(x, spec)  # noqa: E731
        oracle = np.sqrt(quad(lambda x: (1 + 2.25) * q(x) ** 2 + 2.25 * dq(x) ** 2, 30, 50, epsabs=0)[0])
        far = dg.region_norm(soliton, [(30, 50)])
        assert far < 1e-8
        assert far == pytest.approx(oracle, rel=0.05)
        near = dg.region_norm(soliton, [(10, 50)])
        assert near == pytest.approx(
            np.sqrt(quad(lambda x: (1 + 2.25) * q(x) ** 2 + 2.25 * dq(x) ** 2, 10, 50)[0]), rel=0.05
        )

    def test_empty_region_warns(self, soliton):
        with pytest.warns(UserWarning):
            assert dg.region_norm(soliton, [(60, 70)]) == 0.0
