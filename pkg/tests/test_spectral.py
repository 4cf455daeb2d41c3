import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gib_lab import spectral
from gib_lab.errors import GridError, NonFiniteError
from gib_lab.spectral import (
    Grid,
    deriv,
    helmholtz,
    helmholtz_inverse,
    integrate,
    make_grid,
    sample_function,
    shift,
)

from .conftest import band_limited


class TestMakeGrid:
    def test_pi_box(self):
        g = make_grid(np.pi, 16)
        assert g.dx == pytest.approx(np.pi / 8, abs=1e-15)
        assert g.nodes[0] == -np.pi

    def test_default_box(self):
        g = make_grid(50, 1024)
        assert g.dx == pytest.approx(100 / 1024, rel=1e-15)
        assert round(g.dx, 5) == 0.09766

    @pytest.mark.parametrize("n", [15, 14, 8, 0, -16])
    def test_bad_point_counts(self, n):
        with pytest.raises(GridError):
            make_grid(1.0, n)

    @pytest.mark.parametrize("half", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_half_length(self, half):
        with pytest.raises(GridError):
            make_grid(half, 16)

    def test_invariants(self, grid):
        d = np.diff(grid.nodes)
        assert np.all(d > 0)
        assert np.allclose(d, grid.dx, rtol=0, atol=1e-12)
        assert np.count_nonzero(grid.wavenumbers == 0) == 1
        k_max_expected = np.pi / grid.dx
        assert np.max(np.abs(grid.wavenumbers)) == pytest.approx(k_max_expected, rel=1e-14)
        assert np.allclose(grid.wavenumbers[: grid.n_points // 2], np.pi * np.arange(grid.n_points // 2) / 50.0)

    def test_arrays_are_read_only(self, grid):
        with pytest.raises(ValueError):
            grid.nodes[0] = 1.0


class TestDeriv:
    def test_sin_first(self, grid_pi):
        x = grid_pi.nodes
        assert np.max(np.abs(deriv(grid_pi, np.sin(x), 1) - np.cos(x))) < 1e-14

    def test_sin_second(self, grid_pi):
        x = grid_pi.nodes
        assert np.max(np.abs(deriv(grid_pi, np.sin(x), 2) + np.sin(x))) < 1e-13

    def test_sin_third(self, grid_pi):
        x = grid_pi.nodes
        assert np.max(np.abs(deriv(grid_pi, np.sin(3 * x), 3) + 27 * np.cos(3 * x))) < 27 * 1e-13

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_constant(self, grid_pi, order):
        assert np.max(np.abs(deriv(grid_pi, np.full(grid_pi.n_points, 3.7), order))) < 1e-14

    def test_nyquist_dropped_in_odd_orders(self, grid_pi):
        nyq = np.cos(np.pi * np.arange(grid_pi.n_points))
        assert np.max(np.abs(deriv(grid_pi, nyq, 1))) < 1e-12
        assert np.max(np.abs(deriv(grid_pi, nyq, 3))) < 1e-9
        k = np.pi / grid_pi.dx
        assert np.allclose(deriv(grid_pi, nyq, 2), -(k**2) * nyq)

    def test_rejects_nonfinite(self, grid_pi):
        f = np.zeros(grid_pi.n_points)
        f[3] = np.nan
        with pytest.raises(NonFiniteError) as exc:
            deriv(grid_pi, f)
        assert exc.value.index == 3

    def test_rejects_bad_order(self, grid_pi):
        with pytest.raises(ValueError):
            deriv(grid_pi, grid_pi.zeros(), 4)


class TestHelmholtz:
    def test_cos_eigenfunction(self, grid_pi):
        x = grid_pi.nodes
        assert np.max(np.abs(helmholtz_inverse(grid_pi, np.cos(x)) - 0.5 * np.cos(x))) < 1e-15

    def test_zero(self, grid_pi):
        assert np.all(helmholtz_inverse(grid_pi, grid_pi.zeros()) == 0)

    def test_round_trip_via_deriv(self, grid):
        rng = np.random.default_rng(0)
        r = band_limited(grid, rng, 12)
        f = helmholtz_inverse(grid, r)
        back = f - deriv(grid, f, 2)
        assert np.max(np.abs(back - r)) <= 1e-12 * np.max(np.abs(r))

    def test_commutes_with_deriv(self, grid):
        rng = np.random.default_rng(1)
        r = band_limited(grid, rng, 12)
        a = deriv(grid, helmholtz_inverse(grid, r), 1)
        b = helmholtz_inverse(grid, deriv(grid, r, 1))
        assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a))

    def test_forward_operator(self, grid_pi):
        x = grid_pi.nodes
        assert np.allclose(helmholtz(grid_pi, np.sin(2 * x)), 5 * np.sin(2 * x), atol=1e-13)

    def test_rejects_nonfinite(self, grid_pi):
        f = grid_pi.zeros()
        f[0] = np.inf
        with pytest.raises(NonFiniteError):
            helmholtz_inverse(grid_pi, f)


class TestIntegrate:
    def test_constant(self, grid_pi):
        assert integrate(grid_pi, np.ones(grid_pi.n_points)) == pytest.approx(2 * np.pi, rel=1e-15)

    def test_sin(self, grid_pi):
        assert abs(integrate(grid_pi, np.sin(grid_pi.nodes))) < 1e-14

    def test_sech2(self, grid):
        exact = 2 * np.tanh(50.0)
        assert abs(integrate(grid, 1 / np.cosh(grid.nodes) ** 2) - exact) < 1e-10

    def test_derivative_integrates_to_zero(self, grid):
        rng = np.random.default_rng(2)
        f = np.exp(-grid.nodes**2 / 8) * band_limited(grid, rng, 6)
        assert abs(integrate(grid, deriv(grid, f, 1))) < 1e-12


class TestShift:
    def test_sin_quarter_turn(self, grid_pi):
        x = grid_pi.nodes
        assert np.max(np.abs(shift(grid_pi, np.sin(x), np.pi / 2) + np.cos(x))) < 1e-14

    def test_zero_shift(self, grid):
        f = np.exp(-grid.nodes**2)
        assert np.max(np.abs(shift(grid, f, 0.0) - f)) < 1e-15

    @settings(max_examples=30, deadline=None)
    @given(delta=st.floats(-60.0, 60.0, allow_nan=False))
    def test_round_trip(self, delta):
        g = make_grid(50.0, 256)
        f = np.exp(-g.nodes**2 / 4) * np.cos(g.nodes)
        back = shift(g, shift(g, f, delta), -delta)
        assert np.max(np.abs(back - f)) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(delta=st.floats(-60.0, 60.0, allow_nan=False))
    def test_preserves_integral_and_norm(self, delta):
        g = make_grid(50.0, 256)
        f = np.exp(-g.nodes**2 / 4)
        s = shift(g, f, delta)
        assert integrate(g, s) == pytest.approx(integrate(g, f), rel=1e-12)
        assert spectral.l2_norm(g, s) == pytest.approx(spectral.l2_norm(g, f), rel=1e-12)

    def test_shift_moves_peak(self, grid):
        f = np.exp(-grid.nodes**2)
        s = shift(grid, f, 10.0)
        assert grid.nodes[np.argmax(s)] == pytest.approx(10.0, abs=grid.dx)


class TestSampleFunction:
    def test_zero(self, grid_pi):
        assert np.all(sample_function(grid_pi, lambda x: 0.0 * x) == 0)

    def test_scalar_return_broadcasts(self, grid_pi):
        assert np.all(sample_function(grid_pi, lambda x: 0.0) == 0)

    def test_identity_small_box(self):
        # make_grid insists on >= 16 points; the raw constructor does not
        g = Grid(1.0, 4)
        assert np.allclose(sample_function(g, lambda x: x), [-1.0, -0.5, 0.0, 0.5])

    def test_sech_symmetric(self, grid):
        f = sample_function(grid, lambda x: 1 / np.cosh(x))
        assert np.allclose(f[1:], f[1:][::-1], atol=1e-15)
        assert grid.nodes[np.argmax(f)] == 0.0

    def test_names_bad_node(self, grid_pi):
        with pytest.raises(NonFiniteError, match="node 16"), np.errstate(divide="ignore"):
            sample_function(grid_pi, lambda x: 1.0 / x)


def test_spectral_tail_smooth_vs_rough(grid):
    smooth = np.exp(-grid.nodes**2 / 8)
    rough = np.random.default_rng(3).normal(size=grid.n_points)
    assert spectral.spectral_tail(grid, smooth) < 1e-15
    assert spectral.spectral_tail(grid, rough) > 0.1
    assert spectral.spectral_tail(grid, grid.zeros()) == 0.0


def test_boundary_magnitude():
    f = np.array([1e-3, 0, 0, 0, 0, 2e-3])
    assert spectral.boundary_magnitude(f) == 2e-3
