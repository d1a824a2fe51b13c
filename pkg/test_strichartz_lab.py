"""Tests for the magnetic/free Strichartz identity."""

import math

import numpy as np
import pytest

from dynamics.initial_states import gaussian_state
from errors import ConfigError
from field_grid.fields import SpinorField, lq_norm
from field_grid.grid import make_grid
from propagators.linear_evolution import free_propagator
from strichartz.strichartz_lab import (
    GaussianParams,
    free_gaussian_evolution,
    gauss_legendre_nodes,
    printed_prefactor,
    require_admissible,
    verify_identity,
)

GRID = make_grid(2, 128, 12.0)
NODES = 64


@pytest.fixture(scope="module")
def gaussian():
    params = GaussianParams(GRID, width=1.0)
    return params, free_gaussian_evolution(params, 0.0)


class TestQuadrature:

    def test_weights_cover_the_interval(self):
        times, weights = gauss_legendre_nodes((0.0, 2.0), 16)
        assert np.all((times > 0.0) & (times < 2.0))
        assert np.sum(weights) == pytest.approx(2.0, rel=1e-14)

    def test_tangent_nodes_integrate_the_dispersive_profile(self):
        tau = 0.5
        times, weights = gauss_legendre_nodes((-3.0, 3.0), 8, time_scale=tau)
        integral = np.sum(weights / (1.0 + (times / tau) ** 2))
        assert integral == pytest.approx(2.0 * tau * math.atan(3.0 / tau), rel=1e-13)

    def test_prefactor_is_one_only_at_four(self):
        assert printed_prefactor(4.0) == pytest.approx(1.0)
        assert printed_prefactor(2.0) == pytest.approx(1.0 / (4.0 * math.pi))
        assert printed_prefactor(math.inf) == pytest.approx(4.0 * math.pi)

    def test_admissibility_is_enforced(self):
        with pytest.raises(ConfigError):
            require_admissible(3.0, 3.0, 2)


class TestIdentity:

    @pytest.mark.parametrize("B", [1.0, 3.0])
    def test_gaussian_identity(self, gaussian, B):
        params, psi0 = gaussian
        report = verify_identity(psi0, B, 4.0, 4.0, NODES, params=params)
        assert report.free_side_method == "closed-form"
        assert report.relative_gap <= 1e-3
        assert report.prefactor == 1.0
        assert len(report.node_diagnostics) == NODES

    def test_sharp_constant_ratio(self, gaussian):
        params, psi0 = gaussian
        report = verify_identity(psi0, 2.0, 4.0, 4.0, NODES, params=params)
        assert report.rhs / lq_norm(psi0, 2.0) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-10)

    def test_charged_laguerre_gaussian(self):
        params = GaussianParams(GRID, width=1.0, charge=1)
        psi0 = free_gaussian_evolution(params, 0.0)
        report = verify_identity(psi0, 1.0, 4.0, 4.0, NODES, params=params)
        assert report.relative_gap <= 1e-3

    def test_other_admissible_pair(self, gaussian):
        params, psi0 = gaussian
        report = verify_identity(psi0, 1.0, 8.0, 8.0 / 3.0, NODES, params=params)
        assert report.relative_gap <= 1e-3
        assert report.printed_prefactor != pytest.approx(1.0)

    def test_spinor_data(self, gaussian):
        params, psi0 = gaussian
        spinor = SpinorField(GRID, 0.6 * psi0.values, 0.8j * psi0.values)
        report = verify_identity(spinor, 1.0, 4.0, 4.0, NODES, params=params)
        assert report.relative_gap <= 1e-3

    def test_grid_free_side_brackets_the_magnetic_side(self, gaussian):
        _, psi0 = gaussian
        report = verify_identity(psi0, 1.0, 4.0, 4.0, NODES, window_scale=1.6, free_side="grid")
        assert report.free_side_method == "grid"
        assert report.window == pytest.approx(0.8, rel=1e-10)
        assert report.within_tail_bound
        assert report.rhs < report.lhs

    def test_closed_form_matches_free_propagator(self, gaussian):
        params, psi0 = gaussian
        np.testing.assert_allclose(free_gaussian_evolution(params, 0.3).values,
                                   free_propagator(psi0, 0.3).values, atol=1e-10)

    def test_zero_field_is_rejected(self, gaussian):
        _, psi0 = gaussian
        with pytest.raises(ConfigError) as info:
            verify_identity(psi0, 0.0, nodes=4)
        assert info.value.key == "B"

    def test_three_dimensional_data_is_rejected(self):
        psi0 = gaussian_state(make_grid(3, 32, 8.0), center=(0.0, 0.0, 0.0), momentum=(0.0, 0.0, 0.0))
        with pytest.raises(ConfigError) as info:
            verify_identity(psi0, 1.0, nodes=4)
        assert info.value.key == "dim"
