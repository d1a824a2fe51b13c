"""Tests for the closed-form variance, blow-up criteria and the vortex-ring certificate."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dynamics.initial_states import gaussian_state
from errors import ConfigError
from field_grid.grid import make_grid
from observables.functionals import f_s, gdot, variance_g
from theory.variance_oracles import (
    BlowupVerdict,
    VarianceParams,
    admissible,
    b_window,
    blowup_condition_p3_d2,
    blowup_condition_rho_form,
    blowup_condition_symmetric_gauge,
    blowup_sufficient,
    exact_variance,
    exact_variance_derivative,
    first_zero,
    glassey_variance,
)
from theory.vortex_ring import (
    LITERATURE_E0,
    VortexRingProfile,
    certify_vortex_ring,
    oracle_values,
)

F0s = st.floats(-100.0, 100.0)
fields = st.floats(0.5, 4.0) | st.floats(-4.0, -0.5)
variances = st.floats(0.05, 10.0)
slopes = st.floats(-10.0, 10.0)


def collapse_functional(M: float, sigma: float, B: float) -> float:
    """F_S of a mass-M Gaussian of width sigma for mu = -1, p = 3."""
    return M / sigma ** 2 * (1.0 - M / (4.0 * math.pi)) + B * B * M * sigma ** 2 / 4.0


class TestExactVariance:

    def test_stationary_case(self):
        # F0 = 2 B^2 g0 with gdot0 = 0 sits at the oscillation center
        params = VarianceParams(F0=8.0, B=2.0, g0=1.0, gdot0=0.0)
        assert exact_variance(params, 0.3) == pytest.approx(1.0, rel=1e-15)

    @given(F0=F0s, B=fields, g0=variances, gdot0=slopes)
    @settings(max_examples=50, deadline=None)
    def test_initial_data_and_amplitude_form(self, F0, B, g0, gdot0):
        params = VarianceParams(F0, B, g0, gdot0)
        scale = abs(params.mean) + g0 + abs(gdot0) + 1.0
        assert exact_variance(params, 0.0) == pytest.approx(g0, abs=1e-12 * scale)
        assert exact_variance_derivative(params, 0.0) == pytest.approx(gdot0, abs=1e-12 * scale)
        R, phi = params.amplitude_phase()
        for t in (0.1, 0.7, 2.3):
            expected = params.mean + R * math.cos(2.0 * B * t - phi)
            assert exact_variance(params, t) == pytest.approx(expected, abs=1e-10 * scale)

    @given(F0=F0s, B=st.floats(0.5, 2.0), g0=variances, gdot0=slopes)
    @settings(max_examples=30, deadline=None)
    def test_solves_the_variance_equation(self, F0, B, g0, gdot0):
        params = VarianceParams(F0, B, g0, gdot0)
        h, t = 1e-3, 0.4
        g = [exact_variance(params, t + k * h) for k in (-1, 0, 1)]
        second = (g[0] - 2.0 * g[1] + g[2]) / h ** 2
        R, _ = params.amplitude_phase()
        assert second == pytest.approx(2.0 * F0 - 4.0 * B * B * g[1], abs=1e-4 * (R * B ** 2 + 1.0))

    def test_zero_field_needs_the_free_form(self):
        with pytest.raises(ConfigError):
            exact_variance(VarianceParams(-1.0, 0.0, 1.0, 0.0), 0.1)
        assert glassey_variance(-1.0, 1.0, 0.5, 2.0) == pytest.approx(1.0 + 1.0 - 4.0)

    def test_variance_must_be_positive(self):
        with pytest.raises(ValueError):
            VarianceParams(1.0, 1.0, 0.0, 0.0)


class TestFirstZero:

    @given(F0=F0s, B=fields, g0=variances, gdot0=slopes)
    @settings(max_examples=60, deadline=None)
    def test_zero_exists_exactly_when_condition_holds(self, F0, B, g0, gdot0):
        lhs = F0 * g0
        rhs = B * B * (g0 * g0 + gdot0 * gdot0 / (4.0 * B * B))
        assume(abs(lhs - rhs) > 1e-9 * (abs(lhs) + abs(rhs)))
        params = VarianceParams(F0, B, g0, gdot0)
        assert (first_zero(params) is not None) == blowup_condition_p3_d2(F0, g0, gdot0, B)

    @given(F0=F0s, B=fields, g0=variances, gdot0=slopes)
    @settings(max_examples=60, deadline=None)
    def test_zero_is_the_first_one(self, F0, B, g0, gdot0):
        params = VarianceParams(F0, B, g0, gdot0)
        zero = first_zero(params)
        assume(zero is not None)
        R, _ = params.amplitude_phase()
        scale = abs(params.mean) + R
        assert zero > 0.0
        assert exact_variance(params, zero) == pytest.approx(0.0, abs=1e-9 * scale)
        for t in np.linspace(0.0, zero, 40)[:-1]:
            assert exact_variance(params, t) >= -1e-9 * scale

    def test_collapse_family(self):
        grid = make_grid(2, 128, 3.0)
        f = gaussian_state(grid, width=0.35, target_mass=20.0)
        predictions = []
        for B in (2.0, 4.0, 8.0):
            F0 = f_s(f, -1.0, 3.0, B)
            assert F0 == pytest.approx(collapse_functional(20.0, 0.35, B), rel=1e-10)
            assert F0 < 0.0
            assert blowup_sufficient(F0, gdot(f, B), -1.0, 3.0, 2) is BlowupVerdict.BLOWUP
            predictions.append(first_zero(VarianceParams(F0, B, variance_g(f), gdot(f, B))))
        assert predictions[0] == pytest.approx(0.079, abs=1e-3)
        assert predictions == sorted(predictions, reverse=True)


class TestBlowupCriteria:

    @pytest.mark.parametrize("mu, p, d, expected", [
        (-1.0, 3.0, 2, BlowupVerdict.BLOWUP),
        (1.0, 3.0, 2, BlowupVerdict.INCONCLUSIVE),
        (-1.0, 2.0, 2, BlowupVerdict.INCONCLUSIVE),
        (-1.0, 3.0, 3, BlowupVerdict.BLOWUP),
        (-1.0, 5.0, 3, BlowupVerdict.INCONCLUSIVE),
    ])
    def test_hypotheses(self, mu, p, d, expected):
        assert blowup_sufficient(-1.0, 0.0, mu, p, d) is expected

    def test_zero_functional_needs_inward_motion(self):
        assert blowup_sufficient(0.0, -0.1, -1.0, 3.0, 2) is BlowupVerdict.BLOWUP
        assert blowup_sufficient(0.0, 0.1, -1.0, 3.0, 2) is BlowupVerdict.INCONCLUSIVE

    @given(F0=st.floats(-100.0, -1e-6), B=fields, g0=variances, gdot0=slopes)
    @settings(max_examples=40, deadline=None)
    def test_negative_functional_implies_weaker_condition(self, F0, B, g0, gdot0):
        assert blowup_sufficient(F0, gdot0, -1.0, 3.0, 2) is BlowupVerdict.BLOWUP
        assert blowup_condition_p3_d2(F0, g0, gdot0, B)

    @given(F0=F0s, B=fields, g0=variances, gdot0=slopes)
    @settings(max_examples=60, deadline=None)
    def test_equivalent_forms(self, F0, B, g0, gdot0):
        lhs = F0 * g0
        rhs = B * B * g0 * g0 + 0.25 * gdot0 * gdot0
        assume(abs(lhs - rhs) > 1e-9 * (abs(lhs) + abs(rhs)))
        expected = blowup_condition_p3_d2(F0, g0, gdot0, B)
        rho_sq = 4.0 * g0
        assert blowup_condition_rho_form(F0, rho_sq, gdot0, B) == expected
        E0 = F0 - 0.25 * B * B * rho_sq
        assert blowup_condition_symmetric_gauge(E0, rho_sq, gdot0) == expected

    def test_b_window(self):
        window = b_window(-4.0, -2.0, 1.0)
        assert window.B_min == pytest.approx(2.0)
        assert window.B_max == pytest.approx(4.0)
        assert window.feasible
        assert b_window(-4.0, -0.5, 1.0).empty

    @pytest.mark.parametrize("E0, L3, rho_sq", [(1.0, -1.0, 1.0), (-1.0, 0.0, 1.0), (-1.0, -1.0, 0.0)])
    def test_b_window_inputs(self, E0, L3, rho_sq):
        with pytest.raises(ConfigError):
            b_window(E0, L3, rho_sq)

    @pytest.mark.parametrize("q, r, d, expected", [
        (4.0, 4.0, 2, True),
        (math.inf, 2.0, 2, True),
        (2.0, math.inf, 2, False),
        (2.0, 6.0, 3, True),
        (3.0, 3.0, 2, False),
        (1.5, 4.0, 2, False),
    ])
    def test_admissible(self, q, r, d, expected):
        assert admissible(q, r, d) is expected


class TestVortexRing:

    def test_oracle_constants(self):
        values = oracle_values(VortexRingProfile())
        assert values.mass == pytest.approx(1.0, rel=1e-10)
        assert values.L3 == pytest.approx(-1.0, rel=1e-10)
        assert values.gradient_norm_sq == pytest.approx(1600.0, rel=1e-10)
        assert values.rho_norm_sq == pytest.approx(0.0025, rel=1e-10)
        assert values.E0 == pytest.approx(LITERATURE_E0, rel=1e-8)
        assert values.E0 < 0.0

    def test_certificate_recomputes_the_quoted_values(self):
        certificate = certify_vortex_ring()
        assert certificate.ratio == pytest.approx(400.0, rel=1e-9)
        assert certificate.agreement == {'E0': True, 'ratio': False, 'window': False}
        window = certificate.window
        assert window['feasible']
        assert window['B_min'] == pytest.approx(abs(LITERATURE_E0), rel=1e-8)
        assert window['B_max'] == pytest.approx(2.0 * math.sqrt(abs(LITERATURE_E0)) / 0.05, rel=1e-8)
        assert certificate.grid is None

    def test_grid_pipeline_matches_quadrature(self):
        certificate = certify_vortex_ring(make_grid(2, 512, 0.5))
        gaps = certificate.grid_relative_gaps
        for name in ("mass", "gradient_norm_sq", "L3", "rho_norm_sq"):
            assert gaps[name] <= 1e-8
        assert gaps['E0'] <= 1e-5
        term = certificate.angular_term
        assert term['E_S_minus_F_S'] == pytest.approx(term['plus_B_L3'], rel=1e-8)
        assert certificate.to_dict()['profile']['charge'] == -1
