"""Tests for the Mehler kernel, the fast propagator plans and U_S / U_P."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynamics.initial_states import gaussian_state, landau_state, random_bandlimited_state
from errors import ConfigError, PlanMismatchError, SingularTimeError
from field_grid.fields import ScalarField, SpinorField, inner_product, mass
from field_grid.grid import make_grid
from propagators.linear_evolution import apply_up, apply_us, free_propagator, substep_count
from propagators.mehler import apply_mehler_dense, apply_mehler_fast, mehler_kernel_value
from propagators.propagator_plan import build_plan, cached_plan, chirp_sampling_ok

ORACLE_GRID = make_grid(2, 64, 8.0)
PACKET_GRID = make_grid(2, 128, 8.0)


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def magnetic_packet(B: float, seed: int) -> ScalarField:
    """
    Slowly modulated packet at the magnetic length sqrt(2/|B|).

    Such packets keep their width under the linear flow, so the periodic
    split-chirp step and the whole-plane kernel sum see the same field.
    """
    return random_bandlimited_state(PACKET_GRID, seed=seed, cutoff=0.1, envelope=math.sqrt(2.0 / abs(B)))


def reflect_x2(values: np.ndarray) -> np.ndarray:
    """(P f)(x1, x2) = f(x1, -x2) on the periodic lattice."""
    return np.roll(values[:, ::-1], 1, axis=1)


class TestKernel:

    POINTS = np.random.default_rng(11).uniform(-3.0, 3.0, size=(2, 16, 2))

    def test_unitarity_symmetry(self):
        x, y = self.POINTS
        t, B = 0.4, 1.3
        np.testing.assert_allclose(mehler_kernel_value(x, y, -t, B),
                                   np.conj(mehler_kernel_value(y, x, t, B)), rtol=1e-13)

    def test_field_reversal_swaps_arguments(self):
        x, y = self.POINTS
        np.testing.assert_allclose(mehler_kernel_value(x, y, 0.3, -2.0),
                                   mehler_kernel_value(y, x, 0.3, 2.0), rtol=1e-13)

    def test_time_reversed_convention(self):
        x, y = self.POINTS
        printed = mehler_kernel_value(x, y, 0.5, 1.0, convention="time-reversed")
        np.testing.assert_allclose(printed, -1j * mehler_kernel_value(x, y, -0.5, 1.0), rtol=1e-13)

    def test_origin_magnitude(self):
        assert abs(mehler_kernel_value((0.0, 0.0), (0.0, 0.0), 0.5, 1.0)) == pytest.approx(
            1.0 / (4.0 * math.pi * math.sin(0.5)), rel=1e-14)

    def test_singular_time(self):
        with pytest.raises(SingularTimeError) as info:
            mehler_kernel_value((0.0, 0.0), (1.0, 0.0), math.pi, 1.0)
        assert info.value.exit_code == 3

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            mehler_kernel_value((0.0, 0.0), (1.0, 0.0), 0.5, 1.0, convention="backwards")


class TestOracleEquivalence:

    @pytest.mark.parametrize("seed, B, angle", [
        (0, 0.5, math.pi / 5),
        (1, 0.7, 0.7),
        (2, 0.9, math.pi / 4),
        (3, -0.6, -math.pi / 4),
    ])
    def test_chirp_z_matches_dense_kernel(self, seed, B, angle):
        f = random_bandlimited_state(ORACLE_GRID, seed=seed, cutoff=0.25, envelope=1.0)
        t = angle / B
        plan = build_plan(ORACLE_GRID, B, t, "chirp-z")
        assert plan.sampling_ok
        fast = apply_mehler_fast(f, plan)
        dense = apply_mehler_dense(f, t, B)
        assert relative_error(fast.values, dense.values) <= 1e-10

    @given(seed=st.integers(0, 2 ** 16), angle=st.floats(0.3, math.pi / 4),
           fraction=st.floats(0.2, 0.95), sign=st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=20, deadline=None)
    def test_chirp_z_matches_dense_kernel_on_random_fields(self, seed, angle, fraction, sign):
        f = random_bandlimited_state(ORACLE_GRID, seed=seed, cutoff=0.25, envelope=1.0)
        B = sign * fraction * math.pi * math.tan(0.5 * angle)
        t = angle / abs(B)
        plan = build_plan(ORACLE_GRID, B, t, "chirp-z")
        assert plan.sampling_ok
        assert relative_error(apply_mehler_fast(f, plan).values, apply_mehler_dense(f, t, B).values) <= 1e-10

    def test_split_chirp_matches_dense_kernel(self):
        B = 2.3
        t = math.pi / 4 / B
        f = magnetic_packet(B, seed=5)
        fast = apply_mehler_fast(f, build_plan(PACKET_GRID, B, t, "split-chirp"))
        dense = apply_mehler_dense(f, t, B)
        assert relative_error(fast.values, dense.values) <= 1e-10

    @pytest.mark.slow
    @given(seed=st.integers(0, 2 ** 16), angle=st.floats(0.7, math.pi / 4),
           fraction=st.floats(0.85, 0.95), sign=st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=20, deadline=None)
    def test_split_chirp_matches_dense_kernel_on_random_packets(self, seed, angle, fraction, sign):
        B = sign * fraction * 2.0 * math.pi * math.tan(0.5 * angle)
        t = angle / abs(B)
        assert chirp_sampling_ok(PACKET_GRID, B, t)
        f = magnetic_packet(B, seed)
        fast = apply_mehler_fast(f, build_plan(PACKET_GRID, B, t, "split-chirp"))
        assert relative_error(fast.values, apply_mehler_dense(f, t, B).values) <= 1e-10

    def test_plan_grid_mismatch(self):
        plan = build_plan(make_grid(2, 32, 8.0), 1.0, 0.5, "split-chirp")
        f = gaussian_state(ORACLE_GRID)
        with pytest.raises(PlanMismatchError):
            apply_mehler_fast(f, plan)


class TestPlans:

    def test_angle_cap(self, grid2d):
        with pytest.raises(ConfigError) as info:
            build_plan(grid2d, 2.0, 1.0, "split-chirp")
        assert info.value.key == "dt"

    def test_unknown_method(self, grid2d):
        with pytest.raises(ConfigError):
            build_plan(grid2d, 1.0, 0.1, "lanczos")

    def test_zero_field_selects_free_plan(self, grid2d):
        assert build_plan(grid2d, 0.0, 0.3).method == "free"

    def test_auto_respects_sampling_condition(self):
        coarse = make_grid(2, 64, 8.0)
        assert chirp_sampling_ok(coarse, 0.5, 1.5)
        assert not chirp_sampling_ok(coarse, 4.0, 0.01)
        assert build_plan(coarse, 4.0, 0.01, "auto").method == "split-chirp"

    def test_plans_are_cached(self, grid2d):
        assert cached_plan(grid2d, 1.0, 0.25, "split-chirp") is cached_plan(grid2d, 1.0, 0.25, "split-chirp")

    def test_substep_count(self):
        assert substep_count(0.0, 3.0) == 1
        assert substep_count(math.pi / 8, 2.0) == 1
        assert substep_count(1.0, 2.0) == 3


class TestLinearEvolution:

    def test_unitarity(self, gaussian2d):
        for t in (0.1, 0.37, 1.9):
            assert mass(apply_us(gaussian2d, t, 2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_group_law(self, gaussian2d):
        two_steps = apply_us(apply_us(gaussian2d, 0.3, 2.0), 0.5, 2.0)
        one_step = apply_us(gaussian2d, 0.8, 2.0)
        assert relative_error(two_steps.values, one_step.values) <= 1e-8

    def test_backward_evolution_inverts(self, gaussian2d):
        back = apply_us(apply_us(gaussian2d, 0.6, 1.5), -0.6, 1.5)
        assert relative_error(back.values, gaussian2d.values) <= 1e-8

    def test_larmor_period_returns_with_sign(self):
        grid = make_grid(2, 128, 10.0)
        B = 2.0
        f = gaussian_state(grid, width=0.7, center=(1.5, 0.0), momentum=(0.0, 0.5))
        # spectrum B(2k + 1): U_S(pi/B) = -1
        returned = apply_us(f, math.pi / B, B)
        assert relative_error(returned.values, -f.values) <= 1e-8
        np.testing.assert_allclose(returned.density(), f.density(), atol=1e-8)

    def test_lowest_landau_phase(self, grid2d):
        B, t = 2.0, 0.35
        f = landau_state(grid2d, B, m=0)
        evolved = apply_us(f, t, B)
        np.testing.assert_allclose(evolved.values, np.exp(-1j * B * t) * f.values, atol=1e-10)

    def test_zero_field_is_free_evolution(self, gaussian2d):
        np.testing.assert_allclose(apply_us(gaussian2d, 0.4, 0.0).values,
                                   free_propagator(gaussian2d, 0.4).values, atol=1e-14)

    def test_reflection_reverses_field(self, gaussian2d):
        B, t = 1.5, 0.4
        reflected = ScalarField(gaussian2d.grid, reflect_x2(gaussian2d.values))
        direct = apply_us(gaussian2d, t, -B).values
        via_reflection = reflect_x2(apply_us(reflected, t, B).values)
        assert relative_error(direct, via_reflection) <= 1e-9

    def test_conjugation_reverses_time_and_field(self, gaussian2d):
        B, t = 1.5, 0.4
        conjugated = ScalarField(gaussian2d.grid, np.conj(gaussian2d.values))
        lhs = np.conj(apply_us(conjugated, t, B).values)
        rhs = apply_us(gaussian2d, -t, -B).values
        assert relative_error(lhs, rhs) <= 1e-9

    def test_three_dimensional_factorization(self):
        grid3d = make_grid(3, 64, 8.0)
        B, t = 2.0, 0.3
        x3 = grid3d.coordinates[2]
        transverse = landau_state(make_grid(2, 64, 8.0), B, m=0)
        axial = np.exp(-0.5 * x3 ** 2)
        f = ScalarField(grid3d, transverse.values[:, :, None] * axial)
        evolved = apply_us(f, t, B)
        expected = np.exp(-1j * B * t) * transverse.values[:, :, None] * free_propagator(
            ScalarField(grid3d, np.ones(grid3d.shape) * axial), t, axes=(2,)).values
        assert relative_error(evolved.values, expected) <= 1e-10
        assert mass(evolved) == pytest.approx(mass(f), rel=1e-12)


class TestPauliPropagator:

    def test_sigma3_eigenstates_pick_up_zeeman_phases(self, gaussian2d):
        B, t = 2.0, 0.3
        zero = np.zeros(gaussian2d.grid.shape)
        up = apply_up(SpinorField(gaussian2d.grid, gaussian2d.values, zero), t, B)
        down = apply_up(SpinorField(gaussian2d.grid, zero, gaussian2d.values), t, B)
        scalar = apply_us(gaussian2d, t, B).values
        np.testing.assert_allclose(up.up, np.exp(-1j * B * t) * scalar, atol=1e-10)
        np.testing.assert_allclose(down.down, np.exp(1j * B * t) * scalar, atol=1e-10)
        assert np.max(np.abs(up.down)) == 0.0

    def test_pauli_evolution_is_unitary(self, gaussian2d):
        spinor = SpinorField(gaussian2d.grid, 0.6 * gaussian2d.values, 0.8j * gaussian2d.values)
        evolved = apply_up(spinor, 0.7, 1.5)
        assert mass(evolved) == pytest.approx(1.0, abs=1e-12)
        assert abs(inner_product(evolved, evolved)) == pytest.approx(1.0, abs=1e-12)
