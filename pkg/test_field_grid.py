"""Tests for grids, fields, transforms and snapshots."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynamics.initial_states import gaussian_state, random_bandlimited_state
from errors import GridError, GridMismatchError, UnresolvedFieldError
from field_grid.fields import (
    ScalarField,
    SpinorField,
    boundary_mass,
    inner_product,
    lq_norm,
    mass,
    require_resolved,
)
from field_grid.grid import make_grid
from field_grid.snapshot_io import SnapshotFormatError, decode_snapshot, encode_snapshot, read_snapshot, write_snapshot
from field_grid.transforms import forward_transform, inverse_transform, spectral_derivative

GRID = make_grid(2, 32, 6.0)
LEFT = random_bandlimited_state(GRID, seed=1, cutoff=0.3)
MIDDLE = random_bandlimited_state(GRID, seed=2, cutoff=0.3)
RIGHT = random_bandlimited_state(GRID, seed=3, cutoff=0.3)

coefficients = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


class TestGrid:

    def test_spacing_and_origin(self):
        grid = make_grid(2, 64, 8.0)
        assert grid.h == pytest.approx(0.25)
        assert grid.axis[grid.n // 2] == 0.0
        assert grid.shape == (64, 64)
        assert grid.frequency_axis[grid.n // 2] == 0.0

    @pytest.mark.parametrize("dim, n, L", [(1, 64, 8.0), (4, 16, 8.0), (2, 48, 8.0), (2, 4, 8.0), (2, 64, -1.0)])
    def test_invalid_parameters(self, dim, n, L):
        with pytest.raises(GridError):
            make_grid(dim, n, L)

    def test_coordinates_are_read_only(self, grid2d):
        with pytest.raises(ValueError):
            grid2d.coordinates[0][0, 0] = 1.0


class TestFields:

    @given(a=coefficients, b=coefficients)
    @settings(max_examples=25, deadline=None)
    def test_inner_product_is_sesquilinear(self, a, b):
        combined = ScalarField(GRID, a * MIDDLE.values + b * RIGHT.values)
        expected = a * inner_product(LEFT, MIDDLE) + b * inner_product(LEFT, RIGHT)
        assert inner_product(LEFT, combined) == pytest.approx(expected, rel=1e-12, abs=1e-12)

        scaled = ScalarField(GRID, a * LEFT.values)
        assert inner_product(scaled, MIDDLE) == pytest.approx(
            np.conj(a) * inner_product(LEFT, MIDDLE), rel=1e-12, abs=1e-12)

    def test_hermitian_symmetry(self):
        assert inner_product(LEFT, MIDDLE) == pytest.approx(np.conj(inner_product(MIDDLE, LEFT)), rel=1e-13)

    def test_mass_of_normalized_states(self, gaussian2d, random2d):
        assert mass(gaussian2d) == pytest.approx(1.0, rel=1e-14)
        assert mass(random2d) == pytest.approx(1.0, rel=1e-14)

    def test_spinor_mass_sums_components(self, gaussian2d):
        spinor = SpinorField(gaussian2d.grid, 0.6 * gaussian2d.values, 0.8j * gaussian2d.values)
        assert mass(spinor) == pytest.approx(1.0, rel=1e-14)
        assert lq_norm(spinor, 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_lq_norm_of_gaussian(self, grid2d):
        f = gaussian_state(grid2d, width=1.0)
        # |psi|^2 = e^{-rho^2}/pi, so ||psi||_4^4 = 1/(2 pi)
        assert lq_norm(f, 4.0) == pytest.approx((1.0 / (2.0 * math.pi)) ** 0.25, rel=1e-12)
        assert lq_norm(f, math.inf) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-12)
        with pytest.raises(ValueError):
            lq_norm(f, 0.5)

    def test_grid_mismatch(self, gaussian2d):
        other = gaussian_state(make_grid(2, 32, 8.0))
        with pytest.raises(GridMismatchError):
            inner_product(gaussian2d, other)
        with pytest.raises(GridMismatchError):
            ScalarField(gaussian2d.grid, np.zeros((32, 32)))

    def test_boundary_guard(self, grid2d, gaussian2d):
        assert require_resolved(gaussian2d) < 1e-12
        spread = gaussian_state(grid2d, width=4.0)
        assert boundary_mass(spread) > 1e-6
        with pytest.raises(UnresolvedFieldError) as info:
            require_resolved(spread)
        assert info.value.boundary_mass == pytest.approx(boundary_mass(spread))
        assert info.value.exit_code == 3


class TestTransforms:

    def test_gaussian_is_self_dual(self, grid2d):
        values = np.exp(-math.pi * grid2d.radius_squared).astype(np.complex128)
        spectrum = forward_transform(ScalarField(grid2d, values)).values
        k1, k2 = np.meshgrid(grid2d.frequency_axis, grid2d.frequency_axis, indexing="ij")
        inside = k1 ** 2 + k2 ** 2 <= 1.0
        expected = np.exp(-math.pi * (k1 ** 2 + k2 ** 2))
        np.testing.assert_allclose(spectrum[inside], expected[inside], atol=1e-10)

    def test_parseval(self, random2d):
        grid = random2d.grid
        spectrum = forward_transform(random2d).values
        frequency_cell = (1.0 / (2.0 * grid.L)) ** grid.dim
        assert frequency_cell * np.sum(np.abs(spectrum) ** 2) == pytest.approx(mass(random2d), rel=1e-12)

    def test_inverse_round_trip(self, random2d):
        back = inverse_transform(forward_transform(random2d))
        np.testing.assert_allclose(back.values, random2d.values, atol=1e-13)

    def test_spectral_derivative_of_gaussian(self, grid2d):
        x1 = grid2d.coordinates[0]
        values = np.exp(-0.5 * grid2d.radius_squared).astype(np.complex128)
        # p_1 = -i d/dx_1
        np.testing.assert_allclose(spectral_derivative(values, grid2d, 0), 1j * x1 * values, atol=1e-10)


class TestSnapshots:

    def test_spinor_file_round_trip(self, tmp_path, gaussian2d):
        spinor = SpinorField(gaussian2d.grid, gaussian2d.values, 0.5j * gaussian2d.values)
        path = write_snapshot(spinor, tmp_path / "snapshot_00000010.bin")
        loaded = read_snapshot(path)
        assert isinstance(loaded, SpinorField)
        assert loaded.grid == spinor.grid
        np.testing.assert_array_equal(loaded.up, spinor.up)
        np.testing.assert_array_equal(loaded.down, spinor.down)

    def test_encoding_is_deterministic(self, gaussian2d):
        assert encode_snapshot(gaussian2d) == encode_snapshot(gaussian2d)

    def test_truncated_payload(self, gaussian2d):
        payload = encode_snapshot(gaussian2d)
        with pytest.raises(SnapshotFormatError):
            decode_snapshot(payload[:-16])
        with pytest.raises(SnapshotFormatError):
            decode_snapshot(b"no header at all")
