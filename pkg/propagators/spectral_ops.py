"""
Band-limited building blocks for the fast Mehler paths.

Three-shear FFT rotation about the origin of the grid and separable chirp-z
evaluation of a discrete Fourier sum on a scaled lattice. Both act on the
(x1, x2) axes of an array and broadcast over a trailing x3 axis.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy.signal import CZT

from config import get_worker_count
from field_grid.grid import Grid


def _transverse_shape(grid: Grid, table: np.ndarray) -> np.ndarray:
    """Append singleton axes so an (n, n) table broadcasts over x3."""
    return table.reshape(table.shape + (1,) * (grid.dim - 2))


def _apply_shear(values: np.ndarray, table: np.ndarray, axis: int) -> np.ndarray:
    workers = get_worker_count()
    return sp_fft.ifft(table * sp_fft.fft(values, axis=axis, workers=workers), axis=axis, workers=workers)


@dataclass(frozen=True, eq=False)
class ShearRotation:
    """
    Rotation f -> f(R(-angle) x), i.e. counterclockwise by `angle`.

    R(-angle) = Sx(a) Sy(b) Sx(a) with a = tan(angle/2), b = -sin(angle), where
    Sx(c): (x1, x2) -> (x1 + c x2, x2) and Sy(c): (x1, x2) -> (x1, x2 + c x1).
    Each shear is a per-column phase ramp in the FFT along the sheared axis.
    """

    angle: float
    shear_x: np.ndarray
    shear_y: np.ndarray

    def __call__(self, values: np.ndarray) -> np.ndarray:
        rotated = _apply_shear(values, self.shear_x, axis=0)
        rotated = _apply_shear(rotated, self.shear_y, axis=1)
        return _apply_shear(rotated, self.shear_x, axis=0)


def build_rotation(grid: Grid, angle: float) -> ShearRotation:
    """
    Precompute the shear phase tables for one rotation angle.

    Args:
        grid: Grid of the fields to rotate.
        angle: Rotation angle in radians, |angle| <= pi/4 keeps shears mild.

    Returns:
        Callable rotation acting on arrays indexed [x1, x2(, x3)].
    """
    a = np.tan(angle / 2.0)
    b = -np.sin(angle)
    k = grid.momentum_axis
    x = grid.axis
    # f(x1 + a x2, x2): multiply the x1-spectrum by exp(i k1 a x2)
    shear_x = np.exp(1j * a * np.outer(k, x))
    # f(x1, x2 + b x1): multiply the x2-spectrum by exp(i k2 b x1)
    shear_y = np.exp(1j * b * np.outer(x, k))
    return ShearRotation(angle, _transverse_shape(grid, shear_x), _transverse_shape(grid, shear_y))


@dataclass(frozen=True, eq=False)
class ScaledFourierSum:
    """
    Evaluate G(x) = h^2 sum_y exp(-2 pi i scale x.y) g(y) on the sample lattice.

    Per axis, x_j y_m = L^2 - L h (j + m) + h^2 j m, so the sum is a chirp-z
    transform with w = exp(-2 pi i scale h^2), a = exp(-2 pi i scale L h)
    followed by the phase exp(-2 pi i scale (L^2 - L h j)) on output index j.
    """

    scale: float
    transform: CZT
    post_phase: np.ndarray

    def __call__(self, values: np.ndarray) -> np.ndarray:
        result = self.transform(values, axis=0)
        result = self.transform(result, axis=1)
        return self.post_phase * result


def build_scaled_fourier_sum(grid: Grid, scale: float) -> ScaledFourierSum:
    """
    Precompute the Bluestein chirps for a scaled lattice evaluation.

    Args:
        grid: Grid of input and output samples.
        scale: Frequency scale s; output frequencies are s * x.

    Returns:
        Callable acting on arrays indexed [x1, x2(, x3)].
    """
    h, L, n = grid.h, grid.L, grid.n
    w = np.exp(-2j * np.pi * scale * h * h)
    a = np.exp(-2j * np.pi * scale * L * h)
    transform = CZT(n, n, w=w, a=a)
    j = np.arange(n)
    axis_phase = h * np.exp(-2j * np.pi * scale * (L * L - L * h * j))
    post = np.outer(axis_phase, axis_phase)
    return ScaledFourierSum(scale, transform, _transverse_shape(grid, post))


def transverse_free_symbol(grid: Grid, duration: float) -> np.ndarray:
    """Symbol exp(-i duration (k1^2 + k2^2)) of e^{i duration (d_1^2 + d_2^2)}, FFT order."""
    k_sq = grid.momentum_mesh(0) ** 2 + grid.momentum_mesh(1) ** 2
    return np.exp(-1j * duration * k_sq)


def free_symbol(grid: Grid, duration: float, axes: Tuple[int, ...]) -> np.ndarray:
    """Symbol of e^{i duration sum_{j in axes} d_j^2} in FFT order."""
    k_sq = sum(grid.momentum_mesh(axis) ** 2 for axis in axes)
    return np.exp(-1j * duration * k_sq)
