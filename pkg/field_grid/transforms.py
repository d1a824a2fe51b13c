"""
Discrete Fourier transforms in the (Ff)(k) = integral e^{-2 pi i k.x} f(x) dx convention.

Frequency-space samples are stored on the centered lattice
k_j = (j - n/2)/(2L), the same ordering as the sample lattice, and scaled by
h^dim so that values approximate the continuum integral. All FFT calls go
through scipy.fft with the worker cap from MAGNLS_THREADS.
"""

from typing import Optional, Sequence

import numpy as np
from scipy import fft as sp_fft

from config import get_worker_count
from field_grid.fields import Field
from field_grid.grid import Grid


def fft_along(values: np.ndarray, axes: Optional[Sequence[int]] = None) -> np.ndarray:
    """Unnormalized forward FFT over the given axes (all by default)."""
    return sp_fft.fftn(values, axes=axes, workers=get_worker_count())


def ifft_along(values: np.ndarray, axes: Optional[Sequence[int]] = None) -> np.ndarray:
    """Inverse of fft_along."""
    return sp_fft.ifftn(values, axes=axes, workers=get_worker_count())


def fourier_multiply(values: np.ndarray, multiplier: np.ndarray,
                     axes: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Apply a Fourier multiplier given in unshifted FFT order.

    Args:
        values: Samples indexed [x1, x2(, x3)].
        multiplier: Symbol broadcastable against the transformed array.
        axes: Axes transformed (all by default).

    Returns:
        ifft(multiplier * fft(values)) over the axes.
    """
    return ifft_along(multiplier * fft_along(values, axes), axes)


def spectral_derivative(values: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """Momentum component p_j values = -i d/dx_j values, computed spectrally."""
    return sp_fft.ifft(
        grid.momentum_mesh(axis) * sp_fft.fft(values, axis=axis, workers=get_worker_count()),
        axis=axis, workers=get_worker_count(),
    )


def centered_forward(values: np.ndarray, grid: Grid) -> np.ndarray:
    axes = tuple(range(grid.dim))
    spectrum = sp_fft.fftn(sp_fft.ifftshift(values, axes=axes), axes=axes, workers=get_worker_count())
    return grid.cell_volume * sp_fft.fftshift(spectrum, axes=axes)


def centered_inverse(spectrum: np.ndarray, grid: Grid) -> np.ndarray:
    axes = tuple(range(grid.dim))
    values = sp_fft.ifftn(sp_fft.ifftshift(spectrum, axes=axes), axes=axes, workers=get_worker_count())
    return sp_fft.fftshift(values, axes=axes) / grid.cell_volume


def forward_transform(f: Field) -> Field:
    """
    Continuum-scaled Fourier transform on the dual lattice.

    Args:
        f: Field in position space.

    Returns:
        Field of the same kind whose samples approximate (Ff)(k) on the
        centered frequency lattice.
    """
    return f.map_components(lambda v: centered_forward(v, f.grid))


def inverse_transform(f: Field) -> Field:
    """
    Inverse of forward_transform.

    Args:
        f: Frequency-space samples on the centered lattice.

    Returns:
        Position-space field.
    """
    return f.map_components(lambda v: centered_inverse(v, f.grid))
