"""
Uniform Cartesian grids on the periodic box [-L, L)^dim.

Arrays bound to a grid are indexed [x1, x2(, x3)]; axis j of an array is the
coordinate x_{j+1}. The frequency lattice is the exact DFT dual of the sample
lattice under the e^{-2 pi i k.x} convention, so k is measured in cycles per
unit length.

Example:
    >>> from field_grid.grid import make_grid
    >>> grid = make_grid(2, 8, 4.0)
    >>> grid.h
    1.0
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from errors import GridError
from config import get_grid_config

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Grid:
    """
    Uniform sampling of [-L, L)^dim with n points per axis.

    Attributes:
        dim: Space dimension, 2 or 3.
        n: Points per axis, a power of two.
        L: Half-width of the box.
    """

    dim: int
    n: int
    L: float

    def __post_init__(self) -> None:
        min_points = int(get_grid_config()['min_points'])
        if self.dim not in (2, 3):
            raise GridError(f"Grid dimension must be 2 or 3, got {self.dim}", key="dim")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise GridError(f"Grid size must be an integer, got {self.n!r}", key="n")
        if self.n < min_points or self.n & (self.n - 1):
            raise GridError(
                f"Grid size must be a power of two >= {min_points}, got {self.n}", key="n"
            )
        if not np.isfinite(self.L) or self.L <= 0:
            raise GridError(f"Half-width L must be positive, got {self.L}", key="L")

    @property
    def h(self) -> float:
        """Grid spacing 2L/n."""
        return 2.0 * self.L / self.n

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n ** self.dim

    @property
    def cell_volume(self) -> float:
        """Quadrature weight h^dim."""
        return self.h ** self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        """Sample positions -L + j h along one axis; index n/2 is the origin."""
        return _readonly(-self.L + self.h * np.arange(self.n))

    @cached_property
    def frequency_axis(self) -> np.ndarray:
        """Centered frequency lattice (j - n/2)/(2L), cycles per unit length."""
        return _readonly((np.arange(self.n) - self.n // 2) / (2.0 * self.L))

    @cached_property
    def momentum_axis(self) -> np.ndarray:
        """
        Angular wavenumbers 2 pi k in unshifted FFT order.

        This is the only place where cycles are converted to radians; spectral
        derivatives and dispersive phases all read it.
        """
        return _readonly(2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h))

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays x1, x2(, x3) of the full grid."""
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        return tuple(_readonly(np.ascontiguousarray(c)) for c in mesh)

    @cached_property
    def rho_squared(self) -> np.ndarray:
        """Transverse radius squared x1^2 + x2^2."""
        x1, x2 = self.coordinates[0], self.coordinates[1]
        return _readonly(x1 ** 2 + x2 ** 2)

    @cached_property
    def radius_squared(self) -> np.ndarray:
        """Full radius squared |x|^2."""
        return _readonly(sum(c ** 2 for c in self.coordinates))

    def momentum_mesh(self, axis: int) -> np.ndarray:
        """
        Angular wavenumber along one axis, shaped to broadcast over the grid.

        Args:
            axis: Zero-based array axis.

        Returns:
            Array of shape (1, ..., n, ..., 1).
        """
        shape = [1] * self.dim
        shape[axis] = self.n
        return self.momentum_axis.reshape(shape)


def make_grid(dim: int, n: int, L: float) -> Grid:
    """
    Build a validated grid.

    Args:
        dim: Space dimension, 2 or 3.
        n: Points per axis, a power of two >= 8.
        L: Half-width of the periodic box.

    Returns:
        Grid with spacing h = 2L/n.

    Raises:
        GridError: If any parameter is out of range.
    """
    try:
        L = float(L)
    except (TypeError, ValueError) as e:
        raise GridError(f"Half-width L must be a number, got {L!r}", key="L", cause=e) from e
    grid = Grid(dim, n, L)
    logger.debug(f"Grid dim={grid.dim} n={grid.n} L={grid.L} h={grid.h}")
    return grid
