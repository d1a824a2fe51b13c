"""
Complex field containers bound to a Grid, inner products, norms and guards.

ScalarField holds one complex array; SpinorField holds the two components
(psi_1, psi_2). Both are immutable: the stored arrays are private copies
marked read-only, and every operation returns a new field.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from config import get_numerical_tolerances
from errors import GridMismatchError, UnresolvedFieldError
from field_grid.grid import Grid

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def _frozen_copy(grid: Grid, values: np.ndarray, name: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != grid.shape:
        raise GridMismatchError(
            f"{name} has shape {array.shape}, grid expects {grid.shape}"
        )
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Complex samples psi(x) on a grid, indexed [x1, x2(, x3)]."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_copy(self.grid, self.values, "values"))

    @property
    def components(self) -> Tuple[np.ndarray, ...]:
        return (self.values,)

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values)

    def map_components(self, fn: Callable[[np.ndarray], np.ndarray]) -> "ScalarField":
        return ScalarField(self.grid, fn(self.values))

    def density(self) -> np.ndarray:
        """Pointwise |psi|^2."""
        return np.abs(self.values) ** 2

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Two-component field (psi_1, psi_2) sharing one grid."""

    grid: Grid
    up: np.ndarray
    down: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "up", _frozen_copy(self.grid, self.up, "up component"))
        object.__setattr__(self, "down", _frozen_copy(self.grid, self.down, "down component"))

    @property
    def components(self) -> Tuple[np.ndarray, ...]:
        return (self.up, self.down)

    def map_components(self, fn: Callable[[np.ndarray], np.ndarray]) -> "SpinorField":
        return SpinorField(self.grid, fn(self.up), fn(self.down))

    def component_field(self, index: int) -> ScalarField:
        """Return psi_1 (index 0) or psi_2 (index 1) as a scalar field."""
        return ScalarField(self.grid, self.components[index])

    def density(self) -> np.ndarray:
        """Spinor modulus squared |psi_1|^2 + |psi_2|^2."""
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.up)) and np.all(np.isfinite(self.down)))


Field = Union[ScalarField, SpinorField]


def require_same_grid(f: Field, g: Field) -> None:
    """
    Check that two fields are of the same kind and live on the same grid.

    Raises:
        GridMismatchError: On a different grid or field kind.
    """
    if type(f) is not type(g):
        raise GridMismatchError(f"Cannot combine {type(f).__name__} with {type(g).__name__}")
    if f.grid != g.grid:
        raise GridMismatchError(f"Grid mismatch: {f.grid} vs {g.grid}")


def inner_product(f: Field, g: Field) -> complex:
    """
    L^2 inner product h^dim * sum(conj(f) g), antilinear in f.

    Args:
        f: Left field.
        g: Right field, same kind and grid as f.

    Returns:
        Complex inner product; spinors sum over both components.

    Raises:
        GridMismatchError: If the fields do not share a grid.
    """
    require_same_grid(f, g)
    total = sum(np.vdot(a, b) for a, b in zip(f.components, g.components))
    return complex(f.grid.cell_volume * total)


def mass(f: Field) -> float:
    """Squared L^2 norm."""
    return float(f.grid.cell_volume * np.sum(f.density()))


def lq_norm(f: Field, q: float) -> float:
    """
    Discrete L^q norm (h^dim * sum |f|^q)^(1/q).

    Args:
        f: Scalar or spinor field (spinors use the pointwise spinor modulus).
        q: Exponent in [1, inf]; q = inf returns the maximum modulus.

    Returns:
        Norm value.

    Raises:
        ValueError: If q < 1.
    """
    if not q >= 1:
        raise ValueError(f"L^q norm requires q >= 1, got {q}")
    modulus = np.sqrt(f.density())
    if np.isinf(q):
        return float(np.max(modulus))
    return float((f.grid.cell_volume * np.sum(modulus ** q)) ** (1.0 / q))


def lq_power(f: Field, q: float) -> float:
    """Integral of |f|^q without the final root, h^dim * sum |f|^q."""
    return float(f.grid.cell_volume * np.sum(f.density() ** (q / 2.0)))


def boundary_shell_width(grid: Grid) -> int:
    """Number of cells per side counted as boundary shell."""
    return max(1, grid.n // 16)


def boundary_mass(f: Field, shell: Optional[int] = None) -> float:
    """
    Mass carried by the outer shell of the periodic box.

    Args:
        f: Field to inspect.
        shell: Shell width in cells; defaults to max(1, n/16).

    Returns:
        h^dim * sum of |psi|^2 over cells within `shell` of any face.
    """
    grid = f.grid
    width = boundary_shell_width(grid) if shell is None else shell
    shell_mask = np.zeros(grid.shape, dtype=bool)
    for axis in range(grid.dim):
        edge = [slice(None)] * grid.dim
        edge[axis] = np.r_[0:width, grid.n - width:grid.n]
        shell_mask[tuple(edge)] = True
    return float(grid.cell_volume * np.sum(f.density()[shell_mask]))


def require_resolved(f: Field, tolerance: Optional[float] = None, context: str = "field") -> float:
    """
    Boundary-mass guard: the field must be effectively compactly supported.

    Args:
        f: Field to check.
        tolerance: Largest accepted boundary mass (default from config).
        context: Label used in messages.

    Returns:
        The measured boundary mass.

    Raises:
        UnresolvedFieldError: If the boundary mass exceeds the tolerance.
    """
    tolerances = get_numerical_tolerances()
    limit = tolerances['boundary_mass'] if tolerance is None else tolerance
    measured = boundary_mass(f)
    if not measured <= limit:
        raise UnresolvedFieldError(
            f"{context} is not resolved: boundary mass {measured:.3e} exceeds {limit:.1e}",
            boundary_mass=measured,
        )
    if measured > limit * tolerances['boundary_warning_fraction']:
        logger.warning(f"{context}: boundary mass {measured:.3e} close to limit {limit:.1e}")
    return measured
