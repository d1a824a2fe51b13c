"""
The 2D Mehler operator M(t) = exp(-it(p+A)^2), A = B x_perp/2.

Kernel (forward convention, the one every propagator in this package uses):

    K(x, y, t) = B/(4 pi i sin Bt) * exp{(iB/4)(cot(Bt)|x-y|^2 + 2 x^y)},
    x^y = x1 y2 - x2 y1.

It reduces to the free kernel (4 pi i t)^{-1} e^{i|x-y|^2/4t} as B -> 0 and
gives the lowest Landau level e^{-B rho^2/4} the phase e^{-iBt}. The
"time-reversed" convention B/(4 pi sin Bt) * exp{(B/4i)(cot(Bt)|x-y|^2 - 2 x^y)}
equals -i K(x, y, -t); it is provided for comparison only.

Identities checked by the tests:
    K(x, y, -t) = conj K(y, x, t)
    K_{-B}(x, y, t) = K_B(y, x, t)
"""

import math
from typing import Optional

import numpy as np

from config import KERNEL_CONVENTIONS, get_propagator_config
from errors import GridMismatchError, PlanMismatchError, SingularTimeError
from field_grid.fields import ScalarField
from propagators.propagator_plan import PropagatorPlan

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def mehler_kernel_value(x, y, t: float, B: float, convention: str = "forward"):
    """
    Evaluate the Mehler kernel.

    Args:
        x: Point(s) with trailing axis of length 2.
        y: Point(s) broadcastable against x.
        t: Time.
        B: Field strength.
        convention: 'forward' or 'time-reversed'.

    Returns:
        Complex kernel value(s).

    Raises:
        SingularTimeError: If |sin(Bt)| is below the singular margin.
        ValueError: On an unknown convention.

    Example:
        >>> abs(mehler_kernel_value((0.0, 0.0), (0.0, 0.0), 0.5, 1.0))  # 1/(4 pi sin 0.5)
        0.1659...
    """
    if convention not in KERNEL_CONVENTIONS:
        raise ValueError(f"Unknown kernel convention {convention!r}; expected one of {KERNEL_CONVENTIONS}")
    angle = B * t
    sin_angle = math.sin(angle)
    if abs(sin_angle) < float(get_propagator_config()['singular_margin']):
        raise SingularTimeError(f"Mehler kernel is singular at B t = {angle}", angle=angle)
    cot_angle = math.cos(angle) / sin_angle

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dist_sq = (x[..., 0] - y[..., 0]) ** 2 + (x[..., 1] - y[..., 1]) ** 2
    wedge = x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0]

    if convention == "forward":
        value = B / (4j * math.pi * sin_angle) * np.exp(0.25j * B * (cot_angle * dist_sq + 2.0 * wedge))
    else:
        value = B / (4.0 * math.pi * sin_angle) * np.exp(-0.25j * B * (cot_angle * dist_sq - 2.0 * wedge))
    return value[()] if np.ndim(value) == 0 else value


def apply_mehler_dense(f: ScalarField, t: float, B: float,
                       convention: str = "forward",
                       block_rows: Optional[int] = None) -> ScalarField:
    """
    Reference O(N^4) kernel summation (M f)(x) = h^2 sum_y K(x, y, t) f(y).

    Args:
        f: Field on a 2D grid.
        t: Time.
        B: Field strength.
        convention: Kernel convention.
        block_rows: Output points evaluated per block (default from config).

    Returns:
        Evolved field.

    Raises:
        GridMismatchError: If the grid is not 2D.
        SingularTimeError: If sin(Bt) vanishes.
    """
    grid = f.grid
    if grid.dim != 2:
        raise GridMismatchError("The dense Mehler oracle is defined on 2D grids only")
    rows = block_rows or int(get_propagator_config()['dense_block_rows'])

    points = np.stack([c.ravel() for c in grid.coordinates], axis=-1)
    source = f.values.ravel()
    result = np.empty(grid.size, dtype=np.complex128)
    for start in range(0, grid.size, rows):
        stop = min(start + rows, grid.size)
        kernel = mehler_kernel_value(points[start:stop, None, :], points[None, :, :], t, B, convention)
        result[start:stop] = grid.cell_volume * (kernel @ source)
    logger.debug(f"Dense Mehler matvec done: n={grid.n}, B={B}, t={t}")
    return ScalarField(grid, result.reshape(grid.shape))


def apply_mehler_fast(f: ScalarField, plan: PropagatorPlan) -> ScalarField:
    """
    Apply M(t) through a precomputed plan (planes x3 = const in 3D).

    Args:
        f: Field on the plan's grid.
        plan: Plan built for (B, t, grid).

    Returns:
        Evolved field.

    Raises:
        PlanMismatchError: If the plan was built for another grid.
    """
    if plan.grid != f.grid:
        raise PlanMismatchError(f"Plan grid {plan.grid} does not match field grid {f.grid}")
    return ScalarField(f.grid, plan.apply_transverse(f.values))
