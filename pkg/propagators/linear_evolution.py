"""
Linear magnetic evolution: free propagator, U_S(t) and U_P(t).

apply_us splits any time into equal substeps with |B dt| <= pi/4 so that no
plan is ever built near a zero of sin(Bt), then composes cached plans.
"""

import math
from typing import Optional, Sequence

import numpy as np

from config import get_propagator_config, validate_method
from errors import ConfigError
from field_grid.fields import ScalarField, SpinorField
from field_grid.transforms import fourier_multiply
from propagators.propagator_plan import PropagatorPlan, cached_plan
from propagators.spectral_ops import free_symbol

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def free_propagator(f: ScalarField, t: float, axes: Optional[Sequence[int]] = None) -> ScalarField:
    """
    Free dispersive evolution e^{it sum_j d_j^2} along selected axes.

    Args:
        f: Field to evolve.
        t: Time.
        axes: Zero-based axes; None means all axes (full e^{it Delta}),
            (2,) gives the axial factor of the 3D factorization.

    Returns:
        Evolved field.
    """
    axes = tuple(range(f.grid.dim)) if axes is None else tuple(axes)
    if t == 0.0 or not axes:
        return f
    symbol = free_symbol(f.grid, t, axes)
    return f.map_components(lambda v: fourier_multiply(v, symbol, axes=axes))


def substep_count(t: float, B: float) -> int:
    """Smallest number of equal substeps with |B t / count| <= pi/4."""
    cap = float(get_propagator_config()['max_substep_angle'])
    return max(1, math.ceil(abs(B * t) / cap - 1e-12))


def linear_plan(grid, B: float, t: float, method: Optional[str] = None) -> tuple[PropagatorPlan, int]:
    """
    Plan and substep count for U_S(t) on a grid.

    Args:
        grid: Target grid.
        B: Field strength.
        t: Total time.
        method: Fast path, default from config.

    Returns:
        (plan for one substep, number of substeps).
    """
    method = method or str(get_propagator_config()['method'])
    if not validate_method(method) and method != "auto":
        raise ConfigError(f"Unknown propagator method {method!r}", key="propagator")
    count = substep_count(t, B)
    return cached_plan(grid, float(B), float(t) / count, method), count


def apply_us(f: ScalarField, t: float, B: float, method: Optional[str] = None) -> ScalarField:
    """
    Exact linear evolution U_S(t) = e^{it d_3^2} M(t).

    Args:
        f: Scalar field on a 2D or 3D grid.
        t: Time (any sign).
        B: Field strength (0 gives the free propagator).
        method: 'split-chirp' (default), 'chirp-z' or 'auto'.

    Returns:
        Evolved field.
    """
    if t == 0.0:
        return f
    plan, count = linear_plan(f.grid, B, t, method)
    values = f.values
    for _ in range(count):
        values = plan.apply(values)
    logger.debug(f"apply_us: B={B}, t={t}, {count} substep(s) via {plan.method}")
    return ScalarField(f.grid, values)


def zeeman_phases(t: float, B: float) -> tuple[complex, complex]:
    """Spin phases (e^{-iBt}, e^{+iBt}) of e^{-iBt sigma_3}."""
    return complex(np.exp(-1j * B * t)), complex(np.exp(1j * B * t))


def apply_up(f: SpinorField, t: float, B: float, method: Optional[str] = None) -> SpinorField:
    """
    Pauli evolution U_P(t) = e^{-iBt sigma_3} U_S(t).

    Args:
        f: Spinor field.
        t: Time.
        B: Field strength.
        method: Fast path for U_S.

    Returns:
        Evolved spinor.
    """
    up = apply_us(f.component_field(0), t, B, method).values
    down = apply_us(f.component_field(1), t, B, method).values
    phase_up, phase_down = zeeman_phases(t, B)
    return SpinorField(f.grid, phase_up * up, phase_down * down)
