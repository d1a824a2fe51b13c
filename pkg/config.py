"""
Global configuration for the magnetic NLS simulator.

This module contains the numerical defaults used throughout the application:
grid and run parameters, blow-up detection thresholds, consistency tolerances,
propagator settings and Strichartz quadrature options.
"""

import math
import os
from typing import Dict, List, Optional, Union


# Type aliases for better readability
ConfigDict = Dict[str, Union[str, int, float, bool]]
ToleranceDict = Dict[str, float]


DEFAULT_GRID_CONFIG: ConfigDict = {
    'dim': 2,
    'n': 64,
    'L': 8.0,
    'min_points': 8,
}
"""
Default grid parameters.

Contains:
    dim: Space dimension (2 or 3)
    n: Points per axis (power of two)
    L: Half-width of the periodic box [-L, L)^dim
    min_points: Smallest accepted n
"""


DEFAULT_SIMULATION_CONFIG: ConfigDict = {
    'p': 3.0,
    'mu': -1.0,
    'B': 2.0,
    'dt': 1e-3,
    't_end': 1.0,
    'snapshot_stride': 0,   # 0 disables snapshots
    'observable_stride': 10,
    'adaptive': True,
    'max_dt_halvings': 12,
    'equation': 'scalar',
}
"""
Default time-stepping parameters.

Contains:
    p: Nonlinearity power (> 1)
    mu: Coupling (negative focusing, positive defocusing)
    B: Uniform field strength
    dt: Base Strang step
    t_end: Final time
    snapshot_stride: Steps between field snapshots (0 disables them)
    observable_stride: Steps between observable rows
    adaptive: Halve dt whenever the kinetic energy doubles
    max_dt_halvings: Upper bound on the number of halvings
    equation: 'scalar' (magnetic NLS) or 'pauli' (spinor)
"""


BLOWUP_THRESHOLDS: ToleranceDict = {
    'kinetic_ratio': 1e6,
    'variance_floor': 1e-4,
}
"""
Blow-up detection policy.

Contains:
    kinetic_ratio: Trigger when T_S(t)/T_S(0) exceeds this value
    variance_floor: Trigger when g(t) < variance_floor * g(0)
"""


NUMERICAL_TOLERANCES: ToleranceDict = {
    'boundary_mass': 1e-12,
    'boundary_warning_fraction': 1e-2,
    'dual_form_relative': 1e-10,
    'finite_check_scale': 1e300,
    'diamagnetic_constant': 1.0,
}
"""
Tolerances for guards and internal consistency checks.

Contains:
    boundary_mass: Largest boundary-shell mass accepted for a resolved field
    boundary_warning_fraction: Fraction of boundary_mass above which a warning is logged
    dual_form_relative: Relative agreement required between dual observable forms
    finite_check_scale: Magnitude treated as overflow when screening rows
    diamagnetic_constant: C in the slack C h^2 max|psi| allowed for the diamagnetic check
"""


PROPAGATOR_CONFIG: Dict[str, Union[str, float]] = {
    'method': 'split-chirp',
    'max_substep_angle': math.pi / 4,
    'singular_margin': 1e-8,
    'dense_block_rows': 256,
}
"""
Linear propagator settings.

Contains:
    method: Fast path used by apply_us ('split-chirp' or 'chirp-z')
    max_substep_angle: Largest |B dt| of a single plan
    singular_margin: Smallest accepted |sin(B t)|
    dense_block_rows: Output rows evaluated per block by the dense kernel oracle
"""


STRICHARTZ_CONFIG: Dict[str, Union[int, float]] = {
    'nodes': 64,
    'free_window_scale': 40.0,
    'boundary_mass': 1e-10,
}
"""
Strichartz laboratory settings.

Contains:
    nodes: Gauss-Legendre nodes per time interval
    free_window_scale: Free-side window T in units of the dispersive time sigma^2/2
    boundary_mass: Boundary-mass guard applied at every quadrature node
"""


KERNEL_CONVENTIONS: List[str] = ["forward", "time-reversed"]
"""
Mehler kernel conventions accepted by mehler_kernel_value.

"forward" is the kernel of exp(-it(p+A)^2); "time-reversed" is -i times the
kernel at -t, the expression commonly printed in the literature.
"""


THREADS_ENV_VAR = "MAGNLS_THREADS"


def get_grid_config() -> ConfigDict:
    """
    Get the default grid configuration.

    Returns:
        Dictionary containing grid parameters.
    """
    return DEFAULT_GRID_CONFIG.copy()


def get_simulation_config() -> ConfigDict:
    """
    Get the default simulation configuration.

    Returns:
        Dictionary containing time-stepping parameters.
    """
    return DEFAULT_SIMULATION_CONFIG.copy()


def get_blowup_thresholds() -> ToleranceDict:
    """
    Get the default blow-up detection thresholds.

    Returns:
        Dictionary with kinetic_ratio and variance_floor.
    """
    return BLOWUP_THRESHOLDS.copy()


def get_numerical_tolerances() -> ToleranceDict:
    """
    Get guard and consistency tolerances.

    Returns:
        Dictionary of tolerances.
    """
    return NUMERICAL_TOLERANCES.copy()


def get_propagator_config() -> Dict[str, Union[str, float]]:
    """
    Get the linear propagator settings.

    Returns:
        Dictionary of propagator settings.
    """
    return PROPAGATOR_CONFIG.copy()


def get_strichartz_config() -> Dict[str, Union[int, float]]:
    """
    Get the Strichartz laboratory settings.

    Returns:
        Dictionary of quadrature settings.
    """
    return STRICHARTZ_CONFIG.copy()


def get_worker_count() -> Optional[int]:
    """
    Read the FFT worker cap from the MAGNLS_THREADS environment variable.

    Returns:
        Positive worker count, or None when the variable is unset or invalid.
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return None
    try:
        workers = int(raw)
    except ValueError:
        return None
    return workers if workers > 0 else None


def validate_method(method: str) -> bool:
    """
    Check whether a fast propagator method name is known.

    Args:
        method: Method name to validate.

    Returns:
        True if the method is 'split-chirp' or 'chirp-z'.
    """
    return method in ("split-chirp", "chirp-z")
