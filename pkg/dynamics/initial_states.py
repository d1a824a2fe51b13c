"""
Initial-state menu for evolutions and tests.

gaussian            Laguerre-Gaussian packet ((z - z_c)/sigma)^{|m|} e^{-|x - c|^2/(2 sigma^2)} e^{i k.x}
lowest-landau       e^{-|B| rho^2/4} (times a Gaussian in x3 for 3D grids)
landau              rho^{|m|} e^{i m theta} e^{-|B| rho^2/4}, energy |B|(|m| + 1) + B m
vortex-ring         the compact charge -1 ring u(rho) e^{-i theta}
file                a snapshot written by field_grid.snapshot_io
random-bandlimited  seeded random modes inside a frequency disc under a Gaussian envelope

Every generator normalizes to the requested L^2 mass on the grid.
"""

import math
from typing import Optional, Sequence

import numpy as np

from dynamics.sim_config import InitialStateSpec, SimConfig
from errors import ConfigError
from field_grid.fields import Field, ScalarField, SpinorField, mass
from field_grid.grid import Grid
from field_grid.snapshot_io import read_snapshot
from field_grid.transforms import centered_inverse
from theory.vortex_ring import vortex_ring_state

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def _padded(values: Sequence[float], dim: int) -> np.ndarray:
    padded = np.zeros(dim)
    given = np.asarray(values, dtype=float)[:dim]
    padded[:given.size] = given
    return padded


def normalized(grid: Grid, values: np.ndarray, target_mass: float = 1.0) -> ScalarField:
    """Scale samples to a given discrete L^2 mass."""
    field = ScalarField(grid, values)
    current = mass(field)
    if not current > 0.0:
        raise ConfigError("Initial state vanishes on the grid", key="initial")
    return ScalarField(grid, values * math.sqrt(target_mass / current))


def charge_factor(x1: np.ndarray, x2: np.ndarray, charge: int, scale: float = 1.0) -> np.ndarray:
    """((x1 + i sgn(m) x2)/scale)^{|m|} = (rho/scale)^{|m|} e^{i m theta}."""
    if charge == 0:
        return np.ones_like(x1, dtype=np.complex128)
    z = (x1 + 1j * math.copysign(1.0, charge) * x2) / scale
    return z ** abs(charge)


def gaussian_state(grid: Grid, width: float = 1.0, center: Sequence[float] = (0.0, 0.0),
                   momentum: Sequence[float] = (0.0, 0.0), charge: int = 0,
                   target_mass: float = 1.0) -> ScalarField:
    """
    Gaussian packet with optional momentum and angular charge.

    Args:
        grid: Target grid.
        width: sigma in e^{-|x - c|^2 / (2 sigma^2)}.
        center: Packet center.
        momentum: Wave vector k of the factor e^{i k.x}.
        charge: Angular charge m about the packet center.
        target_mass: L^2 mass after normalization.

    Returns:
        Normalized field.
    """
    c = _padded(center, grid.dim)
    k = _padded(momentum, grid.dim)
    shifted = [x - c_j for x, c_j in zip(grid.coordinates, c)]
    radius_sq = sum(s ** 2 for s in shifted)
    values = np.exp(-radius_sq / (2.0 * width ** 2)).astype(np.complex128)
    values *= np.exp(1j * sum(k_j * x for k_j, x in zip(k, grid.coordinates)))
    values *= charge_factor(shifted[0], shifted[1], charge, width)
    return normalized(grid, values, target_mass)


def landau_state(grid: Grid, B: float, m: int = 0, target_mass: float = 1.0,
                 axial_width: float = 1.0) -> ScalarField:
    """
    Lowest radial Landau trial state with angular charge m.

    Eigenstate of (p+A)^2 with eigenvalue |B|(|m| + 1) + B m in 2D.

    Raises:
        ConfigError: If B is zero.
    """
    if B == 0.0:
        raise ConfigError("Landau states need B != 0", key="B")
    x1, x2 = grid.coordinates[0], grid.coordinates[1]
    values = np.exp(-0.25 * abs(B) * grid.rho_squared) * charge_factor(x1, x2, m)
    if grid.dim == 3:
        values = values * np.exp(-grid.coordinates[2] ** 2 / (2.0 * axial_width ** 2))
    return normalized(grid, values, target_mass)


def landau_energy(B: float, m: int) -> float:
    """Eigenvalue of (p+A)^2 on landau_state(grid, B, m) in 2D."""
    return abs(B) * (abs(m) + 1) + B * m


def random_bandlimited_state(grid: Grid, seed: int, cutoff: float = 0.25, envelope: float = 1.0,
                             target_mass: float = 1.0) -> ScalarField:
    """
    Seeded random field: Gaussian-distributed complex modes with |k| <= cutoff
    (cycles per unit length) multiplied by e^{-|x|^2/(2 envelope^2)}.

    Args:
        grid: Target grid.
        seed: numpy Generator seed; identical seeds give identical fields.
        cutoff: Radius of the frequency disc.
        envelope: Width of the localizing Gaussian.
        target_mass: L^2 mass after normalization.

    Returns:
        Normalized field.
    """
    rng = np.random.default_rng(seed)
    frequencies = np.meshgrid(*([grid.frequency_axis] * grid.dim), indexing="ij")
    inside = sum(k ** 2 for k in frequencies) <= cutoff ** 2
    count = int(np.count_nonzero(inside))
    spectrum = np.zeros(grid.shape, dtype=np.complex128)
    spectrum[inside] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    carrier = centered_inverse(spectrum, grid)
    values = carrier * np.exp(-grid.radius_squared / (2.0 * envelope ** 2))
    return normalized(grid, values, target_mass)


def _file_state(config: SimConfig) -> Field:
    state = read_snapshot(config.initial.path)
    if state.grid != config.grid():
        raise ConfigError(f"Snapshot grid {state.grid} does not match the configured grid {config.grid()}",
                          key="initial.path")
    return state


def scalar_initial_state(config: SimConfig) -> ScalarField:
    """
    Build the scalar initial field described by config.initial.

    Raises:
        ConfigError: On unsupported combinations (e.g. a spinor file for a scalar run).
    """
    spec: InitialStateSpec = config.initial
    grid = config.grid()
    if spec.kind == "gaussian":
        return gaussian_state(grid, spec.width, spec.center, spec.momentum, spec.charge, spec.mass)
    if spec.kind == "lowest-landau":
        return landau_state(grid, config.B, 0, spec.mass, spec.width)
    if spec.kind == "landau":
        return landau_state(grid, config.B, spec.charge, spec.mass, spec.width)
    if spec.kind == "vortex-ring":
        if grid.dim != 2:
            raise ConfigError("The vortex-ring state is two-dimensional", key="initial.kind")
        state = vortex_ring_state(grid)
        return normalized(grid, state.values, spec.mass)
    if spec.kind == "random-bandlimited":
        return random_bandlimited_state(grid, config.seed, spec.cutoff, spec.envelope, spec.mass)
    state = _file_state(config)
    if not isinstance(state, ScalarField):
        raise ConfigError("A spinor snapshot cannot start a scalar run", key="initial.path")
    return state


def spinor_from_scalar(f: ScalarField, up: complex = 1.0, down: complex = 0.0) -> SpinorField:
    """
    Split a scalar field into (up psi, down psi) with weights normalized to
    |up|^2 + |down|^2 = 1, so the spinor keeps the scalar mass.
    """
    norm = math.hypot(abs(up), abs(down))
    if norm == 0.0:
        raise ConfigError("Spinor weights must not both vanish", key="spinor")
    return SpinorField(f.grid, (up / norm) * f.values, (down / norm) * f.values)


def initial_state(config: SimConfig) -> Field:
    """Initial field for the configured equation (scalar or Pauli)."""
    if config.equation == "pauli":
        if config.initial.kind == "file":
            state = _file_state(config)
            if isinstance(state, SpinorField):
                return state
        else:
            state = scalar_initial_state(config)
        return spinor_from_scalar(state, config.spinor.up, config.spinor.down)
    return scalar_initial_state(config)
