"""
Precomputed tables for one linear substep exp(-i dt (p+A)^2) at fixed (B, dt, grid).

Two fast factorizations of the 2D Mehler operator are available:

    chirp-z      M f(x) = P e^{i c |x|^2} * F[e^{i c |y|^2} f(R(-Bt) y)](s x)
                 with c = (B/4) cot(Bt), s = B/(4 pi sin Bt), P = B/(4 pi i sin Bt),
                 the Fourier sum evaluated on the scaled lattice by chirp-z.
    split-chirp  M(t) = Rot(Bt) e^{-i a |x|^2} e^{i b Delta} e^{-i a |x|^2}
                 with a = (B/4) tan(Bt/2), b = sin(Bt)/B.

The chirp-z path needs the kernel to be sampled without aliasing, which holds
when (|B|/2)(|cot Bt| + 1/|sin Bt|) L h < pi. The split-chirp path is accurate
for every |Bt| <= pi/4 including Bt -> 0. For B = 0 the plan is the free step.

Plans are immutable and safe to share between threads.

Example:
    >>> plan = build_plan(grid, B=2.0, t=0.1, method="split-chirp")
    >>> evolved = plan.apply(field.values)
"""

import math
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Optional

import numpy as np

from config import get_propagator_config
from errors import ConfigError, SingularTimeError
from field_grid.grid import Grid
from field_grid.transforms import fourier_multiply
from propagators.spectral_ops import (
    ScaledFourierSum,
    ShearRotation,
    build_rotation,
    build_scaled_fourier_sum,
    free_symbol,
    transverse_free_symbol,
)

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


PLAN_METHODS = ("auto", "chirp-z", "split-chirp")


def chirp_sampling_ok(grid: Grid, B: float, t: float) -> bool:
    """
    Whether the chirp-z factorization samples the Mehler kernel without aliasing.

    Args:
        grid: Target grid.
        B: Field strength.
        t: Substep duration.

    Returns:
        True when (|B|/2)(|cot Bt| + 1/|sin Bt|) L h < pi.
    """
    angle = B * t
    sin_angle = math.sin(angle)
    if sin_angle == 0.0:
        return False
    spread = 0.5 * abs(B) * (abs(math.cos(angle) / sin_angle) + 1.0 / abs(sin_angle))
    return spread * grid.L * grid.h < math.pi


class PropagatorPlan(ABC):
    """
    One linear substep on a fixed grid.

    Attributes:
        grid: Grid the plan was built for.
        B: Field strength.
        t: Substep duration.
        method: 'free', 'chirp-z' or 'split-chirp'.
    """

    method: str = ""

    def __init__(self, grid: Grid, B: float, t: float) -> None:
        self.grid = grid
        self.B = float(B)
        self.t = float(t)
        self.angle = self.B * self.t
        self._axial_symbol: Optional[np.ndarray] = (
            free_symbol(grid, self.t, (2,)) if grid.dim == 3 else None
        )

    @abstractmethod
    def apply_transverse(self, values: np.ndarray) -> np.ndarray:
        """Apply the 2D magnetic operator on the (x1, x2) planes."""
        pass

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply the full substep: transverse operator, then e^{it d_3^2} in 3D."""
        evolved = self.apply_transverse(values)
        if self._axial_symbol is not None:
            evolved = fourier_multiply(evolved, self._axial_symbol, axes=(2,))
        return evolved

    def __repr__(self) -> str:
        return f"{type(self).__name__}(B={self.B}, t={self.t}, n={self.grid.n}, dim={self.grid.dim})"


class FreePlan(PropagatorPlan):
    """B = 0: the transverse step is the free propagator e^{it(d_1^2 + d_2^2)}."""

    method = "free"

    def __init__(self, grid: Grid, B: float, t: float) -> None:
        super().__init__(grid, B, t)
        self._symbol = transverse_free_symbol(grid, self.t)

    def apply_transverse(self, values: np.ndarray) -> np.ndarray:
        return fourier_multiply(values, self._symbol, axes=(0, 1))


class SplitChirpPlan(PropagatorPlan):
    """Rotation by Bt composed with the lens / free / lens factorization."""

    method = "split-chirp"

    def __init__(self, grid: Grid, B: float, t: float) -> None:
        super().__init__(grid, B, t)
        lens_strength = 0.25 * self.B * math.tan(0.5 * self.angle)
        free_duration = math.sin(self.angle) / self.B
        self.rotation: ShearRotation = build_rotation(grid, self.angle)
        self._lens = np.exp(-1j * lens_strength * self._transverse(grid.rho_squared))
        self._symbol = transverse_free_symbol(grid, free_duration)

    def _transverse(self, table: np.ndarray) -> np.ndarray:
        if self.grid.dim == 2:
            return table
        return table[:, :, :1]

    def apply_transverse(self, values: np.ndarray) -> np.ndarray:
        evolved = self.rotation(values) * self._lens
        evolved = fourier_multiply(evolved, self._symbol, axes=(0, 1))
        return evolved * self._lens


class ChirpZPlan(PropagatorPlan):
    """Rotation, input chirp, scaled Fourier sum, output chirp and prefactor."""

    method = "chirp-z"

    def __init__(self, grid: Grid, B: float, t: float) -> None:
        super().__init__(grid, B, t)
        sin_angle = math.sin(self.angle)
        chirp_strength = 0.25 * self.B * math.cos(self.angle) / sin_angle
        prefactor = self.B / (4j * math.pi * sin_angle)
        rho_sq = grid.rho_squared if grid.dim == 2 else grid.rho_squared[:, :, :1]
        self.rotation: ShearRotation = build_rotation(grid, self.angle)
        self.sampling_ok = chirp_sampling_ok(grid, self.B, self.t)
        self._chirp = np.exp(1j * chirp_strength * rho_sq)
        self._fourier_sum: ScaledFourierSum = build_scaled_fourier_sum(
            grid, self.B / (4.0 * math.pi * sin_angle)
        )
        self._output = prefactor * self._chirp
        if not self.sampling_ok:
            logger.warning(
                f"chirp-z plan B={self.B} t={self.t} undersamples the kernel on n={grid.n}, L={grid.L}"
            )

    def apply_transverse(self, values: np.ndarray) -> np.ndarray:
        g = self._chirp * self.rotation(values)
        return self._output * self._fourier_sum(g)


def _check_substep(B: float, t: float) -> None:
    settings = get_propagator_config()
    angle = B * t
    if abs(angle) > float(settings['max_substep_angle']) * (1.0 + 1e-12):
        raise ConfigError(
            f"Plan angle |B t| = {abs(angle):.6g} exceeds the substep cap {settings['max_substep_angle']:.6g}",
            key="dt",
        )
    if B != 0.0 and abs(math.sin(angle)) < float(settings['singular_margin']):
        raise SingularTimeError(f"sin(B t) vanishes for B={B}, t={t}", angle=angle)


def build_plan(grid: Grid, B: float, t: float, method: str = "auto") -> PropagatorPlan:
    """
    Build the tables for one substep.

    Args:
        grid: Target grid.
        B: Field strength (any sign; 0 selects the free plan).
        t: Substep duration, with |B t| <= pi/4.
        method: 'chirp-z', 'split-chirp', or 'auto' (chirp-z when its sampling
            condition holds, split-chirp otherwise).

    Returns:
        An immutable PropagatorPlan.

    Raises:
        ConfigError: If the method is unknown or |B t| exceeds the cap.
        SingularTimeError: If sin(B t) is numerically zero for B != 0.
    """
    if method not in PLAN_METHODS:
        raise ConfigError(f"Unknown propagator method {method!r}; expected one of {PLAN_METHODS}",
                          key="propagator")
    B = float(B)
    t = float(t)
    if B == 0.0:
        return FreePlan(grid, B, t)
    _check_substep(B, t)
    if method == "auto":
        method = "chirp-z" if chirp_sampling_ok(grid, B, t) else "split-chirp"
    plan_class = ChirpZPlan if method == "chirp-z" else SplitChirpPlan
    plan = plan_class(grid, B, t)
    logger.debug(f"Built {plan!r}")
    return plan


@lru_cache(maxsize=64)
def cached_plan(grid: Grid, B: float, t: float, method: str) -> PropagatorPlan:
    """build_plan memoized on (grid, B, t, method); plans are immutable."""
    return build_plan(grid, B, t, method)
