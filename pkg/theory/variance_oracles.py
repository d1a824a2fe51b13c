"""
Closed-form variance predictions and blow-up criteria.

For d = 2, p = 3 (and for linear runs) F_S conservation together with
||rho psi||^2 = 4g turns the virial identity into g'' + 4B^2 g = 2F_0, whose
solution is

    g(t) = F_0/(2B^2) + (g_0 - F_0/(2B^2)) cos(2Bt) + (gdot_0/(2B)) sin(2Bt).

The same formulas serve the Pauli equation with F_P in place of F_S.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from errors import ConfigError

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


class BlowupVerdict(Enum):
    """Outcome of a sufficient blow-up criterion."""

    BLOWUP = "blow-up"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class VarianceParams:
    """
    Initial data of the variance ODE.

    Attributes:
        F0: Conserved functional F_S (or F_P).
        B: Field strength (nonzero for the oscillatory form).
        g0: Initial variance, positive.
        gdot0: Initial variance derivative.
    """

    F0: float
    B: float
    g0: float
    gdot0: float

    def __post_init__(self) -> None:
        if not self.g0 > 0.0:
            raise ValueError(f"g0 must be positive, got {self.g0}")

    @property
    def mean(self) -> float:
        """Oscillation center F0/(2B^2)."""
        return self.F0 / (2.0 * self.B * self.B)

    def amplitude_phase(self) -> Tuple[float, float]:
        """(R, phi) with g(t) = mean + R cos(2Bt - phi)."""
        c1 = self.g0 - self.mean
        c2 = self.gdot0 / (2.0 * self.B)
        return math.hypot(c1, c2), math.atan2(c2, c1)


def _require_field(B: float) -> None:
    if B == 0.0:
        raise ConfigError("The oscillatory variance formula needs B != 0; use glassey_variance", key="B")


def exact_variance(params: VarianceParams, t: float) -> float:
    """
    Closed-form variance g(t).

    Raises:
        ConfigError: If B = 0.

    Example:
        >>> exact_variance(VarianceParams(F0=8.0, B=2.0, g0=1.0, gdot0=0.0), 0.3)
        1.0
    """
    _require_field(params.B)
    omega = 2.0 * params.B
    return (params.mean + (params.g0 - params.mean) * math.cos(omega * t)
            + params.gdot0 / omega * math.sin(omega * t))


def exact_variance_derivative(params: VarianceParams, t: float) -> float:
    _require_field(params.B)
    omega = 2.0 * params.B
    return -omega * (params.g0 - params.mean) * math.sin(omega * t) + params.gdot0 * math.cos(omega * t)


def glassey_variance(F0: float, g0: float, gdot0: float, t: float) -> float:
    """B = 0 limit g0 + gdot0 t + F0 t^2 of the closed form."""
    return g0 + gdot0 * t + F0 * t * t


def first_zero(params: VarianceParams) -> Optional[float]:
    """
    Smallest t > 0 with exact_variance(params, t) = 0.

    Uses g(t) = a + R cos(|omega| t - phi') with a = F0/(2B^2), omega = 2B
    (phi' = phi, or -phi when B < 0), so the zeros solve
    cos(|omega| t - phi') = -a/R.

    Returns:
        Time of the first zero, or None if g never vanishes (R <= a).
    """
    _require_field(params.B)
    a = params.mean
    R, phi = params.amplitude_phase()
    if not R > a:
        return None
    omega = 2.0 * abs(params.B)
    phase = phi if params.B > 0.0 else -phi
    ratio = max(-1.0, min(1.0, -a / R))
    offset = math.acos(ratio)
    two_pi = 2.0 * math.pi
    candidates = []
    for angle in (phase + offset, phase - offset):
        reduced = math.fmod(angle, two_pi)
        if reduced <= 0.0:
            reduced += two_pi
        candidates.append(reduced / omega)
    return min(candidates)


def blowup_sufficient(F0: float, gdot0: float, mu: float, p: float, d: int) -> BlowupVerdict:
    """
    Sufficient blow-up criterion for focusing, at least L^2-critical powers.

    Blow-up when F0 < 0, or F0 = 0 and gdot0 < 0, provided mu < 0 and
    1 + 4/d <= p (< 1 + 4/(d-2) in 3D).
    """
    critical = 1.0 + 4.0 / d
    hypotheses = mu < 0.0 and p >= critical and (d == 2 or p < 1.0 + 4.0 / (d - 2))
    if hypotheses and (F0 < 0.0 or (F0 == 0.0 and gdot0 < 0.0)):
        return BlowupVerdict.BLOWUP
    return BlowupVerdict.INCONCLUSIVE


def blowup_condition_p3_d2(F0: float, g0: float, gdot0: float, B: float) -> bool:
    """F0 g0 < B^2 (g0^2 + gdot0^2/(4 B^2)): the closed-form variance reaches zero."""
    _require_field(B)
    return F0 * g0 < B * B * (g0 * g0 + gdot0 * gdot0 / (4.0 * B * B))


def blowup_condition_rho_form(F0: float, rho_norm_sq: float, gdot0: float, B: float) -> bool:
    """F0 - (B^2/4)||rho psi0||^2 < gdot0^2 / ||rho psi0||^2 (same condition with ||rho psi0||^2 = 4 g0)."""
    return F0 - 0.25 * B * B * rho_norm_sq < gdot0 * gdot0 / rho_norm_sq


def blowup_condition_symmetric_gauge(E0: float, rho_norm_sq: float, gdot0: float) -> bool:
    """E_0 < gdot0^2 / ||rho psi0||^2, the rho form after F_S = E_0 + (B^2/4)||rho psi||^2."""
    return E0 < gdot0 * gdot0 / rho_norm_sq


@dataclass(frozen=True)
class BWindow:
    """Range |E0/<L3>| < B < B_max, where B_max is the largest field with F_S < 0."""

    B_min: float
    B_max: float
    feasible: bool

    @property
    def empty(self) -> bool:
        return not self.feasible


def b_window(E0: float, L3_exp: float, rho_norm_sq: float) -> BWindow:
    """
    Window |E0/<L3>| < B < 2 sqrt|E0| / ||rho psi0||.

    Args:
        E0: B = 0 energy, negative.
        L3_exp: Initial angular momentum (the analyzed branch has L3_exp < 0).
        rho_norm_sq: ||rho psi0||^2.

    Returns:
        BWindow; feasible iff sqrt|E0| ||rho psi0|| < 2 |<L3>|.

    Raises:
        ConfigError: If E0 >= 0, L3_exp = 0 or rho_norm_sq <= 0.
    """
    if not E0 < 0.0:
        raise ConfigError(f"The B-window needs E0 < 0, got {E0}", key="E0")
    if L3_exp == 0.0:
        raise ConfigError("The B-window needs a nonzero angular momentum", key="L3")
    if not rho_norm_sq > 0.0:
        raise ConfigError("The B-window needs a positive ||rho psi||^2", key="rho_norm_sq")
    rho_norm = math.sqrt(rho_norm_sq)
    B_min = abs(E0 / L3_exp)
    B_max = 2.0 * math.sqrt(abs(E0)) / rho_norm
    feasible = math.sqrt(abs(E0)) * rho_norm < 2.0 * abs(L3_exp)
    return BWindow(B_min, B_max, feasible)


def admissible(q: float, r: float, d: int) -> bool:
    """
    Schrodinger admissibility: q in [2, inf], 2/q = d(1/2 - 1/r), (q, r, d) != (2, inf, 2).

    Example:
        >>> admissible(4, 4, 2)
        True
    """
    if not q >= 2.0 or not r >= 2.0:
        return False
    inverse_q = 0.0 if math.isinf(q) else 1.0 / q
    inverse_r = 0.0 if math.isinf(r) else 1.0 / r
    if d == 2 and q == 2.0 and math.isinf(r):
        return False
    return math.isclose(2.0 * inverse_q, d * (0.5 - inverse_r), rel_tol=1e-12, abs_tol=1e-12)
