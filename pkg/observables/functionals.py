"""
Scalar-field functionals of the magnetic NLS equation in the symmetric gauge.

Conventions: p = -i grad (spectral), A = (B/2) x_perp with x_perp = (-x2, x1, 0),
pi = p + A, L3 = x_perp . p = -i d_theta, rho^2 = x1^2 + x2^2.

    T_S = ||pi psi||^2
    E_S = T_S + (2 mu/(p+1)) ||psi||_{p+1}^{p+1}
    F_S = E_S - B Re<x_perp psi, pi psi> + (B^2/2) ||rho psi||^2
        = E_0 + (B^2/4) ||rho psi||^2,     E_0 = E_S at B = 0
    E_S - F_S = B <L3>
    g = (1/4) ||x psi||^2,   gdot = Re<x psi, pi psi>
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import get_numerical_tolerances
from errors import ConsistencyError
from field_grid.fields import ScalarField, lq_power
from field_grid.grid import Grid
from field_grid.transforms import spectral_derivative

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def vector_potential(grid: Grid, B: float) -> Tuple[np.ndarray, ...]:
    """Symmetric-gauge potential components A_j = (B/2) x_perp_j."""
    x1, x2 = grid.coordinates[0], grid.coordinates[1]
    components = [-0.5 * B * x2, 0.5 * B * x1]
    if grid.dim == 3:
        components.append(np.zeros(grid.shape))
    return tuple(components)


def x_perp(grid: Grid) -> Tuple[np.ndarray, ...]:
    x1, x2 = grid.coordinates[0], grid.coordinates[1]
    components = [-x2, x1]
    if grid.dim == 3:
        components.append(np.zeros(grid.shape))
    return tuple(components)


def momentum_components(f: ScalarField) -> Tuple[np.ndarray, ...]:
    """Spectral p_j psi for every axis."""
    return tuple(spectral_derivative(f.values, f.grid, axis) for axis in range(f.grid.dim))


def covariant_gradient(f: ScalarField, B: float) -> Tuple[np.ndarray, ...]:
    """
    Covariant momentum (p + A) psi, one array per axis.

    Args:
        f: Resolved scalar field.
        B: Field strength.

    Returns:
        Tuple of arrays pi_j psi.
    """
    potential = vector_potential(f.grid, B)
    return tuple(p_j + a_j * f.values for p_j, a_j in zip(momentum_components(f), potential))


def _integral(grid: Grid, density: np.ndarray) -> float:
    return float(grid.cell_volume * np.sum(density))


def _pairing(grid: Grid, left: np.ndarray, right: np.ndarray) -> complex:
    """<left, right> = h^dim sum conj(left) right."""
    return complex(grid.cell_volume * np.vdot(left, right))


def kinetic_s(f: ScalarField, B: float) -> float:
    """Magnetic kinetic energy T_S = ||(p+A) psi||^2."""
    return _integral(f.grid, sum(np.abs(c) ** 2 for c in covariant_gradient(f, B)))


def nonlinear_energy(f, mu: float, p: float) -> float:
    """Potential part (2 mu/(p+1)) ||psi||_{p+1}^{p+1} (scalar or spinor modulus)."""
    return 2.0 * mu / (p + 1.0) * lq_power(f, p + 1.0)


def energy_s(f: ScalarField, mu: float, p: float, B: float) -> float:
    """
    Total energy E_S = T_S + (2 mu/(p+1)) ||psi||_{p+1}^{p+1}.

    Args:
        f: Resolved scalar field.
        mu: Coupling.
        p: Nonlinearity power.
        B: Field strength.

    Returns:
        Energy value.
    """
    return kinetic_s(f, B) + nonlinear_energy(f, mu, p)


def rho_norm_sq(f) -> float:
    """||rho psi||^2 with rho the transverse radius."""
    return _integral(f.grid, f.grid.rho_squared * f.density())


def angular_momentum(f: ScalarField) -> float:
    """<L3> = Re<psi, (x1 p2 - x2 p1) psi>, computed spectrally."""
    x1, x2 = f.grid.coordinates[0], f.grid.coordinates[1]
    p1 = spectral_derivative(f.values, f.grid, 0)
    p2 = spectral_derivative(f.values, f.grid, 1)
    return _pairing(f.grid, f.values, x1 * p2 - x2 * p1).real


def cross_term_s(f: ScalarField, B: float, gradient: Optional[Tuple[np.ndarray, ...]] = None) -> float:
    """Re<x_perp psi, (p+A) psi>."""
    pi_psi = covariant_gradient(f, B) if gradient is None else gradient
    return sum(_pairing(f.grid, xp * f.values, c).real for xp, c in zip(x_perp(f.grid), pi_psi))


@dataclass(frozen=True)
class FunctionalForms:
    """Two independently computed values of the same functional."""

    definition: float
    reduced: float

    @property
    def gap(self) -> float:
        return abs(self.definition - self.reduced)


def require_agreement(name: str, forms: FunctionalForms, scale: float,
                       tolerance: Optional[float]) -> None:
    limit = get_numerical_tolerances()['dual_form_relative'] if tolerance is None else tolerance
    reference = max(abs(forms.definition), abs(forms.reduced), scale)
    if forms.gap > limit * reference:
        raise ConsistencyError(
            f"{name} forms disagree: {forms.definition!r} vs {forms.reduced!r} "
            f"(gap {forms.gap:.3e}, limit {limit:.1e} x {reference:.3e})",
            first=forms.definition, second=forms.reduced,
        )


def f_s_forms(f: ScalarField, mu: float, p: float, B: float) -> Tuple[FunctionalForms, float]:
    """
    F_S as defined and via the symmetric-gauge reduction.

    Returns:
        (forms, scale) where scale sums the magnitudes of the constituent terms.
    """
    gradient = covariant_gradient(f, B)
    kinetic = _integral(f.grid, sum(np.abs(c) ** 2 for c in gradient))
    potential = nonlinear_energy(f, mu, p)
    rho_sq = rho_norm_sq(f)
    cross = cross_term_s(f, B, gradient)
    definition = kinetic + potential - B * cross + 0.5 * B * B * rho_sq

    free_kinetic = _integral(f.grid, sum(np.abs(c) ** 2 for c in momentum_components(f)))
    reduced = free_kinetic + potential + 0.25 * B * B * rho_sq
    scale = kinetic + abs(potential) + abs(B * cross) + B * B * rho_sq
    return FunctionalForms(definition, reduced), scale


def f_s(f: ScalarField, mu: float, p: float, B: float, tolerance: Optional[float] = None) -> float:
    """
    Conserved blow-up functional F_S, checked in two forms.

    Args:
        f: Resolved scalar field.
        mu: Coupling.
        p: Nonlinearity power.
        B: Field strength.
        tolerance: Relative agreement required (default from config).

    Returns:
        F_S (definition form).

    Raises:
        ConsistencyError: If the definition and reduced forms disagree.
    """
    forms, scale = f_s_forms(f, mu, p, B)
    require_agreement("F_S", forms, scale, tolerance)
    return forms.definition


def variance_g(f) -> float:
    """Variance g = (1/4) ||x psi||^2 (all coordinates)."""
    return 0.25 * _integral(f.grid, f.grid.radius_squared * f.density())


def gdot(f: ScalarField, B: float, gradient: Optional[Tuple[np.ndarray, ...]] = None) -> float:
    """First variance derivative Re<x psi, (p+A) psi>."""
    pi_psi = covariant_gradient(f, B) if gradient is None else gradient
    return sum(_pairing(f.grid, x * f.values, c).real for x, c in zip(f.grid.coordinates, pi_psi))


def gdot_dilation(f: ScalarField, B: float) -> float:
    """
    First variance derivative in dilation form Re<(D + x.A) psi, psi>.

    D = (x.p + p.x)/2 is built from both operator orderings, so this form
    shares no intermediate arrays with gdot.
    """
    grid = f.grid
    dilated = np.zeros(grid.shape, dtype=np.complex128)
    for axis, x in enumerate(grid.coordinates):
        dilated += 0.5 * (x * spectral_derivative(f.values, grid, axis)
                          + spectral_derivative(x * f.values, grid, axis))
    x_dot_a = sum(x * a for x, a in zip(grid.coordinates, vector_potential(grid, B)))
    return _pairing(grid, dilated + x_dot_a * f.values, f.values).real


def virial_rhs_s(f: ScalarField, mu: float, p: float, B: float, F_S0: float) -> float:
    """
    Second variance derivative from the conserved functional.

    2 F_S0 + mu d (p - 1 - 4/d)/(p+1) ||psi||_{p+1}^{p+1} - B^2 ||rho psi||^2

    Args:
        f: Current field.
        mu: Coupling.
        p: Nonlinearity power.
        B: Field strength.
        F_S0: F_S of the initial data.

    Returns:
        Right-hand side value.
    """
    d = f.grid.dim
    middle = mu * d * (p - 1.0 - 4.0 / d) / (p + 1.0) * lq_power(f, p + 1.0) if mu != 0.0 else 0.0
    return 2.0 * F_S0 + middle - B * B * rho_norm_sq(f)


def virial_rhs_instantaneous(f: ScalarField, mu: float, p: float, B: float) -> float:
    """Second variance derivative from the current state: 2T_S + mu d (p-1)/(p+1) ||psi||^{p+1} - 2B Re<x_perp psi, pi psi>."""
    gradient = covariant_gradient(f, B)
    kinetic = _integral(f.grid, sum(np.abs(c) ** 2 for c in gradient))
    d = f.grid.dim
    middle = mu * d * (p - 1.0) / (p + 1.0) * lq_power(f, p + 1.0)
    return 2.0 * kinetic + middle - 2.0 * B * cross_term_s(f, B, gradient)


def apply_hamiltonian(f: ScalarField, B: float) -> ScalarField:
    """Discretized Landau Hamiltonian (p+A)^2 psi = sum_j pi_j (pi_j psi)."""
    grid = f.grid
    potential = vector_potential(grid, B)
    result = np.zeros(grid.shape, dtype=np.complex128)
    for axis, (first, a_j) in enumerate(zip(covariant_gradient(f, B), potential)):
        result += spectral_derivative(first, grid, axis) + a_j * first
    return ScalarField(grid, result)


def rayleigh_quotient(f: ScalarField, B: float) -> float:
    """<psi, (p+A)^2 psi> / <psi, psi> from the discretized Hamiltonian."""
    norm_sq = _pairing(f.grid, f.values, f.values).real
    return _pairing(f.grid, f.values, apply_hamiltonian(f, B).values).real / norm_sq


def diamagnetic_excess(f: ScalarField, B: float) -> float:
    """
    Largest violation of |grad|psi|| <= |(p+A) psi| at interior points.

    |psi| is differentiated by second-order centered differences; the
    covariant side is spectral. Negative values mean the bound holds with room.
    """
    grid = f.grid
    modulus = np.abs(f.values)
    grad_modulus_sq = sum(np.gradient(modulus, grid.h, axis=axis) ** 2 for axis in range(grid.dim))
    covariant_sq = sum(np.abs(c) ** 2 for c in covariant_gradient(f, B))
    interior = (slice(1, -1),) * grid.dim
    excess = np.sqrt(grad_modulus_sq[interior]) - np.sqrt(covariant_sq[interior])
    return float(np.max(excess))
