"""
Spinor functionals of the nonlinear Pauli equation.

Pauli matrices in the standard representation

    sigma1 = [[0, 1], [1, 0]]   sigma2 = [[0, -i], [i, 0]]   sigma3 = [[1, 0], [0, -1]]

In 2D sigma = (sigma1, sigma2) enters the kinetic form while the Zeeman phase
uses sigma3; in 3D sigma = (sigma1, sigma2, sigma3).

    T_P = ||sigma.(p+A) psi||^2 = T_S[psi1] + T_S[psi2] + B (||psi1||^2 - ||psi2||^2)
    E_P = T_P + (2 mu/(p+1)) || |psi| ||_{p+1}^{p+1}
    F_P = E_P - B Re<sigma.x_perp psi, sigma.(p+A) psi> + (B^2/2) ||rho psi||^2
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from field_grid.fields import ScalarField, SpinorField, lq_power
from field_grid.transforms import spectral_derivative
from observables.functionals import (
    FunctionalForms,
    covariant_gradient,
    cross_term_s,
    gdot,
    kinetic_s,
    momentum_components,
    nonlinear_energy,
    require_agreement,
    rho_norm_sq,
    x_perp,
)

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


SpinorPair = Tuple[np.ndarray, np.ndarray]

PAULI_MATRICES = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def apply_sigma(index: int, spinor: SpinorPair) -> SpinorPair:
    """Multiply a spinor (pair of arrays) by the Pauli matrix sigma_{index+1}."""
    matrix = PAULI_MATRICES[index]
    up, down = spinor
    return (matrix[0, 0] * up + matrix[0, 1] * down,
            matrix[1, 0] * up + matrix[1, 1] * down)


def sigma_dot(vector: Sequence[SpinorPair]) -> SpinorPair:
    """sigma . V for a vector of spinors V_j (one per kinetic axis)."""
    up = np.zeros_like(vector[0][0])
    down = np.zeros_like(vector[0][1])
    for index, spinor in enumerate(vector):
        term_up, term_down = apply_sigma(index, spinor)
        up = up + term_up
        down = down + term_down
    return up, down


def _pairing(f: SpinorField, left: SpinorPair, right: SpinorPair) -> complex:
    return complex(f.grid.cell_volume * (np.vdot(left[0], right[0]) + np.vdot(left[1], right[1])))


def _covariant_spinors(f: SpinorField, B: float) -> Tuple[SpinorPair, ...]:
    """(pi_j psi1, pi_j psi2) for every axis j."""
    up = covariant_gradient(f.component_field(0), B)
    down = covariant_gradient(f.component_field(1), B)
    return tuple(zip(up, down))


def spin_z(f: SpinorField) -> float:
    """<sigma3> = ||psi1||^2 - ||psi2||^2."""
    volume = f.grid.cell_volume
    return float(volume * (np.sum(np.abs(f.up) ** 2) - np.sum(np.abs(f.down) ** 2)))


def kinetic_p_forms(f: SpinorField, B: float) -> FunctionalForms:
    """T_P from the explicit Pauli matrices and from the (p+A)^2 + B sigma3 identity."""
    direct_up, direct_down = sigma_dot(_covariant_spinors(f, B))
    direct = float(f.grid.cell_volume * (np.sum(np.abs(direct_up) ** 2) + np.sum(np.abs(direct_down) ** 2)))
    identity = (kinetic_s(f.component_field(0), B) + kinetic_s(f.component_field(1), B)
                + B * spin_z(f))
    return FunctionalForms(direct, identity)


def kinetic_p(f: SpinorField, B: float, tolerance: Optional[float] = None) -> float:
    """
    Pauli kinetic energy T_P, checked in two forms.

    Args:
        f: Resolved spinor.
        B: Field strength.
        tolerance: Relative agreement required (default from config).

    Returns:
        T_P from the explicit Pauli matrices.

    Raises:
        ConsistencyError: If the matrix and identity forms disagree.
    """
    forms = kinetic_p_forms(f, B)
    scale = (kinetic_s(f.component_field(0), B) + kinetic_s(f.component_field(1), B)
             + abs(B * spin_z(f)))
    require_agreement("T_P", forms, scale, tolerance)
    return forms.definition


def energy_p(f: SpinorField, mu: float, p: float, B: float, tolerance: Optional[float] = None) -> float:
    """Pauli energy E_P = T_P + (2 mu/(p+1)) || |psi| ||_{p+1}^{p+1}."""
    return kinetic_p(f, B, tolerance) + nonlinear_energy(f, mu, p)


def pauli_cross_term(f: SpinorField, B: float) -> float:
    """
    Re<sigma.x_perp psi, sigma.(p+A) psi> with explicit Pauli matrices.

    In 2D only the transverse components of x_perp and pi enter.
    """
    kinetic_axes = f.grid.dim
    positions = x_perp(f.grid)[:kinetic_axes]
    left = sigma_dot([(x * f.up, x * f.down) for x in positions])
    right = sigma_dot(_covariant_spinors(f, B))
    return _pairing(f, left, right).real


def transverse_spin_orbit(f: SpinorField) -> float:
    """
    Re<psi, i(sigma1 x1 + sigma2 x2) p3 psi>, the part of the Pauli cross
    term that survives the sigma.x_perp expansion in 3D; zero in 2D.
    """
    if f.grid.dim == 2:
        return 0.0
    x1, x2 = f.grid.coordinates[0], f.grid.coordinates[1]
    p3 = (spectral_derivative(f.up, f.grid, 2), spectral_derivative(f.down, f.grid, 2))
    first = apply_sigma(0, (x1 * p3[0], x1 * p3[1]))
    second = apply_sigma(1, (x2 * p3[0], x2 * p3[1]))
    coupled = (1j * (first[0] + second[0]), 1j * (first[1] + second[1]))
    return _pairing(f, (f.up, f.down), coupled).real


def f_p_forms(f: SpinorField, mu: float, p: float, B: float) -> Tuple[FunctionalForms, float]:
    """
    F_P as defined and via the sigma.x_perp expansion.

    The expansion cancels the Zeeman contribution against the spin part of
    the cross term, leaving sum_c ||p psi_c||^2 + nonlinear + (B^2/4)||rho psi||^2
    (minus B times the 3D transverse spin-orbit term).
    """
    kinetic = kinetic_p_forms(f, B).definition
    potential = nonlinear_energy(f, mu, p)
    rho_sq = rho_norm_sq(f)
    cross = pauli_cross_term(f, B)
    definition = kinetic + potential - B * cross + 0.5 * B * B * rho_sq

    free_kinetic = sum(
        f.grid.cell_volume * float(np.sum(np.abs(c) ** 2))
        for index in (0, 1)
        for c in momentum_components(f.component_field(index))
    )
    spin_orbit = transverse_spin_orbit(f)
    reduced = free_kinetic + potential + 0.25 * B * B * rho_sq - B * spin_orbit
    scale = abs(kinetic) + abs(potential) + abs(B * cross) + B * B * rho_sq
    return FunctionalForms(definition, reduced), scale


def f_p(f: SpinorField, mu: float, p: float, B: float, tolerance: Optional[float] = None) -> float:
    """
    Conserved Pauli blow-up functional F_P, checked in two forms.

    Raises:
        ConsistencyError: If the definition and expanded forms disagree.
    """
    forms, scale = f_p_forms(f, mu, p, B)
    require_agreement("F_P", forms, scale, tolerance)
    return forms.definition


def pauli_gdot(f: SpinorField, B: float) -> float:
    """Re<x psi, (p+A) psi> summed over both components."""
    return sum(gdot(f.component_field(index), B) for index in (0, 1))


def scalar_sums(f: SpinorField, mu: float, p: float, B: float) -> dict:
    """Scalar functionals of a spinor: componentwise sums with the spinor-modulus nonlinearity."""
    components = [f.component_field(index) for index in (0, 1)]
    kinetic = sum(kinetic_s(c, B) for c in components)
    cross = sum(cross_term_s(c, B) for c in components)
    energy = kinetic + nonlinear_energy(f, mu, p)
    return {
        'T_S': kinetic,
        'E_S': energy,
        'F_S': energy - B * cross + 0.5 * B * B * rho_norm_sq(f),
    }


def pauli_virial_instantaneous(f: SpinorField, mu: float, p: float, B: float) -> float:
    """Second variance derivative from the current spinor: 2T_P + mu d (p-1)/(p+1) ||psi||^{p+1} - 2B cross_P."""
    d = f.grid.dim
    middle = mu * d * (p - 1.0) / (p + 1.0) * lq_power(f, p + 1.0)
    return 2.0 * kinetic_p_forms(f, B).definition + middle - 2.0 * B * pauli_cross_term(f, B)


def polarized(f: ScalarField, spin_up: bool = True) -> SpinorField:
    """Embed a scalar field as a sigma3 eigenstate."""
    zero = np.zeros(f.grid.shape, dtype=np.complex128)
    if spin_up:
        return SpinorField(f.grid, f.values, zero)
    return SpinorField(f.grid, zero, f.values)
