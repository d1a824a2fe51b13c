"""
Transform-free radial integrals for certifying grid values.

States of the form psi = u(rho) e^{i m theta} in the plane have

    mass           = 2 pi int |u|^2 rho drho
    ||grad psi||^2 = 2 pi int (|u'|^2 + m^2 |u|^2 / rho^2) rho drho
    ||psi||_q^q    = 2 pi int |u|^q rho drho
    ||rho psi||^2  = 2 pi int rho^2 |u|^2 rho drho
    <L3>           = m * mass

Each integral runs through scipy.integrate.quad (adaptive Gauss-Kronrod) on
closed-form integrands, sharing no code with the grid pipeline.
"""

import math
from typing import Callable, Protocol

from scipy import integrate

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


QUAD_EPSREL = 1e-13
QUAD_LIMIT = 200


class RadialProfile(Protocol):
    """Closed-form radial profile u(rho) of a charge-m state."""

    charge: int

    def value(self, rho: float) -> float: ...

    def derivative(self, rho: float) -> float: ...

    @property
    def support_radius(self) -> float: ...


def radial_integral(integrand: Callable[[float], float], upper: float,
                    epsrel: float = QUAD_EPSREL) -> float:
    """
    2 pi int_0^upper integrand(rho) rho drho.

    Args:
        integrand: Function of rho.
        upper: Truncation radius beyond which the integrand is negligible.
        epsrel: Relative accuracy requested from quad.

    Returns:
        Integral value.
    """
    value, abserr = integrate.quad(lambda rho: integrand(rho) * rho, 0.0, upper,
                                   epsabs=0.0, epsrel=epsrel, limit=QUAD_LIMIT)
    if abserr > 10.0 * epsrel * abs(value):
        logger.warning(f"Radial quadrature error estimate {abserr:.2e} for value {value:.6e}")
    return 2.0 * math.pi * value


def radial_mass(profile: RadialProfile) -> float:
    return radial_integral(lambda r: profile.value(r) ** 2, profile.support_radius)


def radial_gradient_norm_sq(profile: RadialProfile) -> float:
    """||grad psi||^2, the B = 0 kinetic energy."""
    m_sq = profile.charge ** 2

    def integrand(rho: float) -> float:
        centrifugal = m_sq * profile.value(rho) ** 2 / rho ** 2 if rho > 0.0 else 0.0
        return profile.derivative(rho) ** 2 + centrifugal

    return radial_integral(integrand, profile.support_radius)


def radial_lq_power(profile: RadialProfile, q: float) -> float:
    """||psi||_q^q."""
    return radial_integral(lambda r: abs(profile.value(r)) ** q, profile.support_radius)


def radial_rho_moment(profile: RadialProfile) -> float:
    """||rho psi||^2."""
    return radial_integral(lambda r: r * r * profile.value(r) ** 2, profile.support_radius)


def radial_angular_momentum(profile: RadialProfile) -> float:
    """<L3> = m * mass for an e^{i m theta} state."""
    return profile.charge * radial_mass(profile)


def radial_energy(profile: RadialProfile, mu: float, p: float) -> float:
    """E_0 = ||grad psi||^2 + (2 mu/(p+1)) ||psi||_{p+1}^{p+1}."""
    return radial_gradient_norm_sq(profile) + 2.0 * mu / (p + 1.0) * radial_lq_power(profile, p + 1.0)
