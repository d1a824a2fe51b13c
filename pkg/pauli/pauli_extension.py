"""
Nonlinear Pauli evolution and its variance oracles.

    i psi_t = [sigma.(p+A)]^2 psi + mu |psi|^{p-1} psi

The linear step is U_P(t) = e^{-iBt sigma_3} U_S(t); the nonlinear phase
uses the spinor modulus, so it is the identity in spin space and commutes
with sigma_3. The closed-form variance and the blow-up criteria are the
scalar ones with F_P in the F_0 slot.
"""

from pathlib import Path
from typing import Optional

from dynamics.evolution_base import AbstractEvolution, EvolutionResult, RowObserver
from dynamics.initial_states import initial_state
from dynamics.sim_config import SimConfig
from errors import ConfigError
from field_grid.fields import SpinorField
from observables.functionals import virial_rhs_s
from observables.observable_series import ObservableRow, measure_pauli
from propagators.linear_evolution import apply_up
from theory.variance_oracles import BlowupVerdict, VarianceParams, blowup_sufficient, exact_variance

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


class PauliEvolution(AbstractEvolution):
    """Strang-split nonlinear Pauli equation for a two-component spinor."""

    pauli = True

    def build_initial_state(self) -> SpinorField:
        return initial_state(self.config)

    def linear_step(self, f: SpinorField, dt: float) -> SpinorField:
        return apply_up(f, dt, self.config.B, self.config.propagator)

    def measure(self, f: SpinorField, t: float) -> ObservableRow:
        return measure_pauli(f, t, self.config.mu, self.config.p, self.config.B)


def evolve_pauli(config: SimConfig, snapshot_dir: Optional[Path] = None,
                 initial: Optional[SpinorField] = None,
                 observer: Optional[RowObserver] = None) -> EvolutionResult:
    """
    Run one Pauli simulation.

    Args:
        config: Validated configuration with equation 'pauli'.
        snapshot_dir: Directory for spinor snapshots.
        initial: Optional initial spinor overriding config.initial.
        observer: Optional (field, row) callback for every recorded row.

    Returns:
        EvolutionResult with Pauli observable columns.

    Raises:
        ConfigError: If the configuration describes a scalar run.
    """
    if config.equation != "pauli":
        raise ConfigError("evolve_pauli() needs equation 'pauli'", key="equation")
    return PauliEvolution(config, snapshot_dir, initial).run(observer)


def virial_rhs_p(f: SpinorField, mu: float, p: float, B: float, F_P0: float) -> float:
    """
    Pauli virial right-hand side.

    2 F_P0 + mu d (p - 1 - 4/d)/(p+1) ||psi||_{p+1}^{p+1} - B^2 ||rho psi||^2,
    with the spinor modulus in both norms.
    """
    return virial_rhs_s(f, mu, p, B, F_P0)


def exact_variance_pauli(F_P0: float, B: float, g0: float, gdot0: float, t: float) -> float:
    """Closed-form variance with F_P as the conserved functional."""
    return exact_variance(VarianceParams(F0=F_P0, B=B, g0=g0, gdot0=gdot0), t)


def blowup_sufficient_pauli(F_P0: float, gdot0: float, mu: float, p: float, d: int) -> BlowupVerdict:
    """Blow-up for F_P0 < 0 (or F_P0 = 0 with gdot0 < 0) under the focusing hypotheses."""
    return blowup_sufficient(F_P0, gdot0, mu, p, d)
