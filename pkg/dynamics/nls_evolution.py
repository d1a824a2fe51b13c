"""
Scalar magnetic NLS evolution.

    i psi_t = (p + A)^2 psi + mu |psi|^{p-1} psi,  A = (B/2)(-x2, x1, 0)

advanced by Strang splitting around the exact linear step apply_us.
"""

from pathlib import Path
from typing import Optional

from dynamics.evolution_base import AbstractEvolution, EvolutionResult, RowObserver
from dynamics.initial_states import scalar_initial_state
from dynamics.sim_config import SimConfig
from errors import ConfigError
from field_grid.fields import ScalarField
from observables.observable_series import ObservableRow, measure_scalar
from propagators.linear_evolution import apply_us

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


class ScalarEvolution(AbstractEvolution):
    """Strang-split magnetic NLS for a scalar field."""

    pauli = False

    def build_initial_state(self) -> ScalarField:
        return scalar_initial_state(self.config)

    def linear_step(self, f: ScalarField, dt: float) -> ScalarField:
        return apply_us(f, dt, self.config.B, self.config.propagator)

    def measure(self, f: ScalarField, t: float) -> ObservableRow:
        return measure_scalar(f, t, self.config.mu, self.config.p, self.config.B)


def evolve(config: SimConfig, snapshot_dir: Optional[Path] = None,
           initial: Optional[ScalarField] = None,
           observer: Optional[RowObserver] = None) -> EvolutionResult:
    """
    Run one scalar simulation.

    Args:
        config: Validated scalar configuration.
        snapshot_dir: Directory for snapshot files, if snapshots are enabled.
        initial: Optional initial field overriding config.initial.
        observer: Optional (field, row) callback for every recorded row.

    Returns:
        EvolutionResult(series, snapshots, blowup).

    Raises:
        ConfigError: If the configuration describes a Pauli run.
    """
    if config.equation != "scalar":
        raise ConfigError("evolve() runs the scalar equation; use evolve_pauli for spinors",
                          key="equation")
    return ScalarEvolution(config, snapshot_dir, initial).run(observer)
