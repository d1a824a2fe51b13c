"""
Strang-splitting evolution loop shared by the scalar and Pauli equations.

One step is N(dt/2) L(dt) N(dt/2): N the exact pointwise nonlinear phase,
L the exact linear magnetic step. Concrete evolutions supply the initial
state, the linear step and the observable row; the loop handles striding,
adaptive dt halving, snapshots and blow-up detection.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from config import get_numerical_tolerances
from dynamics.blowup import NONFINITE, BlowupReport, BlowupThresholds, detect_blowup, kinetic_ratio
from dynamics.sim_config import SimConfig
from field_grid.fields import Field, require_resolved
from field_grid.snapshot_io import write_snapshot
from observables.observable_series import ObservableRow, ObservableSeries, row_is_finite

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


RowObserver = Callable[[Field, ObservableRow], None]


class Snapshot(NamedTuple):
    step: int
    t: float
    field: Field
    path: Optional[Path]


class EvolutionResult(NamedTuple):
    series: ObservableSeries
    snapshots: List[Snapshot]
    blowup: BlowupReport


def nonlinear_phase_step(f: Field, mu: float, p: float, dt: float) -> Field:
    """
    Exact flow of i psi_t = mu |psi|^{p-1} psi over dt.

    Spinors use the spinor modulus, so one phase multiplies both components.

    Args:
        f: Field.
        mu: Coupling.
        p: Nonlinearity power (> 1, so 0^{p-1} = 0).
        dt: Duration.

    Returns:
        f times e^{-i mu |psi|^{p-1} dt} pointwise.
    """
    if mu == 0.0 or dt == 0.0:
        return f
    phase = np.exp(-1j * mu * dt * f.density() ** (0.5 * (p - 1.0)))
    return f.map_components(lambda values: phase * values)


def strang_step(f: Field, config: SimConfig, dt: float,
                linear: Callable[[Field, float], Field]) -> Field:
    """
    One second-order splitting step N(dt/2) L(dt) N(dt/2).

    Args:
        f: Current field.
        config: Supplies mu and p.
        dt: Step length.
        linear: Exact linear evolution (field, duration) -> field.

    Returns:
        Field after the step.
    """
    half = 0.5 * dt
    f = nonlinear_phase_step(f, config.mu, config.p, half)
    f = linear(f, dt)
    return nonlinear_phase_step(f, config.mu, config.p, half)


class AbstractEvolution(ABC):
    """
    Time stepping for one configured run.

    Attributes:
        config: Experiment description.
        grid: Grid of the run.
        snapshot_dir: Directory for snapshot files (None keeps them in memory only).
    """

    pauli: bool = False

    def __init__(self, config: SimConfig, snapshot_dir: Optional[Path] = None,
                 initial: Optional[Field] = None) -> None:
        self.config = config
        self.grid = config.grid()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir is not None else None
        self._initial = initial

    @abstractmethod
    def build_initial_state(self) -> Field:
        """Initial field from the config's initial-state descriptor."""
        pass

    @abstractmethod
    def linear_step(self, f: Field, dt: float) -> Field:
        """Exact linear evolution over dt."""
        pass

    @abstractmethod
    def measure(self, f: Field, t: float) -> ObservableRow:
        """Observable row at time t."""
        pass

    def initial_state(self) -> Field:
        return self._initial if self._initial is not None else self.build_initial_state()

    def step(self, f: Field, dt: float) -> Field:
        return strang_step(f, self.config, dt, self.linear_step)

    def _snapshot(self, f: Field, step: int, t: float) -> Snapshot:
        path = None
        if self.snapshot_dir is not None:
            path = write_snapshot(f, self.snapshot_dir / f"snapshot_{step:08d}.bin")
        return Snapshot(step, t, f, path)

    def run(self, observer: Optional[RowObserver] = None) -> EvolutionResult:
        """
        Evolve to t_end or until blow-up is detected.

        Args:
            observer: Called with (field, row) after every recorded row.

        Returns:
            EvolutionResult(series, snapshots, blowup).

        Raises:
            UnresolvedFieldError: If the initial state leaks into the boundary shell.
            ConsistencyError: If dual observable forms disagree on a recorded state.
        """
        config = self.config
        field = self.initial_state()
        require_resolved(field, context="initial state")

        series = ObservableSeries(pauli=self.pauli)
        row = self.measure(field, 0.0)
        series.append(row)
        if observer is not None:
            observer(field, row)
        thresholds = BlowupThresholds.from_settings(config.thresholds).calibrated(row)
        snapshots: List[Snapshot] = []
        if config.snapshot_stride:
            snapshots.append(self._snapshot(field, 0, 0.0))

        tolerances = get_numerical_tolerances()
        boundary_limit = tolerances['boundary_mass'] * tolerances['boundary_warning_fraction']
        boundary_warned = False
        kinetic_reference = row['T_S']
        dt = config.dt
        halvings = 0
        t = 0.0
        step = 0
        eps = 1e-12 * config.t_end
        report = None
        logger.info(f"Evolving {type(self).__name__} to t={config.t_end} with dt={dt}")

        while t < config.t_end - eps:
            step_dt = min(dt, config.t_end - t)
            field = self.step(field, step_dt)
            t += step_dt
            step += 1
            final = t >= config.t_end - eps

            if not field.is_finite():
                report = BlowupReport.fired(NONFINITE, t, None, series.last_row())
                break
            if config.snapshot_stride and step % config.snapshot_stride == 0:
                snapshots.append(self._snapshot(field, step, t))
            if step % config.observable_stride != 0 and not final:
                continue

            row = self.measure(field, t)
            if not row_is_finite(row):
                report = BlowupReport.fired(NONFINITE, t, None, series.last_row())
                break
            series.append(row)
            if observer is not None:
                observer(field, row)

            if row['boundary_mass'] > boundary_limit and not boundary_warned:
                logger.warning(f"Boundary mass {row['boundary_mass']:.3e} approaches the guard ({tolerances['boundary_mass']:.1e}) at t={t:.6g}")
                boundary_warned = True

            trigger = detect_blowup(row, thresholds)
            if trigger is not None:
                report = BlowupReport.fired(trigger, t, kinetic_ratio(row, thresholds), row)
                break

            if config.adaptive:
                while row['T_S'] > 2.0 * kinetic_reference and halvings < config.max_dt_halvings:
                    dt *= 0.5
                    halvings += 1
                    kinetic_reference *= 2.0
                    logger.debug(f"t={t:.6g}: kinetic energy doubled, dt -> {dt:.3e}")

        if report is None:
            report = BlowupReport.quiet(series.last_row())
        logger.info(f"Evolution finished at t={t:.6g} after {step} steps, {len(series)} rows")
        return EvolutionResult(series, snapshots, report)
