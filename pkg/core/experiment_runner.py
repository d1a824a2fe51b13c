"""
Batch experiment runner.

run(mode, config_path, out_dir) loads the config, executes one registered
mode, writes its artifacts plus a manifest and returns the process exit
code:

    0  success
    1  other simulator error (e.g. an artifact could not be written)
    2  configuration error
    3  numerical guard failure (unresolved field, singular time)
    4  internal-consistency error (dual observable forms disagree)

Modes: evolve, evolve-pauli, virial-check, strichartz-check, blowup-scan,
certify-example.
"""

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Union

import numpy as np
from rich.console import Console

from charting.chart_builder import ChartBuilder
from config import get_numerical_tolerances
from core.mode_registry import ExperimentMode, ModeOutcome, create_mode, register_mode
from dynamics.evolution_base import EvolutionResult
from dynamics.initial_states import initial_state
from dynamics.nls_evolution import evolve
from dynamics.sim_config import SimConfig, load_config
from errors import ConfigError, MagneticNLSError
from field_grid.fields import Field, ScalarField, lq_norm
from observables.functionals import diamagnetic_excess, virial_rhs_instantaneous, virial_rhs_s
from observables.observable_series import ObservableRow, ObservableSeries
from observables.pauli_functionals import pauli_virial_instantaneous
from observables.series_analysis import convergence_ratio, drift_summary, variance_sup_gap, virial_residual
from pauli.pauli_extension import evolve_pauli, virial_rhs_p
from persistence.artifact_writer import ArtifactWriter
from strichartz.strichartz_lab import GaussianParams, verify_identity
from theory.variance_oracles import VarianceParams, blowup_sufficient, exact_variance, first_zero
from theory.vortex_ring import EXAMPLE_MU, EXAMPLE_P, certify_vortex_ring
from ui.components import (
    ui_block_header,
    ui_error_message,
    ui_key_value_table,
    ui_observable_table,
    ui_rows_table,
    ui_section_header,
    ui_success_message,
)

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)

# Console configuration
UI_WIDTH: int = 100
console = Console(width=UI_WIDTH)


@dataclass
class RunContext:
    """Everything a mode needs: the validated config, the writer and display options."""

    config: SimConfig
    writer: ArtifactWriter
    charts: bool = False
    console: Console = console


def _functional_column(config: SimConfig) -> str:
    return "F_P" if config.equation == "pauli" else "F_S"


def _evolver(config: SimConfig) -> Callable[..., EvolutionResult]:
    return evolve_pauli if config.equation == "pauli" else evolve


def variance_oracle_applies(config: SimConfig) -> bool:
    """The closed-form variance holds in 2D for B != 0 when p = 3 or the run is linear."""
    return config.dim == 2 and config.B != 0.0 and (config.p == 3.0 or config.mu == 0.0)


def variance_params(series: ObservableSeries, config: SimConfig) -> VarianceParams:
    first = series.first_row()
    return VarianceParams(F0=first[_functional_column(config)], B=config.B, g0=first['g'], gdot0=first['gdot'])


def _save_observables_chart(context: RunContext, series: ObservableSeries, title: str,
                            params: Optional[VarianceParams]) -> Optional[str]:
    if not context.charts:
        return None
    closed_form = (lambda t: exact_variance(params, t)) if params is not None else None
    chart = ChartBuilder.create_observables_chart(series.frame, title, closed_form)
    path = ChartBuilder.save_chart_to_html_file(chart, context.writer.out_dir / "observables")
    return path.name


def run_evolution_mode(context: RunContext, mode_name: str) -> ModeOutcome:
    """
    Shared body of evolve and evolve-pauli.

    Records observables, snapshots and the blow-up report, and checks the
    diamagnetic inequality at every recorded row of scalar runs.
    """
    config = context.config
    writer = context.writer
    snapshot_dir = writer.prepare_snapshots() if config.snapshot_stride else None

    tolerances = get_numerical_tolerances()
    diamagnetic: List[float] = []
    slack: List[float] = []

    def observe(f: Field, row: ObservableRow) -> None:
        if isinstance(f, ScalarField):
            diamagnetic.append(diamagnetic_excess(f, config.B))
            slack.append(tolerances['diamagnetic_constant'] * f.grid.h ** 2 * lq_norm(f, math.inf))

    result = _evolver(config)(config, snapshot_dir, None, observe)
    series = result.series
    writer.write_series(series)

    drift = drift_summary(series)
    summary: Dict[str, Any] = {
        'rows': len(series),
        't_final': series.last_row()['t'],
        'blowup_detected': result.blowup.detected,
    }
    summary.update({f"drift_{name}": value for name, value in drift.items()})
    verdicts: Dict[str, Any] = {'blowup_detected': None}

    params = None
    variance_gap = None
    if variance_oracle_applies(config) and not result.blowup.detected:
        params = variance_params(series, config)
        variance_gap = variance_sup_gap(series, lambda t: exact_variance(params, t))
        summary['variance_sup_gap'] = variance_gap

    diamagnetic_report = None
    if diamagnetic:
        worst = int(np.argmax(np.array(diamagnetic) - np.array(slack)))
        holds = all(excess <= allowance for excess, allowance in zip(diamagnetic, slack))
        diamagnetic_report = {'max_excess': max(diamagnetic), 'slack_at_worst': slack[worst], 'holds': holds}
        summary['diamagnetic_max_excess'] = max(diamagnetic)
        verdicts['diamagnetic_max_excess'] = holds

    writer.write_json("summary.json", {
        'mode': mode_name,
        'blowup': result.blowup,
        'drift': drift,
        'rows': len(series),
        'snapshots': [snapshot.step for snapshot in result.snapshots],
        'variance_sup_gap': variance_gap,
        'diamagnetic': diamagnetic_report,
    })
    if series.rows:
        context.console.print(ui_observable_table(series.first_row(), series.last_row(), series.columns))
    _save_observables_chart(context, series, mode_name, params)
    return ModeOutcome(summary=summary, verdicts=verdicts)


@register_mode
class EvolveMode(ExperimentMode):
    name = "evolve"
    description = "Scalar magnetic NLS run with observables and snapshots"

    def execute(self, context: RunContext) -> ModeOutcome:
        if context.config.equation != "scalar":
            raise ConfigError("Mode 'evolve' runs the scalar equation; use 'evolve-pauli'", key="equation")
        return run_evolution_mode(context, self.name)


@register_mode
class EvolvePauliMode(ExperimentMode):
    name = "evolve-pauli"
    description = "Nonlinear Pauli run with spin observables"

    def execute(self, context: RunContext) -> ModeOutcome:
        context.config = replace(context.config, equation="pauli")
        return run_evolution_mode(context, self.name)


def _subsampled(series: ObservableSeries, step: int) -> ObservableSeries:
    coarse = ObservableSeries(pauli=series.pauli)
    for row in series.rows[::step]:
        coarse.append(row)
    return coarse


@register_mode
class VirialCheckMode(ExperimentMode):
    """
    Finite-difference g'' of the recorded variance against the virial
    right-hand side built from the conserved functional, repeated on every
    other row to expose the second-order shrinkage.
    """

    name = "virial-check"
    description = "Virial identity residual along a run"

    def execute(self, context: RunContext) -> ModeOutcome:
        config = context.config
        pauli = config.equation == "pauli"
        column = _functional_column(config)
        rhs: List[float] = []
        instantaneous: List[float] = []
        functional = {}

        def observe(f: Field, row: ObservableRow) -> None:
            functional.setdefault('F0', row[column])
            if pauli:
                rhs.append(virial_rhs_p(f, config.mu, config.p, config.B, functional['F0']))
                instantaneous.append(pauli_virial_instantaneous(f, config.mu, config.p, config.B))
            else:
                rhs.append(virial_rhs_s(f, config.mu, config.p, config.B, functional['F0']))
                instantaneous.append(virial_rhs_instantaneous(f, config.mu, config.p, config.B))

        result = _evolver(config)(config, None, None, observe)
        series = result.series
        if len(series) < 5:
            raise ConfigError("virial-check needs at least five recorded rows; lower observable_stride",
                              key="observable_stride")

        rhs_values = np.array(rhs)
        fine = virial_residual(series, rhs_values)
        coarse = virial_residual(_subsampled(series, 2), rhs_values[::2])
        ratio = convergence_ratio(coarse.sup_gap, fine.sup_gap)
        forms_gap = float(np.max(np.abs(rhs_values - np.array(instantaneous))))
        forms_scale = max(float(np.max(np.abs(rhs_values))), 1.0)

        times = series.column("t")
        context.writer.write_series(series)
        context.writer.write_table("virial.csv", [
            {'t': t, 'g': g, 'rhs': r, 'rhs_instantaneous': inst}
            for t, g, r, inst in zip(times, series.column("g"), rhs_values, instantaneous)
        ], columns=['t', 'g', 'rhs', 'rhs_instantaneous'])
        report = {
            'equation': config.equation,
            'functional': column,
            'F0': functional['F0'],
            'sup_gap': fine.sup_gap,
            'relative_gap': fine.relative_gap,
            'coarse_sup_gap': coarse.sup_gap,
            'stride_halving_ratio': ratio,
            'forms_relative_gap': forms_gap / forms_scale,
            'blowup': result.blowup,
        }
        context.writer.write_json("virial.json", report)
        summary = {key: report[key] for key in ('sup_gap', 'relative_gap', 'coarse_sup_gap',
                                                'stride_halving_ratio', 'forms_relative_gap')}
        return ModeOutcome(summary=summary, verdicts={'relative_gap': fine.relative_gap <= 1e-3})


def gaussian_params_for(config: SimConfig) -> Optional[GaussianParams]:
    """Laguerre-Gaussian description of a centered, momentum-free Gaussian initial state."""
    spec = config.initial
    if spec.kind != "gaussian" or any(spec.center) or any(spec.momentum):
        return None
    return GaussianParams(config.grid(), spec.width, spec.charge, spec.mass)


@register_mode
class StrichartzCheckMode(ExperimentMode):
    name = "strichartz-check"
    description = "Magnetic vs free Strichartz norms over the configured field strengths"

    def execute(self, context: RunContext) -> ModeOutcome:
        config = context.config
        settings = config.strichartz
        if config.dim != 2:
            raise ConfigError("strichartz-check runs in 2D only", key="dim")
        if not settings.B_values:
            raise ConfigError("strichartz.B_values must not be empty", key="strichartz.B_values")

        psi0 = initial_state(config)
        params = gaussian_params_for(config)
        reports = [
            verify_identity(psi0, B, settings.q, settings.r, settings.nodes, params,
                            settings.window_scale, settings.free_side, config.propagator)
            for B in settings.B_values
        ]

        refined = verify_identity(psi0, settings.B_values[0], settings.q, settings.r, 2 * settings.nodes,
                                  params, settings.window_scale, settings.free_side, config.propagator)
        node_change = abs(refined.lhs - reports[0].lhs) / abs(reports[0].lhs)
        left_sides = np.array([report.lhs for report in reports])
        b_spread = float((left_sides.max() - left_sides.min()) / left_sides.mean())

        document: Dict[str, Any] = {
            'reports': reports,
            'node_doubling_change': node_change,
            'B_spread': b_spread,
        }
        if params is not None and params.charge == 0 and settings.q == 4.0 and settings.r == 4.0:
            document['sharp_constant_ratio'] = reports[0].rhs / lq_norm(psi0, 2.0)

        rows = [{'B': r.B, 'lhs': r.lhs, 'rhs': r.rhs, 'relative_gap': r.relative_gap,
                 'free_side_method': r.free_side_method, 'tail_bound': r.tail_bound} for r in reports]
        context.writer.write_json("strichartz.json", document)
        context.writer.write_table("strichartz.csv", rows,
                                   columns=['B', 'lhs', 'rhs', 'relative_gap', 'free_side_method', 'tail_bound'])
        context.console.print(ui_rows_table("Strichartz identity", rows, ['B', 'lhs', 'rhs', 'relative_gap']))
        if context.charts:
            chart = ChartBuilder.create_strichartz_chart(rows)
            ChartBuilder.save_chart_to_html_file(chart, context.writer.out_dir / "strichartz")

        max_gap = max(r.relative_gap for r in reports)
        summary = {'max_relative_gap': max_gap, 'node_doubling_change': node_change, 'B_spread': b_spread}
        if 'sharp_constant_ratio' in document:
            summary['sharp_constant_ratio'] = document['sharp_constant_ratio']
        return ModeOutcome(summary=summary, verdicts={'max_relative_gap': max_gap <= 5e-3})


@dataclass
class BlowupScanReport:
    """
    Per-B blow-up rows plus the monotonicity and bound verdicts.

    Attributes:
        rows: One dict per field strength, in configured order.
        decreasing: Detected times strictly decrease with increasing B
            (None when some run did not blow up).
        bounded: Every detected time is at most the predicted first zero
            plus one base step (None when nothing could be compared).
        max_relative_gap: Largest |t_detect - first_zero| / first_zero, reported
            only: the first zero bounds the lifespan from above and is reached
            only when the whole mass collapses.
    """

    rows: List[Dict[str, Any]]
    decreasing: Optional[bool]
    bounded: Optional[bool]
    max_relative_gap: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return {'rows': self.rows, 'decreasing': self.decreasing, 'bounded': self.bounded,
                'max_relative_gap': self.max_relative_gap}


SCAN_COLUMNS = ['B', 'F0', 'g0', 'gdot0', 'sufficient', 'predicted_first_zero', 'detected',
                't_detect', 'trigger', 'signed_gap', 'relative_gap']


def blowup_scan(config: SimConfig) -> BlowupScanReport:
    """
    Run the configured state at every B in config.B_list.

    Each row carries the initial conserved functional, the closed-form first
    zero of the variance (d = 2, p = 3 only), the sufficient-criterion
    verdict and the detected blow-up time with its signed gap to the
    prediction.

    Raises:
        ConfigError: If B_list is empty.
    """
    if not config.B_list:
        raise ConfigError("blowup-scan needs a non-empty B_list", key="B_list")
    column = _functional_column(config)
    rows = []
    for B in config.B_list:
        scan_config = config.with_field(B)
        result = _evolver(scan_config)(scan_config)
        first = result.series.first_row()
        F0, g0, gdot0 = first[column], first['g'], first['gdot']
        predicted = None
        if scan_config.dim == 2 and scan_config.p == 3.0 and B != 0.0:
            predicted = first_zero(VarianceParams(F0=F0, B=B, g0=g0, gdot0=gdot0))
        t_detect = result.blowup.t_detect
        signed_gap = t_detect - predicted if (t_detect is not None and predicted is not None) else None
        rows.append({
            'B': B,
            'F0': F0,
            'g0': g0,
            'gdot0': gdot0,
            'sufficient': blowup_sufficient(F0, gdot0, config.mu, config.p, config.dim).value,
            'predicted_first_zero': predicted,
            'detected': result.blowup.detected,
            't_detect': t_detect,
            'trigger': result.blowup.trigger,
            'signed_gap': signed_gap,
            'relative_gap': signed_gap / predicted if signed_gap is not None else None,
        })
        logger.info(f"Scan B={B}: F0={F0:.6g} predicted={predicted} detected={t_detect}")

    ordered = sorted(rows, key=lambda row: row['B'])
    decreasing = None
    if all(row['detected'] for row in ordered):
        times = [row['t_detect'] for row in ordered]
        decreasing = all(later < earlier for earlier, later in zip(times, times[1:]))
    compared = [row for row in rows if row['signed_gap'] is not None]
    bounded = all(row['signed_gap'] <= config.dt for row in compared) if compared else None
    gaps = [abs(row['relative_gap']) for row in compared]
    return BlowupScanReport(rows, decreasing, bounded, max(gaps) if gaps else None)


@register_mode
class BlowupScanMode(ExperimentMode):
    name = "blowup-scan"
    description = "Detected blow-up times across field strengths"

    def execute(self, context: RunContext) -> ModeOutcome:
        report = blowup_scan(context.config)
        context.writer.write_json("blowup_scan.json", report)
        context.writer.write_table("blowup_scan.csv", report.rows, columns=SCAN_COLUMNS)
        context.console.print(ui_rows_table("Blow-up scan", report.rows,
                                            ['B', 'F0', 'predicted_first_zero', 't_detect', 'trigger']))
        if context.charts:
            chart = ChartBuilder.create_blowup_scan_chart(report.rows)
            ChartBuilder.save_chart_to_html_file(chart, context.writer.out_dir / "blowup_scan")

        summary = {'decreasing': report.decreasing, 'bounded': report.bounded,
                   'max_relative_gap': report.max_relative_gap}
        verdicts = {'decreasing': report.decreasing, 'bounded': report.bounded}
        return ModeOutcome(summary=summary, verdicts=verdicts)


@register_mode
class CertifyExampleMode(ExperimentMode):
    """Vortex-ring certificate; the grid comparison uses the configured 2D grid."""

    name = "certify-example"
    description = "Certify the vortex-ring example and recompute its B-window"

    def execute(self, context: RunContext) -> ModeOutcome:
        config = context.config
        grid = config.grid() if config.dim == 2 else None
        certificate = certify_vortex_ring(grid, mu=EXAMPLE_MU, p=EXAMPLE_P)
        context.writer.write_json("certificate.json", certificate)

        summary: Dict[str, Any] = {
            'E0': certificate.oracle.E0,
            'L3': certificate.oracle.L3,
            'ratio': certificate.ratio,
            'B_min': certificate.window['B_min'],
            'B_max': certificate.window['B_max'],
        }
        verdicts: Dict[str, Any] = {
            'E0': certificate.agreement['E0'],
            'ratio': certificate.agreement['ratio'],
            'B_min': certificate.agreement['window'],
            'B_max': certificate.agreement['window'],
        }
        if certificate.grid_relative_gaps:
            summary['grid_max_relative_gap'] = max(certificate.grid_relative_gaps.values())
        return ModeOutcome(summary=summary, verdicts=verdicts)


def run(mode: str, config_path: Union[str, Path, None], out_dir: Union[str, Path],
        seed: Optional[int] = None, overrides: Iterable[str] = (), charts: bool = False) -> int:
    """
    Execute one experiment mode and write its artifacts.

    Args:
        mode: Registered mode name.
        config_path: JSON config file (None uses the defaults).
        out_dir: Output directory, created if needed.
        seed: Optional seed overriding the config's seed.
        overrides: 'key=value' config overrides.
        charts: Also write plotly HTML charts.

    Returns:
        Process exit code (0, 1, 2, 3 or 4).
    """
    try:
        experiment = create_mode(mode)
        override_list = list(overrides)
        if seed is not None:
            override_list.append(f"seed={int(seed)}")
        config = load_config(config_path, override_list)
        writer = ArtifactWriter(out_dir)
        context = RunContext(config, writer, charts)

        console.print(ui_block_header(f"magnls {mode}", experiment.description))
        outcome = experiment.execute(context)
        outcome.artifacts = writer.relative_names()
        writer.write_json("manifest.json", {
            'mode': mode,
            'config': context.config.to_dict(),
            'artifacts': outcome.artifacts,
            'summary': outcome.summary,
        })
        console.print(ui_section_header("results"))
        console.print(ui_key_value_table("Summary", outcome.summary, outcome.verdicts))
        console.print(ui_success_message(f"{len(outcome.artifacts)} artifacts written to {writer.out_dir}"))
        logger.info(f"Mode {mode} finished; artifacts in {writer.out_dir}")
        return 0
    except MagneticNLSError as e:
        logger.error(f"{type(e).__name__}: {e}")
        console.print(ui_error_message(e))
        return e.exit_code
    except Exception as e:
        logger.exception(f"Mode {mode} failed unexpectedly")
        console.print(ui_error_message(e, title="Unexpected error"))
        return MagneticNLSError.exit_code
