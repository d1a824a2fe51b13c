"""
Post-processing of recorded observable series.

Drift statistics, the virial residual from a recorded variance column, the
sup-gap against a closed-form variance and dt-halving convergence ratios.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from observables.observable_series import ObservableSeries

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


CONSERVED_COLUMNS = ("mass", "E_S", "F_S", "L3")
PAULI_CONSERVED_COLUMNS = ("mass", "E_P", "F_P", "L3", "spin_z")


def drift(series: ObservableSeries, column: str) -> float:
    """max_t |X(t) - X(0)| of one column."""
    values = series.column(column)
    return float(np.max(np.abs(values - values[0])))


def drift_summary(series: ObservableSeries, columns: Optional[Iterable[str]] = None) -> Dict[str, float]:
    """Drift of every conserved column (Pauli columns for Pauli series)."""
    if columns is None:
        columns = PAULI_CONSERVED_COLUMNS if series.pauli else CONSERVED_COLUMNS
    return {name: drift(series, name) for name in columns}


def second_difference(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Three-point second derivative on a possibly non-uniform time lattice.

    Args:
        times: Strictly increasing sample times.
        values: Samples at those times.

    Returns:
        Array of len(times) - 2 estimates at the interior times.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    left = t[1:-1] - t[:-2]
    right = t[2:] - t[1:-1]
    return 2.0 * (left * v[2:] - (left + right) * v[1:-1] + right * v[:-2]) / (left * right * (left + right))


@dataclass(frozen=True)
class VirialResidual:
    """Sup gap between the finite-difference g'' and a virial right-hand side."""

    times: np.ndarray
    finite_difference: np.ndarray
    rhs: np.ndarray

    @property
    def sup_gap(self) -> float:
        return float(np.max(np.abs(self.finite_difference - self.rhs)))

    @property
    def relative_gap(self) -> float:
        scale = max(float(np.max(np.abs(self.rhs))), np.finfo(float).tiny)
        return self.sup_gap / scale


def virial_residual(series: ObservableSeries, rhs: np.ndarray) -> VirialResidual:
    """
    Compare the recorded variance curvature with a right-hand side sampled on the same rows.

    Args:
        series: Recorded series with at least three rows.
        rhs: Virial right-hand side at every recorded row.

    Returns:
        Residual over the interior rows.

    Raises:
        ValueError: On fewer than three rows or a length mismatch.
    """
    if len(series) < 3:
        raise ValueError("Virial residual needs at least three recorded rows")
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (len(series),):
        raise ValueError(f"Expected {len(series)} right-hand side values, got {rhs.shape}")
    times = series.column("t")
    curvature = second_difference(times, series.column("g"))
    return VirialResidual(times[1:-1], curvature, rhs[1:-1])


def variance_sup_gap(series: ObservableSeries, closed_form: Callable[[float], float],
                     relative: bool = True) -> float:
    """
    sup_t |g(t) - closed_form(t)| over the recorded rows.

    Args:
        series: Recorded series.
        closed_form: Predicted variance as a function of time.
        relative: Divide by sup |closed_form| when True.

    Returns:
        Sup-norm gap.
    """
    times = series.column("t")
    predicted = np.array([closed_form(t) for t in times])
    gap = float(np.max(np.abs(series.column("g") - predicted)))
    if relative:
        gap /= max(float(np.max(np.abs(predicted))), np.finfo(float).tiny)
    return gap


def convergence_ratio(coarse_error: float, fine_error: float) -> float:
    """error(dt) / error(dt/2); second order gives a ratio near 4."""
    if fine_error == 0.0:
        return float("inf")
    return coarse_error / fine_error
