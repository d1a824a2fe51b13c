"""
Blow-up detection policy.

A run is flagged when the kinetic energy has grown past a fixed ratio of its
initial value, when the variance has collapsed below a fraction of its
initial value, or when the field stops being finite after any step. Reported
times are detection times, an upper-bound proxy for the maximal existence time.
"""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional

import numpy as np

from config import get_blowup_thresholds
from observables.observable_series import ObservableRow

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


KINETIC_GROWTH = "kinetic-growth"
VARIANCE_FLOOR = "variance-floor"
NONFINITE = "nonfinite"
TRIGGERS = (KINETIC_GROWTH, VARIANCE_FLOOR, NONFINITE)


@dataclass(frozen=True)
class BlowupThresholds:
    """
    Detection thresholds plus the t = 0 baselines they are measured against.

    Attributes:
        kinetic_ratio: Trigger when T_S(t)/T_S(0) exceeds this value.
        variance_floor: Trigger when g(t) < variance_floor * g(0).
        kinetic_baseline: T_S(0), set by calibrated().
        variance_baseline: g(0), set by calibrated().
    """

    kinetic_ratio: float = 1e6
    variance_floor: float = 1e-4
    kinetic_baseline: Optional[float] = None
    variance_baseline: Optional[float] = None

    @classmethod
    def from_settings(cls, settings: Any = None) -> "BlowupThresholds":
        """Build from a BlowupSettings-like object, or the config defaults."""
        if settings is None:
            defaults = get_blowup_thresholds()
            return cls(defaults['kinetic_ratio'], defaults['variance_floor'])
        return cls(float(settings.kinetic_ratio), float(settings.variance_floor))

    def calibrated(self, first_row: ObservableRow) -> "BlowupThresholds":
        """Copy carrying the baselines of the first recorded row."""
        return replace(self, kinetic_baseline=float(first_row['T_S']),
                       variance_baseline=float(first_row['g']))

    @property
    def is_calibrated(self) -> bool:
        return self.kinetic_baseline is not None and self.variance_baseline is not None


def kinetic_ratio(row: ObservableRow, thresholds: BlowupThresholds) -> Optional[float]:
    if not thresholds.kinetic_baseline:
        return None
    return float(row['T_S']) / thresholds.kinetic_baseline


def detect_blowup(row: ObservableRow, thresholds: BlowupThresholds) -> Optional[str]:
    """
    Classify one observable row.

    Args:
        row: Observable row with at least T_S and g.
        thresholds: Calibrated thresholds.

    Returns:
        'nonfinite', 'kinetic-growth', 'variance-floor' or None.

    Raises:
        ValueError: If the thresholds carry no baselines.

    Example:
        >>> thresholds = BlowupThresholds().calibrated({'T_S': 1.0, 'g': 1.0})
        >>> detect_blowup({'T_S': 1e7, 'g': 1.0}, thresholds)
        'kinetic-growth'
    """
    if not thresholds.is_calibrated:
        raise ValueError("Blow-up thresholds must be calibrated on the first row")
    if not all(np.isfinite(float(value)) for value in row.values()):
        return NONFINITE
    ratio = kinetic_ratio(row, thresholds)
    if ratio is not None and ratio > thresholds.kinetic_ratio:
        return KINETIC_GROWTH
    if float(row['g']) < thresholds.variance_floor * thresholds.variance_baseline:
        return VARIANCE_FLOOR
    return None


@dataclass(frozen=True)
class BlowupReport:
    """
    Outcome of blow-up monitoring.

    Attributes:
        detected: Whether a trigger fired.
        t_detect: Detection time (never an exact blow-up time).
        trigger: The trigger that fired.
        kinetic_ratio: T_S/T_S(0) at detection.
        last_row: Last finite observable row.
    """

    detected: bool = False
    t_detect: Optional[float] = None
    trigger: Optional[str] = None
    kinetic_ratio: Optional[float] = None
    last_row: Optional[Dict[str, float]] = None

    @classmethod
    def fired(cls, trigger: str, t: float, ratio: Optional[float],
              last_row: Optional[ObservableRow]) -> "BlowupReport":
        logger.info(f"Blow-up detected at t={t:.6g} ({trigger})")
        return cls(True, float(t), trigger, ratio, dict(last_row) if last_row else None)

    @classmethod
    def quiet(cls, last_row: Optional[ObservableRow]) -> "BlowupReport":
        return cls(False, None, None, None, dict(last_row) if last_row else None)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['time_label'] = "detected"
        return data
