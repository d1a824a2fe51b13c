"""
Time-stamped observable records and their CSV form.

An ObservableSeries is an append-only list of rows, each a mapping from the
column names below to float64 values, exposed as a pandas DataFrame. Rows
must have strictly increasing t.
"""

from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from config import get_numerical_tolerances
from errors import ArtifactWriteError
from field_grid.fields import ScalarField, SpinorField, boundary_mass, lq_power, mass
from observables.functionals import (
    angular_momentum,
    covariant_gradient,
    f_s_forms,
    gdot,
    require_agreement,
    variance_g,
)
from observables.pauli_functionals import (
    f_p,
    kinetic_p,
    pauli_gdot,
    scalar_sums,
    spin_z,
)

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


SCALAR_COLUMNS: List[str] = ["t", "mass", "T_S", "E_S", "F_S", "L3", "g", "gdot", "Lp1", "boundary_mass"]
PAULI_COLUMNS: List[str] = SCALAR_COLUMNS + ["T_P", "E_P", "F_P", "spin_z"]
FLOAT_FORMAT = "%.17g"

ObservableRow = Dict[str, float]


def measure_scalar(f: ScalarField, t: float, mu: float, p: float, B: float,
                   tolerance: Optional[float] = None) -> ObservableRow:
    """
    Evaluate one row of scalar observables.

    Args:
        f: Current field.
        t: Time stamp.
        mu: Coupling.
        p: Nonlinearity power.
        B: Field strength.
        tolerance: Dual-form tolerance for F_S (default from config).

    Returns:
        Row keyed by SCALAR_COLUMNS.

    Raises:
        ConsistencyError: If the two F_S forms disagree.
    """
    forms, scale = f_s_forms(f, mu, p, B)
    require_agreement("F_S", forms, scale, tolerance)
    gradient = covariant_gradient(f, B)
    kinetic = float(f.grid.cell_volume * sum(np.sum(np.abs(c) ** 2) for c in gradient))
    potential_power = lq_power(f, p + 1.0)
    return {
        't': float(t),
        'mass': mass(f),
        'T_S': kinetic,
        'E_S': kinetic + 2.0 * mu / (p + 1.0) * potential_power,
        'F_S': forms.definition,
        'L3': angular_momentum(f),
        'g': variance_g(f),
        'gdot': gdot(f, B, gradient),
        'Lp1': potential_power,
        'boundary_mass': boundary_mass(f),
    }


def measure_pauli(f: SpinorField, t: float, mu: float, p: float, B: float,
                  tolerance: Optional[float] = None) -> ObservableRow:
    """
    Evaluate one row of Pauli observables.

    Scalar columns hold componentwise sums with the spinor-modulus
    nonlinearity; T_P and F_P are dual-form checked.
    """
    kinetic = kinetic_p(f, B, tolerance)
    potential_power = lq_power(f, p + 1.0)
    sums = scalar_sums(f, mu, p, B)
    return {
        't': float(t),
        'mass': mass(f),
        'T_S': sums['T_S'],
        'E_S': sums['E_S'],
        'F_S': sums['F_S'],
        'L3': angular_momentum(f.component_field(0)) + angular_momentum(f.component_field(1)),
        'g': variance_g(f),
        'gdot': pauli_gdot(f, B),
        'Lp1': potential_power,
        'boundary_mass': boundary_mass(f),
        'T_P': kinetic,
        'E_P': kinetic + 2.0 * mu / (p + 1.0) * potential_power,
        'F_P': f_p(f, mu, p, B, tolerance),
        'spin_z': spin_z(f),
    }


def measure(f: Union[ScalarField, SpinorField], t: float, mu: float, p: float, B: float,
            tolerance: Optional[float] = None) -> ObservableRow:
    """Dispatch to the scalar or Pauli row builder."""
    if isinstance(f, SpinorField):
        return measure_pauli(f, t, mu, p, B, tolerance)
    return measure_scalar(f, t, mu, p, B, tolerance)


def row_is_finite(row: ObservableRow) -> bool:
    """False when any value is NaN, infinite or beyond the overflow screen."""
    scale = get_numerical_tolerances()["finite_check_scale"]
    return all(np.isfinite(value) and abs(value) < scale for value in row.values())


class ObservableSeries:
    """
    Ordered observable rows of one run.

    Example:
        >>> series = ObservableSeries(pauli=False)
        >>> series.append(measure_scalar(field, 0.0, mu=-1.0, p=3.0, B=2.0))
        >>> series.frame['T_S'].iloc[0]
    """

    def __init__(self, pauli: bool = False) -> None:
        self.pauli = pauli
        self.columns = PAULI_COLUMNS if pauli else SCALAR_COLUMNS
        self._rows: List[ObservableRow] = []

    def __len__(self) -> int:
        return len(self._rows)

    def append(self, row: ObservableRow) -> None:
        """
        Add a row.

        Raises:
            ValueError: If columns are missing or t does not increase.
        """
        missing = [name for name in self.columns if name not in row]
        if missing:
            raise ValueError(f"Observable row is missing columns {missing}")
        if self._rows and not row['t'] > self._rows[-1]['t']:
            raise ValueError(f"Observable times must increase: {row['t']} after {self._rows[-1]['t']}")
        self._rows.append({name: float(row[name]) for name in self.columns})

    @property
    def rows(self) -> List[ObservableRow]:
        return [dict(row) for row in self._rows]

    def first_row(self) -> ObservableRow:
        return dict(self._rows[0])

    def last_row(self) -> ObservableRow:
        return dict(self._rows[-1])

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self._rows], dtype=float)

    @property
    def frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the fixed column order."""
        return pd.DataFrame(self._rows, columns=self.columns)

    def to_csv_text(self) -> str:
        return self.frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    def to_csv(self, path: Union[str, Path]) -> Path:
        """
        Write the series as CSV with 17 significant digits.

        Raises:
            ArtifactWriteError: If the file cannot be written.
        """
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(self.to_csv_text(), encoding="utf-8")
        except OSError as e:
            raise ArtifactWriteError(f"Cannot write observables to {target}: {e}",
                                     file_path=str(target), cause=e) from e
        logger.info(f"Wrote {len(self)} observable rows to {target}")
        return target

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "ObservableSeries":
        frame = pd.read_csv(path, float_precision="round_trip")
        series = cls(pauli="T_P" in frame.columns)
        for record in frame.to_dict(orient="records"):
            series.append(record)
        return series
