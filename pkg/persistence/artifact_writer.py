"""
Run artifacts: observable CSV, JSON reports, tables and snapshots.

All floating-point output is round-trip exact: CSV uses 17 significant
digits, JSON uses Python's repr of floats with sorted keys. Infinities and
NaN are written as the strings "inf", "-inf" and "nan". Nothing time- or
host-dependent is recorded, so rerunning a mode into the same directory
reproduces identical bytes.

Example:
    >>> writer = ArtifactWriter("results/larmor")
    >>> writer.write_series(result.series)
    >>> writer.write_json("summary.json", {"mode": "evolve"})
"""

import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from errors import ArtifactWriteError
from observables.observable_series import FLOAT_FORMAT, ObservableSeries

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def to_plain(value: Any) -> Any:
    """
    Convert a report value into JSON-ready plain data.

    Dataclasses, enums, paths, numpy scalars/arrays and tuples are unfolded;
    non-finite floats become strings.
    """
    if hasattr(value, "to_dict") and callable(value.to_dict) and not isinstance(value, pd.DataFrame):
        return to_plain(value.to_dict())
    if is_dataclass(value) and not isinstance(value, type):
        return to_plain(asdict(value))
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return value.as_posix()
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, complex):
        return [to_plain(value.real), to_plain(value.imag)]
    return value


def dumps(document: Any) -> str:
    """Deterministic JSON text of a report."""
    return json.dumps(to_plain(document), sort_keys=True, indent=2, allow_nan=False) + "\n"


class ArtifactWriter:
    """
    Writes the artifacts of one run into an output directory.

    Attributes:
        out_dir: Output directory.
        snapshot_dir: Subdirectory for field snapshots.
        written: Paths written so far, in order.
    """

    def __init__(self, out_dir: Union[str, Path]) -> None:
        """
        Create the output directory.

        Raises:
            ArtifactWriteError: If the directory cannot be created.
        """
        self.out_dir = Path(out_dir)
        self.snapshot_dir = self.out_dir / "snapshots"
        self.written: List[Path] = []
        self._ensure_directory(self.out_dir)

    @staticmethod
    def _ensure_directory(directory: Path) -> None:
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ArtifactWriteError(f"Failed to create directory: {directory}",
                                     file_path=str(directory), cause=e) from e

    def prepare_snapshots(self) -> Path:
        """Create and return the snapshot subdirectory."""
        self._ensure_directory(self.snapshot_dir)
        return self.snapshot_dir

    def write_text(self, name: str, text: str) -> Path:
        """
        Write a text artifact.

        Raises:
            ArtifactWriteError: If the file cannot be written.
        """
        target = self.out_dir / name
        try:
            with open(target, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        except OSError as e:
            raise ArtifactWriteError(f"Cannot write {target}: {e}", file_path=str(target), cause=e) from e
        self.written.append(target)
        logger.info(f"Wrote {target}")
        return target

    def write_json(self, name: str, document: Any) -> Path:
        return self.write_text(name, dumps(document))

    def write_series(self, series: ObservableSeries, name: str = "observables.csv") -> Path:
        return self.write_text(name, series.to_csv_text())

    def write_table(self, name: str, rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> Path:
        """Write dictionaries as CSV with round-trip float formatting."""
        frame = pd.DataFrame(rows, columns=columns)
        text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return self.write_text(name, text)

    def relative_names(self) -> List[str]:
        return [path.relative_to(self.out_dir).as_posix() for path in self.written]
