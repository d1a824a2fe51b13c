"""
Binary field snapshots.

File layout:
    line 1   JSON header {"L", "components", "dim", "layout": "x1-fastest", "n"}
             with sorted keys, terminated by a newline
    rest     little-endian float64 pairs (re, im), one block per component
             (psi_1 then psi_2 for spinors), x1 varying fastest

Writing then reading a snapshot reproduces every bit of the field.

Example:
    >>> write_snapshot(field, "out/snapshot_00000100.bin")
    >>> restored = read_snapshot("out/snapshot_00000100.bin")
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from errors import ArtifactWriteError, ConfigError
from field_grid.fields import Field, ScalarField, SpinorField
from field_grid.grid import Grid, make_grid

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


LAYOUT = "x1-fastest"
REQUIRED_HEADER_FIELDS = ("L", "components", "dim", "layout", "n")


class SnapshotFormatError(ConfigError):
    """Raised when a snapshot file cannot be parsed."""

    def __init__(self, message: str, file_path: Union[str, Path, None] = None, cause: Optional[Exception] = None):
        super().__init__(message, key=None, cause=cause)
        self.file_path = str(file_path) if file_path is not None else None


def snapshot_header(field: Field) -> Dict[str, Any]:
    grid = field.grid
    return {
        "L": grid.L,
        "components": len(field.components),
        "dim": grid.dim,
        "layout": LAYOUT,
        "n": grid.n,
    }


def encode_snapshot(field: Field) -> bytes:
    """Serialize a field to the snapshot byte format."""
    header = json.dumps(snapshot_header(field), sort_keys=True).encode("ascii") + b"\n"
    blocks = [np.ravel(c, order="F").astype("<c16").tobytes() for c in field.components]
    return header + b"".join(blocks)


def write_snapshot(field: Field, path: Union[str, Path]) -> Path:
    """
    Write a field snapshot.

    Args:
        field: Scalar or spinor field.
        path: Destination file.

    Returns:
        The written path.

    Raises:
        ArtifactWriteError: If the file cannot be written.
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(encode_snapshot(field))
    except OSError as e:
        raise ArtifactWriteError(f"Failed to write snapshot {target}", file_path=str(target), cause=e) from e
    logger.debug(f"Snapshot written: {target}")
    return target


def _validate_header(header: Dict[str, Any], path: Path) -> Grid:
    missing = [key for key in REQUIRED_HEADER_FIELDS if key not in header]
    if missing:
        raise SnapshotFormatError(f"Snapshot header misses fields {missing}", file_path=path)
    if header["layout"] != LAYOUT:
        raise SnapshotFormatError(f"Unsupported snapshot layout {header['layout']!r}", file_path=path)
    if header["components"] not in (1, 2):
        raise SnapshotFormatError(f"Snapshot must have 1 or 2 components, got {header['components']}",
                                  file_path=path)
    return make_grid(header["dim"], header["n"], header["L"])


def decode_snapshot(payload: bytes, path: Union[str, Path] = "<memory>") -> Field:
    """Parse snapshot bytes into a field."""
    path = Path(path)
    newline = payload.find(b"\n")
    if newline < 0:
        raise SnapshotFormatError("Snapshot has no header line", file_path=path)
    try:
        header = json.loads(payload[:newline].decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SnapshotFormatError(f"Malformed snapshot header: {e}", file_path=path, cause=e) from e
    grid = _validate_header(header, path)

    data = np.frombuffer(payload[newline + 1:], dtype="<c16")
    components = header["components"]
    if data.size != components * grid.size:
        raise SnapshotFormatError(
            f"Snapshot holds {data.size} values, header implies {components * grid.size}", file_path=path
        )
    blocks = [data[i * grid.size:(i + 1) * grid.size].reshape(grid.shape, order="F") for i in range(components)]
    if components == 1:
        return ScalarField(grid, blocks[0])
    return SpinorField(grid, blocks[0], blocks[1])


def read_snapshot(path: Union[str, Path]) -> Field:
    """
    Read a snapshot written by write_snapshot.

    Args:
        path: Snapshot file.

    Returns:
        ScalarField for one component, SpinorField for two.

    Raises:
        SnapshotFormatError: If the file is missing or malformed.
    """
    source = Path(path)
    try:
        payload = source.read_bytes()
    except OSError as e:
        raise SnapshotFormatError(f"Cannot read snapshot {source}", file_path=source, cause=e) from e
    return decode_snapshot(payload, source)
