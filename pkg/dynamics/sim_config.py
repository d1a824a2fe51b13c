"""
Experiment description: the SimConfig record and its JSON loader.

A config file is a JSON object whose keys mirror the SimConfig fields, with
nested sections for the initial state, detection thresholds, the spinor split
and Strichartz settings. Unknown keys are rejected by name. Command-line
overrides use dotted keys ("initial.width=0.5", "thresholds.kinetic_ratio=1e2")
and JSON values, falling back to plain strings.

Example:
    >>> config = load_config("configs/linear_larmor.json", ["B=4.0"])
    >>> config.B
    4.0
"""

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from config import (
    get_blowup_thresholds,
    get_grid_config,
    get_propagator_config,
    get_simulation_config,
    get_strichartz_config,
)
from errors import ConfigError
from field_grid.grid import Grid, make_grid

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


INITIAL_KINDS = ("gaussian", "lowest-landau", "landau", "vortex-ring", "file", "random-bandlimited")
EQUATIONS = ("scalar", "pauli")
FREE_SIDE_METHODS = ("auto", "closed-form", "grid")


@dataclass(frozen=True)
class InitialStateSpec:
    """
    Initial-state descriptor.

    Attributes:
        kind: One of INITIAL_KINDS.
        center: Gaussian center (length dim; shorter tuples are zero-padded).
        width: Gaussian width sigma in e^{-|x - c|^2 / (2 sigma^2)}.
        momentum: Plane-wave momentum k in e^{i k.x}.
        charge: Angular charge m of the e^{i m theta} factor (also the Landau index).
        mass: Target L^2 mass after normalization.
        path: Snapshot file for kind 'file'.
        cutoff: Frequency cutoff (cycles per unit length) for 'random-bandlimited'.
        envelope: Gaussian envelope width for 'random-bandlimited'.
    """

    kind: str = "gaussian"
    center: Tuple[float, ...] = (0.0, 0.0)
    width: float = 1.0
    momentum: Tuple[float, ...] = (0.0, 0.0)
    charge: int = 0
    mass: float = 1.0
    path: Optional[str] = None
    cutoff: float = 1.0
    envelope: float = 1.0


@dataclass(frozen=True)
class BlowupSettings:
    kinetic_ratio: float = 1e6
    variance_floor: float = 1e-4


@dataclass(frozen=True)
class SpinorSpec:
    """Weights (up, down) used to split a scalar initial state into a spinor."""

    up: complex = 1.0
    down: complex = 0.0


@dataclass(frozen=True)
class StrichartzSpec:
    """Strichartz-check settings; q and r accept "inf"."""

    q: float = 4.0
    r: float = 4.0
    nodes: int = 64
    B_values: Tuple[float, ...] = (1.0, 2.0, 4.0)
    window_scale: float = 40.0
    free_side: str = "auto"


@dataclass(frozen=True)
class SimConfig:
    """
    Full description of one experiment.

    Attributes:
        dim, n, L: Grid parameters.
        p, mu, B: Nonlinearity power, coupling and field strength.
        dt, t_end: Base Strang step and final time.
        snapshot_stride, observable_stride: Steps between snapshots / observable rows.
        thresholds: Blow-up detection policy.
        initial: Initial-state descriptor.
        equation: 'scalar' or 'pauli'.
        propagator: Fast linear path, 'split-chirp' or 'chirp-z'.
        adaptive: Halve dt when the kinetic energy doubles.
        max_dt_halvings: Bound on the number of halvings.
        B_list: Field strengths for blow-up scans.
        seed: Seed for random initial states.
        spinor: Component weights for Pauli runs.
        strichartz: Strichartz-check settings.
    """

    dim: int = 2
    n: int = 64
    L: float = 8.0
    p: float = 3.0
    mu: float = -1.0
    B: float = 2.0
    dt: float = 1e-3
    t_end: float = 1.0
    snapshot_stride: int = 0
    observable_stride: int = 10
    thresholds: BlowupSettings = field(default_factory=BlowupSettings)
    initial: InitialStateSpec = field(default_factory=InitialStateSpec)
    equation: str = "scalar"
    propagator: str = "split-chirp"
    adaptive: bool = True
    max_dt_halvings: int = 12
    B_list: Tuple[float, ...] = ()
    seed: int = 0
    spinor: SpinorSpec = field(default_factory=SpinorSpec)
    strichartz: StrichartzSpec = field(default_factory=StrichartzSpec)

    def grid(self) -> Grid:
        return make_grid(self.dim, self.n, self.L)

    def with_field(self, B: float) -> "SimConfig":
        return replace(self, B=float(B))

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data form, used for reports and the run manifest."""
        data = asdict(self)
        data['spinor'] = {k: _complex_to_json(v) for k, v in data['spinor'].items()}
        return data


_SECTIONS = {
    'thresholds': BlowupSettings,
    'initial': InitialStateSpec,
    'spinor': SpinorSpec,
    'strichartz': StrichartzSpec,
}

_TUPLE_FIELDS = {'center', 'momentum', 'B_values', 'B_list'}


def _complex_to_json(value: complex) -> Any:
    value = complex(value)
    return value.real if value.imag == 0.0 else [value.real, value.imag]


def _coerce_complex(value: Any, key: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ConfigError(f"'{key}' must be a number or [re, im], got {value!r}", key=key)


def default_document() -> Dict[str, Any]:
    """Defaults from config.py assembled in the file layout."""
    grid = get_grid_config()
    simulation = get_simulation_config()
    thresholds = get_blowup_thresholds()
    strichartz = get_strichartz_config()
    return {
        'dim': grid['dim'], 'n': grid['n'], 'L': grid['L'],
        'p': simulation['p'], 'mu': simulation['mu'], 'B': simulation['B'],
        'dt': simulation['dt'], 't_end': simulation['t_end'],
        'snapshot_stride': simulation['snapshot_stride'],
        'observable_stride': simulation['observable_stride'],
        'adaptive': simulation['adaptive'],
        'max_dt_halvings': simulation['max_dt_halvings'],
        'equation': simulation['equation'],
        'propagator': get_propagator_config()['method'],
        'thresholds': dict(thresholds),
        'strichartz': {'nodes': strichartz['nodes'], 'window_scale': strichartz['free_window_scale']},
    }


def _merge(base: Dict[str, Any], update: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    merged = dict(base)
    for key, value in update.items():
        if key in _SECTIONS and not prefix:
            if not isinstance(value, dict):
                raise ConfigError(f"Section '{key}' must be a JSON object", key=key)
            merged[key] = _merge(merged.get(key, {}), value, prefix=key)
        else:
            merged[key] = value
    return merged


def _build_section(name: str, data: Dict[str, Any]):
    section_class = _SECTIONS[name]
    known = {f.name for f in fields(section_class)}
    for key in data:
        if key not in known:
            raise ConfigError(f"Unknown config key '{name}.{key}'", key=f"{name}.{key}")
    values = {}
    for key, value in data.items():
        if key in _TUPLE_FIELDS:
            values[key] = tuple(float(v) for v in value)
        elif section_class is StrichartzSpec and key in ("q", "r", "window_scale"):
            values[key] = float(value)
        elif section_class is SpinorSpec:
            values[key] = _coerce_complex(value, f"{name}.{key}")
        else:
            values[key] = value
    return section_class(**values)


def build_config(document: Dict[str, Any]) -> SimConfig:
    """
    Validate a config document and build the SimConfig.

    Args:
        document: Parsed JSON object (defaults are merged in first).

    Returns:
        Validated SimConfig.

    Raises:
        ConfigError: On unknown keys, wrong types or out-of-range values.
    """
    if not isinstance(document, dict):
        raise ConfigError("Config root must be a JSON object")
    merged = _merge(default_document(), document)
    known = {f.name for f in fields(SimConfig)}
    for key in merged:
        if key not in known:
            raise ConfigError(f"Unknown config key '{key}'", key=key)

    values: Dict[str, Any] = {}
    try:
        for key, value in merged.items():
            if key in _SECTIONS:
                values[key] = _build_section(key, value)
            elif key in _TUPLE_FIELDS:
                values[key] = tuple(float(v) for v in value)
            elif key in ('dim', 'n', 'snapshot_stride', 'observable_stride', 'max_dt_halvings', 'seed'):
                if isinstance(value, bool) or float(value) != int(value):
                    raise ConfigError(f"'{key}' must be an integer, got {value!r}", key=key)
                values[key] = int(value)
            elif key in ('L', 'p', 'mu', 'B', 'dt', 't_end'):
                values[key] = float(value)
            elif key == 'adaptive':
                values[key] = bool(value)
            else:
                values[key] = value
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Malformed config value: {e}", cause=e) from e

    config = SimConfig(**values)
    validate_config(config)
    return config


def validate_config(config: SimConfig) -> None:
    """
    Range checks on a SimConfig.

    Raises:
        ConfigError: Naming the offending key.
    """
    config.grid()
    if not config.p > 1.0:
        raise ConfigError(f"Nonlinearity power p must exceed 1, got {config.p}", key="p")
    if config.dim == 3 and not config.p < 5.0:
        raise ConfigError(f"3D runs need p < 5 (energy subcritical), got {config.p}", key="p")
    for key in ('dt', 't_end'):
        value = getattr(config, key)
        if not (math.isfinite(value) and value > 0.0):
            raise ConfigError(f"'{key}' must be positive, got {value}", key=key)
    if not math.isfinite(config.B) or not math.isfinite(config.mu):
        raise ConfigError("B and mu must be finite", key="B")
    if config.snapshot_stride < 0:
        raise ConfigError("snapshot_stride must be >= 0", key="snapshot_stride")
    if config.observable_stride < 1:
        raise ConfigError("observable_stride must be >= 1", key="observable_stride")
    if config.max_dt_halvings < 0:
        raise ConfigError("max_dt_halvings must be >= 0", key="max_dt_halvings")
    if config.equation not in EQUATIONS:
        raise ConfigError(f"equation must be one of {EQUATIONS}, got {config.equation!r}", key="equation")
    if config.propagator not in ("split-chirp", "chirp-z", "auto"):
        raise ConfigError(f"Unknown propagator {config.propagator!r}", key="propagator")
    if config.initial.kind not in INITIAL_KINDS:
        raise ConfigError(f"initial.kind must be one of {INITIAL_KINDS}, got {config.initial.kind!r}",
                          key="initial.kind")
    if not config.initial.width > 0.0 or not config.initial.mass > 0.0:
        raise ConfigError("initial.width and initial.mass must be positive", key="initial")
    if config.initial.kind == "file" and not config.initial.path:
        raise ConfigError("initial.path is required for kind 'file'", key="initial.path")
    thresholds = config.thresholds
    if not thresholds.kinetic_ratio > 1.0 or not 0.0 < thresholds.variance_floor < 1.0:
        raise ConfigError("thresholds need kinetic_ratio > 1 and 0 < variance_floor < 1", key="thresholds")
    strichartz = config.strichartz
    if strichartz.free_side not in FREE_SIDE_METHODS:
        raise ConfigError(f"strichartz.free_side must be one of {FREE_SIDE_METHODS}", key="strichartz.free_side")
    if strichartz.nodes < 2 or not strichartz.window_scale > 0.0:
        raise ConfigError("strichartz needs nodes >= 2 and window_scale > 0", key="strichartz")


def parse_override(text: str) -> Tuple[str, Any]:
    """
    Split 'key=value'; the value is parsed as JSON with a string fallback.

    Raises:
        ConfigError: If there is no '=' or the key is empty.
    """
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"Override must look like key=value, got {text!r}", key=text)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(document: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Apply dotted key=value overrides to a config document."""
    result = json.loads(json.dumps(document))
    for text in overrides:
        key, value = parse_override(text)
        parts = key.split(".")
        target = result
        for part in parts[:-1]:
            node = target.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"Override key '{key}' does not name a section", key=key)
            target = node
        target[parts[-1]] = value
        logger.debug(f"Override {key} = {value!r}")
    return result


def read_document(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON config file.

    Raises:
        ConfigError: If the file cannot be read or parsed.
    """
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {config_path}: {e}", key=str(config_path), cause=e) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config {config_path} is not valid JSON: {e}", key=str(config_path), cause=e) from e


def load_config(path: Union[str, Path, None], overrides: Iterable[str] = ()) -> SimConfig:
    """
    Load, override and validate a config file.

    Args:
        path: JSON file, or None for the defaults.
        overrides: 'key=value' strings applied after loading.

    Returns:
        Validated SimConfig.

    Raises:
        ConfigError: On unreadable files, unknown keys or invalid values.
    """
    document = read_document(path) if path is not None else {}
    document = apply_overrides(document, overrides)
    config = build_config(document)
    logger.info(f"Loaded config: dim={config.dim} n={config.n} L={config.L} p={config.p} "
                f"mu={config.mu} B={config.B} dt={config.dt} t_end={config.t_end}")
    return config
