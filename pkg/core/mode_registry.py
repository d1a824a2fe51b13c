"""
Experiment mode registry.

Each CLI mode is an ExperimentMode subclass that registers itself with the
@register_mode decorator under its `name`. The runner looks modes up by
name, so adding a mode needs no change to the dispatch code.

Example:
    @register_mode
    class EvolveMode(ExperimentMode):
        name = "evolve"

        def execute(self, context):
            ...
"""

import inspect
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Type

from errors import ConfigError, MagneticNLSError

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


class RegistryError(MagneticNLSError):
    """Exception raised for invalid mode registrations."""
    pass


class DuplicateModeError(RegistryError):
    """Exception raised when two different classes claim the same mode name."""
    pass


@dataclass
class ModeOutcome:
    """
    Result of one mode execution.

    Attributes:
        summary: Values shown in the console summary table.
        verdicts: Optional pass/fail flags keyed like summary.
        artifacts: Relative names of the files written.
    """

    summary: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)


class ExperimentMode(ABC):
    """
    One experiment the runner can execute.

    Attributes:
        name: CLI mode name.
        description: One-line help text.
    """

    name: str = ""
    description: str = ""

    @abstractmethod
    def execute(self, context: Any) -> ModeOutcome:
        """Run the experiment described by the context and write its artifacts."""
        pass


# Maps CLI mode names to mode classes
MODE_REGISTRY: Dict[str, Type[ExperimentMode]] = {}


def register_mode(cls: Type[ExperimentMode]) -> Type[ExperimentMode]:
    """
    Decorator registering an ExperimentMode subclass under cls.name.

    Raises:
        RegistryError: If cls is not an ExperimentMode subclass or has no name.
        DuplicateModeError: If another class already uses the name.
    """
    if not inspect.isclass(cls):
        raise RegistryError(f"Only classes can be registered as modes, got {type(cls)}")
    if not issubclass(cls, ExperimentMode):
        raise RegistryError(f"Mode class '{cls.__name__}' must inherit from ExperimentMode")
    if not cls.name:
        raise RegistryError(f"Mode class '{cls.__name__}' does not define a name")

    existing = MODE_REGISTRY.get(cls.name)
    if existing is not None and existing is not cls:
        raise DuplicateModeError(f"Mode '{cls.name}' is already registered by {existing.__name__}")

    MODE_REGISTRY[cls.name] = cls
    logger.debug(f"Registered mode: {cls.name}")
    return cls


def get_mode_names() -> List[str]:
    return sorted(MODE_REGISTRY)


def create_mode(name: str) -> ExperimentMode:
    """
    Instantiate a registered mode.

    Raises:
        ConfigError: If no mode has that name.
    """
    try:
        mode_class = MODE_REGISTRY[name]
    except KeyError as e:
        raise ConfigError(f"Unknown mode '{name}'; available: {', '.join(get_mode_names())}",
                          key="mode", cause=e) from e
    return mode_class()
