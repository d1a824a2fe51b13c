"""
Exception hierarchy for the magnetic NLS simulator.

Every exception carries an optional underlying cause plus the context that
produced it. The CLI maps the families below to process exit codes.
"""

from typing import Optional


class MagneticNLSError(Exception):
    """Base exception for all simulator errors."""

    exit_code: int = 1

    def __init__(self, message: str, cause: Optional[Exception] = None):
        super().__init__(message)
        self.message = message
        self.cause = cause


class ConfigError(MagneticNLSError):
    """Invalid configuration: unknown key, out-of-range value, malformed file."""

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None,
                 cause: Optional[Exception] = None):
        super().__init__(message, cause)
        self.key = key


class GridError(ConfigError):
    """Invalid grid parameters."""
    pass


class GridMismatchError(MagneticNLSError):
    """Two fields (or a field and a plan) live on different grids."""
    pass


class PlanMismatchError(MagneticNLSError):
    """A propagator plan was applied to a field it was not built for."""
    pass


class NumericalGuardError(MagneticNLSError):
    """A numerical precondition failed at run time."""

    exit_code = 3


class UnresolvedFieldError(NumericalGuardError):
    """Field mass leaks into the periodic boundary shell."""

    def __init__(self, message: str, boundary_mass: Optional[float] = None,
                 cause: Optional[Exception] = None):
        super().__init__(message, cause)
        self.boundary_mass = boundary_mass


class SingularTimeError(NumericalGuardError):
    """Mehler kernel requested at a time with sin(Bt) = 0."""

    def __init__(self, message: str, angle: Optional[float] = None,
                 cause: Optional[Exception] = None):
        super().__init__(message, cause)
        self.angle = angle


class ConsistencyError(MagneticNLSError):
    """Two algebraically equivalent forms of an observable disagree."""

    exit_code = 4

    def __init__(self, message: str, first: Optional[float] = None,
                 second: Optional[float] = None, cause: Optional[Exception] = None):
        super().__init__(message, cause)
        self.first = first
        self.second = second


class ArtifactWriteError(MagneticNLSError):
    """Writing an output artifact failed."""

    def __init__(self, message: str, file_path: Optional[str] = None,
                 cause: Optional[Exception] = None):
        super().__init__(message, cause)
        self.file_path = file_path
