"""
Logging setup for the magnetic NLS simulator.

All simulator loggers hang below the 'magnls' namespace, so configuring that
one logger controls every module and leaves third-party libraries alone.
Console records go through rich on stderr (stdout belongs to the run
summary); an optional log file receives plain records. numpy floating-point
warnings raised near a collapse are routed into the same handlers.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from rich.console import Console
from rich.logging import RichHandler

from errors import ConfigError

ROOT_LOGGER = "magnls"


class LoggingManager:
    """
    Owns the handlers of the 'magnls' logger.

    Modules never touch handlers; they call get_logger(__name__) and the
    level chosen on the command line applies to all of them.
    """

    LOG_LEVELS: Dict[str, int] = {
        'DEBUG': logging.DEBUG,
        'INFO': logging.INFO,
        'WARNING': logging.WARNING,
        'ERROR': logging.ERROR,
        'CRITICAL': logging.CRITICAL
    }

    # No timestamps: two runs of the same config produce the same log file
    FILE_FORMAT = '%(levelname)-8s %(name)s: %(message)s'
    CONSOLE_WIDTH = 100

    @classmethod
    def _console_handler(cls) -> logging.Handler:
        console = Console(file=sys.stderr, width=cls.CONSOLE_WIDTH)
        return RichHandler(console=console, show_path=False, show_time=False, rich_tracebacks=False)

    @classmethod
    def _file_handler(cls, log_file: str, format_string: Optional[str]) -> logging.Handler:
        try:
            path = Path(log_file)
            path.parent.mkdir(parents=True, exist_ok=True)
            handler = logging.FileHandler(path, mode='w', encoding='utf-8')
        except OSError as e:
            raise ConfigError(f"Cannot open log file {log_file}: {e}", key="log_file", cause=e) from e
        handler.setFormatter(logging.Formatter(format_string or cls.FILE_FORMAT))
        return handler

    @classmethod
    def configure_logging(
        cls,
        enabled: bool = True,
        level: str = 'WARNING',
        log_file: Optional[str] = None,
        format_string: Optional[str] = None,
        file_only: bool = False
    ) -> logging.Logger:
        """
        Replace the handlers of the simulator logger.

        Args:
            enabled: False silences the simulator entirely.
            level: Level name, case-insensitive.
            log_file: Optional log file, truncated on open.
            format_string: Record format of the log file.
            file_only: Skip the console handler. Requires log_file.

        Returns:
            The configured 'magnls' logger.

        Raises:
            ConfigError: Unknown level, file_only without a file, or a log
                file that cannot be opened.
        """
        root = logging.getLogger(ROOT_LOGGER)
        for handler in root.handlers[:]:
            root.removeHandler(handler)
            handler.close()
        root.propagate = False

        if not enabled:
            root.addHandler(logging.NullHandler())
            root.setLevel(logging.CRITICAL + 1)
            logging.captureWarnings(False)
            return root

        if not cls.is_valid_level(level):
            raise ConfigError(f"Invalid log level: {level}. Must be one of: {cls.get_available_levels()}",
                              key="log_level")
        if file_only and not log_file:
            raise ConfigError("--file-only requires --log-file", key="log_file")

        handlers: List[logging.Handler] = []
        if not file_only:
            handlers.append(cls._console_handler())
        if log_file:
            handlers.append(cls._file_handler(log_file, format_string))

        root.setLevel(cls.LOG_LEVELS[level.upper()])
        for handler in handlers:
            root.addHandler(handler)

        # RuntimeWarnings from overflow during collapse
        logging.captureWarnings(True)
        warnings_logger = logging.getLogger("py.warnings")
        warnings_logger.handlers = list(handlers)
        warnings_logger.propagate = False
        return root

    @classmethod
    def get_available_levels(cls) -> List[str]:
        return list(cls.LOG_LEVELS.keys())

    @classmethod
    def is_valid_level(cls, level: str) -> bool:
        return level.upper() in cls.LOG_LEVELS


def setup_application_logging(
    verbose: bool = False,
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    quiet: bool = False,
    file_only: bool = False
) -> logging.Logger:
    """
    Configure logging from the command-line flags.

    --quiet wins over everything; --log-level wins over --verbose.
    """
    if quiet:
        return LoggingManager.configure_logging(enabled=False)

    level = log_level or ('INFO' if verbose else 'WARNING')
    return LoggingManager.configure_logging(
        enabled=True,
        level=level,
        log_file=log_file,
        file_only=file_only
    )


def get_logger(name: str) -> logging.Logger:
    """
    Logger for a simulator module.

    Args:
        name: Module name, usually __name__.

    Returns:
        The 'magnls.<name>' logger.
    """
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
