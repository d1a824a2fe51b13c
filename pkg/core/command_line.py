"""
Command-line interface of the magnetic NLS simulator.

    magnls <mode> --config <path> --out <dir> [--seed N] [--override key=value]...

Parses the arguments, configures logging and hands over to the experiment
runner, whose return value is the process exit code.
"""

import argparse
import sys
from typing import List, Optional

from core import experiment_runner
from core.mode_registry import get_mode_names
from errors import MagneticNLSError
from logger.logging_manager import LoggingManager, setup_application_logging

# Configure logging
from logger.logging_manager import get_logger
logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the run options and the logging group."""
    parser = argparse.ArgumentParser(
        prog="magnls",
        description="Magnetic NLS lab - spectral simulation and verification of the magnetic Schroedinger flow",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  magnls evolve --config configs/linear_larmor.json --out results/larmor
  magnls blowup-scan --config configs/blowup_scan.json --out results/scan --charts
  magnls strichartz-check --config configs/strichartz.json --out results/strichartz -v
  magnls evolve --config configs/focusing_conservation.json --out results/run --override dt=5e-4
  magnls certify-example --out results/certificate

Exit codes: 0 success, 1 other error, 2 configuration, 3 numerical guard, 4 consistency.
        """
    )
    parser.add_argument(
        'mode',
        choices=get_mode_names(),
        help='Experiment to run'
    )
    parser.add_argument(
        '--config',
        type=str,
        default=None,
        help='JSON configuration file (defaults apply when omitted)'
    )
    parser.add_argument(
        '--out',
        type=str,
        required=True,
        help='Output directory for artifacts'
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Seed for random initial states (overrides the config)'
    )
    parser.add_argument(
        '--override',
        action='append',
        default=[],
        metavar='KEY=VALUE',
        help='Override one config value, e.g. initial.width=0.5 (repeatable)'
    )
    parser.add_argument(
        '--charts',
        action='store_true',
        help='Also write interactive HTML charts'
    )

    # Logging options
    logging_group = parser.add_argument_group('Logging Options')
    logging_group.add_argument(
        '-v', '--verbose',
        action='store_true',
        help='Enable verbose logging (INFO level)'
    )
    logging_group.add_argument(
        '--log-level',
        choices=LoggingManager.get_available_levels(),
        help='Set specific log level (overrides --verbose)'
    )
    logging_group.add_argument(
        '--log-file',
        type=str,
        help='Save logs to specified file (in addition to console output)'
    )
    logging_group.add_argument(
        '--file-only',
        action='store_true',
        help='Log only to file, no console output (requires --log-file)'
    )
    logging_group.add_argument(
        '-q', '--quiet',
        action='store_true',
        help='Disable all logging output'
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one experiment.

    Args:
        argv: Argument list (sys.argv[1:] when None).

    Returns:
        Exit code from the runner; 2 for argument errors.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        setup_application_logging(
            verbose=args.verbose,
            log_level=args.log_level,
            log_file=args.log_file,
            quiet=args.quiet,
            file_only=args.file_only
        )
    except MagneticNLSError as e:
        print(f"magnls: {e}", file=sys.stderr)
        return e.exit_code
    return experiment_runner.run(
        args.mode,
        args.config,
        args.out,
        seed=args.seed,
        overrides=args.override,
        charts=args.charts,
    )


if __name__ == "__main__":
    sys.exit(main())
