#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Main entry point for the magnetic NLS lab.

Runs one experiment mode from the command line; see core/command_line.py
for the options and exit codes.
"""

import sys
from typing import NoReturn

from core.command_line import main


def run_application() -> NoReturn:
    """
    Run the command-line interface and exit with its return code.

    Raises:
        SystemExit: Always exits with the return code from the CLI main function.
    """
    sys.exit(main())


if __name__ == "__main__":
    run_application()
