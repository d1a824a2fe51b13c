"""
Command-line layer of the magnetic NLS lab.

The mode registry, the experiment runner with its six modes and the
argparse front end.
"""

__version__ = "1.0.0"
