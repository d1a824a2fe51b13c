"""
Logging modules for the magnetic NLS simulator.

This package handles application logging to console and/or to file.
"""

__version__ = "1.0.0"
