"""
Persistence module for the magnetic NLS simulator.

This module writes run artifacts: CSV tables, JSON reports and the manifest.
"""

__version__ = "1.0.0"
