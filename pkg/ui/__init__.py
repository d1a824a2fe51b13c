"""
User Interface module for the magnetic NLS simulator.

This module contains the console theme and the Rich components used to
summarize a run.
"""

__version__ = "1.0.0"
