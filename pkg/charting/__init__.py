"""
Charting module for the magnetic NLS simulator.

This module contains a chart builder for observable series, blow-up scans
and Strichartz node diagnostics.
"""

__version__ = "1.0.0"
