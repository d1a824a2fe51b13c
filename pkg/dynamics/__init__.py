"""
Nonlinear time evolution by Strang splitting.

Experiment configuration, initial states, scalar and Pauli evolution loops
with adaptive stepping, and blow-up detection.
"""

__version__ = "1.0.0"
