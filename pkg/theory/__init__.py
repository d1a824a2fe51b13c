"""
Closed-form predictions and certified reference values.

Exact variance solutions and blow-up criteria for uniform fields, Strichartz
admissibility, transform-free radial quadrature and the vortex-ring example
with its certificate.
"""

__version__ = "1.0.0"
