"""
Uniform periodic grids, complex field containers and discrete transforms.

This package holds the sampling layer every other module builds on: the
Grid type, scalar and spinor fields, the 2pi-in-exponent Fourier transform,
inner products, L^q norms, the boundary-mass guard and snapshot files.
"""

__version__ = "1.0.0"
