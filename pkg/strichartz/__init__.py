"""
Strichartz laboratory.

Space-time Lebesgue norms of magnetic and free evolutions, and the
verification of the identity between them for 2D data.
"""

__version__ = "1.0.0"
