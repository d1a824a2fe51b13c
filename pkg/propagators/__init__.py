"""
Exact linear evolution operators for a uniform magnetic field.

The Mehler operator M(t) (dense oracle and fast transform paths), the 3D
factorization U_S(t) = e^{it d_3^2} M(t), the free propagator and the Pauli
spin phase U_P(t) = e^{-iBt sigma_3} U_S(t).
"""

__version__ = "1.0.0"
