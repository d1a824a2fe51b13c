"""
Pauli extension of the magnetic NLS simulator.

Spinor evolution under [sigma.(p+A)]^2 + mu |psi|^{p-1}, the Pauli virial
identity and the variance/blow-up oracles with F_P in place of F_S.
"""

__version__ = "1.0.0"
