"""
Functionals of the magnetic NLS and Pauli equations on grid fields.

Energies, angular momentum, the conserved blow-up functionals F_S and F_P
(each evaluated in two algebraically independent forms), the variance g and
its derivative, virial right-hand sides, observable series and their analysis.
"""

__version__ = "1.0.0"
