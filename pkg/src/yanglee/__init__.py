"""Numerical laboratory for Yang-Lee zeros of quantum phase transitions.

Two one-dimensional lattice models are covered: a PT-symmetric
single-particle chain with an imaginary staggered potential (two-band
free fermions) and the spin-1/2 XXZ chain at complex anisotropy.  The
package locates partition-function zeros, checks closed-form zero
conditions against exact diagonalization, and measures ground-state
entanglement scaling across the corresponding phase boundaries.
"""

__version__ = "0.1.0"

from .errors import DomainError, YangLeeError

__all__ = ["DomainError", "YangLeeError", "__version__"]
