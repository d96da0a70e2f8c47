"""Self-contained numerical kernels used throughout the package."""

from .bessel import bessel_k0
from .eig import EigenDecompositionError, EigenSystem, dense_eig
from .newton import NewtonError, newton_system
from .polynomials import ComplexPolynomial, RootFindingError, roots_of_polynomial
from .quadrature import QuadratureError, QuadratureResult, adaptive_integrate

__all__ = [
    "ComplexPolynomial",
    "EigenDecompositionError",
    "EigenSystem",
    "NewtonError",
    "QuadratureError",
    "QuadratureResult",
    "RootFindingError",
    "adaptive_integrate",
    "bessel_k0",
    "dense_eig",
    "newton_system",
    "roots_of_polynomial",
]
