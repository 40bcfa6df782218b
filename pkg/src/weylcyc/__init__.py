"""Exact cyclic cocycles on the Weyl algebra and the algebra around them."""

from .scalar import Scalar, ONE, ZERO, I, HBAR
from .poly import Polynomial
from .graded import GradedElement
from .matrix import Matrix
from .weyl import WeylContext, WeylElement, FiniteTwist, moyal_mul, sp_act, sp_to_quadratic, cayley

__all__ = [
    "Scalar", "ONE", "ZERO", "I", "HBAR", "Polynomial", "GradedElement", "Matrix",
    "WeylContext", "WeylElement", "FiniteTwist", "moyal_mul", "sp_act", "sp_to_quadratic", "cayley",
]
