"""Quartic-form invariants of cubic transformations of the plane, in exact arithmetic."""

from .kernel import BACKEND
from .polyalg import Monomial, MultiPoly, poly_parse

__all__ = ["BACKEND", "Monomial", "MultiPoly", "poly_parse"]
__version__ = "0.1.0"
