from .rings import (
    Rationals,
    PrimeField,
    IntegersModPrimePower,
    PolyExtension,
    QQ,
    ReductionError,
)
from .series import TruncatedSeries, CompositionDomainError, ReversionError
from .multipoly import MultiPoly, kronecker_mul
from .symmetric import express_in_elementary, elementary_poly, SymmetryError
from . import linalg

__all__ = [
    "Rationals",
    "PrimeField",
    "IntegersModPrimePower",
    "PolyExtension",
    "QQ",
    "ReductionError",
    "TruncatedSeries",
    "CompositionDomainError",
    "ReversionError",
    "MultiPoly",
    "kronecker_mul",
    "express_in_elementary",
    "elementary_poly",
    "SymmetryError",
    "linalg",
]
