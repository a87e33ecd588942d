"""Exact ground fields and the monomial valuation."""
from .base import AlgebraicField, CycElt, Fp
from .ratfunc import RatFunc
from .tower import (
    ExponentVector,
    FieldTower,
    build_tower,
    leading_part,
    monomial_valuation,
    residue_at_zero,
)

__all__ = [
    "AlgebraicField", "CycElt", "Fp", "RatFunc", "ExponentVector", "FieldTower",
    "build_tower", "leading_part", "monomial_valuation", "residue_at_zero",
]
