"""Graphs encoded as finite groups, and the logic that transfers between them."""

from .budget import Budget, BudgetExceeded
from .groups import (
    CyclicGroup,
    DenseGroup,
    DirectProduct,
    FiniteGroup,
    GroupError,
    Homomorphism,
    SemidirectProduct,
    Subgroup,
)

__all__ = [
    "Budget",
    "BudgetExceeded",
    "CyclicGroup",
    "DenseGroup",
    "DirectProduct",
    "FiniteGroup",
    "GroupError",
    "Homomorphism",
    "SemidirectProduct",
    "Subgroup",
]
