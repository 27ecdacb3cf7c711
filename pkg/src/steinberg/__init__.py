"""Exact computations with symplectic Tits buildings, lattice complexes and apartment classes."""

__version__ = "0.1.0"

from .chains import Chain, suspend, desuspend
from .errors import BudgetExceeded, MalformedMatrixError, NotSymplecticError, TruncationError
from .symplectic import GroundRing, Line, SpElement, Subspace, SymplecticSpace
from .topology import ChainComplexZ, HomologyReport, Poset, SimplicialComplex, reduced_homology

__all__ = [
    "Chain", "suspend", "desuspend",
    "BudgetExceeded", "MalformedMatrixError", "NotSymplecticError", "TruncationError",
    "GroundRing", "Line", "SpElement", "Subspace", "SymplecticSpace",
    "ChainComplexZ", "HomologyReport", "Poset", "SimplicialComplex", "reduced_homology",
]
