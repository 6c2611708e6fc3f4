"""Exact computations with permutohedral plates, blades and their algebras."""

from .osp import OSP
from .cone import ClosedCone
from .indicator import ConeFunction

__all__ = ["OSP", "ClosedCone", "ConeFunction"]
__version__ = "0.1.0"
