"""Exact computations with commutator maps, word maps and generating tuples
of small finite groups."""

__version__ = "0.1.0"

from .groups import CONVENTION, group_new
from .character import table_for

__all__ = ["CONVENTION", "__version__", "group_new", "table_for"]
