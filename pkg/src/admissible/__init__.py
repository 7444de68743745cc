"""Admissible sets in {0,1,2}^m: clash checks, typed clashes, the I(m, m-2)
triple colouring, closed-form constructions, exact search and cap-set bounds."""

__version__ = "0.1.0"

from .core import (
    ClashWitness,
    FormatError,
    TernaryVector,
    VectorFamily,
    find_clash,
    is_admissible,
    is_I_set,
    is_pair_clash,
    is_triple_clash,
    project,
    star,
    support,
)
from .construct import construct_I, typed_family
from .search import SearchConfig, SearchOutcome, Status, exists_I, f_max
from .bounds import capset_base, capset_count

__all__ = [
    "ClashWitness",
    "FormatError",
    "TernaryVector",
    "VectorFamily",
    "find_clash",
    "is_admissible",
    "is_I_set",
    "is_pair_clash",
    "is_triple_clash",
    "project",
    "star",
    "support",
    "construct_I",
    "typed_family",
    "SearchConfig",
    "SearchOutcome",
    "Status",
    "exists_I",
    "f_max",
    "capset_base",
    "capset_count",
]
