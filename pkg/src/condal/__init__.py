"""Finite Boolean algebras of conditionals, their probabilities and logic."""

from .errors import (
    AlgebraMismatchError,
    CapExceededError,
    CondalError,
    GuardError,
    ParseError,
    UndefinedConditionalError,
)
from .events import Event, EventAlgebra, lindenbaum, make_algebra, truth_set
from .conditionals import (
    CElement,
    ConditionalAlgebra,
    atom_rank,
    atom_unrank,
    atoms_below_basic,
    conditional_algebra,
    count_atoms_below,
    count_basic,
    equal_basic,
    eval_term,
    leq_basic,
    leq_basic_guarded,
    parse_term,
    part_i,
    recognize_basic,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatchError", "CapExceededError", "CondalError", "GuardError", "ParseError",
    "UndefinedConditionalError", "Event", "EventAlgebra", "lindenbaum", "make_algebra", "truth_set",
    "CElement", "ConditionalAlgebra", "atom_rank", "atom_unrank", "atoms_below_basic",
    "conditional_algebra", "count_atoms_below", "count_basic", "equal_basic", "eval_term",
    "leq_basic", "leq_basic_guarded", "parse_term", "part_i", "recognize_basic",
]
