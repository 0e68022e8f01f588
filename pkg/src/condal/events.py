"""Finite atomic Boolean algebras, their events, and Lindenbaum algebras.

An algebra with ``n`` atoms is identified with the powerset of ``{0..n-1}``;
an event is an ``n``-bit integer whose bit ``i`` says that atom ``i`` lies
below it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import AlgebraMismatchError, CapExceededError
from . import syntax
from .syntax import Formula

DEFAULT_MAX_ATOMS = 8
_RESERVED_LABELS = frozenset({"T", "F", "⊤", "⊥"})


def max_atoms() -> int:
    """Atom cap; the ``CONDAL_MAX_ATOMS`` environment variable overrides the default."""
    raw = os.environ.get("CONDAL_MAX_ATOMS")
    if raw is None:
        return DEFAULT_MAX_ATOMS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CONDAL_MAX_ATOMS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("CONDAL_MAX_ATOMS must be at least 1")
    return value


@dataclass(frozen=True)
class EventAlgebra:
    """A finite Boolean algebra given by its ordered list of atom labels.

    ``variables`` is set for Lindenbaum algebras; atom ``i`` then corresponds to
    the valuation whose bit pattern (variable 0 most significant) is
    ``2**m - 1 - i``, so atom 0 is the all-true minterm.
    """

    labels: tuple[str, ...]
    variables: Optional[tuple[str, ...]] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("an algebra needs at least one atom")
        if len(labels) > max_atoms():
            raise CapExceededError(
                f"{len(labels)} atoms exceeds the cap of {max_atoms()} (set CONDAL_MAX_ATOMS to raise it)"
            )
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise ValueError("atom labels must be nonempty strings")
            if lab in _RESERVED_LABELS:
                raise ValueError(f"atom label {lab!r} is reserved for a constant")
        if len(set(labels)) != len(labels):
            dupes = sorted({x for x in labels if labels.count(x) > 1})
            raise ValueError(f"duplicate atom labels: {dupes}")
        if self.variables is not None:
            vs = tuple(self.variables)
            object.__setattr__(self, "variables", vs)
            if len(set(vs)) != len(vs):
                raise ValueError("duplicate variable names")
            if 2 ** len(vs) != len(labels):
                raise ValueError("a Lindenbaum algebra needs 2**m atoms")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def top(self) -> "Event":
        return Event(self, self.full)

    @property
    def bottom(self) -> "Event":
        return Event(self, 0)

    def atom(self, i: int) -> "Event":
        if not 0 <= i < self.n:
            raise IndexError(f"atom index {i} out of range for {self.n} atoms")
        return Event(self, 1 << i)

    def atoms(self) -> list["Event"]:
        return [Event(self, 1 << i) for i in range(self.n)]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown atom label {label!r}") from None

    def event(self, bits: int) -> "Event":
        if not 0 <= bits <= self.full:
            raise ValueError(f"bit vector {bits:#x} does not fit {self.n} atoms")
        return Event(self, bits)

    def from_atom_set(self, atoms: Iterable) -> "Event":
        """Join of the given atoms; each item may be an index or a label."""
        bits = 0
        for a in atoms:
            i = self.index_of(a) if isinstance(a, str) else int(a)
            if not 0 <= i < self.n:
                raise IndexError(f"atom index {i} out of range")
            bits |= 1 << i
        return Event(self, bits)

    def events(self) -> Iterator["Event"]:
        """All ``2**n`` events in increasing bit order."""
        for bits in range(1 << self.n):
            yield Event(self, bits)

    def __len__(self) -> int:
        """Number of elements of the algebra (``2**n``)."""
        return 1 << self.n

    # -- formulas ---------------------------------------------------------

    def valuation(self, i: int) -> dict[str, bool]:
        """Valuation of the Lindenbaum atom ``i``."""
        if self.variables is None:
            raise ValueError("not a Lindenbaum algebra")
        m = len(self.variables)
        pattern = (1 << m) - 1 - i
        return {v: bool(pattern >> (m - 1 - k) & 1) for k, v in enumerate(self.variables)}

    def point_valuation(self, i: int) -> dict[str, bool]:
        """Truth values of every identifier at atom ``i`` (variables, then atom labels)."""
        out = {lab: j == i for j, lab in enumerate(self.labels)}
        if self.variables is not None:
            out.update(self.valuation(i))
        return out

    def symbol_bits(self, name: str) -> int:
        """Truth set of an identifier: a variable or an atom label."""
        if self.variables is not None and name in self.variables:
            k = self.variables.index(name)
            m = len(self.variables)
            # atom i is true for variable k iff bit (m-1-k) of (2^m-1-i) is set
            return sum(1 << i for i in range(self.n) if ((self.n - 1 - i) >> (m - 1 - k)) & 1)
        if name in self._index:
            return 1 << self._index[name]
        raise KeyError(f"unknown variable {name!r}")

    def truth_set(self, formula: Formula | str) -> "Event":
        return truth_set(formula, self)


def make_algebra(n: int, labels: Optional[Sequence[str]] = None) -> EventAlgebra:
    """Algebra with ``n`` atoms, labeled ``a1..an`` unless labels are given."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_atoms():
        raise CapExceededError(f"n={n} exceeds the atom cap of {max_atoms()}")
    if labels is None:
        labels = [f"a{i + 1}" for i in range(n)]
    elif len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    return EventAlgebra(tuple(labels))


def _minterm_label(variables: Sequence[str], values: Sequence[bool]) -> str:
    return "/\\".join(v if val else "~" + v for v, val in zip(variables, values))


def lindenbaum(names: Sequence[str] | int) -> EventAlgebra:
    """Lindenbaum algebra of the language over ``names`` (or ``m`` default names p0..).

    Atoms are minterms, ordered by decreasing valuation bit pattern with
    variable 0 most significant; for ``p, q`` this gives
    ``p/\\q, p/\\~q, ~p/\\q, ~p/\\~q``.
    """
    if isinstance(names, int):
        names = [f"p{i}" for i in range(names)]
    names = list(names)
    m = len(names)
    if m < 1:
        raise ValueError("a language needs at least one variable")
    for v in names:
        if v in _RESERVED_LABELS:
            raise ValueError(f"variable name {v!r} is reserved for a constant")
    if 2 ** m > max_atoms():
        raise CapExceededError(f"{m} variables give {2 ** m} atoms, above the cap of {max_atoms()}")
    labels = []
    for i in range(2 ** m):
        pattern = 2 ** m - 1 - i
        labels.append(_minterm_label(names, [bool(pattern >> (m - 1 - k) & 1) for k in range(m)]))
    return EventAlgebra(tuple(labels), tuple(names))


def formula_bits(f: Formula, alg: EventAlgebra) -> int:
    """Truth set of a propositional formula as a bit vector (bitwise evaluation)."""
    full = alg.full
    if isinstance(f, syntax.Var):
        return alg.symbol_bits(f.name)
    if isinstance(f, syntax.Const):
        return full if f.value else 0
    if isinstance(f, syntax.Not):
        return full & ~formula_bits(f.arg, alg)
    if isinstance(f, syntax.And):
        return formula_bits(f.left, alg) & formula_bits(f.right, alg)
    if isinstance(f, syntax.Or):
        return formula_bits(f.left, alg) | formula_bits(f.right, alg)
    if isinstance(f, syntax.Implies):
        return (full & ~formula_bits(f.left, alg)) | formula_bits(f.right, alg)
    if isinstance(f, syntax.Iff):
        return full & ~(formula_bits(f.left, alg) ^ formula_bits(f.right, alg))
    raise TypeError(f"not a propositional formula: {f!r}")


def truth_set(formula: Formula | str, alg: EventAlgebra) -> "Event":
    if isinstance(formula, str):
        formula = syntax.parse_formula(formula)
    return Event(alg, formula_bits(formula, alg))


@dataclass(frozen=True, repr=False)
class Event:
    """An element of a finite Boolean algebra."""

    algebra: EventAlgebra
    bits: int

    def __repr__(self) -> str:
        return f"Event({render_event(self)})"

    def _check(self, other: "Event") -> None:
        if not isinstance(other, Event):
            raise TypeError(f"expected an Event, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatchError("events belong to different algebras")

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.algebra, self.bits & other.bits)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.algebra, self.bits | other.bits)

    def __invert__(self) -> "Event":
        return Event(self.algebra, self.algebra.full & ~self.bits)

    def implies(self, other: "Event") -> "Event":
        """Material implication ``self -> other``."""
        return ~self | other

    def __le__(self, other: "Event") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Event") -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: "Event") -> bool:
        return other <= self

    def __gt__(self, other: "Event") -> bool:
        return other < self

    meet = __and__
    join = __or__
    complement = __invert__
    leq = __le__

    @property
    def is_bottom(self) -> bool:
        return self.bits == 0

    @property
    def is_top(self) -> bool:
        return self.bits == self.algebra.full

    def is_atom(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def atoms_below(self) -> frozenset[int]:
        return frozenset(i for i in range(self.algebra.n) if self.bits >> i & 1)

    def labels(self) -> list[str]:
        return [self.algebra.labels[i] for i in sorted(self.atoms_below())]

    def count(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return render_event(self)


def render_event(e: Event) -> str:
    """Formula string for an event: ``T``, ``F`` or a disjunction of atom labels."""
    if e.is_top:
        return "T"
    if e.is_bottom:
        return "F"
    parts = e.labels()
    if e.algebra.variables is not None:
        parts = [f"({p})" if "/\\" in p and len(parts) > 1 else p for p in parts]
    return " \\/ ".join(parts)


def event_formula(e: Event) -> Formula:
    """Disjunctive normal form of ``e`` (as a formula over the algebra's symbols)."""
    alg = e.algebra
    if e.is_bottom:
        return syntax.BOTTOM
    if e.is_top:
        return syntax.TOP
    terms = []
    for i in sorted(e.atoms_below()):
        if alg.variables is None:
            terms.append(syntax.Var(alg.labels[i]))
        else:
            val = alg.valuation(i)
            terms.append(syntax.conjoin(
                syntax.Var(v) if val[v] else syntax.Not(syntax.Var(v)) for v in alg.variables
            ))
    return syntax.disjoin(terms)
