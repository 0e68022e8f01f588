"""The Boolean algebra of conditionals over a finite event algebra.

Elements are represented by their atoms.  With ``n`` atoms in the base
algebra there are ``n!`` conditional atoms, one per permutation of the base
atoms, numbered by lexicographic rank.  The atom of permutation ``p`` lies
below the basic conditional ``(a|b)`` exactly when the first entry of ``p``
that lies in ``b`` also lies in ``a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import syntax
from .errors import AlgebraMismatchError, GuardError, UndefinedConditionalError, ParseError
from .events import Event, EventAlgebra, formula_bits
from .permutations import rank as perm_rank, unrank as perm_unrank


def _bits_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


class ConditionalAlgebra:
    """Atom-set representation of the algebra of conditionals over ``base``.

    Use :func:`conditional_algebra` to obtain the shared instance for a base.
    """

    def __init__(self, base: EventAlgebra):
        self.base = base
        self.n = base.n
        self.atom_count = factorial(self.n)
        self.full = (1 << self.atom_count) - 1
        self.perms: tuple[tuple[int, ...], ...] = tuple(itertools.permutations(range(self.n)))
        self._perm_array = np.array(self.perms, dtype=np.int64).reshape(self.atom_count, self.n)
        self._rows = np.arange(self.atom_count)
        self._first = lru_cache(maxsize=None)(self._first_atoms)
        self.basic_bits = lru_cache(maxsize=8192)(self._basic_bits)

    def __eq__(self, other):
        return isinstance(other, ConditionalAlgebra) and other.base == self.base

    def __hash__(self):
        return hash(("C", self.base))

    def __repr__(self):
        return f"ConditionalAlgebra(n={self.n}, atoms={self.atom_count})"

    # -- atoms ------------------------------------------------------------

    @property
    def top(self) -> "CElement":
        return CElement(self, self.full)

    @property
    def bottom(self) -> "CElement":
        return CElement(self, 0)

    def element(self, bits: int) -> "CElement":
        if not 0 <= bits <= self.full:
            raise ValueError("bit vector does not fit this algebra")
        return CElement(self, bits)

    def from_ranks(self, ranks) -> "CElement":
        bits = 0
        for r in ranks:
            if not 0 <= r < self.atom_count:
                raise ValueError(f"rank {r} out of range")
            bits |= 1 << r
        return CElement(self, bits)

    def atom(self, r: int) -> "CElement":
        return self.from_ranks([r])

    def atoms(self) -> list["CElement"]:
        return [CElement(self, 1 << r) for r in range(self.atom_count)]

    def rank(self, perm: Sequence[int]) -> int:
        perm = tuple(perm)
        if len(perm) != self.n:
            raise ValueError(f"expected a permutation of length {self.n}")
        return perm_rank(perm)

    def unrank(self, r: int) -> tuple[int, ...]:
        return perm_unrank(r, self.n)

    def perm_labels(self, r: int) -> list[str]:
        return [self.base.labels[i] for i in self.perms[r]]

    # -- basic conditionals ----------------------------------------------

    def _first_atoms(self, b: int) -> np.ndarray:
        inb = ((b >> self._perm_array) & 1).astype(bool)
        pos = inb.argmax(axis=1)
        return self._perm_array[self._rows, pos]

    def _basic_bits(self, a: int, b: int) -> int:
        if b == 0:
            raise UndefinedConditionalError("conditional with impossible antecedent")
        a &= b
        if a == 0:
            return 0
        if a == b:
            return self.full
        first = self._first(b)
        return _bits_to_int(((a >> first) & 1).astype(bool))

    def basic(self, a: Event, b: Event) -> "CElement":
        """The element ``(a|b)``; ``a`` is silently replaced by ``a∧b``."""
        self._own(a)
        self._own(b)
        return CElement(self, self.basic_bits(a.bits, b.bits))

    def _own(self, e: Event) -> None:
        if not isinstance(e, Event):
            raise TypeError(f"expected an Event, got {type(e).__name__}")
        if e.algebra is not self.base and e.algebra != self.base:
            raise AlgebraMismatchError("event does not belong to the base algebra")

    def basics(self) -> Iterator[tuple[int, int]]:
        """All pairs ``(a, b)`` of event bits with ``b`` nonzero."""
        for b in range(1, 1 << self.n):
            for a in range(1 << self.n):
                yield a, b

    def canonical_basics(self) -> Iterator[tuple[int, int]]:
        """Pairs with ``a ≤ b``; every basic conditional has one such name per antecedent."""
        for b in range(1, 1 << self.n):
            sub = b
            while True:
                yield sub, b
                if sub == 0:
                    break
                sub = (sub - 1) & b

    # -- terms ------------------------------------------------------------

    def cond(self, a, b) -> syntax.Basic:
        """Term leaf ``(a|b)``; sides may be events, formulas or formula strings."""
        return syntax.Basic(a, b)

    def side_bits(self, x) -> int:
        if isinstance(x, Event):
            self._own(x)
            return x.bits
        if isinstance(x, str):
            x = syntax.parse_formula(x)
        if isinstance(x, syntax.Formula):
            try:
                return formula_bits(x, self.base)
            except KeyError as exc:
                raise ParseError(str(exc.args[0])) from None
        if isinstance(x, int):
            return x
        raise TypeError(f"cannot interpret {x!r} as an event")

    def eval_term(self, t) -> "CElement":
        return CElement(self, self._eval(parse_term(t, self.base) if isinstance(t, str) else t))

    def _eval(self, t) -> int:
        if isinstance(t, CElement):
            if t.algebra != self:
                raise AlgebraMismatchError("element of a different conditional algebra")
            return t.bits
        if isinstance(t, syntax.Basic):
            return self.basic_bits(self.side_bits(t.consequent), self.side_bits(t.antecedent))
        if isinstance(t, syntax.Not):
            return self.full & ~self._eval(t.arg)
        if isinstance(t, syntax.And):
            return self._eval(t.left) & self._eval(t.right)
        if isinstance(t, syntax.Or):
            return self._eval(t.left) | self._eval(t.right)
        if isinstance(t, syntax.Implies):
            return (self.full & ~self._eval(t.left)) | self._eval(t.right)
        if isinstance(t, syntax.Iff):
            return self.full & ~(self._eval(t.left) ^ self._eval(t.right))
        if isinstance(t, (syntax.Var, syntax.Const)):
            return self.basic_bits(self.side_bits(t), self.base.full)
        raise TypeError(f"not a conditional term: {t!r}")

    def atom_term(self, perm: Sequence[int]) -> "CElement":
        """Meet of the defining basics of a permutation prefix.

        For a prefix ``⟨i1,…,it⟩`` this is ``(i1|⊤) ⊓ (i2|¬i1) ⊓ …``; the
        result is the set of atoms whose permutation begins with the prefix.
        """
        bits = self.full
        rest = self.base.full
        for i in perm:
            if not rest >> i & 1:
                raise ValueError(f"repeated atom index {i} in {tuple(perm)}")
            bits &= self.basic_bits(1 << i, rest)
            rest &= ~(1 << i)
        return CElement(self, bits)


@lru_cache(maxsize=None)
def conditional_algebra(base: EventAlgebra) -> ConditionalAlgebra:
    """Shared (cached) conditional algebra over ``base``."""
    return ConditionalAlgebra(base)


@dataclass(frozen=True)
class CElement:
    """Element of a conditional algebra: the set of its atom ranks as a bit vector."""

    algebra: ConditionalAlgebra
    bits: int

    def _check(self, other: "CElement") -> None:
        if not isinstance(other, CElement):
            raise TypeError(f"expected a CElement, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatchError("elements of different conditional algebras")

    def __and__(self, other):
        self._check(other)
        return CElement(self.algebra, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return CElement(self.algebra, self.bits | other.bits)

    def __invert__(self):
        return CElement(self.algebra, self.algebra.full & ~self.bits)

    def __sub__(self, other):
        self._check(other)
        return CElement(self.algebra, self.bits & ~other.bits)

    def __le__(self, other):
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def implies(self, other):
        return ~self | other

    @property
    def is_top(self) -> bool:
        return self.bits == self.algebra.full

    @property
    def is_bottom(self) -> bool:
        return self.bits == 0

    def count(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.count()

    def ranks(self) -> list[int]:
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def perms(self) -> list[tuple[int, ...]]:
        return [self.algebra.perms[r] for r in self.ranks()]


Term = Union[syntax.Formula, CElement, str]


# -- parsing with an algebra ----------------------------------------------


def validate_term(f: syntax.Formula, alg: EventAlgebra) -> syntax.Formula:
    """Check identifiers and reject leaves with an impossible antecedent."""
    for name in sorted(syntax.variables(f)):
        try:
            alg.symbol_bits(name)
        except KeyError:
            raise ParseError(f"unknown variable or atom {name!r}") from None
    for leaf in syntax.basics(f):
        if formula_bits(leaf.antecedent, alg) == 0:
            raise UndefinedConditionalError(
                f"antecedent {syntax.render(leaf.antecedent)!r} is unsatisfiable"
            )
    return f


def parse_term(text: str, alg: EventAlgebra) -> syntax.Formula:
    """Parse a conditional term string and validate it against ``alg``."""
    return validate_term(syntax.parse_conditional(text), alg)


def parse_basic(text: str, alg: EventAlgebra) -> tuple[Event, Event]:
    """Parse a single basic conditional into its ``(a, b)`` events."""
    f = parse_term(text, alg)
    if not isinstance(f, syntax.Basic):
        raise ParseError(f"expected a single basic conditional, got {text!r}")
    return (Event(alg, formula_bits(f.consequent, alg)), Event(alg, formula_bits(f.antecedent, alg)))


# -- free functions -----------------------------------------------------------


def atom_rank(perm: Sequence[int]) -> int:
    return perm_rank(perm)


def atom_unrank(r: int, n: int) -> tuple[int, ...]:
    return perm_unrank(r, n)


def atoms_below_basic(a: Event, b: Event) -> CElement:
    if a.algebra != b.algebra:
        raise AlgebraMismatchError("events belong to different algebras")
    return conditional_algebra(b.algebra).basic(a, b)


def eval_term(t: Term, base: Optional[EventAlgebra] = None) -> CElement:
    if base is None:
        base = _infer_base(t)
    return conditional_algebra(base).eval_term(t)


def _infer_base(t) -> EventAlgebra:
    if isinstance(t, CElement):
        return t.algebra.base
    if isinstance(t, syntax.Basic):
        for side in (t.consequent, t.antecedent):
            if isinstance(side, Event):
                return side.algebra
    if isinstance(t, syntax.Not):
        return _infer_base(t.arg)
    if isinstance(t, (syntax.And, syntax.Or, syntax.Implies, syntax.Iff)):
        try:
            return _infer_base(t.left)
        except ValueError:
            return _infer_base(t.right)
    raise ValueError("cannot infer the base algebra; pass it explicitly")


def _require_defined(*antecedents: Event) -> None:
    for b in antecedents:
        if b.is_bottom:
            raise UndefinedConditionalError("conditional with impossible antecedent")


def equality_clause(a: Event, b: Event, c: Event, d: Event) -> Optional[str]:
    """Which clause of the syntactic equality test identifies ``(a|b)`` and ``(c|d)``.

    Returns ``"both top"``, ``"both bottom"``, ``"same conjunction and antecedent"``
    or ``None`` when they differ.
    """
    _require_defined(b, d)
    if b <= a and d <= c:
        return "both top"
    if (a & b).is_bottom and (c & d).is_bottom:
        return "both bottom"
    if (a & b) == (c & d) and b == d:
        return "same conjunction and antecedent"
    return None


def equal_basic(a: Event, b: Event, c: Event, d: Event) -> bool:
    return equality_clause(a, b, c, d) is not None


def leq_clause(a: Event, b: Event, c: Event, d: Event) -> Optional[str]:
    """Clause of the guarded order test that fires, or ``None`` if ``(a|b) ≰ (c|d)``.

    Requires ``c∧d ≤ b``; raises :class:`GuardError` otherwise.
    """
    _require_defined(b, d)
    if not (c & d) <= b:
        raise GuardError("guard c∧d ≤ b not satisfied; use the semantic test")
    if d <= c:
        return "right side is top"
    if (a & b).is_bottom:
        return "left side is bottom"
    if (a & b) <= (c & d) and d <= b:
        return "a∧b ≤ c∧d and b ≥ d"
    return None


def leq_basic_guarded(a: Event, b: Event, c: Event, d: Event) -> bool:
    return leq_clause(a, b, c, d) is not None


def leq_basic(a: Event, b: Event, c: Event, d: Event) -> tuple[bool, str]:
    """Order between basics: guarded syntactic test when possible, else semantic subset."""
    try:
        clause = leq_clause(a, b, c, d)
        return clause is not None, clause or "guarded test"
    except GuardError:
        return atoms_below_basic(a, b) <= atoms_below_basic(c, d), "semantic subset"


def recognize_basic(t: CElement) -> Optional[tuple[Event, Event]]:
    """Canonical ``(a, b)`` with ``a ≤ b`` if ``t`` is a basic conditional, else ``None``."""
    alg = t.algebra
    base = alg.base
    if t.is_top:
        return base.top, base.top
    if t.is_bottom:
        return base.bottom, base.top
    a = b = 0
    for i in range(alg.n):
        block = alg.atom_term((i,)).bits
        inside = t.bits & block
        if inside == block:
            a |= 1 << i
        elif inside == 0:
            b |= 1 << i
    b |= a
    if b == 0 or alg.basic_bits(a, b) != t.bits:
        return None
    return Event(base, a), Event(base, b)


def count_basic(n: int) -> int:
    """Number of distinct basic conditionals over ``n`` atoms."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 + sum(comb(n, r) * (2 ** r - 2) for r in range(2, n + 1))


def count_atoms_below(a: Event, b: Event) -> int:
    """Number of conditional atoms below ``(a|b)`` for ``a ≤ b``, by closed form."""
    _require_defined(b)
    if not a <= b:
        raise ValueError("count_atoms_below needs a ≤ b; normalize a := a∧b first")
    n = a.algebra.n
    return factorial(n) * a.count() // b.count()


def part_i(base: EventAlgebra, i: int) -> list[CElement]:
    """Partition of the top element by permutation prefixes of length ``i``."""
    n = base.n
    # levels 0 and n are accepted too: the trivial partition and the atoms again
    if not 0 <= i <= n:
        raise ValueError(f"level {i} out of range 0..{n}")
    alg = conditional_algebra(base)
    return [alg.atom_term(seq) for seq in itertools.permutations(range(n), i)]
