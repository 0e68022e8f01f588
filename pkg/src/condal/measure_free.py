"""Three-valued (measure-free) conditionals as intervals of events.

The conditional ``(a|b)`` is the interval ``[a∧b, b→a]`` of the event
algebra.  The antecedent is recovered as ``lower ∨ ¬upper``; the pair
``[⊥, ⊤]`` stands for a conditional whose antecedent is impossible, which the
interval conjunction can produce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence

from .conditionals import CElement, conditional_algebra
from .errors import AlgebraMismatchError, CapExceededError, UndefinedConditionalError
from .events import Event, EventAlgebra

DP_MAX_KB = 12


@dataclass(frozen=True)
class IntervalConditional:
    lower: Event
    upper: Event

    def __post_init__(self):
        if self.lower.algebra != self.upper.algebra:
            raise AlgebraMismatchError("interval ends belong to different algebras")
        if not self.lower <= self.upper:
            raise ValueError("lower end must lie below the upper end")

    @property
    def algebra(self) -> EventAlgebra:
        return self.lower.algebra

    @property
    def consequent(self) -> Event:
        """Canonical consequent ``a∧b``."""
        return self.lower

    @property
    def antecedent(self) -> Event:
        return self.lower | ~self.upper

    def pair(self) -> tuple[Event, Event]:
        return self.consequent, self.antecedent

    def members(self) -> list[Event]:
        """Every event ``x`` with ``lower ≤ x ≤ upper``."""
        alg = self.algebra
        free = self.upper.bits & ~self.lower.bits
        out, sub = [], 0
        while True:
            out.append(Event(alg, self.lower.bits | sub))
            if sub == free:
                return out
            sub = (sub - free) & free

    def __and__(self, other):
        return quasi_conj(self, other)

    def __or__(self, other):
        return quasi_disj(self, other)

    def __invert__(self):
        return negation(self)

    def __le__(self, other):
        return interval_leq(self, other)

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


def to_interval(a: Event, b: Event) -> IntervalConditional:
    if b.is_bottom:
        raise UndefinedConditionalError("conditional with impossible antecedent")
    return IntervalConditional(a & b, b.implies(a))


def _from_pair(a: Event, b: Event) -> IntervalConditional:
    # like to_interval but tolerates ⊥ antecedents produced by the interval conjunction
    return IntervalConditional(a & b, b.implies(a))


def _same(x: IntervalConditional, y: IntervalConditional) -> None:
    if x.algebra != y.algebra:
        raise AlgebraMismatchError("conditionals over different algebras")


def negation(x: IntervalConditional) -> IntervalConditional:
    """``¬(a|b) = (¬a|b)``, i.e. ``[¬upper, ¬lower]``."""
    return IntervalConditional(~x.upper, ~x.lower)


def quasi_conj(x: IntervalConditional, y: IntervalConditional) -> IntervalConditional:
    """``((b→a)∧(d→c) | b∨d)``."""
    _same(x, y)
    return _from_pair(x.upper & y.upper, x.antecedent | y.antecedent)


def quasi_disj(x: IntervalConditional, y: IntervalConditional) -> IntervalConditional:
    return negation(quasi_conj(negation(x), negation(y)))


def gn_conj(x: IntervalConditional, y: IntervalConditional) -> IntervalConditional:
    """``(a∧c | (¬a∧b)∨(¬c∧d)∨(b∧d))``."""
    _same(x, y)
    (a, b), (c, d) = x.pair(), y.pair()
    return _from_pair(a & c, (~a & b) | (~c & d) | (b & d))


def gn_disj(x: IntervalConditional, y: IntervalConditional) -> IntervalConditional:
    return negation(gn_conj(negation(x), negation(y)))


def interval_leq(x: IntervalConditional, y: IntervalConditional) -> bool:
    _same(x, y)
    return x.lower <= y.lower and x.upper <= y.upper


def top(alg: EventAlgebra) -> IntervalConditional:
    return IntervalConditional(alg.top, alg.top)


def bottom(alg: EventAlgebra) -> IntervalConditional:
    return IntervalConditional(alg.bottom, alg.bottom)


def intervals(alg: EventAlgebra, defined_only: bool = True) -> Iterator[IntervalConditional]:
    """Every interval of ``alg``; by default only those with a possible antecedent."""
    full = alg.full
    for lo in range(full + 1):
        free = full & ~lo
        sub = 0
        while True:
            x = IntervalConditional(Event(alg, lo), Event(alg, lo | sub))
            if not defined_only or not x.antecedent.is_bottom:
                yield x
            if sub == free:
                break
            sub = (sub - free) & free


def quasi_conjunction_of(items: Iterable[IntervalConditional]) -> IntervalConditional:
    return reduce(quasi_conj, items)


def dp_entails(kb: Sequence[IntervalConditional], target: IntervalConditional) -> Optional[tuple[int, ...]]:
    """Quasi-conjunction entailment by exhaustive subset search.

    Returns the indices of a subset ``S`` with ``C(S) ≤ target`` (the index of
    ``target`` itself when it belongs to ``kb``), or ``None`` if not entailed.
    """
    kb = list(kb)
    if len(kb) > DP_MAX_KB:
        raise CapExceededError(f"subset search is capped at {DP_MAX_KB} conditionals, got {len(kb)}")
    for i, x in enumerate(kb):
        if x == target:
            return (i,)
    for size in range(1, len(kb) + 1):
        for idx in itertools.combinations(range(len(kb)), size):
            if interval_leq(quasi_conjunction_of(kb[i] for i in idx), target):
                return idx
    return None


def to_celement(x: IntervalConditional) -> CElement:
    """The Boolean conditional with the same canonical pair."""
    a, b = x.pair()
    if b.is_bottom:
        raise UndefinedConditionalError("interval with impossible antecedent has no Boolean image")
    return conditional_algebra(x.algebra).basic(a, b)


def find_nondistributive_triple(alg: EventAlgebra):
    """First ``(x, y, z)`` with ``x ∧_Q (y ∨_Q z) ≠ (x ∧_Q y) ∨_Q (x ∧_Q z)``, or ``None``."""
    items = list(intervals(alg))
    for x in items:
        for y in items:
            for z in items:
                if quasi_conj(x, quasi_disj(y, z)) != quasi_disj(quasi_conj(x, y), quasi_conj(x, z)):
                    return x, y, z
    return None
