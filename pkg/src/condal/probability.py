"""Exact probabilities on event algebras and on their algebras of conditionals.

All arithmetic uses :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from operator import getitem
from typing import Iterable, Mapping, Optional, Sequence, Union

from .conditionals import CElement, ConditionalAlgebra, conditional_algebra
from .errors import AlgebraMismatchError, UndefinedConditionalError
from .events import Event, EventAlgebra

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")
_TABLE_LIMIT = 5040  # per-byte lookup tables are built up to 7! atoms


def parse_rational(value: RationalLike) -> Fraction:
    """Exact rational from ``"p/q"``, an integer string, an int or a Fraction.

    Decimal strings and floats are rejected.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.fullmatch(value)
        if m is None:
            raise ValueError(f"not an exact rational (use p/q or an integer): {value!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"cannot read {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- measures on the event algebra ---------------------------------------------


@dataclass(frozen=True)
class EventMeasure:
    """Strictly positive probability on a finite event algebra, given by atom weights."""

    algebra: EventAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(parse_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != self.algebra.n:
            raise ValueError(f"expected {self.algebra.n} weights, got {len(ws)}")
        bad = [self.algebra.labels[i] for i, w in enumerate(ws) if w <= 0]
        if bad:
            raise ValueError(f"weights must be strictly positive; offending atoms: {bad}")
        if sum(ws) != 1:
            raise ValueError(f"weights sum to {format_rational(sum(ws))}, not 1")

    @classmethod
    def from_mapping(cls, algebra: EventAlgebra, weights: Mapping[str, RationalLike]) -> "EventMeasure":
        missing = [lab for lab in algebra.labels if lab not in weights]
        extra = [k for k in weights if k not in algebra.labels]
        if missing or extra:
            raise ValueError(f"weights do not match the atoms (missing {missing}, unknown {extra})")
        return cls(algebra, tuple(parse_rational(weights[lab]) for lab in algebra.labels))

    @classmethod
    def uniform(cls, algebra: EventAlgebra) -> "EventMeasure":
        return cls(algebra, (Fraction(1, algebra.n),) * algebra.n)

    @classmethod
    def random(cls, algebra: EventAlgebra, rng: random.Random, max_term: int = 30) -> "EventMeasure":
        """Random positive measure whose weights have assorted denominators."""
        raw = [Fraction(rng.randint(1, max_term), rng.randint(1, max_term)) for _ in range(algebra.n)]
        total = sum(raw)
        return cls(algebra, tuple(w / total for w in raw))

    def prob_bits(self, bits: int) -> Fraction:
        return sum((w for i, w in enumerate(self.weights) if bits >> i & 1), Fraction(0))

    def prob(self, e: Event) -> Fraction:
        if e.algebra != self.algebra:
            raise AlgebraMismatchError("event of a different algebra")
        return self.prob_bits(e.bits)

    def __call__(self, e: Event) -> Fraction:
        return self.prob(e)


def cond_prob(P: EventMeasure, a: Event, b: Event) -> Fraction:
    """``P(a∧b) / P(b)``."""
    if b.is_bottom:
        raise UndefinedConditionalError("conditioning on an impossible event")
    return P.prob(a & b) / P.prob(b)


# -- measures on the conditional algebra ---------------------------------------


@dataclass(frozen=True)
class CMeasure:
    """Probability on a conditional algebra, given by its weights on the atoms (by rank)."""

    algebra: ConditionalAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(parse_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != self.algebra.atom_count:
            raise ValueError(f"expected {self.algebra.atom_count} weights, got {len(ws)}")
        if any(w < 0 for w in ws):
            raise ValueError("weights must be nonnegative")
        if sum(ws) != 1:
            raise ValueError(f"weights sum to {format_rational(sum(ws))}, not 1")

    @cached_property
    def _denominator(self) -> int:
        return lcm(*(w.denominator for w in self.weights))

    @cached_property
    def _numerators(self) -> list[int]:
        d = self._denominator
        return [w.numerator * (d // w.denominator) for w in self.weights]

    @cached_property
    def _tables(self) -> list[list[int]]:
        # table[k][v]: numerator sum of the atoms flagged by byte value v at byte k
        nums = self._numerators
        count = len(nums)
        tables = []
        for k in range(0, count, 8):
            chunk = nums[k:k + 8] + [0] * max(0, k + 8 - count)
            row = [0] * 256
            for v in range(1, 256):
                low = v & -v
                row[v] = row[v ^ low] + chunk[low.bit_length() - 1]
            tables.append(row)
        return tables

    def measure_bits(self, bits: int) -> Fraction:
        count = self.algebra.atom_count
        if count <= _TABLE_LIMIT:
            total = sum(map(getitem, self._tables, bits.to_bytes((count + 7) // 8, "little")))
        else:
            nums = self._numerators
            total = 0
            while bits:
                low = bits & -bits
                total += nums[low.bit_length() - 1]
                bits ^= low
        return Fraction(total, self._denominator)

    def __call__(self, t: CElement) -> Fraction:
        return measure(self, t)

    def cond(self, a: Event, b: Event) -> Fraction:
        """Measure of the basic conditional ``(a|b)``."""
        return self.measure_bits(self.algebra.basic(a, b).bits)

    def is_positive(self) -> bool:
        return all(w > 0 for w in self.weights)


def measure(mu: CMeasure, t: CElement) -> Fraction:
    if t.algebra != mu.algebra:
        raise AlgebraMismatchError("element and measure live on different algebras")
    return mu.measure_bits(t.bits)


def canonical_extension(P: EventMeasure) -> CMeasure:
    """Atom weights ``P(α1)·P(α2|¬α1)·…`` read along each permutation."""
    alg = conditional_algebra(P.algebra)
    weights = []
    for perm in alg.perms:
        w = Fraction(1)
        rest = Fraction(1)
        for i in perm[:-1]:
            p = P.weights[i]
            w *= p / rest
            rest -= p
        weights.append(w)
    return CMeasure(alg, tuple(weights))


def block_measure(P: EventMeasure, prefix: Sequence[int]) -> Fraction:
    """Closed-form canonical measure of the atoms whose permutation starts with ``prefix``."""
    prefix = tuple(prefix)
    n = P.algebra.n
    if len(set(prefix)) != len(prefix) or any(not 0 <= i < n for i in prefix):
        raise ValueError(f"invalid prefix {prefix}")
    value = Fraction(1)
    rest = Fraction(1)
    for i in prefix:
        value *= P.weights[i] / rest
        rest -= P.weights[i]
    return value


def restriction_weights(mu: CMeasure) -> tuple[Fraction, ...]:
    """``μ(α_i | ⊤)`` for each base atom (the restriction to the copy of the base at ``⊤``)."""
    alg = mu.algebra
    full = alg.base.full
    return tuple(mu.measure_bits(alg.basic_bits(1 << i, full)) for i in range(alg.n))


def restrict(mu: CMeasure) -> EventMeasure:
    """Restriction to the base algebra; fails unless it is strictly positive."""
    return EventMeasure(mu.algebra.base, restriction_weights(mu))


def is_canonical(mu: CMeasure) -> bool:
    ws = restriction_weights(mu)
    if any(w <= 0 for w in ws):
        return False
    return canonical_extension(EventMeasure(mu.algebra.base, ws)).weights == mu.weights


def mixture(mu1: CMeasure, mu2: CMeasure, weight: RationalLike = Fraction(1, 2)) -> CMeasure:
    """``weight·μ1 + (1-weight)·μ2``."""
    if mu1.algebra != mu2.algebra:
        raise AlgebraMismatchError("measures on different algebras")
    lam = parse_rational(weight)
    if not 0 <= lam <= 1:
        raise ValueError("mixture weight must lie in [0, 1]")
    return CMeasure(mu1.algebra, tuple(lam * x + (1 - lam) * y for x, y in zip(mu1.weights, mu2.weights)))


# -- separability ---------------------------------------------------------------


@dataclass(frozen=True)
class SeparabilityResult:
    separable: bool
    witness: Optional[tuple[Event, Event, Event]] = None
    lhs: Optional[Fraction] = None
    rhs: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.separable


def _supersets(x: int, full: int):
    """Supersets of ``x`` within ``full``, increasing."""
    free = full & ~x
    sub = 0
    out = []
    while True:
        out.append(x | sub)
        if sub == free:
            break
        sub = (sub - free) & free
    return out


def is_separable(mu: CMeasure) -> SeparabilityResult:
    """Chain-rule check ``μ(a|c) = μ(a|b)·μ(b|c)`` over all ``a ≤ b ≤ c`` with ``b ≠ ⊥``.

    Triples are scanned with ``a``, then ``b``, then ``c`` increasing as bit
    vectors; the first failure is reported.
    """
    alg = mu.algebra
    base = alg.base
    full = base.full
    cache: dict[tuple[int, int], Fraction] = {}

    def val(x, y):
        key = (x, y)
        if key not in cache:
            cache[key] = mu.measure_bits(alg.basic_bits(x, y))
        return cache[key]

    for a in range(full + 1):
        for b in _supersets(a, full):
            if b == 0:
                continue
            for c in _supersets(b, full):
                lhs = val(a, c)
                rhs = val(a, b) * val(b, c)
                if lhs != rhs:
                    return SeparabilityResult(
                        False, (Event(base, a), Event(base, b), Event(base, c)), lhs, rhs
                    )
    return SeparabilityResult(True)


# -- two-place assignments -------------------------------------------------------


@dataclass(frozen=True)
class TwoPlaceAssignment:
    """A function ``(a, b) ↦ value`` defined for every event ``a`` and every ``b ≠ ⊥``."""

    algebra: EventAlgebra
    table: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        full = self.algebra.full
        for a in range(full + 1):
            for b in range(1, full + 1):
                if (a, b) not in self.table:
                    raise ValueError(f"assignment undefined at ({a}, {b})")

    def __call__(self, a: Union[Event, int], b: Union[Event, int]) -> Fraction:
        a = a.bits if isinstance(a, Event) else a
        b = b.bits if isinstance(b, Event) else b
        return self.table[(a, b)]

    @classmethod
    def from_function(cls, algebra: EventAlgebra, fn) -> "TwoPlaceAssignment":
        full = algebra.full
        return cls(algebra, {(a, b): parse_rational(fn(a, b)) for a in range(full + 1) for b in range(1, full + 1)})

    @classmethod
    def from_event_measure(cls, P: EventMeasure) -> "TwoPlaceAssignment":
        return cls.from_function(P.algebra, lambda a, b: P.prob_bits(a & b) / P.prob_bits(b))

    @classmethod
    def from_cmeasure(cls, mu: CMeasure) -> "TwoPlaceAssignment":
        alg = mu.algebra
        return cls.from_function(alg.base, lambda a, b: mu.measure_bits(alg.basic_bits(a, b)))

    @classmethod
    def constant(cls, algebra: EventAlgebra, value: RationalLike) -> "TwoPlaceAssignment":
        v = parse_rational(value)
        return cls.from_function(algebra, lambda a, b: v)


@dataclass(frozen=True)
class AxiomResult:
    passed: bool
    witness: Optional[tuple[int, ...]] = None
    detail: str = ""


def check_cp_axioms(cp: TwoPlaceAssignment) -> dict[str, AxiomResult]:
    """Exhaustive check of the four conditional-probability axioms.

    Keys are ``CP1`` (normalisation), ``CP2`` (additivity), ``CP3``
    (conditioning on the antecedent) and ``CP4`` (chain rule).  Witnesses are
    tuples of event bit vectors.
    """
    full = cp.algebra.full
    report = {}

    def first(gen, name):
        for witness, detail in gen:
            return AxiomResult(False, witness, detail)
        return AxiomResult(True)

    report["CP1"] = first(
        (((b,), f"({b}|{b}) = {cp(b, b)}") for b in range(1, full + 1) if cp(b, b) != 1), "CP1"
    )

    def cp2():
        for b in range(1, full + 1):
            for a1 in range(full + 1):
                for a2 in _supersets(0, full & ~a1):
                    lhs = cp(a1 | a2, b)
                    rhs = cp(a1, b) + cp(a2, b)
                    if lhs != rhs:
                        yield (a1, a2, b), f"{format_rational(lhs)} != {format_rational(rhs)}"

    report["CP2"] = first(cp2(), "CP2")
    report["CP3"] = first(
        (
            ((a, b), f"{format_rational(cp(a, b))} != {format_rational(cp(a & b, b))}")
            for b in range(1, full + 1)
            for a in range(full + 1)
            if cp(a, b) != cp(a & b, b)
        ),
        "CP3",
    )

    def cp4():
        for a in range(full + 1):
            for b in _supersets(a, full):
                if b == 0:
                    continue
                for c in _supersets(b, full):
                    lhs = cp(a, c)
                    rhs = cp(a, b) * cp(b, c)
                    if lhs != rhs:
                        yield (a, b, c), f"{format_rational(lhs)} != {format_rational(rhs)}"

    report["CP4"] = first(cp4(), "CP4")
    return report


# -- perturbations and non-convexity --------------------------------------------


def perturb(mu: CMeasure, omega1: int, omega2: int, eps: RationalLike) -> CMeasure:
    """Move mass ``eps`` from atom ``omega1`` to atom ``omega2`` (both ranks).

    Both atoms must start with the same base atom, so the result agrees with
    ``mu`` on every ``(α|⊤)``; ``eps`` must satisfy
    ``0 < eps < min(μ(ω1), 1 - μ(ω2)) / 2``.
    """
    alg = mu.algebra
    eps = parse_rational(eps)
    for r in (omega1, omega2):
        if not 0 <= r < alg.atom_count:
            raise ValueError(f"rank {r} out of range")
    if omega1 == omega2:
        raise ValueError("the two atoms must differ")
    if alg.perms[omega1][0] != alg.perms[omega2][0]:
        raise ValueError("the two atoms must lie below the same (α|⊤)")
    bound = min(mu.weights[omega1], 1 - mu.weights[omega2]) / 2
    if not 0 < eps < bound:
        raise ValueError(f"eps must lie strictly between 0 and {format_rational(bound)}")
    ws = list(mu.weights)
    ws[omega1] -= eps
    ws[omega2] += eps
    return CMeasure(alg, tuple(ws))


def invisible_direction(alg: ConditionalAlgebra) -> Optional[tuple[int, ...]]:
    """A nonzero integer vector over the atoms summing to zero on every basic conditional.

    For four or more base atoms one is built from two atoms ``x, y`` and two
    more ``u, v``: ``+1`` on ``⟨x,y,u,v,…⟩`` and ``⟨y,x,v,u,…⟩``, ``-1`` on
    ``⟨x,y,v,u,…⟩`` and ``⟨y,x,u,v,…⟩`` (remaining atoms in increasing order).
    Returns ``None`` when no such vector exists (three or fewer base atoms,
    where the basic conditionals span the whole space).
    """
    n = alg.n
    if n < 4:
        return None
    tail = tuple(range(4, n))
    vec = [0] * alg.atom_count
    for perm, sign in (((0, 1, 2, 3), 1), ((1, 0, 3, 2), 1), ((0, 1, 3, 2), -1), ((1, 0, 2, 3), -1)):
        vec[alg.rank(perm + tail)] += sign
    return tuple(vec)


def perturb_invisibly(mu: CMeasure, eps: RationalLike) -> CMeasure:
    """Shift ``mu`` by ``eps`` times :func:`invisible_direction`.

    The result has the same value as ``mu`` on every basic conditional; it is
    positive when ``eps`` is below every weight it lowers.
    """
    alg = mu.algebra
    direction = invisible_direction(alg)
    if direction is None:
        raise ValueError("needs at least four base atoms")
    eps = parse_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    ws = tuple(w + eps * d for w, d in zip(mu.weights, direction))
    if any(w <= 0 for w, d in zip(ws, direction) if d):
        raise ValueError("eps too large: a perturbed weight is no longer positive")
    return CMeasure(alg, ws)


@dataclass(frozen=True)
class NonConvexWitness:
    mu1: CMeasure
    mu2: CMeasure
    midpoint: CMeasure
    failure: SeparabilityResult


def _candidate_measures(base: EventAlgebra) -> Iterable[EventMeasure]:
    n = base.n
    yield EventMeasure.uniform(base)
    # (1/2, 1/4, ..., 1/2^(n-1), 1/2^(n-1))
    yield EventMeasure(base, tuple(Fraction(1, 2 ** (i + 1)) for i in range(n - 1)) + (Fraction(1, 2 ** (n - 1)),))
    rng = random.Random(0)
    for _ in range(20):
        yield EventMeasure.random(base, rng)


def find_nonconvex_witness(alg: Union[ConditionalAlgebra, EventAlgebra]) -> NonConvexWitness:
    """Two canonical (hence separable) measures whose midpoint is not separable."""
    if isinstance(alg, EventAlgebra):
        alg = conditional_algebra(alg)
    if alg.n < 3:
        raise ValueError("no witness exists with fewer than three base atoms")
    cands = list(_candidate_measures(alg.base))
    for i, p1 in enumerate(cands):
        for p2 in cands[i + 1:]:
            if p1.weights == p2.weights:
                continue
            mu1, mu2 = canonical_extension(p1), canonical_extension(p2)
            if not (is_separable(mu1) and is_separable(mu2)):
                continue
            mid = mixture(mu1, mu2)
            result = is_separable(mid)
            if not result:
                return NonConvexWitness(mu1, mu2, mid, result)
    raise RuntimeError("no non-convexity witness among the candidate measures")
