"""The logic of Boolean conditionals: interpretations, entailment, nonmonotonic consequence.

A language is an :class:`EventAlgebra` whose atoms play the role of
classical valuations: a Lindenbaum algebra built from variable names, or a
plain algebra whose atom labels are used directly as identifiers.  An
interpretation is a permutation of the atoms; ``(φ|ψ)`` is true in it when the
first atom satisfying ``ψ`` also satisfies ``φ``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from . import syntax
from .conditionals import CElement, conditional_algebra, validate_term
from .errors import AlgebraMismatchError, CapExceededError, UndefinedConditionalError
from .events import Event, EventAlgebra, event_formula, lindenbaum
from .syntax import Basic, Formula

FAST_MAX_ATOMS = 8  # three variables
BRUTE_MAX_ATOMS = 4  # two variables, 24 interpretations

FormulaLike = Union[Formula, str]


def language(source: Union[EventAlgebra, Sequence[str]]) -> EventAlgebra:
    """Accept an algebra or a list of variable names (built as a Lindenbaum algebra)."""
    return source if isinstance(source, EventAlgebra) else lindenbaum(list(source))


def parse(text: str, lang: Union[EventAlgebra, Sequence[str]]) -> Formula:
    """Parse and validate a conditional formula over ``lang``."""
    return validate_term(syntax.parse_conditional(text), language(lang))


def _as_formula(f: FormulaLike, lang: EventAlgebra) -> Formula:
    if isinstance(f, str):
        return parse(f, lang)
    for name in syntax.variables(f):
        try:
            lang.symbol_bits(name)
        except KeyError:
            raise AlgebraMismatchError(f"identifier {name!r} is not in the language") from None
    return f


# -- interpretations --------------------------------------------------------------


@dataclass(frozen=True)
class CLInterpretation:
    """An ordering of all atoms (valuations) of a language."""

    language: EventAlgebra
    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(self.language.n)):
            raise ValueError(f"not an ordering of all {self.language.n} atoms: {order}")

    def labels(self) -> list[str]:
        return [self.language.labels[i] for i in self.order]

    def __str__(self) -> str:
        return "<" + ", ".join(self.labels()) + ">"


def _holds_at(f: Formula, atom: int, lang: EventAlgebra) -> bool:
    if isinstance(f, Event):
        return bool(f.bits >> atom & 1)
    return syntax.evaluate(f, lang.point_valuation(atom))


def eval_interp(e: CLInterpretation, phi: FormulaLike) -> bool:
    """Truth value of a conditional formula, by direct evaluation of valuations."""
    lang = e.language
    phi = _as_formula(phi, lang)

    def ev(f) -> bool:
        if isinstance(f, Basic):
            for atom in e.order:
                if _holds_at(f.antecedent, atom, lang):
                    return _holds_at(f.consequent, atom, lang)
            raise UndefinedConditionalError("antecedent satisfied by no valuation")
        if isinstance(f, syntax.Not):
            return not ev(f.arg)
        if isinstance(f, syntax.And):
            return ev(f.left) and ev(f.right)
        if isinstance(f, syntax.Or):
            return ev(f.left) or ev(f.right)
        if isinstance(f, syntax.Implies):
            return (not ev(f.left)) or ev(f.right)
        if isinstance(f, syntax.Iff):
            return ev(f.left) == ev(f.right)
        if isinstance(f, (syntax.Var, syntax.Const)):
            return ev(Basic(f, syntax.TOP))
        raise TypeError(f"not a conditional formula: {f!r}")

    return ev(phi)


def interpretations(lang: EventAlgebra) -> Iterable[CLInterpretation]:
    """All interpretations in lexicographic order of the atom permutation."""
    for order in itertools.permutations(range(lang.n)):
        yield CLInterpretation(lang, order)


# -- knowledge bases and entailment ---------------------------------------------


@dataclass(frozen=True)
class KnowledgeBase:
    language: EventAlgebra
    formulas: tuple[Formula, ...] = ()

    @classmethod
    def parse(cls, lang: Union[EventAlgebra, Sequence[str]], texts: Iterable[str]) -> "KnowledgeBase":
        lang = language(lang)
        return cls(lang, tuple(parse(t, lang) for t in texts))

    def with_formula(self, f: FormulaLike) -> "KnowledgeBase":
        return KnowledgeBase(self.language, self.formulas + (_as_formula(f, self.language),))

    def element(self) -> CElement:
        alg = conditional_algebra(self.language)
        out = alg.top
        for f in self.formulas:
            out = out & alg.eval_term(f)
        return out

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class EntailmentResult:
    entailed: bool
    witness: Optional[CLInterpretation] = None
    engine: str = "fast"

    def __bool__(self) -> bool:
        return self.entailed


def _check_cap(lang: EventAlgebra, engine: str) -> None:
    cap = FAST_MAX_ATOMS if engine == "fast" else BRUTE_MAX_ATOMS
    if lang.n > cap:
        raise CapExceededError(
            f"the {engine} engine handles at most {cap} valuations; this language has {lang.n}"
        )


def entails(kb: KnowledgeBase, phi: FormulaLike, engine: str = "fast") -> EntailmentResult:
    """Semantic entailment; on failure the witness is the least failing interpretation."""
    lang = kb.language
    phi = _as_formula(phi, lang)
    if engine not in ("fast", "brute"):
        raise ValueError(f"unknown engine {engine!r}")
    _check_cap(lang, engine)
    if engine == "fast":
        alg = conditional_algebra(lang)
        bad = kb.element() - alg.eval_term(phi)
        if bad.is_bottom:
            return EntailmentResult(True, engine="fast")
        return EntailmentResult(False, CLInterpretation(lang, alg.perms[bad.ranks()[0]]), "fast")
    for e in interpretations(lang):
        if all(eval_interp(e, g) for g in kb.formulas) and not eval_interp(e, phi):
            return EntailmentResult(False, e, "brute")
    return EntailmentResult(True, engine="brute")


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: Optional[object] = None

    def __bool__(self) -> bool:
        return self.satisfiable


def satisfiable(phi: FormulaLike, lang: Union[EventAlgebra, Sequence[str]]) -> SatResult:
    """Satisfiability of a conditional formula.

    A basic ``(φ|ψ)`` reduces to classical satisfiability of ``φ∧ψ`` and the
    witness is a satisfying atom index; a compound formula is satisfiable when
    its element is nonempty and the witness is the least interpretation.
    """
    lang = language(lang)
    phi = _as_formula(phi, lang)
    if isinstance(phi, Basic):
        side = conditional_algebra(lang).side_bits
        bits = side(phi.consequent) & side(phi.antecedent)
        if bits == 0:
            return SatResult(False)
        return SatResult(True, (bits & -bits).bit_length() - 1)
    _check_cap(lang, "fast")
    alg = conditional_algebra(lang)
    t = alg.eval_term(phi)
    if t.is_bottom:
        return SatResult(False)
    return SatResult(True, CLInterpretation(lang, alg.perms[t.ranks()[0]]))


def nm_consequence(kb: KnowledgeBase, phi, psi, engine: str = "fast") -> bool:
    """``φ |~_K ψ``, i.e. whether ``K`` entails ``(ψ|φ)``.

    The sides may be events, propositional formulas or formula strings.
    """
    lang = kb.language
    phi, psi = (syntax.parse_formula(x) if isinstance(x, str) else x for x in (phi, psi))
    if conditional_algebra(lang).side_bits(phi) == 0:
        raise UndefinedConditionalError("the premise of a consequence query must be satisfiable")
    return entails(kb, Basic(psi, phi), engine).entailed


# -- System P harness -------------------------------------------------------------

RULES = ("Reflexivity", "LLE", "RW", "Cut", "OR", "AND", "CM", "RM")


@dataclass
class RuleReport:
    rule: str
    instances: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


class _Consequence:
    """Cached ``a |~ b`` on event bit vectors for a fixed knowledge base."""

    def __init__(self, kb: KnowledgeBase):
        self.lang = kb.language
        self.alg = conditional_algebra(self.lang)
        self.k = kb.element().bits
        self.cache = {}

    def __call__(self, a: int, b: int) -> bool:
        key = (a, b)
        if key not in self.cache:
            self.cache[key] = self.k & ~self.alg.basic_bits(b, a) == 0
        return self.cache[key]


def _lle_variant(bits: int, lang: EventAlgebra) -> tuple[Formula, Formula]:
    """Two syntactically different formulas with truth set ``bits``."""
    ev = Event(lang, bits)
    dnf = event_formula(ev)
    other = syntax.Not(event_formula(~ev))
    return dnf, other


def klm_harness(kb: KnowledgeBase, mode: str = "exhaustive", samples: int = 2000,
                seed: Optional[int] = None, max_counterexamples: Optional[int] = None) -> dict[str, RuleReport]:
    """Check the System P rules and Rational Monotonicity for ``|~_K``.

    Instances range over all triples of events (``mode="exhaustive"``) or a
    seeded random sample of them.  Instances that would condition on ``⊥`` are
    skipped.  Each report lists every counterexample found as event triples.
    """
    lang = kb.language
    if mode == "exhaustive":
        _check_cap(lang, "brute")
    else:
        _check_cap(lang, "fast")
    nmc = _Consequence(kb)
    full = lang.full
    reports = {r: RuleReport(r) for r in RULES}

    def fail(rule, *triple):
        rep = reports[rule]
        if max_counterexamples is None or len(rep.counterexamples) < max_counterexamples:
            rep.counterexamples.append(tuple(Event(lang, x) for x in triple))

    # Reflexivity and LLE range over single events / pairs.
    alg = nmc.alg
    lle_cache = {}
    for a in range(1, full + 1):
        reports["Reflexivity"].instances += 1
        if not nmc(a, a):
            fail("Reflexivity", a)
        f1, f2 = _lle_variant(a, lang)
        lle_cache[a] = (f1, f2)

    if mode == "exhaustive":
        triples = itertools.product(range(full + 1), repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.randint(0, full), rng.randint(0, full), rng.randint(0, full)) for _ in range(samples))

    kbits = nmc.k
    lle_done = set()
    for x, y, z in triples:
        # LLE: equivalent premises written differently give the same verdict
        if x and (x, y) not in lle_done:
            lle_done.add((x, y))
            f1, f2 = lle_cache[x]
            reports["LLE"].instances += 1
            t1 = alg.eval_term(Basic(Event(lang, y), f1)).bits
            t2 = alg.eval_term(Basic(Event(lang, y), f2)).bits
            if (kbits & ~t1 == 0) != (kbits & ~t2 == 0):
                fail("LLE", x, y)
        if x:
            # RW: x |~ y, y ≤ z  ⇒  x |~ z
            if y & ~z == 0:
                reports["RW"].instances += 1
                if nmc(x, y) and not nmc(x, z):
                    fail("RW", x, y, z)
            # AND: x |~ y, x |~ z  ⇒  x |~ y∧z
            reports["AND"].instances += 1
            if nmc(x, y) and nmc(x, z) and not nmc(x, y & z):
                fail("AND", x, y, z)
            if x & y:
                # Cut: x∧y |~ z, x |~ y  ⇒  x |~ z
                reports["Cut"].instances += 1
                if nmc(x & y, z) and nmc(x, y) and not nmc(x, z):
                    fail("Cut", x, y, z)
                # CM: x |~ y, x |~ z  ⇒  x∧y |~ z
                reports["CM"].instances += 1
                if nmc(x, y) and nmc(x, z) and not nmc(x & y, z):
                    fail("CM", x, y, z)
        if x and y:
            # OR: x |~ z, y |~ z  ⇒  x∨y |~ z
            reports["OR"].instances += 1
            if nmc(x, z) and nmc(y, z) and not nmc(x | y, z):
                fail("OR", x, y, z)
        if x and x & z:
            # RM as (ψ, φ, χ) = (x, y, z): ψ |~ φ, not ψ |~ ¬χ  ⇒  ψ∧χ |~ φ
            reports["RM"].instances += 1
            if nmc(x, y) and not nmc(x, full & ~z) and not nmc(x & z, y):
                fail("RM", x, y, z)
    return reports


def complete_kb(lang: Union[EventAlgebra, Sequence[str]], order: Sequence[int]) -> KnowledgeBase:
    """The basics ``(α_i1|⊤), (α_i2|¬α_i1), …`` that pin down the interpretation ``order``."""
    lang = language(lang)
    order = CLInterpretation(lang, order).order
    rest = lang.full
    formulas = []
    for i in order[:-1]:
        formulas.append(Basic(Event(lang, 1 << i), Event(lang, rest)))
        rest &= ~(1 << i)
    return KnowledgeBase(lang, tuple(formulas))


def conditional_excluded_middle(kb: KnowledgeBase) -> Optional[tuple[Event, Event]]:
    """First pair ``(φ, ψ)`` with neither ``φ |~ ψ`` nor ``φ |~ ¬ψ``, or ``None``."""
    lang = kb.language
    nmc = _Consequence(kb)
    full = lang.full
    for a in range(1, full + 1):
        for b in range(full + 1):
            if not nmc(a, b) and not nmc(a, full & ~b):
                return Event(lang, a), Event(lang, b)
    return None
