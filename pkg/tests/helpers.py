"""Independent oracles and the identity catalogue shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial

from condal import conditional_algebra, make_algebra


def oracle_atoms_below(n: int, a: int, b: int) -> set[tuple[int, ...]]:
    """Permutations whose first entry inside ``b`` is inside ``a``; plain loops, no numpy."""
    out = set()
    for perm in itertools.permutations(range(n)):
        for i in perm:
            if b >> i & 1:
                if a >> i & 1:
                    out.add(perm)
                break
    return out


def oracle_bits(n: int, a: int, b: int) -> int:
    perms = list(itertools.permutations(range(n)))
    below = oracle_atoms_below(n, a, b)
    return sum(1 << r for r, p in enumerate(perms) if p in below)


def oracle_canonical_weight(P: list[Fraction], perm) -> Fraction:
    """Telescoping product written out from the conditional probabilities."""
    w = Fraction(1)
    removed = set()
    for i in perm[:-1]:
        remaining = sum(P[j] for j in range(len(P)) if j not in removed)
        w *= P[i] / remaining
        removed.add(i)
    return w


def random_positive(n: int, rng: random.Random, top: int = 40) -> list[Fraction]:
    raw = [rng.randint(1, top) for _ in range(n)]
    s = sum(raw)
    return [Fraction(x, s) for x in raw]


def _sub(x: int, y: int) -> bool:
    return x & ~y == 0


def identity_failures(cond, a: int, c: int, b: int, d: int) -> list[str]:
    """Names of the identities that fail at events ``a, c`` (any) and ``b, d`` (nonzero)."""
    B = cond.basic_bits
    full = cond.base.full
    top = cond.full
    neg = lambda x: full & ~x
    imp = lambda x, y: neg(x) | y
    failed = []

    def check(name, ok):
        if not ok:
            failed.append(name)

    check("self conditional is top", B(b, b) == top)
    check("meet over shared antecedent", B(a, b) & B(c, b) == B(a & c, b))
    check("complement", top & ~B(a, b) == B(neg(a), b))
    check("consequent normalisation", B(a & b, b) == B(a, b))
    if _sub(a, b) and _sub(b, d):
        check("chaining", B(a, b) & B(b, d) == B(a, d))

    check("arrow consequent", B(imp(b, a), b) == B(a, b))
    check("chain at top", B(a & b, full) == B(a, b) & B(b, full))
    if b & d:
        check("chain", B(a & b, d) == B(a, b & d) & B(b, d))

    check("top antecedent injective", (B(a, full) == B(c, full)) == (a == c))
    check("contradiction", B(neg(b), b) == 0)
    check("join", B(a, b) | B(c, b) == B(a | c, b))

    check("top iff consequent covers", _sub(B(b, b), B(a, b)) == _sub(b, a))
    if _sub(a, c):
        check("monotone in consequent", _sub(B(a, b), B(c, b)))
    check("order reflected at top", _sub(a, c) == _sub(B(a, full), B(c, full)))
    if _sub(a, b) and _sub(b, d):
        check("antitone in antecedent", _sub(B(a, d), B(a, b)))
    # via consequent normalisation: (a|b) = (a∧b|b) and a∧b ≤ b ≤ a∨b
    check("antitone to the join", _sub(B(a & b, a | b), B(a, b)))
    if B(a, b) != B(c, b):
        check("distinct on antecedent", a & b != c & b)
    check("between meet and arrow", _sub(B(a & b, full), B(a, b)) and _sub(B(a, b), B(imp(b, a), full)))
    if a & c == 0 and a and _sub(a, b):
        check("disjoint prior", B(a, full) & B(c, b) == 0)
    check("modus ponens", _sub(B(b, full) & B(a, b), B(a, full)))

    check("or rule", _sub(B(a, b) & B(a, d), B(a, b | d)))
    if neg(b):
        check("or rule complement", _sub(B(a, b) & B(a, neg(b)), B(a, full)))
    if _sub(a, b & d):
        check("or rule equality", B(a, b) & B(a, d) == B(a, b | d))
    check("widened arrow", _sub(B(a, b), B(imp(b, a), b | d)))
    check("quasi conjunction bound", _sub(B(a, b) & B(c, d), B(imp(b, a) & imp(d, c), b | d)))
    return failed


def identity_arguments(n: int):
    size = 1 << n
    for a in range(size):
        for c in range(size):
            for b in range(1, size):
                for d in range(1, size):
                    yield a, c, b, d


def random_arguments(n: int, count: int, rng: random.Random):
    size = 1 << n
    for _ in range(count):
        yield rng.randrange(size), rng.randrange(size), rng.randrange(1, size), rng.randrange(1, size)


def sweep_identities(n: int, arguments) -> tuple[int, list]:
    cond = conditional_algebra(make_algebra(n))
    checked, failures = 0, []
    for args in arguments:
        checked += 1
        bad = identity_failures(cond, *args)
        if bad:
            failures.append((args, bad))
    return checked, failures


def atom_count(n: int) -> int:
    return factorial(n)


# -- acceptance reporting --------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    """Store and print the verdict for one acceptance criterion."""
    ACCEPTANCE[criterion] = (ok, detail)
    print(acceptance_line(criterion))
    return ok


def acceptance_line(criterion: int) -> str:
    ok, detail = ACCEPTANCE[criterion]
    return f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
