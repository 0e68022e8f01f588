"""Lexicographic ranking of permutations via the Lehmer code."""

from __future__ import annotations

from math import factorial
from typing import Sequence


def _check_perm(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
    return perm


def lehmer_code(perm: Sequence[int]) -> list[int]:
    """Entry ``i`` counts the later entries smaller than ``perm[i]``."""
    perm = _check_perm(perm)
    return [sum(1 for y in perm[i + 1:] if y < x) for i, x in enumerate(perm)]


def rank(perm: Sequence[int]) -> int:
    """Position of ``perm`` in the lexicographic listing of all permutations."""
    code = lehmer_code(perm)
    n = len(code)
    return sum(c * factorial(n - 1 - i) for i, c in enumerate(code))


def unrank(r: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`rank`."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0 <= r < factorial(n):
        raise ValueError(f"rank {r} out of range for n={n}")
    pool = list(range(n))
    out = []
    for i in range(n - 1, -1, -1):
        q, r = divmod(r, factorial(i))
        out.append(pool.pop(q))
    return tuple(out)
