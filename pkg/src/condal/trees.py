"""Tree and block enumerations of conditional atoms.

These build atom sets from permutation prefixes alone, without going through
:meth:`ConditionalAlgebra.basic`, so they serve as independent oracles for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence

from .conditionals import CElement, conditional_algebra
from .events import Event, EventAlgebra
from .permutations import rank


@dataclass(frozen=True)
class TreeNode:
    """Node ``(atom | antecedent)``; the root has ``atom = None``."""

    atom: int | None
    antecedent: int
    children: tuple["TreeNode", ...]

    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class AtomTree:
    base: EventAlgebra
    root: TreeNode

    def paths(self) -> list[tuple[int, ...]]:
        """Full permutations read off root-to-leaf paths (missing last atom appended)."""
        n = self.base.n
        out = []

        def walk(node, prefix):
            if node.is_leaf():
                rest = [i for i in range(n) if i not in prefix]
                out.append(tuple(prefix) + tuple(rest))
                return
            for ch in node.children:
                walk(ch, prefix + [ch.atom])

        walk(self.root, [])
        return out

    def leaves(self) -> int:
        return len(self.paths())

    def levels(self) -> list[list[TreeNode]]:
        out, frontier = [], list(self.root.children)
        while frontier:
            out.append(frontier)
            frontier = [ch for node in frontier for ch in node.children]
        return out

    def render(self) -> str:
        """Indented text rendering, one node ``(atom | antecedent)`` per line."""
        lines = []
        labels = self.base.labels

        def event_text(bits):
            if bits == self.base.full:
                return "T"
            return " \\/ ".join(labels[i] for i in range(self.base.n) if bits >> i & 1)

        def walk(node, depth):
            for ch in node.children:
                lines.append("  " * depth + f"({labels[ch.atom]} | {event_text(ch.antecedent)})")
                walk(ch, depth + 1)

        walk(self.root, 0)
        return "\n".join(lines) if lines else f"({labels[0]} | T)"


def build_atom_tree(base: EventAlgebra) -> AtomTree:
    """Tree of depth ``n-1`` whose children of ``(α|b)`` are ``(β | b∧¬α)`` for ``β ≤ b∧¬α``."""
    n = base.n

    def grow(b: int, depth: int) -> tuple[TreeNode, ...]:
        if depth == n - 1:
            return ()
        kids = []
        for i in range(n):
            if b >> i & 1:
                rest = b & ~(1 << i)
                kids.append(TreeNode(i, b, grow(rest, depth + 1)))
        return tuple(kids)

    return AtomTree(base, TreeNode(None, base.full, grow(base.full, 0)))


@dataclass(frozen=True)
class Block:
    """All conditional atoms whose permutation starts with ``prefix``."""

    prefix: tuple[int, ...]
    members: CElement

    def __len__(self) -> int:
        return self.members.count()


def block(base: EventAlgebra, prefix: Sequence[int]) -> Block:
    """Block of a permutation prefix, as a contiguous range of lexicographic ranks."""
    n = base.n
    prefix = tuple(int(i) for i in prefix)
    if len(set(prefix)) != len(prefix):
        raise ValueError(f"repeated atom index in prefix {prefix}")
    if len(prefix) > n or any(not 0 <= i < n for i in prefix):
        raise ValueError(f"invalid prefix {prefix} for {n} atoms")
    rest = sorted(set(range(n)) - set(prefix))
    start = rank(prefix + tuple(rest))
    size = factorial(n - len(prefix))
    alg = conditional_algebra(base)
    return Block(prefix, CElement(alg, ((1 << size) - 1) << start))


def s_prefixes(target: int, b: Event, j: int) -> list[tuple[int, ...]]:
    """Prefixes whose blocks make up the piece of ``(α_target | b)`` starting with ``α_j``.

    For ``j`` outside ``b`` these are ``⟨j, c1, …, ck, target⟩`` with the ``c``
    drawn (in every order) from the other atoms outside ``b``.
    """
    n = b.algebra.n
    if j == target:
        return [(target,)]
    if b.bits >> j & 1:
        return []
    outside = [i for i in range(n) if not b.bits >> i & 1 and i != j]
    out = []
    for k in range(len(outside) + 1):
        for mid in itertools.permutations(outside, k):
            out.append((j,) + mid + (target,))
    return out


def s_blocks(target: int, b: Event) -> list[CElement]:
    """Pieces of ``(α_target | b)`` grouped by the first atom of the permutation.

    Entry ``j`` holds the atoms below the conditional whose permutation starts
    with ``α_j``.  The list is indexed by the actual atom index.
    """
    base = b.algebra
    if b.is_bottom:
        raise ValueError("antecedent must not be bottom")
    if not b.bits >> target & 1:
        raise ValueError(f"atom {target} is not below the antecedent")
    alg = conditional_algebra(base)
    out = []
    for j in range(base.n):
        bits = 0
        for p in s_prefixes(target, b, j):
            bits |= block(base, p).members.bits
        out.append(CElement(alg, bits))
    return out


def all_prefixes(n: int, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every prefix of length ``0..max_len`` (default ``n``), shortest first."""
    top = n if max_len is None else max_len
    for t in range(top + 1):
        yield from itertools.permutations(range(n), t)
