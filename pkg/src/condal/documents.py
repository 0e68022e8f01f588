"""JSON documents for algebras, measures and knowledge bases."""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any, Mapping, Optional

from .conditionals import CElement, conditional_algebra
from .events import Event, EventAlgebra, lindenbaum
from .logic import KnowledgeBase
from .probability import CMeasure, EventMeasure, canonical_extension, format_rational, parse_rational


def load(path: str) -> dict:
    """Read a JSON object from ``path`` (``-`` for stdin)."""
    if path == "-":
        doc = json.load(sys.stdin)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return doc


def algebra_from_doc(doc: Mapping[str, Any]) -> EventAlgebra:
    if "atoms" in doc and "variables" in doc:
        raise ValueError("give either 'atoms' or 'variables', not both")
    if "atoms" in doc:
        atoms = doc["atoms"]
        if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
            raise ValueError("'atoms' must be a list of strings")
        return EventAlgebra(tuple(atoms))
    if "variables" in doc:
        names = doc["variables"]
        if not isinstance(names, list) or not all(isinstance(v, str) for v in names):
            raise ValueError("'variables' must be a list of strings")
        return lindenbaum(names)
    raise ValueError("algebra document needs 'atoms' or 'variables'")


def algebra_to_doc(alg: EventAlgebra) -> dict:
    if alg.variables is not None:
        return {"variables": list(alg.variables)}
    return {"atoms": list(alg.labels)}


def _perm_key(key: str, alg: EventAlgebra) -> int:
    """Atom rank from a decimal rank or a comma separated list of atom labels."""
    key = key.strip()
    if key.isdigit():
        return int(key)
    labels = [part.strip() for part in key.split(",")]
    cond = conditional_algebra(alg)
    return cond.rank(tuple(alg.index_of(lab) for lab in labels))


def event_measure_from_doc(doc: Mapping[str, Any], alg: EventAlgebra) -> EventMeasure:
    weights = doc["weights"]
    if isinstance(weights, list):
        return EventMeasure(alg, tuple(_strict(w) for w in weights))
    if not isinstance(weights, dict):
        raise ValueError("'weights' must be an object or a list")
    return EventMeasure.from_mapping(alg, {k: _strict(v) for k, v in weights.items()})


def _strict(value) -> Fraction:
    if isinstance(value, float):
        raise ValueError(f"decimal literal {value!r} rejected; write weights as \"p/q\" strings")
    return parse_rational(value)


def cmeasure_from_doc(doc: Mapping[str, Any], alg: EventAlgebra) -> CMeasure:
    """Atom weights of a conditional-algebra measure.

    ``conditional_weights`` is a list indexed by rank, or an object keyed by
    rank or by comma separated atom labels; unlisted atoms get weight 0.
    """
    cond = conditional_algebra(alg)
    raw = doc["conditional_weights"]
    if isinstance(raw, list):
        weights = [_strict(w) for w in raw]
    elif isinstance(raw, dict):
        weights = [Fraction(0)] * cond.atom_count
        for key, value in raw.items():
            weights[_perm_key(key, alg)] = _strict(value)
    else:
        raise ValueError("'conditional_weights' must be a list or an object")
    return CMeasure(cond, tuple(weights))


def measure_from_doc(doc: Mapping[str, Any], alg: Optional[EventAlgebra] = None):
    """Returns ``(algebra, event_measure or None, conditional_measure)``."""
    if alg is None:
        alg = algebra_from_doc(doc)
    if "weights" in doc:
        P = event_measure_from_doc(doc, alg)
        return alg, P, canonical_extension(P)
    if "conditional_weights" in doc:
        return alg, None, cmeasure_from_doc(doc, alg)
    raise ValueError("measure document needs 'weights' or 'conditional_weights'")


def kb_from_doc(doc: Mapping[str, Any]) -> KnowledgeBase:
    alg = algebra_from_doc(doc)
    items = doc.get("conditionals", [])
    if not isinstance(items, list) or not all(isinstance(x, str) for x in items):
        raise ValueError("'conditionals' must be a list of strings")
    return KnowledgeBase.parse(alg, items)


def event_to_json(e: Event) -> list[str]:
    return e.labels()


def celement_to_json(t: CElement) -> list[int]:
    return t.ranks()


def rational_to_json(q: Fraction) -> str:
    return format_rational(q)
