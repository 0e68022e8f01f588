"""Command-line front end.

Exit status: 0 for success or a true verdict, 1 for a false verdict (a witness
is printed), 2 for usage, parse or input errors, 3 when a size cap is hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from typing import Optional

from . import syntax
from .conditionals import (
    ConditionalAlgebra,
    conditional_algebra,
    count_atoms_below,
    equality_clause,
    leq_basic,
    parse_term,
    recognize_basic,
)
from .documents import algebra_from_doc, kb_from_doc, load, measure_from_doc
from .errors import CapExceededError, CondalError
from .events import Event, EventAlgebra, formula_bits, lindenbaum
from .logic import KnowledgeBase, entails, klm_harness, nm_consequence, RULES
from .measure_free import interval_leq, to_interval
from .probability import (
    CMeasure,
    EventMeasure,
    TwoPlaceAssignment,
    check_cp_axioms,
    cond_prob,
    format_rational,
    is_separable,
    measure,
)
from .trees import build_atom_tree

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
SEPARABLE_WARN_ATOMS = 6


@dataclass
class Session:
    """State shared by one command: the algebra and whatever documents were loaded."""

    algebra: EventAlgebra
    output: str = "text"
    event_measure: Optional[EventMeasure] = None
    cmeasure: Optional[CMeasure] = None
    kb: Optional[KnowledgeBase] = None
    lines: list = field(default_factory=list)

    @cached_property
    def cond(self) -> ConditionalAlgebra:
        return conditional_algebra(self.algebra)

    def term(self, text: str):
        return parse_term(text, self.algebra)

    def basic_pair(self, f) -> Optional[tuple[Event, Event]]:
        if isinstance(f, syntax.Basic):
            return (Event(self.algebra, formula_bits(f.consequent, self.algebra)),
                    Event(self.algebra, formula_bits(f.antecedent, self.algebra)))
        return None

    def perm_text(self, r: int) -> str:
        return "<" + ", ".join(self.cond.perm_labels(r)) + ">"

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self, payload: dict) -> None:
        if self.output == "json":
            print(json.dumps(payload, indent=2, ensure_ascii=False))
        else:
            print("\n".join(self.lines))


def _fmt(q) -> str:
    return format_rational(q)


# -- session construction ---------------------------------------------------------


def _algebra_from_args(args) -> Optional[EventAlgebra]:
    if getattr(args, "algebra", None):
        return algebra_from_doc(load(args.algebra))
    if getattr(args, "atoms", None):
        return EventAlgebra(tuple(a.strip() for a in args.atoms.split(",")))
    if getattr(args, "variables", None):
        return lindenbaum([v.strip() for v in args.variables.split(",")])
    return None


def _session(args, require_algebra: bool = True) -> Session:
    alg = _algebra_from_args(args)
    if alg is None and require_algebra:
        raise ValueError("an algebra is required: use --algebra FILE, --atoms or --variables")
    return Session(alg, args.output)


# -- commands ---------------------------------------------------------------------------


def cmd_atoms(args) -> int:
    s = _session(args)
    n, count = s.algebra.n, factorial(s.algebra.n)
    payload = {"command": "atoms", "algebra": list(s.algebra.labels), "n": n, "atom_count": count}
    if args.tree:
        text = build_atom_tree(s.algebra).render()
        payload["tree"] = text
        s.say(text)
    elif args.cond:
        f = s.term(args.cond)
        t = s.cond.eval_term(f)
        payload.update(query=args.cond, atoms=t.ranks(), perms=[s.cond.perm_labels(r) for r in t.ranks()])
        s.say(f"{t.count()} atoms below {args.cond}")
        for r in t.ranks():
            s.say(f"  {r}: {s.perm_text(r)}")
        pair = s.basic_pair(f)
        if pair:
            a, b = pair
            formula = count_atoms_below(a & b, b)
            payload["closed_form_count"] = formula
            s.say(f"closed-form count n!*|a∧b|/|b| = {formula}")
    else:
        s.say(f"{count} atoms, |C(A)| = 2^{count}" + (f" = {2 ** count}" if count <= 64 else ""))
        payload["element_count"] = f"2^{count}"
        payload["perms"] = [list(s.cond.perm_labels(r)) for r in range(count)]
        for r in range(count):
            s.say(f"  {r}: {s.perm_text(r)}")
    s.emit(payload)
    return EXIT_OK


def cmd_query(args) -> int:
    s = _session(args)
    terms = [s.term(t) for t in args.terms]
    payload = {"command": "query", "mode": args.mode, "terms": args.terms}
    if args.mode == "eval":
        if len(terms) != 1:
            raise ValueError("eval takes exactly one term")
        t = s.cond.eval_term(terms[0])
        payload["atoms"] = t.ranks()
        payload["perms"] = [s.cond.perm_labels(r) for r in t.ranks()]
        s.say(f"{args.terms[0]}: {t.count()} of {s.cond.atom_count} atoms")
        for r in t.ranks():
            s.say(f"  {r}: {s.perm_text(r)}")
        rec = recognize_basic(t)
        if rec is not None:
            a, b = rec
            payload["basic"] = [str(a), str(b)]
            s.say(f"equals the basic conditional ({a} | {b})")
        s.emit(payload)
        return EXIT_OK
    if len(terms) != 2:
        raise ValueError(f"{args.mode} takes exactly two terms")
    left, right = terms
    pl, pr = s.basic_pair(left), s.basic_pair(right)
    if args.mode == "equal":
        if pl and pr:
            clause = equality_clause(*pl, *pr)
            verdict = clause is not None
            how = clause or "no clause applies"
        else:
            verdict = s.cond.eval_term(left) == s.cond.eval_term(right)
            how = "semantic equality of atom sets"
    else:
        if pl and pr:
            verdict, how = leq_basic(*pl, *pr)
        else:
            verdict = s.cond.eval_term(left) <= s.cond.eval_term(right)
            how = "semantic subset of atom sets"
    payload.update(result=verdict, reason=how)
    if not verdict:
        diff = s.cond.eval_term(left) - s.cond.eval_term(right)
        if args.mode == "equal" and diff.is_bottom:
            diff = s.cond.eval_term(right) - s.cond.eval_term(left)
        payload["witness_atom"] = diff.ranks()[0]
        s.say(f"{str(verdict).lower()} ({how}); witness atom {diff.ranks()[0]}: {s.perm_text(diff.ranks()[0])}")
    else:
        s.say(f"true ({how})")
    s.emit(payload)
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_measure(args) -> int:
    doc = load(args.measure)
    alg = _algebra_from_args(args)
    alg, P, mu = measure_from_doc(doc, alg)
    s = Session(alg, args.output, P, mu)
    payload = {"command": "measure", "mode": args.mode}
    if args.mode == "extend":
        if P is None:
            raise ValueError("extend needs an event measure ('weights')")
        payload["weights"] = {str(r): _fmt(w) for r, w in enumerate(mu.weights)}
        for r, w in enumerate(mu.weights):
            s.say(f"{r}: {s.perm_text(r)}  {_fmt(w)}")
        s.emit(payload)
        return EXIT_OK
    if args.mode == "measure":
        if not args.terms:
            raise ValueError("measure needs at least one term")
        results = []
        for text in args.terms:
            f = s.term(text)
            value = measure(mu, s.cond.eval_term(f))
            entry = {"term": text, "value": _fmt(value)}
            line = f"{text} = {_fmt(value)}"
            pair = s.basic_pair(f)
            if pair and P is not None:
                direct = cond_prob(P, *pair)
                entry["ratio"] = _fmt(direct)
                line += f"   (P(a∧b)/P(b) = {_fmt(direct)})"
            results.append(entry)
            s.say(line)
        payload["results"] = results
        s.emit(payload)
        return EXIT_OK
    if args.mode == "separable":
        if alg.n > SEPARABLE_WARN_ATOMS:
            print(f"warning: separability check over {alg.n} atoms may be slow", file=sys.stderr)
        res = is_separable(mu)
        payload["separable"] = res.separable
        if res.separable:
            s.say("separable")
        else:
            a, b, c = res.witness
            payload["witness"] = {"a": str(a), "b": str(b), "c": str(c), "lhs": _fmt(res.lhs), "rhs": _fmt(res.rhs)}
            s.say("not separable")
            s.say(f"witness a = {a}, b = {b}, c = {c}: μ(a|c) = {_fmt(res.lhs)} but μ(a|b)·μ(b|c) = {_fmt(res.rhs)}")
        s.emit(payload)
        return EXIT_OK if res.separable else EXIT_FALSE
    if args.mode == "cp-check":
        cp = TwoPlaceAssignment.from_event_measure(P) if args.direct and P is not None else TwoPlaceAssignment.from_cmeasure(mu)
        report = check_cp_axioms(cp)
        payload["axioms"] = {}
        for name, res in report.items():
            payload["axioms"][name] = {"passed": res.passed, "witness": list(res.witness) if res.witness else None,
                                       "detail": res.detail}
            extra = "" if res.passed else f"  witness {res.witness}: {res.detail}"
            s.say(f"{name}: {'pass' if res.passed else 'FAIL'}{extra}")
        s.emit(payload)
        return EXIT_OK if all(r.passed for r in report.values()) else EXIT_FALSE
    raise ValueError(f"unknown measure mode {args.mode!r}")


def _kb_session(args) -> Session:
    kb = kb_from_doc(load(args.kb))
    return Session(kb.language, args.output, kb=kb)


def cmd_entail(args) -> int:
    s = _kb_session(args)
    res = entails(s.kb, args.query, engine=args.engine)
    payload = {"command": "entail", "query": args.query, "engine": args.engine, "entailed": res.entailed}
    if res.entailed:
        s.say("entailed")
    else:
        payload["witness"] = res.witness.labels()
        s.say(f"not entailed; witness interpretation {res.witness}")
    s.emit(payload)
    return EXIT_OK if res.entailed else EXIT_FALSE


def cmd_nmc(args) -> int:
    s = _kb_session(args)
    phi, psi = syntax.parse_consequence(args.query)
    verdict = nm_consequence(s.kb, phi, psi, engine=args.engine)
    payload = {"command": "nmc", "query": args.query, "holds": verdict}
    if verdict:
        s.say("holds")
    else:
        res = entails(s.kb, syntax.Basic(psi, phi), engine=args.engine)
        payload["witness"] = res.witness.labels()
        s.say(f"does not hold; witness interpretation {res.witness}")
    s.emit(payload)
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_klm(args) -> int:
    s = _kb_session(args)
    mode = "sample" if args.sample else "exhaustive"
    reports = klm_harness(s.kb, mode=mode, samples=args.sample or 0, seed=args.seed)
    payload = {"command": "klm", "mode": mode, "rules": {}}
    for rule in RULES:
        rep = reports[rule]
        examples = [[str(e) for e in c] for c in rep.counterexamples]
        payload["rules"][rule] = {"passed": rep.passed, "instances": rep.instances,
                                  "counterexamples": examples}
        line = f"{rule}: {'pass' if rep.passed else 'FAIL'} ({rep.instances} instances)"
        if not rep.passed:
            line += f"; {len(examples)} counterexamples, first " + ", ".join(examples[0])
        s.say(line)
    s.emit(payload)
    return EXIT_OK if all(r.passed for r in reports.values()) else EXIT_FALSE


def _relation(le: bool, ge: bool) -> str:
    if le and ge:
        return "="
    if le:
        return "<="
    if ge:
        return ">="
    return "incomparable"


def cmd_compare(args) -> int:
    s = _session(args)
    left, right = (s.term(t) for t in args.terms)
    pl, pr = s.basic_pair(left), s.basic_pair(right)
    if not (pl and pr):
        raise ValueError("compare takes two basic conditionals")
    tl, tr = s.cond.eval_term(left), s.cond.eval_term(right)
    il, ir = to_interval(*pl), to_interval(*pr)
    boolean = _relation(tl <= tr, tr <= tl)
    interval = _relation(interval_leq(il, ir), interval_leq(ir, il))
    s.say(f"conditional algebra: {boolean}")
    s.say(f"interval order:      {interval}   ({il} vs {ir})")
    s.emit({"command": "compare", "terms": args.terms, "boolean": boolean, "interval": interval,
            "intervals": [[str(il.lower), str(il.upper)], [str(ir.lower), str(ir.upper)]]})
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text", help="output format")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")

    alg_opts = argparse.ArgumentParser(add_help=False)
    group = alg_opts.add_mutually_exclusive_group()
    group.add_argument("--algebra", metavar="FILE", help='JSON with "atoms" or "variables"')
    group.add_argument("--atoms", help="comma separated atom labels")
    group.add_argument("--variables", help="comma separated variable names (Lindenbaum algebra)")

    parser = argparse.ArgumentParser(prog="condal", description="Boolean algebras of conditionals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atoms", parents=[common, alg_opts], help="list conditional atoms")
    p.add_argument("--cond", help="list only the atoms below this conditional term")
    p.add_argument("--tree", action="store_true", help="print the atom tree")
    p.set_defaults(func=cmd_atoms)

    p = sub.add_parser("query", parents=[common, alg_opts], help="equality, order or evaluation of terms")
    p.add_argument("mode", choices=("equal", "leq", "eval"))
    p.add_argument("terms", nargs="+")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("measure", parents=[common, alg_opts], help="probabilities on conditionals")
    p.add_argument("mode", choices=("extend", "measure", "separable", "cp-check"))
    p.add_argument("terms", nargs="*")
    p.add_argument("--measure", required=True, metavar="FILE",
                   help='JSON with "weights" (event measure) or "conditional_weights"')
    p.add_argument("--direct", action="store_true",
                   help="cp-check the ratio P(a∧b)/P(b) instead of the extension")
    p.set_defaults(func=cmd_measure)

    for name, func, helptext in (("entail", cmd_entail, "does the knowledge base entail a formula"),
                                 ("nmc", cmd_nmc, 'nonmonotonic consequence "phi |~ psi"')):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("query")
        p.add_argument("--kb", required=True, metavar="FILE")
        p.add_argument("--engine", choices=("fast", "brute"), default="fast")
        p.set_defaults(func=func)

    p = sub.add_parser("klm", parents=[common], help="System P and rational monotonicity report")
    p.add_argument("--kb", required=True, metavar="FILE")
    p.add_argument("--sample", type=int, default=0, metavar="N",
                   help="check N random instances instead of all")
    p.set_defaults(func=cmd_klm)

    p = sub.add_parser("compare", parents=[common, alg_opts],
                       help="order of two basics in both the Boolean and the interval view")
    p.add_argument("terms", nargs=2)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    # positional terms may follow options such as --measure FILE
    args, extra = parser.parse_known_args(argv)
    if extra:
        if not hasattr(args, "terms") or any(x.startswith("--") for x in extra):
            parser.error("unrecognized arguments: " + " ".join(extra))
        args.terms = list(args.terms) + extra
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CondalError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
