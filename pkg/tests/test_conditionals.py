import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from condal import (
    AlgebraMismatchError,
    GuardError,
    ParseError,
    UndefinedConditionalError,
    atom_rank,
    atom_unrank,
    atoms_below_basic,
    conditional_algebra,
    count_atoms_below,
    count_basic,
    equal_basic,
    eval_term,
    leq_basic,
    leq_basic_guarded,
    make_algebra,
    part_i,
    recognize_basic,
)
from condal.conditionals import equality_clause, leq_clause, parse_basic

from helpers import identity_arguments, oracle_bits, random_arguments, sweep_identities


def ev(alg, bits):
    return alg.event(bits)


@pytest.fixture(scope="module")
def a3():
    return make_algebra(3)


class TestAtoms:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_atom_count(self, n):
        cond = conditional_algebra(make_algebra(n))
        assert cond.atom_count == factorial(n)
        assert cond.perms == tuple(itertools.permutations(range(n)))

    def test_rank_examples(self):
        assert atom_rank((0, 1, 2)) == 0
        assert atom_rank((2, 1, 0)) == 5
        assert atom_rank((1, 0, 2)) == 2
        assert atom_unrank(2, 3) == (1, 0, 2)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_atom_terms_are_the_atoms(self, n):
        cond = conditional_algebra(make_algebra(n))
        for r, perm in enumerate(cond.perms):
            assert cond.atom_term(perm).bits == 1 << r
            # the last factor is forced
            assert cond.atom_term(perm[:-1]).bits == 1 << r

    def test_perm_labels(self, a3):
        cond = conditional_algebra(a3)
        assert cond.perm_labels(4) == ["a3", "a1", "a2"]


class TestBasicConditionals:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_agrees_with_oracle(self, n):
        cond = conditional_algebra(make_algebra(n))
        for a, b in cond.basics():
            assert cond.basic_bits(a, b) == oracle_bits(n, a, b)

    def test_worked_three_atom_conditional(self, a3):
        t = atoms_below_basic(ev(a3, 0b001), ~ev(a3, 0b100))
        assert t.ranks() == [0, 1, 4]
        assert t.perms() == [(0, 1, 2), (0, 2, 1), (2, 0, 1)]

    def test_atom_pairs_join_to_top_antecedent(self, a3):
        cond = conditional_algebra(a3)
        for i in range(3):
            pair = cond.atom(2 * i) | cond.atom(2 * i + 1)
            assert pair == atoms_below_basic(a3.atom(i), a3.top)

    def test_self_and_contradiction(self, a3):
        for b in range(1, 8):
            e = ev(a3, b)
            assert atoms_below_basic(e, e).is_top
            assert atoms_below_basic(~e, e).is_bottom

    def test_undefined(self, a3):
        with pytest.raises(UndefinedConditionalError):
            atoms_below_basic(a3.top, a3.bottom)

    def test_mismatch(self, a3):
        with pytest.raises(AlgebraMismatchError):
            atoms_below_basic(a3.top, make_algebra(2).top)


class TestTerms:
    def test_complement(self, a3):
        t = eval_term("~(a1|a1 \\/ a2)", a3)
        assert t == atoms_below_basic(~a3.atom(0), a3.event(0b011))

    def test_meet_same_antecedent(self, a3):
        t = eval_term("(a1 \\/ a2 | ~a3) /\\ (a1 \\/ a3 | ~a3)", a3)
        assert t == atoms_below_basic(a3.atom(0), ~a3.atom(2))

    def test_chaining(self, a3):
        t = eval_term("(a1 | a1 \\/ a2) /\\ (a1 \\/ a2 | T)", a3)
        assert t == atoms_below_basic(a3.atom(0), a3.top)

    def test_bare_identifier(self, a3):
        assert eval_term("a2", a3) == atoms_below_basic(a3.atom(1), a3.top)

    def test_implication_and_iff(self, a3):
        cond = conditional_algebra(a3)
        x, y = cond.eval_term("(a1|T)"), cond.eval_term("(a1|a1 \\/ a2)")
        assert cond.eval_term("(a1|T) -> (a1|a1 \\/ a2)") == x.implies(y)
        assert cond.eval_term("(a1|T) <-> (a1|T)").is_top

    def test_infers_base_from_events(self, a3):
        from condal.syntax import Basic, Not
        t = Not(Basic(a3.atom(0), a3.top))
        assert eval_term(t) == ~atoms_below_basic(a3.atom(0), a3.top)

    def test_errors(self, a3):
        with pytest.raises(ParseError):
            eval_term("(zz | a1)", a3)
        with pytest.raises(UndefinedConditionalError):
            eval_term("(a1 | a2 /\\ ~a2)", a3)
        with pytest.raises(ParseError):
            parse_basic("(a1|T) /\\ (a2|T)", a3)


class TestIdentities:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive(self, n):
        checked, failures = sweep_identities(n, identity_arguments(n))
        assert checked == (2 ** n) ** 2 * (2 ** n - 1) ** 2
        assert failures == []

    def test_random_five_atoms(self):
        import random
        checked, failures = sweep_identities(5, random_arguments(5, 1000, random.Random(5)))
        assert failures == []

    @pytest.mark.parametrize("n", [2, 3])
    def test_fixed_antecedent_is_a_subalgebra(self, n):
        cond = conditional_algebra(make_algebra(n))
        for b in range(1, 2 ** n):
            family = {cond.basic_bits(a, b) for a in range(2 ** n)}
            for x in family:
                assert cond.full & ~x in family
                for y in family:
                    assert x & y in family and x | y in family


class TestDecisionProcedures:
    def test_examples(self, a3):
        a, b = a3.atom(0), a3.event(0b011)
        assert equality_clause(a, b, a & b, b) == "same conjunction and antecedent"
        assert not equal_basic(a, b, a, a3.event(0b101))
        assert equality_clause(b, b, a3.top, a3.top) == "both top"
        assert equality_clause(~b, b, a3.bottom, a3.top) == "both bottom"

    def test_guarded_examples(self):
        alg = make_algebra(4)
        a, b, c, d = alg.event(0b0001), alg.event(0b0111), alg.event(0b0011), alg.event(0b0011)
        assert leq_basic_guarded(a, b, c, d)
        assert leq_clause(a & b, alg.top, a, b) == "a∧b ≤ c∧d and b ≥ d"
        # (a|b) ≤ (a|d) fails when b is not below d
        x, y = alg.event(0b0011), alg.event(0b0101)
        assert leq_basic(alg.atom(0), x, alg.atom(0), y) == (False, "guarded test")

    def test_guard_violation(self, a3):
        with pytest.raises(GuardError):
            leq_basic_guarded(a3.atom(0), a3.atom(0), a3.atom(1), a3.top)
        assert leq_basic(a3.atom(0), a3.atom(0), a3.atom(1), a3.top) == (False, "semantic subset")

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_equality_agrees_with_semantics(self, n):
        alg = make_algebra(n)
        cond = conditional_algebra(alg)
        pairs = list(cond.basics())
        for a, b in pairs:
            for c, d in pairs:
                syntactic = equal_basic(ev(alg, a), ev(alg, b), ev(alg, c), ev(alg, d))
                assert syntactic == (cond.basic_bits(a, b) == cond.basic_bits(c, d))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_guarded_order_agrees_with_semantics(self, n):
        alg = make_algebra(n)
        cond = conditional_algebra(alg)
        pairs = list(cond.basics())
        for a, b in pairs:
            for c, d in pairs:
                if c & d & ~b:
                    continue
                x, y = cond.basic_bits(a, b), cond.basic_bits(c, d)
                assert leq_basic_guarded(ev(alg, a), ev(alg, b), ev(alg, c), ev(alg, d)) == (x & ~y == 0)


class TestRecognition:
    def test_examples(self, a3):
        cond = conditional_algebra(a3)
        assert recognize_basic(cond.top) == (a3.top, a3.top)
        assert recognize_basic(cond.from_ranks([0, 1, 4])) == (a3.atom(0), a3.event(0b011))
        assert recognize_basic(cond.atom(0)) is None

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_inverts_atoms_below(self, n):
        alg = make_algebra(n)
        cond = conditional_algebra(alg)
        for a, b in cond.canonical_basics():
            if a == 0 or a == b:
                continue
            assert recognize_basic(cond.element(cond.basic_bits(a, b))) == (ev(alg, a), ev(alg, b))

    def test_exactly_the_basic_elements_are_recognised(self, a3):
        cond = conditional_algebra(a3)
        basics = {cond.basic_bits(a, b) for a, b in cond.basics()}
        for bits in range(2 ** cond.atom_count):
            assert (recognize_basic(cond.element(bits)) is not None) == (bits in basics)


class TestCounting:
    def test_known_values(self):
        assert [count_basic(n) for n in (1, 2, 3)] == [2, 4, 14]

    @pytest.mark.parametrize("n", range(1, 6))
    def test_formula_matches_enumeration(self, n):
        cond = conditional_algebra(make_algebra(n))
        distinct = {cond.basic_bits(a, b) for a, b in cond.basics()}
        assert count_basic(n) == len(distinct)

    def test_atoms_below_examples(self, a3):
        assert count_atoms_below(a3.atom(0), a3.event(0b011)) == 3
        assert count_atoms_below(a3.top, a3.top) == 6
        alg4 = make_algebra(4)
        assert count_atoms_below(alg4.atom(0), alg4.top) == 6
        with pytest.raises(ValueError):
            count_atoms_below(a3.top, a3.atom(0))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_closed_form_matches_popcount(self, n):
        alg = make_algebra(n)
        cond = conditional_algebra(alg)
        for a, b in cond.canonical_basics():
            assert count_atoms_below(ev(alg, a), ev(alg, b)) == cond.element(cond.basic_bits(a, b)).count()


class TestPartitions:
    @pytest.mark.parametrize("i,size", [(1, 4), (2, 12), (3, 24)])
    def test_sizes(self, i, size):
        assert len(part_i(make_algebra(4), i)) == size

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_partition_and_refinement(self, n):
        alg = make_algebra(n)
        cond = conditional_algebra(alg)
        previous = [cond.top]
        for i in range(1, n):
            blocks = part_i(alg, i)
            union = 0
            for x in blocks:
                assert union & x.bits == 0
                union |= x.bits
                assert any(x <= p for p in previous)
            assert union == cond.full
            previous = blocks
        assert sorted(x.bits for x in part_i(alg, n - 1)) == sorted(x.bits for x in cond.atoms())

    def test_level_out_of_range(self):
        with pytest.raises(ValueError):
            part_i(make_algebra(3), 4)


@settings(max_examples=200)
@given(st.integers(0, 63), st.integers(1, 63), st.integers(0, 63), st.integers(1, 63))
def test_six_atom_equality_matches_semantics(a, b, c, d):
    alg = make_algebra(6)
    cond = conditional_algebra(alg)
    assert equal_basic(alg.event(a), alg.event(b), alg.event(c), alg.event(d)) == (
        cond.basic_bits(a, b) == cond.basic_bits(c, d)
    )
