import json
from fractions import Fraction

import pytest

from condal import make_algebra
from condal.documents import (
    algebra_from_doc,
    algebra_to_doc,
    celement_to_json,
    kb_from_doc,
    load,
    measure_from_doc,
    rational_to_json,
)


class TestAlgebraDocuments:
    def test_atoms_and_variables(self):
        assert algebra_from_doc({"atoms": ["x", "y"]}).labels == ("x", "y")
        alg = algebra_from_doc({"variables": ["p", "q"]})
        assert alg.variables == ("p", "q") and alg.n == 4
        assert algebra_from_doc(algebra_to_doc(alg)) == alg
        assert algebra_to_doc(make_algebra(2)) == {"atoms": ["a1", "a2"]}

    @pytest.mark.parametrize("doc", [{}, {"atoms": "ab"}, {"atoms": ["a"], "variables": ["p"]}, {"variables": [1]}])
    def test_rejects(self, doc):
        with pytest.raises(ValueError):
            algebra_from_doc(doc)

    def test_load(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load(str(path))
        path.write_text('{"atoms": ["a"]}')
        assert load(str(path)) == {"atoms": ["a"]}


class TestMeasureDocuments:
    def test_event_weights_list_and_mapping(self):
        alg, P, mu = measure_from_doc({"atoms": ["x", "y"], "weights": ["1/3", "2/3"]})
        assert P.weights == (Fraction(1, 3), Fraction(2, 3))
        _, Q, _ = measure_from_doc({"atoms": ["x", "y"], "weights": {"y": "2/3", "x": "1/3"}})
        assert Q.weights == P.weights
        assert mu.weights == (Fraction(1, 3), Fraction(2, 3))

    def test_integers_are_exact(self):
        _, P, _ = measure_from_doc({"atoms": ["x"], "weights": [1]})
        assert P.weights == (Fraction(1),)

    def test_decimal_literals_rejected(self):
        with pytest.raises(ValueError, match="decimal"):
            measure_from_doc({"atoms": ["x", "y"], "weights": [0.5, 0.5]})
        with pytest.raises(ValueError):
            measure_from_doc({"atoms": ["x", "y"], "weights": ["0.5", "0.5"]})

    def test_conditional_weights_by_label(self):
        doc = {"atoms": ["w1", "w2", "w3"], "conditional_weights": {"w2,w1,w3": "1/2", "5": "1/2"}}
        _, P, mu = measure_from_doc(doc)
        assert P is None
        assert mu.weights == tuple(Fraction(x) for x in (0, 0, Fraction(1, 2), 0, 0, Fraction(1, 2)))

    def test_missing_weights(self):
        with pytest.raises(ValueError):
            measure_from_doc({"atoms": ["x"]})


class TestKnowledgeBaseDocuments:
    def test_parse(self):
        kb = kb_from_doc({"variables": ["p", "q"], "conditionals": ["(p | q)", "(q | T)"]})
        assert len(kb) == 2

    def test_rejects_non_strings(self):
        with pytest.raises(ValueError):
            kb_from_doc({"variables": ["p"], "conditionals": [1]})


def test_json_helpers():
    from condal import conditional_algebra
    alg = make_algebra(3)
    t = conditional_algebra(alg).basic(alg.atom(0), ~alg.atom(2))
    assert celement_to_json(t) == [0, 1, 4]
    assert rational_to_json(Fraction(2, 4)) == "1/2"
    assert json.loads(json.dumps(rational_to_json(Fraction(3)))) == "3"
