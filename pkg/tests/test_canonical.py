import pytest
from hypothesis import given

from scilogic.canonical import (
    IntensionalModel,
    extensional_model,
    intensional_denotation,
    intensional_satisfies,
    intensional_true,
    sci_ext_theoremhood,
)
from scilogic.proof import SystemId, fill, system
from scilogic.semantics import valid_in_model
from scilogic.syntax import Box, Equiv, Imp, LanguageError, Neg, Var, parse

from strategies import sci_formulas


def test_extensional_model_shape():
    s = extensional_model()
    assert s.elements == ("0", "1") and s.true_set == {1}
    assert s.op_equiv.tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize(
    "text, theorem",
    [
        ("(x0 <-> x1) -> (x0 == x1)", True),
        ("x0 == ~~x0", True),
        ("(x0 == x1) -> (x1 == x0)", True),
        ("x0 == x1", False),
        ("x0 -> (x0 == T)", True),
    ],
)
def test_extensional_theoremhood(text, theorem):
    assert sci_ext_theoremhood(parse(text)) is theorem


@given(sci_formulas)
def test_extensional_theoremhood_matches_model(f):
    assert sci_ext_theoremhood(f) == bool(valid_in_model(extensional_model(), f))


def test_intensional_identity_is_syntactic():
    assert intensional_satisfies(parse("x0 == x0"))
    assert not intensional_satisfies(parse("~~x0 == x0"))
    assert not intensional_satisfies(parse("(x0 & x1) == (x1 & x0)"))


def test_intensional_fregean_axiom_fails():
    assert not intensional_satisfies(parse("(x0 <-> ~~x0) -> (x0 == ~~x0)"))


def test_intensional_variables_alternate():
    assert intensional_true(Var(0)) and not intensional_true(Var(1))


def test_intensional_denotation_is_the_formula():
    f = parse("x0 & ~x1")
    assert intensional_denotation(f) is f
    assert IntensionalModel.identity(f, f) == Equiv(f, f)


def test_intensional_rejects_modal_formulas():
    with pytest.raises(LanguageError):
        intensional_true(Box(Var(0)))


@given(sci_formulas)
def test_intensional_truth_is_an_ultrafilter(f):
    assert intensional_true(f) != intensional_true(Neg(f))


@given(sci_formulas, sci_formulas)
def test_intensional_identity_iff_equal(a, b):
    assert intensional_satisfies(Equiv(a, b)) == (a == b)


@given(sci_formulas, sci_formulas)
def test_intensional_below_is_implication(a, b):
    assert IntensionalModel.below(a, b) == intensional_true(Imp(a, b))


@given(sci_formulas, sci_formulas, sci_formulas, sci_formulas)
def test_intensional_model_validates_identity_axioms(a, b, c, d):
    binding = {"a": a, "b": b, "c": c, "d": d}
    for scheme in system(SystemId.SCI).axioms[1:]:
        assert intensional_satisfies(fill(scheme.pattern, binding)), scheme.name
