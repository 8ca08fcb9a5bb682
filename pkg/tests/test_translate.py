import pytest
from hypothesis import given

from scilogic.syntax import TOP, Box, Equiv, Lang, LanguageError, Var, in_language, parse, subformulas, to_text
from scilogic.translate import box, box_iff, ident, roundtrip_box_id, roundtrip_id_box, star

from strategies import modal_formulas, sci_formulas


def test_box_of_identity_is_strict_equivalence():
    assert to_text(box(parse("x0 == x1"))) == "([] (x0 -> x1) & [] (x1 -> x0))"


def test_ident_of_box():
    assert to_text(ident(parse("[](x0)", Lang.MODAL))) == "(x0 == T)"
    assert to_text(ident(parse("[][]x0", Lang.MODAL))) == "((x0 == T) == T)"


def test_box_iff_uses_one_box():
    assert box_iff(parse("x0 == x1")) == Box(parse("x0 <-> x1"))


@given(sci_formulas)
def test_box_lands_in_modal_language(f):
    assert in_language(box(f), Lang.MODAL)
    assert in_language(box_iff(f), Lang.MODAL)


@given(modal_formulas)
def test_ident_lands_in_sci_language(f):
    assert in_language(ident(f), Lang.SCI)


@given(sci_formulas)
def test_translations_fix_boolean_formulas(f):
    g = star(f)
    assert box(g) == g
    assert box_iff(g) == g


@given(modal_formulas)
def test_ident_turns_each_box_into_one_identity(f):
    g = ident(f)
    boxes = sum(isinstance(h, Box) for h in subformulas(f))
    idents = sum(isinstance(h, Equiv) and h.right == TOP for h in subformulas(g))
    assert boxes == idents


def test_roundtrips_compose():
    f = parse("[]x0", Lang.MODAL)
    assert roundtrip_box_id(f) == box(ident(f))
    g = parse("x0 == x1")
    assert roundtrip_id_box(g) == ident(box(g))


def test_wrong_language_is_rejected():
    with pytest.raises(LanguageError):
        box(Box(Var(0)))
    with pytest.raises(LanguageError):
        ident(Equiv(Var(0), Var(1)))
