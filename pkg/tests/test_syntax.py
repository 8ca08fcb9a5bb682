import pytest
from hypothesis import given
from hypothesis import strategies as st

from scilogic.syntax import (
    BOT,
    TOP,
    And,
    Box,
    Equiv,
    Imp,
    Lang,
    LanguageError,
    Meta,
    Neg,
    Or,
    ParseError,
    Var,
    as_identity,
    as_necessity,
    boolean_skeleton,
    check_language,
    enumerate_formulas,
    height,
    iff,
    identity,
    in_language,
    is_tautology,
    necessity,
    parse,
    parse_scheme,
    rank,
    size,
    star,
    subformulas,
    substitute,
    substitute_many,
    to_text,
    truth_table,
    variables,
)

from strategies import modal_formulas, sci_formulas

x0, x1, x2 = Var(0), Var(1), Var(2)


@given(sci_formulas)
def test_print_parse_roundtrip_sci(f):
    assert parse(to_text(f), Lang.SCI) == f


@given(modal_formulas)
def test_print_parse_roundtrip_modal(f):
    assert parse(to_text(f), Lang.MODAL) == f


def test_printing_is_fully_parenthesized():
    assert to_text(parse("x0 -> x1 & ~x2")) == "(x0 -> (x1 & ~x2))"
    assert to_text(parse("[]x0", Lang.MODAL)) == "[] x0"


def test_precedence_and_associativity():
    assert parse("x0 & x1 | x2") == Or(And(x0, x1), x2)
    assert parse("x0 -> x1 -> x2") == Imp(x0, Imp(x1, x2))
    assert parse("x0 & x1 & x2") == And(And(x0, x1), x2)
    assert parse("~x0 == x1") == Equiv(Neg(x0), x1)
    assert parse("x0 -> x1 == x2") == Equiv(Imp(x0, x1), x2)


def test_defined_symbols_expand_at_parse_time():
    assert parse("x0 <-> x1") == iff(x0, x1)
    assert parse("[]x0") == Equiv(x0, TOP)
    assert parse("x0 == x1", Lang.MODAL) == And(Box(Imp(x0, x1)), Box(Imp(x1, x0)))
    assert parse("T & F") == And(TOP, BOT)


@pytest.mark.parametrize("text", ["x0 == x1 == x2", "x0 <-> x1 <-> x2"])
def test_non_associative_operators_need_parentheses(text):
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize("text", ["", "x0 &", "(x0", "x0 x1", "y0", "x0 $ x1", "?a"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse("x0 & $")
    assert "position 5" in str(info.value)


def test_schemes_allow_metavariables():
    assert parse_scheme("?a -> ?a", Lang.SCI) == Imp(Meta("a"), Meta("a"))
    assert to_text(parse_scheme("?a == ?b", Lang.SCI)) == "(?a == ?b)"


def test_language_checks():
    assert in_language(Equiv(x0, x1), Lang.SCI) and not in_language(Equiv(x0, x1), Lang.MODAL)
    assert in_language(Box(x0), Lang.MODAL) and not in_language(Box(x0), Lang.SCI)
    with pytest.raises(LanguageError):
        check_language(Box(x0), Lang.SCI)


@given(sci_formulas)
def test_identity_and_necessity_invert(f):
    for lang in Lang:
        g = f if lang is Lang.SCI else star(f)
        assert as_identity(identity(g, x1, lang), lang) == (g, x1)
        assert as_necessity(necessity(g, lang), lang) == g


def test_measures():
    f = parse("(x0 & x1) -> ~x0")
    assert height(x0) == 1
    assert height(f) == 3
    assert size(f) == 6
    assert variables(f) == {0, 1}
    assert subformulas(f) == [x0, x1, And(x0, x1), Neg(x0), f]


@given(sci_formulas, sci_formulas)
def test_substitution_replaces_every_occurrence(chi, phi):
    out = substitute(chi, 0, phi)
    if 0 not in variables(chi):
        assert out == chi
    else:
        assert variables(out) == (variables(chi) - {0}) | variables(phi)
    assert substitute_many(chi, {0: phi}) == out


def test_substitution_rejects_mixed_languages():
    with pytest.raises(LanguageError):
        substitute(Equiv(x0, x1), 0, Box(x1))


def test_rank():
    assert rank(x0) == rank(Equiv(Neg(x0), x1)) == 0
    assert rank(Neg(Neg(x0))) == 2
    assert rank(And(Neg(x0), x1)) == 2
    with pytest.raises(LanguageError):
        rank(Box(x0))


def test_boolean_skeleton_shares_identical_subtrees():
    f = parse("(x0 == x1) & ~(x0 == x1) | (x1 == x0)")
    skel, table = boolean_skeleton(f)
    assert variables(skel) == {2, 3}
    assert table == {2: Equiv(x0, x1), 3: Equiv(x1, x0)}


def test_truth_table_bit_order():
    # row r gives x0 bit 0 and x1 bit 1
    assert truth_table(And(x0, Neg(x1))).tolist() == [False, True, False, False]


@pytest.mark.parametrize(
    "text, taut",
    [("x0 | ~x0", True), ("(x0 -> x1) | (x1 -> x0)", True), ("x0 -> x1", False), ("T", True), ("F", False)],
)
def test_is_tautology(text, taut):
    assert is_tautology(parse(text)) is taut


@given(sci_formulas)
def test_star_removes_identities(f):
    g = star(f)
    assert in_language(g, Lang.SCI) and not any(isinstance(h, Equiv) for h in subformulas(g))


@pytest.mark.parametrize("depth, count", [(1, 4), (2, 72), (3, 20812)])
def test_enumeration_counts(depth, count):
    fs = enumerate_formulas(depth)
    assert len(fs) == count == len(set(fs))
    assert max(height(f) for f in fs) == depth


def test_modal_enumeration_uses_box():
    fs = enumerate_formulas(2, lang=Lang.MODAL)
    assert Box(x0) in fs and not any(isinstance(f, Equiv) for f in fs)


@given(st.integers(0, 3))
def test_formulas_are_hashable_values(i):
    assert {Var(i), Var(i)} == {Var(i)}
    assert hash(Neg(Var(i))) == hash(Neg(Var(i)))
