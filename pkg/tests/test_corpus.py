import pytest

from scilogic.algebra import ClassId, classify, is_boolean_prealgebra
from scilogic.corpus import prealgebra_corpus, sci_corpus, system_models
from scilogic.proof import SystemId
from scilogic.randgen import random_formulas
from scilogic.syntax import Lang, height, in_language, variables

# frozen corpus sizes under the default configuration
EXPECTED_SIZES = {
    SystemId.SCI: 32,
    SystemId.SCI_EXT: 1,
    SystemId.SCI_PLUS: 26,
    SystemId.SCI_3: 25,
    SystemId.S1: 309,
    SystemId.S1SP: 309,
    SystemId.S1SP_EQ: 309,
    SystemId.S3: 49,
    SystemId.S3_EQ: 49,
    SystemId.S4: 26,
    SystemId.S4_EQ: 26,
    SystemId.S5: 6,
    SystemId.S5_EQ: 6,
}


@pytest.mark.parametrize("sid", list(SystemId))
def test_system_model_counts(sid):
    assert len(system_models(sid)) == EXPECTED_SIZES[sid]


def test_corpus_members_are_in_class():
    for s in sci_corpus(ClassId.SCI3_MODEL):
        assert ClassId.SCI3_MODEL in classify(s)
    for s in system_models(SystemId.S3):
        assert ClassId.S3_ALGEBRA in classify(s) and s.true_set is not None


def test_corpus_is_deduplicated():
    keys = [s.key() for s in sci_corpus()]
    assert len(keys) == len(set(keys))


def test_prealgebra_corpus():
    corpus = prealgebra_corpus()
    assert len(corpus) == 21
    assert all(is_boolean_prealgebra(s) for s in corpus)


@pytest.mark.parametrize("lang", list(Lang))
def test_random_formulas_are_seeded_and_bounded(lang):
    a = random_formulas(7, 200, 5, lang, 3)
    assert a == random_formulas(7, 200, 5, lang, 3)
    assert a != random_formulas(8, 200, 5, lang, 3)
    assert all(height(f) <= 5 and in_language(f, lang) and variables(f) <= {0, 1, 2} for f in a)
