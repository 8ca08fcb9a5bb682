"""The two distinguished SCI-models: the two-element extensional model and
the infinite intensional model whose carrier is Fm≡ itself."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .algebra import FiniteStructure, powerset_algebra
from .semantics import valid_in_model
from .syntax import (
    And,
    Bot,
    Equiv,
    Formula,
    Imp,
    Lang,
    Neg,
    Or,
    Top,
    Var,
    check_language,
    is_tautology,
    star,
)


def extensional_model() -> FiniteStructure:
    """Elements 0 and 1, ``f≡(x, y) = 1`` iff ``x = y``, TRUE = {1}."""
    base = powerset_algebra(1)
    return base.with_(elements=("0", "1"), op_equiv=np.eye(2, dtype=int), true_set=frozenset({1}))


def sci_ext_theoremhood(f: Formula) -> bool:
    """Theoremhood in SCI plus the Fregean axiom: ``star(f)`` is a tautology."""
    check_language(f, Lang.SCI)
    verdict = is_tautology(star(f))
    assert verdict == bool(valid_in_model(extensional_model(), f)), f
    return verdict


class IntensionalModel:
    """Carrier Fm≡, operations are the formula constructors, γ is the
    identity on variables.  Not a FiniteStructure: nothing here can be
    tabulated, only decided formula by formula."""

    @staticmethod
    def denotation(f: Formula) -> Formula:
        check_language(f, Lang.SCI)
        return f

    @staticmethod
    def true(f: Formula) -> bool:
        check_language(f, Lang.SCI)
        return _true(f)

    satisfies = true

    @staticmethod
    def identity(a: Formula, b: Formula) -> Formula:
        return Equiv(a, b)

    @staticmethod
    def below(a: Formula, b: Formula) -> bool:
        """``a ⪯ b`` iff ``a → b`` is true."""
        return _true(Imp(a, b))


@lru_cache(maxsize=None)
def _true(f: Formula) -> bool:
    # rank 0
    if isinstance(f, Bot):
        return False
    if isinstance(f, Top):
        return True
    if isinstance(f, Var):
        return f.index % 2 == 0
    if isinstance(f, Equiv):
        return f.left == f.right
    # higher ranks
    if isinstance(f, Neg):
        return not _true(f.sub)
    if isinstance(f, And):
        return _true(f.left) and _true(f.right)
    if isinstance(f, Or):
        return _true(f.left) or _true(f.right)
    if isinstance(f, Imp):
        return not _true(f.left) or _true(f.right)
    raise TypeError(f"not an Fm≡ formula: {f!r}")


def intensional_true(f: Formula) -> bool:
    return IntensionalModel.true(f)


def intensional_satisfies(f: Formula) -> bool:
    return IntensionalModel.satisfies(f)


def intensional_denotation(f: Formula) -> Formula:
    return IntensionalModel.denotation(f)
