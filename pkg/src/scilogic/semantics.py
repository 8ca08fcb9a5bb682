"""Evaluation, satisfaction and validity over finite structures, plus
countermodel search.

Evaluation is vectorized: a formula with ``k`` variables is evaluated over
all ``n**k`` assignments at once.  Assignments are ordered
lexicographically with the smallest variable index most significant, so
"first countervaluation" is well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .algebra import (
    MODAL_CLASSES,
    ClassId,
    FiniteStructure,
    _expansion_stream,
    _fast_predicate,
    sci_model_stream,
    with_ultrafilters,
)
from .syntax import (
    TOP,
    And,
    Bot,
    Box,
    Equiv,
    Formula,
    Imp,
    Lang,
    LanguageError,
    Neg,
    Or,
    Top,
    Var,
    check_language,
    parse,
    to_text,
    variables,
)

Assignment = Mapping[int, int]


class MissingOperation(ValueError):
    pass


class UnmappedVariable(KeyError):
    pass


def _eval(s: FiniteStructure, f: Formula, env: Mapping[int, np.ndarray], rows: int) -> np.ndarray:
    memo: dict[Formula, np.ndarray] = {}

    def ev(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            if g.index not in env:
                raise UnmappedVariable(f"x{g.index} is not assigned")
            out = env[g.index]
        elif isinstance(g, Top):
            out = np.full(rows, s.top)
        elif isinstance(g, Bot):
            out = np.full(rows, s.bot)
        elif isinstance(g, Neg):
            out = s.op_not[ev(g.sub)]
        elif isinstance(g, Box):
            if s.op_box is None:
                raise MissingOperation("structure has no box operation")
            out = s.op_box[ev(g.sub)]
        elif isinstance(g, And):
            out = s.op_and[ev(g.left), ev(g.right)]
        elif isinstance(g, Or):
            out = s.op_or[ev(g.left), ev(g.right)]
        elif isinstance(g, Imp):
            out = s.op_imp[ev(g.left), ev(g.right)]
        elif isinstance(g, Equiv):
            if s.op_equiv is None:
                raise MissingOperation("structure has no identity operation")
            out = s.op_equiv[ev(g.left), ev(g.right)]
        else:
            raise LanguageError(f"cannot evaluate {to_text(g)}")
        memo[g] = out
        return out

    return ev(f)


def evaluate(s: FiniteStructure, gamma: Assignment, f: Formula) -> int:
    env = {int(k): np.array([int(v)]) for k, v in gamma.items()}
    for v in env.values():
        if not 0 <= v[0] < s.n:
            raise ValueError(f"assignment value {int(v[0])} is not an element")
    return int(_eval(s, f, env, 1)[0])


def satisfies(s: FiniteStructure, gamma: Assignment, f: Formula) -> bool:
    return evaluate(s, gamma, f) in s.true_set


def assignment_grid(n: int, var_list: list[int]) -> dict[int, np.ndarray]:
    """Columns of the full assignment table, lexicographic order."""
    k = len(var_list)
    if k == 0:
        return {}
    cols = np.unravel_index(np.arange(n**k), (n,) * k)
    return {v: cols[j] for j, v in enumerate(var_list)}


def evaluate_all(s: FiniteStructure, f: Formula, var_list: list[int] | None = None) -> np.ndarray:
    """Values of ``f`` under every assignment to ``var_list``."""
    var_list = sorted(variables(f)) if var_list is None else list(var_list)
    rows = s.n ** len(var_list)
    return _eval(s, f, assignment_grid(s.n, var_list), rows)


def row_assignment(n: int, var_list: list[int], row: int) -> dict[int, int]:
    if not var_list:
        return {}
    idx = np.unravel_index(row, (n,) * len(var_list))
    return {v: int(i) for v, i in zip(var_list, idx)}


@dataclass(frozen=True)
class Validity:
    valid: bool
    countervaluation: dict[int, int] | None = None

    def __bool__(self) -> bool:
        return self.valid


def valid_in_model(s: FiniteStructure, f: Formula) -> Validity:
    """Exhaustive over the variables of ``f``; reports the first failure."""
    var_list = sorted(variables(f))
    holds = s.true_mask()[evaluate_all(s, f, var_list)]
    if holds.all():
        return Validity(True)
    return Validity(False, row_assignment(s.n, var_list, int(np.argmin(holds))))


def valid_all(s: FiniteStructure, fs: Iterable[Formula]) -> bool:
    return all(valid_in_model(s, f) for f in fs)


def preserves_mp(s: FiniteStructure, phi: Formula, psi: Formula) -> bool:
    """``⊨φ`` and ``⊨φ→ψ`` imply ``⊨ψ`` in ``s``."""
    if valid_in_model(s, phi) and valid_in_model(s, Imp(phi, psi)):
        return bool(valid_in_model(s, psi))
    return True


# --------------------------------------------------------------------------
# countermodel search
# --------------------------------------------------------------------------


@dataclass
class SearchResult:
    structure: FiniteStructure | None
    assignment: dict[int, int] | None
    max_size: int
    examined: int = 0
    exhausted: bool = False

    @property
    def found(self) -> bool:
        return self.structure is not None

    def describe(self) -> str:
        if self.found:
            return f"countermodel of size {self.structure.n}"
        if self.exhausted:
            return f"search budget exhausted before reaching size {self.max_size}"
        return f"no countermodel up to size {self.max_size}"


@dataclass
class SearchOptions:
    budget: int | None = None
    include_prealgebras: bool = False


def class_structures(cls: ClassId, max_size: int, include_prealgebras: bool = False) -> Iterator[FiniteStructure | None]:
    """All candidates of a class up to ``max_size`` in search order.

    Sizes ascend.  Classes whose conditions ignore TRUE are expanded over
    every ultrafilter, since satisfaction needs one.
    """
    pred = _fast_predicate(cls)
    for size in range(2, max_size + 1):
        if cls in MODAL_CLASSES or cls is ClassId.BOOLEAN_PREALGEBRA:
            if size & (size - 1):
                continue
            stream = _expansion_stream(size, cls)
        else:
            stream = sci_model_stream(size, cls, include_prealgebras)
        for s in stream:
            if pred(s):
                yield from with_ultrafilters(s)
            else:
                yield None  # examined but rejected; keeps the budget honest


def _search(
    cls: ClassId,
    max_size: int,
    options: SearchOptions,
    test,
) -> SearchResult:
    result = SearchResult(None, None, max_size)
    for s in class_structures(cls, max_size, options.include_prealgebras):
        if options.budget is not None and result.examined >= options.budget:
            result.exhausted = True
            return result
        result.examined += 1
        if s is None:
            continue
        hit = test(s)
        if hit is not None:
            result.structure, result.assignment = s, hit
            return result
    return result


def _check_lang(f: Formula, cls: ClassId) -> None:
    if cls.lang is None:
        raise LanguageError(f"class {cls.value} has no formula language")
    check_language(f, cls.lang)


def find_countermodel(f: Formula, cls: ClassId, max_size: int, options: SearchOptions | None = None) -> SearchResult:
    """First structure (in search order) with an assignment falsifying ``f``."""
    _check_lang(f, cls)
    options = options or SearchOptions()

    def test(s):
        v = valid_in_model(s, f)
        return None if v else v.countervaluation

    return _search(cls, max_size, options, test)


def refute_consequence(
    premises: Iterable[Formula],
    phi: Formula,
    cls: ClassId,
    max_size: int,
    options: SearchOptions | None = None,
) -> SearchResult:
    """Find a structure and assignment satisfying every premise but not ``phi``."""
    premises = list(premises)
    for g in premises + [phi]:
        _check_lang(g, cls)
    options = options or SearchOptions()
    var_list = sorted(set(variables(phi)).union(*(variables(g) for g in premises)))

    def test(s):
        mask = s.true_mask()
        ok = ~mask[evaluate_all(s, phi, var_list)]
        for g in premises:
            ok &= mask[evaluate_all(s, g, var_list)]
        if not ok.any():
            return None
        return row_assignment(s.n, var_list, int(np.argmax(ok)))

    return _search(cls, max_size, options, test)


# --------------------------------------------------------------------------
# discernibility
# --------------------------------------------------------------------------


def canonical_assignment(s: FiniteStructure, num_vars: int) -> dict[int, int]:
    """``x_i`` denotes the ``i``-th element, cyclically."""
    return {i: i % s.n for i in range(num_vars)}


def denoted_elements(s: FiniteStructure, depth: int, num_vars: int = 2) -> set[int]:
    """Elements denoted by formulas of height ``<= depth``.

    Computed by closing the atom values under the operations level by
    level, which is equivalent to evaluating every such formula.
    """
    gamma = canonical_assignment(s, num_vars)
    level = set(gamma.values()) | {s.bot, s.top}
    unary = [s.op_not] + ([s.op_box] if s.op_box is not None else [])
    binary = [s.op_and, s.op_or, s.op_imp] + ([s.op_equiv] if s.op_equiv is not None else [])
    for _ in range(depth - 1):
        cur = sorted(level)
        new = set(level)
        for op in unary:
            new.update(int(op[a]) for a in cur)
        for op in binary:
            new.update(int(x) for x in np.unique(op[np.ix_(cur, cur)]))
        if new == level:
            break
        level = new
    return level


def discernibility_count(s: FiniteStructure, depth: int, num_vars: int = 2) -> int:
    return len(denoted_elements(s, depth, num_vars))


# --------------------------------------------------------------------------
# tautology-form generator
# --------------------------------------------------------------------------

# Twelve classical schemes over ?p, ?q, ?r.  Finite-model evaluation only
# sees the values of the instantiating formulas, so instantiating the
# metavariables with distinct variables covers every substitution instance.
TAUTOLOGY_FORMS: tuple[str, ...] = (
    "(?p & ?q) <-> (?q & ?p)",
    "(?p | ?q) <-> (?q | ?p)",
    "((?p & ?q) & ?r) <-> (?p & (?q & ?r))",
    "((?p | ?q) | ?r) <-> (?p | (?q | ?r))",
    "(?p & (?p | ?q)) <-> ?p",
    "(?p | (?p & ?q)) <-> ?p",
    "(?p & (?q | ?r)) <-> ((?p & ?q) | (?p & ?r))",
    "(?p | (?q & ?r)) <-> ((?p | ?q) & (?p | ?r))",
    "(?p & ~?p) <-> F",
    "(?p | ~?p) <-> T",
    "(?p -> ?q) <-> (~?p | ?q)",
    "((?p & T) <-> ?p) & ((?p | F) <-> ?p)",
)


def _instantiate(text: str, lang: Lang) -> Formula:
    return parse(text.replace("?p", "x0").replace("?q", "x1").replace("?r", "x2"), lang)


def tautology_forms(lang: Lang = Lang.SCI) -> list[Formula]:
    return [_instantiate(t, lang) for t in TAUTOLOGY_FORMS]


def boxed_tautology_forms() -> list[Formula]:
    """``□χ`` (that is ``χ ≡ ⊤``) for each generator tautology."""
    return [Equiv(f, TOP) for f in tautology_forms()]


def scheme_one_instances() -> list[Formula]:
    """``(φ ≡ ψ) ↔ □(φ ↔ ψ)`` with variable arguments."""
    return [parse("(x0 == x1) <-> [](x0 <-> x1)")]


def validates_boolean_generators(s: FiniteStructure) -> bool:
    return valid_all(s, boxed_tautology_forms() + scheme_one_instances())
