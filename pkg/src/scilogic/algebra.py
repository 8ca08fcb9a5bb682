"""Finite Boolean (pre)algebras and their expansions by f≡ or f□.

Elements are the integers ``0..n-1``; every operation is a numpy table.
Powerset algebras use bitmask encoding: element ``m`` is the set of atoms
whose bits are set in ``m``.

Every class predicate returns a :class:`Verdict`, which is truthy on
success and otherwise names the failed clause with a concrete witness.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

import numpy as np

from .syntax import Lang


# --------------------------------------------------------------------------
# structures
# --------------------------------------------------------------------------


def _frozen(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    elements: tuple[str, ...]
    op_and: np.ndarray
    op_or: np.ndarray
    op_not: np.ndarray
    op_imp: np.ndarray
    bot: int
    top: int
    op_equiv: np.ndarray | None = None
    op_box: np.ndarray | None = None
    true_set: frozenset[int] | None = None
    preorder: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.elements)
        for name in ("op_and", "op_or", "op_imp", "op_equiv"):
            table = getattr(self, name)
            if table is not None:
                table = _frozen(table, np.int64)
                if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
                    raise ValueError(f"{name} must be a total {n}x{n} table over the elements")
                object.__setattr__(self, name, table)
        for name in ("op_not", "op_box"):
            table = getattr(self, name)
            if table is not None:
                table = _frozen(table, np.int64)
                if table.shape != (n,) or table.min() < 0 or table.max() >= n:
                    raise ValueError(f"{name} must be a total table of length {n}")
                object.__setattr__(self, name, table)
        if self.preorder is not None:
            pre = _frozen(self.preorder, bool)
            if pre.shape != (n, n):
                raise ValueError(f"preorder must be {n}x{n}")
            object.__setattr__(self, "preorder", pre)
        if self.true_set is not None:
            ts = frozenset(int(x) for x in self.true_set)
            if not ts <= set(range(n)):
                raise ValueError("true_set references unknown elements")
            object.__setattr__(self, "true_set", ts)
        if not (0 <= self.bot < n and 0 <= self.top < n):
            raise ValueError("bot/top out of range")

    @property
    def n(self) -> int:
        return len(self.elements)

    def with_(self, **changes) -> "FiniteStructure":
        return replace(self, **changes)

    def key(self) -> tuple:
        """Hashable identity of all tables, for dedup and equality tests."""

        def b(x):
            return None if x is None else x.tobytes()

        return (
            self.n,
            b(self.op_and),
            b(self.op_or),
            b(self.op_not),
            b(self.op_imp),
            self.bot,
            self.top,
            b(self.op_equiv),
            b(self.op_box),
            None if self.true_set is None else tuple(sorted(self.true_set)),
            b(self.preorder),
        )

    def true_mask(self) -> np.ndarray:
        if self.true_set is None:
            raise ValueError("structure has no designated TRUE set")
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.true_set)] = True
        return mask

    def name(self, a: int) -> str:
        return self.elements[a]


class Verdict:
    """Truthy result of a class predicate; on failure names a witness."""

    __slots__ = ("ok", "clause", "witness")

    def __init__(self, ok: bool, clause: str | None = None, witness: tuple | None = None):
        self.ok = ok
        self.clause = clause
        self.witness = witness

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        if self.ok:
            return "Verdict(ok)"
        return f"Verdict(failed {self.clause!r}, witness={self.witness})"


OK = Verdict(True)


def _first(mask: np.ndarray, clause: str) -> Verdict:
    """OK if ``mask`` is all True, else a Verdict citing the first False cell."""
    if mask.all():
        return OK
    idx = tuple(int(i) for i in np.argwhere(~mask)[0])
    return Verdict(False, clause, idx)


def _grid(n: int, k: int):
    return np.meshgrid(*([np.arange(n)] * k), indexing="ij")


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


def set_name(mask: int, k: int) -> str:
    return "{" + ",".join(str(i) for i in range(k) if mask >> i & 1) + "}"


def powerset_algebra(k: int, *, preorder: bool = True) -> FiniteStructure:
    """The Boolean algebra of subsets of ``k`` atoms, bitmask-encoded."""
    if k < 1:
        raise ValueError("need at least one atom: a one-element algebra has no ultrafilter")
    n = 1 << k
    full = n - 1
    a, b = _grid(n, 2)
    s = FiniteStructure(
        elements=tuple(set_name(m, k) for m in range(n)),
        op_and=a & b,
        op_or=a | b,
        op_not=full ^ np.arange(n),
        op_imp=(full ^ a) | b,
        bot=0,
        top=full,
    )
    return s.with_(preorder=lattice_order(s)) if preorder else s


def two_element_algebra() -> FiniteStructure:
    return powerset_algebra(1)


def atoms_of(s: FiniteStructure) -> list[int]:
    L = lattice_order(s)
    return [a for a in range(s.n) if a != s.bot and all(b in (s.bot, a) for b in range(s.n) if L[b, a])]


# --------------------------------------------------------------------------
# Boolean algebras
# --------------------------------------------------------------------------


def boolean_algebra_violation(s: FiniteStructure) -> Verdict:
    A, O, N, I = s.op_and, s.op_or, s.op_not, s.op_imp
    a, b = _grid(s.n, 2)
    x, y, z = _grid(s.n, 3)
    checks = [
        ("commutativity of and", A[a, b] == A[b, a]),
        ("commutativity of or", O[a, b] == O[b, a]),
        ("associativity of and", A[A[x, y], z] == A[x, A[y, z]]),
        ("associativity of or", O[O[x, y], z] == O[x, O[y, z]]),
        ("absorption and/or", A[a, O[a, b]] == a),
        ("absorption or/and", O[a, A[a, b]] == a),
        ("distributivity of and", A[x, O[y, z]] == O[A[x, y], A[x, z]]),
        ("distributivity of or", O[x, A[y, z]] == A[O[x, y], O[x, z]]),
        ("complement and", A[np.arange(s.n), N] == s.bot),
        ("complement or", O[np.arange(s.n), N] == s.top),
        ("top is neutral for and", A[np.arange(s.n), s.top] == np.arange(s.n)),
        ("bot is neutral for or", O[np.arange(s.n), s.bot] == np.arange(s.n)),
        ("implication is not-or", I[a, b] == O[N[a], b]),
    ]
    for clause, mask in checks:
        v = _first(mask, clause)
        if not v:
            return v
    return OK


def is_boolean_algebra(s: FiniteStructure) -> Verdict:
    return boolean_algebra_violation(s)


def lattice_order(s: FiniteStructure) -> np.ndarray:
    """``a <= b`` iff ``a ∧ b = a``.  Meaningful for Boolean algebras."""
    a, b = _grid(s.n, 2)
    return s.op_and[a, b] == a


def require_boolean_algebra(s: FiniteStructure) -> np.ndarray:
    v = is_boolean_algebra(s)
    if not v:
        raise ValueError(f"not a Boolean algebra: {v}")
    return lattice_order(s)


# --------------------------------------------------------------------------
# prealgebras
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)


class CongruenceError(ValueError):
    def __init__(self, op: str, witness: tuple):
        super().__init__(f"≈ is not a congruence for {op}: witness {witness}")
        self.op = op
        self.witness = witness


def _equivalence(pre: np.ndarray) -> np.ndarray:
    return pre & pre.T


def preorder_violation(s: FiniteStructure) -> Verdict:
    P = s.preorder
    if P is None:
        return Verdict(False, "preorder missing", None)
    v = _first(np.diag(P), "reflexivity")
    if not v:
        return v
    x, y, z = _grid(s.n, 3)
    return _first(~(P[x, y] & P[y, z]) | P[x, z], "transitivity")


def _classes_of(E: np.ndarray) -> Congruence:
    n = E.shape[0]
    class_of = [-1] * n
    classes = []
    for a in range(n):
        if class_of[a] < 0:
            members = tuple(int(b) for b in np.flatnonzero(E[a]))
            for b in members:
                class_of[b] = len(classes)
            classes.append(members)
    return Congruence(tuple(classes), tuple(class_of))


def congruence_violation(s: FiniteStructure, E: np.ndarray) -> Verdict:
    """Does the equivalence ``E`` respect the Boolean operations?"""
    n = s.n
    a, a2 = _grid(n, 2)
    N = s.op_not
    v = _first(~E[a, a2] | E[N[a], N[a2]], "not")
    if not v:
        return v
    x, x2, y, y2 = _grid(n, 4)
    premise = E[x, x2] & E[y, y2]
    for name, op in (("and", s.op_and), ("or", s.op_or), ("imp", s.op_imp)):
        v = _first(~premise | E[op[x, y], op[x2, y2]], name)
        if not v:
            return v
    return OK


def congruence_from_preorder(s: FiniteStructure) -> Congruence:
    v = preorder_violation(s)
    if not v:
        raise ValueError(f"not a preorder: {v}")
    E = _equivalence(s.preorder)
    bad = congruence_violation(s, E)
    if not bad:
        raise CongruenceError(bad.clause, bad.witness)
    return _classes_of(E)


def quotient(s: FiniteStructure, c: Congruence) -> FiniteStructure:
    reps = [cls[0] for cls in c.classes]
    cof = np.array(c.class_of)
    m = len(reps)
    r = np.array(reps)
    ra, rb = np.meshgrid(r, r, indexing="ij")
    q = FiniteStructure(
        elements=tuple("[" + ",".join(s.elements[x] for x in cls) + "]" for cls in c.classes),
        op_and=cof[s.op_and[ra, rb]],
        op_or=cof[s.op_or[ra, rb]],
        op_not=cof[s.op_not[r]],
        op_imp=cof[s.op_imp[ra, rb]],
        bot=int(cof[s.bot]),
        top=int(cof[s.top]),
    )
    # well-definedness: every member of a class gives the same result
    for op_name in ("op_and", "op_or", "op_imp"):
        op = getattr(s, op_name)
        assert all(
            cof[op[x, y]] == getattr(q, op_name)[cof[x], cof[y]] for x in range(s.n) for y in range(s.n)
        ), op_name
    assert all(cof[s.op_not[x]] == q.op_not[cof[x]] for x in range(s.n))
    assert len(set(reps)) == m
    return q


def prealgebra_check(s: FiniteStructure) -> Verdict:
    """Boolean prealgebra test; a failure names clause (a)-(d)."""
    v = preorder_violation(s)
    if not v:
        return Verdict(False, "(a) preorder: " + v.clause, v.witness)
    E = _equivalence(s.preorder)
    v = congruence_violation(s, E)
    if not v:
        return Verdict(False, "(b) congruence: " + v.clause, v.witness)
    q = quotient(s, _classes_of(E))
    v = is_boolean_algebra(q)
    if not v:
        return Verdict(False, "(c) quotient Boolean: " + v.clause, v.witness)
    a, b = _grid(s.n, 2)
    v = _first(s.preorder[a, b] == E[s.op_and[a, b], a], "(d) meet condition")
    return v


def is_boolean_prealgebra(s: FiniteStructure) -> Verdict:
    return prealgebra_check(s)


def associated_algebra(s: FiniteStructure) -> tuple[Congruence, FiniteStructure]:
    c = congruence_from_preorder(s)
    return c, quotient(s, c)


# --------------------------------------------------------------------------
# filters
# --------------------------------------------------------------------------


def _as_set(F: Iterable[int]) -> frozenset[int]:
    return frozenset(int(x) for x in F)


def filter_by_quotient(s: FiniteStructure, F: Iterable[int]) -> bool:
    """Filter test through the associated Boolean algebra.

    ``F`` must be ≈-closed and its image a (nonempty) filter of the quotient.
    """
    F = _as_set(F)
    c, q = associated_algebra(s)
    for cls in c.classes:
        inside = {x in F for x in cls}
        if len(inside) > 1:
            return False
    image = {c.class_of[x] for x in F}
    if not image:
        return False
    L = lattice_order(q)
    for x in image:
        for y in range(q.n):
            if L[x, y] and y not in image:
                return False
        for y in image:
            if int(q.op_and[x, y]) not in image:
                return False
    return True


def filter_by_closure(s: FiniteStructure, F: Iterable[int]) -> bool:
    """Direct characterization: nonempty, meet-closed, ⪯-upward closed."""
    F = _as_set(F)
    if not F:
        return False
    P = s.preorder
    for a in F:
        for b in F:
            if int(s.op_and[a, b]) not in F:
                return False
        for b in range(s.n):
            if P[a, b] and b not in F:
                return False
    return True


def is_filter(s: FiniteStructure, F: Iterable[int]) -> bool:
    F = _as_set(F)
    direct = filter_by_closure(s, F)
    assert direct == filter_by_quotient(s, F), sorted(F)
    return direct


def is_proper_filter(s: FiniteStructure, F: Iterable[int]) -> bool:
    F = _as_set(F)
    if not is_filter(s, F):
        return False
    proper = s.bot not in F
    assert proper == (F != frozenset(range(s.n)))
    return proper


def is_ultrafilter(s: FiniteStructure, F: Iterable[int]) -> bool:
    """Proper filter deciding every element: ``a ∈ F`` or ``¬a ∈ F``."""
    F = _as_set(F)
    if not is_proper_filter(s, F):
        return False
    return all(a in F or int(s.op_not[a]) in F for a in range(s.n))


def is_maximal_proper_filter(s: FiniteStructure, F: Iterable[int]) -> bool:
    """Brute-force maximality over all subsets; for cross-checking only."""
    F = _as_set(F)
    if not is_proper_filter(s, F):
        return False
    rest = [x for x in range(s.n) if x not in F]
    for r in range(1, len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            G = F | set(extra)
            if filter_by_closure(s, G) and s.bot not in G:
                return False
    return True


def subsets(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def enumerate_ultrafilters(s: FiniteStructure) -> list[frozenset[int]]:
    """All ultrafilters, sorted by their sorted element tuples."""
    found = []
    if s.preorder is not None and is_boolean_algebra(s) and np.array_equal(s.preorder, lattice_order(s)):
        # Boolean algebra: ultrafilters are the principal filters of atoms
        L = s.preorder
        for at in atoms_of(s):
            found.append(frozenset(int(b) for b in np.flatnonzero(L[at])))
    else:
        found = [F for F in subsets(s.n) if is_ultrafilter(s, F)]
    return sorted(found, key=lambda F: tuple(sorted(F)))


# --------------------------------------------------------------------------
# Heyting algebras and filter-derived preorders
# --------------------------------------------------------------------------


def chain_lattice(n: int) -> FiniteStructure:
    """The ``n``-element chain ``0 < 1 < ... < n-1`` as a lattice.

    ``op_not``/``op_imp`` are placeholders; :func:`heyting_to_prealgebra`
    recomputes them.
    """
    a, b = _grid(n, 2)
    return FiniteStructure(
        elements=tuple(str(i) for i in range(n)),
        op_and=np.minimum(a, b),
        op_or=np.maximum(a, b),
        op_not=np.zeros(n, dtype=int),
        op_imp=np.zeros((n, n), dtype=int),
        bot=0,
        top=n - 1,
    )


def relative_pseudocomplement(h: FiniteStructure) -> np.ndarray:
    """``a → b = max{c : a ∧ c <= b}`` computed from the meet table."""
    L = lattice_order(h)
    n = h.n
    out = np.zeros((n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            cands = [c for c in range(n) if L[h.op_and[a, c], b]]
            tops = [c for c in cands if all(L[d, c] for d in cands)]
            if len(tops) != 1:
                raise ValueError(f"no relative pseudo-complement for ({a}, {b}); not a Heyting algebra")
            out[a, b] = tops[0]
    return out


def lattice_filter_check(h: FiniteStructure, U: frozenset[int]) -> bool:
    """Is ``U`` a maximal proper lattice filter of ``h``?"""
    L = lattice_order(h)

    def is_lfilter(G):
        return bool(G) and all(
            int(h.op_and[a, b]) in G for a in G for b in G
        ) and all(b in G for a in G for b in range(h.n) if L[a, b])

    if not is_lfilter(U) or h.bot in U:
        return False
    for G in subsets(h.n):
        if U < G and h.bot not in G and is_lfilter(G):
            return False
    return True


def heyting_to_prealgebra(h: FiniteStructure, U: Iterable[int]) -> FiniteStructure:
    """Preorder ``a ⪯ b  iff  a → b ∈ U`` on a finite Heyting algebra.

    ``→`` is the relative pseudo-complement and ``¬a = a → ⊥``.
    """
    U = _as_set(U)
    if not lattice_filter_check(h, U):
        raise ValueError(f"{sorted(U)} is not an ultrafilter of the Heyting algebra")
    imp = relative_pseudocomplement(h)
    neg = imp[:, h.bot]
    pre = np.isin(imp, list(U))
    return h.with_(op_imp=imp, op_not=neg, preorder=pre, true_set=U)


def with_ultrafilters(s: FiniteStructure) -> list[FiniteStructure]:
    """``s`` itself if it designates TRUE, else one copy per ultrafilter."""
    if s.true_set is not None:
        return [s]
    return [s.with_(true_set=U) for U in enumerate_ultrafilters(s)]


def prealgebra_from_filter(s: FiniteStructure) -> FiniteStructure:
    """Attach ``a ⪯ b  iff  f→(a, b) ∈ TRUE``."""
    return s.with_(preorder=np.isin(s.op_imp, list(s.true_set)))


# --------------------------------------------------------------------------
# model classes
# --------------------------------------------------------------------------


class ClassId(enum.Enum):
    BOOLEAN_PREALGEBRA = "prealgebra"
    SCI_MODEL = "sci"
    SCI3_MODEL = "sci3"
    S1SP_ALGEBRA = "s1sp"
    S3_ALGEBRA = "s3"
    STRONG_S4_ALGEBRA = "strong-s4"
    INTERIOR_ALGEBRA = "interior"
    S5_ALGEBRA = "s5"

    @property
    def lang(self) -> Lang | None:
        if self is ClassId.BOOLEAN_PREALGEBRA:
            return None
        if self in (ClassId.SCI_MODEL, ClassId.SCI3_MODEL):
            return Lang.SCI
        return Lang.MODAL


MODAL_CLASSES = (
    ClassId.S1SP_ALGEBRA,
    ClassId.S3_ALGEBRA,
    ClassId.STRONG_S4_ALGEBRA,
    ClassId.INTERIOR_ALGEBRA,
    ClassId.S5_ALGEBRA,
)
SCI_CLASSES = (ClassId.SCI_MODEL, ClassId.SCI3_MODEL)


def _fail(clause: str) -> Verdict:
    return Verdict(False, clause, None)


def identity_condition(s: FiniteStructure) -> Verdict:
    """``f≡(m, m') ∈ TRUE  iff  m = m'``."""
    eq_true = s.true_mask()[s.op_equiv]
    return _first(eq_true == np.eye(s.n, dtype=bool), "identity condition")


def is_sci_model(s: FiniteStructure) -> Verdict:
    if s.op_equiv is None or s.true_set is None or s.preorder is None:
        return _fail("op_equiv, true_set and preorder are required")
    v = prealgebra_check(s)
    if not v:
        return v
    if not is_ultrafilter(s, s.true_set):
        return Verdict(False, "TRUE is not an ultrafilter", tuple(sorted(s.true_set)))
    return identity_condition(s)


def box_from_equiv(s: FiniteStructure) -> np.ndarray:
    """``f□(m) = f≡(m, f⊤)``."""
    return s.op_equiv[:, s.top]


def is_sci3_model(s: FiniteStructure) -> Verdict:
    v = is_sci_model(s)
    if not v:
        return v
    v = is_boolean_algebra(s)
    if not v:
        return Verdict(False, "reduct is not a Boolean algebra: " + v.clause, v.witness)
    L = lattice_order(s)
    bx = box_from_equiv(s)
    a, b = _grid(s.n, 2)
    return _first(~L[a, b] | L[bx[a], bx[b]], "monotonicity of f□")


def _modal_base(s: FiniteStructure, need_true: bool) -> tuple[Verdict, np.ndarray | None]:
    if s.op_box is None:
        return _fail("op_box is required"), None
    if need_true and s.true_set is None:
        return _fail("true_set is required"), None
    v = is_boolean_algebra(s)
    if not v:
        return Verdict(False, "not a Boolean algebra: " + v.clause, v.witness), None
    return OK, lattice_order(s)


def _cond1(s: FiniteStructure) -> Verdict:
    in_true = s.true_mask()[s.op_box]
    return _first(in_true == (np.arange(s.n) == s.top), "(1) f□(a) ∈ TRUE iff a = ⊤")


def _cond2(s: FiniteStructure, L: np.ndarray) -> Verdict:
    return _first(L[s.op_box, np.arange(s.n)], "(2) f□(a) <= a")


def is_s1sp_algebra(s: FiniteStructure) -> Verdict:
    v, L = _modal_base(s, True)
    if not v:
        return v
    for v in (_cond1(s), _cond2(s, L)):
        if not v:
            return v
    B, I, A = s.op_box, s.op_imp, s.op_and
    a, b, c = _grid(s.n, 3)
    return _first(L[A[B[I[a, b]], B[I[b, c]]], B[I[a, c]]], "(3) transitivity of strict implication")


def is_s3_algebra(s: FiniteStructure) -> Verdict:
    v, L = _modal_base(s, True)
    if not v:
        return v
    for v in (_cond1(s), _cond2(s, L)):
        if not v:
            return v
    B, I = s.op_box, s.op_imp
    a, b = _grid(s.n, 2)
    return _first(L[B[I[a, b]], B[I[B[a], B[b]]]], "(S3)")


def is_strong_s4_algebra(s: FiniteStructure) -> Verdict:
    v, L = _modal_base(s, True)
    if not v:
        return v
    for v in (_cond1(s), _cond2(s, L)):
        if not v:
            return v
    B, I = s.op_box, s.op_imp
    a, b = _grid(s.n, 2)
    v = _first(L[B[I[a, b]], I[B[a], B[b]]], "(K)")
    if not v:
        return v
    return _first(L[B, B[B]], "(S4)")


def is_interior_algebra(s: FiniteStructure) -> Verdict:
    v, L = _modal_base(s, False)
    if not v:
        return v
    B, A = s.op_box, s.op_and
    a, b = _grid(s.n, 2)
    for v in (
        _first(L[B, np.arange(s.n)], "(IA1)"),
        _first(B[B] == B, "(IA2)"),
        _first(B[A[a, b]] == A[B[a], B[b]], "(IA3)"),
        _first(np.array([B[s.top] == s.top]), "(IA4)"),
    ):
        if not v:
            return v
    return OK


def is_s5_algebra(s: FiniteStructure) -> Verdict:
    v, _ = _modal_base(s, False)
    if not v:
        return v
    expected = np.where(np.arange(s.n) == s.top, s.top, s.bot)
    return _first(s.op_box == expected, "f□(a) = ⊤ if a = ⊤ else ⊥")


def diamond(s: FiniteStructure, a: int) -> int:
    """Closure operator ``f◇(a) = f¬(f□(f¬(a)))``."""
    return int(s.op_not[s.op_box[s.op_not[a]]])


def diamond_table(s: FiniteStructure) -> np.ndarray:
    return s.op_not[s.op_box[s.op_not]]


PREDICATES = {
    ClassId.BOOLEAN_PREALGEBRA: is_boolean_prealgebra,
    ClassId.SCI_MODEL: is_sci_model,
    ClassId.SCI3_MODEL: is_sci3_model,
    ClassId.S1SP_ALGEBRA: is_s1sp_algebra,
    ClassId.S3_ALGEBRA: is_s3_algebra,
    ClassId.STRONG_S4_ALGEBRA: is_strong_s4_algebra,
    ClassId.INTERIOR_ALGEBRA: is_interior_algebra,
    ClassId.S5_ALGEBRA: is_s5_algebra,
}


def in_class(s: FiniteStructure, cls: ClassId) -> Verdict:
    return PREDICATES[cls](s)


def classify(s: FiniteStructure) -> list[ClassId]:
    """Every class whose predicate the structure passes (missing tables fail)."""
    out = []
    for cls, pred in PREDICATES.items():
        try:
            ok = bool(pred(s))
        except (ValueError, TypeError):
            ok = False
        if ok:
            out.append(cls)
    return out


# --------------------------------------------------------------------------
# conversions between the two sides
# --------------------------------------------------------------------------


def sci_from_modal(s: FiniteStructure) -> FiniteStructure:
    """``f≡(a, b) := f□(f↔(a, b))`` with the lattice order as preorder."""
    a, b = _grid(s.n, 2)
    bicond = s.op_and[s.op_imp[a, b], s.op_imp[b, a]]
    return s.with_(op_equiv=s.op_box[bicond], op_box=None, preorder=lattice_order(s))


def modal_from_sci(s: FiniteStructure) -> FiniteStructure:
    """``f□(a) := f≡(a, f⊤)``."""
    return s.with_(op_box=box_from_equiv(s), op_equiv=None)


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------


@dataclass
class Enumeration:
    """Iterator over class members, with a budget on examined candidates.

    When the budget runs out iteration stops and ``exhausted`` is set; this
    is reported, never raised.
    """

    source: Iterator[FiniteStructure]
    predicate: object
    budget: int | None = None
    examined: int = 0
    exhausted: bool = False
    _done: bool = field(default=False, repr=False)

    def __iter__(self):
        return self

    def __next__(self) -> FiniteStructure:
        while not self._done:
            if self.budget is not None and self.examined >= self.budget:
                self.exhausted = True
                self._done = True
                break
            try:
                cand = next(self.source)
            except StopIteration:
                self._done = True
                break
            self.examined += 1
            if self.predicate(cand):
                return cand
        raise StopIteration


def _box_candidates(base: FiniteStructure, U: frozenset[int], cls: ClassId, L: np.ndarray) -> list[list[int]]:
    """Per-cell box values allowed by the cell-local conditions of ``cls``."""
    n = base.n
    cells = []
    for a in range(n):
        if cls is ClassId.S5_ALGEBRA:
            cells.append([base.top if a == base.top else base.bot])
            continue
        below = [b for b in range(n) if L[b, a]]
        if cls is ClassId.INTERIOR_ALGEBRA:
            cells.append(below if a != base.top else [base.top])
        else:  # conditions (1) and (2)
            cells.append([b for b in below if (b in U) == (a == base.top)])
    return cells


def _equiv_candidates(n: int, U: frozenset[int]) -> list[list[int]]:
    inside = sorted(U)
    outside = [x for x in range(n) if x not in U]
    return [inside if i == j else outside for i in range(n) for j in range(n)]


def _base_size_to_atoms(base_size: int) -> int:
    k = base_size.bit_length() - 1
    if base_size < 2 or 1 << k != base_size:
        raise ValueError(f"base size must be a power of two >= 2, got {base_size}")
    return k


def _expansion_stream(base_size: int, cls: ClassId, include_prealgebras: bool = False) -> Iterator[FiniteStructure]:
    base = powerset_algebra(_base_size_to_atoms(base_size))
    L = base.preorder
    n = base.n
    if cls is ClassId.BOOLEAN_PREALGEBRA:
        yield base
        for U in enumerate_ultrafilters(base):
            yield prealgebra_from_filter(base.with_(true_set=U))
        return
    if cls in (ClassId.INTERIOR_ALGEBRA, ClassId.S5_ALGEBRA):
        # no condition mentions TRUE: one pass over box tables
        for table in itertools.product(*_box_candidates(base, frozenset(), cls, L)):
            yield base.with_(op_box=np.array(table))
        return
    for U in enumerate_ultrafilters(base):
        if cls in MODAL_CLASSES:
            for table in itertools.product(*_box_candidates(base, U, cls, L)):
                yield base.with_(op_box=np.array(table), true_set=U)
        else:
            for cells in itertools.product(*_equiv_candidates(n, U)):
                yield base.with_(op_equiv=np.array(cells).reshape(n, n), true_set=U)


def _fast_predicate(cls: ClassId):
    """Predicate for candidates from :func:`_expansion_stream`.

    The base algebra, ultrafilter and cell-local conditions already hold by
    construction, so only the remaining clauses are tested.
    """
    if cls is ClassId.SCI_MODEL:
        return lambda s: True
    if cls is ClassId.SCI3_MODEL:

        def monotone(s):
            L = s.preorder
            bx = box_from_equiv(s)
            a, b = _grid(s.n, 2)
            return bool((~L[a, b] | L[bx[a], bx[b]]).all())

        return monotone
    return PREDICATES[cls]


def enumerate_expansions(base_size: int, cls: ClassId, budget: int | None = None) -> Enumeration:
    """Class members over the powerset algebra of the given size.

    Ultrafilters are iterated in order, then op tables lexicographically
    (cell by cell, candidate values ascending).  Pruning only removes tables
    violating a cell-local condition, so the surviving order is still
    lexicographic.
    """
    return Enumeration(_expansion_stream(base_size, cls), _fast_predicate(cls), budget)


def count_expansions(base_size: int, cls: ClassId, budget: int | None = None) -> tuple[int, bool]:
    it = enumerate_expansions(base_size, cls, budget)
    total = sum(1 for _ in it)
    return total, it.exhausted


def sample_expansions(base_size: int, cls: ClassId, count: int, seed: int = 0, max_tries: int = 100_000) -> list[FiniteStructure]:
    """Seeded random class members (cell-wise uniform tables, then filtered)."""
    rng = random.Random(seed)
    base = powerset_algebra(_base_size_to_atoms(base_size))
    ufs = enumerate_ultrafilters(base)
    pred = PREDICATES[cls]
    out: list[FiniteStructure] = []
    seen = set()
    for _ in range(max_tries):
        if len(out) >= count:
            break
        U = rng.choice(ufs)
        if cls in MODAL_CLASSES:
            cells = _box_candidates(base, U, cls, base.preorder)
            s = base.with_(op_box=np.array([rng.choice(c) for c in cells]))
            if cls not in (ClassId.INTERIOR_ALGEBRA, ClassId.S5_ALGEBRA):
                s = s.with_(true_set=U)
        else:
            cells = _equiv_candidates(base.n, U)
            s = base.with_(op_equiv=np.array([rng.choice(c) for c in cells]).reshape(base.n, base.n), true_set=U)
        if s.key() in seen or not pred(s):
            continue
        seen.add(s.key())
        out.append(s)
    return out


# --------------------------------------------------------------------------
# non-Boolean prealgebra bases
# --------------------------------------------------------------------------


def two_class_bases(n: int, false_count: int) -> Iterator[FiniteStructure]:
    """Prealgebras of size ``n`` whose associated algebra has two elements.

    Elements ``0..false_count-1`` form the false class, the rest the true
    class; ``⊥ = 0`` and ``⊤ = n-1``.  Every table cell ranges over the class
    the two-element algebra prescribes.  Yields in lexicographic order of
    (not, and, or, imp); the preorder is the class order and TRUE is the true
    class.
    """
    if not 0 < false_count < n:
        raise ValueError("both classes must be nonempty")
    cls_of = np.array([0] * false_count + [1] * (n - false_count))
    members = {0: list(range(false_count)), 1: list(range(false_count, n))}
    a, b = _grid(n, 2)
    pre = cls_of[a] <= cls_of[b]
    true_set = frozenset(members[1])

    def cells(result_class: np.ndarray) -> list[list[int]]:
        return [members[int(c)] for c in result_class.ravel()]

    neg_cells = cells(1 - cls_of)
    and_cells = cells(cls_of[a] & cls_of[b])
    or_cells = cells(cls_of[a] | cls_of[b])
    imp_cells = cells((1 - cls_of[a]) | cls_of[b])
    for neg in itertools.product(*neg_cells):
        for conj in itertools.product(*and_cells):
            for disj in itertools.product(*or_cells):
                for imp in itertools.product(*imp_cells):
                    yield FiniteStructure(
                        elements=tuple(("f" if c == 0 else "t") + str(i) for i, c in enumerate(cls_of)),
                        op_and=np.array(conj).reshape(n, n),
                        op_or=np.array(disj).reshape(n, n),
                        op_not=np.array(neg),
                        op_imp=np.array(imp).reshape(n, n),
                        bot=0,
                        top=n - 1,
                        true_set=true_set,
                        preorder=pre,
                    )


def two_class_sci_models(n: int) -> Iterator[FiniteStructure]:
    """SCI-models over :func:`two_class_bases` of size ``n`` (all splits)."""
    for false_count in range(1, n):
        for base in two_class_bases(n, false_count):
            for cells in itertools.product(*_equiv_candidates(n, base.true_set)):
                yield base.with_(op_equiv=np.array(cells).reshape(n, n))


def sci_model_stream(size: int, cls: ClassId, include_prealgebras: bool) -> Iterator[FiniteStructure]:
    """Candidates of one size for an SCI-side class, in search order."""
    k = size.bit_length() - 1
    if 1 << k == size and size >= 2:
        yield from _expansion_stream(size, cls)
    if include_prealgebras and cls is ClassId.SCI_MODEL and size >= 3:
        yield from two_class_sci_models(size)


# --------------------------------------------------------------------------
# JSON model files
# --------------------------------------------------------------------------


class ModelFormatError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _index(value, n: int, path: str, index_of: dict) -> int:
    if isinstance(value, bool):
        raise ModelFormatError(path, "expected an element index or name")
    if isinstance(value, int):
        if not 0 <= value < n:
            raise ModelFormatError(path, f"index {value} out of range 0..{n - 1}")
        return value
    if isinstance(value, str) and value in index_of:
        return index_of[value]
    raise ModelFormatError(path, f"unknown element {value!r}")


def _table(obj, n: int, path: str, index_of: dict, binary: bool):
    if not isinstance(obj, list) or len(obj) != n:
        raise ModelFormatError(path, f"expected a list of length {n}")
    if not binary:
        return [_index(v, n, f"{path}[{i}]", index_of) for i, v in enumerate(obj)]
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ModelFormatError(f"{path}[{i}]", f"expected a list of length {n}")
        rows.append([_index(v, n, f"{path}[{i}][{j}]", index_of) for j, v in enumerate(row)])
    return rows


def structure_from_json(obj: dict) -> FiniteStructure:
    if not isinstance(obj, dict):
        raise ModelFormatError("$", "expected an object")
    elements = obj.get("elements")
    if not isinstance(elements, list) or not elements:
        raise ModelFormatError("$.elements", "expected a nonempty list")
    names = [str(e) for e in elements]
    n = len(names)
    if len(set(names)) != n:
        raise ModelFormatError("$.elements", "duplicate element names")
    index_of = {name: i for i, name in enumerate(names)}
    ops = obj.get("ops")
    if not isinstance(ops, dict):
        raise ModelFormatError("$.ops", "expected an object")
    fields = {}
    for key, binary in (("and", True), ("or", True), ("imp", True), ("not", False)):
        if key not in ops:
            raise ModelFormatError(f"$.ops.{key}", "missing")
        fields["op_" + key] = _table(ops[key], n, f"$.ops.{key}", index_of, binary)
    for key in ("bot", "top"):
        if key not in ops:
            raise ModelFormatError(f"$.ops.{key}", "missing")
        fields[key] = _index(ops[key], n, f"$.ops.{key}", index_of)
    if obj.get("equiv") is not None:
        fields["op_equiv"] = _table(obj["equiv"], n, "$.equiv", index_of, True)
    if obj.get("box") is not None:
        fields["op_box"] = _table(obj["box"], n, "$.box", index_of, False)
    if obj.get("true_set") is not None:
        ts = obj["true_set"]
        if not isinstance(ts, list):
            raise ModelFormatError("$.true_set", "expected a list")
        fields["true_set"] = frozenset(_index(v, n, f"$.true_set[{i}]", index_of) for i, v in enumerate(ts))
    if obj.get("preorder") is not None:
        pre = obj["preorder"]
        if not isinstance(pre, list) or len(pre) != n:
            raise ModelFormatError("$.preorder", f"expected a list of length {n}")
        for i, row in enumerate(pre):
            if not isinstance(row, list) or len(row) != n or not all(isinstance(x, bool) for x in row):
                raise ModelFormatError(f"$.preorder[{i}]", f"expected {n} booleans")
        fields["preorder"] = pre
    return FiniteStructure(elements=tuple(names), **fields)


def structure_to_json(s: FiniteStructure) -> dict:
    out: dict = {
        "elements": list(s.elements),
        "ops": {
            "and": s.op_and.tolist(),
            "or": s.op_or.tolist(),
            "not": s.op_not.tolist(),
            "imp": s.op_imp.tolist(),
            "bot": s.bot,
            "top": s.top,
        },
    }
    if s.op_equiv is not None:
        out["equiv"] = s.op_equiv.tolist()
    if s.op_box is not None:
        out["box"] = s.op_box.tolist()
    if s.true_set is not None:
        out["true_set"] = sorted(s.true_set)
    if s.preorder is not None:
        out["preorder"] = s.preorder.tolist()
    return out


# --------------------------------------------------------------------------
# named structures
# --------------------------------------------------------------------------


def necessitation_counterexample() -> FiniteStructure:
    """Powerset of two atoms, TRUE = {{0},{0,1}}, f≡ = {0} on the diagonal
    and {1} elsewhere.  Falsifies ``□(□x0 → x0)`` at ``x0 = {0}``."""
    base = powerset_algebra(2)
    equiv = np.where(np.eye(4, dtype=bool), 0b01, 0b10)
    return base.with_(op_equiv=equiv, true_set=frozenset({0b01, 0b11}))


def extra_pair_structure() -> FiniteStructure:
    """Powerset of two atoms ordered by inclusion plus ``{0} ⪯ {1}``.

    The quotient is Boolean but the meet condition fails.
    """
    base = powerset_algebra(2)
    pre = np.array(base.preorder)
    pre[0b01, 0b10] = True
    return base.with_(preorder=pre)
