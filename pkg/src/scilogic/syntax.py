"""Formulas of the identity language (Fm≡) and the modal language (Fm□).

Both languages share one immutable AST.  Defined symbols are expanded as
soon as a formula is parsed, so a parsed SCI formula never contains a
``Box`` node and a parsed modal formula never contains an ``Equiv`` node:

* SCI:   ``[] a``   becomes ``(a == T)``
* modal: ``a == b`` becomes ``([](a -> b) & [](b -> a))``
* both:  ``a <-> b`` becomes ``((a -> b) & (b -> a))``
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np


class Lang(enum.Enum):
    SCI = "sci"
    MODAL = "modal"


class LanguageError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


def _node(cls):
    """Frozen dataclass with an eagerly cached structural hash."""
    cls = dataclass(frozen=True, repr=False)(cls)
    init = cls.__init__

    def __init__(self, *args, **kwargs):
        init(self, *args, **kwargs)
        key = (cls.__name__,) + tuple(getattr(self, f) for f in cls._fields)
        object.__setattr__(self, "_hash", hash(key))

    cls.__init__ = __init__
    cls.__hash__ = lambda self: self._hash
    cls.__repr__ = lambda self: f"{cls.__name__}({', '.join(repr(getattr(self, f)) for f in cls._fields)})"
    return cls


@_node
class Var(Formula):
    index: int
    _fields = ("index",)


@_node
class Meta(Formula):
    """Metavariable; appears only in axiom-scheme patterns."""

    name: str
    _fields = ("name",)


@_node
class Bot(Formula):
    _fields = ()


@_node
class Top(Formula):
    _fields = ()


@_node
class Neg(Formula):
    sub: Formula
    _fields = ("sub",)


@_node
class Box(Formula):
    sub: Formula
    _fields = ("sub",)


@_node
class And(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@_node
class Or(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@_node
class Imp(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


@_node
class Equiv(Formula):
    left: Formula
    right: Formula
    _fields = ("left", "right")


BOT = Bot()
TOP = Top()
UNARY = (Neg, Box)
BINARY = (And, Or, Imp, Equiv)
BOOLEAN_BINARY = (And, Or, Imp)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.sub,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    return f


# --------------------------------------------------------------------------
# defined symbols
# --------------------------------------------------------------------------


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def strict_equiv(a: Formula, b: Formula) -> Formula:
    return And(Box(Imp(a, b)), Box(Imp(b, a)))


def necessity(a: Formula, lang: Lang) -> Formula:
    """``□a`` in the given language (``a ≡ ⊤`` on the SCI side)."""
    return Equiv(a, TOP) if lang is Lang.SCI else Box(a)


def identity(a: Formula, b: Formula, lang: Lang) -> Formula:
    """``a ≡ b`` in the given language (strict equivalence on the modal side)."""
    return Equiv(a, b) if lang is Lang.SCI else strict_equiv(a, b)


def as_identity(f: Formula, lang: Lang) -> tuple[Formula, Formula] | None:
    """Inverse of :func:`identity`: the two sides, or None."""
    if lang is Lang.SCI:
        return (f.left, f.right) if isinstance(f, Equiv) else None
    if (
        isinstance(f, And)
        and isinstance(f.left, Box)
        and isinstance(f.right, Box)
        and isinstance(f.left.sub, Imp)
        and isinstance(f.right.sub, Imp)
    ):
        a, b = f.left.sub.left, f.left.sub.right
        if f.right.sub == Imp(b, a):
            return a, b
    return None


def as_necessity(f: Formula, lang: Lang) -> Formula | None:
    if lang is Lang.SCI:
        if isinstance(f, Equiv) and f.right == TOP:
            return f.left
        return None
    return f.sub if isinstance(f, Box) else None


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->)|(->)|(==)|(\[\])|x(\d+)|\?([A-Za-z_]\w*)|([~&|()TF]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        if m.group(5) is not None:
            tokens.append(("var", int(m.group(5)), start))
        elif m.group(6) is not None:
            tokens.append(("meta", m.group(6), start))
        else:
            tokens.append((m.group(m.lastindex), None, start))
        pos = m.end()
    tokens.append(("eof", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, lang: Lang, allow_meta: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.lang = lang
        self.allow_meta = allow_meta

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.equiv()
        if self.peek() != "eof":
            tok = self.toks[self.i]
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2])
        return f

    def equiv(self) -> Formula:
        left = self.bicond()
        if self.peek() == "==":
            self.take()
            right = self.bicond()
            if self.peek() == "==":
                raise ParseError("'==' is non-associative; add parentheses", self.toks[self.i][2])
            return identity(left, right, self.lang)
        return left

    def bicond(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            right = self.imp()
            if self.peek() == "<->":
                raise ParseError("'<->' is non-associative; add parentheses", self.toks[self.i][2])
            return iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.take()
            return Neg(self.unary())
        if kind == "[]":
            self.take()
            return necessity(self.unary(), self.lang)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "var":
            return Var(value)
        if kind == "T":
            return TOP
        if kind == "F":
            return BOT
        if kind == "meta":
            if not self.allow_meta:
                raise ParseError("metavariables are only allowed in schemes", pos)
            return Meta(value)
        if kind == "(":
            f = self.equiv()
            self.take(")")
            return f
        raise ParseError(f"unexpected token {kind!r}", pos)


def parse(text: str, lang: Lang = Lang.SCI, *, allow_meta: bool = False) -> Formula:
    f = _Parser(text, lang, allow_meta).parse()
    # expansion makes this impossible; kept as a guard
    assert in_language(f, lang), f
    return f


def parse_scheme(text: str, lang: Lang) -> Formula:
    return parse(text, lang, allow_meta=True)


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------

_SYMBOL = {And: "&", Or: "|", Imp: "->", Equiv: "=="}


def to_text(f: Formula) -> str:
    if isinstance(f, Var):
        return f"x{f.index}"
    if isinstance(f, Meta):
        return f"?{f.name}"
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, Neg):
        return "~" + to_text(f.sub)
    if isinstance(f, Box):
        return "[] " + to_text(f.sub)
    return f"({to_text(f.left)} {_SYMBOL[type(f)]} {to_text(f.right)})"


# --------------------------------------------------------------------------
# structural operations
# --------------------------------------------------------------------------


def nodes(f: Formula) -> Iterator[Formula]:
    """All nodes, pre-order."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def in_language(f: Formula, lang: Lang) -> bool:
    banned = Box if lang is Lang.SCI else Equiv
    return not any(isinstance(g, banned) for g in nodes(f))


def check_language(f: Formula, lang: Lang) -> None:
    if not in_language(f, lang):
        node = "Box" if lang is Lang.SCI else "Equiv"
        raise LanguageError(f"{node} node in a formula of language {lang.value}: {to_text(f)}")


def languages(f: Formula) -> set[Lang]:
    return {lang for lang in Lang if in_language(f, lang)}


def variables(f: Formula) -> set[int]:
    return {g.index for g in nodes(f) if isinstance(g, Var)}


def max_var(f: Formula) -> int:
    return max(variables(f), default=-1)


def subformulas(f: Formula) -> list[Formula]:
    """Post-order, duplicates removed (first occurrence kept)."""
    seen: dict[Formula, None] = {}

    def walk(g: Formula) -> None:
        for k in children(g):
            walk(k)
        seen.setdefault(g, None)

    walk(f)
    return list(seen)


def height(f: Formula) -> int:
    """Number of node levels; atoms have height 1."""
    kids = children(f)
    return 1 + max((height(k) for k in kids), default=0)


def size(f: Formula) -> int:
    return sum(1 for _ in nodes(f))


def substitute(chi: Formula, x: int, phi: Formula) -> Formula:
    """``chi[x := phi]``: every ``Var(x)`` leaf of ``chi`` replaced by ``phi``."""
    if languages(chi) & languages(phi) == set():
        raise LanguageError("substitution mixes the two languages")
    return substitute_many(chi, {x: phi})


def substitute_many(chi: Formula, mapping: dict[int, Formula]) -> Formula:
    def go(g: Formula) -> Formula:
        if isinstance(g, Var):
            return mapping.get(g.index, g)
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, tuple(go(k) for k in kids))

    return go(chi)


def rank(f: Formula) -> int:
    """Rank used by the intensional model: identities are rank 0."""
    if isinstance(f, (Var, Bot, Top, Equiv)):
        return 0
    if isinstance(f, Neg):
        return rank(f.sub) + 1
    if isinstance(f, BOOLEAN_BINARY):
        return max(rank(f.left), rank(f.right)) + 1
    raise LanguageError(f"rank is defined on Fm≡ only: {to_text(f)}")


def boolean_skeleton(f: Formula) -> tuple[Formula, dict[int, Formula]]:
    """Abstract every maximal ``Equiv``/``Box`` subtree to a fresh variable.

    Identical subtrees share a variable.  Fresh indices start above the
    largest index in ``f`` and are handed out in pre-order.
    """
    nxt = max_var(f) + 1
    fresh: dict[Formula, int] = {}

    def go(g: Formula) -> Formula:
        nonlocal nxt
        if isinstance(g, (Equiv, Box)):
            if g not in fresh:
                fresh[g] = nxt
                nxt += 1
            return Var(fresh[g])
        kids = children(g)
        if not kids:
            return g
        return rebuild(g, tuple(go(k) for k in kids))

    skel = go(f)
    return skel, {i: g for g, i in fresh.items()}


def truth_table(f: Formula, order: list[int] | None = None) -> np.ndarray:
    """Truth values of a purely Boolean formula over all assignments.

    Row ``r`` assigns variable ``order[j]`` the ``j``-th bit of ``r``
    (least significant bit first).
    """
    order = sorted(variables(f)) if order is None else order
    rows = 1 << len(order)
    col = {v: (np.arange(rows) >> j) & 1 == 1 for j, v in enumerate(order)}

    def ev(g: Formula) -> np.ndarray:
        if isinstance(g, Var):
            return col[g.index]
        if isinstance(g, Top):
            return np.ones(rows, dtype=bool)
        if isinstance(g, Bot):
            return np.zeros(rows, dtype=bool)
        if isinstance(g, Neg):
            return ~ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Imp):
            return ~ev(g.left) | ev(g.right)
        raise LanguageError(f"not a Boolean formula: {to_text(g)}")

    return ev(f)


def is_tautology(f: Formula) -> bool:
    """Truth-table tautology check for a purely Boolean formula."""
    return bool(truth_table(f).all())


def star(f: Formula) -> Formula:
    """Replace every identity ``a ≡ b`` by ``a ↔ b``, innermost first."""
    kids = children(f)
    if not kids:
        return f
    kids = tuple(star(k) for k in kids)
    if isinstance(f, Equiv):
        return iff(*kids)
    return rebuild(f, kids)


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------


def enumerate_formulas(max_height: int, var_indices=(0, 1), lang: Lang = Lang.SCI) -> list[Formula]:
    """Every formula of height ``<= max_height`` over the given variables.

    Constants ``T``/``F`` are included; ``Equiv`` is used for SCI and ``Box``
    for the modal language.
    """
    atoms = [Var(i) for i in var_indices] + [TOP, BOT]
    unary = [Neg] + ([Box] if lang is Lang.MODAL else [])
    binary = [And, Or, Imp] + ([Equiv] if lang is Lang.SCI else [])
    everything = list(atoms)
    newest = set(atoms)
    for _ in range(max_height - 1):
        new = []
        for op in unary:
            new.extend(op(g) for g in everything if g in newest)
        for op in binary:
            for a, b in product(everything, repeat=2):
                if a in newest or b in newest:
                    new.append(op(a, b))
        everything.extend(new)
        newest = set(new)
    return everything
