"""Translations between the identity language and the modal language."""

from __future__ import annotations

from .syntax import (
    TOP,
    Box,
    Equiv,
    Formula,
    Lang,
    Imp,
    And,
    check_language,
    children,
    iff,
    rebuild,
    star,
)

__all__ = ["box", "box_iff", "ident", "star", "roundtrip_box_id", "roundtrip_id_box", "box_all", "ident_all"]


def box(f: Formula) -> Formula:
    """Fm≡ → Fm□.  Homomorphic except on identities:

    box(a ≡ b) = □(box a → box b) ∧ □(box b → box a)
    """
    check_language(f, Lang.SCI)
    return _box(f)


def _box(f: Formula) -> Formula:
    if isinstance(f, Equiv):
        a, b = _box(f.left), _box(f.right)
        return And(Box(Imp(a, b)), Box(Imp(b, a)))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(_box(k) for k in kids))


def ident(f: Formula) -> Formula:
    """Fm□ → Fm≡.  Homomorphic except id(□a) = (id a ≡ ⊤)."""
    check_language(f, Lang.MODAL)
    return _ident(f)


def _ident(f: Formula) -> Formula:
    if isinstance(f, Box):
        return Equiv(_ident(f.sub), TOP)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(_ident(k) for k in kids))


def roundtrip_box_id(f: Formula) -> Formula:
    return box(ident(f))


def roundtrip_id_box(f: Formula) -> Formula:
    return ident(box(f))


def box_all(fs) -> list[Formula]:
    return [box(f) for f in fs]


def ident_all(fs) -> list[Formula]:
    return [ident(f) for f in fs]


def box_iff(f: Formula) -> Formula:
    """Variant of :func:`box` writing identities with one box:

    box_iff(a ≡ b) = □(box_iff a ↔ box_iff b)
    """
    check_language(f, Lang.SCI)
    return _box_iff(f)


def _box_iff(f: Formula) -> Formula:
    if isinstance(f, Equiv):
        return Box(iff(_box_iff(f.left), _box_iff(f.right)))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(_box_iff(k) for k in kids))
