"""Seeded random formulas.

At each node the constructor is drawn uniformly from the atoms (variables
x0..x5, T, F) and the connectives of the language; once the depth cap is
reached only atoms are drawn.
"""

from __future__ import annotations

import random

from .syntax import BOT, TOP, And, Box, Equiv, Formula, Imp, Lang, Neg, Or, Var

NUM_VARS = 6


def random_formula(rng: random.Random, max_depth: int, lang: Lang = Lang.SCI, num_vars: int = NUM_VARS) -> Formula:
    """Height at most ``max_depth`` (atoms have height 1)."""
    unary = [Neg] + ([Box] if lang is Lang.MODAL else [])
    binary = [And, Or, Imp] + ([Equiv] if lang is Lang.SCI else [])
    atoms = ["var", "top", "bot"]
    choices = atoms + unary + binary

    def go(depth: int) -> Formula:
        pick = rng.choice(atoms if depth <= 1 else choices)
        if pick == "var":
            return Var(rng.randrange(num_vars))
        if pick == "top":
            return TOP
        if pick == "bot":
            return BOT
        if pick in unary:
            return pick(go(depth - 1))
        return pick(go(depth - 1), go(depth - 1))

    return go(max_depth)


def random_formulas(seed: int, count: int, max_depth: int, lang: Lang = Lang.SCI, num_vars: int = NUM_VARS) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, max_depth, lang, num_vars) for _ in range(count)]
