"""Where does the box/id roundtrip preserve values?

For each modal class, count the corpus algebras in which every sampled
formula keeps its value under box(id(.)), split by whether the algebra
validates []x0 == (x0 == T).  On the identity side, compare the two-box
and one-box translations on models of the identity form of scheme (1).

    python scripts/roundtrip.py --formulas 200
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from scilogic.algebra import ClassId, sci_from_modal
from scilogic.corpus import modal_corpus, sci_corpus
from scilogic.randgen import random_formulas
from scilogic.semantics import evaluate_all, valid_in_model
from scilogic.syntax import Lang, parse, variables
from scilogic.translate import box, box_iff, ident


@dataclass
class RoundtripConfig:
    formulas: int = 200
    max_depth: int = 5
    num_vars: int = 3
    seed: int = 0


def _agrees(s, f, g) -> bool:
    vs = sorted(variables(f) | variables(g))
    return bool(np.array_equal(evaluate_all(s, f, vs), evaluate_all(s, g, vs)))


def modal_table(cfg: RoundtripConfig) -> list[tuple[str, int, int, int, int]]:
    box_n = parse("[]x0 == (x0 == T)", Lang.MODAL)
    fs = random_formulas(cfg.seed, cfg.formulas, cfg.max_depth, Lang.MODAL, cfg.num_vars)
    rows = []
    for cls in (ClassId.S1SP_ALGEBRA, ClassId.S3_ALGEBRA, ClassId.STRONG_S4_ALGEBRA, ClassId.S5_ALGEBRA):
        with_n = without_n = ok_with = ok_without = 0
        for s in modal_corpus(cls):
            ok = all(_agrees(s, f, box(ident(f))) for f in fs)
            if valid_in_model(s, box_n):
                with_n += 1
                ok_with += ok
            else:
                without_n += 1
                ok_without += ok
        rows.append((cls.value, with_n, ok_with, without_n, ok_without))
    return rows


def identity_table(cfg: RoundtripConfig) -> list[tuple[str, int, int]]:
    scheme = parse("(x0 == x1) == [](x0 <-> x1)")
    pool = list(sci_corpus()) + [sci_from_modal(s) for s in modal_corpus(ClassId.S1SP_ALGEBRA)]
    models = [s for s in pool if valid_in_model(s, scheme)]
    fs = random_formulas(cfg.seed + 1, cfg.formulas, cfg.max_depth, Lang.SCI, cfg.num_vars)
    rows = []
    for name, tr in (("two-box", box), ("one-box", box_iff)):
        good = sum(all(_agrees(s, f, ident(tr(f))) for f in fs) for s in models)
        rows.append((name, len(models), good))
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--formulas", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    cfg = RoundtripConfig(formulas=args.formulas, seed=args.seed)
    print("modal side: algebras where box(id(f)) keeps every value")
    print(f"{'class':<12}{'with []N':>10}{'agree':>7}{'without':>9}{'agree':>7}")
    for cls, wn, ow, won, oo in modal_table(cfg):
        print(f"{cls:<12}{wn:>10}{ow:>7}{won:>9}{oo:>7}")
    print("\nidentity side: models of (x0 == x1) == [](x0 <-> x1)")
    for name, total, good in identity_table(cfg):
        print(f"{name:<10}{good}/{total} agree")


if __name__ == "__main__":
    main()
