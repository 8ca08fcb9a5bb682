"""Count the members of each structure class per carrier size.

    python scripts/census.py --sizes 2 4 8
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from scilogic.algebra import ClassId, count_expansions


@dataclass
class CensusConfig:
    sizes: list[int] = field(default_factory=lambda: [2, 4, 8])
    classes: list[ClassId] = field(default_factory=lambda: [c for c in ClassId if c is not ClassId.BOOLEAN_PREALGEBRA])
    budget: int | None = None


def run(cfg: CensusConfig) -> list[tuple[str, int, int, bool, float]]:
    rows = []
    for cls in cfg.classes:
        for size in cfg.sizes:
            # SCI-model tables grow as n**(n*n); skip what cannot finish
            if cls in (ClassId.SCI_MODEL, ClassId.SCI3_MODEL) and size > 4 and cfg.budget is None:
                continue
            start = time.perf_counter()
            count, exhausted = count_expansions(size, cls, cfg.budget)
            rows.append((cls.value, size, count, exhausted, time.perf_counter() - start))
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8])
    p.add_argument("--classes", nargs="+", choices=[c.value for c in ClassId])
    p.add_argument("--budget", type=int)
    args = p.parse_args()
    cfg = CensusConfig(sizes=args.sizes, budget=args.budget)
    if args.classes:
        cfg.classes = [ClassId(c) for c in args.classes]
    print(f"{'class':<12}{'size':>6}{'count':>10}  seconds")
    for cls, size, count, exhausted, secs in run(cfg):
        mark = "+" if exhausted else ""
        print(f"{cls:<12}{size:>6}{count:>10}{mark:1} {secs:7.2f}")


if __name__ == "__main__":
    main()
