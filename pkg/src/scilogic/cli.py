"""Command-line front end.

Exit codes: 0 success, 1 negative result, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra import (
    ClassId,
    ModelFormatError,
    classify,
    count_expansions,
    structure_from_json,
    structure_to_json,
)
from .canonical import intensional_satisfies, sci_ext_theoremhood
from .proof import DerivationFormatError, SystemId, check, derivation_from_jsonl, system
from .semantics import SearchOptions, evaluate, find_countermodel, valid_in_model
from .syntax import Lang, LanguageError, ParseError, parse, to_text
from .translate import box, ident, star


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _formula_text(args) -> str:
    if getattr(args, "file", None):
        return Path(args.file).read_text().strip()
    if args.formula is None:
        raise UsageError("a formula is required (positional or --file)")
    return args.formula


def _load_model(path: str):
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: line {e.lineno}: invalid JSON: {e.msg}") from None
    try:
        return structure_from_json(obj)
    except ModelFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _model_lang(s) -> Lang:
    return Lang.MODAL if s.op_box is not None and s.op_equiv is None else Lang.SCI


def _named(s, gamma: dict[int, int]) -> dict[str, str]:
    return {f"x{v}": s.elements[e] for v, e in sorted(gamma.items())}


def cmd_parse(args) -> int:
    f = parse(_formula_text(args), Lang(args.lang))
    print(to_text(f))
    return 0


def cmd_translate(args) -> int:
    text = _formula_text(args)
    if args.dir == "box":
        out = box(parse(text, Lang.SCI))
    elif args.dir == "id":
        out = ident(parse(text, Lang.MODAL))
    else:
        out = star(parse(text, Lang.SCI))
    print(to_text(out))
    return 0


def _parse_assignment(items: list[str], s) -> dict[int, int]:
    index_of = {name: i for i, name in enumerate(s.elements)}
    gamma = {}
    for item in items:
        var, _, val = item.partition("=")
        if not var.startswith("x") or not var[1:].isdigit() or not val:
            raise UsageError(f"bad assignment {item!r}; expected xN=element")
        if val in index_of:
            gamma[int(var[1:])] = index_of[val]
        elif val.isdigit() and int(val) < s.n:
            gamma[int(var[1:])] = int(val)
        else:
            raise UsageError(f"unknown element {val!r}")
    return gamma


def cmd_eval(args) -> int:
    s = _load_model(args.model)
    f = parse(_formula_text(args), _model_lang(s))
    gamma = _parse_assignment(args.assign, s)
    try:
        value = evaluate(s, gamma, f)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    out = {"formula": to_text(f), "value": s.elements[value]}
    if s.true_set is not None:
        out["true"] = value in s.true_set
    _emit(out)
    return 0


def cmd_valid(args) -> int:
    s = _load_model(args.model)
    f = parse(_formula_text(args), _model_lang(s))
    if s.true_set is None:
        raise UsageError("model has no true_set")
    v = valid_in_model(s, f)
    out = {"formula": to_text(f), "valid": v.valid}
    if not v.valid:
        out["countervaluation"] = _named(s, v.countervaluation)
    _emit(out)
    return 0 if v.valid else 1


def cmd_countermodel(args) -> int:
    cls = ClassId(args.cls)
    if cls.lang is None:
        raise UsageError(f"class {cls.value} has no formula language")
    f = parse(_formula_text(args), cls.lang)
    options = SearchOptions(budget=args.budget, include_prealgebras=args.prealgebras)
    r = find_countermodel(f, cls, args.max_size, options)
    out = {"formula": to_text(f), "class": cls.value, "result": r.describe(), "examined": r.examined}
    if r.found:
        out["model"] = structure_to_json(r.structure)
        out["assignment"] = _named(r.structure, r.assignment)
        _emit(out)
        return 1
    _emit(out)
    return 0


def cmd_check_proof(args) -> int:
    sid = SystemId(args.system)
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise UsageError(f"{args.file}: {e.strerror}") from None
    lang = system(sid).lang
    hyps = [parse(h, lang) for h in args.hyp]
    try:
        d = derivation_from_jsonl(text, sid, hyps)
    except DerivationFormatError as e:
        raise UsageError(f"{args.file}: {e}") from None
    conclusion = parse(args.conclusion, lang) if args.conclusion else None
    r = check(d, conclusion)
    if r.ok:
        _emit({"ok": True, "system": sid.value, "conclusion": to_text(d.conclusion)})
        return 0
    _emit({"ok": False, "system": sid.value, "step": r.step, "error": r.message})
    return 1


def cmd_classify(args) -> int:
    s = _load_model(args.model)
    _emit({"classes": [c.value for c in classify(s)]})
    return 0


def cmd_intensional(args) -> int:
    f = parse(_formula_text(args), Lang.SCI)
    ok = intensional_satisfies(f)
    _emit({"formula": to_text(f), "satisfied": ok})
    return 0 if ok else 1


def cmd_extensional(args) -> int:
    f = parse(_formula_text(args), Lang.SCI)
    ok = sci_ext_theoremhood(f)
    _emit({"formula": to_text(f), "theorem": ok})
    return 0 if ok else 1


def _census_cell(job: tuple[str, int, int | None]) -> tuple[str, int, int, bool]:
    cls, size, budget = job
    count, exhausted = count_expansions(size, ClassId(cls), budget)
    return cls, size, count, exhausted


def cmd_census(args) -> int:
    classes = args.classes or [c.value for c in ClassId if c is not ClassId.BOOLEAN_PREALGEBRA]
    jobs = [(c, size, args.budget) for c in classes for size in args.sizes]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_census_cell, jobs))
    else:
        rows = [_census_cell(j) for j in jobs]
    for cls, size, count, exhausted in rows:
        _emit({"class": cls, "size": size, "count": count, "budget_exhausted": exhausted})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scilogic", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def formula_args(sp):
        sp.add_argument("formula", nargs="?")
        sp.add_argument("--file", help="read the formula from a file")

    sp = sub.add_parser("parse", help="parse and print a formula with defined symbols expanded")
    formula_args(sp)
    sp.add_argument("--lang", choices=[l.value for l in Lang], default="sci")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("translate", help="box (SCI to modal), id (modal to SCI) or star")
    formula_args(sp)
    sp.add_argument("--dir", choices=["box", "id", "star"], required=True)
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("eval", help="evaluate a formula in a model under an assignment")
    sp.add_argument("model")
    formula_args(sp)
    sp.add_argument("--assign", nargs="*", default=[], metavar="xN=ELEM")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("valid", help="validity in a model (exit 1 with a countervaluation)")
    sp.add_argument("model")
    formula_args(sp)
    sp.set_defaults(func=cmd_valid)

    sp = sub.add_parser("countermodel", help="search a class for a falsifying structure (exit 1 if found)")
    formula_args(sp)
    sp.add_argument("--class", dest="cls", choices=[c.value for c in ClassId if c.lang], required=True)
    sp.add_argument("--max-size", type=int, default=4)
    sp.add_argument("--budget", type=int, default=None, help="maximum candidates examined")
    sp.add_argument("--prealgebras", action="store_true", help="also search non-Boolean two-class bases")
    sp.add_argument("--jobs", type=int, default=1, help="accepted for interface stability; search is sequential")
    sp.set_defaults(func=cmd_countermodel)

    sp = sub.add_parser("check-proof", help="check a JSON-lines derivation")
    sp.add_argument("file")
    sp.add_argument("--system", choices=[s.value for s in SystemId], required=True)
    sp.add_argument("--hyp", action="append", default=[], help="hypothesis formula (repeatable)")
    sp.add_argument("--conclusion", help="required last formula")
    sp.set_defaults(func=cmd_check_proof)

    sp = sub.add_parser("classify", help="list the classes a model file belongs to")
    sp.add_argument("model")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("intensional", help="truth in the intensional model")
    sp.add_argument("action", choices=["check"])
    formula_args(sp)
    sp.set_defaults(func=cmd_intensional)

    sp = sub.add_parser("extensional", help="theoremhood in SCI plus the Fregean axiom")
    sp.add_argument("action", choices=["check"])
    formula_args(sp)
    sp.set_defaults(func=cmd_extensional)

    sp = sub.add_parser("census", help="count class members per base size")
    sp.add_argument("--sizes", type=int, nargs="+", default=[2, 4])
    sp.add_argument("--classes", nargs="+", choices=[c.value for c in ClassId])
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_census)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except (UsageError, ParseError, LanguageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
