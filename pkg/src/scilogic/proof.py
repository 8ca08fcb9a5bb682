"""Hilbert-style systems on both sides and a derivation checker.

A derivation is a list of steps numbered from 1.  Each step carries a
formula and a justification:

* ``hyp``                      the formula is one of the hypotheses
* ``axiom``   (scheme)         instance of an axiom scheme of the system
* ``theorem`` (scheme)         instance of a theorem scheme (``SP`` etc.)
* ``sp``                       shorthand for ``theorem`` with scheme ``SP``
* ``mp``      (from i, j)      step j is ``step i -> this``
* ``an``      (from i)         this is ``□ step i`` and step i is an axiom
* ``spse``    (from i)         step i is a hypothesis-free identity
                               ``φ ≡ ψ`` and this is ``χ[φ] ≡ χ[ψ]``

Only axiom steps feed ``an``; theorem schemes never do.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .syntax import (
    And,
    Formula,
    Imp,
    Lang,
    LanguageError,
    Meta,
    ParseError,
    Var,
    as_identity,
    as_necessity,
    boolean_skeleton,
    check_language,
    children,
    enumerate_formulas,
    identity,
    in_language,
    is_tautology,
    max_var,
    necessity,
    parse,
    parse_scheme,
    rebuild,
    substitute,
    to_text,
    variables,
)

SKELETON_BUDGET = 20


class BudgetExceeded(ValueError):
    pass


def cpc_tautology(f: Formula) -> bool:
    """Has the form of a classical tautology (truth table of the skeleton)."""
    skel, _ = boolean_skeleton(f)
    if len(variables(skel)) > SKELETON_BUDGET:
        raise BudgetExceeded(f"skeleton has more than {SKELETON_BUDGET} atoms")
    return is_tautology(skel)


# --------------------------------------------------------------------------
# schemes
# --------------------------------------------------------------------------


class Kind(enum.Enum):
    PATTERN = "pattern"
    CPC = "cpc"
    BOX_CPC = "box_cpc"
    SP = "sp"


@dataclass(frozen=True)
class Scheme:
    name: str
    kind: Kind
    pattern: Formula | None = None
    text: str = ""


def _pattern(name: str, text: str, lang: Lang) -> Scheme:
    return Scheme(name, Kind.PATTERN, parse_scheme(text, lang), text)


def match_pattern(pattern: Formula, f: Formula, binding: dict[str, Formula] | None = None) -> dict[str, Formula] | None:
    """Unify metavariables by syntactic equality; ``None`` if no match."""
    binding = {} if binding is None else binding
    if isinstance(pattern, Meta):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return binding
        return binding if bound == f else None
    if type(pattern) is not type(f):
        return None
    pk, fk = children(pattern), children(f)
    if not pk:
        return binding if pattern == f else None
    for p, g in zip(pk, fk):
        if match_pattern(p, g, binding) is None:
            return None
    return binding


@dataclass(frozen=True)
class SPMatch:
    chi: Formula
    x: int
    phi: Formula
    psi: Formula


def reconstruct_context(left: Formula, right: Formula, phi: Formula, psi: Formula, x: int) -> Formula | None:
    """Find ``chi`` with ``chi[x:=phi] = left`` and ``chi[x:=psi] = right``.

    Leftmost-outermost: a position whose pair is ``(phi, psi)`` becomes the
    hole; equal subtrees are kept; otherwise heads must agree and the search
    descends.
    """
    hole = Var(x)

    def go(a: Formula, b: Formula) -> Formula | None:
        if a == phi and b == psi:
            return hole
        if a == b:
            return a
        if type(a) is not type(b):
            return None
        ka, kb = children(a), children(b)
        if not ka:
            return None
        kids = []
        for p, q in zip(ka, kb):
            k = go(p, q)
            if k is None:
                return None
            kids.append(k)
        return rebuild(a, tuple(kids))

    chi = go(left, right)
    if chi is None:
        return None
    # guard against variable capture by the fresh hole
    if substitute(chi, x, phi) != left or substitute(chi, x, psi) != right:
        return None
    return chi


def match_sp(f: Formula, lang: Lang = Lang.SCI) -> SPMatch | None:
    """``(φ ≡ ψ) → (χ[x:=φ] ≡ χ[x:=ψ])`` with ``x`` fresh."""
    if not isinstance(f, Imp):
        return None
    premise = as_identity(f.left, lang)
    conclusion = as_identity(f.right, lang)
    if premise is None or conclusion is None:
        return None
    phi, psi = premise
    x = max_var(f) + 1
    chi = reconstruct_context(conclusion[0], conclusion[1], phi, psi, x)
    if chi is None:
        return None
    return SPMatch(chi, x, phi, psi)


def match_scheme(scheme: Scheme, f: Formula, lang: Lang) -> bool:
    if scheme.kind is Kind.CPC:
        return cpc_tautology(f)
    if scheme.kind is Kind.BOX_CPC:
        inner = as_necessity(f, lang)
        return inner is not None and cpc_tautology(inner)
    if scheme.kind is Kind.SP:
        return match_sp(f, lang) is not None
    return match_pattern(scheme.pattern, f) is not None


# --------------------------------------------------------------------------
# systems
# --------------------------------------------------------------------------


class SystemId(enum.Enum):
    SCI = "SCI"
    SCI_EXT = "SCI_EXT"
    SCI_PLUS = "SCI_PLUS"
    SCI_3 = "SCI_3"
    S1SP_EQ = "S1SP_EQ"
    S3_EQ = "S3_EQ"
    S4_EQ = "S4_EQ"
    S5_EQ = "S5_EQ"
    S1 = "S1"
    S1SP = "S1SP"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"


@dataclass(frozen=True)
class System:
    id: SystemId
    lang: Lang
    axioms: tuple[Scheme, ...]
    theorems: tuple[Scheme, ...] = ()
    rules: frozenset[str] = frozenset({"mp"})

    def axiom(self, name: str) -> Scheme | None:
        return next((s for s in self.axioms if s.name == name), None)

    def theorem(self, name: str) -> Scheme | None:
        return next((s for s in self.theorems if s.name == name), None)


CPC = Scheme("CPC", Kind.CPC)
SP = Scheme("SP", Kind.SP)
BOX_CPC = Scheme("box_cpc", Kind.BOX_CPC)

_S, _M = Lang.SCI, Lang.MODAL

_ID = (
    _pattern("id1", "?a == ?a", _S),
    _pattern("id2", "(?a == ?b) -> (?a -> ?b)", _S),
    _pattern("id3", "(?a == ?b) -> (~?a == ~?b)", _S),
    _pattern("id4", "((?a == ?b) & (?c == ?d)) -> ((?a | ?c) == (?b | ?d))", _S),
    _pattern("id5", "((?a == ?b) & (?c == ?d)) -> ((?a & ?c) == (?b & ?d))", _S),
    _pattern("id6", "((?a == ?b) & (?c == ?d)) -> ((?a -> ?c) == (?b -> ?d))", _S),
    _pattern("id7", "((?a == ?b) & (?c == ?d)) -> ((?a == ?c) == (?b == ?d))", _S),
)
_FREGE = _pattern("fregean", "(?a <-> ?b) -> (?a == ?b)", _S)
_EQ1 = _pattern("1", "(?a == ?b) <-> [](?a <-> ?b)", _S)
_EQ2 = _pattern("2", "[]?a -> ?a", _S)
_EQ3P = _pattern("3'", "([](?a -> ?b) & [](?b -> ?c)) -> [](?a -> ?c)", _S)
_EQ3 = _pattern("3", "[](?a -> ?b) -> []([]?a -> []?b)", _S)
_EQ4 = _pattern("4", "[]?a -> [][]?a", _S)
_EQ5 = _pattern("5", "~[]?a -> []~[]?a", _S)

_MT = _pattern("T", "[]?a -> ?a", _M)
_MTRANS = _pattern("trans", "([](?a -> ?b) & [](?b -> ?c)) -> [](?a -> ?c)", _M)
_MS3 = _pattern("S3", "[](?a -> ?b) -> []([]?a -> []?b)", _M)
_MS4 = _pattern("S4", "[]?a -> [][]?a", _M)
_MS5 = _pattern("S5", "~[]?a -> []~[]?a", _M)

_MP_AN = frozenset({"mp", "an"})

SYSTEMS: dict[SystemId, System] = {
    SystemId.SCI: System(SystemId.SCI, _S, (CPC,) + _ID),
    SystemId.SCI_EXT: System(SystemId.SCI_EXT, _S, (CPC,) + _ID + (_FREGE,)),
    SystemId.SCI_PLUS: System(SystemId.SCI_PLUS, _S, (CPC,) + _ID + (BOX_CPC, _EQ1)),
    SystemId.SCI_3: System(
        SystemId.SCI_3, _S, (CPC,) + _ID + (BOX_CPC, _EQ1), theorems=(_pattern("3", _EQ3.text, _S),)
    ),
    SystemId.S1SP_EQ: System(SystemId.S1SP_EQ, _S, (CPC, _EQ1, _EQ2, _EQ3P), (SP,), _MP_AN),
    SystemId.S3_EQ: System(SystemId.S3_EQ, _S, (CPC, _EQ1, _EQ2, _EQ3), (), _MP_AN),
    SystemId.S4_EQ: System(SystemId.S4_EQ, _S, (CPC, _EQ1, _EQ2, _EQ3, _EQ4), (), _MP_AN),
    SystemId.S5_EQ: System(SystemId.S5_EQ, _S, (CPC, _EQ1, _EQ2, _EQ3, _EQ4, _EQ5), (), _MP_AN),
    SystemId.S1: System(SystemId.S1, _M, (CPC, _MT, _MTRANS), (), frozenset({"mp", "an", "spse"})),
    SystemId.S1SP: System(SystemId.S1SP, _M, (CPC, _MT, _MTRANS), (SP,), _MP_AN),
    SystemId.S3: System(SystemId.S3, _M, (CPC, _MT, _MTRANS, _MS3), (), _MP_AN),
    SystemId.S4: System(SystemId.S4, _M, (CPC, _MT, _MTRANS, _MS3, _MS4), (), _MP_AN),
    SystemId.S5: System(SystemId.S5, _M, (CPC, _MT, _MTRANS, _MS3, _MS4, _MS5), (), _MP_AN),
}


def system(sid: SystemId | str) -> System:
    return SYSTEMS[SystemId(sid) if isinstance(sid, str) else sid]


def match_axiom(sid: SystemId | str, f: Formula) -> str | None:
    """First axiom scheme of the system that ``f`` instantiates."""
    sys_ = system(sid)
    check_language(f, sys_.lang)
    for scheme in sys_.axioms:
        if match_scheme(scheme, f, sys_.lang):
            return scheme.name
    return None


def match_theorem_scheme(sid: SystemId | str, f: Formula) -> str | None:
    sys_ = system(sid)
    for scheme in sys_.theorems:
        if match_scheme(scheme, f, sys_.lang):
            return scheme.name
    return None


# --------------------------------------------------------------------------
# derivations
# --------------------------------------------------------------------------

RULES = ("hyp", "axiom", "theorem", "sp", "mp", "an", "spse")


@dataclass(frozen=True)
class Justification:
    rule: str
    scheme: str | None = None
    refs: tuple[int, ...] = ()

    def to_json(self) -> dict:
        out: dict = {"rule": self.rule}
        if self.scheme is not None:
            out["scheme"] = self.scheme
        if self.refs:
            out["from"] = list(self.refs)
        return out


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Derivation:
    system: SystemId
    steps: tuple[Step, ...]
    hyps: tuple[Formula, ...] = ()
    name: str = ""

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def with_step(self, k: int, step: Step) -> "Derivation":
        steps = list(self.steps)
        steps[k - 1] = step
        return replace(self, steps=tuple(steps))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(k: int, msg: str) -> CheckResult:
    return CheckResult(False, k, msg)


def check_derivation(
    sid: SystemId | str,
    hyps: Iterable[Formula],
    steps: Iterable[Step],
    conclusion: Formula | None = None,
) -> CheckResult:
    sys_ = system(sid)
    hyps = set(hyps)
    steps = list(steps)
    if not steps:
        return _fail(0, "empty derivation")
    uses_hyp: list[bool] = []
    for k, st in enumerate(steps, start=1):
        f, j = st.formula, st.just
        if not in_language(f, sys_.lang):
            return _fail(k, f"formula is not in the {sys_.lang.value} language")
        for r in j.refs:
            if not 1 <= r < k:
                return _fail(k, f"reference {r} does not precede step {k}")
        if j.rule == "hyp":
            if f not in hyps:
                return _fail(k, "not a hypothesis")
            uses_hyp.append(True)
        elif j.rule == "axiom":
            if j.scheme is None:
                if match_axiom(sys_.id, f) is None:
                    return _fail(k, "matches no axiom scheme")
            else:
                scheme = sys_.axiom(j.scheme)
                if scheme is None:
                    return _fail(k, f"{sys_.id.value} has no axiom scheme {j.scheme!r}")
                if not match_scheme(scheme, f, sys_.lang):
                    return _fail(k, f"bad axiom match for scheme {j.scheme!r}")
            uses_hyp.append(False)
        elif j.rule in ("theorem", "sp"):
            name = "SP" if j.rule == "sp" else j.scheme
            scheme = sys_.theorem(name) if name else None
            if scheme is None:
                return _fail(k, f"{sys_.id.value} has no theorem scheme {name!r}")
            if not match_scheme(scheme, f, sys_.lang):
                return _fail(k, f"bad match for theorem scheme {name!r}")
            uses_hyp.append(False)
        elif j.rule == "mp":
            if "mp" not in sys_.rules:
                return _fail(k, "MP is not a rule of this system")
            if len(j.refs) != 2:
                return _fail(k, "MP needs two references")
            i, jj = j.refs
            if steps[jj - 1].formula != Imp(steps[i - 1].formula, f):
                return _fail(k, f"MP shape mismatch: step {jj} is not step {i} -> this")
            uses_hyp.append(uses_hyp[i - 1] or uses_hyp[jj - 1])
        elif j.rule == "an":
            if "an" not in sys_.rules:
                return _fail(k, "AN is not a rule of this system")
            if len(j.refs) != 1:
                return _fail(k, "AN needs one reference")
            (i,) = j.refs
            if steps[i - 1].just.rule != "axiom":
                return _fail(k, f"AN applied to step {i}, which is not an axiom")
            if f != necessity(steps[i - 1].formula, sys_.lang):
                return _fail(k, f"AN result is not the necessitation of step {i}")
            uses_hyp.append(False)
        elif j.rule == "spse":
            if "spse" not in sys_.rules:
                return _fail(k, f"SPSE is not a rule of {sys_.id.value}")
            if len(j.refs) != 1:
                return _fail(k, "SPSE needs one reference")
            (i,) = j.refs
            if uses_hyp[i - 1]:
                return _fail(k, f"SPSE premise {i} depends on hypotheses")
            premise = as_identity(steps[i - 1].formula, sys_.lang)
            target = as_identity(f, sys_.lang)
            if premise is None or target is None:
                return _fail(k, "SPSE needs identities")
            x = max(max_var(f), max_var(steps[i - 1].formula)) + 1
            if reconstruct_context(target[0], target[1], premise[0], premise[1], x) is None:
                return _fail(k, "SPSE conclusion is not a substitution instance of the premise")
            uses_hyp.append(False)
        else:
            return _fail(k, f"unknown rule {j.rule!r}")
    if conclusion is not None and steps[-1].formula != conclusion:
        return _fail(len(steps), "last step is not the claimed conclusion")
    return CheckResult(True)


def check(d: Derivation, conclusion: Formula | None = None) -> CheckResult:
    return check_derivation(d.system, d.hyps, d.steps, conclusion)


# --------------------------------------------------------------------------
# JSON lines
# --------------------------------------------------------------------------


class DerivationFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def derivation_to_jsonl(d: Derivation) -> str:
    rows = []
    for n, st in enumerate(d.steps, start=1):
        rows.append(json.dumps({"n": n, "formula": to_text(st.formula), "just": st.just.to_json()}))
    return "\n".join(rows) + "\n"


def derivation_from_jsonl(text: str, sid: SystemId | str, hyps: Iterable[Formula] = ()) -> Derivation:
    sys_ = system(sid)
    steps = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as e:
            raise DerivationFormatError(line_no, f"invalid JSON: {e.msg}") from None
        if not isinstance(row, dict) or "formula" not in row or "just" not in row:
            raise DerivationFormatError(line_no, "expected an object with 'formula' and 'just'")
        if row.get("n", len(steps) + 1) != len(steps) + 1:
            raise DerivationFormatError(line_no, f"step number {row.get('n')} out of sequence")
        try:
            f = parse(row["formula"], sys_.lang)
        except (ParseError, LanguageError) as e:
            raise DerivationFormatError(line_no, str(e)) from None
        just = row["just"]
        if not isinstance(just, dict) or just.get("rule") not in RULES:
            raise DerivationFormatError(line_no, f"rule must be one of {', '.join(RULES)}")
        refs = just.get("from", [])
        if not isinstance(refs, list) or not all(isinstance(r, int) and not isinstance(r, bool) for r in refs):
            raise DerivationFormatError(line_no, "'from' must be a list of step numbers")
        steps.append(Step(f, Justification(just["rule"], just.get("scheme"), tuple(refs))))
    if not steps:
        raise DerivationFormatError(0, "no steps")
    return Derivation(SystemId(sys_.id), tuple(steps), tuple(hyps))


# --------------------------------------------------------------------------
# mutations
# --------------------------------------------------------------------------


def mutations(d: Derivation) -> Iterator[tuple[str, Derivation]]:
    """Single-justification corruptions of a derivation."""
    sys_ = system(d.system)
    for k, st in enumerate(d.steps, start=1):
        f, j = st.formula, st.just
        if j.rule != "hyp":
            yield f"step {k}: {j.rule} -> hyp", d.with_step(k, Step(f, Justification("hyp")))
        if j.rule == "axiom":
            for other in sys_.axioms:
                if other.name != j.scheme:
                    yield f"step {k}: scheme {j.scheme} -> {other.name}", d.with_step(
                        k, Step(f, Justification("axiom", other.name))
                    )
        elif j.rule == "mp":
            i, jj = j.refs
            yield f"step {k}: mp swapped", d.with_step(k, Step(f, Justification("mp", None, (jj, i))))
            for r in range(1, k):
                if r != i:
                    yield f"step {k}: mp first ref -> {r}", d.with_step(k, Step(f, Justification("mp", None, (r, jj))))
                if r != jj:
                    yield f"step {k}: mp second ref -> {r}", d.with_step(k, Step(f, Justification("mp", None, (i, r))))
        elif j.rule == "an":
            (i,) = j.refs
            for r in range(1, k):
                if r != i:
                    yield f"step {k}: an ref -> {r}", d.with_step(k, Step(f, Justification("an", None, (r,))))
            yield f"step {k}: an -> axiom", d.with_step(k, Step(f, Justification("axiom")))
        elif j.rule in ("sp", "theorem"):
            yield f"step {k}: {j.rule} -> CPC", d.with_step(k, Step(f, Justification("axiom", "CPC")))
        elif j.rule == "spse":
            (i,) = j.refs
            for r in range(1, k):
                if r != i:
                    yield f"step {k}: spse ref -> {r}", d.with_step(k, Step(f, Justification("spse", None, (r,))))


# --------------------------------------------------------------------------
# building fixture derivations
# --------------------------------------------------------------------------


class Builder:
    """Assembles a derivation while computing MP/AN results."""

    def __init__(self, sid: SystemId):
        self.sys = system(sid)
        self.steps: list[Step] = []
        self.hyps: list[Formula] = []

    def p(self, text: str) -> Formula:
        return parse(text, self.sys.lang)

    def f(self, n: int) -> Formula:
        return self.steps[n - 1].formula

    def _add(self, f: Formula, just: Justification) -> int:
        if any(s.formula == f for s in self.steps):
            raise ValueError(f"duplicate step {to_text(f)}")
        self.steps.append(Step(f, just))
        return len(self.steps)

    def hyp(self, f: Formula | str) -> int:
        f = self.p(f) if isinstance(f, str) else f
        self.hyps.append(f)
        return self._add(f, Justification("hyp"))

    def axiom(self, f: Formula | str, scheme: str) -> int:
        f = self.p(f) if isinstance(f, str) else f
        return self._add(f, Justification("axiom", scheme))

    def theorem(self, f: Formula | str, scheme: str = "SP") -> int:
        f = self.p(f) if isinstance(f, str) else f
        rule = "sp" if scheme == "SP" else "theorem"
        return self._add(f, Justification(rule, None if rule == "sp" else scheme))

    def mp(self, i: int, j: int) -> int:
        imp = self.f(j)
        assert isinstance(imp, Imp) and imp.left == self.f(i), (i, j)
        return self._add(imp.right, Justification("mp", None, (i, j)))

    def an(self, i: int) -> int:
        return self._add(necessity(self.f(i), self.sys.lang), Justification("an", None, (i,)))

    def spse(self, i: int, f: Formula | str) -> int:
        f = self.p(f) if isinstance(f, str) else f
        return self._add(f, Justification("spse", None, (i,)))

    def chain(self, premises: list[int], target: Formula | str) -> int:
        """``p1 -> (p2 -> ... -> target)`` as a CPC axiom, then MP through."""
        target = self.p(target) if isinstance(target, str) else target
        imp = target
        for i in reversed(premises):
            imp = Imp(self.f(i), imp)
        n = self.axiom(imp, "CPC")
        for i in premises:
            n = self.mp(i, n)
        return n

    def boxed_cpc(self, f: Formula | str) -> int:
        """AN applied to a tautology."""
        return self.an(self.axiom(f, "CPC"))

    def build(self, name: str) -> Derivation:
        return Derivation(self.sys.id, tuple(self.steps), tuple(self.hyps), name)


def _imp_parts(f: Formula) -> tuple[Formula, Formula]:
    assert isinstance(f, Imp)
    return f.left, f.right


def _box_k1(b: Builder, taut: Formula | str, s3: str, t: str) -> int:
    """From tautology ``A -> C`` derive ``□A -> □C`` via (S3)-type scheme and T."""
    boxed = b.boxed_cpc(taut)
    a, c = _imp_parts(b.f(boxed - 1))
    lang = b.sys.lang
    ba, bc = necessity(a, lang), necessity(c, lang)
    ax = b.axiom(Imp(b.f(boxed), necessity(Imp(ba, bc), lang)), s3)
    n = b.mp(boxed, ax)
    ax2 = b.axiom(Imp(b.f(n), Imp(ba, bc)), t)
    return b.mp(n, ax2)


def _box_k2(b: Builder, taut: Formula | str, s3: str, t: str) -> int:
    """From tautology ``A -> (B -> C)`` derive ``□A -> (□B -> □C)``."""
    lang = b.sys.lang
    first = _box_k1(b, taut, s3, t)  # □A -> □(B -> C)
    ba, bimp = _imp_parts(b.f(first))
    bb_, cc = _imp_parts(as_necessity(bimp, lang))
    nb, nc = necessity(bb_, lang), necessity(cc, lang)
    x = b.axiom(Imp(bimp, necessity(Imp(nb, nc), lang)), s3)
    y = b.axiom(Imp(necessity(Imp(nb, nc), lang), Imp(nb, nc)), t)
    return b.chain([first, x, y], Imp(ba, Imp(nb, nc)))


def _modal_identity_theorem(b: Builder, a: str, c: str) -> int:
    """``identity(a, c)`` from AN on the tautologies ``a -> c`` and ``c -> a``."""
    one = b.boxed_cpc(f"{a} -> {c}")
    two = b.boxed_cpc(f"{c} -> {a}")
    return b.chain([one, two], And(b.f(one), b.f(two)))


def _extract(b: Builder, ident_step: int, forward: bool) -> int:
    """From ``□(P→Q) ∧ □(Q→P)`` derive ``P→Q`` (or ``Q→P``) with scheme T."""
    conj = b.f(ident_step)
    part = conj.left if forward else conj.right
    n = b.chain([ident_step], part)
    ax = b.axiom(Imp(part, part.sub), "T")
    return b.mp(n, ax)


def _fx_necessity_as_identity() -> Derivation:
    b = Builder(SystemId.S1)
    ident = _modal_identity_theorem(b, "x0", "(T -> x0)")
    boxed = b.spse(ident, "[]x0 == [](T -> x0)")
    fwd = _extract(b, boxed, True)
    bwd = _extract(b, boxed, False)
    e = b.boxed_cpc("x0 -> T")
    b.chain([e, fwd, bwd], "[]x0 <-> ([](x0 -> T) & [](T -> x0))")
    return b.build("necessity_as_identity")


def _sp_box(b: Builder, a: str) -> tuple[int, int]:
    """``□a -> □(T→a)`` and ``□(T→a) -> □a`` in S1SP via SP."""
    ident = _modal_identity_theorem(b, a, f"(T -> {a})")
    sp = b.theorem(Imp(b.f(ident), b.p(f"[]{a} == [](T -> {a})")))
    j = b.mp(ident, sp)
    return _extract(b, j, True), _extract(b, j, False)


def _fx_distribution_k() -> Derivation:
    b = Builder(SystemId.S1SP)
    c0, _ = _sp_box(b, "x0")
    _, d1 = _sp_box(b, "x1")
    tr = b.axiom("([](T -> x0) & [](x0 -> x1)) -> [](T -> x1)", "trans")
    b.chain([c0, d1, tr], "[](x0 -> x1) -> ([]x0 -> []x1)")
    return b.build("distribution_k")


def _fx_box_conjunction() -> Derivation:
    b = Builder(SystemId.S1SP)
    s1, _ = _sp_box(b, "(x0 & x1)")
    _, s2 = _sp_box(b, "x0")
    s3f, s3 = _sp_box(b, "x1")
    s4 = b.boxed_cpc("(x0 & x1) -> x0")
    s5 = b.boxed_cpc("(x0 & x1) -> x1")
    s6 = b.axiom("([](T -> (x0 & x1)) & []((x0 & x1) -> x0)) -> [](T -> x0)", "trans")
    s7 = b.axiom("([](T -> (x0 & x1)) & []((x0 & x1) -> x1)) -> [](T -> x1)", "trans")
    fwd = b.chain([s1, s4, s6, s2, s5, s7, s3], "[](x0 & x1) -> ([]x0 & []x1)")
    s8 = b.boxed_cpc("x1 -> T")
    s9 = b.theorem("(x1 == T) -> ([](x0 & x1) == [](x0 & T))")
    s10 = b.axiom("[]([](x0 & T) -> [](x0 & x1)) -> ([](x0 & T) -> [](x0 & x1))", "T")
    ident = _modal_identity_theorem(b, "x0", "(x0 & T)")
    s11 = b.theorem(Imp(b.f(ident), b.p("[]x0 == [](x0 & T)")))
    j = b.mp(ident, s11)
    s12 = _extract(b, j, True)
    bwd = b.chain([s3f, s8, s9, s10, s12], "([]x0 & []x1) -> [](x0 & x1)")
    b.chain([fwd, bwd], "[](x0 & x1) <-> ([]x0 & []x1)")
    return b.build("box_conjunction")


def _fx_boxed_necessity_identity() -> Derivation:
    # Valid only where f□ is monotone, so this lives in S3.
    b = Builder(SystemId.S3)
    e = "([](x0 -> T) & [](T -> x0))"
    # □(E -> □x0)
    p = b.boxed_cpc("(T -> x0) -> x0")
    s3a = b.axiom(Imp(b.f(p), b.p("[]([](T -> x0) -> []x0)")), "S3")
    pa = b.mp(p, s3a)
    q = b.boxed_cpc(f"{e} -> [](T -> x0)")
    tr = b.axiom(Imp(And(b.f(q), b.f(pa)), b.p(f"[]({e} -> []x0)")), "trans")
    back = b.chain([q, pa, tr], f"[]({e} -> []x0)")
    # □(□x0 -> E)
    r1 = b.boxed_cpc("x0 -> (x0 -> T)")
    r1s = b.mp(r1, b.axiom(Imp(b.f(r1), b.p("[]([]x0 -> [](x0 -> T))")), "S3"))
    r2 = b.boxed_cpc("x0 -> (T -> x0)")
    r2s = b.mp(r2, b.axiom(Imp(b.f(r2), b.p("[]([]x0 -> [](T -> x0))")), "S3"))
    k2 = _box_k2(
        b,
        f"([]x0 -> [](x0 -> T)) -> (([]x0 -> [](T -> x0)) -> ([]x0 -> {e}))",
        "S3",
        "T",
    )
    fwd = b.chain([r1s, r2s, k2], f"[]([]x0 -> {e})")
    b.chain([fwd, back], f"[]x0 == {e}")
    return b.build("boxed_necessity_identity")


def _fx_identity_as_boxed_iff() -> Derivation:
    b = Builder(SystemId.S1SP_EQ)
    one = b.axiom("(x0 == x1) <-> [](x0 <-> x1)", "1")
    boxed = b.an(one)
    inst = b.axiom(
        "((x0 == x1) == [](x0 <-> x1)) <-> []((x0 == x1) <-> [](x0 <-> x1))",
        "1",
    )
    b.chain([inst, boxed], "(x0 == x1) == [](x0 <-> x1)")
    return b.build("identity_as_boxed_iff")


def _fx_id1_in_s1sp_eq() -> Derivation:
    b = Builder(SystemId.S1SP_EQ)
    boxed = b.boxed_cpc("x0 <-> x0")
    one = b.axiom("(x0 == x0) <-> [](x0 <-> x0)", "1")
    b.chain([one, boxed], "x0 == x0")
    return b.build("id1_in_s1sp_eq")


def _fx_id2_in_s1sp_eq() -> Derivation:
    b = Builder(SystemId.S1SP_EQ)
    one = b.axiom("(x0 == x1) <-> [](x0 <-> x1)", "1")
    two = b.axiom("[](x0 <-> x1) -> (x0 <-> x1)", "2")
    b.chain([one, two], "(x0 == x1) -> (x0 -> x1)")
    return b.build("id2_in_s1sp_eq")


def _fx_box_and_elimination() -> Derivation:
    b = Builder(SystemId.S3_EQ)
    left = _box_k1(b, "(x0 & x1) -> x0", "3", "2")
    right = _box_k1(b, "(x0 & x1) -> x1", "3", "2")
    b.chain([left, right], "[](x0 & x1) -> ([]x0 & []x1)")
    return b.build("box_and_elimination")


def _fx_id3_in_s3_eq() -> Derivation:
    b = Builder(SystemId.S3_EQ)
    k = _box_k1(b, "(x0 <-> x1) -> (~x0 <-> ~x1)", "3", "2")
    a = b.axiom("(x0 == x1) <-> [](x0 <-> x1)", "1")
    c = b.axiom("(~x0 == ~x1) <-> [](~x0 <-> ~x1)", "1")
    b.chain([a, c, k], "(x0 == x1) -> (~x0 == ~x1)")
    return b.build("id3_in_s3_eq")


def _fx_id4_in_s3_eq() -> Derivation:
    b = Builder(SystemId.S3_EQ)
    k = _box_k2(b, "(x0 <-> x1) -> ((x2 <-> x3) -> ((x0 | x2) <-> (x1 | x3)))", "3", "2")
    a = b.axiom("(x0 == x1) <-> [](x0 <-> x1)", "1")
    c = b.axiom("(x2 == x3) <-> [](x2 <-> x3)", "1")
    d = b.axiom("((x0 | x2) == (x1 | x3)) <-> []((x0 | x2) <-> (x1 | x3))", "1")
    b.chain([a, c, d, k], "((x0 == x1) & (x2 == x3)) -> ((x0 | x2) == (x1 | x3))")
    return b.build("id4_in_s3_eq")


def _fx_strict_transitivity_in_s3_eq() -> Derivation:
    b = Builder(SystemId.S3_EQ)
    k = _box_k2(b, "(x0 -> x1) -> ((x1 -> x2) -> (x0 -> x2))", "3", "2")
    b.chain([k], "([](x0 -> x1) & [](x1 -> x2)) -> [](x0 -> x2)")
    return b.build("strict_transitivity_in_s3_eq")


def _fx_sci_id2_mp() -> Derivation:
    b = Builder(SystemId.SCI)
    h = b.hyp("x0 == x1")
    b.mp(h, b.axiom("(x0 == x1) -> (x0 -> x1)", "id2"))
    return b.build("sci_id2_mp")


_FIXTURES = {
    "necessity_as_identity": _fx_necessity_as_identity,
    "distribution_k": _fx_distribution_k,
    "box_conjunction": _fx_box_conjunction,
    "boxed_necessity_identity": _fx_boxed_necessity_identity,
    "identity_as_boxed_iff": _fx_identity_as_boxed_iff,
    "id1_in_s1sp_eq": _fx_id1_in_s1sp_eq,
    "id2_in_s1sp_eq": _fx_id2_in_s1sp_eq,
    "box_and_elimination": _fx_box_and_elimination,
    "id3_in_s3_eq": _fx_id3_in_s3_eq,
    "id4_in_s3_eq": _fx_id4_in_s3_eq,
    "strict_transitivity_in_s3_eq": _fx_strict_transitivity_in_s3_eq,
    "sci_id2_mp": _fx_sci_id2_mp,
}


def fixture_derivations() -> dict[str, Derivation]:
    return {name: make() for name, make in _FIXTURES.items()}


# verbatim re-checking in larger systems
EXTENSIONS: dict[SystemId, tuple[SystemId, ...]] = {
    SystemId.SCI: (SystemId.SCI_EXT, SystemId.SCI_PLUS, SystemId.SCI_3),
    SystemId.SCI_PLUS: (SystemId.SCI_3,),
    SystemId.S3_EQ: (SystemId.S4_EQ, SystemId.S5_EQ),
    SystemId.S4_EQ: (SystemId.S5_EQ,),
    SystemId.S1SP: (),
    SystemId.S3: (SystemId.S4, SystemId.S5),
    SystemId.S4: (SystemId.S5,),
}


# --------------------------------------------------------------------------
# scheme instances
# --------------------------------------------------------------------------

INSTANCE_POOL = ("x0", "x1", "T", "F")
INSTANCE_SAMPLE = 64


def fill(pattern: Formula, binding: dict[str, Formula]) -> Formula:
    """Replace every metavariable of ``pattern`` by its binding."""
    if isinstance(pattern, Meta):
        return binding[pattern.name]
    kids = children(pattern)
    if not kids:
        return pattern
    return rebuild(pattern, tuple(fill(k, binding) for k in kids))


def _metas(f: Formula) -> list[str]:
    out: list[str] = []
    for k in children(f) if not isinstance(f, Meta) else ():
        out += [m for m in _metas(k) if m not in out]
    if isinstance(f, Meta):
        out.append(f.name)
    return out


def _tautologies(lang: Lang, max_height: int) -> list[Formula]:
    return [f for f in enumerate_formulas(max_height, (0, 1), lang) if cpc_tautology(f)]


def scheme_instances(
    scheme: Scheme,
    lang: Lang,
    seed: int = 0,
    sample: int = INSTANCE_SAMPLE,
) -> list[Formula]:
    """Instances built from the small pool ``x0, x1, T, F``.

    Patterns with at most two metavariables are instantiated exhaustively;
    larger patterns, CPC, boxed CPC and SP get a seeded sample.
    """
    rng = random.Random(f"{scheme.name}:{seed}")
    pool = [parse(t, lang) for t in INSTANCE_POOL]
    if scheme.kind is Kind.PATTERN:
        metas = _metas(scheme.pattern)
        combos = list(itertools.product(pool, repeat=len(metas)))
        if len(metas) > 2:
            combos = rng.sample(combos, min(sample, len(combos)))
        return [fill(scheme.pattern, dict(zip(metas, c))) for c in combos]
    if scheme.kind in (Kind.CPC, Kind.BOX_CPC):
        tauts = _tautologies(lang, 3)
        picked = rng.sample(tauts, min(sample, len(tauts)))
        return picked if scheme.kind is Kind.CPC else [necessity(t, lang) for t in picked]
    # SP: (a == b) -> (chi[x2:=a] == chi[x2:=b]) with chi over x0, x2
    contexts = [c for c in enumerate_formulas(2, (0, 2), lang) if 2 in variables(c)]
    out = []
    for _ in range(sample):
        a, b, chi = rng.choice(pool), rng.choice(pool), rng.choice(contexts)
        out.append(Imp(identity(a, b, lang), identity(substitute(chi, 2, a), substitute(chi, 2, b), lang)))
    return out


def system_instances(sid: SystemId | str, seed: int = 0) -> dict[str, list[Formula]]:
    """Instances of every axiom and theorem scheme of a system, by scheme name."""
    sys_ = system(sid)
    return {s.name: scheme_instances(s, sys_.lang, seed) for s in sys_.axioms + sys_.theorems}
