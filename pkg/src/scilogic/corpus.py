"""Deterministic test corpus of finite structures, grouped by class, and the
semantic class matching each deductive system."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    ClassId,
    FiniteStructure,
    chain_lattice,
    enumerate_expansions,
    heyting_to_prealgebra,
    is_boolean_algebra,
    necessitation_counterexample,
    powerset_algebra,
    prealgebra_from_filter,
    enumerate_ultrafilters,
    sample_expansions,
    sci_from_modal,
    two_class_bases,
    two_class_sci_models,
    with_ultrafilters,
)
from .canonical import extensional_model
from .proof import SystemId


@dataclass(frozen=True)
class CorpusConfig:
    modal_sizes: tuple[int, ...] = (2, 4, 8)
    sci_full_sizes: tuple[int, ...] = (2,)
    sci_sample_size: int = 4
    sci_samples: int = 24
    two_class_samples: int = 6
    seed: int = 0


DEFAULT = CorpusConfig()


def _dedup(items) -> list[FiniteStructure]:
    seen, out = set(), []
    for s in items:
        if s.key() not in seen:
            seen.add(s.key())
            out.append(s)
    return out


@lru_cache(maxsize=None)
def modal_corpus(cls: ClassId, config: CorpusConfig = DEFAULT) -> tuple[FiniteStructure, ...]:
    """Full enumeration at every configured size, each with a TRUE set."""
    out = []
    for size in config.modal_sizes:
        for s in enumerate_expansions(size, cls):
            out.extend(with_ultrafilters(s))
    return tuple(_dedup(out))


@lru_cache(maxsize=None)
def sci_corpus(cls: ClassId = ClassId.SCI_MODEL, config: CorpusConfig = DEFAULT) -> tuple[FiniteStructure, ...]:
    out: list[FiniteStructure] = [extensional_model()]
    for size in config.sci_full_sizes:
        out.extend(enumerate_expansions(size, cls))
    out.extend(sample_expansions(config.sci_sample_size, cls, config.sci_samples, config.seed))
    if cls is ClassId.SCI_MODEL:
        out.append(necessitation_counterexample())
        out.extend(itertools.islice(_spread(two_class_sci_models(3)), config.two_class_samples))
    return tuple(_dedup(out))


def _spread(stream, stride: int = 9973):
    """Every ``stride``-th item, so samples are not all lexicographic neighbours."""
    for i, s in enumerate(stream):
        if i % stride == 0:
            yield s


def boolean_sci_corpus(config: CorpusConfig = DEFAULT) -> tuple[FiniteStructure, ...]:
    return tuple(s for s in sci_corpus(ClassId.SCI_MODEL, config) if is_boolean_algebra(s))


@lru_cache(maxsize=None)
def prealgebra_corpus(config: CorpusConfig = DEFAULT) -> tuple[FiniteStructure, ...]:
    out = []
    for k in (1, 2, 3):
        base = powerset_algebra(k)
        out.append(base)
        for U in enumerate_ultrafilters(base):
            out.append(prealgebra_from_filter(base.with_(true_set=U)))
    out.append(heyting_to_prealgebra(chain_lattice(3), {1, 2}))
    out.append(heyting_to_prealgebra(chain_lattice(4), {1, 2, 3}))
    for n in (3, 4):
        for false_count in range(1, n):
            out.extend(itertools.islice(_spread(two_class_bases(n, false_count)), 2))
    return tuple(_dedup(out))


# semantic class per deductive system
_MODAL_CLASS = {
    SystemId.S1: ClassId.S1SP_ALGEBRA,
    SystemId.S1SP: ClassId.S1SP_ALGEBRA,
    SystemId.S3: ClassId.S3_ALGEBRA,
    SystemId.S4: ClassId.STRONG_S4_ALGEBRA,
    SystemId.S5: ClassId.S5_ALGEBRA,
    SystemId.S1SP_EQ: ClassId.S1SP_ALGEBRA,
    SystemId.S3_EQ: ClassId.S3_ALGEBRA,
    SystemId.S4_EQ: ClassId.STRONG_S4_ALGEBRA,
    SystemId.S5_EQ: ClassId.S5_ALGEBRA,
}


def system_models(sid: SystemId, config: CorpusConfig = DEFAULT) -> tuple[FiniteStructure, ...]:
    """Corpus models of the class each system is sound for."""
    if sid is SystemId.SCI:
        return sci_corpus(ClassId.SCI_MODEL, config)
    if sid is SystemId.SCI_EXT:
        return (extensional_model(),)
    if sid is SystemId.SCI_PLUS:
        return boolean_sci_corpus(config)
    if sid is SystemId.SCI_3:
        return sci_corpus(ClassId.SCI3_MODEL, config)
    algebras = modal_corpus(_MODAL_CLASS[sid], config)
    if sid.value.endswith("_EQ"):
        return tuple(sci_from_modal(s) for s in algebras)
    return algebras
