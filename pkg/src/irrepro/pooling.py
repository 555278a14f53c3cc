"""Depth-k pooling and the join of rank-keyed assessor labels back to documents.

Two pool orderings are supported. PRI puts documents retrieved by many runs near the
top (run count descending, rank sum ascending, doc id ascending). RND is a Fisher-Yates
shuffle driven by numpy's PCG64 generator, seeded from ``PoolSpec.seed``.

:func:`join_assessments` has a ``BY_RANK_BUGGY`` mode that resolves each pool rank
against a *different* ordering of the same pool. It reproduces the failure where an
assessment backend assumed (topic, rank) identifies a document while two orderings of
each pool were in use.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .trecio import AssessmentSet, Ordering, PoolFile, Run

__all__ = [
    "JoinMode",
    "PoolSpec",
    "build_pool",
    "divergent_docs",
    "fisher_yates",
    "join_assessments",
    "pri_key",
]


class JoinMode(str, Enum):
    BY_DOCID = "BY_DOCID"
    BY_RANK_BUGGY = "BY_RANK_BUGGY"


@dataclass(frozen=True)
class PoolSpec:
    depth: int
    ordering: Ordering = Ordering.PRI
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        if self.depth < 1:
            raise PreconditionError(f"pool depth must be >= 1, got {self.depth}")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")


def pri_key(doc_id: str, run_count: int, rank_sum: int) -> tuple:
    """Sort key for prioritised pools; swap this out to mimic a different pooling script."""
    return (-run_count, rank_sum, doc_id)


def fisher_yates(items: Sequence[str], seed: int) -> list[str]:
    """In-place style Fisher-Yates shuffle using ``numpy.random.Generator(PCG64(seed))``.

    For i = n-1 down to 1, swap position i with j drawn uniformly from 0..i.
    """
    out = list(items)
    rng = np.random.Generator(np.random.PCG64(seed))
    for i in range(len(out) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def build_pool(runs: Iterable[Run], topic: str, spec: PoolSpec) -> PoolFile:
    counts: dict[str, int] = {}
    rank_sums: dict[str, int] = {}
    seen_topic = False
    for run in runs:
        if topic not in run.rankings:
            continue
        seen_topic = True
        for d in run.rankings[topic][: spec.depth]:
            counts[d.doc_id] = counts.get(d.doc_id, 0) + 1
            rank_sums[d.doc_id] = rank_sums.get(d.doc_id, 0) + d.rank
    if not seen_topic:
        raise PreconditionError(f"topic {topic} is absent from every run")

    if spec.ordering is Ordering.PRI:
        docs = sorted(counts, key=lambda d: pri_key(d, counts[d], rank_sums[d]))
        return PoolFile.from_docs(topic, Ordering.PRI, docs)
    return PoolFile.from_docs(topic, Ordering.RND, fisher_yates(sorted(counts), spec.seed), seed=spec.seed)


def join_assessments(
    pool: PoolFile,
    raw: Sequence[tuple[int, int]],
    mode: JoinMode | str = JoinMode.BY_DOCID,
    reference_pool: PoolFile | None = None,
    assessor_id: str = "assessor",
) -> AssessmentSet:
    """Attach rank-keyed labels collected on ``pool`` to document ids.

    ``BY_DOCID`` resolves ranks against ``pool`` itself. ``BY_RANK_BUGGY`` resolves them
    against ``reference_pool``, the ordering the backend wrongly assumed.
    """
    mode = JoinMode(mode)
    ranks = sorted(r for r, _ in raw)
    if len(set(ranks)) != len(ranks):
        raise PreconditionError("duplicate pool rank in raw labels")
    for r in ranks:
        if not 1 <= r <= len(pool):
            raise PreconditionError(f"pool rank {r} out of range 1..{len(pool)}")
    if len(ranks) != len(pool):
        raise PreconditionError(f"raw labels cover {len(ranks)} of {len(pool)} pool ranks")

    if mode is JoinMode.BY_DOCID:
        resolver = pool
    else:
        if reference_pool is None:
            raise PreconditionError("BY_RANK_BUGGY needs a reference pool")
        resolver = reference_pool
    if reference_pool is not None:
        if reference_pool.topic_id != pool.topic_id:
            raise PreconditionError("reference pool is for a different topic")
        if set(reference_pool.doc_ids) != set(pool.doc_ids):
            raise PreconditionError("pool and reference pool contain different documents")

    docs = resolver.doc_ids
    labels = {(pool.topic_id, docs[r - 1]): level for r, level in raw}
    return AssessmentSet(assessor_id, labels)


def divergent_docs(pool: PoolFile, reference_pool: PoolFile, raw: Sequence[tuple[int, int]]) -> list[str]:
    """Documents whose label differs between the correct and the rank-keyed join, sorted."""
    good = join_assessments(pool, raw, JoinMode.BY_DOCID, reference_pool)
    bad = join_assessments(pool, raw, JoinMode.BY_RANK_BUGGY, reference_pool)
    return sorted(doc for (_, doc), level in good.labels.items() if bad.labels[(pool.topic_id, doc)] != level)
