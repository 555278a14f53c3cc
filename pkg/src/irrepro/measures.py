"""Graded-relevance measures at a document cutoff.

All four measures take the ranked doc ids of one topic, that topic's judgments
(doc -> level; unjudged docs count as L0), a :class:`GainMap` and a
:class:`MeasureConfig`. Definitions::

    nDCG@k  = sum_{r<=k} g(r)/log2(r+1)  /  same sum over the ideal list
    Q@k     = 1/min(R,k) * sum_{r<=k} I(g(r)>0) * (C(r) + cg(r)) / (r + cg*(r))
    nERR@k  = ERR@k / ERR*@k,  ERR@k = sum_{r<=k} (1/r) p(r) prod_{i<r} (1 - p(i)),  p = g/g_max
    iRBU@k  = 1/k * sum_{r<=k} phi^(r-1) * I(level(r) > 0)

R is the number of docs with positive gain, C(r) the relevant count in the top r,
cg/cg* the cumulative gain of the run/ideal list, g_max the largest gain of the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import NoRelevantDocuments, PreconditionError
from .trecio import Qrels, Run, ScoreMatrix

__all__ = [
    "MEASURES",
    "GainMap",
    "MeasureConfig",
    "irbu",
    "irbu_max",
    "ndcg",
    "nerr",
    "qmeasure",
    "score_matrix",
]


@dataclass(frozen=True)
class GainMap:
    """Gain per relevance level; ``gains[L]`` is the gain of level L."""

    gains: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gains)
        object.__setattr__(self, "gains", g)
        if not g or g[0] != 0.0:
            raise PreconditionError("gain of L0 must be 0")
        if any(b < a for a, b in zip(g, g[1:])):
            raise PreconditionError("gains must be non-decreasing in level")
        if g[-1] <= 0:
            raise PreconditionError("at least one level must have positive gain")

    @classmethod
    def linear(cls, max_level: int) -> "GainMap":
        """gain(L) = L for L in 0..max_level."""
        return cls(tuple(range(max_level + 1)))

    @property
    def g_max(self) -> float:
        return self.gains[-1]

    def __call__(self, level: int) -> float:
        if not 0 <= level < len(self.gains):
            raise PreconditionError(f"level {level} outside gain map 0..{len(self.gains) - 1}")
        return self.gains[level]


@dataclass(frozen=True)
class MeasureConfig:
    cutoff: int = 10
    persistence: float = 0.99

    def __post_init__(self):
        if self.cutoff < 1:
            raise PreconditionError(f"cutoff must be >= 1, got {self.cutoff}")
        if not 0.0 < self.persistence < 1.0:
            raise PreconditionError(f"persistence must lie in (0, 1), got {self.persistence}")


def _run_gains(ranked: Sequence[str], judged: Mapping[str, int], gains: GainMap, k: int) -> list[float]:
    return [gains(judged.get(d, 0)) for d in ranked[:k]]


def _ideal_gains(judged: Mapping[str, int], gains: GainMap) -> list[float]:
    ideal = sorted((gains(level) for level in judged.values()), reverse=True)
    ideal = [g for g in ideal if g > 0]
    if not ideal:
        raise NoRelevantDocuments("topic has no document with positive gain")
    return ideal


def ndcg(ranked: Sequence[str], judged: Mapping[str, int], gains: GainMap, k: int = 10) -> float:
    ideal = _ideal_gains(judged, gains)[:k]
    dcg = sum(g / math.log2(r + 1) for r, g in enumerate(_run_gains(ranked, judged, gains, k), start=1))
    idcg = sum(g / math.log2(r + 1) for r, g in enumerate(ideal, start=1))
    return dcg / idcg


def qmeasure(ranked: Sequence[str], judged: Mapping[str, int], gains: GainMap, k: int = 10,
             beta: float = 1.0) -> float:
    ideal = _ideal_gains(judged, gains)
    total = 0.0
    hits = 0
    cg = 0.0
    cg_ideal = 0.0
    for r, g in enumerate(_run_gains(ranked, judged, gains, k), start=1):
        if r <= len(ideal):
            cg_ideal += ideal[r - 1]
        cg += g
        if g > 0:
            hits += 1
            total += (hits + beta * cg) / (r + beta * cg_ideal)
    return total / min(len(ideal), k)


def _err(gain_list: Iterable[float], g_max: float) -> float:
    value = 0.0
    not_stopped = 1.0
    for r, g in enumerate(gain_list, start=1):
        p = g / g_max
        value += not_stopped * p / r
        not_stopped *= 1.0 - p
    return value


def nerr(ranked: Sequence[str], judged: Mapping[str, int], gains: GainMap, k: int = 10) -> float:
    ideal = _ideal_gains(judged, gains)[:k]
    return _err(_run_gains(ranked, judged, gains, k), gains.g_max) / _err(ideal, gains.g_max)


def irbu(ranked: Sequence[str], judged: Mapping[str, int], k: int = 10, persistence: float = 0.99) -> float:
    if not any(level > 0 for level in judged.values()):
        raise NoRelevantDocuments("topic has no relevant document")
    return sum(persistence ** (r - 1) for r, d in enumerate(ranked[:k], start=1) if judged.get(d, 0) > 0) / k


def irbu_max(k: int, persistence: float = 0.99, n_relevant: int | None = None) -> float:
    """Largest attainable iRBU@k: every rank up to min(R, k) relevant."""
    depth = k if n_relevant is None else min(k, n_relevant)
    return sum(persistence ** (r - 1) for r in range(1, depth + 1)) / k


MeasureFn = Callable[[Sequence[str], Mapping[str, int], GainMap, MeasureConfig], float]

MEASURES: dict[str, MeasureFn] = {
    "ndcg": lambda ranked, judged, gains, cfg: ndcg(ranked, judged, gains, cfg.cutoff),
    "q": lambda ranked, judged, gains, cfg: qmeasure(ranked, judged, gains, cfg.cutoff),
    "nerr": lambda ranked, judged, gains, cfg: nerr(ranked, judged, gains, cfg.cutoff),
    "irbu": lambda ranked, judged, gains, cfg: irbu(ranked, judged, cfg.cutoff, cfg.persistence),
}

DISPLAY_NAMES = {"ndcg": "nDCG", "q": "Q", "nerr": "nERR", "irbu": "iRBU"}


def get_measure(name: str) -> MeasureFn:
    try:
        return MEASURES[name.lower()]
    except KeyError:
        raise PreconditionError(f"unknown measure {name!r}; choose from {', '.join(MEASURES)}") from None


def score_matrix(
    runs: Sequence[Run],
    qrels: Qrels,
    measure: str | MeasureFn = "ndcg",
    config: MeasureConfig = MeasureConfig(),
    gains: GainMap | None = None,
    topics: Sequence[str] | None = None,
) -> ScoreMatrix:
    """Score every run on every qrels topic. A run that skips a topic scores 0 there.

    Topics without any relevant document raise :class:`NoRelevantDocuments`.
    """
    if not runs:
        raise PreconditionError("empty run set")
    fn = get_measure(measure) if isinstance(measure, str) else measure
    gains = GainMap.linear(qrels.max_level) if gains is None else gains
    topics = qrels.topics if topics is None else list(topics)
    cells = np.empty((len(topics), len(runs)))
    for i, topic in enumerate(topics):
        judged = qrels.for_topic(topic)
        if not any(level > 0 for level in judged.values()):
            raise NoRelevantDocuments(f"topic {topic} has no relevant document")
        for j, run in enumerate(runs):
            cells[i, j] = fn(run.docs(topic), judged, gains, config)
    return ScoreMatrix(tuple(topics), tuple(r.run_id for r in runs), cells)
