"""Merge several assessors' 3-point labels into one graded qrels file."""

from __future__ import annotations

from enum import Enum
from typing import Callable, Sequence

from .errors import PreconditionError
from .trecio import AssessmentSet, Qrels

__all__ = ["Variant", "fuse_log", "fuse_sum", "log_level", "make_variant"]


class Variant(str, Enum):
    GOOD_PLUS_NOISE = "GOOD_PLUS_NOISE"
    GOOD_PLUS_CORRECTED = "GOOD_PLUS_CORRECTED"
    GOOD_PLUS_NULL = "GOOD_PLUS_NULL"


def _sums(sets: Sequence[AssessmentSet]) -> dict[tuple[str, str], int]:
    if not sets:
        raise PreconditionError("need at least one assessment set")
    universe = set(sets[0].labels)
    for s in sets[1:]:
        if set(s.labels) != universe:
            missing = sorted(universe.symmetric_difference(s.labels))[:3]
            raise PreconditionError(
                f"assessor {s.assessor_id} does not cover the same (topic, doc) pairs, e.g. {missing}")
    return {key: sum(s.labels[key] for s in sets) for key in universe}


def _to_qrels(levels: dict[tuple[str, str], int], max_level: int) -> Qrels:
    labels: dict[str, dict[str, int]] = {}
    for (topic, doc), level in sorted(levels.items()):
        labels.setdefault(topic, {})[doc] = level
    return Qrels(labels, max_level)


def log_level(total: int) -> int:
    """floor(log2(total + 1)), computed exactly on integers."""
    if total < 0:
        raise PreconditionError("label sum must be non-negative")
    return (total + 1).bit_length() - 1


def fuse_sum(sets: Sequence[AssessmentSet]) -> Qrels:
    """Level = sum of the raw labels. All-zero documents stay in the qrels as L0."""
    sums = _sums(sets)
    return _to_qrels(sums, sum(s.max_level for s in sets))


def fuse_log(sets: Sequence[AssessmentSet]) -> Qrels:
    """Level = floor(log2(S + 1)) where S is the sum of the raw labels.

    With eight 0..2 assessors S is in 0..16 and levels are L0-L4; with four, L0-L3.
    """
    sums = _sums(sets)
    return _to_qrels({k: log_level(v) for k, v in sums.items()},
                     log_level(sum(s.max_level for s in sets)))


def make_variant(
    good: Sequence[AssessmentSet],
    noisy: Sequence[AssessmentSet],
    corrected: Sequence[AssessmentSet],
    variant: Variant | str,
    fuse: Callable[[Sequence[AssessmentSet]], Qrels] = fuse_sum,
) -> Qrels:
    """Build one of the three qrels variants used to measure the impact of noisy labels.

    ``good`` holds the unaffected assessments, ``noisy`` the bug-affected ones as
    originally recorded and ``corrected`` their repaired versions. GOOD_PLUS_NULL drops
    the affected assessments altogether, so its scale shrinks accordingly.
    """
    variant = Variant(variant)
    if not good:
        raise PreconditionError("the good fragment is empty")
    good_ids = {id(s) for s in good} | {s.assessor_id for s in good}
    for s in (*noisy, *corrected):
        if id(s) in good_ids or s.assessor_id in good_ids:
            raise PreconditionError(f"assessment {s.assessor_id!r} appears in both good and affected fragments")
    if variant is Variant.GOOD_PLUS_NOISE:
        return fuse([*good, *noisy])
    if variant is Variant.GOOD_PLUS_CORRECTED:
        return fuse([*good, *corrected])
    return fuse(list(good))
