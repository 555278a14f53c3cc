"""Significance tests, rank correlation and inter-assessor agreement."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

from .errors import PreconditionError
from .trecio import AssessmentSet, ScoreMatrix

__all__ = [
    "TauResult",
    "TukeyResult",
    "kendall_tau",
    "mean_per_topic_kappa",
    "paired_ttest",
    "per_topic_kappa",
    "randomized_tukey_hsd",
    "residual_variance",
    "tau_b",
    "unpaired_ttest",
    "weighted_kappa",
]

# Trial statistics within this distance of an observed difference count as ties.
TIE_TOLERANCE = 1e-10
# Trials per random stream; part of the determinism contract, do not change per call.
TRIAL_BLOCK = 1000


def residual_variance(m: ScoreMatrix) -> float:
    """Residual variance of a two-way ANOVA without replication (topics x systems)."""
    x = m.cells
    n, k = x.shape
    if n < 2 or k < 2:
        raise PreconditionError(f"need at least 2 topics and 2 systems, got {n}x{k}")
    resid = x - x.mean(axis=1, keepdims=True) - x.mean(axis=0, keepdims=True) + x.mean()
    return float((resid ** 2).sum() / ((n - 1) * (k - 1)))


@dataclass(frozen=True)
class TukeyResult:
    systems: tuple[str, ...]
    means: np.ndarray
    p_values: np.ndarray
    mean_diffs: np.ndarray  # mean_i - mean_j
    residual_variance: float
    effect_sizes: np.ndarray
    trials: int
    seed: int

    def significant_pairs(self, alpha: float = 0.05) -> list[tuple[str, str]]:
        """(better, worse) pairs with p < alpha, better runs by descending mean."""
        order = sorted(range(len(self.systems)), key=lambda i: (-self.means[i], self.systems[i]))
        pairs = []
        for i in order:
            for j in order:
                if self.means[i] > self.means[j] and self.p_values[i, j] < alpha:
                    pairs.append((self.systems[i], self.systems[j]))
        return pairs


def _trial_block(canonical: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    n, k = canonical.shape
    perm = np.argsort(rng.random((size, n, k)), axis=2)
    shuffled = np.take_along_axis(np.broadcast_to(canonical, (size, n, k)), perm, axis=2)
    means = shuffled.mean(axis=1)
    return means.max(axis=1) - means.min(axis=1)


def randomized_tukey_hsd(m: ScoreMatrix, trials: int = 10_000, seed: int = 0, workers: int = 1) -> TukeyResult:
    """Randomised Tukey HSD: permute system scores within each topic, record max - min of the
    system means per trial, and report the fraction of trials at least as extreme as each
    observed pairwise difference.

    Trial block b draws from ``SeedSequence(seed, spawn_key=(b,))`` so the result does not
    depend on ``workers``. Rows are sorted before permuting, which makes p-values independent
    of the column order of ``m``.
    """
    if trials < 1:
        raise PreconditionError("number of trials must be positive")
    if len(m.systems) < 2:
        raise PreconditionError("need at least 2 systems")
    canonical = np.sort(m.cells, axis=1)
    means = m.means()
    diffs = means[:, None] - means[None, :]

    blocks = [(b, min(TRIAL_BLOCK, trials - b * TRIAL_BLOCK)) for b in range(-(-trials // TRIAL_BLOCK))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda bs: _trial_block(canonical, seed, *bs), blocks))
    else:
        parts = [_trial_block(canonical, seed, b, s) for b, s in blocks]
    stat = np.sort(np.concatenate(parts))

    exceed = trials - np.searchsorted(stat, np.abs(diffs) - TIE_TOLERANCE, side="left")
    p = exceed / trials
    np.fill_diagonal(p, 1.0)

    v = residual_variance(m) if len(m.topics) >= 2 else float("nan")
    with np.errstate(divide="ignore", invalid="ignore"):
        es = np.where(np.abs(diffs) > 0, np.abs(diffs) / np.sqrt(v), 0.0)
    return TukeyResult(m.systems, means, p, diffs, v, es, trials, seed)


def _equal_within(values: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.ptp(values) <= atol)


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-tailed paired Student t-test.

    If the differences have zero variance, p is 1 when they are all zero and 0 otherwise.
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    if a.shape != b.shape or a.ndim != 1:
        raise PreconditionError("paired samples must be 1-d and of equal length")
    if len(a) < 2:
        raise PreconditionError("need at least 2 pairs")
    d = a - b
    if _equal_within(d):
        return 1.0 if abs(d.mean()) <= 1e-12 else 0.0
    return float(sps.ttest_rel(a, b).pvalue)


def unpaired_ttest(a: Sequence[float], b: Sequence[float], welch: bool = False) -> float:
    """Two-tailed two-sample t-test, pooled variance unless ``welch``.

    Two zero-variance samples give p = 1 for equal means and 0 otherwise.
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    if len(a) < 2 or len(b) < 2:
        raise PreconditionError("each sample needs at least 2 values")
    if _equal_within(a) and _equal_within(b):
        return 1.0 if abs(a.mean() - b.mean()) <= 1e-12 else 0.0
    return float(sps.ttest_ind(a, b, equal_var=not welch).pvalue)


def tau_b(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall's tau-b with tie correction."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.shape != y.shape or x.ndim != 1:
        raise PreconditionError("tau needs two paired 1-d sequences")
    if len(x) < 2:
        raise PreconditionError("tau needs at least 2 items")
    iu = np.triu_indices(len(x), 1)
    sx = np.sign(x[:, None] - x[None, :])[iu]
    sy = np.sign(y[:, None] - y[None, :])[iu]
    den = np.sqrt(np.sum(sx * sx) * np.sum(sy * sy))
    if den == 0:
        raise PreconditionError("tau is undefined when one ranking is entirely tied")
    return float(np.sum(sx * sy) / den)


def _bootstrap_taus(x: np.ndarray, y: np.ndarray, resamples: int, seed: int, chunk: int = 500) -> np.ndarray:
    rng = np.random.default_rng(seed)
    n = len(x)
    idx = rng.integers(0, n, size=(resamples, n))
    out = []
    for start in range(0, resamples, chunk):
        xi, yi = x[idx[start:start + chunk]], y[idx[start:start + chunk]]
        sx = np.sign(xi[:, :, None] - xi[:, None, :])
        sy = np.sign(yi[:, :, None] - yi[:, None, :])
        num = (sx * sy).sum(axis=(1, 2))
        den = np.sqrt((sx * sx).sum(axis=(1, 2)) * (sy * sy).sum(axis=(1, 2)))
        with np.errstate(invalid="ignore", divide="ignore"):
            out.append(num / den)
    taus = np.concatenate(out)
    return taus[np.isfinite(taus)]


def fisher_interval(tau: float, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Fisher z interval for Kendall's tau with the 0.437 / (n - 4) variance approximation."""
    if n <= 4:
        return -1.0, 1.0
    if abs(tau) >= 1.0:
        return tau, tau
    half = sps.norm.ppf(0.5 + confidence / 2) * np.sqrt(0.437 / (n - 4))
    z = np.arctanh(tau)
    return float(np.tanh(z - half)), float(np.tanh(z + half))


@dataclass(frozen=True)
class TauResult:
    tau: float
    ci_low: float
    ci_high: float
    method: str
    resamples: int | None = None


def kendall_tau(
    x: Sequence[float],
    y: Sequence[float],
    ci: str = "fisher",
    resamples: int = 10_000,
    seed: int = 0,
    confidence: float = 0.95,
) -> TauResult:
    """tau-b between two paired score lists with a confidence interval.

    ``ci="fisher"`` uses tanh(atanh(tau) +- z * sqrt(0.437 / (n - 4))); with n <= 4 the
    interval is [-1, 1]. ``ci="bootstrap"`` resamples items with replacement and takes
    percentiles, widened if needed so it contains tau.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    tau = tau_b(x, y)
    n = len(x)
    alpha = 1.0 - confidence
    if ci == "fisher":
        return TauResult(tau, *fisher_interval(tau, n, confidence), ci)
    if ci == "bootstrap":
        if resamples < 1:
            raise PreconditionError("resamples must be positive")
        taus = _bootstrap_taus(x, y, resamples, seed)
        if len(taus) == 0:
            return TauResult(tau, tau, tau, ci, resamples)
        lo, hi = np.percentile(taus, [100 * alpha / 2, 100 * (1 - alpha / 2)])
        return TauResult(tau, float(min(lo, tau)), float(max(hi, tau)), ci, resamples)
    raise PreconditionError(f"unknown CI method {ci!r}")


def weighted_kappa(a: Sequence[int], b: Sequence[int], categories: int = 3) -> float:
    """Quadratic weighted Cohen's kappa over a fixed category scale 0..categories-1.

    When expected disagreement is zero (both raters constant on the same label) kappa is 1.
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.ndim != 1 or len(a) == 0:
        raise PreconditionError("kappa needs two non-empty label sequences of equal length")
    if categories < 2:
        raise PreconditionError("need at least 2 categories")
    if a.min() < 0 or b.min() < 0 or a.max() >= categories or b.max() >= categories:
        raise PreconditionError(f"labels must lie in 0..{categories - 1}")
    observed = np.zeros((categories, categories))
    np.add.at(observed, (a, b), 1.0)
    observed /= len(a)
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0))
    i = np.arange(categories)
    w = (i[:, None] - i[None, :]) ** 2 / (categories - 1) ** 2
    den = float((w * expected).sum())
    if den == 0.0:
        return 1.0
    return 1.0 - float((w * observed).sum()) / den


def per_topic_kappa(qa: AssessmentSet, qb: AssessmentSet, topics: Sequence[str] | None = None,
                    categories: int = 3) -> dict[str, float]:
    topics = sorted(set(qa.topics) | set(qb.topics)) if topics is None else list(topics)
    out = {}
    for topic in topics:
        la, lb = qa.for_topic(topic), qb.for_topic(topic)
        if not la or set(la) != set(lb):
            raise PreconditionError(f"assessors {qa.assessor_id} and {qb.assessor_id} "
                                    f"do not label the same documents for topic {topic}")
        docs = sorted(la)
        out[topic] = weighted_kappa([la[d] for d in docs], [lb[d] for d in docs], categories)
    return out


def mean_per_topic_kappa(qa: AssessmentSet, qb: AssessmentSet, topics: Sequence[str] | None = None,
                         categories: int = 3) -> float:
    return float(np.mean(list(per_topic_kappa(qa, qb, topics, categories).values())))
