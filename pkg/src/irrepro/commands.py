"""Report-producing operations behind the command-line interface.

Each function returns the TSV text the corresponding subcommand writes to stdout, so the
commands can be driven from Python as well.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .measures import DISPLAY_NAMES, GainMap, MeasureConfig, get_measure, score_matrix
from .pooling import divergent_docs
from .stats import kendall_tau, randomized_tukey_hsd
from .trecio import PoolFile, Qrels, Run, ScoreMatrix, format_real, serialize_matrix, write_tsv_report

log = logging.getLogger(__name__)


def leaderboard(m: ScoreMatrix) -> list[tuple[str, float]]:
    """(run, mean) sorted by mean descending, then run id ascending."""
    means = m.means()
    return sorted(zip(m.systems, means.tolist()), key=lambda rm: (-rm[1], rm[0]))


def cmd_eval(
    runs: Sequence[Run],
    qrels: Qrels,
    measures: Sequence[str] = ("ndcg",),
    config: MeasureConfig = MeasureConfig(),
    gains: GainMap | None = None,
    topics: Sequence[str] | None = None,
) -> tuple[str, dict[str, str]]:
    """Leaderboards for every measure plus the per-topic matrix TSV of each."""
    for name in measures:
        get_measure(name)
    boards, matrices = [], {}
    for name in measures:
        log.info("scoring %d runs with %s@%d", len(runs), name, config.cutoff)
        m = score_matrix(runs, qrels, name, config, gains, topics)
        matrices[name] = serialize_matrix(m)
        label = f"{DISPLAY_NAMES[name]}@{config.cutoff}"
        boards.append(write_tsv_report([(name, run, mean) for run, mean in leaderboard(m)],
                                       ["measure", "run", f"mean_{label}"]))
    return "".join(boards), matrices


def tukey_report(m: ScoreMatrix, trials: int, seed: int, alpha: float = 0.05, workers: int = 1) -> str:
    res = randomized_tukey_hsd(m, trials, seed, workers)
    out = [f"# randomised Tukey HSD\ttrials={trials}\tseed={seed}\talpha={alpha}"
           f"\tV_E2={format_real(res.residual_variance)}\n"]

    better: dict[str, list[str]] = {}
    for winner, loser in res.significant_pairs(alpha):
        better.setdefault(winner, []).append(loser)
    out.append(write_tsv_report([(w, ",".join(ls)) for w, ls in better.items()], ["run", "significantly_better_than"]))

    rows = []
    idx = {s: i for i, s in enumerate(res.systems)}
    order = [s for s, _ in leaderboard(m)]
    for a, b in combinations(order, 2):
        i, j = idx[a], idx[b]
        rows.append((a, b, res.mean_diffs[i, j], res.p_values[i, j], res.effect_sizes[i, j]))
    out.append(write_tsv_report(rows, ["run_a", "run_b", "mean_diff", "p", "ES_E2"]))

    out.append(write_tsv_report(
        [(a, *(res.p_values[idx[a], idx[b]] for b in order)) for a in order], ["p", *order]))
    return "".join(out)


def compare_rankings(
    variants: Mapping[str, Qrels],
    runs: Sequence[Run],
    measures: Sequence[str] = ("ndcg",),
    config: MeasureConfig = MeasureConfig(),
    topics: Sequence[str] | None = None,
    ci: str = "fisher",
    resamples: int = 10_000,
    seed: int = 0,
) -> str:
    """tau-b (with CI) between the system rankings each qrels variant induces, per measure."""
    if len(variants) < 2:
        raise PreconditionError("need at least two qrels variants")
    rows = []
    for name in measures:
        means = {}
        for vname, qrels in variants.items():
            m = score_matrix(runs, qrels, name, config, topics=topics)
            means[vname] = dict(zip(m.systems, m.means()))
        systems = sorted(next(iter(means.values())))
        for vname, by_system in means.items():
            if sorted(by_system) != systems:
                raise PreconditionError(f"variant {vname} was evaluated over a different run set")
        for va, vb in combinations(variants, 2):
            res = kendall_tau([means[va][s] for s in systems], [means[vb][s] for s in systems],
                              ci=ci, resamples=resamples, seed=seed)
            rows.append((name, va, vb, res.tau, res.ci_low, res.ci_high))
    return write_tsv_report(rows, ["measure", "variant_a", "variant_b", "tau", "ci_low", "ci_high"], places=3)


def measure_tau_table(matrices: Mapping[str, ScoreMatrix], ci: str = "fisher", resamples: int = 10_000,
                      seed: int = 0) -> str:
    """tau-b between the system rankings of every pair of measures."""
    rows = []
    for a, b in combinations(matrices, 2):
        ma, mb = matrices[a], matrices[b]
        if ma.systems != mb.systems:
            raise PreconditionError("measures were computed over different run sets")
        res = kendall_tau(ma.means(), mb.means(), ci=ci, resamples=resamples, seed=seed)
        rows.append((a, b, res.tau, res.ci_low, res.ci_high))
    return write_tsv_report(rows, ["measure_a", "measure_b", "tau", "ci_low", "ci_high"], places=3)


def bug_demo(pool: PoolFile, reference_pool: PoolFile, raw: Sequence[tuple[int, int]]) -> str:
    """Documents whose label changes when ranks are resolved against the wrong pool ordering."""
    docs = divergent_docs(pool, reference_pool, raw)
    labels = dict(raw)
    by_doc = {d: labels[r] for r, d in pool.entries}
    by_rank = {d: labels[r] for r, d in reference_pool.entries}
    head = f"# topic={pool.topic_id}\tpool_size={len(pool)}\tdivergent={len(docs)}\n"
    return head + write_tsv_report([(d, by_doc[d], by_rank[d]) for d in docs],
                                   ["doc_id", "label_by_docid", "label_by_rank_buggy"])


def divergence_report(computed: Mapping[str, Mapping[str, float]],
                      published: Mapping[str, Mapping[str, float]], tolerance: float = 5e-5) -> str:
    """Side-by-side computed vs published means for each (measure, run)."""
    rows = []
    for measure, pub in published.items():
        got = computed.get(measure, {})
        for run, value in pub.items():
            mine = got.get(run)
            if mine is None:
                rows.append((measure, run, value, "-", "-", "missing"))
            else:
                diff = mine - value
                rows.append((measure, run, value, mine, diff, "ok" if abs(diff) <= tolerance else "diverges"))
    return write_tsv_report(rows, ["measure", "run", "published", "computed", "diff", "status"])


def repro_vectors(matrix_orig: ScoreMatrix, matrix_rep: ScoreMatrix, orig_run: str, rep_run: str,
                  same_topics: bool) -> tuple[np.ndarray, np.ndarray]:
    """Per-topic vectors of an original and a reproduced run, aligned on shared topics if required."""
    if same_topics:
        topics = [t for t in matrix_orig.topics if t in set(matrix_rep.topics)]
        if len(topics) != len(matrix_orig.topics):
            raise PreconditionError("reproduced run is not scored on every original topic")
        return (matrix_orig.select([orig_run], topics).cells[:, 0],
                matrix_rep.select([rep_run], topics).cells[:, 0])
    return matrix_orig.column(orig_run), matrix_rep.column(rep_run)
