"""Recompute the corrected NTCIR WWW-2/3/4 English tables from the published data.

Every table reads logical artifacts through a :class:`~irrepro.datasets.DatasetManifest`:

    www2-qrels, www2-runs              corrected WWW-2 qrels (L0-L4) and the 20 WWW-2 runs
    www2-qrels-noisy, www2-qrels-null  official (buggy) and RND-only WWW-2 qrels
    www3-qrels, www3-runs              corrected NTCIR-15 qrels (160 topics) and WWW-3 runs
    www3-qrels-noisy, www3-qrels-null  official (buggy) and PRI-only NTCIR-15 qrels
    www4-gold-labels, www4-waseda-labels, www4-tsinghua-labels
                                        per-assessor 3-point labels, qrels format
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import published
from .commands import cmd_eval, compare_rankings, divergence_report, measure_tau_table, tukey_report
from .datasets import DatasetManifest, fetch_artifact
from .errors import PreconditionError
from .measures import MeasureConfig, score_matrix
from .repro import Mode, ReproInput, format_pvalue
from .stats import mean_per_topic_kappa
from .trecio import AssessmentSet, Qrels, Run, load_runs, parse_qrels, qrels_stats, write_tsv_report

WWW2_TOPICS = [f"{i:04d}" for i in range(1, 81)]
WWW3_TOPICS = [f"{i:04d}" for i in range(101, 181)]
WWW2_PRI_RND_TOPICS = [t for t in WWW2_TOPICS if int(t) % 3 == 2]
CUTOFF = 10
ALL_MEASURES = ("ndcg", "q", "nerr", "irbu")


@dataclass
class Options:
    trials: int = 10_000
    seed: int = 0
    workers: int = 1
    ci: str = "fisher"
    boot: int = 10_000
    persistence: float = 0.99


@dataclass
class Data:
    """Lazy, memoised access to manifest artifacts."""

    manifest: DatasetManifest
    _cache: dict = field(default_factory=dict)

    def qrels(self, name: str) -> Qrels:
        if name not in self._cache:
            self._cache[name] = parse_qrels(fetch_artifact(self.manifest, name).read_bytes())
        return self._cache[name]

    def runs(self, name: str) -> list[Run]:
        if name not in self._cache:
            self._cache[name] = load_runs(fetch_artifact(self.manifest, name))
        return self._cache[name]

    def run(self, name: str, run_id: str) -> Run:
        for run in self.runs(name):
            if run.run_id == run_id:
                return run
        raise PreconditionError(f"run {run_id} not found in {name}")


def _config(opts: Options) -> MeasureConfig:
    return MeasureConfig(CUTOFF, opts.persistence)


def www2_table1(data: Data, opts: Options) -> str:
    stats = qrels_stats(data.qrels("www2-qrels"), max_level=4)
    rows = [(f"L{lv}", n) for lv, n in stats.counts.items()] + [("#docs pooled", stats.total)]
    return write_tsv_report(rows, ["level", "count"])


def _www2_board(measures):
    def table(data: Data, opts: Options) -> str:
        board, _ = cmd_eval(data.runs("www2-runs"), data.qrels("www2-qrels"), measures, _config(opts))
        return board
    return table


def _www2_tukey(measures):
    def table(data: Data, opts: Options) -> str:
        out = []
        for name in measures:
            m = score_matrix(data.runs("www2-runs"), data.qrels("www2-qrels"), name, _config(opts))
            out.append(f"## {name}\n" + tukey_report(m, opts.trials, opts.seed, 0.05, opts.workers))
        return "".join(out)
    return table


def www2_table5(data: Data, opts: Options) -> str:
    matrices = {name: score_matrix(data.runs("www2-runs"), data.qrels("www2-qrels"), name, _config(opts))
                for name in ALL_MEASURES}
    return measure_tau_table(matrices, opts.ci, opts.boot, opts.seed)


def www3_table6(data: Data, opts: Options) -> str:
    q = data.qrels("www3-qrels")
    cols = [qrels_stats(q.restrict(WWW2_TOPICS), 4), qrels_stats(q.restrict(WWW3_TOPICS), 4), qrels_stats(q, 4)]
    rows = [(f"L{lv}", *(c.counts[lv] for c in cols)) for lv in range(4, -1, -1)]
    rows.append(("#docs pooled", *(c.total for c in cols)))
    return write_tsv_report(rows, ["level", "www2_topics", "www3_topics", "total"])


def _www3_board(measures):
    def table(data: Data, opts: Options) -> str:
        board, _ = cmd_eval(data.runs("www3-runs"), data.qrels("www3-qrels"), measures, _config(opts),
                            topics=WWW3_TOPICS)
        return board
    return table


def www4_table12(data: Data, opts: Options) -> str:
    sets = {who: AssessmentSet.from_qrels(who, data.qrels(f"www4-{who}-labels"))
            for who in ("gold", "waseda", "tsinghua")}
    rows = [(f"{a}-{b}", mean_per_topic_kappa(sets[a], sets[b])) for a, b in published.WWW4_MEAN_KAPPA]
    return write_tsv_report(rows, ["pair", "mean_kappa"], places=3)


def kasys_inputs(data: Data, opts: Options, measure: str) -> dict[str, ReproInput]:
    """Reproduction (WWW-2 topics, WWW-2 qrels) and replication (WWW-3 topics, NTCIR-15 qrels)."""
    cfg = _config(opts)
    orig = [data.run("www2-runs", published.ORIG_A), data.run("www2-runs", published.ORIG_B)]
    rep = [data.run("www3-runs", published.KASYS_REP_A), data.run("www3-runs", published.KASYS_REP_B)]
    m_orig = score_matrix(orig, data.qrels("www2-qrels"), measure, cfg)
    m_repro = score_matrix(rep, data.qrels("www2-qrels"), measure, cfg)
    m_repli = score_matrix(rep, data.qrels("www3-qrels"), measure, cfg, topics=WWW3_TOPICS)
    oa, ob = m_orig.column(published.ORIG_A), m_orig.column(published.ORIG_B)
    return {
        "repro": ReproInput(oa, ob, m_repro.column(published.KASYS_REP_A), m_repro.column(published.KASYS_REP_B),
                            Mode.REPRODUCIBILITY),
        "repli": ReproInput(oa, ob, m_repli.column(published.KASYS_REP_A), m_repli.column(published.KASYS_REP_B),
                            Mode.REPLICABILITY),
    }


def www3_repro(data: Data, opts: Options) -> str:
    rows = []
    for measure in ALL_MEASURES:
        inp = kasys_inputs(data, opts, measure)
        repro, repli = inp["repro"], inp["repli"]
        rows += [
            (measure, f"rmse_abs[{published.KASYS_REP_A}]", repro.rmse_abs("a")),
            (measure, f"rmse_abs[{published.KASYS_REP_B}]", repro.rmse_abs("b")),
            (measure, f"p_paired[{published.KASYS_REP_A}]", format_pvalue(repro.pvalue("a"))),
            (measure, f"p_paired[{published.KASYS_REP_B}]", format_pvalue(repro.pvalue("b"))),
            (measure, "rmse_delta", repro.rmse_delta()),
            (measure, "er_repro", repro.effect_ratio()),
            (measure, "delta_ri_repro", repro.delta_ri()),
            (measure, f"p_unpaired[{published.KASYS_REP_A}]", format_pvalue(repli.pvalue("a"))),
            (measure, f"p_unpaired[{published.KASYS_REP_B}]", format_pvalue(repli.pvalue("b"))),
            (measure, "er_repli", repli.effect_ratio()),
            (measure, "delta_ri_repli", repli.delta_ri()),
        ]
    return write_tsv_report(rows, ["measure", "quantity", "value"])


def _noise_table(prefix: str, topics):
    def table(data: Data, opts: Options) -> str:
        variants = {
            "good+noise": data.qrels(f"{prefix}-qrels-noisy"),
            "good+corrected": data.qrels(f"{prefix}-qrels"),
            "good+null": data.qrels(f"{prefix}-qrels-null"),
        }
        return compare_rankings(variants, data.runs(f"{prefix}-runs"), ALL_MEASURES, _config(opts),
                                topics=topics, ci=opts.ci, resamples=opts.boot, seed=opts.seed)
    return table


def www2_divergence(data: Data, opts: Options) -> str:
    """Computed nERR/iRBU means against the published ones; divergence is reported, not fatal."""
    computed = {}
    for name in ("nerr", "irbu"):
        m = score_matrix(data.runs("www2-runs"), data.qrels("www2-qrels"), name, _config(opts))
        computed[name] = dict(zip(m.systems, m.means().tolist()))
    return divergence_report(computed, {k: published.WWW2_MEANS[k] for k in ("nerr", "irbu")})


TABLES: dict[str, Callable[[Data, Options], str]] = {
    "www2-table1": www2_table1,
    "www2-table2": _www2_board(("ndcg", "q")),
    "www2-table3": _www2_board(("nerr", "irbu")),
    "www2-table4": _www2_tukey(("ndcg", "q")),
    "www2-table4b": _www2_tukey(("nerr", "irbu")),
    "www2-table5": www2_table5,
    "www2-divergence": www2_divergence,
    "www3-table6": www3_table6,
    "www3-table7": _www3_board(("ndcg", "q")),
    "www3-table8": _www3_board(("nerr", "irbu")),
    "www4-table12": www4_table12,
    "www3-repro": www3_repro,
    "www2-noise": _noise_table("www2", WWW2_PRI_RND_TOPICS),
    "www3-noise": _noise_table("www3", WWW3_TOPICS),
}


def run_table(name: str, manifest: DatasetManifest, opts: Options | None = None) -> str:
    try:
        fn = TABLES[name]
    except KeyError:
        raise PreconditionError(f"unknown table {name!r}; choose from {', '.join(TABLES)}") from None
    return fn(Data(manifest), opts or Options())
