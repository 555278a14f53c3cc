"""Graded-relevance evaluation, significance testing and reproducibility measures for
TREC/NTCIR-style test collections."""

from .errors import DigestMismatch, EvalError, FetchError, NoRelevantDocuments, ParseError, PreconditionError
from .fusion import Variant, fuse_log, fuse_sum, make_variant
from .measures import GainMap, MeasureConfig, irbu, ndcg, nerr, qmeasure, score_matrix
from .pooling import JoinMode, PoolSpec, build_pool, divergent_docs, join_assessments
from .repro import ReproInput, delta_ri, effect_ratio, kendall_tau_union, rbo, rmse_abs, rmse_delta
from .stats import (
    fisher_interval,
    kendall_tau,
    mean_per_topic_kappa,
    paired_ttest,
    randomized_tukey_hsd,
    residual_variance,
    unpaired_ttest,
    weighted_kappa,
)
from .trecio import (
    AssessmentSet,
    Ordering,
    PoolFile,
    Qrels,
    Run,
    ScoreMatrix,
    parse_pool,
    parse_qrels,
    parse_run,
    qrels_stats,
    write_tsv_report,
)

__version__ = "0.1.0"
