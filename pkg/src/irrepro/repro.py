"""Reproducibility and replicability measures for an original/reproduced run pair.

Score-based measures compare per-topic effectiveness of an advanced run ``a`` and a
baseline ``b`` between the original and the reproduced (same topics) or replicated
(different topics) setting. Ordering-based measures (KTU, RBO) compare document lists
directly and need no qrels.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .stats import paired_ttest, tau_b, unpaired_ttest
from .trecio import format_real, write_tsv_report

__all__ = [
    "Mode",
    "ReproInput",
    "delta_ri",
    "effect_ratio",
    "format_pvalue",
    "kendall_tau_union",
    "rbo",
    "rmse_abs",
    "rmse_delta",
]

DEFAULT_RBO_P = 0.8


class Mode(str, Enum):
    REPRODUCIBILITY = "REPRODUCIBILITY"
    REPLICABILITY = "REPLICABILITY"


def _vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or len(v) == 0:
        raise PreconditionError("expected a non-empty 1-d score vector")
    return v


def rmse_abs(orig: Sequence[float], rep: Sequence[float]) -> float:
    orig, rep = _vec(orig), _vec(rep)
    if orig.shape != rep.shape:
        raise PreconditionError(f"length mismatch: {len(orig)} vs {len(rep)} topics")
    return float(np.sqrt(np.mean((orig - rep) ** 2)))


def rmse_delta(orig_a, orig_b, rep_a, rep_b) -> float:
    vs = [_vec(v) for v in (orig_a, orig_b, rep_a, rep_b)]
    if len({len(v) for v in vs}) != 1:
        raise PreconditionError("all four score vectors must cover the same topics")
    return rmse_abs(vs[0] - vs[1], vs[2] - vs[3])


def effect_ratio(orig_a, orig_b, rep_a, rep_b) -> float:
    """(mean rep_a - mean rep_b) / (mean orig_a - mean orig_b)."""
    orig_effect = _vec(orig_a).mean() - _vec(orig_b).mean()
    if orig_effect == 0:
        raise PreconditionError("original runs have no mean effect; effect ratio undefined")
    return float((_vec(rep_a).mean() - _vec(rep_b).mean()) / orig_effect)


def delta_ri(orig_a, orig_b, rep_a, rep_b) -> float:
    """Relative improvement of a over b in the original minus that in the reproduction."""
    ob, rb = _vec(orig_b).mean(), _vec(rep_b).mean()
    if ob == 0 or rb == 0:
        raise PreconditionError("baseline mean is zero; relative improvement undefined")
    return float((_vec(orig_a).mean() - ob) / ob - (_vec(rep_a).mean() - rb) / rb)


def kendall_tau_union(orig_list: Sequence[str], rep_list: Sequence[str], k: int | None = None) -> float:
    """tau-b between two top-k lists over the union of their documents.

    A document missing from one list is appended below that list's cutoff, in the order
    it has in the other list.
    """
    a, b = list(orig_list)[:k], list(rep_list)[:k]
    if not a or not b:
        raise PreconditionError("both lists must be non-empty")
    if len(set(a)) != len(a) or len(set(b)) != len(b):
        raise PreconditionError("duplicate document in a ranked list")
    in_a, in_b = set(a), set(b)
    ext_a = a + [d for d in b if d not in in_a]
    ext_b = b + [d for d in a if d not in in_b]
    rank_a = {d: i for i, d in enumerate(ext_a)}
    rank_b = {d: i for i, d in enumerate(ext_b)}
    union = ext_a
    if len(union) < 2:
        return 1.0
    return tau_b([rank_a[d] for d in union], [rank_b[d] for d in union])


def rbo(orig_list: Sequence[str], rep_list: Sequence[str], p: float = DEFAULT_RBO_P) -> float:
    """Extrapolated rank-biased overlap of two (possibly uneven) finite rankings."""
    if not 0.0 < p < 1.0:
        raise PreconditionError(f"RBO persistence must lie in (0, 1), got {p}")
    s_list, l_list = sorted((list(orig_list), list(rep_list)), key=len)
    s, l = len(s_list), len(l_list)
    if l == 0:
        return 1.0
    if s == 0:
        return 0.0
    seen_s, seen_l = set(), set()
    overlap = 0
    x_s = 0
    total = 0.0
    for d in range(1, l + 1):
        l_item = l_list[d - 1]
        if d <= s:
            s_item = s_list[d - 1]
            if s_item == l_item:
                overlap += 1
            else:
                overlap += (s_item in seen_l) + (l_item in seen_s)
            seen_s.add(s_item)
        else:
            overlap += l_item in seen_s
        seen_l.add(l_item)
        if d == s:
            x_s = overlap
        total += overlap / d * p ** d
        if d > s:
            total += x_s * (d - s) / (s * d) * p ** d
    x_l = overlap
    return float((1 - p) / p * total + ((x_l - x_s) / l + x_s / s) * p ** l)


def format_pvalue(p: float) -> str:
    """Four decimals, or four-digit scientific notation below 1e-4 (e.g. 2.1022e-06)."""
    return f"{p:.4e}" if p < 1e-4 else format_real(p, 4)


@dataclass(frozen=True)
class ReproInput:
    """Per-topic scores of original and reproduced/replicated advanced (a) and baseline (b) runs."""

    orig_a: np.ndarray
    orig_b: np.ndarray
    rep_a: np.ndarray
    rep_b: np.ndarray
    mode: Mode = Mode.REPRODUCIBILITY

    def __post_init__(self):
        for name in ("orig_a", "orig_b", "rep_a", "rep_b"):
            object.__setattr__(self, name, _vec(getattr(self, name)))
        object.__setattr__(self, "mode", Mode(self.mode))
        if len(self.orig_a) != len(self.orig_b) or len(self.rep_a) != len(self.rep_b):
            raise PreconditionError("a and b runs must be scored on the same topics")
        if self.mode is Mode.REPRODUCIBILITY and len(self.orig_a) != len(self.rep_a):
            raise PreconditionError("reproducibility needs original and reproduced runs on the same topics")

    def _require_same_topics(self, what: str):
        if self.mode is Mode.REPLICABILITY:
            raise PreconditionError(f"{what} needs identical topics; not defined for replicability")

    def rmse_abs(self, run: str = "a") -> float:
        self._require_same_topics("RMSE")
        return rmse_abs(getattr(self, f"orig_{run}"), getattr(self, f"rep_{run}"))

    def rmse_delta(self) -> float:
        self._require_same_topics("RMSE_delta")
        return rmse_delta(self.orig_a, self.orig_b, self.rep_a, self.rep_b)

    def pvalue(self, run: str = "a", welch: bool = False) -> float:
        """Paired t-test when reproducing, unpaired when replicating."""
        orig, rep = getattr(self, f"orig_{run}"), getattr(self, f"rep_{run}")
        if self.mode is Mode.REPRODUCIBILITY:
            return paired_ttest(orig, rep)
        return unpaired_ttest(orig, rep, welch=welch)

    def effect_ratio(self) -> float:
        return effect_ratio(self.orig_a, self.orig_b, self.rep_a, self.rep_b)

    def delta_ri(self) -> float:
        return delta_ri(self.orig_a, self.orig_b, self.rep_a, self.rep_b)

    def summary(self) -> dict[str, float]:
        out = {}
        if self.mode is Mode.REPRODUCIBILITY:
            out["rmse_abs_a"] = self.rmse_abs("a")
            out["rmse_abs_b"] = self.rmse_abs("b")
        out["p_a"] = self.pvalue("a")
        out["p_b"] = self.pvalue("b")
        if self.mode is Mode.REPRODUCIBILITY:
            out["rmse_delta"] = self.rmse_delta()
        out["er"] = self.effect_ratio()
        out["delta_ri"] = self.delta_ri()
        return out


def repro_report(results: dict[str, ReproInput]) -> str:
    """TSV with one row per measure; p-values use :func:`format_pvalue`."""
    columns = ["rmse_abs_a", "rmse_abs_b", "p_a", "p_b", "rmse_delta", "er", "delta_ri"]
    rows = []
    for measure, inp in results.items():
        summary = inp.summary()
        row = [measure, inp.mode.value.lower()]
        for col in columns:
            if col not in summary:
                row.append("-")
            elif col.startswith("p_"):
                row.append(format_pvalue(summary[col]))
            else:
                row.append(summary[col])
        rows.append(row)
    return write_tsv_report(rows, ["measure", "mode", *columns])
