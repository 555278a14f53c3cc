"""Parsing and serialization of runs, qrels, pool files, raw labels and score matrices.

Formats (all whitespace-delimited, UTF-8, LF on output, CRLF tolerated on input)::

    run      topic Q0 docid rank score tag
    qrels    topic 0 docid level          (level written L2 or 2; emitted as L2)
    pool     topic pool_rank docid        (optional leading "# seed=<n> ordering=<PRI|RND>")
    labels   topic pool_rank raw_level
"""

from __future__ import annotations

import gzip
import math
import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ParseError, PreconditionError

__all__ = [
    "AssessmentSet",
    "Ordering",
    "PoolFile",
    "Qrels",
    "QrelsStats",
    "RankedDoc",
    "Run",
    "ScoreMatrix",
    "format_real",
    "load_runs",
    "parse_matrix",
    "parse_pool",
    "parse_qrels",
    "parse_raw_labels",
    "parse_run",
    "qrels_stats",
    "serialize_matrix",
    "serialize_pool",
    "serialize_qrels",
    "serialize_run",
    "write_tsv_report",
]


class Ordering(str, Enum):
    PRI = "PRI"
    RND = "RND"


class RankedDoc(NamedTuple):
    doc_id: str
    rank: int
    score: float


def _lines(text: str | bytes) -> Iterable[tuple[int, list[str]]]:
    """Yield (1-based line number, fields) for every non-blank line."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    for lineno, line in enumerate(text.split("\n"), start=1):
        fields = line.rstrip("\r").split()
        if fields:
            yield lineno, fields


def _int_field(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} is not an integer: {token!r}", lineno) from None


# --------------------------------------------------------------------------- runs


def _trec_order(docs: Iterable[RankedDoc]) -> tuple[RankedDoc, ...]:
    # trec_eval convention: score descending, ties by doc_id descending
    ordered = sorted(docs, key=lambda d: (d.score, d.doc_id), reverse=True)
    return tuple(RankedDoc(d.doc_id, r, d.score) for r, d in enumerate(ordered, start=1))


@dataclass(frozen=True)
class Run:
    run_id: str
    rankings: Mapping[str, tuple[RankedDoc, ...]]

    @classmethod
    def from_scores(cls, run_id: str, scores: Mapping[str, Mapping[str, float]]) -> "Run":
        """Build a run from topic -> {doc: score}; ranks follow the tie-break rule."""
        rankings = {
            topic: _trec_order(RankedDoc(doc, 0, float(s)) for doc, s in docs.items())
            for topic, docs in scores.items()
        }
        return cls(run_id, rankings)

    @classmethod
    def from_lists(cls, run_id: str, lists: Mapping[str, Sequence[str]]) -> "Run":
        """Build a run whose per-topic order is exactly the given document lists."""
        scores = {}
        for topic, docs in lists.items():
            if len(set(docs)) != len(docs):
                raise PreconditionError(f"duplicate document in topic {topic}")
            n = len(docs)
            scores[topic] = {doc: float(n - i) for i, doc in enumerate(docs)}
        return cls.from_scores(run_id, scores)

    @property
    def topics(self) -> list[str]:
        return sorted(self.rankings)

    def docs(self, topic: str) -> list[str]:
        """Ranked doc ids for ``topic`` (empty if the run skipped it)."""
        return [d.doc_id for d in self.rankings.get(topic, ())]


def parse_run(text: str | bytes) -> Run:
    run_id = None
    per_topic: dict[str, dict[str, RankedDoc]] = {}
    for lineno, fields in _lines(text):
        if len(fields) != 6:
            raise ParseError(f"expected 6 fields, got {len(fields)}", lineno)
        topic, _q0, doc, rank_s, score_s, tag = fields
        rank = _int_field(rank_s, "rank", lineno)
        if rank < 1:
            raise ParseError(f"rank must be positive, got {rank}", lineno)
        try:
            score = float(score_s)
        except ValueError:
            raise ParseError(f"score is not a number: {score_s!r}", lineno) from None
        if not math.isfinite(score):
            raise ParseError(f"score is not finite: {score_s!r}", lineno)
        if run_id is None:
            run_id = tag
        elif tag != run_id:
            raise ParseError(f"inconsistent run tag {tag!r} (expected {run_id!r})", lineno)
        docs = per_topic.setdefault(topic, {})
        if doc in docs:
            raise ParseError(f"duplicate document {doc!r} in topic {topic}", lineno)
        docs[doc] = RankedDoc(doc, rank, score)
    if run_id is None:
        raise ParseError("run contains no lines")
    return Run(run_id, {t: _trec_order(d.values()) for t, d in per_topic.items()})


def serialize_run(run: Run) -> str:
    out = []
    for topic in run.topics:
        for d in run.rankings[topic]:
            out.append(f"{topic} Q0 {d.doc_id} {d.rank} {d.score!r} {run.run_id}\n")
    return "".join(out)


def load_runs(directory: str | Path) -> list[Run]:
    """Parse every regular file in ``directory`` as a run (``.gz`` is decompressed).

    Runs are returned sorted by run id; two files carrying the same tag are an error.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise PreconditionError(f"runs directory not found: {directory}")
    runs: dict[str, Run] = {}
    for path in sorted(p for p in directory.iterdir() if p.is_file() and not p.name.startswith(".")):
        data = gzip.decompress(path.read_bytes()) if path.suffix == ".gz" else path.read_bytes()
        try:
            run = parse_run(data)
        except ParseError as exc:
            raise ParseError(f"{path.name}: {exc}") from None
        if run.run_id in runs:
            raise PreconditionError(f"run id {run.run_id!r} appears in more than one file")
        runs[run.run_id] = run
    if not runs:
        raise PreconditionError(f"no run files in {directory}")
    return [runs[k] for k in sorted(runs)]


# --------------------------------------------------------------------------- qrels

_LEVEL = re.compile(r"^[Ll]?(-?\d+)$")


def trec_qrels_layout(fields: Sequence[str]) -> tuple[str, str, str]:
    """Default qrels layout ``topic 0 docid level``. Returns (topic, doc, level token)."""
    if len(fields) != 4:
        raise ValueError(f"expected 4 fields, got {len(fields)}")
    return fields[0], fields[2], fields[3]


@dataclass(frozen=True)
class Qrels:
    labels: Mapping[str, Mapping[str, int]]
    max_level: int

    def __post_init__(self):
        for topic, docs in self.labels.items():
            for doc, level in docs.items():
                if not 0 <= level <= self.max_level:
                    raise PreconditionError(
                        f"level {level} of ({topic}, {doc}) outside 0..{self.max_level}")

    @property
    def topics(self) -> list[str]:
        return sorted(self.labels)

    def for_topic(self, topic: str) -> Mapping[str, int]:
        return self.labels.get(topic, {})

    def __len__(self) -> int:
        return sum(len(d) for d in self.labels.values())

    def restrict(self, topics: Iterable[str]) -> "Qrels":
        keep = set(topics)
        return Qrels({t: d for t, d in self.labels.items() if t in keep}, self.max_level)


def parse_qrels(
    text: str | bytes,
    layout: Callable[[Sequence[str]], tuple[str, str, str]] = trec_qrels_layout,
) -> Qrels:
    """Parse a qrels file. ``layout`` adapts other column arrangements to (topic, doc, level)."""
    labels: dict[str, dict[str, int]] = {}
    max_level = 0
    for lineno, fields in _lines(text):
        try:
            topic, doc, token = layout(fields)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        m = _LEVEL.match(token)
        if m is None:
            raise ParseError(f"unrecognised relevance level {token!r}", lineno)
        level = int(m.group(1))
        if level < 0:
            raise ParseError(f"negative relevance level {token!r}", lineno)
        docs = labels.setdefault(topic, {})
        if doc in docs:
            raise ParseError(f"duplicate judgment for ({topic}, {doc})", lineno)
        docs[doc] = level
        max_level = max(max_level, level)
    return Qrels(labels, max_level)


def serialize_qrels(qrels: Qrels) -> str:
    return "".join(
        f"{topic} 0 {doc} L{level}\n"
        for topic in qrels.topics
        for doc, level in sorted(qrels.labels[topic].items())
    )


class QrelsStats(NamedTuple):
    counts: dict[int, int]
    total: int


def qrels_stats(qrels: Qrels, max_level: int | None = None) -> QrelsStats:
    """Per-level judged-document counts over all topics."""
    top = qrels.max_level if max_level is None else max_level
    counts = {level: 0 for level in range(top, -1, -1)}
    for docs in qrels.labels.values():
        for level in docs.values():
            counts[level] = counts.get(level, 0) + 1
    return QrelsStats(counts, sum(counts.values()))


# --------------------------------------------------------------------------- pools and labels


@dataclass(frozen=True)
class PoolFile:
    topic_id: str
    ordering: Ordering
    entries: tuple[tuple[int, str], ...]
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        ranks = [r for r, _ in self.entries]
        if ranks != list(range(1, len(ranks) + 1)):
            raise PreconditionError(f"pool ranks for topic {self.topic_id} are not 1..n")
        docs = self.doc_ids
        if len(set(docs)) != len(docs):
            raise PreconditionError(f"duplicate document in pool for topic {self.topic_id}")

    @classmethod
    def from_docs(cls, topic_id: str, ordering, docs: Sequence[str], seed: int | None = None) -> "PoolFile":
        return cls(topic_id, ordering, tuple(enumerate(docs, start=1)), seed)

    @property
    def doc_ids(self) -> list[str]:
        return [d for _, d in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


_POOL_HEADER = re.compile(r"^#\s*(.*)$")


def parse_pool(text: str | bytes, ordering: Ordering | str | None = None) -> PoolFile:
    """Parse a single-topic pool file.

    ``ordering`` is taken from the header comment when present; an explicit argument
    must agree with it.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    header: dict[str, str] = {}
    body = []
    for line in text.split("\n"):
        m = _POOL_HEADER.match(line.strip())
        if m:
            for item in m.group(1).split():
                key, _, value = item.partition("=")
                header[key] = value
            body.append("")
        else:
            body.append(line)
    declared = header.get("ordering")
    if declared is not None and declared not in Ordering.__members__:
        raise ParseError(f"unknown pool ordering {declared!r}")
    if ordering is not None and declared is not None and Ordering(ordering).value != declared:
        raise ParseError(f"pool header declares {declared}, caller expected {Ordering(ordering).value}")
    resolved = ordering if ordering is not None else declared
    if resolved is None:
        raise ParseError("pool ordering unknown: no header and none given")
    seed = int(header["seed"]) if "seed" in header else None

    topic = None
    entries = []
    for lineno, fields in _lines("\n".join(body)):
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", lineno)
        t, rank_s, doc = fields
        if topic is None:
            topic = t
        elif t != topic:
            raise ParseError(f"pool file mixes topics {topic} and {t}", lineno)
        entries.append((_int_field(rank_s, "pool rank", lineno), doc))
    if topic is None:
        raise ParseError("pool file contains no entries")
    entries.sort()
    try:
        return PoolFile(topic, resolved, tuple(entries), seed)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def serialize_pool(pool: PoolFile) -> str:
    head = f"# ordering={pool.ordering.value}\n" if pool.seed is None else \
        f"# seed={pool.seed} ordering={pool.ordering.value}\n"
    return head + "".join(f"{pool.topic_id} {r} {d}\n" for r, d in pool.entries)


def parse_raw_labels(text: str | bytes) -> dict[str, list[tuple[int, int]]]:
    """Parse rank-keyed assessor output: topic -> [(pool_rank, raw_level), ...] sorted by rank."""
    out: dict[str, dict[int, int]] = {}
    for lineno, fields in _lines(text):
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", lineno)
        topic, rank_s, level_s = fields
        rank = _int_field(rank_s, "pool rank", lineno)
        m = _LEVEL.match(level_s)
        if m is None or int(m.group(1)) < 0:
            raise ParseError(f"bad label {level_s!r}", lineno)
        ranks = out.setdefault(topic, {})
        if rank in ranks:
            raise ParseError(f"duplicate pool rank {rank} for topic {topic}", lineno)
        ranks[rank] = int(m.group(1))
    return {t: sorted(r.items()) for t, r in out.items()}


@dataclass(frozen=True)
class AssessmentSet:
    """One assessor's raw labels keyed by (topic, doc)."""

    assessor_id: str
    labels: Mapping[tuple[str, str], int]
    max_level: int = 2

    def __post_init__(self):
        for key, level in self.labels.items():
            if not 0 <= level <= self.max_level:
                raise PreconditionError(
                    f"assessor {self.assessor_id}: raw level {level} for {key} outside 0..{self.max_level}")

    @classmethod
    def from_qrels(cls, assessor_id: str, qrels: "Qrels") -> "AssessmentSet":
        """View a single assessor's qrels-format label file as an assessment set."""
        labels = {(t, d): v for t, docs in qrels.labels.items() for d, v in docs.items()}
        return cls(assessor_id, labels, max(2, qrels.max_level))

    @property
    def topics(self) -> list[str]:
        return sorted({t for t, _ in self.labels})

    def for_topic(self, topic: str) -> dict[str, int]:
        return {d: v for (t, d), v in self.labels.items() if t == topic}


# --------------------------------------------------------------------------- score matrices


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-topic scores: rows are topics, columns are systems."""

    topics: tuple[str, ...]
    systems: tuple[str, ...]
    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "topics", tuple(self.topics))
        object.__setattr__(self, "systems", tuple(self.systems))
        cells = np.array(self.cells, dtype=float)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        if cells.shape != (len(self.topics), len(self.systems)):
            raise PreconditionError(
                f"cells shape {cells.shape} does not match {len(self.topics)} topics x {len(self.systems)} systems")
        if len(set(self.topics)) != len(self.topics) or len(set(self.systems)) != len(self.systems):
            raise PreconditionError("duplicate topic or system label")
        if not np.all(np.isfinite(cells)):
            raise PreconditionError("score matrix has missing or non-finite cells")

    def means(self) -> np.ndarray:
        return self.cells.mean(axis=0)

    def column(self, system: str) -> np.ndarray:
        return self.cells[:, self.systems.index(system)]

    def select(self, systems: Sequence[str] | None = None, topics: Sequence[str] | None = None) -> "ScoreMatrix":
        systems = self.systems if systems is None else tuple(systems)
        topics = self.topics if topics is None else tuple(topics)
        rows = [self.topics.index(t) for t in topics]
        cols = [self.systems.index(s) for s in systems]
        return ScoreMatrix(topics, systems, self.cells[np.ix_(rows, cols)])


def serialize_matrix(m: ScoreMatrix, places: int = 6) -> str:
    rows = [[t, *m.cells[i]] for i, t in enumerate(m.topics)]
    return write_tsv_report(rows, ["topic", *m.systems], places=places)


def parse_matrix(text: str | bytes) -> ScoreMatrix:
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    lines = [ln.rstrip("\r") for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ParseError("empty score matrix")
    header = lines[0].split("\t")
    if len(header) < 2:
        raise ParseError("matrix header needs a topic column and at least one system", 1)
    topics, rows = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(fields)}", lineno)
        try:
            rows.append([float(x) for x in fields[1:]])
        except ValueError:
            raise ParseError("non-numeric cell", lineno) from None
        topics.append(fields[0])
    try:
        return ScoreMatrix(tuple(topics), tuple(header[1:]), np.array(rows).reshape(len(topics), len(header) - 1))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


# --------------------------------------------------------------------------- reports


def format_real(x: float, places: int = 4) -> str:
    """Fixed-point with round-half-away-from-zero on the shortest decimal repr of ``x``.

    >>> format_real(0.95255)
    '0.9526'
    """
    if not math.isfinite(x):
        return str(x)
    q = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)
    return f"{q:.{places}f}"


def _cell(value, places: int) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return format_real(float(value), places)


def write_tsv_report(rows: Iterable[Sequence], header: Sequence[str], places: int = 4) -> str:
    """Header line plus tab-separated rows in the given order; reals at ``places`` decimals."""
    lines = ["\t".join(header)]
    lines.extend("\t".join(_cell(v, places) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
