import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irrepro.errors import PreconditionError
from irrepro.pooling import JoinMode, PoolSpec, build_pool, divergent_docs, join_assessments
from irrepro.trecio import Ordering, PoolFile, Run, serialize_pool

from oracles import buggy_divergence_oracle


def _brute_force_pri(lists, depth):
    """Enumerate every ordering of the union; keep the one whose keys never decrease."""
    union = sorted({d for docs in lists for d in docs[:depth]})
    def key(d):
        hits = [docs[:depth].index(d) + 1 for docs in lists if d in docs[:depth]]
        return (-len(hits), sum(hits), d)
    valid = [p for p in itertools.permutations(union)
             if all(key(a) <= key(b) for a, b in zip(p, p[1:]))]
    assert len(valid) == 1
    return list(valid[0])


def test_pri_two_runs():
    runs = [Run.from_lists("A", {"1": ["d1", "d2"]}), Run.from_lists("B", {"1": ["d2", "d3"]})]
    pool = build_pool(runs, "1", PoolSpec(2, "PRI"))
    assert pool.doc_ids == ["d2", "d1", "d3"] == _brute_force_pri([["d1", "d2"], ["d2", "d3"]], 2)


def test_pri_single_run_truncates():
    pool = build_pool([Run.from_lists("A", {"1": ["d1", "d2", "d3"]})], "1", PoolSpec(2))
    assert pool.doc_ids == ["d1", "d2"]


def test_rnd_deterministic_and_records_seed():
    runs = [Run.from_lists("A", {"1": [f"d{i}" for i in range(20)]})]
    a = build_pool(runs, "1", PoolSpec(20, "RND", seed=7))
    b = build_pool(runs, "1", PoolSpec(20, "RND", seed=7))
    assert a == b and serialize_pool(a) == serialize_pool(b)
    assert serialize_pool(a).startswith("# seed=7 ordering=RND")
    assert sorted(a.doc_ids) == sorted(f"d{i}" for i in range(20))
    assert build_pool(runs, "1", PoolSpec(20, "RND", seed=8)).doc_ids != a.doc_ids


def test_missing_topic_and_bad_depth():
    with pytest.raises(PreconditionError):
        build_pool([Run.from_lists("A", {"1": ["a"]})], "2", PoolSpec(5))
    with pytest.raises(PreconditionError):
        PoolSpec(0)


@settings(deadline=None, max_examples=60)
@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=6, unique=True), min_size=1, max_size=3),
       st.integers(1, 4))
def test_pri_matches_brute_force_and_covers_union(lists, depth):
    lists = [[f"d{x}" for x in docs] for docs in lists]
    runs = [Run.from_lists(f"r{i}", {"t": docs}) for i, docs in enumerate(lists)]
    pool = build_pool(runs, "t", PoolSpec(depth))
    assert pool.doc_ids == _brute_force_pri(lists, depth)
    assert set(pool.doc_ids) == {d for docs in lists for d in docs[:depth]}


def test_join_by_docid():
    pool = PoolFile.from_docs("1", "PRI", ["dA", "dB"])
    got = join_assessments(pool, [(1, 2), (2, 0)], JoinMode.BY_DOCID)
    assert got.labels == {("1", "dA"): 2, ("1", "dB"): 0}


def test_join_by_rank_buggy_misattributes():
    pool = PoolFile.from_docs("1", "PRI", ["dA", "dB"])
    ref = PoolFile.from_docs("1", "RND", ["dB", "dA"])
    got = join_assessments(pool, [(1, 2), (2, 0)], JoinMode.BY_RANK_BUGGY, ref)
    assert got.labels == {("1", "dB"): 2, ("1", "dA"): 0}


def test_join_modes_agree_on_identical_orderings():
    pool = PoolFile.from_docs("1", "PRI", ["a", "b", "c"])
    raw = [(1, 1), (2, 2), (3, 0)]
    assert join_assessments(pool, raw, "BY_DOCID", pool).labels == \
        join_assessments(pool, raw, "BY_RANK_BUGGY", pool).labels


def test_join_errors():
    pool = PoolFile.from_docs("1", "PRI", ["a", "b"])
    with pytest.raises(PreconditionError):
        join_assessments(pool, [(1, 1), (3, 0)])
    with pytest.raises(PreconditionError):
        join_assessments(pool, [(1, 1)])
    with pytest.raises(PreconditionError):
        join_assessments(pool, [(1, 1), (2, 0)], "BY_RANK_BUGGY", PoolFile.from_docs("1", "RND", ["a", "z"]))


@given(st.integers(2, 12), st.randoms(use_true_random=False))
def test_ordering_invariance(n, rnd):
    docs = [f"d{i}" for i in range(n)]
    labels = {d: rnd.randint(0, 2) for d in docs}
    shuffled = docs[:]
    rnd.shuffle(shuffled)
    p = PoolFile.from_docs("t", "PRI", docs)
    q = PoolFile.from_docs("t", "RND", shuffled)
    raw_p = [(i + 1, labels[d]) for i, d in enumerate(docs)]
    raw_q = [(i + 1, labels[d]) for i, d in enumerate(shuffled)]
    assert join_assessments(p, raw_p).labels == join_assessments(q, raw_q).labels
    buggy = join_assessments(p, raw_p, "BY_RANK_BUGGY", q).labels
    moved = any(labels[a] != labels[b] for a, b in zip(docs, shuffled))
    assert (buggy != join_assessments(p, raw_p).labels) == moved


def test_divergent_docs_matches_simulation():
    rng = np.random.default_rng(3)
    docs = [f"d{i:03d}" for i in range(100)]
    ref = list(rng.permutation(docs))
    labels = [int(x) for x in rng.integers(0, 3, 100)]
    got = divergent_docs(PoolFile.from_docs("t", "PRI", docs), PoolFile.from_docs("t", "RND", ref),
                         list(enumerate(labels, start=1)))
    assert got == buggy_divergence_oracle(docs, ref, labels)
