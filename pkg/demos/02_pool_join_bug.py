# %% [markdown]
# Two orderings of the same pool, and what happens when assessments are joined on
# (topic, rank) against the wrong one.

# %%
import numpy as np

from irrepro import JoinMode, PoolSpec, Run, build_pool, divergent_docs, join_assessments

rng = np.random.default_rng(0)
docs = [f"doc{i:02d}" for i in range(30)]
runs = [Run.from_lists(f"r{j}", {"0001": list(rng.permutation(docs)[:12])}) for j in range(5)]

pri = build_pool(runs, "0001", PoolSpec(depth=10))
rnd = build_pool(runs, "0001", PoolSpec(depth=10, ordering="RND", seed=7))
print(len(pri), "docs pooled")
print("PRI head", pri.doc_ids[:5])
print("RND head", rnd.doc_ids[:5])

# %%
# The assessor judged the PRI ordering; labels are keyed by the rank they saw.
truth = {d: int(rng.integers(0, 3)) for d in pri.doc_ids}
raw = [(rank, truth[d]) for rank, d in pri.entries]

right = join_assessments(pri, raw, JoinMode.BY_DOCID).labels
wrong = join_assessments(pri, raw, JoinMode.BY_RANK_BUGGY, reference_pool=rnd).labels
changed = divergent_docs(pri, rnd, raw)
print(f"{len(changed)} of {len(pri)} labels change")
for d in changed[:5]:
    print(d, right[("0001", d)], "->", wrong[("0001", d)])

# %%
# Joining against the ordering the assessor actually saw is harmless.
print(divergent_docs(pri, pri, raw))
