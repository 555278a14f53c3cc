# %% [markdown]
# Graded-relevance measures on a toy topic, then a per-topic matrix for a synthetic collection.

# %%
import numpy as np

from irrepro import GainMap, MeasureConfig, Qrels, Run, irbu, ndcg, nerr, qmeasure, score_matrix

judged = {"d1": 4, "d2": 2, "d3": 0, "d4": 1}
ranked = ["d3", "d1", "d4", "d2"]
gains = GainMap.linear(4)

for name, value in [("nDCG@3", ndcg(ranked, judged, gains, 3)),
                    ("Q@3", qmeasure(ranked, judged, gains, 3)),
                    ("nERR@3", nerr(ranked, judged, gains, 3)),
                    ("iRBU@3", irbu(ranked, judged, 3))]:
    print(f"{name:8s}{value:.4f}")

# %%
# Ideal order scores 1 for the normalised measures.
ideal = sorted(judged, key=judged.get, reverse=True)
print(ndcg(ideal, judged, gains, 3), qmeasure(ideal, judged, gains, 3), nerr(ideal, judged, gains, 3))

# %%
rng = np.random.default_rng(1)
docs = [f"d{i}" for i in range(20)]
qrels = Qrels({t: {d: int(v) for d, v in zip(docs, rng.integers(0, 5, 20))} for t in ("101", "102", "103")}, 4)
runs = [Run.from_lists(f"sys{j}", {t: list(rng.permutation(docs)[:10]) for t in qrels.topics}) for j in range(3)]

m = score_matrix(runs, qrels, "ndcg", MeasureConfig(cutoff=10))
print(m.topics, m.systems)
print(np.round(m.cells, 4))
print("means", np.round(m.means(), 4))
