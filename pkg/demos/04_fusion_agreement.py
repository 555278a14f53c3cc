# %% [markdown]
# Fusing per-assessor 3-point labels, then agreement between assessors and between rankings.

# %%
import numpy as np

from irrepro import AssessmentSet, fuse_log, fuse_sum, kendall_tau, mean_per_topic_kappa

rng = np.random.default_rng(5)
keys = [(t, f"d{i}") for t in ("1", "2") for i in range(8)]
truth = {k: int(rng.integers(0, 3)) for k in keys}


def noisy_assessor(name, flip):
    return AssessmentSet(name, {k: (int(rng.integers(0, 3)) if rng.random() < flip else v) for k, v in truth.items()})


a, b = noisy_assessor("a", 0.2), noisy_assessor("b", 0.4)
print("sum of two:", fuse_sum([a, b]).for_topic("1"))

eight = [noisy_assessor(f"x{i}", 0.3) for i in range(8)]
print("log of eight:", fuse_log(eight).for_topic("1"))

# %%
print("mean per-topic weighted kappa", round(mean_per_topic_kappa(a, b), 3))

# %%
x = rng.random(20)
y = x + rng.normal(0, 0.1, 20)
print(kendall_tau(x, y))
print(kendall_tau(x, y, ci="bootstrap", resamples=2000, seed=1))
