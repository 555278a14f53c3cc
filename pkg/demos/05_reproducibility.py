# %% [markdown]
# How close does a reproduced pair of runs come to the original pair?

# %%
import numpy as np

from irrepro import ReproInput, kendall_tau_union, rbo
from irrepro.repro import Mode, format_pvalue

rng = np.random.default_rng(8)
orig_a, orig_b = rng.beta(4, 4, 50), rng.beta(3, 5, 50)
rep_a = np.clip(orig_a + rng.normal(-0.05, 0.1, 50), 0, 1)
rep_b = np.clip(orig_b + rng.normal(0.0, 0.1, 50), 0, 1)

same = ReproInput(orig_a, orig_b, rep_a, rep_b, Mode.REPRODUCIBILITY)
for key, value in same.summary().items():
    print(f"{key:11s}{format_pvalue(value) if key.startswith('p_') else round(value, 4)}")

# %%
# New topics: no per-topic comparison, so only effect-based measures and unpaired tests.
other = ReproInput(orig_a, orig_b, rep_a[:30], rep_b[:30], Mode.REPLICABILITY)
print(other.summary())

# %%
original = ["d1", "d2", "d3", "d4", "d5"]
reproduced = ["d2", "d1", "d3", "d6", "d4"]
print("KTU", round(kendall_tau_union(original, reproduced), 4), "RBO", round(rbo(original, reproduced), 4))
