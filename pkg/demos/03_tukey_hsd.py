# %% [markdown]
# Randomised Tukey HSD over a topic-by-system matrix.

# %%
import numpy as np

from irrepro import ScoreMatrix, randomized_tukey_hsd, residual_variance

rng = np.random.default_rng(3)
n_topics, systems = 40, ["A", "B", "C", "D"]
topic_effect = rng.normal(0.4, 0.15, (n_topics, 1))
system_effect = np.array([0.10, 0.06, 0.0, -0.05])
cells = np.clip(topic_effect + system_effect + rng.normal(0, 0.08, (n_topics, 4)), 0, 1)
m = ScoreMatrix(tuple(str(i) for i in range(n_topics)), tuple(systems), cells)

print("V_E2", round(residual_variance(m), 4))

# %%
res = randomized_tukey_hsd(m, trials=5000, seed=11)
print(np.round(res.p_values, 4))
print("significant at 0.05:", res.significant_pairs(0.05))

# %%
# Same seed, any worker count, same answer.
again = randomized_tukey_hsd(m, trials=5000, seed=11, workers=4)
print(np.array_equal(res.p_values, again.p_values))
