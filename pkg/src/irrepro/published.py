"""Published corrected results for the NTCIR WWW-2/3/4 English test collections.

Used to check this package against the official corrected figures once the corrected
qrels and runs are available locally. Means are rounded to four decimals as published.
"""

WWW2_QRELS_STATS = {4: 907, 3: 2437, 2: 4462, 1: 6358, 0: 13463, "total": 27627}
WWW3_QRELS_STATS = {4: 231, 3: 7129, 2: 8233, 1: 7764, 0: 9018, "total": 32375}

WWW2_POOL_DEPTH = 50
WWW3_POOL_DEPTH = 15

WWW2_MEANS = {
    "ndcg": {
        "THUIR-E-CO-MAN-Base-3": 0.4804, "THUIR-E-CO-MAN-Base-2": 0.4608,
        "THUIR-E-CO-MAN-Base-1": 0.4459, "RUCIR-E-CO-PU-Base-2": 0.4402,
        "RUCIR-E-DE-PU-Base-4": 0.4342, "MPII-E-CO-NU-Base-2": 0.4329,
        "MPII-E-CO-NU-Base-1": 0.4210, "MPII-E-CO-NU-Base-5": 0.4093,
        "MPII-E-CO-NU-Base-3": 0.4077, "baseline_eng_v1": 0.4032,
        "THUIR-E-CO-PU-Base-5": 0.4032, "MPII-E-CO-NU-Base-4": 0.4022,
        "RUCIR-E-DE-PU-Base-3": 0.3915, "RUCIR-E-DE-PU-Base-1": 0.3915,
        "THUIR-E-CO-PU-Base-4": 0.3870, "RUCIR-E-DE-PU-Base-5": 0.3336,
        "SLWWW-E-CO-NU-Base-1": 0.3300, "ORG-MANUAL": 0.2682,
        "SLWWW-E-CO-NU-Base-4": 0.2661, "SLWWW-E-CD-NU-Base-3": 0.2661,
    },
    "q": {
        "THUIR-E-CO-MAN-Base-3": 0.4681, "THUIR-E-CO-MAN-Base-2": 0.4524,
        "THUIR-E-CO-MAN-Base-1": 0.4358, "MPII-E-CO-NU-Base-2": 0.4319,
        "RUCIR-E-CO-PU-Base-2": 0.4310, "RUCIR-E-DE-PU-Base-4": 0.4276,
        "MPII-E-CO-NU-Base-1": 0.4157, "MPII-E-CO-NU-Base-5": 0.4006,
        "MPII-E-CO-NU-Base-3": 0.3969, "baseline_eng_v1": 0.3884,
        "THUIR-E-CO-PU-Base-5": 0.3884, "MPII-E-CO-NU-Base-4": 0.3856,
        "THUIR-E-CO-PU-Base-4": 0.3755, "RUCIR-E-DE-PU-Base-3": 0.3734,
        "RUCIR-E-DE-PU-Base-1": 0.3734, "RUCIR-E-DE-PU-Base-5": 0.3181,
        "SLWWW-E-CO-NU-Base-1": 0.3153, "ORG-MANUAL": 0.2527,
        "SLWWW-E-CO-NU-Base-4": 0.2400, "SLWWW-E-CD-NU-Base-3": 0.2400,
    },
    "nerr": {
        "THUIR-E-CO-MAN-Base-3": 0.6430, "THUIR-E-CO-MAN-Base-2": 0.6422,
        "RUCIR-E-CO-PU-Base-2": 0.6356, "RUCIR-E-DE-PU-Base-4": 0.6021,
        "THUIR-E-CO-MAN-Base-1": 0.6007, "MPII-E-CO-NU-Base-2": 0.5842,
        "MPII-E-CO-NU-Base-4": 0.5730, "MPII-E-CO-NU-Base-1": 0.5705,
        "baseline_eng_v1": 0.5582, "THUIR-E-CO-PU-Base-5": 0.5582,
        "MPII-E-CO-NU-Base-5": 0.5460, "MPII-E-CO-NU-Base-3": 0.5316,
        "RUCIR-E-DE-PU-Base-3": 0.5288, "RUCIR-E-DE-PU-Base-1": 0.5288,
        "THUIR-E-CO-PU-Base-4": 0.5261, "SLWWW-E-CO-NU-Base-1": 0.4795,
        "RUCIR-E-DE-PU-Base-5": 0.4315, "ORG-MANUAL": 0.4161,
        "SLWWW-E-CO-NU-Base-4": 0.3756, "SLWWW-E-CD-NU-Base-3": 0.3748,
    },
    "irbu": {
        "THUIR-E-CO-MAN-Base-3": 0.8698, "THUIR-E-CO-MAN-Base-2": 0.8547,
        "RUCIR-E-CO-PU-Base-2": 0.8530, "THUIR-E-CO-MAN-Base-1": 0.8441,
        "MPII-E-CO-NU-Base-2": 0.8355, "MPII-E-CO-NU-Base-5": 0.8354,
        "RUCIR-E-DE-PU-Base-4": 0.8348, "MPII-E-CO-NU-Base-3": 0.8306,
        "RUCIR-E-DE-PU-Base-3": 0.8272, "RUCIR-E-DE-PU-Base-1": 0.8272,
        "MPII-E-CO-NU-Base-1": 0.8123, "baseline_eng_v1": 0.8099,
        "THUIR-E-CO-PU-Base-5": 0.8099, "MPII-E-CO-NU-Base-4": 0.7988,
        "THUIR-E-CO-PU-Base-4": 0.7912, "RUCIR-E-DE-PU-Base-5": 0.7697,
        "SLWWW-E-CO-NU-Base-1": 0.7152, "SLWWW-E-CD-NU-Base-3": 0.7085,
        "SLWWW-E-CO-NU-Base-4": 0.7032, "ORG-MANUAL": 0.6519,
    },
}

WWW2_RESIDUAL_VARIANCE = {"ndcg": 0.0206, "q": 0.0257, "nerr": 0.0476, "irbu": 0.0317}


def _expand(groups):
    return {(winner, loser) for winners, losers in groups for winner in winners for loser in losers}


_BOTTOM3 = ["ORG-MANUAL", "SLWWW-E-CO-NU-Base-4", "SLWWW-E-CD-NU-Base-3"]
_BOTTOM5 = ["RUCIR-E-DE-PU-Base-5", "SLWWW-E-CO-NU-Base-1", *_BOTTOM3]

# Randomised Tukey HSD (B=10,000) at alpha=0.05: (better, worse) pairs.
WWW2_SIGNIFICANT_PAIRS = {
    "ndcg": _expand([
        (["THUIR-E-CO-MAN-Base-3"],
         ["RUCIR-E-DE-PU-Base-3", "RUCIR-E-DE-PU-Base-1", "THUIR-E-CO-PU-Base-4", *_BOTTOM5]),
        (["THUIR-E-CO-MAN-Base-2", "THUIR-E-CO-MAN-Base-1", "RUCIR-E-CO-PU-Base-2",
          "RUCIR-E-DE-PU-Base-4", "MPII-E-CO-NU-Base-2", "MPII-E-CO-NU-Base-1"], _BOTTOM5),
        (["MPII-E-CO-NU-Base-5", "MPII-E-CO-NU-Base-3", "baseline_eng_v1", "THUIR-E-CO-PU-Base-5",
          "MPII-E-CO-NU-Base-4", "RUCIR-E-DE-PU-Base-3", "RUCIR-E-DE-PU-Base-1",
          "THUIR-E-CO-PU-Base-4"], _BOTTOM3),
    ]),
    "q": _expand([
        (["THUIR-E-CO-MAN-Base-3"], ["RUCIR-E-DE-PU-Base-3", "RUCIR-E-DE-PU-Base-1", *_BOTTOM5]),
        (["THUIR-E-CO-MAN-Base-2", "THUIR-E-CO-MAN-Base-1", "MPII-E-CO-NU-Base-2",
          "RUCIR-E-CO-PU-Base-2", "RUCIR-E-DE-PU-Base-4", "MPII-E-CO-NU-Base-1"], _BOTTOM5),
        (["MPII-E-CO-NU-Base-5", "MPII-E-CO-NU-Base-3", "baseline_eng_v1", "THUIR-E-CO-PU-Base-5",
          "MPII-E-CO-NU-Base-4", "THUIR-E-CO-PU-Base-4", "RUCIR-E-DE-PU-Base-3",
          "RUCIR-E-DE-PU-Base-1"], _BOTTOM3),
    ]),
}

# Kendall's tau between system rankings induced by two measures, with 95% CIs.
WWW2_MEASURE_TAU = {
    ("ndcg", "q"): (0.942, 0.892, 0.969),
    ("ndcg", "nerr"): (0.858, 0.745, 0.923),
    ("ndcg", "irbu"): (0.826, 0.692, 0.905),
    ("q", "nerr"): (0.816, 0.676, 0.899),
    ("q", "irbu"): (0.805, 0.658, 0.893),
    ("nerr", "irbu"): (0.716, 0.519, 0.841),
}

# Effect of noisy labels on system rankings (tau with 95% CI); (WWW-2: 20 runs, WWW-3: 37 runs).
NOISE_TAU = {
    ("www2", "ndcg", "good+noise", "good+corrected"): (0.747, 0.566, 0.859),
    ("www2", "ndcg", "good+noise", "good+null"): (0.895, 0.808, 0.944),
    ("www2", "ndcg", "good+corrected", "good+null"): (0.779, 0.616, 0.878),
    ("www3", "ndcg", "good+noise", "good+corrected"): (0.877, 0.813, 0.920),
    ("www3", "ndcg", "good+noise", "good+null"): (0.908, 0.859, 0.940),
    ("www3", "ndcg", "good+corrected", "good+null"): (0.947, 0.918, 0.966),
}
NOISE_TAU_RUNS = {"www2": 20, "www3": 37}

# Mean per-topic quadratic weighted kappa over 50 WWW-4 topics.
WWW4_MEAN_KAPPA = {("gold", "waseda"): 0.440, ("gold", "tsinghua"): 0.495, ("waseda", "tsinghua"): 0.458}

WWW3_TOP_RUNS = {"irbu": ("KASYS-E-CO-NEW-4", 0.9526)}
WWW4_GOLD_TOP_RUNS = {"ndcg": ("THUIR-CO-NEW-2", 0.5157)}

# Reproduction of THUIR-E-CO-MAN-Base-2 (a) over THUIR-E-CO-PU-Base-4 (b).
KASYS_REP_A = "KASYS-E-CO-REP-2"
KASYS_REP_B = "KASYS-E-CO-REP-3"
ORIG_A = "THUIR-E-CO-MAN-Base-2"
ORIG_B = "THUIR-E-CO-PU-Base-4"
KASYS_RMSE_ABS = {
    KASYS_REP_A: {"ndcg": 0.2003, "q": 0.2288, "nerr": 0.3047, "irbu": 0.2352},
    KASYS_REP_B: {"ndcg": 0.2567, "q": 0.2739, "nerr": 0.3622, "irbu": 0.3591},
}
KASYS_PAIRED_P = {
    KASYS_REP_A: {"ndcg": 2.1022e-06, "q": 1.0804e-06, "nerr": 2.7970e-04, "irbu": 2.0544e-04},
    KASYS_REP_B: {"ndcg": 0.7819, "q": 0.8381, "nerr": 0.9364, "irbu": 0.3702},
}
KASYS_UNPAIRED_P = {
    KASYS_REP_A: {"ndcg": 0.0662, "q": 0.0431, "nerr": 0.8180, "irbu": 0.6015},
    KASYS_REP_B: {"ndcg": 1.9769e-04, "q": 1.8240e-04, "nerr": 5.3593e-03, "irbu": 0.3011},
}
KASYS_REPRO_EFFECT = {
    "rmse_delta": {"ndcg": 0.2658, "q": 0.2921, "nerr": 0.3924, "irbu": 0.3236},
    "er": {"ndcg": -0.5029, "q": -0.6020, "nerr": -0.0604, "irbu": 0.0846},
    "delta_ri": {"ndcg": 0.2846, "q": 0.3262, "nerr": 0.2340, "irbu": 0.0732},
}
KASYS_REPLI_EFFECT = {
    "er": {"ndcg": -0.0617, "q": -0.0140, "nerr": 0.0290, "irbu": -0.0601},
    "delta_ri": {"ndcg": 0.1991, "q": 0.2069, "nerr": 0.2156, "irbu": 0.0849},
}
