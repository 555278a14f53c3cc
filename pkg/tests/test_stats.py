import numpy as np
import pytest
import scipy.stats as sps
from hypothesis import given, settings, strategies as st

from irrepro.errors import PreconditionError
from irrepro.stats import (
    fisher_interval,
    kendall_tau,
    mean_per_topic_kappa,
    paired_ttest,
    randomized_tukey_hsd,
    residual_variance,
    tau_b,
    unpaired_ttest,
    weighted_kappa,
)
from irrepro.trecio import AssessmentSet, ScoreMatrix

from oracles import exact_two_system_p, kappa_oracle


def _matrix(cells, systems=None):
    cells = np.asarray(cells, float)
    systems = systems or [f"s{j}" for j in range(cells.shape[1])]
    return ScoreMatrix(tuple(f"t{i}" for i in range(cells.shape[0])), tuple(systems), cells)


def test_residual_variance_additive_matrix_is_zero():
    rows, cols = np.arange(5.0)[:, None] * 0.1, np.array([0.0, 0.3, 0.05, 0.2])
    assert residual_variance(_matrix(rows + cols)) == pytest.approx(0.0, abs=1e-30)


def test_residual_variance_matches_anova():
    x = np.random.default_rng(3).random((12, 5))
    n, k = x.shape
    grand = x.mean()
    ss_total = ((x - grand) ** 2).sum()
    ss_rows = k * ((x.mean(1) - grand) ** 2).sum()
    ss_cols = n * ((x.mean(0) - grand) ** 2).sum()
    expected = (ss_total - ss_rows - ss_cols) / ((n - 1) * (k - 1))
    assert residual_variance(_matrix(x)) == pytest.approx(expected, rel=1e-12)


def test_tukey_identical_systems():
    x = np.repeat(np.random.default_rng(0).random((8, 1)), 4, axis=1)
    res = randomized_tukey_hsd(_matrix(x), trials=500, seed=1)
    assert (res.p_values == 1.0).all()
    assert res.significant_pairs() == []


def test_exact_enumeration_oracle():
    assert exact_two_system_p([1] * 10, [0] * 10) == 2 / 1024
    assert exact_two_system_p([1, 0], [0, 0]) == 1.0


def test_tukey_constant_gap_matches_enumeration():
    res = randomized_tukey_hsd(_matrix([[1, 0]] * 10, ["A", "B"]), trials=20_000, seed=5)
    exact = 0.001953125
    assert abs(res.p_values[0, 1] - exact) <= 3 * np.sqrt(exact * (1 - exact) / 20_000)
    assert res.significant_pairs() == [("A", "B")]


def test_tukey_small_mixed_case_matches_enumeration():
    a = [0.9, 0.4, 0.5, 0.3, 0.8, 0.6]
    b = [0.1, 0.5, 0.2, 0.3, 0.4, 0.7]
    exact = exact_two_system_p(a, b)
    res = randomized_tukey_hsd(_matrix(np.c_[a, b]), trials=40_000, seed=2)
    assert abs(res.p_values[0, 1] - exact) <= 4 * np.sqrt(exact * (1 - exact) / 40_000)


def test_tukey_relabelling_and_shift_invariance():
    x = np.random.default_rng(9).random((15, 5))
    base = randomized_tukey_hsd(_matrix(x, list("abcde")), trials=2000, seed=4)
    perm = [3, 0, 4, 1, 2]
    relabelled = randomized_tukey_hsd(_matrix(x[:, perm], [list("abcde")[j] for j in perm]), trials=2000, seed=4)
    np.testing.assert_array_equal(relabelled.p_values, base.p_values[np.ix_(perm, perm)])
    shifted = randomized_tukey_hsd(_matrix(x + np.arange(15.0)[:, None]), trials=2000, seed=4)
    np.testing.assert_allclose(shifted.p_values, base.p_values, atol=0)


def test_tukey_deterministic_across_workers():
    m = _matrix(np.random.default_rng(1).random((20, 6)))
    one = randomized_tukey_hsd(m, trials=3500, seed=11, workers=1)
    four = randomized_tukey_hsd(m, trials=3500, seed=11, workers=4)
    np.testing.assert_array_equal(one.p_values, four.p_values)
    other = randomized_tukey_hsd(m, trials=3500, seed=12)
    assert not np.array_equal(one.p_values, other.p_values)


def test_tukey_effect_sizes_and_errors():
    x = np.random.default_rng(2).random((10, 3))
    res = randomized_tukey_hsd(_matrix(x), trials=100, seed=0)
    d = x.mean(0)[0] - x.mean(0)[1]
    assert res.effect_sizes[0, 1] == pytest.approx(abs(d) / np.sqrt(residual_variance(_matrix(x))))
    with pytest.raises(PreconditionError):
        randomized_tukey_hsd(_matrix(x), trials=0)
    with pytest.raises(PreconditionError):
        randomized_tukey_hsd(_matrix(x[:, :1]))


def test_paired_ttest_conventions_and_scipy():
    a = np.linspace(0, 1, 10)
    assert paired_ttest(a, a) == 1.0
    assert paired_ttest(a + 0.5, a) == 0.0
    b = np.random.default_rng(0).random(10)
    assert paired_ttest(a, b) == pytest.approx(sps.ttest_rel(a, b).pvalue, rel=1e-12)
    with pytest.raises(PreconditionError):
        paired_ttest(a, b[:5])


def test_unpaired_ttest_conventions():
    a = np.random.default_rng(1).random(12)
    assert unpaired_ttest(a, a) == 1.0
    assert unpaired_ttest(np.zeros(5), np.ones(7)) == 0.0
    b = np.random.default_rng(2).random(9)
    assert unpaired_ttest(a, b) == pytest.approx(sps.ttest_ind(a, b).pvalue, rel=1e-12)
    assert unpaired_ttest(a, b, welch=True) == pytest.approx(sps.ttest_ind(a, b, equal_var=False).pvalue, rel=1e-12)


def test_tau_identities():
    x = [0.1, 0.5, 0.3, 0.9]
    assert tau_b(x, x) == 1.0
    assert tau_b(x, [-v for v in x]) == -1.0
    with pytest.raises(PreconditionError):
        tau_b([1, 1, 1], [1, 2, 3])


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=15))
def test_tau_b_matches_scipy(pairs):
    x, y = zip(*pairs)
    if len(set(x)) < 2 or len(set(y)) < 2:
        return
    assert tau_b(x, y) == pytest.approx(sps.kendalltau(x, y).statistic, abs=1e-12)


@pytest.mark.parametrize("tau, n, lo, hi", [(0.942, 20, 0.892, 0.969), (0.947, 37, 0.918, 0.966)])
def test_fisher_interval_reproduces_published_intervals(tau, n, lo, hi):
    got = fisher_interval(tau, n)
    assert got == pytest.approx((lo, hi), abs=5e-4)


def test_kendall_tau_ci_modes():
    rng = np.random.default_rng(0)
    x = rng.random(20)
    y = x + rng.normal(0, 0.1, 20)
    f = kendall_tau(x, y)
    assert f.ci_low <= f.tau <= f.ci_high and (f.ci_low, f.ci_high) == fisher_interval(f.tau, 20)
    b1 = kendall_tau(x, y, ci="bootstrap", resamples=2000, seed=3)
    b2 = kendall_tau(x, y, ci="bootstrap", resamples=2000, seed=3)
    assert b1 == b2 and b1.ci_low <= b1.tau <= b1.ci_high
    assert kendall_tau(x, x).ci_low == 1.0
    assert fisher_interval(0.5, 4) == (-1.0, 1.0)
    with pytest.raises(PreconditionError):
        kendall_tau(x, y, ci="jackknife")


def test_kappa_examples():
    assert weighted_kappa([0, 1, 2, 1], [0, 1, 2, 1]) == 1.0
    assert weighted_kappa([0, 0, 1, 1], [1, 1, 0, 0], categories=2) == -1.0
    assert weighted_kappa([1, 1, 1], [1, 1, 1]) == 1.0
    with pytest.raises(PreconditionError):
        weighted_kappa([0, 3], [0, 1])


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=20))
def test_kappa_matches_oracle_and_symmetries(pairs):
    a, b = map(list, zip(*pairs))
    expected_den_zero = len(set(a)) == 1 and set(a) == set(b)
    got = weighted_kappa(a, b)
    assert got == pytest.approx(weighted_kappa(b, a), abs=1e-12)
    assert got == pytest.approx(weighted_kappa([2 - v for v in a], [2 - v for v in b]), abs=1e-12)
    if expected_den_zero:
        assert got == 1.0
    elif not (len(set(a)) == 1 and len(set(b)) == 1):
        assert got == pytest.approx(float(kappa_oracle(a, b, 3)), abs=1e-12)


def test_mean_per_topic_kappa():
    ga = AssessmentSet("g", {("1", "a"): 0, ("1", "b"): 2, ("2", "a"): 1, ("2", "b"): 0})
    wa = AssessmentSet("w", {("1", "a"): 0, ("1", "b"): 2, ("2", "a"): 0, ("2", "b"): 1})
    k2 = float(kappa_oracle([1, 0], [0, 1], 3))
    assert mean_per_topic_kappa(ga, wa) == pytest.approx((1.0 + k2) / 2)
    with pytest.raises(PreconditionError):
        mean_per_topic_kappa(ga, AssessmentSet("x", {("1", "a"): 0}))
