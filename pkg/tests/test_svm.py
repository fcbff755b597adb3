import numpy as np
import pytest

from sgdavg.data import Dataset, Sample, add_bias, synthesize
from sgdavg.svm import (
    SampleIndexer,
    SvmObjective,
    SvmProblem,
    full_subgradient,
    oracle_stream,
    svm_objective,
    svm_stochastic_subgradient,
    variance_bound,
    variance_bound_ball,
)


def _dataset(rows):
    # rows: list of (dense features, label)
    samples = [
        Sample(tuple((j, float(v)) for j, v in enumerate(x) if v != 0.0), y)
        for x, y in rows
    ]
    return Dataset.from_samples(samples, dim=len(rows[0][0]))


def test_objective_at_zero_is_one():
    ds = _dataset([((1.0, 2.0), 1), ((0.5, -1.0), -1)])
    for lam in (0.0, 0.3, 2.0):
        assert svm_objective(np.zeros(2), SvmObjective(ds, lam)) == 1.0


def test_objective_zero_loss_region():
    ds = _dataset([((1.0, 0.0), 1)])
    assert svm_objective(np.array([2.0, 0.0]), SvmObjective(ds, 0.0)) == 0.0


def test_objective_hand_value():
    # (2/2)*1 + max(0, 1 - (-1)*(1*1 + 2*0)) = 1 + 2 = 3
    ds = _dataset([((1.0, 2.0), -1)])
    assert svm_objective(np.array([1.0, 0.0]), SvmObjective(ds, 2.0)) == 3.0


def test_objective_dimension_mismatch():
    ds = _dataset([((1.0, 2.0), 1)])
    with pytest.raises(ValueError, match="dimension mismatch"):
        svm_objective(np.zeros(3), SvmObjective(ds, 1.0))


def test_objective_nonnegative_random_sweep():
    rng = np.random.default_rng(11)
    ds, _ = synthesize(50, 4, seed=0, noise_fraction=0.1)
    obj = SvmObjective(ds, 0.02)
    for _ in range(100):
        assert svm_objective(rng.normal(size=4) * 5, obj) >= 0.0


def test_stochastic_subgradient_active_margin():
    g = svm_stochastic_subgradient(
        np.zeros(2), Sample(((0, 1.0), (1, 2.0)), -1), lam=0.1
    )
    assert np.array_equal(g, [1.0, 2.0])


def test_stochastic_subgradient_inactive_margin():
    g = svm_stochastic_subgradient(
        np.array([2.0, 0.0]), Sample(((0, 1.0),), 1), lam=0.1
    )
    assert np.allclose(g, [0.2, 0.0], rtol=0, atol=1e-16)


def test_stochastic_subgradient_margin_tie_uses_regularizer_only():
    w = np.array([1.0, 0.0])
    g = svm_stochastic_subgradient(w, Sample(((0, 1.0),), 1), lam=0.5)
    assert np.array_equal(g, 0.5 * w)


def test_unbiasedness_identity():
    # mean of the per-sample subgradients equals the full-batch subgradient
    rng = np.random.default_rng(12)
    for trial in range(20):
        ds, _ = synthesize(int(rng.integers(2, 40)), int(rng.integers(1, 6)), seed=trial)
        lam = float(rng.uniform(0.01, 1.0))
        obj = SvmObjective(ds, lam)
        w = rng.normal(size=ds.dim)
        mean_g = np.mean(
            [svm_stochastic_subgradient(w, s, lam) for s in ds.samples], axis=0
        )
        assert np.max(np.abs(mean_g - full_subgradient(w, obj))) <= 1e-12


def test_strong_convexity_inequality():
    rng = np.random.default_rng(13)
    ds, _ = synthesize(30, 3, seed=1, noise_fraction=0.2)
    lam = 0.25
    obj = SvmObjective(ds, lam)
    for _ in range(500):
        w = rng.normal(size=3) * 3
        v = rng.normal(size=3) * 3
        fw = svm_objective(w, obj)
        fv = svm_objective(v, obj)
        g = full_subgradient(w, obj)
        lower = fw + float(g @ (v - w)) + 0.5 * lam * float(np.sum((v - w) ** 2))
        assert fv >= lower - 1e-9 * max(1.0, abs(fv))


def test_variance_bound_examples():
    two = _dataset([((1.0, 0.0), 1), ((1.0, np.sqrt(2.0)), -1)])  # norms^2: 1, 3
    assert variance_bound(two, 0.1) == pytest.approx(8.0, rel=1e-15)
    zero = Dataset.from_samples([Sample((), 1), Sample((), -1)], dim=2)
    assert variance_bound(zero, 0.1) == 0.0
    one = _dataset([((1.0, 0.0), 1)])
    assert variance_bound(one, 0.7) == 4.0


def test_variance_bound_ball_formula():
    ds = _dataset([((3.0, 4.0), 1)])  # mean ||x||^2 = 25
    got = variance_bound_ball(ds, lam=0.5, radius=2.0)
    assert got == pytest.approx((5.0 + 1.0) ** 2, rel=1e-15)
    with pytest.raises(ValueError):
        variance_bound_ball(ds, lam=0.5, radius=0.0)


def test_sample_indexer_n_one_always_zero():
    idx = SampleIndexer(oracle_stream(0), 1)
    assert all(idx.next() == 0 for _ in range(20))


def test_sample_indexer_deterministic():
    a = SampleIndexer(oracle_stream(42), 10)
    b = SampleIndexer(oracle_stream(42), 10)
    assert [a.next() for _ in range(100)] == [b.next() for _ in range(100)]


def test_sample_indexer_batch_matches_sequential():
    for strategy in ("with_replacement", "permuted_passes"):
        a = SampleIndexer(oracle_stream(7), 6, strategy)
        b = SampleIndexer(oracle_stream(7), 6, strategy)
        batch = a.take(25)
        singles = [b.next() for _ in range(25)]
        assert batch.tolist() == singles


def test_sample_indexer_frequencies():
    idx = SampleIndexer(oracle_stream(100), 4)
    draws = idx.take(100_000)
    counts = np.bincount(draws, minlength=4) / 100_000
    sigma = np.sqrt(0.25 * 0.75 / 100_000)
    assert np.all(np.abs(counts - 0.25) <= 4 * sigma)


def test_sample_indexer_permuted_covers_each_pass():
    idx = SampleIndexer(oracle_stream(3), 5, "permuted_passes")
    draws = idx.take(15).reshape(3, 5)
    for row in draws:
        assert sorted(row.tolist()) == [0, 1, 2, 3, 4]


def test_sample_indexer_rejects_bad_strategy():
    with pytest.raises(ValueError, match="unknown sampling strategy"):
        SampleIndexer(oracle_stream(0), 3, "bogus")


def test_objective_is_permutation_invariant_after_bias():
    rng = np.random.default_rng(14)
    ds, _ = synthesize(60, 4, seed=6, noise_fraction=0.1)
    ds = add_bias(ds)
    perm = rng.permutation(ds.n)
    shuffled = Dataset.from_samples(
        [ds.samples[i] for i in perm], dim=ds.dim, bias_added=True
    )
    lam = 1.0 / ds.n
    w = rng.normal(size=ds.dim)
    a = svm_objective(w, SvmObjective(ds, lam))
    b = svm_objective(w, SvmObjective(shuffled, lam))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_problem_requires_positive_lam():
    ds, _ = synthesize(5, 2, seed=0)
    with pytest.raises(ValueError):
        SvmProblem(ds, 0.0)
