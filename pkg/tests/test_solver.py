import numpy as np
import pytest

from sgdavg.averaging import NoAveraging, PolyWeight, UniformAll
from sgdavg.core import Ball, ClassicalStep, ProposedStep, WholeSpace
from sgdavg.solver import (
    DivergenceError,
    RunConfig,
    evaluation_times,
    run,
)


def quad_oracle(mu):
    # zero-noise subgradient of (mu/2)||w||^2
    return lambda w: mu * w


def quad_objective(mu):
    return lambda w: 0.5 * mu * float(np.sum(w * w))


def config(T, n=1, schedule=None, schemes=None, domain=None, seed=0, epp=1):
    return RunConfig(
        schedule=schedule or ClassicalStep(1.0),
        schemes=schemes if schemes is not None else [NoAveraging()],
        domain=domain or WholeSpace(),
        total_iterations=T,
        seed=seed,
        evaluations_per_pass=epp,
        n=n,
    )


def test_evaluation_times_even_spacing():
    cfg = config(100, n=10)
    assert evaluation_times(cfg) == [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]


def test_evaluation_times_always_include_final():
    cfg = config(5, n=100)
    assert evaluation_times(cfg) == [5]


def test_evaluation_times_two_per_pass():
    cfg = config(100, n=10, epp=2)
    assert evaluation_times(cfg) == [5 * i for i in range(1, 21)]


def test_proposed_first_step_lands_at_zero():
    # gamma_1 = 2/(2 mu) = 1/mu, so w_1 = w_0 - (1/mu)(mu w_0) = 0; exact in
    # floats when mu is a power of two, since then both products round cleanly
    for mu in (0.5, 1.0, 4.0, 64.0):
        w0 = np.array([2.0, -1.0, 0.5])
        res = run(quad_oracle(mu), quad_objective(mu), config(1, schedule=ProposedStep(mu)), w0)
        assert np.array_equal(res.final_iterate, np.zeros(3))


def test_classical_first_step_lands_at_zero():
    w0 = np.array([5.0, 5.0])
    res = run(quad_oracle(1.0), quad_objective(1.0), config(1, schedule=ClassicalStep(1.0)), w0)
    assert np.array_equal(res.final_iterate, np.zeros(2))


def test_t1_no_averaging_reports_w1():
    mu = 0.5
    w0 = np.array([4.0])
    res = run(quad_oracle(mu), quad_objective(mu), config(1, schedule=ProposedStep(mu)), w0)
    # gamma_1 = 2/(2 mu) = 1/mu, so w_1 = w_0 - (1/mu) * mu w_0 = 0
    assert res.records[-1].iterate_norm == 0.0
    assert np.array_equal(res.final_points["0"], res.final_iterate)


def test_records_fields_and_ordering():
    mu = 1.0
    res = run(
        quad_oracle(mu),
        quad_objective(mu),
        config(40, n=10, schemes=[NoAveraging(), UniformAll()], epp=1),
        np.array([1.0, 2.0]),
    )
    per_scheme = {}
    for rec in res.records:
        assert rec.effective_passes == rec.t / 10
        assert rec.schedule_name == "classical"
        assert rec.seed == 0
        per_scheme.setdefault(rec.scheme_name, []).append(rec.t)
    assert set(per_scheme) == {"0", "1"}
    for times in per_scheme.values():
        assert times == sorted(times) == [10, 20, 30, 40]


def test_noisy_run_is_deterministic():
    cfg = config(200, n=50, schemes=[UniformAll(), PolyWeight(1)])
    a = run(_noisy_oracle(9), quad_objective(1.0), cfg, np.ones(3))
    b = run(_noisy_oracle(9), quad_objective(1.0), cfg, np.ones(3))
    assert a.records == b.records
    assert np.array_equal(a.final_iterate, b.final_iterate)


def _noisy_oracle(seed):
    rng = np.random.default_rng(seed)
    return lambda w: w + rng.normal(size=w.shape)


def test_schemes_share_one_iterate_stream():
    # the raw-iterate records must not depend on which other schemes ride along
    cfg_small = config(150, n=30, schemes=[NoAveraging()], seed=4)
    cfg_large = config(
        150, n=30, schemes=[NoAveraging(), UniformAll(), PolyWeight(2)], seed=4
    )
    a = run(_noisy_oracle(4), quad_objective(1.0), cfg_small, np.ones(2))
    b = run(_noisy_oracle(4), quad_objective(1.0), cfg_large, np.ones(2))
    raw_a = [r for r in a.records if r.scheme_name == "0"]
    raw_b = [r for r in b.records if r.scheme_name == "0"]
    assert raw_a == raw_b
    assert np.array_equal(a.final_iterate, b.final_iterate)


def test_ball_domain_caps_recorded_norms():
    cfg = config(300, n=30, domain=Ball(radius=0.7), schemes=[NoAveraging()])
    res = run(_noisy_oracle(2), quad_objective(1.0), cfg, np.zeros(2))
    assert np.sqrt(res.max_iterate_norm_sq) <= 0.7 + 1e-12
    for rec in res.records:
        assert rec.iterate_norm <= 0.7 + 1e-12


def test_zero_noise_quadratic_gap_bound():
    # deterministic specialization: f(bar_w_T) - f* <= 2 B^2 / (mu (T+1))
    mu = 2.0
    w0 = np.array([3.0, -4.0])
    B_sq = (mu * 5.0) ** 2
    for T in (1, 2, 5, 50, 500):
        cfg = config(T, schedule=ProposedStep(mu), schemes=[PolyWeight(1)])
        res = run(quad_oracle(mu), quad_objective(mu), cfg, w0)
        gap = res.records[-1].objective
        assert gap <= 2 * B_sq / (mu * (T + 1))


def test_divergence_raises_with_offending_step():
    def bad_oracle(w):
        return np.full_like(w, np.nan)

    with pytest.raises(DivergenceError) as err:
        run(bad_oracle, quad_objective(1.0), config(10), np.ones(2))
    assert err.value.step == 1
    assert "non-finite iterate at step 1" in str(err.value)


def test_run_config_validation():
    with pytest.raises(ValueError):
        config(0)
    with pytest.raises(ValueError):
        config(10, schemes=[])
    with pytest.raises(ValueError):
        RunConfig(
            schedule=ClassicalStep(1.0),
            schemes=[NoAveraging()],
            domain=WholeSpace(),
            total_iterations=10,
            seed=0,
            evaluations_per_pass=0,
            n=1,
        )


def test_rejects_non_finite_start():
    with pytest.raises(ValueError, match="non-finite vector"):
        run(quad_oracle(1.0), quad_objective(1.0), config(5), np.array([np.inf]))
