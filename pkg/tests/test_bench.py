import csv
import io
import json
import types

import numpy as np
import pytest

from sgdavg import (
    Ball,
    ClassicalStep,
    DivergenceError,
    GeneralStep,
    PolyWeight,
    ProposedStep,
    WholeSpace,
    run,
)
from sgdavg.bench import (
    CSV_HEADER,
    DEFAULT_SCHEMES,
    ExperimentConfig,
    FStarEstimate,
    SyntheticSpec,
    build_plans,
    estimate_fstar,
    load_problem,
    make_schedule,
    records_to_csv,
    resolve_lambda,
    run_experiment,
    verify_suite,
)
from sgdavg import cli


def small_config(**overrides):
    base = dict(
        synthetic=SyntheticSpec(n=100, p=5, noise=0.1, seed=1),
        scheme_names=("0", "1"),
        passes=2,
        seeds=(0,),
        evaluations_per_pass=1,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_row_count_two_schemes_two_passes():
    # n=100, 2 passes, schemes {0,1}: 2 * evaluations_per_pass * 2 data rows
    for epp in (1, 2):
        records = run_experiment(small_config(evaluations_per_pass=epp))
        assert len(records) == 2 * epp * 2


def test_empty_scheme_list_rejected_before_compute():
    with pytest.raises(ValueError, match="at least one averaging scheme"):
        small_config(scheme_names=())


def test_unknown_scheme_rejected_at_config_time():
    with pytest.raises(ValueError, match="unknown averaging scheme name"):
        small_config(scheme_names=("0", "Q"))


def test_config_requires_exactly_one_data_source(tmp_path):
    with pytest.raises(ValueError, match="exactly one"):
        ExperimentConfig()
    with pytest.raises(ValueError, match="exactly one"):
        ExperimentConfig(data_path="x.txt", synthetic=SyntheticSpec(10, 2))


def test_config_validation():
    with pytest.raises(ValueError, match="at least one seed"):
        small_config(seeds=())
    with pytest.raises(ValueError, match="passes"):
        small_config(passes=0)
    with pytest.raises(ValueError, match="lam must be"):
        small_config(lam=-1.0)
    with pytest.raises(ValueError, match="lam must be"):
        small_config(lam="2/n")
    with pytest.raises(ValueError, match="workers"):
        small_config(workers=0)


def test_csv_header_exact():
    text = records_to_csv(run_experiment(small_config()))
    assert text.splitlines()[0] == (
        "run_id,scheme,schedule,seed,t,effective_passes,objective,iterate_norm"
    )
    assert CSV_HEADER == (
        "run_id,scheme,schedule,seed,t,effective_passes,objective,iterate_norm"
    )


def test_same_config_twice_byte_identical():
    config = small_config(scheme_names=DEFAULT_SCHEMES, seeds=(0, 1))
    assert records_to_csv(run_experiment(config)) == records_to_csv(
        run_experiment(config)
    )


def test_worker_count_does_not_change_bytes():
    serial = small_config(scheme_names=DEFAULT_SCHEMES, seeds=(0, 1, 2))
    threaded = small_config(scheme_names=DEFAULT_SCHEMES, seeds=(0, 1, 2), workers=3)
    assert records_to_csv(run_experiment(serial)) == records_to_csv(
        run_experiment(threaded)
    )


def test_backends_write_identical_csv():
    a = small_config(scheme_names=("W",), backend="compiled")
    b = small_config(scheme_names=("W",), backend="python")
    assert records_to_csv(run_experiment(a)) == records_to_csv(run_experiment(b))


def test_records_in_canonical_order():
    config = small_config(scheme_names=DEFAULT_SCHEMES, seeds=(1, 0))
    records = run_experiment(config)
    keys = [(r.schedule_name, r.scheme_name, r.seed, r.t) for r in records]
    assert keys == sorted(keys)


def test_effective_passes_is_t_over_n():
    records = run_experiment(small_config(evaluations_per_pass=2))
    for r in records:
        assert r.effective_passes == r.t / 100


def test_csv_floats_round_trip(tmp_path):
    config = small_config(scheme_names=("W",), step="general:1.5,2.0")
    out = tmp_path / "runs.csv"
    records = run_experiment(config, out_path=str(out))
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == len(records)
    for row, rec in zip(rows, records):
        # shortest round-trip formatting: parsing recovers the exact double
        assert float(row["objective"]) == rec.objective
        assert float(row["iterate_norm"]) == rec.iterate_norm
        assert float(row["effective_passes"]) == rec.effective_passes
        # comma-bearing schedule names survive quote-aware parsing
        assert row["schedule"] == "general:1.5,2.0"
        assert row["run_id"] == f"general:1.5,2.0-{rec.seed}"


def test_default_grid_plans():
    config = small_config(scheme_names=DEFAULT_SCHEMES, seeds=(3, 4))
    plans = build_plans(config)
    # per seed: classical over all schemes plus the (W, proposed) pairing
    assert [(p.step, p.scheme_names, p.seed, p.run_index) for p in plans] == [
        ("classical", DEFAULT_SCHEMES, 3, 0),
        ("proposed", ("W",), 3, 1),
        ("classical", DEFAULT_SCHEMES, 4, 0),
        ("proposed", ("W",), 4, 1),
    ]


def test_no_pairing_without_weighted_scheme():
    plans = build_plans(small_config(scheme_names=("0", "1")))
    assert [(p.step, p.run_index) for p in plans] == [("classical", 0)]


def test_explicit_step_runs_single_schedule():
    plans = build_plans(small_config(scheme_names=DEFAULT_SCHEMES, step="proposed"))
    assert [(p.step, p.scheme_names) for p in plans] == [
        ("proposed", DEFAULT_SCHEMES)
    ]


def test_make_schedule_parsing():
    assert make_schedule("classical", 0.5) == ClassicalStep(0.5)
    assert make_schedule("proposed", 0.5) == ProposedStep(0.5)
    assert make_schedule("general:1.5,2.0", 0.5) == GeneralStep(0.5, 1.5, 2.0)
    with pytest.raises(ValueError, match="bad step spec"):
        make_schedule("general:1.5", 0.5)
    with pytest.raises(ValueError, match="unknown step schedule"):
        make_schedule("sqrt", 0.5)


def test_lambda_rule_resolves_exactly():
    assert resolve_lambda("1/n", 400) == 1.0 / 400
    assert resolve_lambda(0.25, 400) == 0.25
    with pytest.raises(ValueError, match="lam must be positive"):
        resolve_lambda(0.0, 400)
    problem = load_problem(small_config())
    assert problem.lam == 1.0 / 100


def test_load_problem_domain_choice():
    assert isinstance(load_problem(small_config()).domain, WholeSpace)
    assert load_problem(small_config(radius=2.0)).domain == Ball(2.0)


def test_divergence_propagates_with_step():
    # gamma_t * lam = 1e6 / t inflates the iterate until it overflows
    config = small_config(step="general:1000000,0", passes=1)
    with pytest.raises(DivergenceError, match="non-finite iterate at step") as info:
        run_experiment(config)
    assert info.value.step >= 1


class QuadraticProblem:
    """Noise-free (mu/2)||w||^2 shim exposing the surface estimate_fstar
    drives: lam, domain, dataset.n, objective, run_averaged."""

    def __init__(self, mu):
        self.lam = mu
        self.domain = WholeSpace()
        self.dataset = types.SimpleNamespace(n=1)

    def objective(self, w):
        return 0.5 * self.lam * float(np.sum(np.asarray(w) ** 2))

    def run_averaged(self, config, run_index=0, sampling="with_replacement", backend=None):
        oracle = lambda w: self.lam * w
        return run(oracle, self.objective, config, np.array([3.0, -4.0]))


def test_fstar_on_quadratic_reaches_zero():
    # w_0's residual weight in the average decays like 1/T^2, so the
    # objective of the averaged point falls below 1e-6 within 100 steps
    estimate = estimate_fstar(QuadraticProblem(1.0), base_passes=10)
    assert estimate.value <= 1e-6
    assert estimate.method == "reference-run-min"
    assert estimate.iterations == 100


def test_fstar_below_every_experiment_objective():
    config = small_config(scheme_names=DEFAULT_SCHEMES, passes=5, seeds=(0, 1))
    records = run_experiment(config)
    estimate = estimate_fstar(load_problem(config), base_passes=5)
    assert estimate.value < min(r.objective for r in records)


def test_fstar_budget_multiplier_floor():
    with pytest.raises(ValueError, match="budget multiplier must be at least 10"):
        estimate_fstar(QuadraticProblem(1.0), base_passes=5, budget_multiplier=9)


def test_fstar_json_round_trip():
    estimate = FStarEstimate(
        value=0.125,
        method="reference-run-min",
        iterations=5000,
        seeds=(7001, 7002, 7003),
        w_star=np.array([0.5, -1.25]),
    )
    payload = json.loads(estimate.to_json())
    assert set(payload) == {"value", "method", "iterations", "seeds", "w_star"}
    restored = FStarEstimate.from_json(estimate.to_json())
    assert restored == estimate
    assert np.array_equal(restored.w_star, estimate.w_star)


def test_verify_suite_passes():
    results = verify_suite()
    names = [r.name for r in results]
    assert "telescoping-identity" in names
    assert "averaging-online-vs-closed-form" in names
    assert "iterate-norm-bound[classical]" in names
    assert "iterate-norm-bound[proposed]" in names
    assert "expectation-gap-bound" in names
    assert all(r.passed for r in results), [str(r) for r in results]


def test_cli_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "runs.csv"
    code = cli.main([
        "run",
        "--synthetic", "n=100,p=5,noise=0.1",
        "--lambda", "1/n",
        "--schemes", "0,1,W",
        "--passes", "2",
        "--seeds", "0,1",
        "--evals-per-pass", "1",
        "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    # 3 schemes * 2 evals * 2 seeds under classical, plus the W pairing rows
    assert len(lines) == 1 + 3 * 2 * 2 + 2 * 2
    assert "wrote 16 rows" in capsys.readouterr().out


def test_cli_fstar_writes_json(tmp_path, capsys):
    out = tmp_path / "fstar.json"
    code = cli.main([
        "fstar",
        "--synthetic", "n=100,p=5,noise=0.1",
        "--passes", "2",
        "--out", str(out),
    ])
    assert code == 0
    estimate = FStarEstimate.from_json(out.read_text())
    assert estimate.iterations == 2 * 10 * 100
    assert estimate.seeds == (7001, 7002, 7003)
    assert "f* estimate" in capsys.readouterr().out


def test_cli_verify_passes(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "PASS telescoping-identity" in out
    assert "FAIL" not in out


def test_cli_rejects_bad_lambda(tmp_path, capsys):
    code = cli.main([
        "run",
        "--synthetic", "n=10,p=2",
        "--lambda", "-3",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_radius_reports_both_variance_bounds(tmp_path, capsys):
    out = tmp_path / "ball.csv"
    code = cli.main([
        "run",
        "--synthetic", "n=50,p=3",
        "--schemes", "1",
        "--passes", "1",
        "--radius", "2.0",
        "--out", str(out),
    ])
    assert code == 0
    printed = capsys.readouterr().out
    assert "variance bound (unconstrained form)" in printed
    assert "variance bound (ball form, radius 2.0)" in printed
