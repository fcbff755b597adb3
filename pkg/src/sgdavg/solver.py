"""Projected stochastic subgradient main loop.

One run advances a single iterate stream through

    w_t = project(domain, w_{t-1} - gamma_t * g_t),      t = 1..T,

and threads every configured averaging scheme through that same stream
(one subgradient draw per step, shared by all schemes). The full objective
is evaluated out-of-band at deterministic evaluation times, producing one
RunRecord per (scheme, time) pair.

`run` is the generic reference implementation; it accepts any subgradient
oracle. The fused SVM fast path (see `sgdavg.svm.SvmProblem.run_averaged`)
reproduces its records bit-for-bit and is exercised against it in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import averaging
from .core import ProjectionDomain, StepSchedule, l2_norm, project, step_size

__all__ = [
    "RunConfig",
    "RunRecord",
    "RunResult",
    "DivergenceError",
    "evaluation_times",
    "run",
]

# A subgradient oracle maps the current iterate to a stochastic subgradient
# draw; it owns its random stream (one draw per call).
SubgradientOracle = Callable[[np.ndarray], np.ndarray]


class DivergenceError(RuntimeError):
    """Raised when an iterate becomes non-finite; `step` is the offending t."""

    def __init__(self, step: int):
        super().__init__(f"non-finite iterate at step {step}")
        self.step = step


@dataclass(frozen=True)
class RunConfig:
    schedule: StepSchedule
    schemes: Sequence[averaging.AveragingScheme]
    domain: ProjectionDomain
    total_iterations: int
    seed: int
    evaluations_per_pass: int = 1
    n: int = 1

    def __post_init__(self):
        if self.total_iterations < 1:
            raise ValueError("total_iterations must be >= 1")
        if self.evaluations_per_pass < 1:
            raise ValueError("evaluations_per_pass must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.schemes) == 0:
            raise ValueError("at least one averaging scheme is required")


@dataclass(frozen=True)
class RunRecord:
    scheme_name: str
    schedule_name: str
    seed: int
    t: int
    effective_passes: float
    objective: float
    iterate_norm: float


@dataclass
class RunResult:
    """Records plus run-level diagnostics.

    `final_points` maps scheme name to its reported point at t = T;
    `max_iterate_norm_sq` and `mean_grad_norm_sq` track the raw iterates
    max_t ||w_t||^2 (t >= 1) and (1/T) sum_t ||g_t||^2.
    """

    records: list[RunRecord]
    final_iterate: np.ndarray
    final_points: dict[str, np.ndarray]
    max_iterate_norm_sq: float
    mean_grad_norm_sq: float
    evaluation_steps: list[int] = field(default_factory=list)


def evaluation_times(config: RunConfig) -> list[int]:
    """Deterministic objective-evaluation steps: about evaluations_per_pass
    per effective pass, evenly spaced, always including t = T."""
    T = config.total_iterations
    k = max(1, (config.evaluations_per_pass * T) // config.n)
    times = sorted({max(1, (i * T) // k) for i in range(1, k + 1)} | {T})
    return times


def _emit_records(
    records: list[RunRecord],
    objective: Callable[[np.ndarray], float],
    points: dict[str, np.ndarray],
    schedule_name: str,
    seed: int,
    t: int,
    n: int,
) -> None:
    for name, point in points.items():
        obj = float(objective(point))
        if not np.isfinite(obj):
            raise DivergenceError(t)
        records.append(
            RunRecord(
                scheme_name=name,
                schedule_name=schedule_name,
                seed=seed,
                t=t,
                effective_passes=t / n,
                objective=obj,
                iterate_norm=l2_norm(point),
            )
        )


def run(
    oracle: SubgradientOracle,
    objective: Callable[[np.ndarray], float],
    config: RunConfig,
    w0: np.ndarray,
) -> RunResult:
    """Reference solver loop (pure Python, any oracle).

    `w0` must already lie in the domain. Identical (config, w0, oracle
    stream) produce identical records bit-for-bit.
    """
    w = np.array(w0, dtype=np.float64, copy=True)
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite vector")
    dim = w.shape[0]

    names = [averaging.scheme_cli_name(s) for s in config.schemes]
    states = [averaging.fresh_state(dim) for _ in config.schemes]
    # the initial point is absorbed before the loop (stream index 0)
    states = [
        averaging.update_average(st, w, 0, s)
        for st, s in zip(states, config.schemes)
    ]

    eval_steps = evaluation_times(config)
    eval_set = set(eval_steps)
    records: list[RunRecord] = []
    max_w_sq = 0.0
    sum_g_sq = 0.0

    for t in range(1, config.total_iterations + 1):
        g = oracle(w)
        gamma = step_size(config.schedule, t)
        w = w - gamma * g
        # divergence is detected before projection; a ball projection
        # would silently collapse an infinite step to the origin
        if not np.all(np.isfinite(w)):
            raise DivergenceError(t)
        w = project(config.domain, w)
        sum_g_sq += float(np.sum(g * g))
        max_w_sq = max(max_w_sq, float(np.sum(w * w)))
        states = [
            averaging.update_average(st, w, t, s)
            for st, s in zip(states, config.schemes)
        ]
        if t in eval_set:
            points = {
                name: st.current_average for name, st in zip(names, states)
            }
            _emit_records(
                records,
                objective,
                points,
                config.schedule.name,
                config.seed,
                t,
                config.n,
            )

    return RunResult(
        records=records,
        final_iterate=w,
        final_points={
            name: st.current_average for name, st in zip(names, states)
        },
        max_iterate_norm_sq=max_w_sq,
        mean_grad_norm_sq=sum_g_sq / config.total_iterations,
        evaluation_steps=eval_steps,
    )
