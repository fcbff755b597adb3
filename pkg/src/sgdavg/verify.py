"""Runtime self-checks: the algebraic identities and bounds the solver's
guarantees rest on, packaged as pass/fail checks for `bench verify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import averaging

__all__ = [
    "CheckResult",
    "telescoping_lhs",
    "telescoping_rhs",
    "check_telescoping",
    "check_averaging_agreement",
    "check_norm_bound",
    "check_expectation_bound",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}"


def telescoping_lhs(a: Sequence[float], T: int) -> float:
    """sum_{t=1..T} [ t(t-1) a_{t-1} - t(t+1) a_t ]."""
    if T < 1 or len(a) < T + 1:
        raise ValueError("need a_0..a_T with T >= 1")
    total = 0.0
    for t in range(1, T + 1):
        total += t * (t - 1) * a[t - 1] - t * (t + 1) * a[t]
    return total


def telescoping_rhs(a: Sequence[float], T: int) -> float:
    """-T(T+1) a_T, the closed form the sum collapses to."""
    return -T * (T + 1) * a[T]


def check_telescoping(trials: int = 200, seed: int = 0) -> CheckResult:
    """Identity sweep over random sequences plus the hand-checked case
    a=(5,1,2), T=2, where both sides equal -12."""
    hand = telescoping_lhs([5.0, 1.0, 2.0], 2)
    if hand != -12.0 or telescoping_rhs([5.0, 1.0, 2.0], 2) != -12.0:
        return CheckResult("telescoping-identity", False, f"hand case gave {hand}, want -12")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        T = int(rng.integers(1, 51))
        a = rng.uniform(-10.0, 10.0, size=T + 1)
        lhs = telescoping_lhs(a, T)
        rhs = telescoping_rhs(a, T)
        rel = abs(lhs - rhs) / max(1.0, abs(rhs))
        worst = max(worst, rel)
    passed = worst <= 1e-9
    return CheckResult(
        "telescoping-identity",
        passed,
        f"{trials} random sequences, worst relative error {worst:.3e} (tol 1e-9)",
    )


def _all_schemes(horizon: int) -> list[averaging.AveragingScheme]:
    return [
        averaging.NoAveraging(),
        averaging.UniformAll(),
        averaging.SuffixHalf(horizon),
        averaging.Doubling(),
        averaging.PolyWeight(1),
        averaging.PolyWeight(2),
        averaging.PolyDecay(0),
        averaging.PolyDecay(1),
        averaging.PolyDecay(2),
    ]


def check_averaging_agreement(trials: int = 200, seed: int = 1) -> CheckResult:
    """Online recurrence vs direct weighted sum, every scheme, random
    sequences (length <= 200, dimension <= 5, entries in [-10, 10])."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        length = int(rng.integers(1, 201))
        dim = int(rng.integers(1, 6))
        iterates = rng.uniform(-10.0, 10.0, size=(length, dim))
        for scheme in _all_schemes(horizon=length - 1 if length > 1 else 1):
            state = averaging.fresh_state(dim)
            for t in range(length):
                state = averaging.update_average(state, iterates[t], t, scheme)
            closed = averaging.closed_form_average(iterates, scheme)
            err = float(np.max(np.abs(state.current_average - closed)))
            rel = err / (1.0 + float(np.max(np.abs(closed))))
            worst = max(worst, rel)
    passed = worst <= 1e-10
    return CheckResult(
        "averaging-online-vs-closed-form",
        passed,
        f"{trials} random sequences x all schemes, worst relative error {worst:.3e} (tol 1e-10)",
    )


def check_norm_bound(
    max_iterate_norm_sq: float,
    mean_grad_norm_sq: float,
    feature_norm_bound: float,
    lam: float,
    label: str,
) -> CheckResult:
    """With ||x_i|| <= L, w_0 = 0, and lam * gamma_t <= 1, every iterate
    obeys ||w_t|| <= L/lam and the mean squared subgradient norm <= 4 L^2."""
    L = feature_norm_bound
    norm_cap = L / lam + 1e-9
    moment_cap = 4.0 * L * L
    worst_norm = float(np.sqrt(max_iterate_norm_sq))
    ok = worst_norm <= norm_cap and mean_grad_norm_sq <= moment_cap
    return CheckResult(
        f"iterate-norm-bound[{label}]",
        ok,
        f"max ||w_t|| = {worst_norm:.6g} vs cap {norm_cap:.6g}; "
        f"mean ||g_t||^2 = {mean_grad_norm_sq:.6g} vs cap {moment_cap:.6g}",
    )


def check_expectation_bound(
    mean_gaps: dict[int, float],
    variance_bound_sq: float,
    lam: float,
    n: int,
) -> CheckResult:
    """Seed-mean optimality gap of the weighted average under the 2/(mu(t+1))
    steps must sit below 2 B^2 / (lam (T+1)) at every recorded T >= n."""
    checked = 0
    worst_ratio = 0.0
    worst_t = None
    for t, gap in sorted(mean_gaps.items()):
        if t < n:
            continue
        cap = 2.0 * variance_bound_sq / (lam * (t + 1))
        ratio = gap / cap
        checked += 1
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_t = t
    if checked == 0:
        return CheckResult("expectation-gap-bound", False, "no evaluation points with T >= n")
    passed = worst_ratio <= 1.0
    return CheckResult(
        "expectation-gap-bound",
        passed,
        f"{checked} evaluation points, worst gap/bound ratio {worst_ratio:.3e} at T={worst_t}",
    )
