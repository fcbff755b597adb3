"""Regularized hinge-loss SVM: objective, subgradient oracle, moment bounds.

    f(w) = (lam/2)||w||^2 + (1/n) sum_i max{0, 1 - y_i <w, x_i>}

The stochastic oracle draws one sample per step and returns
lam*w - y*x when the margin is below 1, else lam*w (margin exactly 1
takes the lam*w branch; 0 is a valid hinge subgradient there).

`SvmProblem.run_averaged` is the production path: it drives the compiled
(or pure-Python fallback) kernel over segments between evaluation times
and produces records bit-identical to `solver.run` with `make_oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.sparse

from . import averaging, solver
from .core import Ball, WholeSpace, as_weight_vector, step_size
from .data import Dataset, Sample

__all__ = [
    "SvmObjective",
    "svm_objective",
    "svm_stochastic_subgradient",
    "full_subgradient",
    "variance_bound",
    "variance_bound_ball",
    "SampleIndexer",
    "SvmProblem",
    "oracle_stream",
]

HINGE_LIPSCHITZ = 1.0


@dataclass(frozen=True)
class SvmObjective:
    dataset: Dataset
    lam: float

    def __post_init__(self):
        if not self.lam >= 0.0:
            raise ValueError("lam must be non-negative")


def _csr(dataset: Dataset) -> scipy.sparse.csr_matrix:
    return scipy.sparse.csr_matrix(
        (dataset.values, dataset.indices, dataset.indptr),
        shape=(dataset.n, dataset.dim),
    )


def svm_objective(w: np.ndarray, obj: SvmObjective) -> float:
    """Full-batch objective value. Hinge terms are reduced with np.sum
    (pairwise), keeping evaluation noise well below the gaps being plotted."""
    w = as_weight_vector(w, obj.dataset.dim)
    margins = obj.dataset.labels * (_csr(obj.dataset) @ w)
    hinge = float(np.sum(np.maximum(0.0, 1.0 - margins)))
    reg = 0.5 * obj.lam * float(np.sum(w * w))
    return reg + hinge / obj.dataset.n


def svm_stochastic_subgradient(
    w: np.ndarray, sample: Sample, lam: float
) -> np.ndarray:
    """Single-sample subgradient lam*w - y*x (margin < 1) or lam*w."""
    w = np.asarray(w, dtype=np.float64)
    # sequential accumulation, mirrored exactly by the compiled kernel
    dot = 0.0
    for idx, val in sample.features:
        dot += float(w[idx]) * val
    margin = sample.label * dot
    g = lam * w
    if margin < 1.0:
        for idx, val in sample.features:
            g[idx] -= sample.label * val
    return g


def full_subgradient(w: np.ndarray, obj: SvmObjective) -> np.ndarray:
    """Mean over samples of the per-sample subgradient (hinge part active
    where margin < 1) plus the regularizer gradient."""
    w = as_weight_vector(w, obj.dataset.dim)
    X = _csr(obj.dataset)
    margins = obj.dataset.labels * (X @ w)
    coef = np.where(margins < 1.0, obj.dataset.labels, 0.0)
    return obj.lam * w - (X.T @ coef) / obj.dataset.n


def _mean_sq_norm(dataset: Dataset) -> float:
    return float(np.sum(dataset.values * dataset.values)) / dataset.n


def variance_bound(dataset: Dataset, lam: float) -> float:
    """B^2 = 4 * L^2 * mean ||x||^2; the oracle's second moment stays below
    this whenever ||w_0|| <= L/lam and lam*gamma_t <= 1."""
    if dataset.n < 1:
        raise ValueError("empty dataset")
    return 4.0 * HINGE_LIPSCHITZ**2 * _mean_sq_norm(dataset)


def variance_bound_ball(dataset: Dataset, lam: float, radius: float) -> float:
    """Alternative bound when iterates are confined to a ball of the given
    radius: (L * sqrt(mean ||x||^2) + lam * radius)^2."""
    if dataset.n < 1:
        raise ValueError("empty dataset")
    if radius <= 0:
        raise ValueError("radius must be positive")
    root = HINGE_LIPSCHITZ * np.sqrt(_mean_sq_norm(dataset))
    return float((root + lam * radius) ** 2)


def oracle_stream(seed: int, run_index: int = 0) -> np.random.Generator:
    """The pinned RNG for a run: PCG64 keyed by (seed, run_index).

    run_index separates runs that reuse one seed within an experiment
    (e.g. an extra schedule pairing) so their draws stay independent.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, run_index))))


SamplingStrategy = Literal["with_replacement", "permuted_passes"]


class SampleIndexer:
    """Sample-index source over {0..n-1}, owning its stream position.

    with_replacement: uniform i.i.d. draws. permuted_passes: a fresh
    uniform permutation each pass. `take(count)` consumes the stream
    exactly as `count` calls of `next()` would (numpy draws bounded
    integers identically in batch and one at a time).
    """

    def __init__(self, rng: np.random.Generator, n: int, strategy: SamplingStrategy = "with_replacement"):
        if n < 1:
            raise ValueError("n must be >= 1")
        if strategy not in ("with_replacement", "permuted_passes"):
            raise ValueError(f"unknown sampling strategy: {strategy}")
        self._rng = rng
        self._n = n
        self._strategy = strategy
        self._buffer: np.ndarray | None = None
        self._pos = 0

    def next(self) -> int:
        if self._strategy == "with_replacement":
            return int(self._rng.integers(0, self._n))
        if self._buffer is None or self._pos >= self._n:
            self._buffer = self._rng.permutation(self._n)
            self._pos = 0
        idx = int(self._buffer[self._pos])
        self._pos += 1
        return idx

    def take(self, count: int) -> np.ndarray:
        if self._strategy == "with_replacement":
            return self._rng.integers(0, self._n, size=count, dtype=np.int64)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            if self._buffer is None or self._pos >= self._n:
                self._buffer = self._rng.permutation(self._n)
                self._pos = 0
            chunk = min(count - filled, self._n - self._pos)
            out[filled : filled + chunk] = self._buffer[self._pos : self._pos + chunk]
            self._pos += chunk
            filled += chunk
        return out


class SvmProblem:
    """Dataset + regularizer + domain, with both solver entry points."""

    def __init__(self, dataset: Dataset, lam: float, domain=None):
        if not lam > 0.0:
            raise ValueError("lam must be positive")
        self.dataset = dataset
        self.lam = lam
        self.domain = WholeSpace() if domain is None else domain
        self._objective = SvmObjective(dataset, lam)
        self._matrix = _csr(dataset)

    def objective(self, w: np.ndarray) -> float:
        w = as_weight_vector(w, self.dataset.dim)
        margins = self.dataset.labels * (self._matrix @ w)
        hinge = float(np.sum(np.maximum(0.0, 1.0 - margins)))
        return 0.5 * self.lam * float(np.sum(w * w)) + hinge / self.dataset.n

    def make_oracle(
        self,
        seed: int,
        run_index: int = 0,
        sampling: SamplingStrategy = "with_replacement",
    ) -> Callable[[np.ndarray], np.ndarray]:
        """Sequential oracle for the generic solver loop; one sample draw
        per call on the pinned stream."""
        indexer = SampleIndexer(oracle_stream(seed, run_index), self.dataset.n, sampling)
        indptr = self.dataset.indptr
        indices = self.dataset.indices
        values = self.dataset.values
        labels = self.dataset.labels
        lam = self.lam

        def oracle(w: np.ndarray) -> np.ndarray:
            i = indexer.next()
            lo, hi = int(indptr[i]), int(indptr[i + 1])
            dot = 0.0
            for j in range(lo, hi):
                dot += float(w[indices[j]]) * float(values[j])
            margin = float(labels[i]) * dot
            g = lam * w
            if margin < 1.0:
                g[indices[lo:hi]] -= labels[i] * values[lo:hi]
            return g

        return oracle

    def run_averaged(
        self,
        config: solver.RunConfig,
        run_index: int = 0,
        sampling: SamplingStrategy = "with_replacement",
        w0: np.ndarray | None = None,
        backend: str | None = None,
    ) -> solver.RunResult:
        """Kernel-driven run: same records as solver.run(make_oracle(...), ...)
        bit for bit, at compiled speed when the extension is available."""
        from . import _backend

        kernel = _backend.get_kernel(backend)
        dim = self.dataset.dim
        if w0 is None:
            w = np.zeros(dim, dtype=np.float64)
        else:
            w = np.array(as_weight_vector(w0, dim), copy=True)

        T = config.total_iterations
        indexer = SampleIndexer(oracle_stream(config.seed, run_index), self.dataset.n, sampling)
        order = indexer.take(T)
        gammas = np.array(
            [step_size(config.schedule, t) for t in range(1, T + 1)],
            dtype=np.float64,
        )

        names = [averaging.scheme_cli_name(s) for s in config.schemes]
        S = len(config.schemes)
        codes = np.empty(S, dtype=np.int64)
        iparams = np.empty(S, dtype=np.int64)
        for si, scheme in enumerate(config.schemes):
            codes[si], iparams[si] = averaging.kernel_code(scheme)
        # absorbing w_0 at stream index 0 leaves every scheme with
        # average = w_0 and cumulative weight 1
        avgs = np.tile(w, (S, 1))
        cumw = np.ones(S, dtype=np.float64)
        wstart = np.zeros(S, dtype=np.int64)

        radius = self.domain.radius if isinstance(self.domain, Ball) else 0.0
        stats = np.zeros(2, dtype=np.float64)  # [max ||w||^2, sum ||g||^2]

        eval_steps = solver.evaluation_times(config)
        records: list[solver.RunRecord] = []
        t_done = 0
        for t_stop in eval_steps:
            bad = kernel.run_segment(
                w,
                avgs,
                cumw,
                wstart,
                codes,
                iparams,
                self.dataset.indptr,
                self.dataset.indices,
                self.dataset.values,
                self.dataset.labels,
                order,
                gammas,
                t_done,
                t_stop,
                self.lam,
                radius,
                stats,
            )
            if bad:
                raise solver.DivergenceError(int(bad))
            t_done = t_stop
            points = {name: avgs[si].copy() for si, name in enumerate(names)}
            solver._emit_records(
                records,
                self.objective,
                points,
                config.schedule.name,
                config.seed,
                t_stop,
                config.n,
            )

        return solver.RunResult(
            records=records,
            final_iterate=w,
            final_points={name: avgs[si].copy() for si, name in enumerate(names)},
            max_iterate_norm_sq=float(stats[0]),
            mean_grad_norm_sq=float(stats[1]) / T,
            evaluation_steps=eval_steps,
        )
