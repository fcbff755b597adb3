"""Dataset ingestion, preprocessing, and synthetic problem generation.

Datasets are stored in CSR-style arrays (``indptr``/``indices``/``values``
plus a label vector) so the solver kernels can walk samples without object
overhead; ``Dataset.samples`` materializes the per-sample view when needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

__all__ = [
    "Sample",
    "Dataset",
    "parse_libsvm",
    "serialize_libsvm",
    "load_libsvm",
    "save_libsvm",
    "density",
    "standardize",
    "add_bias",
    "synthesize",
]


@dataclass(frozen=True)
class Sample:
    """One labeled example: sparse features as (index, value) pairs."""

    features: tuple[tuple[int, float], ...]
    label: int

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError("label must be -1 or +1")
        prev = -1
        for idx, val in self.features:
            if idx <= prev:
                raise ValueError("feature indices must be strictly increasing")
            if not math.isfinite(val):
                raise ValueError("non-finite vector")
            prev = idx


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled dataset in CSR form.

    indptr has n+1 entries; sample i owns indices/values[indptr[i]:indptr[i+1]].
    Labels are float64 in {-1.0, +1.0}. Equality is value-based.
    """

    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    labels: np.ndarray
    dim: int
    standardized: bool = False
    bias_added: bool = False

    def __post_init__(self):
        object.__setattr__(self, "indptr", np.asarray(self.indptr, dtype=np.int64))
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.float64))
        if self.n < 1:
            raise ValueError("dataset must contain at least one sample")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.indices.size and int(self.indices.max()) >= self.dim:
            raise ValueError("feature index out of range")

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def samples(self) -> list[Sample]:
        out = []
        for i in range(self.n):
            lo, hi = int(self.indptr[i]), int(self.indptr[i + 1])
            feats = tuple(
                (int(self.indices[j]), float(self.values[j]))
                for j in range(lo, hi)
            )
            out.append(Sample(features=feats, label=int(self.labels[i])))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.standardized == other.standardized
            and self.bias_added == other.bias_added
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash((self.n, self.dim, self.standardized, self.bias_added))

    @classmethod
    def from_samples(
        cls,
        samples: Sequence[Sample],
        dim: int | None = None,
        standardized: bool = False,
        bias_added: bool = False,
    ) -> "Dataset":
        max_idx = -1
        for s in samples:
            if s.features:
                max_idx = max(max_idx, s.features[-1][0])
        if dim is None:
            dim = max(1, max_idx + 1)
        indptr = [0]
        indices: list[int] = []
        values: list[float] = []
        labels: list[float] = []
        for s in samples:
            for idx, val in s.features:
                indices.append(idx)
                values.append(val)
            indptr.append(len(indices))
            labels.append(float(s.label))
        return cls(
            indptr=np.array(indptr, dtype=np.int64),
            indices=np.array(indices, dtype=np.int64),
            values=np.array(values, dtype=np.float64),
            labels=np.array(labels, dtype=np.float64),
            dim=dim,
            standardized=standardized,
            bias_added=bias_added,
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.dim), dtype=np.float64)
        for i in range(self.n):
            lo, hi = int(self.indptr[i]), int(self.indptr[i + 1])
            out[i, self.indices[lo:hi]] = self.values[lo:hi]
        return out


def _parse_label(token: str, lineno: int) -> int:
    # accepted spellings: +1, 1, -1, 0 (0 means the negative class)
    try:
        value = float(token)
    except ValueError:
        raise ValueError(f"bad label at line {lineno}") from None
    if value == 1.0:
        return 1
    if value == -1.0 or value == 0.0:
        return -1
    raise ValueError(f"bad label at line {lineno}")


def parse_libsvm(source: str | IO[str]) -> Dataset:
    """Parse LIBSVM-format text: `<label> <idx>:<val> ...` per line.

    File indices are 1-based and mapped to 0-based; blank lines are
    skipped; labels 0 map to -1. Dimension is one past the largest index.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    samples: list[Sample] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        label = _parse_label(tokens[0], lineno)
        feats: list[tuple[int, float]] = []
        prev = -1
        for tok in tokens[1:]:
            head, sep, tail = tok.partition(":")
            if not sep:
                raise ValueError(f"bad feature token at line {lineno}")
            try:
                idx = int(head)
                val = float(tail)
            except ValueError:
                raise ValueError(f"bad feature token at line {lineno}") from None
            if idx < 1:
                raise ValueError(f"bad feature index at line {lineno}")
            if not math.isfinite(val):
                raise ValueError(f"non-finite value at line {lineno}")
            if idx - 1 <= prev:
                raise ValueError(f"non-increasing feature index at line {lineno}")
            prev = idx - 1
            feats.append((idx - 1, val))
        samples.append(Sample(features=tuple(feats), label=label))
    if not samples:
        raise ValueError("no samples in input")
    return Dataset.from_samples(samples)


def serialize_libsvm(dataset: Dataset) -> str:
    """Inverse of parse_libsvm: 1-based indices, shortest round-trip floats."""
    lines = []
    for i in range(dataset.n):
        lo, hi = int(dataset.indptr[i]), int(dataset.indptr[i + 1])
        parts = ["1" if dataset.labels[i] > 0 else "-1"]
        for j in range(lo, hi):
            parts.append(f"{int(dataset.indices[j]) + 1}:{float(dataset.values[j])!r}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def load_libsvm(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_libsvm(fh)


def save_libsvm(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_libsvm(dataset))


def density(dataset: Dataset) -> float:
    """Fraction of stored entries over n * p."""
    return len(dataset.values) / (dataset.n * dataset.dim)


def standardize(dataset: Dataset) -> Dataset:
    """Affine-map every feature column to mean 0, population variance 1.

    Zero-variance columns become identically 0. The result is stored
    densely (after centering, zeros are no longer special). Intended for
    dense data; callers gate on density(dataset) when preserving sparsity
    matters.
    """
    if dataset.standardized:
        raise ValueError("dataset is already standardized")
    X = dataset.to_dense()
    mean = X.mean(axis=0)
    var = ((X - mean) ** 2).mean(axis=0)
    std = np.sqrt(var)
    nonconstant = std > 0.0
    Z = np.zeros_like(X)
    Z[:, nonconstant] = (X[:, nonconstant] - mean[nonconstant]) / std[nonconstant]
    n, p = Z.shape
    indptr = np.arange(0, (n + 1) * p, p, dtype=np.int64)
    indices = np.tile(np.arange(p, dtype=np.int64), n)
    return Dataset(
        indptr=indptr,
        indices=indices,
        values=Z.reshape(-1),
        labels=dataset.labels.copy(),
        dim=p,
        standardized=True,
        bias_added=dataset.bias_added,
    )


def add_bias(dataset: Dataset) -> Dataset:
    """Append a constant feature 1.0 at index p; new dimension is p + 1.

    The bias coordinate is regularized like any other.
    """
    if dataset.bias_added:
        raise ValueError("bias already added")
    n = dataset.n
    p = dataset.dim
    counts = np.diff(dataset.indptr)
    indptr = np.concatenate(([0], np.cumsum(counts + 1))).astype(np.int64)
    m = len(dataset.values)
    indices = np.empty(m + n, dtype=np.int64)
    values = np.empty(m + n, dtype=np.float64)
    for i in range(n):
        lo, hi = int(dataset.indptr[i]), int(dataset.indptr[i + 1])
        nlo = int(indptr[i])
        indices[nlo : nlo + (hi - lo)] = dataset.indices[lo:hi]
        values[nlo : nlo + (hi - lo)] = dataset.values[lo:hi]
        indices[nlo + (hi - lo)] = p
        values[nlo + (hi - lo)] = 1.0
    return Dataset(
        indptr=indptr,
        indices=indices,
        values=values,
        labels=dataset.labels.copy(),
        dim=p + 1,
        standardized=dataset.standardized,
        bias_added=True,
    )


def synthesize(
    n: int, p: int, seed: int, noise_fraction: float = 0.0
) -> tuple[Dataset, np.ndarray]:
    """Linearly separable classification data with optional label noise.

    Draws a unit ground-truth direction u, spherical Gaussian features,
    labels y = sign(<u, x>), then flips round(noise_fraction * n) labels.
    Draw order (u, then X, then flip positions) is part of the contract:
    identical seeds give identical datasets.
    """
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    if not 0.0 <= noise_fraction < 0.5:
        raise ValueError("noise_fraction must lie in [0, 0.5)")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(p)
    u = u / math.sqrt(float(np.sum(u * u)))
    X = rng.standard_normal((n, p))
    y = np.where(X @ u >= 0.0, 1.0, -1.0)
    k = int(round(noise_fraction * n))
    if k > 0:
        flip = rng.permutation(n)[:k]
        y[flip] = -y[flip]
    indptr = np.arange(0, (n + 1) * p, p, dtype=np.int64)
    indices = np.tile(np.arange(p, dtype=np.int64), n)
    dataset = Dataset(
        indptr=indptr,
        indices=indices,
        values=X.reshape(-1),
        labels=y,
        dim=p,
    )
    return dataset, u
