"""Foundational numeric types: projection domains and step-size schedules.

Weight vectors are plain 1-D float64 numpy arrays. All operations here are
pure functions of immutable value types and are safe to share across
concurrent runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "WholeSpace",
    "Ball",
    "ProjectionDomain",
    "ClassicalStep",
    "ProposedStep",
    "GeneralStep",
    "StepSchedule",
    "project",
    "step_size",
    "as_weight_vector",
    "l2_norm",
]


def as_weight_vector(v, dim: int | None = None) -> np.ndarray:
    """Coerce `v` to a float64 vector, checking finiteness (and dimension)."""
    w = np.asarray(v, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError(f"weight vector must be 1-D, got shape {w.shape}")
    if dim is not None and w.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {w.shape[0]}")
    if not np.all(np.isfinite(w)):
        raise ValueError("non-finite vector")
    return w


def l2_norm(v: np.ndarray) -> float:
    # Sequential accumulation in plain doubles: the compiled kernel computes
    # ball norms with this exact loop, so projections stay bit-identical
    # across backends (np.sum's pairwise order would differ in the last bit).
    s = 0.0
    for x in v:
        x = float(x)
        s += x * x
    return math.sqrt(s)


@dataclass(frozen=True)
class WholeSpace:
    """Unconstrained domain; projection is the identity."""


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of radius `radius` centered at the origin."""

    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError("ball radius must be a positive finite real")


ProjectionDomain = Union[WholeSpace, Ball]


def project(domain: ProjectionDomain, v: np.ndarray) -> np.ndarray:
    """Orthogonal (Euclidean-nearest) projection of `v` onto `domain`.

    WholeSpace returns `v` unchanged. Ball returns `v` if it is inside,
    otherwise `v` scaled radially back to the sphere. Idempotent.
    """
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vector")
    if isinstance(domain, WholeSpace):
        return v
    nrm = l2_norm(v)
    # rescale until inside: one scaling can land a last-place unit outside,
    # and exact idempotence requires the result to satisfy the norm test
    while nrm > domain.radius:
        v = v * (domain.radius / nrm)
        nrm = l2_norm(v)
    return v


@dataclass(frozen=True)
class ClassicalStep:
    """gamma_t = 1 / (mu * t)."""

    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError("mu must be a positive finite real")

    @property
    def name(self) -> str:
        return "classical"

    def gamma(self, t: int) -> float:
        return 1.0 / (self.mu * t)


@dataclass(frozen=True)
class ProposedStep:
    """gamma_t = 2 / (mu * (t + 1))."""

    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError("mu must be a positive finite real")

    @property
    def name(self) -> str:
        return "proposed"

    def gamma(self, t: int) -> float:
        return 2.0 / (self.mu * (t + 1))


@dataclass(frozen=True)
class GeneralStep:
    """gamma_t = c / (mu * (t + b)) with c > 1/2 and b >= 0.

    With c=1, b=0 this is value-identical to ClassicalStep, and with
    c=2, b=1 it is value-identical to ProposedStep.
    """

    mu: float
    c: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError("mu must be a positive finite real")
        if not (math.isfinite(self.c) and self.c > 0.5):
            raise ValueError("c must be > 1/2")
        if not (math.isfinite(self.b) and self.b >= 0):
            raise ValueError("b must be >= 0")

    @property
    def name(self) -> str:
        return f"general:{self.c!r},{self.b!r}"

    def gamma(self, t: int) -> float:
        return self.c / (self.mu * (t + self.b))


StepSchedule = Union[ClassicalStep, ProposedStep, GeneralStep]


def step_size(schedule: StepSchedule, t: int) -> float:
    """Step size gamma_t for step t >= 1 (closed form, exact per variant)."""
    if t < 1:
        raise ValueError("schedules are defined for t >= 1")
    return schedule.gamma(t)
