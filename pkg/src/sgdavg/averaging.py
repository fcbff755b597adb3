"""Iterate-averaging schemes, implemented as online running averages.

Every scheme reports a point bar_w_t after absorbing each iterate w_t via
the recurrence

    bar_w_t = (1 - rho_t) * bar_w_{t-1} + rho_t * w_t,

where the iterate stream is indexed from t = 0 (the initial point comes
first). `closed_form_average` computes the same reported point directly
from the scheme's weight profile and serves as the testing oracle for the
online recurrence.

Schemes:

* NoAveraging      -- report the raw iterate ("0").
* UniformAll       -- uniform average of all iterates ("1").
* SuffixHalf       -- uniform average of the second half of a declared
                      horizon ("0.5"); before the window opens the raw
                      iterate is reported.
* Doubling         -- uniform average restarted at every power-of-2 step
                      ("D").
* PolyWeight(k)    -- weight (t+1)^k on iterate t; k=1 is "W", k=2 is "W2".
* PolyDecay(eta)   -- running average with rho_t = (1+eta)/(t+1+eta);
                      eta=0 matches UniformAll and eta=1 matches
                      PolyWeight(1) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import as_weight_vector

__all__ = [
    "NoAveraging",
    "UniformAll",
    "SuffixHalf",
    "Doubling",
    "PolyWeight",
    "PolyDecay",
    "AveragingScheme",
    "AveragerState",
    "fresh_state",
    "rho",
    "update_average",
    "closed_form_average",
    "scheme_cli_name",
    "scheme_from_name",
    "kernel_code",
]


@dataclass(frozen=True)
class NoAveraging:
    pass


@dataclass(frozen=True)
class UniformAll:
    pass


@dataclass(frozen=True)
class SuffixHalf:
    """Uniform averaging over the second half of a run of `horizon` steps.

    The window opens at iterate index horizon // 2; earlier iterates are
    reported raw. Feeding past the horizon keeps extending the window.
    """

    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")


@dataclass(frozen=True)
class Doubling:
    pass


@dataclass(frozen=True)
class PolyWeight:
    """Weight iterate t by (t+1)**k."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be an integer >= 1")


@dataclass(frozen=True)
class PolyDecay:
    """Running average with rho_t = (1+eta)/(t+1+eta)."""

    eta: int

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be an integer >= 0")


AveragingScheme = Union[
    NoAveraging, UniformAll, SuffixHalf, Doubling, PolyWeight, PolyDecay
]


@dataclass(frozen=True)
class AveragerState:
    """Running state of one averaging scheme.

    `current_average` is the scheme's reported point after the last absorbed
    iterate; `cumulative_weight` is the total weight absorbed since the last
    window reset; `iterate_index` is the next expected iterate index;
    `epoch_start` is the start of the active window (window schemes only).
    """

    current_average: np.ndarray
    cumulative_weight: float
    iterate_index: int
    epoch_start: int


def fresh_state(dim: int, start_index: int = 0) -> AveragerState:
    """State ready to absorb its first iterate at index `start_index`."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    if start_index < 0:
        raise ValueError("start index must be >= 0")
    return AveragerState(
        current_average=np.zeros(dim, dtype=np.float64),
        cumulative_weight=0.0,
        iterate_index=start_index,
        epoch_start=start_index,
    )


def _is_power_of_two(t: int) -> bool:
    return t >= 1 and (t & (t - 1)) == 0


def _int_pow(base: float, k: int) -> float:
    # repeated multiplication, mirrored exactly by the compiled kernel
    out = 1.0
    for _ in range(k):
        out *= base
    return out


def _transition(
    scheme: AveragingScheme, t: int, cumw: float, epoch_start: int
) -> tuple[float, float, int]:
    """Return (rho_t, new cumulative weight, new window start).

    This is the single source of truth for the per-step coefficients; the
    solver kernels replicate these exact floating-point expressions.
    """
    if isinstance(scheme, NoAveraging):
        return 1.0, 1.0, t
    if isinstance(scheme, UniformAll):
        return 1.0 / (t + 1), cumw + 1.0, epoch_start
    if isinstance(scheme, SuffixHalf):
        half = scheme.horizon // 2
        if t < half:
            return 1.0, 1.0, t
        if t == half:
            return 1.0, 1.0, half
        return 1.0 / (t - half + 1), cumw + 1.0, half
    if isinstance(scheme, Doubling):
        if _is_power_of_two(t):
            return 1.0, 1.0, t
        if t == epoch_start:
            return 1.0, 1.0, epoch_start
        return 1.0 / (t - epoch_start + 1), cumw + 1.0, epoch_start
    if isinstance(scheme, PolyWeight):
        wt = _int_pow(float(t + 1), scheme.k)
        new_cumw = cumw + wt
        return wt / new_cumw, new_cumw, epoch_start
    if isinstance(scheme, PolyDecay):
        r = (1.0 + scheme.eta) / (t + 1.0 + scheme.eta)
        # implied normalizer of the unrolled recurrence (binomial profile)
        new_cumw = 1.0 if t == 0 else cumw * ((t + 1.0 + scheme.eta) / t)
        return r, new_cumw, epoch_start
    raise TypeError(f"unknown averaging scheme: {scheme!r}")


def rho(scheme: AveragingScheme, t: int, state: AveragerState) -> float:
    """Mixing coefficient rho_t for the iterate about to be absorbed at t."""
    if t < 0:
        raise ValueError("iterate index must be >= 0")
    r, _, _ = _transition(scheme, t, state.cumulative_weight, state.epoch_start)
    return r


def update_average(
    state: AveragerState, w: np.ndarray, t: int, scheme: AveragingScheme
) -> AveragerState:
    """Absorb iterate w_t, returning the advanced state (pure transition)."""
    if t != state.iterate_index:
        raise ValueError(
            f"iterate index mismatch: expected {state.iterate_index}, got {t}"
        )
    w = as_weight_vector(w, dim=state.current_average.shape[0])
    r, cumw, start = _transition(
        scheme, t, state.cumulative_weight, state.epoch_start
    )
    new_avg = (1.0 - r) * state.current_average + r * w
    return AveragerState(
        current_average=new_avg,
        cumulative_weight=cumw,
        iterate_index=t + 1,
        epoch_start=start,
    )


def _weights(scheme: AveragingScheme, length: int) -> np.ndarray:
    """Exact weight profile over a stream w_0 .. w_{length-1}."""
    last = length - 1
    if isinstance(scheme, NoAveraging):
        w = np.zeros(length)
        w[last] = 1.0
        return w
    if isinstance(scheme, UniformAll):
        return np.ones(length)
    if isinstance(scheme, SuffixHalf):
        half = scheme.horizon // 2
        w = np.zeros(length)
        if last < half:
            w[last] = 1.0
        else:
            w[half:] = 1.0
        return w
    if isinstance(scheme, Doubling):
        start = 0
        if last >= 1:
            start = 1 << (last.bit_length() - 1)
        w = np.zeros(length)
        w[start:] = 1.0
        return w
    if isinstance(scheme, PolyWeight):
        return np.array(
            [float((t + 1) ** scheme.k) for t in range(length)]
        )
    if isinstance(scheme, PolyDecay):
        # unrolling the recurrence gives the binomial profile
        # C(t + eta, eta), exact in integer arithmetic
        return np.array(
            [float(math.comb(t + scheme.eta, scheme.eta)) for t in range(length)]
        )
    raise TypeError(f"unknown averaging scheme: {scheme!r}")


def closed_form_average(
    iterates: Sequence[np.ndarray], scheme: AveragingScheme
) -> np.ndarray:
    """Directly computed reported point for a stream fed at t = 0, 1, ...

    Testing oracle for `update_average`: evaluates sum(weight_t * w_t) /
    sum(weight_t) with the scheme's weight profile, independent of the
    online recurrence path.
    """
    if len(iterates) == 0:
        raise ValueError("empty iterate sequence")
    mat = np.asarray([as_weight_vector(w) for w in iterates], dtype=np.float64)
    wts = _weights(scheme, len(iterates))
    return (wts @ mat) / np.sum(wts)


def scheme_cli_name(scheme: AveragingScheme) -> str:
    """Canonical CLI/CSV name of a scheme."""
    if isinstance(scheme, NoAveraging):
        return "0"
    if isinstance(scheme, UniformAll):
        return "1"
    if isinstance(scheme, SuffixHalf):
        return "0.5"
    if isinstance(scheme, Doubling):
        return "D"
    if isinstance(scheme, PolyWeight):
        if scheme.k == 1:
            return "W"
        if scheme.k == 2:
            return "W2"
        return f"poly:{scheme.k}"
    if isinstance(scheme, PolyDecay):
        return f"decay:{scheme.eta}"
    raise TypeError(f"unknown averaging scheme: {scheme!r}")


def scheme_from_name(name: str, horizon: int) -> AveragingScheme:
    """Parse a CLI scheme name; `horizon` binds the 0.5 window."""
    name = name.strip()
    if name == "0":
        return NoAveraging()
    if name == "1":
        return UniformAll()
    if name == "0.5":
        return SuffixHalf(horizon=horizon)
    if name == "D":
        return Doubling()
    if name == "W":
        return PolyWeight(k=1)
    if name == "W2":
        return PolyWeight(k=2)
    if name.startswith("poly:"):
        return PolyWeight(k=int(name.split(":", 1)[1]))
    if name.startswith("decay:"):
        return PolyDecay(eta=int(name.split(":", 1)[1]))
    raise ValueError(f"unknown averaging scheme name: {name!r}")


def kernel_code(scheme: AveragingScheme) -> tuple[int, int]:
    """(dispatch code, integer parameter) consumed by the solver kernels."""
    if isinstance(scheme, NoAveraging):
        return 0, 0
    if isinstance(scheme, UniformAll):
        return 1, 0
    if isinstance(scheme, SuffixHalf):
        return 2, scheme.horizon // 2
    if isinstance(scheme, Doubling):
        return 3, 0
    if isinstance(scheme, PolyWeight):
        return 4, scheme.k
    if isinstance(scheme, PolyDecay):
        return 5, scheme.eta
    raise TypeError(f"unknown averaging scheme: {scheme!r}")
