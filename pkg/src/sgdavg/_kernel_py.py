"""Pure-Python solver kernel, the fallback when the extension is absent.

Mirrors `_kernel_c` operation for operation. Reductions that feed back
into the iterate (sample dot products, ball norms) run as sequential
plain-double loops in both backends; elementwise vector updates use numpy
here because elementwise IEEE operations match the C loops bit for bit.
The two diagnostics in `stats` are the only tolerance-level quantities
(this side reduces them with np.sum, the C side sequentially).
"""

from __future__ import annotations

import math

import numpy as np


def run_segment(
    w: np.ndarray,
    avgs: np.ndarray,
    cumw: np.ndarray,
    wstart: np.ndarray,
    codes: np.ndarray,
    iparams: np.ndarray,
    indptr: np.ndarray,
    indices: np.ndarray,
    values: np.ndarray,
    labels: np.ndarray,
    order: np.ndarray,
    gammas: np.ndarray,
    t_start: int,
    t_stop: int,
    lam: float,
    radius: float,
    stats: np.ndarray,
) -> int:
    """Advance steps t_start+1 .. t_stop in place; return 0, or the step t
    at which the iterate became non-finite."""
    n_schemes = codes.shape[0]
    max_w_sq = float(stats[0])
    sum_g_sq = float(stats[1])
    for t in range(t_start + 1, t_stop + 1):
        i = int(order[t - 1])
        lo = int(indptr[i])
        hi = int(indptr[i + 1])
        dot = 0.0
        for j in range(lo, hi):
            dot += float(w[indices[j]]) * float(values[j])
        y = float(labels[i])
        margin = y * dot
        gamma = float(gammas[t - 1])

        g = lam * w
        if margin < 1.0:
            g[indices[lo:hi]] -= y * values[lo:hi]
        sum_g_sq += float(np.sum(g * g))
        w -= gamma * g

        if not np.all(np.isfinite(w)):
            stats[0] = max_w_sq
            stats[1] = sum_g_sq
            return t

        if radius > 0.0:
            nrm = 0.0
            for j in range(w.shape[0]):
                nrm += float(w[j]) * float(w[j])
            nrm = math.sqrt(nrm)
            while nrm > radius:
                w *= radius / nrm
                nrm = 0.0
                for j in range(w.shape[0]):
                    nrm += float(w[j]) * float(w[j])
                nrm = math.sqrt(nrm)

        w_sq = float(np.sum(w * w))
        if w_sq > max_w_sq:
            max_w_sq = w_sq

        for si in range(n_schemes):
            code = int(codes[si])
            if code == 0:
                rho = 1.0
                cumw[si] = 1.0
                wstart[si] = t
            elif code == 1:
                rho = 1.0 / (t + 1)
                cumw[si] = cumw[si] + 1.0
            elif code == 2:
                half = int(iparams[si])
                if t < half:
                    rho = 1.0
                    cumw[si] = 1.0
                    wstart[si] = t
                elif t == half:
                    rho = 1.0
                    cumw[si] = 1.0
                    wstart[si] = half
                else:
                    rho = 1.0 / (t - half + 1)
                    cumw[si] = cumw[si] + 1.0
            elif code == 3:
                if t >= 1 and (t & (t - 1)) == 0:
                    rho = 1.0
                    cumw[si] = 1.0
                    wstart[si] = t
                elif t == int(wstart[si]):
                    rho = 1.0
                    cumw[si] = 1.0
                else:
                    rho = 1.0 / (t - int(wstart[si]) + 1)
                    cumw[si] = cumw[si] + 1.0
            elif code == 4:
                k = int(iparams[si])
                base = float(t + 1)
                wt = 1.0
                for _ in range(k):
                    wt *= base
                new_cumw = float(cumw[si]) + wt
                rho = wt / new_cumw
                cumw[si] = new_cumw
            else:
                eta = float(int(iparams[si]))
                rho = (1.0 + eta) / (t + 1.0 + eta)
                cumw[si] = float(cumw[si]) * ((t + 1.0 + eta) / t)
            one_minus = 1.0 - rho
            avgs[si] *= one_minus
            avgs[si] += rho * w
    stats[0] = max_w_sq
    stats[1] = sum_g_sq
    return 0
