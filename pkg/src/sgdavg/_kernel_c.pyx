# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled solver kernel.

Operation-for-operation mirror of `_kernel_py.run_segment`; compiled with
contraction disabled so the scalar loops here round exactly like numpy's
elementwise operations there. Any change to the update arithmetic must be
made in both files.
"""

from libc.math cimport isfinite, sqrt
from libc.stdint cimport int64_t


def run_segment(
    double[::1] w,
    double[:, ::1] avgs,
    double[::1] cumw,
    int64_t[::1] wstart,
    const int64_t[::1] codes,
    const int64_t[::1] iparams,
    const int64_t[::1] indptr,
    const int64_t[::1] indices,
    const double[::1] values,
    const double[::1] labels,
    const int64_t[::1] order,
    const double[::1] gammas,
    long long t_start,
    long long t_stop,
    double lam,
    double radius,
    double[::1] stats,
):
    """Advance steps t_start+1 .. t_stop in place; return 0, or the step t
    at which the iterate became non-finite."""
    cdef int64_t t, i, lo, hi, pos, j, si, r, half, k, finite
    cdef int64_t p = w.shape[0]
    cdef int64_t n_schemes = codes.shape[0]
    cdef double dot, y, margin, gamma, gj, nrm, scale, w_sq
    cdef double rho, one_minus, base, wt, new_cumw, eta
    cdef double max_w_sq = stats[0]
    cdef double sum_g_sq = stats[1]
    cdef int64_t bad = 0

    with nogil:
        for t in range(t_start + 1, t_stop + 1):
            i = order[t - 1]
            lo = indptr[i]
            hi = indptr[i + 1]
            dot = 0.0
            for j in range(lo, hi):
                dot += w[indices[j]] * values[j]
            y = labels[i]
            margin = y * dot
            gamma = gammas[t - 1]

            if margin < 1.0:
                pos = lo
                for j in range(p):
                    gj = lam * w[j]
                    if pos < hi and indices[pos] == j:
                        gj = gj - y * values[pos]
                        pos = pos + 1
                    sum_g_sq += gj * gj
                    w[j] = w[j] - gamma * gj
            else:
                for j in range(p):
                    gj = lam * w[j]
                    sum_g_sq += gj * gj
                    w[j] = w[j] - gamma * gj

            finite = 1
            for j in range(p):
                if not isfinite(w[j]):
                    finite = 0
                    break
            if not finite:
                bad = t
                break

            if radius > 0.0:
                nrm = 0.0
                for j in range(p):
                    nrm += w[j] * w[j]
                nrm = sqrt(nrm)
                while nrm > radius:
                    scale = radius / nrm
                    for j in range(p):
                        w[j] = w[j] * scale
                    nrm = 0.0
                    for j in range(p):
                        nrm += w[j] * w[j]
                    nrm = sqrt(nrm)

            w_sq = 0.0
            for j in range(p):
                w_sq += w[j] * w[j]
            if w_sq > max_w_sq:
                max_w_sq = w_sq

            for si in range(n_schemes):
                if codes[si] == 0:
                    rho = 1.0
                    cumw[si] = 1.0
                    wstart[si] = t
                elif codes[si] == 1:
                    rho = 1.0 / (<double> (t + 1))
                    cumw[si] = cumw[si] + 1.0
                elif codes[si] == 2:
                    half = iparams[si]
                    if t < half:
                        rho = 1.0
                        cumw[si] = 1.0
                        wstart[si] = t
                    elif t == half:
                        rho = 1.0
                        cumw[si] = 1.0
                        wstart[si] = half
                    else:
                        rho = 1.0 / (<double> (t - half + 1))
                        cumw[si] = cumw[si] + 1.0
                elif codes[si] == 3:
                    if t >= 1 and (t & (t - 1)) == 0:
                        rho = 1.0
                        cumw[si] = 1.0
                        wstart[si] = t
                    elif t == wstart[si]:
                        rho = 1.0
                        cumw[si] = 1.0
                    else:
                        rho = 1.0 / (<double> (t - wstart[si] + 1))
                        cumw[si] = cumw[si] + 1.0
                elif codes[si] == 4:
                    k = iparams[si]
                    base = <double> (t + 1)
                    wt = 1.0
                    for r in range(k):
                        wt = wt * base
                    new_cumw = cumw[si] + wt
                    rho = wt / new_cumw
                    cumw[si] = new_cumw
                else:
                    eta = <double> iparams[si]
                    rho = (1.0 + eta) / ((<double> t) + 1.0 + eta)
                    cumw[si] = cumw[si] * (((<double> t) + 1.0 + eta) / (<double> t))
                one_minus = 1.0 - rho
                for j in range(p):
                    avgs[si, j] = one_minus * avgs[si, j] + rho * w[j]

    stats[0] = max_w_sq
    stats[1] = sum_g_sq
    return bad
