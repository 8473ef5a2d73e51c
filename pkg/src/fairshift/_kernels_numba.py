"""Numba-compiled versions of the hot evaluation kernels.

Same contracts as _kernels_numpy; scalar helpers are fused into single
loops so batch prediction avoids intermediate arrays.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _cdf_eval_scalar(knots, values, t):
    n = knots.shape[0]
    if t < knots[0]:
        return 0.0
    if t >= knots[n - 1]:
        return values[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if knots[mid] <= t:
            lo = mid
        else:
            hi = mid
    w = knots[hi] - knots[lo]
    if w <= 0.0:
        return values[hi]
    return values[lo] + (t - knots[lo]) / w * (values[hi] - values[lo])


@njit(cache=True)
def _quantile_eval_scalar(knots, values, t):
    n = knots.shape[0]
    if t <= knots[0]:
        return values[0]
    if t >= knots[n - 1]:
        return values[n - 1]
    # first index with knots[j] >= t (inf convention on duplicates)
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if knots[mid] < t:
            lo = mid
        else:
            hi = mid
    w = knots[hi] - knots[lo]
    if w <= 0.0:
        return values[hi]
    return values[lo] + (t - knots[lo]) / w * (values[hi] - values[lo])


@njit(cache=True)
def cdf_eval(knots, values, t):
    t = np.asarray(t)
    out = np.empty(t.shape[0], dtype=np.float64)
    for i in range(t.shape[0]):
        out[i] = _cdf_eval_scalar(knots, values, t[i])
    return out


@njit(cache=True)
def quantile_eval(knots, values, t):
    t = np.asarray(t)
    out = np.empty(t.shape[0], dtype=np.float64)
    for i in range(t.shape[0]):
        out[i] = _quantile_eval_scalar(knots, values, t[i])
    return out


@njit(cache=True)
def compose_predict(y, labels, fpk, fpv, fmk, fmv, qk, qv):
    out = np.empty(y.shape[0], dtype=np.float64)
    for i in range(y.shape[0]):
        if labels[i] == 1:
            out[i] = _quantile_eval_scalar(qk, qv, _cdf_eval_scalar(fpk, fpv, y[i]))
        elif labels[i] == -1:
            out[i] = _quantile_eval_scalar(qk, qv, _cdf_eval_scalar(fmk, fmv, y[i]))
        else:
            out[i] = y[i]
    return out


@njit(cache=True)
def w2_sq_quantile_integral(qak, qav, qbk, qbv, n_grid):
    h = 1.0 / (n_grid - 1)
    acc = 0.0
    for i in range(n_grid):
        t = i * h
        d = _quantile_eval_scalar(qak, qav, t) - _quantile_eval_scalar(qbk, qbv, t)
        sq = d * d
        if i == 0 or i == n_grid - 1:
            acc += 0.5 * sq
        else:
            acc += sq
    return acc * h
