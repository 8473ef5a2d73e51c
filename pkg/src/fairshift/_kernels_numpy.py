"""Pure-numpy implementations of the hot evaluation kernels.

All functions operate on raw knot/value arrays of piecewise-linear monotone
functions.  CDFs are 0 before the first knot and 1 after the last; quantile
functions use the inf-based generalized-inverse convention, so an exact hit
on a duplicated knot returns the value at the first occurrence.
"""

import numpy as np


def cdf_eval(knots, values, t):
    t = np.asarray(t, dtype=np.float64)
    out = np.interp(t, knots, values)
    out = np.where(t < knots[0], 0.0, out)
    return np.where(t >= knots[-1], values[-1], out)


def quantile_eval(knots, values, t):
    t = np.asarray(t, dtype=np.float64)
    n = len(knots)
    j = np.searchsorted(knots, t, side="left")
    j = np.clip(j, 1, n - 1)
    k0 = knots[j - 1]
    k1 = knots[j]
    v0 = values[j - 1]
    v1 = values[j]
    width = k1 - k0
    frac = np.where(width > 0.0, (t - k0) / np.where(width > 0.0, width, 1.0), 1.0)
    out = v0 + frac * (v1 - v0)
    out = np.where(t <= knots[0], values[0], out)
    return np.where(t >= knots[-1], values[-1], out)


def compose_predict(y, labels, fpk, fpv, fmk, fmv, qk, qv):
    """Three-case rule: Q(F+(y)) on the plus region, Q(F-(y)) on the minus
    region, y itself on the neutral region."""
    out = np.array(y, dtype=np.float64, copy=True)
    plus = labels == 1
    minus = labels == -1
    if np.any(plus):
        out[plus] = quantile_eval(qk, qv, cdf_eval(fpk, fpv, y[plus]))
    if np.any(minus):
        out[minus] = quantile_eval(qk, qv, cdf_eval(fmk, fmv, y[minus]))
    return out


def w2_sq_quantile_integral(qak, qav, qbk, qbv, n_grid):
    """Trapezoid of (Qa - Qb)^2 over a uniform grid on [0, 1]."""
    t = np.linspace(0.0, 1.0, n_grid)
    d = quantile_eval(qak, qav, t) - quantile_eval(qbk, qbv, t)
    return float(np.trapezoid(d * d, t))
