"""One-dimensional distribution machinery: piecewise-linear CDFs,
generalized inverses, KS distance, squared Wasserstein-2, and quantile
barycenters.

Piecewise-linear CDFs (rather than step functions) keep compositions like
Q(F(.)) continuous; flat segments invert to their left endpoint per the
inf-based generalized-inverse convention.  Step CDFs are supported for
atomic inputs (point masses, equal-weight atoms) used in degenerate cases.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import cdf_eval, quantile_eval, w2_sq_quantile_integral
from .errors import DomainError, NumericError, ValidationError

# 2^13 + 1 points for quantile-grid integrals
W2_GRID = 8193
# duplicate push-forward values carrying more mass than this flag an atom
ATOM_MASS_TOL = 1e-3


@dataclass(frozen=True)
class Cdf:
    """knots strictly increasing; values non-decreasing in [0,1], last 1.
    Linear between knots, 0 before the first, 1 after the last.  step=True
    switches to a right-continuous step function (atomic distributions)."""

    knots: np.ndarray
    values: np.ndarray
    step: bool = False

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if k.ndim != 1 or k.shape != v.shape or k.size == 0:
            raise ValidationError("knots/values must be equal-length 1D arrays")
        if k.size > 1 and np.any(np.diff(k) <= 0):
            raise ValidationError("knots must be strictly increasing")
        if np.any(np.diff(v) < 0) or v[0] < -1e-12:
            raise ValidationError("values must be non-decreasing in [0,1]")
        if abs(v[-1] - 1.0) > 1e-12:
            raise ValidationError(f"last CDF value must be 1, got {v[-1]}")
        v = np.clip(v, 0.0, 1.0)
        v[-1] = 1.0
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.step:
            j = np.searchsorted(self.knots, t_arr, side="right") - 1
            out = np.where(j < 0, 0.0, self.values[np.clip(j, 0, None)])
        else:
            out = cdf_eval(self.knots, self.values, t_arr)
        return out if np.ndim(t) else float(out[0])

    @classmethod
    def from_atoms(cls, atoms, weights=None):
        atoms = np.asarray(atoms, dtype=np.float64)
        if weights is None:
            weights = np.full(atoms.size, 1.0 / atoms.size)
        order = np.argsort(atoms)
        cum = np.cumsum(np.asarray(weights, dtype=np.float64)[order])
        cum /= cum[-1]
        return cls(atoms[order], cum, step=True)


@dataclass(frozen=True)
class QuantileFn:
    """Generalized inverse on (0, 1]: knots are probability levels
    (non-decreasing, duplicates encode jumps), values the quantiles.
    from_step marks inverses of step CDFs (pure searchsorted lookup)."""

    knots: np.ndarray
    values: np.ndarray
    from_step: bool = False

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if k.shape != v.shape or k.ndim != 1 or k.size == 0:
            raise ValidationError("knots/values must be equal-length 1D arrays")
        if np.any(np.diff(k) < 0) or np.any(np.diff(v) < 0):
            raise ValidationError("quantile knots and values must be non-decreasing")
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if np.any(t_arr <= 0) or np.any(t_arr > 1):
            raise DomainError("quantile function defined on (0, 1]")
        out = self._eval(t_arr)
        return out if np.ndim(t) else float(out[0])

    def _eval(self, t_arr):
        """Evaluation without the domain check; t=0 yields the left limit."""
        if self.from_step:
            j = np.searchsorted(self.knots, t_arr, side="left")
            return self.values[np.clip(j, 0, self.values.size - 1)]
        return quantile_eval(self.knots, self.values, t_arr)


def cdf_from_density(d, map_fn=None):
    """CDF of the push-forward of a grid density through map_fn.

    Each grid cell's trapezoid mass is spread uniformly over the interval
    its endpoints map to, so the CDF equals the cumulative trapezoid at
    every mapped node for monotone maps and is second-order accurate.
    Returns (cdf, max_atom_mass); the second entry is the largest mass
    collapsed onto a single value, used to detect atomic push-forwards.
    """
    x = d.x
    y = map_fn(x) if map_fn is not None else x
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)):
        raise NumericError("map produced non-finite values on the support")
    v = d.values
    cell_mass = 0.5 * d.cell_width * (v[:-1] + v[1:])
    total = cell_mass.sum()
    if total <= 0:
        raise NumericError("density carries no mass")
    a = np.minimum(y[:-1], y[1:])
    b = np.maximum(y[:-1], y[1:])
    span = float(y.max() - y.min())
    if span <= 0:
        return Cdf(np.array([y[0]]), np.array([1.0]), step=True), 1.0
    flat = (b - a) <= 1e-13 * span
    max_atom = 0.0
    if np.any(flat & (cell_mass > 0)):
        # coincident endpoints concentrate mass at a point: report the atom
        # and widen to a resolvable sliver so the CDF stays representable
        fi = flat & (cell_mass > 0)
        _, inv = np.unique(np.round(a[fi], 12), return_inverse=True)
        max_atom = float(np.bincount(inv, weights=cell_mass[fi]).max() / total)
    b = np.where(flat, a + 1e-12 * span, b)
    # the CDF slope gains mass/width at a and loses it at b
    rate = np.where(cell_mass > 0, cell_mass, 0.0) / (b - a)
    pts = np.concatenate([a, b])
    deltas = np.concatenate([rate, -rate])
    order = np.argsort(pts, kind="stable")
    pts, deltas = pts[order], deltas[order]
    first = np.concatenate([[True], np.diff(pts) > 0])
    group = np.cumsum(first) - 1
    kn = pts[first]
    slopes = np.cumsum(np.bincount(group, weights=deltas))
    cum = np.concatenate([[0.0], np.cumsum(slopes[:-1] * np.diff(kn))]) / total
    cum = np.clip(np.maximum.accumulate(cum), 0.0, 1.0)
    cum[-1] = 1.0
    return Cdf(kn, cum), max_atom


def generalized_inverse(F):
    """Quantile function Q(t) = inf{u : F(u) >= t}."""
    if F.step:
        return QuantileFn(F.values, F.knots, from_step=True)
    return QuantileFn(F.values, F.knots)


def ks_distance(a, b):
    """Sup of |a - b| over both knot sets (plus left limits at jumps)."""
    cand = np.concatenate([a.knots, b.knots])
    cand = np.concatenate([cand, np.nextafter(cand, -np.inf)])
    return float(np.max(np.abs(a(cand) - b(cand))))


def wasserstein2_sq(a, b, n_grid=W2_GRID):
    """Integral over [0,1] of the squared quantile difference."""
    qa = generalized_inverse(a)
    qb = generalized_inverse(b)
    if qa.from_step or qb.from_step:
        t = np.linspace(0.0, 1.0, n_grid)
        diff = qa._eval(t) - qb._eval(t)
        return float(np.trapezoid(diff * diff, t))
    return float(
        w2_sq_quantile_integral(qa.knots, qa.values, qb.knots, qb.values, n_grid)
    )


def barycenter_quantile(qa, qb, w):
    """Pointwise w*qa + (1-w)*qb on the merged knot grid; with w = 1/2 this
    is the quantile function of the Wasserstein-2 barycenter."""
    if not 0.0 <= w <= 1.0:
        raise ValidationError(f"weight must lie in [0,1], got {w}")
    knots = np.union1d(qa.knots, qb.knots)
    vals = w * qa._eval(knots) + (1.0 - w) * qb._eval(knots)
    vals = np.maximum.accumulate(vals)
    return QuantileFn(knots, vals)
