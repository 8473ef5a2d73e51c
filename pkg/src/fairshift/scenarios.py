"""Scenario catalog and experiment drivers.

A scenario specifies group priors, group-conditional feature distributions
(isotropic Gaussians or explicit grid densities) and the Bayes regressor.
The canonical scenario "s1" is the logistic/Gaussian setup behind the
figure CSVs: p1 = 0.5, group 1 ~ N(-1, 1), group 2 ~ N(1, 2),
f*(x) = 1 / (1 + exp(3x)).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import DegenerateDecomposition, GeometryError, ValidationError
from .measures import (
    DensityGrid1D,
    GaussianGroupParams,
    RegionClassifier,
    jordan_decompose,
    normalize,
)
from .predictors import AffineRegressor, LogisticRegressor
from .transport1d import Cdf, cdf_from_density, generalized_inverse

DEFAULT_N_CELLS = 4096
PADDING_SIGMAS = 8.0


@dataclass(frozen=True)
class Scenario:
    name: str
    p1: float
    group1: object  # GaussianGroupParams | DensityGrid1D
    group2: object
    f_star: object
    group_regressors: tuple | None = None
    n_cells: int = DEFAULT_N_CELLS

    def __post_init__(self):
        if not 0.0 < self.p1 < 1.0:
            raise ValidationError(f"p1 must lie in (0,1), got {self.p1}")

    @property
    def p2(self):
        return 1.0 - self.p1

    @property
    def is_gaussian(self):
        return isinstance(self.group1, GaussianGroupParams)

    @property
    def dim(self):
        return self.group1.dim if self.is_gaussian else 1

    def working_range(self):
        if self.is_gaussian:
            if self.dim != 1:
                raise ValidationError("working_range defined for 1D scenarios only")
            m1, m2 = self.group1.mean[0], self.group2.mean[0]
            s = PADDING_SIGMAS * np.sqrt(
                max(self.group1.covariance_scale, self.group2.covariance_scale)
            )
            return min(m1, m2) - s, max(m1, m2) + s
        return self.group1.lo, self.group1.hi

    def group_densities(self, n_cells=None):
        """Group-conditional densities on a shared grid."""
        n = n_cells or self.n_cells
        if self.is_gaussian:
            if self.dim != 1:
                raise ValidationError("grid densities defined for 1D scenarios only")
            lo, hi = self.working_range()
            d1 = DensityGrid1D.gaussian(
                self.group1.mean[0], self.group1.covariance_scale, lo, hi, n
            )
            d2 = DensityGrid1D.gaussian(
                self.group2.mean[0], self.group2.covariance_scale, lo, hi, n
            )
            return d1, d2
        if not self.group1.same_geometry(self.group2):
            raise GeometryError("grid scenario groups must share geometry")
        return self.group1, self.group2

    def decomposition(self, n_cells=None):
        d1, d2 = self.group_densities(n_cells)
        return jordan_decompose(d1, d2)


@dataclass(frozen=True)
class SampleBatch:
    xs: np.ndarray
    ss: np.ndarray
    fstar_vals: np.ndarray
    seed: int
    n: int


def _sample_density(d, n, rng):
    F, _ = cdf_from_density(d)
    return generalized_inverse(F)._eval(rng.random(n))


def sample(sc: Scenario, n: int, seed: int) -> SampleBatch:
    """Seed-deterministic joint draw: labels from the prior, features from
    the group-conditional law."""
    if n < 1:
        raise ValidationError(f"sample size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    ss = np.where(rng.random(n) < sc.p1, 1, 2).astype(np.int8)
    if sc.is_gaussian:
        z = rng.standard_normal((n, sc.dim))
        scales = np.where(
            ss == 1,
            np.sqrt(sc.group1.covariance_scale),
            np.sqrt(sc.group2.covariance_scale),
        )
        means = np.where((ss == 1)[:, None], sc.group1.mean, sc.group2.mean)
        xs = means + scales[:, None] * z
        if sc.dim == 1:
            xs = xs[:, 0]
    else:
        d1, d2 = sc.group_densities()
        xs = np.empty(n)
        u1 = ss == 1
        xs[u1] = _sample_density(d1, int(u1.sum()), rng)
        xs[~u1] = _sample_density(d2, int((~u1).sum()), rng)
    fv = np.asarray(sc.f_star(xs), dtype=np.float64)
    return SampleBatch(xs=xs, ss=ss, fstar_vals=fv, seed=seed, n=n)


def pushforward_cdfs(sc: Scenario, jd, n=100_000, seed=0):
    """CDFs of the Bayes values under the normalized signed parts.

    1D scenarios use exact grid quadrature.  Multivariate Gaussian scenarios
    fall back to importance-reweighted Monte Carlo: per-group samples are
    classified by the closed-form log-density difference and reweighted by
    |density difference| / group density.
    """
    if sc.dim == 1:
        dens_p, _ = normalize(jd.mu_plus)
        dens_m, _ = normalize(jd.mu_minus)
        F_plus, _ = cdf_from_density(dens_p, sc.f_star)
        F_minus, _ = cdf_from_density(dens_m, sc.f_star)
        return F_plus, F_minus
    return _pushforward_cdfs_mc(sc, n, seed)


def _pushforward_cdfs_mc(sc, n, seed):
    rng = np.random.default_rng(seed)
    out = []
    pairs = [(sc.group1, sc.group2), (sc.group2, sc.group1)]
    for own, other in pairs:
        z = rng.standard_normal((n, sc.dim))
        x = own.mean + np.sqrt(own.covariance_scale) * z
        # weight of the signed part within the sampling group
        w = np.maximum(1.0 - np.exp(other.log_density(x) - own.log_density(x)), 0.0)
        keep = w > 0
        if not np.any(keep):
            raise DegenerateDecomposition("no signed mass found by Monte Carlo")
        y = np.ravel(np.asarray(sc.f_star(x[keep]), dtype=np.float64))
        ws = w[keep]
        order = np.argsort(y)
        ys, cum = y[order], np.cumsum(ws[order])
        cum /= cum[-1]
        uniq = np.concatenate([np.diff(ys) > 0, [True]])
        out.append(Cdf(ys[uniq], np.minimum(cum[uniq], 1.0)))
    return out[0], out[1]


def gaussian_ks(m1, s1, m2, s2):
    """Exact KS distance between two univariate Gaussians."""
    if s1 <= 0 or s2 <= 0:
        raise ValidationError("scales must be positive")
    if np.isclose(s1, s2):
        if np.isclose(m1, m2):
            return 0.0
        t = 0.5 * (m1 + m2)
        return abs(norm.cdf(t, m1, s1) - norm.cdf(t, m2, s2))
    # stationary points of F1 - F2: density crossings, roots of a quadratic
    a = 1.0 / s1**2 - 1.0 / s2**2
    b = -2.0 * (m1 / s1**2 - m2 / s2**2)
    c = m1**2 / s1**2 - m2**2 / s2**2 - 2.0 * np.log(s2 / s1)
    disc = b * b - 4.0 * a * c
    roots = (-b + np.array([-1.0, 1.0]) * np.sqrt(max(disc, 0.0))) / (2.0 * a)
    return float(np.max(np.abs(norm.cdf(roots, m1, s1) - norm.cdf(roots, m2, s2))))


def affine_dp_scan(g1: GaussianGroupParams, g2: GaussianGroupParams, betas, b=0.0):
    """Analytic DP gap of the affine unaware predictor <beta, x> + b for
    each beta in the scan; groups must have covariance scales (v, 2v)."""
    if not np.isclose(g2.covariance_scale, 2.0 * g1.covariance_scale):
        raise ValidationError("scan requires covariance scales in ratio 1:2")
    rows = []
    for beta in betas:
        beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
        nb = np.linalg.norm(beta)
        if nb == 0.0:
            rows.append((beta, 0.0))
            continue
        a1 = float(beta @ g1.mean) + b
        a2 = float(beta @ g2.mean) + b
        s1 = nb * np.sqrt(g1.covariance_scale)
        s2 = nb * np.sqrt(g2.covariance_scale)
        rows.append((beta, gaussian_ks(a1, s1, a2, s2)))
    return rows


# ---------------------------------------------------------------------------
# Catalog

def _s1():
    return Scenario(
        name="s1",
        p1=0.5,
        group1=GaussianGroupParams(np.array([-1.0]), 1.0),
        group2=GaussianGroupParams(np.array([1.0]), 2.0),
        f_star=LogisticRegressor(3.0),
    )


def _identical():
    g = GaussianGroupParams(np.array([0.0]), 1.0)
    return Scenario(
        name="identical", p1=0.5, group1=g, group2=g, f_star=LogisticRegressor(3.0)
    )


def _disjoint():
    """Two triangular bumps with non-overlapping supports."""
    lo, hi, n = -0.5, 3.5, DEFAULT_N_CELLS
    x = np.linspace(lo, hi, n + 1)
    bump1 = np.maximum(1.0 - np.abs(x - 0.5) / 0.5, 0.0)
    bump2 = np.maximum(1.0 - np.abs(x - 2.5) / 0.5, 0.0)
    h = (hi - lo) / n
    d1 = DensityGrid1D(lo, hi, n, bump1 / np.trapezoid(bump1, dx=h))
    d2 = DensityGrid1D(lo, hi, n, bump2 / np.trapezoid(bump2, dx=h))
    return Scenario(
        name="disjoint", p1=0.5, group1=d1, group2=d2, f_star=LogisticRegressor(3.0)
    )


CATALOG = {
    "s1": _s1,
    "identical": _identical,
    "disjoint": _disjoint,
}


def get_scenario(name: str) -> Scenario:
    try:
        return CATALOG[name]()
    except KeyError:
        raise ValidationError(
            f"unknown scenario {name!r}; available: {sorted(CATALOG)}"
        ) from None


def random_scenario(seed: int) -> Scenario:
    """Random 1D Gaussian scenario with a logistic Bayes regressor."""
    rng = np.random.default_rng(seed)
    m1, m2 = rng.uniform(-2.0, 2.0, size=2)
    v1, v2 = rng.uniform(0.5, 2.5, size=2)
    return Scenario(
        name=f"random-{seed}",
        p1=float(rng.uniform(0.3, 0.7)),
        group1=GaussianGroupParams(np.array([m1]), float(v1)),
        group2=GaussianGroupParams(np.array([m2]), float(v2)),
        f_star=LogisticRegressor(float(rng.uniform(1.0, 4.0))),
    )
