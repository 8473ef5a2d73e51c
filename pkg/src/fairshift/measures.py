"""Group-wise feature distributions on 1D grids and the Jordan decomposition
of their difference.

The signed measure (group-1 density minus group-2 density) splits into a
positive part, a negative part, and a neutral region where the densities
agree.  All quadrature is trapezoidal on uniform grids.
"""

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import (
    DegenerateDecomposition,
    DomainError,
    GeometryError,
    ValidationError,
)

MASS_RTOL = 1e-6
DEGENERATE_MASS = 1e-8
# neutrality band, relative to the max density
DEFAULT_EPSILON_REL = 1e-12


class Region(IntEnum):
    MINUS = -1
    NEUTRAL = 0
    PLUS = 1


@dataclass(frozen=True)
class DensityGrid1D:
    """Non-negative density sampled at the n_cells+1 uniform nodes of
    [lo, hi]; mass is the trapezoidal integral."""

    lo: float
    hi: float
    n_cells: int
    values: np.ndarray

    def __post_init__(self):
        if self.hi <= self.lo:
            raise ValidationError(f"need hi > lo, got [{self.lo}, {self.hi}]")
        if self.n_cells < 2:
            raise ValidationError("n_cells must be >= 2")
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.n_cells + 1,):
            raise ValidationError(
                f"values must have n_cells+1={self.n_cells + 1} entries, got {v.shape}"
            )
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValidationError("density values must be finite and non-negative")
        object.__setattr__(self, "values", v)

    @property
    def x(self):
        return np.linspace(self.lo, self.hi, self.n_cells + 1)

    @property
    def cell_width(self):
        return (self.hi - self.lo) / self.n_cells

    def node_weights(self):
        """Trapezoid quadrature weights per node."""
        w = np.full(self.n_cells + 1, self.cell_width)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def mass(self):
        return float(np.trapezoid(self.values, dx=self.cell_width))

    def same_geometry(self, other):
        return (
            self.n_cells == other.n_cells
            and np.isclose(self.lo, other.lo, rtol=0, atol=1e-12)
            and np.isclose(self.hi, other.hi, rtol=0, atol=1e-12)
        )

    def is_probability(self, rtol=MASS_RTOL):
        return abs(self.mass() - 1.0) <= rtol

    @classmethod
    def from_pdf(cls, pdf, lo, hi, n_cells, normalize=True):
        x = np.linspace(lo, hi, n_cells + 1)
        v = np.asarray(pdf(x), dtype=np.float64)
        g = cls(lo, hi, n_cells, v)
        if normalize:
            g = cls(lo, hi, n_cells, v / g.mass())
        return g

    @classmethod
    def gaussian(cls, mean, var, lo, hi, n_cells):
        s = np.sqrt(var)

        def pdf(x):
            z = (x - mean) / s
            return np.exp(-0.5 * z * z) / (s * np.sqrt(2 * np.pi))

        return cls.from_pdf(pdf, lo, hi, n_cells)

    def to_csv(self, path):
        write_grid_csv(path, ("x", "value"), (self.x, self.values))


@dataclass(frozen=True)
class SubMeasureGrid:
    """Non-negative sub-probability measure on the geometry of `grid`."""

    grid: DensityGrid1D
    values: np.ndarray
    mass: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if np.any(v < 0):
            raise ValidationError("sub-measure values must be non-negative")
        m = float(np.trapezoid(v, dx=self.grid.cell_width))
        if abs(m - self.mass) > MASS_RTOL * max(1.0, abs(self.mass)):
            raise ValidationError(
                f"declared mass {self.mass} inconsistent with integral {m}"
            )
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class GaussianGroupParams:
    """Isotropic Gaussian feature distribution: N(mean, covariance_scale * I)."""

    mean: np.ndarray
    covariance_scale: float

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        if self.covariance_scale <= 0:
            raise ValidationError("covariance_scale must be positive")
        object.__setattr__(self, "mean", m)

    @property
    def dim(self):
        return self.mean.shape[0]

    def log_density(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        d = self.dim
        sq = np.sum((x - self.mean) ** 2, axis=-1)
        return -0.5 * sq / self.covariance_scale - 0.5 * d * np.log(
            2 * np.pi * self.covariance_scale
        )


@dataclass(frozen=True)
class RegionClassifier:
    """Labels feature points Plus / Minus / Neutral.

    kinds:
      grid-sign            sign of (p1 - p2) interpolated on a 1D grid
      gaussian-log-density closed-form log-density difference, any dimension
      disjoint-support     membership in either group's support grid
    """

    kind: str
    epsilon: float = 0.0
    # grid-sign / disjoint-support payload
    lo: float = 0.0
    hi: float = 0.0
    diff: np.ndarray | None = None
    support1: np.ndarray | None = None
    support2: np.ndarray | None = None
    # gaussian payload
    g1: GaussianGroupParams | None = None
    g2: GaussianGroupParams | None = None

    def classify_many(self, x):
        """Vector of labels in {-1, 0, +1} (Region values)."""
        if self.kind == "gaussian-log-density":
            d = self.g1.log_density(x) - self.g2.log_density(x)
            return np.sign(np.where(np.abs(d) <= self.epsilon, 0.0, d)).astype(np.int8)
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < self.lo - 1e-12) or np.any(x > self.hi + 1e-12):
            raise DomainError(
                f"point outside working range [{self.lo}, {self.hi}]"
            )
        xs = np.linspace(self.lo, self.hi, len(self.diff if self.diff is not None else self.support1))
        if self.kind == "grid-sign":
            d = np.interp(x, xs, self.diff)
            return np.sign(np.where(np.abs(d) <= self.epsilon, 0.0, d)).astype(np.int8)
        if self.kind == "disjoint-support":
            in1 = np.interp(x, xs, self.support1) > self.epsilon
            in2 = np.interp(x, xs, self.support2) > self.epsilon
            out = np.zeros(x.shape, dtype=np.int8)
            out[in1] = 1
            out[in2 & ~in1] = -1
            return out
        raise ValidationError(f"unknown classifier kind {self.kind!r}")

    def classify(self, x):
        return Region(int(self.classify_many(np.atleast_1d(x))[0]))


@dataclass(frozen=True)
class JordanDecomposition:
    mu_plus: SubMeasureGrid
    mu_minus: SubMeasureGrid
    classifier: RegionClassifier
    shared_mass: float

    @property
    def degenerate(self):
        return self.mu_plus.mass <= DEGENERATE_MASS


def jordan_decompose(p1, p2, epsilon_rel=DEFAULT_EPSILON_REL):
    """Split p1 - p2 into its positive and negative parts.

    Inputs must share grid geometry and integrate to 1; they are rescaled to
    exact unit mass first so the two parts carry identical mass to rounding.
    """
    if not p1.same_geometry(p2):
        raise GeometryError("density grids must share geometry")
    for name, p in (("p1", p1), ("p2", p2)):
        if not p.is_probability():
            raise ValidationError(f"{name} integrates to {p.mass()}, expected 1")
    v1 = p1.values / p1.mass()
    v2 = p2.values / p2.mass()
    diff = v1 - v2
    plus = np.maximum(diff, 0.0)
    minus = np.maximum(-diff, 0.0)
    h = p1.cell_width
    m_plus = float(np.trapezoid(plus, dx=h))
    m_minus = float(np.trapezoid(minus, dx=h))
    assert abs(m_plus - m_minus) <= 1e-9
    eps = epsilon_rel * max(v1.max(), v2.max())
    clf = RegionClassifier(
        kind="grid-sign", epsilon=eps, lo=p1.lo, hi=p1.hi, diff=diff
    )
    return JordanDecomposition(
        mu_plus=SubMeasureGrid(p1, plus, m_plus),
        mu_minus=SubMeasureGrid(p1, minus, m_minus),
        classifier=clf,
        shared_mass=1.0 - m_plus,
    )


def normalize(m, epsilon_mass=DEGENERATE_MASS):
    """Project a sub-measure onto probability densities; returns the density
    and the original mass."""
    if m.mass <= epsilon_mass:
        raise DegenerateDecomposition(
            f"sub-measure mass {m.mass} below threshold {epsilon_mass}"
        )
    g = m.grid
    dens = DensityGrid1D(g.lo, g.hi, g.n_cells, m.values / m.mass)
    return dens, m.mass


def classify(c, x):
    return c.classify(x)


def write_grid_csv(path, headers, columns):
    """CSV with 17-significant-digit floats, written atomically."""
    import os
    import tempfile

    cols = [np.asarray(c) for c in columns]
    lines = [",".join(headers)]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.17g}" for v in row))
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as f:
        f.write("\n".join(lines) + "\n")
    os.replace(tmp, path)
