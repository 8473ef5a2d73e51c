"""Fair predictors.

Unaware family: on the region where group 1 is over-represented the Bayes
value is re-ranked through F+ and mapped through a shared quantile function
Q; symmetrically with F- on the group-2 region; Bayes passthrough on the
neutral region.  Q* (the half-weight quantile barycenter of F+ and F-)
additionally equalizes group-wise risks.

Aware predictor: per-group quantile-mixture composition
(p1*G1^-1 + p2*G2^-1) o G_s applied to the group regressor value.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import compose_predict
from .errors import AssumptionViolation, ValidationError
from .measures import JordanDecomposition, RegionClassifier, normalize
from .transport1d import (
    ATOM_MASS_TOL,
    Cdf,
    QuantileFn,
    barycenter_quantile,
    cdf_from_density,
    generalized_inverse,
)


# ---------------------------------------------------------------------------
# Bayes regressors

@dataclass(frozen=True)
class AffineRegressor:
    beta: np.ndarray
    b: float

    def __post_init__(self):
        object.__setattr__(
            self, "beta", np.atleast_1d(np.asarray(self.beta, dtype=np.float64))
        )

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.beta.size == 1 and x.ndim <= 1:
            return self.beta[0] * x + self.b
        return x @ self.beta + self.b


@dataclass(frozen=True)
class LogisticRegressor:
    """x -> 1 / (1 + exp(a*x)); decreasing for a > 0."""

    a: float

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return 1.0 / (1.0 + np.exp(self.a * x))


@dataclass(frozen=True)
class TabulatedRegressor:
    """Values on a uniform grid, linearly interpolated between nodes."""

    lo: float
    hi: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.float64)
        )

    def __call__(self, x):
        xs = np.linspace(self.lo, self.hi, self.values.size)
        return np.interp(np.asarray(x, dtype=np.float64), xs, self.values)


# ---------------------------------------------------------------------------
# Unaware family

@dataclass(frozen=True)
class UnawarePredictor:
    f_star: object
    classifier: RegionClassifier | None
    F_plus: Cdf | None
    F_minus: Cdf | None
    Q: QuantileFn | None
    passthrough: bool = False

    def predict(self, x):
        x = np.asarray(x, dtype=np.float64)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        y = np.asarray(self.f_star(x), dtype=np.float64)
        if self.passthrough:
            return float(y[0]) if scalar else y
        labels = self.classifier.classify_many(x)
        if self.Q.from_step or self.F_plus.step or self.F_minus.step:
            out = y.copy()
            plus, minus = labels == 1, labels == -1
            out[plus] = self.Q._eval(np.atleast_1d(self.F_plus(y[plus])))
            out[minus] = self.Q._eval(np.atleast_1d(self.F_minus(y[minus])))
        else:
            out = compose_predict(
                np.ascontiguousarray(y),
                labels,
                self.F_plus.knots, self.F_plus.values,
                self.F_minus.knots, self.F_minus.values,
                self.Q.knots, self.Q.values,
            )
        return float(out[0]) if scalar else out

    def __call__(self, x):
        return self.predict(x)


def build_qstar(F_plus, F_minus):
    """Half-weight quantile barycenter of the two signed push-forwards."""
    return barycenter_quantile(
        generalized_inverse(F_plus), generalized_inverse(F_minus), 0.5
    )


def build_unaware(f_star, jd: JordanDecomposition, Q=None):
    """Assemble the unaware predictor; Q=None selects Q*.

    A degenerate decomposition (identical group distributions) returns a
    flagged Bayes passthrough.  Atomic push-forwards (e.g. a tabulated
    regressor constant on a positive-mass region) are rejected.
    """
    if jd.degenerate:
        return UnawarePredictor(f_star, None, None, None, None, passthrough=True)
    dens_p, _ = normalize(jd.mu_plus)
    dens_m, _ = normalize(jd.mu_minus)
    F_plus, atom_p = cdf_from_density(dens_p, f_star)
    F_minus, atom_m = cdf_from_density(dens_m, f_star)
    if max(atom_p, atom_m) > ATOM_MASS_TOL:
        raise AssumptionViolation(
            "push-forward of the Bayes regressor has an atom of mass "
            f"{max(atom_p, atom_m):.3g}; need non-atomic push-forwards"
        )
    if Q is None:
        Q = build_qstar(F_plus, F_minus)
    return UnawarePredictor(f_star, jd.classifier, F_plus, F_minus, Q)


def predict_unaware(pred, x):
    return pred.predict(x)


def random_monotone_q(seed, n_knots=129, lo=0.0, hi=1.0):
    """Random continuous non-decreasing Q on [0,1] with range [lo, hi]."""
    rng = np.random.default_rng(seed)
    inc = rng.random(n_knots - 1) + 0.05
    vals = np.concatenate([[0.0], np.cumsum(inc)])
    vals = lo + (hi - lo) * vals / vals[-1]
    return QuantileFn(np.linspace(0.0, 1.0, n_knots), vals)


# ---------------------------------------------------------------------------
# Aware predictor

@dataclass(frozen=True)
class AwarePredictor:
    group_regressors: tuple
    G: tuple
    G_inv: tuple
    p1: float

    @property
    def p2(self):
        return 1.0 - self.p1

    def predict(self, x, s):
        if s not in (1, 2):
            raise ValidationError(f"group label must be 1 or 2, got {s}")
        r = np.atleast_1d(
            np.asarray(self.group_regressors[s - 1](x), dtype=np.float64)
        )
        t = np.atleast_1d(self.G[s - 1](r))
        out = self.p1 * self.G_inv[0]._eval(t) + self.p2 * self.G_inv[1]._eval(t)
        return float(out[0]) if np.ndim(x) == 0 else out

    def __call__(self, x, s):
        return self.predict(x, s)


def build_aware(regressors, G1, G2, p1):
    # p1 = 1 is the single-group limit: the mixture collapses to G1^-1 o G1
    if not 0.0 < p1 <= 1.0:
        raise ValidationError(f"group-1 prior must lie in (0,1], got {p1}")
    return AwarePredictor(
        tuple(regressors),
        (G1, G2),
        (generalized_inverse(G1), generalized_inverse(G2)),
        p1,
    )


def predict_aware(pred, x, s):
    return pred.predict(x, s)


def gaussian_affine_aware(beta1, b1, beta2, b2, p1):
    """Closed-form group-wise affine fair predictor for centered group-wise
    Gaussian features N(0, I) and N(0, 2I) with affine group regressors.

    Returns ((slope1, intercept), (slope2, intercept)); the shared intercept
    is p1*b1 + p2*b2 and the slopes satisfy ||slope1|| = sqrt(2)*||slope2||,
    which makes the two push-forward Gaussians identical.
    """
    if not 0.0 < p1 <= 1.0:
        raise ValidationError(f"group-1 prior must lie in (0,1], got {p1}")
    beta1 = np.atleast_1d(np.asarray(beta1, dtype=np.float64))
    beta2 = np.atleast_1d(np.asarray(beta2, dtype=np.float64))
    n1 = np.linalg.norm(beta1)
    n2 = np.linalg.norm(beta2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValidationError("group regressor slopes must be non-zero")
    p2 = 1.0 - p1
    slope1 = (p1 + p2 * np.sqrt(2.0) * n2 / n1) * beta1
    slope2 = (p2 + p1 * n1 / (np.sqrt(2.0) * n2)) * beta2
    intercept = p1 * b1 + p2 * b2
    return (slope1, intercept), (slope2, intercept)
