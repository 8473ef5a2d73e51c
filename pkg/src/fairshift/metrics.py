"""Fairness and risk metrics.

DP gap is the KS distance between the group-conditional output
distributions; the signed variant compares push-forwards of the normalized
positive/negative parts instead (equivalent by the signed-measure
criterion).  Risks are group-conditional mean squared deviations from the
Bayes regressor.  Every metric has a quadrature and a Monte Carlo route;
Monte Carlo draws are chunked with derived seeds so results do not depend
on how work is partitioned.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ValidationError
from .measures import normalize
from .predictors import AwarePredictor
from .transport1d import cdf_from_density, ks_distance, wasserstein2_sq

MC_CHUNKS = 16


@dataclass(frozen=True)
class FairnessReport:
    dp_gap: float
    signed_dp_gap: float
    risk_group1: float
    risk_group2: float
    egwr_gap: float
    total_risk: float
    risk_identity_residual: float
    barycenter_residual: float
    method: str
    degenerate: bool = False

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(
            {k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in self.to_dict().items()},
            indent=2,
            sort_keys=True,
        )

    csv_header = (
        "dp_gap,signed_dp_gap,risk_group1,risk_group2,egwr_gap,"
        "total_risk,risk_identity_residual,barycenter_residual,method,degenerate"
    )

    def to_csv_row(self):
        d = self.to_dict()
        parts = []
        for key in self.csv_header.split(","):
            v = d[key]
            parts.append(f"{v:.17g}" if isinstance(v, float) else str(v))
        return ",".join(parts)


def _group_fns(pred):
    """Per-group prediction callables from an unaware callable, an aware
    predictor, or an explicit (f1, f2) pair."""
    if isinstance(pred, AwarePredictor):
        return (lambda x: pred.predict(x, 1)), (lambda x: pred.predict(x, 2))
    if isinstance(pred, tuple):
        return pred
    return pred, pred


def _derived_rngs(seed, n):
    """Fixed-size chunks with spawned seeds; partition-count independent."""
    sizes = np.full(MC_CHUNKS, n // MC_CHUNKS)
    sizes[: n % MC_CHUNKS] += 1
    children = np.random.SeedSequence(seed).spawn(MC_CHUNKS)
    return [(np.random.default_rng(c), int(m)) for c, m in zip(children, sizes)]


def _sample_group(sc, s, n, seed):
    from .scenarios import _sample_density  # local import to avoid a cycle

    group = sc.group1 if s == 1 else sc.group2
    chunks = []
    for rng, m in _derived_rngs(seed * 2 + s, n):
        if m == 0:
            continue
        if sc.is_gaussian:
            z = rng.standard_normal((m, sc.dim))
            x = group.mean + np.sqrt(group.covariance_scale) * z
            chunks.append(x[:, 0] if sc.dim == 1 else x)
        else:
            chunks.append(_sample_density(group, m, rng))
    return np.concatenate(chunks)


def _ecdf_ks(a, b):
    a = np.sort(a)
    b = np.sort(b)
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def dp_gap(pred, sc, method="quadrature", n=100_000, seed=0):
    """KS distance between the two group-conditional output distributions."""
    f1, f2 = _group_fns(pred)
    if method == "quadrature":
        d1, d2 = sc.group_densities()
        F1, _ = cdf_from_density(d1, f1)
        F2, _ = cdf_from_density(d2, f2)
        return ks_distance(F1, F2)
    if method == "monte-carlo":
        y1 = f1(_sample_group(sc, 1, n, seed))
        y2 = f2(_sample_group(sc, 2, n, seed))
        return _ecdf_ks(y1, y2)
    raise ValidationError(f"unknown method {method!r}")


def signed_dp_gap(pred, jd):
    """KS distance between the push-forwards of the normalized signed parts;
    0 (vacuous) when the decomposition is degenerate."""
    if jd.degenerate:
        return 0.0
    f1, _ = _group_fns(pred)
    dens_p, _ = normalize(jd.mu_plus)
    dens_m, _ = normalize(jd.mu_minus)
    Fp, _ = cdf_from_density(dens_p, f1)
    Fm, _ = cdf_from_density(dens_m, f1)
    return ks_distance(Fp, Fm)


def groupwise_risks(pred, sc, method="quadrature", n=100_000, seed=0):
    """Group-conditional mean squared deviations from the Bayes regressor."""
    f1, f2 = _group_fns(pred)
    if method == "quadrature":
        d1, d2 = sc.group_densities()
        out = []
        for d, f in ((d1, f1), (d2, f2)):
            x = d.x
            err = np.asarray(sc.f_star(x)) - np.asarray(f(x))
            out.append(float(np.sum(d.node_weights() * d.values * err * err)))
        return out[0], out[1]
    if method == "monte-carlo":
        out = []
        for s, f in ((1, f1), (2, f2)):
            x = _sample_group(sc, s, n, seed)
            err = np.asarray(sc.f_star(x)) - np.asarray(f(x))
            out.append(float(np.mean(err * err)))
        return out[0], out[1]
    raise ValidationError(f"unknown method {method!r}")


def total_risk_and_identity(pred, sc, jd, method="quadrature", n=100_000, seed=0):
    """Total risk p1*r1 + p2*r2 and its residual against the group-2-only
    integral (exact for the risk-equalizing predictor)."""
    r1, r2 = groupwise_risks(pred, sc, method=method, n=n, seed=seed)
    total = sc.p1 * r1 + sc.p2 * r2
    return total, abs(total - r2)


def barycenter_symmetry_residual(pred, jd, f_star):
    """Difference of the squared transport costs from the two signed
    push-forwards of the Bayes values to their images under the predictor.

    Computed on normalized measures; multiply by mass(mu+)^2 to state it
    for the raw equal-mass signed parts.
    """
    if jd.degenerate:
        return 0.0
    f1, _ = _group_fns(pred)
    dens_p, _ = normalize(jd.mu_plus)
    dens_m, _ = normalize(jd.mu_minus)
    costs = []
    for dens in (dens_p, dens_m):
        A, _ = cdf_from_density(dens, f_star)
        B, _ = cdf_from_density(dens, f1)
        costs.append(wasserstein2_sq(A, B))
    return abs(costs[0] - costs[1])


def evaluate(pred, sc, jd, method="quadrature", n=100_000, seed=0):
    """Full fairness report for a predictor on a scenario."""
    r1, r2 = groupwise_risks(pred, sc, method=method, n=n, seed=seed)
    total, residual = total_risk_and_identity(
        pred, sc, jd, method=method, n=n, seed=seed
    )
    label = method if method == "quadrature" else f"monte-carlo(n={n}, seed={seed})"
    return FairnessReport(
        dp_gap=dp_gap(pred, sc, method=method, n=n, seed=seed),
        signed_dp_gap=signed_dp_gap(pred, jd),
        risk_group1=r1,
        risk_group2=r2,
        egwr_gap=abs(r1 - r2),
        total_risk=total,
        risk_identity_residual=residual,
        barycenter_residual=barycenter_symmetry_residual(pred, jd, sc.f_star),
        method=label,
        degenerate=jd.degenerate,
    )
