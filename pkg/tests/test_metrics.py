import numpy as np
import pytest

import fairshift as fs
from fairshift.metrics import _sample_group
from fairshift.predictors import random_monotone_q


def test_constant_predictor_has_zero_dp_gap(s1):
    assert fs.dp_gap(lambda x: np.full(np.shape(x), 0.3), s1) == 0.0


def test_bayes_rule_violates_dp_on_s1(s1):
    assert fs.dp_gap(s1.f_star, s1) >= 0.3


def test_qstar_achieves_dp_on_s1(s1, s1_qstar):
    assert fs.dp_gap(s1_qstar.predict, s1) <= 0.01


def test_signed_gap_small_for_family_large_for_bayes(s1, s1_jd):
    for seed in range(3):
        pred = fs.build_unaware(s1.f_star, s1_jd, random_monotone_q(seed))
        assert fs.signed_dp_gap(pred.predict, s1_jd) <= 0.01
    assert fs.signed_dp_gap(s1.f_star, s1_jd) > 0.1


def test_signed_gap_degenerate_flagged_zero():
    sc = fs.get_scenario("identical")
    jd = sc.decomposition()
    assert fs.signed_dp_gap(sc.f_star, jd) == 0.0


def test_signed_and_plain_gaps_agree_in_direction():
    # signed-measure criterion: both gaps small or both large, across
    # random scenarios and predictors
    for seed in range(4):
        sc = fs.random_scenario(seed)
        jd = sc.decomposition()
        if jd.degenerate:
            continue
        fair = fs.build_unaware(sc.f_star, jd, random_monotone_q(seed + 50))
        assert fs.dp_gap(fair.predict, sc) <= 0.01
        assert fs.signed_dp_gap(fair.predict, jd) <= 0.01 / max(jd.mu_plus.mass, 0.05)
        assert fs.dp_gap(sc.f_star, sc) > 0.01
        assert fs.signed_dp_gap(sc.f_star, jd) > 0.01


def test_groupwise_risks_bayes_is_zero(s1, s1_jd):
    r1, r2 = fs.groupwise_risks(s1.f_star, s1)
    assert r1 == 0.0 and r2 == 0.0


def test_qstar_equalizes_risks(s1, s1_qstar):
    r1, r2 = fs.groupwise_risks(s1_qstar.predict, s1)
    assert abs(r1 - r2) / max(r1, r2) <= 0.02


def test_asymmetric_q_breaks_risk_equality(s1, s1_jd, s1_qstar):
    q_plus = fs.generalized_inverse(s1_qstar.F_plus)
    pred = fs.build_unaware(s1.f_star, s1_jd, q_plus)
    r1, r2 = fs.groupwise_risks(pred.predict, s1)
    assert abs(r1 - r2) / max(r1, r2) > 0.05


def test_total_risk_identity(s1, s1_jd, s1_qstar):
    total, residual = fs.total_risk_and_identity(s1_qstar.predict, s1, s1_jd)
    assert total > 0
    assert residual <= 0.01 * total
    tb, rb = fs.total_risk_and_identity(s1.f_star, s1, s1_jd)
    assert tb == 0.0 and rb == 0.0


def test_total_risk_degenerate_scenario():
    sc = fs.get_scenario("identical")
    jd = sc.decomposition()
    pred = fs.build_unaware(sc.f_star, jd)
    total, residual = fs.total_risk_and_identity(pred.predict, sc, jd)
    assert total == 0.0 and residual == 0.0


def test_barycenter_residual_qstar_small(s1, s1_jd, s1_qstar):
    assert fs.barycenter_symmetry_residual(s1_qstar.predict, s1_jd, s1.f_star) <= 1e-3


def test_barycenter_residual_one_sided_transport(s1, s1_jd, s1_qstar):
    # Q = F+^-1 leaves the plus push-forward in place, so the residual is the
    # full squared distance between the two Bayes push-forwards
    from fairshift.measures import normalize
    from fairshift.transport1d import cdf_from_density

    q_plus = fs.generalized_inverse(s1_qstar.F_plus)
    pred = fs.build_unaware(s1.f_star, s1_jd, q_plus)
    res = fs.barycenter_symmetry_residual(pred.predict, s1_jd, s1.f_star)
    dens_p, _ = normalize(s1_jd.mu_plus)
    dens_m, _ = normalize(s1_jd.mu_minus)
    Ap, _ = cdf_from_density(dens_p, s1.f_star)
    Am, _ = cdf_from_density(dens_m, s1.f_star)
    oracle = fs.wasserstein2_sq(Am, Ap)
    assert oracle > 0
    assert res == pytest.approx(oracle, abs=1e-3)


def test_barycenter_residual_zero_for_equal_pushforwards():
    # mirror-symmetric groups with an even Bayes regressor: F+ = F-, so the
    # residual vanishes for every Q
    from fairshift.measures import DensityGrid1D

    sc = fs.Scenario(
        name="mirror",
        p1=0.5,
        group1=fs.GaussianGroupParams(np.array([-1.0]), 1.0),
        group2=fs.GaussianGroupParams(np.array([1.0]), 1.0),
        f_star=np.abs,
    )
    jd = sc.decomposition()
    for seed in range(3):
        pred = fs.build_unaware(sc.f_star, jd, random_monotone_q(seed))
        assert fs.barycenter_symmetry_residual(pred.predict, jd, sc.f_star) <= 1e-6


def test_monte_carlo_matches_quadrature(s1, s1_jd, s1_qstar):
    n = 100_000
    tol = 3.0 / np.sqrt(n) + 0.01
    dq = fs.dp_gap(s1_qstar.predict, s1)
    dm = fs.dp_gap(s1_qstar.predict, s1, method="monte-carlo", n=n, seed=3)
    assert abs(dq - dm) <= tol
    r1q, r2q = fs.groupwise_risks(s1_qstar.predict, s1)
    r1m, r2m = fs.groupwise_risks(s1_qstar.predict, s1, method="monte-carlo", n=n, seed=3)
    assert r1m == pytest.approx(r1q, abs=tol)
    assert r2m == pytest.approx(r2q, abs=tol)


def test_monte_carlo_deterministic_and_chunk_invariant(s1):
    a = _sample_group(s1, 1, 10_001, seed=9)
    b = _sample_group(s1, 1, 10_001, seed=9)
    np.testing.assert_array_equal(a, b)
    c = _sample_group(s1, 1, 10_001, seed=10)
    assert not np.array_equal(a, c)


def test_egwr_gap_halves_under_refinement(s1):
    gaps = []
    for n_cells in (4096, 8192):
        sc = fs.Scenario(
            name="s1",
            p1=s1.p1,
            group1=s1.group1,
            group2=s1.group2,
            f_star=s1.f_star,
            n_cells=n_cells,
        )
        jd = sc.decomposition()
        pred = fs.build_unaware(sc.f_star, jd)
        r1, r2 = fs.groupwise_risks(pred.predict, sc)
        gaps.append(abs(r1 - r2) / max(r1, r2))
    assert gaps[1] <= 0.6 * gaps[0]


def test_report_serialization(s1, s1_jd, s1_qstar):
    rep = fs.evaluate(s1_qstar.predict, s1, s1_jd)
    assert rep.egwr_gap == abs(rep.risk_group1 - rep.risk_group2)
    assert 0.0 <= rep.dp_gap <= 1.0
    row = rep.to_csv_row()
    assert len(row.split(",")) == len(rep.csv_header.split(","))
    import json

    parsed = json.loads(rep.to_json())
    assert float(parsed["dp_gap"]) == rep.dp_gap
