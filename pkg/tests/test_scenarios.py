import numpy as np
import pytest
from scipy.stats import norm

import fairshift as fs
from fairshift.errors import ValidationError
from fairshift.measures import GaussianGroupParams
from fairshift.scenarios import (
    _pushforward_cdfs_mc,
    affine_dp_scan,
    gaussian_ks,
    pushforward_cdfs,
    sample,
)
from fairshift.transport1d import Cdf, ks_distance


# -- sampling ----------------------------------------------------------------

def test_sample_is_seed_deterministic(s1):
    a = sample(s1, 5000, seed=11)
    b = sample(s1, 5000, seed=11)
    np.testing.assert_array_equal(a.xs, b.xs)
    np.testing.assert_array_equal(a.ss, b.ss)
    c = sample(s1, 5000, seed=12)
    assert not np.array_equal(a.xs, c.xs)


def test_sample_group_fractions(s1):
    n = 50_000
    batch = sample(s1, n, seed=0)
    frac1 = np.mean(batch.ss == 1)
    bound = 4.0 * np.sqrt(s1.p1 * s1.p2 / n)
    assert abs(frac1 - s1.p1) <= bound


def test_sample_group_means(s1):
    n = 50_000
    batch = sample(s1, n, seed=1)
    x1 = batch.xs[batch.ss == 1]
    x2 = batch.xs[batch.ss == 2]
    assert abs(x1.mean() + 1.0) <= 4.0 / np.sqrt(x1.size)
    assert abs(x2.mean() - 1.0) <= 4.0 * np.sqrt(2.0) / np.sqrt(x2.size)


def test_sample_grid_scenario_matches_density():
    sc = fs.get_scenario("disjoint")
    batch = sample(sc, 40_000, seed=2)
    # group-1 draws live on the left bump, group-2 on the right
    assert batch.xs[batch.ss == 1].max() <= 1.0 + 1e-9
    assert batch.xs[batch.ss == 2].min() >= 2.0 - 1e-9
    # empirical CDF against the triangular-bump oracle at the bump center
    x1 = batch.xs[batch.ss == 1]
    assert np.mean(x1 <= 0.5) == pytest.approx(0.5, abs=4.0 / np.sqrt(x1.size))


def test_identical_groups_same_law():
    sc = fs.get_scenario("identical")
    batch = sample(sc, 60_000, seed=3)
    x1 = np.sort(batch.xs[batch.ss == 1])
    x2 = np.sort(batch.xs[batch.ss == 2])
    F1 = Cdf.from_atoms(x1)
    F2 = Cdf.from_atoms(x2)
    n_eff = x1.size * x2.size / (x1.size + x2.size)
    assert ks_distance(F1, F2) <= 2.5 / np.sqrt(n_eff)


def test_sample_validation(s1):
    with pytest.raises(ValidationError):
        sample(s1, 0, seed=0)


# -- push-forward CDFs -------------------------------------------------------

def test_pushforward_supports_match_crossing_oracle(s1, s1_jd):
    # f* is decreasing, so the plus region (-6.064, 0.064) maps to Bayes
    # values in (f*(0.064), f*(-6.064))
    Fp, Fm = pushforward_cdfs(s1, s1_jd)
    roots = np.sort(np.roots([1.0, 6.0, 1.0 - 2.0 * np.log(2.0)]))
    lo_y = float(s1.f_star(roots[1]))
    hi_y = float(s1.f_star(roots[0]))
    qp = fs.generalized_inverse(Fp)
    assert qp(1e-9) == pytest.approx(lo_y, abs=1e-2)
    assert qp(1.0) == pytest.approx(hi_y, abs=1e-2)
    # minus region is the complement: its push-forward carries real mass
    # below the plus image and its support extends above it (the far-left
    # minus tail maps to a thin sliver under 1)
    assert Fm(lo_y) > 0.01
    qm = fs.generalized_inverse(Fm)
    assert qm(1.0) >= hi_y - 1e-9


def test_pushforward_mirror_symmetry():
    # N(-1,1) vs N(1,1) with the identity map: mu+ is mu- reflected, so
    # F+(t) = 1 - F-(-t)
    sc = fs.Scenario(
        name="mirror",
        p1=0.5,
        group1=GaussianGroupParams(np.array([-1.0]), 1.0),
        group2=GaussianGroupParams(np.array([1.0]), 1.0),
        f_star=lambda x: np.asarray(x, dtype=np.float64),
    )
    jd = sc.decomposition()
    Fp, Fm = pushforward_cdfs(sc, jd)
    t = np.linspace(-3.0, -0.2, 57)
    np.testing.assert_allclose(Fp(t), 1.0 - Fm(-t), atol=1e-6)


def test_mc_pushforward_matches_quadrature(s1, s1_jd):
    n = 200_000
    Fp_mc, Fm_mc = _pushforward_cdfs_mc(s1, n, seed=5)
    Fp, Fm = pushforward_cdfs(s1, s1_jd)
    assert ks_distance(Fp_mc, Fp) <= 3.0 / np.sqrt(n) + 5e-3
    assert ks_distance(Fm_mc, Fm) <= 3.0 / np.sqrt(n) + 5e-3


def test_mc_pushforward_multivariate_runs():
    sc = fs.Scenario(
        name="mv",
        p1=0.5,
        group1=GaussianGroupParams(np.array([-1.0, 0.0]), 1.0),
        group2=GaussianGroupParams(np.array([1.0, 0.0]), 2.0),
        f_star=lambda x: 1.0 / (1.0 + np.exp(3.0 * x[:, 0])),
    )
    Fp, Fm = pushforward_cdfs(sc, None, n=50_000, seed=1)
    assert 0.0 < Fp.knots[0] and Fp.knots[-1] < 1.0
    assert np.all(np.diff(Fp.values) >= 0)


# -- gaussian_ks -------------------------------------------------------------

def test_gaussian_ks_oracle_values():
    assert gaussian_ks(0.0, 1.0, 0.0, 1.0) == 0.0
    # equal scales: sup at the midpoint
    assert gaussian_ks(0.0, 1.0, 1.0, 1.0) == pytest.approx(
        2 * norm.cdf(0.5) - 1, abs=1e-12
    )
    # variance ratio 2 with equal means
    t_star = np.sqrt(2 * np.log(2))
    oracle = norm.cdf(t_star) - norm.cdf(t_star / np.sqrt(2))
    assert gaussian_ks(0.0, 1.0, 0.0, np.sqrt(2.0)) == pytest.approx(oracle, abs=1e-12)
    with pytest.raises(ValidationError):
        gaussian_ks(0.0, -1.0, 0.0, 1.0)


def test_gaussian_ks_against_grid_quadrature():
    rng = np.random.default_rng(4)
    for _ in range(5):
        m1, m2 = rng.uniform(-2, 2, size=2)
        s1_, s2_ = rng.uniform(0.7, 1.6, size=2)
        lo = min(m1 - 8 * s1_, m2 - 8 * s2_)
        hi = max(m1 + 8 * s1_, m2 + 8 * s2_)
        from conftest import gaussian_density

        F1, _ = fs.cdf_from_density(gaussian_density(m1, s1_**2, lo, hi))
        F2, _ = fs.cdf_from_density(gaussian_density(m2, s2_**2, lo, hi))
        assert gaussian_ks(m1, s1_, m2, s2_) == pytest.approx(
            ks_distance(F1, F2), abs=1e-3
        )


# -- affine DP scan ----------------------------------------------------------

def test_affine_scan_zero_beta_and_intercept_invariance():
    g1 = GaussianGroupParams(np.array([-1.0, 0.0]), 1.0)
    g2 = GaussianGroupParams(np.array([1.0, 0.0]), 2.0)
    betas = [np.zeros(2), np.array([1.0, 0.5]), np.array([-0.3, 2.0])]
    rows0 = affine_dp_scan(g1, g2, betas, b=0.0)
    rows5 = affine_dp_scan(g1, g2, betas, b=5.0)
    assert rows0[0][1] == 0.0
    for (_, d0), (_, d5) in zip(rows0, rows5):
        # intercept shifts both push-forwards equally
        assert d0 == pytest.approx(d5, abs=1e-12)


def test_affine_scan_mean_aligned_direction():
    # beta orthogonal to m2 - m1 aligns the push-forward means, leaving only
    # the variance-ratio-2 gap
    g1 = GaussianGroupParams(np.array([-1.0, 0.0]), 1.0)
    g2 = GaussianGroupParams(np.array([1.0, 0.0]), 2.0)
    [(_, gap)] = affine_dp_scan(g1, g2, [np.array([0.0, 1.0])])
    assert gap == pytest.approx(0.0829, abs=1e-3)


def test_affine_scan_floor():
    g1 = GaussianGroupParams(np.array([-1.0, 0.0]), 1.0)
    g2 = GaussianGroupParams(np.array([1.0, 0.0]), 2.0)
    th = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    betas = [np.array([np.cos(t), np.sin(t)]) for t in th]
    gaps = [d for _, d in affine_dp_scan(g1, g2, betas)]
    assert min(gaps) >= 0.08


def test_affine_scan_requires_variance_ratio():
    g1 = GaussianGroupParams(np.array([0.0]), 1.0)
    g2 = GaussianGroupParams(np.array([1.0]), 1.0)
    with pytest.raises(ValidationError):
        affine_dp_scan(g1, g2, [np.array([1.0])])


# -- catalog -----------------------------------------------------------------

def test_catalog_and_random_scenarios():
    assert sorted(fs.CATALOG) == ["disjoint", "identical", "s1"]
    with pytest.raises(ValidationError):
        fs.get_scenario("nope")
    a = fs.random_scenario(3)
    b = fs.random_scenario(3)
    assert a.p1 == b.p1
    np.testing.assert_array_equal(a.group1.mean, b.group1.mean)
    assert 0.3 <= a.p1 <= 0.7


def test_s1_parameters(s1):
    assert s1.p1 == 0.5
    assert s1.group1.mean[0] == -1.0 and s1.group1.covariance_scale == 1.0
    assert s1.group2.mean[0] == 1.0 and s1.group2.covariance_scale == 2.0
    assert float(s1.f_star(0.0)) == 0.5
