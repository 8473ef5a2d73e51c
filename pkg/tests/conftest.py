import numpy as np
import pytest

import fairshift as fs


@pytest.fixture(scope="session")
def s1():
    return fs.get_scenario("s1")


@pytest.fixture(scope="session")
def s1_jd(s1):
    return s1.decomposition()


@pytest.fixture(scope="session")
def s1_qstar(s1, s1_jd):
    return fs.build_unaware(s1.f_star, s1_jd)


@pytest.fixture(scope="session")
def gauss_grid():
    """N(0,1) density on the standard working range."""
    from fairshift.measures import DensityGrid1D

    return DensityGrid1D.gaussian(0.0, 1.0, -8.0, 8.0, 4096)


def gaussian_density(mean, var, lo=-8.0, hi=8.0, n=4096):
    from fairshift.measures import DensityGrid1D

    return DensityGrid1D.gaussian(mean, var, lo, hi, n)
