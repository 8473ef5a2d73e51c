"""Fair regression without group-aware inputs: signed-measure region
classification plus one-dimensional optimal transport."""

from ._backend import BACKEND
from .measures import (
    DensityGrid1D,
    GaussianGroupParams,
    JordanDecomposition,
    Region,
    RegionClassifier,
    SubMeasureGrid,
    classify,
    jordan_decompose,
    normalize,
)
from .metrics import (
    FairnessReport,
    barycenter_symmetry_residual,
    dp_gap,
    evaluate,
    groupwise_risks,
    signed_dp_gap,
    total_risk_and_identity,
)
from .predictors import (
    AffineRegressor,
    AwarePredictor,
    LogisticRegressor,
    TabulatedRegressor,
    UnawarePredictor,
    build_aware,
    build_qstar,
    build_unaware,
    gaussian_affine_aware,
    predict_aware,
    predict_unaware,
    random_monotone_q,
)
from .scenarios import (
    CATALOG,
    SampleBatch,
    Scenario,
    affine_dp_scan,
    gaussian_ks,
    get_scenario,
    pushforward_cdfs,
    random_scenario,
    sample,
)
from .transport1d import (
    Cdf,
    QuantileFn,
    barycenter_quantile,
    cdf_from_density,
    generalized_inverse,
    ks_distance,
    wasserstein2_sq,
)

__version__ = "0.1.0"
