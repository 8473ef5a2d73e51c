"""Compare the numba kernels against the pure-numpy fallback.

Times the two hot paths — fused region/compose prediction and the
quantile-grid W2 integral — on ~1e6 points each.

Usage: python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from fairshift import _kernels_numba, _kernels_numpy
from fairshift.measures import DensityGrid1D
from fairshift.transport1d import cdf_from_density, generalized_inverse

N_POINTS = 1_000_000
REPEATS = 5


def build_inputs():
    rng = np.random.default_rng(0)
    d1 = DensityGrid1D.gaussian(-1.0, 1.0, -12.0, 12.0, 4096)
    d2 = DensityGrid1D.gaussian(1.0, 2.0, -12.0, 12.0, 4096)
    Fp, _ = cdf_from_density(d1, lambda x: 1.0 / (1.0 + np.exp(3.0 * x)))
    Fm, _ = cdf_from_density(d2, lambda x: 1.0 / (1.0 + np.exp(3.0 * x)))
    Qp = generalized_inverse(Fp)
    Qm = generalized_inverse(Fm)
    labels = rng.integers(-1, 2, size=N_POINTS).astype(np.int8)
    fstar = rng.random(N_POINTS)
    return Fp, Fm, Qp, Qm, labels, fstar


def bench(fn, *args):
    fn(*args)  # warm-up (and numba compile)
    best = np.inf
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    Fp, Fm, Qp, Qm, labels, fstar = build_inputs()
    rows = []
    for name, mod in (("numpy", _kernels_numpy), ("numba", _kernels_numba)):
        t_pred = bench(
            mod.compose_predict,
            fstar,
            labels,
            Fp.knots, Fp.values,
            Fm.knots, Fm.values,
            Qp.knots, Qp.values,
        )
        t_w2 = bench(
            mod.w2_sq_quantile_integral,
            Qp.knots, Qp.values, Qm.knots, Qm.values, 8193,
        )
        rows.append((name, t_pred, t_w2))
    print(f"{'backend':<8} {'compose_predict':>16} {'w2_integral':>12}")
    for name, t_pred, t_w2 in rows:
        print(f"{name:<8} {t_pred * 1e3:>14.2f}ms {t_w2 * 1e3:>10.3f}ms")
    base, fast = rows[0], rows[1]
    print(
        f"speedup: compose_predict x{base[1] / fast[1]:.1f}, "
        f"w2_integral x{base[2] / fast[2]:.1f}"
    )


if __name__ == "__main__":
    main()
