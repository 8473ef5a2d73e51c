"""Command-line front end.

Subcommands:
  run <config.yaml>             evaluate a predictor on a scenario
  figures <scenario> <outdir>   emit plot-ready CSVs for a 1D scenario
  scan-affine <config.yaml>     analytic DP gap over a grid of affine slopes
  list-scenarios                print the scenario catalog

Configs are strict YAML: unknown keys are rejected.  Exit codes: 0 success,
2 validation error, 3 atomic push-forward.
"""

import argparse
import os
import sys
import tempfile

import numpy as np
import yaml

from .errors import (
    AssumptionViolation,
    FairshiftError,
    UnsupportedForFigures,
    ValidationError,
)
from .measures import DensityGrid1D, GaussianGroupParams, write_grid_csv
from .metrics import FairnessReport, dp_gap, evaluate
from .predictors import (
    AffineRegressor,
    LogisticRegressor,
    build_aware,
    build_unaware,
    random_monotone_q,
)
from .scenarios import (
    CATALOG,
    DEFAULT_N_CELLS,
    Scenario,
    affine_dp_scan,
    get_scenario,
)
from .transport1d import QuantileFn, cdf_from_density

CONFIG_SCHEMA = {
    "scenario": None,  # str or nested mapping, validated separately
    "predictor": {"kind", "q", "seed", "q_values", "beta", "b"},
    "evaluation": {"method", "n", "seed"},
    "grid": {"n_cells"},
    "output_dir": None,
}
SCENARIO_KEYS = {"name", "p1", "group1", "group2", "f_star"}
GROUP_KEYS = {"mean", "var"}
FSTAR_KEYS = {"kind", "a", "beta", "b"}


def _check_keys(mapping, allowed, where):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ValidationError(f"unknown key(s) {sorted(unknown)} in {where}")


def parse_config(text):
    """Parse and validate a run config; returns a canonical dict."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ValidationError(f"config is not valid YAML: {e}") from None
    if not isinstance(raw, dict):
        raise ValidationError("config must be a mapping")
    _check_keys(raw, CONFIG_SCHEMA, "config")
    for section, allowed in CONFIG_SCHEMA.items():
        if allowed is not None and section in raw:
            if not isinstance(raw[section], dict):
                raise ValidationError(f"{section} must be a mapping")
            _check_keys(raw[section], allowed, section)
    sc = raw.get("scenario", "s1")
    if isinstance(sc, dict):
        _check_keys(sc, SCENARIO_KEYS, "scenario")
        for g in ("group1", "group2"):
            _check_keys(sc.get(g, {}), GROUP_KEYS, g)
        _check_keys(sc.get("f_star", {}), FSTAR_KEYS, "f_star")
    cfg = {
        "scenario": sc,
        "predictor": {"kind": "f_q", "q": "qstar", "seed": 0, "b": 0.0}
        | raw.get("predictor", {}),
        "evaluation": {"method": "quadrature", "n": 100_000, "seed": 0}
        | raw.get("evaluation", {}),
        "grid": {"n_cells": DEFAULT_N_CELLS} | raw.get("grid", {}),
        "output_dir": raw.get("output_dir", "out"),
    }
    return cfg


def serialize_config(cfg):
    return yaml.safe_dump(cfg, sort_keys=True, default_flow_style=False)


def _build_scenario(spec, n_cells):
    if isinstance(spec, str):
        sc = get_scenario(spec)
    else:
        f = spec.get("f_star", {"kind": "logistic", "a": 3.0})
        if f.get("kind") == "affine":
            f_star = AffineRegressor(np.asarray(f["beta"], float), float(f["b"]))
        elif f.get("kind") == "logistic":
            f_star = LogisticRegressor(float(f.get("a", 3.0)))
        else:
            raise ValidationError(f"unknown f_star kind {f.get('kind')!r}")
        sc = Scenario(
            name=spec.get("name", "inline"),
            p1=float(spec["p1"]),
            group1=GaussianGroupParams(
                np.atleast_1d(spec["group1"]["mean"]), float(spec["group1"]["var"])
            ),
            group2=GaussianGroupParams(
                np.atleast_1d(spec["group2"]["mean"]), float(spec["group2"]["var"])
            ),
            f_star=f_star,
        )
    if n_cells != sc.n_cells:
        sc = Scenario(
            name=sc.name,
            p1=sc.p1,
            group1=sc.group1,
            group2=sc.group2,
            f_star=sc.f_star,
            group_regressors=sc.group_regressors,
            n_cells=n_cells,
        )
    return sc


def _build_predictor(cfg, sc, jd):
    p = cfg["predictor"]
    kind = p["kind"]
    if kind == "bayes":
        return sc.f_star
    if kind == "affine":
        return AffineRegressor(np.asarray(p["beta"], float), float(p["b"]))
    if kind == "f_q":
        q_spec = p["q"]
        if q_spec == "qstar":
            Q = None
        elif q_spec == "random":
            Q = random_monotone_q(int(p["seed"]))
        elif q_spec == "tabulated":
            vals = np.asarray(p["q_values"], float)
            Q = QuantileFn(np.linspace(0.0, 1.0, vals.size), vals)
        else:
            raise ValidationError(f"unknown q spec {q_spec!r}")
        return build_unaware(sc.f_star, jd, Q)
    if kind == "g_star":
        regs = sc.group_regressors or (sc.f_star, sc.f_star)
        d1, d2 = sc.group_densities()
        G1, _ = cdf_from_density(d1, regs[0])
        G2, _ = cdf_from_density(d2, regs[1])
        return build_aware(regs, G1, G2, sc.p1)
    raise ValidationError(f"unknown predictor kind {kind!r}")


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def cmd_run(args):
    with open(args.config) as f:
        cfg = parse_config(f.read())
    sc = _build_scenario(cfg["scenario"], int(cfg["grid"]["n_cells"]))
    jd = sc.decomposition()
    pred = _build_predictor(cfg, sc, jd)
    ev = cfg["evaluation"]
    report = evaluate(
        pred, sc, jd, method=ev["method"], n=int(ev["n"]), seed=int(ev["seed"])
    )
    outdir = cfg["output_dir"]
    os.makedirs(outdir, exist_ok=True)
    _atomic_write(os.path.join(outdir, "report.json"), report.to_json() + "\n")
    _atomic_write(
        os.path.join(outdir, "report.csv"),
        FairnessReport.csv_header + "\n" + report.to_csv_row() + "\n",
    )
    print(report.to_json())
    return 0


def emit_figures(scenario_name, outdir, n_cells=DEFAULT_N_CELLS, n_plot=513):
    sc = _build_scenario(scenario_name, n_cells)
    if sc.dim != 1:
        raise UnsupportedForFigures("figures require a 1D scenario")
    d1, d2 = sc.group_densities()
    jd = sc.decomposition()
    pred = build_unaware(sc.f_star, jd)
    os.makedirs(outdir, exist_ok=True)
    xp = np.linspace(d1.lo, d1.hi, n_plot)
    p1v = np.interp(xp, d1.x, d1.values)
    p2v = np.interp(xp, d2.x, d2.values)
    write_grid_csv(os.path.join(outdir, "fig1_densities.csv"), ("x", "p1", "p2"), (xp, p1v, p2v))
    mp = np.interp(xp, d1.x, jd.mu_plus.values)
    mm = np.interp(xp, d1.x, jd.mu_minus.values)
    write_grid_csv(
        os.path.join(outdir, "fig1_jordan.csv"), ("x", "mu_plus", "mu_minus"), (xp, mp, mm)
    )
    if pred.passthrough:
        fq = np.asarray(sc.f_star(xp))
        tgrid = np.linspace(0.0, 1.0, n_plot)
        zero = np.zeros(n_plot)
        write_grid_csv(
            os.path.join(outdir, "fig2_pushforwards.csv"),
            ("t", "F_plus_density", "F_minus_density"),
            (tgrid, zero, zero),
        )
    else:
        lo = min(pred.F_plus.knots[0], pred.F_minus.knots[0])
        hi = max(pred.F_plus.knots[-1], pred.F_minus.knots[-1])
        tgrid = np.linspace(lo, hi, n_plot)
        dp_ = np.gradient(np.atleast_1d(pred.F_plus(tgrid)), tgrid)
        dm_ = np.gradient(np.atleast_1d(pred.F_minus(tgrid)), tgrid)
        write_grid_csv(
            os.path.join(outdir, "fig2_pushforwards.csv"),
            ("t", "F_plus_density", "F_minus_density"),
            (tgrid, dp_, dm_),
        )
        fq = pred.predict(xp)
    fstar_v = np.asarray(sc.f_star(xp))
    write_grid_csv(
        os.path.join(outdir, "fig3_predictors.csv"),
        ("x", "f_star", "f_qstar"),
        (xp, fstar_v, fq),
    )
    F1, _ = cdf_from_density(d1, pred.predict if hasattr(pred, "predict") else pred)
    F2, _ = cdf_from_density(d2, pred.predict if hasattr(pred, "predict") else pred)
    ylo = min(F1.knots[0], F2.knots[0])
    yhi = max(F1.knots[-1], F2.knots[-1])
    yg = np.linspace(ylo, yhi, n_plot)
    g1 = np.gradient(np.atleast_1d(F1(yg)), yg)
    g2 = np.gradient(np.atleast_1d(F2(yg)), yg)
    write_grid_csv(
        os.path.join(outdir, "fig3_output_densities.csv"),
        ("y", "density_group1", "density_group2"),
        (yg, g1, g2),
    )
    return [
        "fig1_densities.csv",
        "fig1_jordan.csv",
        "fig2_pushforwards.csv",
        "fig3_predictors.csv",
        "fig3_output_densities.csv",
    ]


def cmd_figures(args):
    names = emit_figures(args.scenario, args.outdir)
    for n in names:
        print(os.path.join(args.outdir, n))
    return 0


SCAN_KEYS = {"m1", "m2", "b", "var1", "beta_max", "n_per_axis", "output_dir"}


def cmd_scan_affine(args):
    with open(args.config) as f:
        try:
            raw = yaml.safe_load(f.read())
        except yaml.YAMLError as e:
            raise ValidationError(f"config is not valid YAML: {e}") from None
    if not isinstance(raw, dict):
        raise ValidationError("config must be a mapping")
    _check_keys(raw, SCAN_KEYS, "scan config")
    m1 = np.asarray(raw.get("m1", [0.0, 0.0]), float)
    m2 = np.asarray(raw.get("m2", [1.0, 1.0]), float)
    var1 = float(raw.get("var1", 1.0))
    b = float(raw.get("b", 0.0))
    bmax = float(raw.get("beta_max", 2.0))
    n_axis = int(raw.get("n_per_axis", 21))
    outdir = raw.get("output_dir", "out")
    g1 = GaussianGroupParams(m1, var1)
    g2 = GaussianGroupParams(m2, 2.0 * var1)
    axis = np.linspace(-bmax, bmax, n_axis)
    betas = [np.array([bx, by]) for bx in axis for by in axis]
    rows = affine_dp_scan(g1, g2, betas, b=b)
    os.makedirs(outdir, exist_ok=True)
    lines = ["beta_1,beta_2,dp_gap"]
    for beta, gap in rows:
        lines.append(f"{beta[0]:.17g},{beta[1]:.17g},{gap:.17g}")
    _atomic_write(os.path.join(outdir, "scan_affine.csv"), "\n".join(lines) + "\n")
    print(os.path.join(outdir, "scan_affine.csv"))
    return 0


def cmd_list_scenarios(args):
    for name in sorted(CATALOG):
        print(name)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="fairshift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a predictor on a scenario")
    p_run.add_argument("config")
    p_run.set_defaults(fn=cmd_run)

    p_fig = sub.add_parser("figures", help="emit plot-ready CSVs")
    p_fig.add_argument("scenario")
    p_fig.add_argument("outdir")
    p_fig.set_defaults(fn=cmd_figures)

    p_scan = sub.add_parser("scan-affine", help="affine DP-gap scan")
    p_scan.add_argument("config")
    p_scan.set_defaults(fn=cmd_scan_affine)

    p_list = sub.add_parser("list-scenarios", help="print scenario catalog")
    p_list.set_defaults(fn=cmd_list_scenarios)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except AssumptionViolation as e:
        print(f"assumption-violation: {e}", file=sys.stderr)
        return 3
    except (FairshiftError, FileNotFoundError, KeyError) as e:
        print(f"invalid-config: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
