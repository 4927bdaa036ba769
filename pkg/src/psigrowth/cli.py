"""Command-line experiment runner.

Configurations are flat INI files with one section per module::

    [experiment]
    kind = scaling          ; scaling|maximal|hull|clt|birth-growth|
                            ; correlation|depoissonize|localization
    seed = 1
    workers = 0             ; 0 = all cores
    output = out

    [density]
    d = 2
    delta = 0
    rho0 = 1
    box_low = 0
    box_high = 1

    [profile]
    kind = power
    alpha = 1

    [grid]
    lambda_grid = 256,512,1024
    R = 200

    [functions]
    count = constant:c=1
    bump = bump:center=0.5;radius=0.25;smoothness=1

`psi-growth run CONFIG` executes the experiment and writes the report
files plus a manifest with content hashes; `psi-growth validate CONFIG`
checks the file and prints size estimates without running anything.
Seeds and worker counts resolve as CLI flag > environment variable
(PSIGROWTH_SEED / PSIGROWTH_WORKERS) > config file.  Outputs are
byte-identical for a given (config, seed) regardless of worker count.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ArgumentError, DomainError, MethodError
from .geometry import BallRegion, BoxRegion, PsiSpec, compute_exponents
from .extremality import localization_radii_cone, xi_downward_cone
from .sampling import DensitySpec, sample_poisson_box, total_mass
from .stats import (EstimateReport, TestFunction, auto_time_cap,
                    depoissonization_check, estimate_two_point_correlation,
                    fit_scaling_exponent, kernel_correlation_prediction,
                    run_scaling_experiment, write_report_csv,
                    write_report_json, write_report_plotdata)

__all__ = ["ExperimentConfig", "parse_config", "serialize_config",
           "validate_config", "run_config", "main"]

KINDS = ("scaling", "maximal", "hull", "clt", "birth-growth",
         "correlation", "depoissonize", "localization")


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    workers: int = 0
    output: str = "out"
    d: int = 2
    delta: float = 0.0
    rho0: float = 1.0
    box_low: tuple = (0.0,)
    box_high: tuple = (1.0,)
    time_cap: float | None = None
    psi_kind: str = "power"
    alpha: float = 1.0
    knots_l: tuple = ()
    knots_v: tuple = ()
    lambda_grid: tuple = ()
    n_grid: tuple = ()
    R: int = 200
    fs: tuple = ()
    method: str = "auto"
    time_cap_factor: float = 3.0
    # correlation extras
    h1: float = 0.5
    h2: float = 0.5
    separation: float = 0.0
    corr_R: int = 400
    # localization extras
    loc_lambda: float = 1024.0
    loc_configs: int = 50
    r_points: int = 24

    def density(self) -> DensitySpec:
        if self.kind == "hull":
            return DensitySpec(d=self.d, delta=self.delta,
                               region=BallRegion(d=self.d), rho0=self.rho0)
        return DensitySpec(d=self.d, delta=self.delta,
                           region=BoxRegion(low=self.box_low, high=self.box_high),
                           rho0=self.rho0, time_cap=self.time_cap)

    def profile(self) -> PsiSpec | None:
        if self.kind == "hull":
            return None
        if self.psi_kind == "power":
            return PsiSpec.power_law(self.alpha)
        if self.psi_kind == "cap":
            return PsiSpec.spherical_cap()
        return PsiSpec.tabulated(self.knots_l, self.knots_v, self.alpha)


def _floats(s: str) -> tuple:
    return tuple(float(v) for v in s.replace(" ", "").split(",") if v != "")


def _ints(s: str) -> tuple:
    return tuple(int(v) for v in s.replace(" ", "").split(",") if v != "")


def _parse_function(name: str, text: str) -> TestFunction:
    kind, _, rest = text.partition(":")
    kw = {}
    if rest:
        for item in rest.split(";"):
            key, _, val = item.partition("=")
            key = key.strip()
            if key in ("exponents", "center"):
                kw[key] = _floats(val)
            else:
                kw[key] = float(val)
    return TestFunction(kind=kind.strip(), name=name, **kw)


def _format_function(f: TestFunction) -> str:
    if f.kind == "constant":
        return f"constant:c={f.c:.17g}"
    if f.kind == "coordinate":
        return "coordinate:exponents=" + ",".join(f"{e:.17g}" for e in f.exponents)
    center = ",".join(f"{v:.17g}" for v in f.center)
    return (f"bump:center={center};radius={f.radius:.17g};"
            f"smoothness={f.smoothness:.17g}")


def parse_config(path_or_text: str) -> ExperimentConfig:
    """Read an experiment configuration from a file path or INI text."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if os.path.exists(path_or_text):
        with open(path_or_text) as fh:
            cp.read_file(fh)
    else:
        cp.read_string(path_or_text)
    if not cp.has_section("experiment") or not cp.has_option("experiment", "kind"):
        raise ArgumentError("experiment.kind: missing required field")
    g = cp.get
    cfg = ExperimentConfig(kind=g("experiment", "kind").strip())
    if cp.has_option("experiment", "seed"):
        cfg.seed = cp.getint("experiment", "seed")
    if cp.has_option("experiment", "workers"):
        cfg.workers = cp.getint("experiment", "workers")
    if cp.has_option("experiment", "output"):
        cfg.output = g("experiment", "output").strip()
    if cp.has_section("density"):
        if cp.has_option("density", "d"):
            cfg.d = cp.getint("density", "d")
        if cp.has_option("density", "delta"):
            cfg.delta = cp.getfloat("density", "delta")
        if cp.has_option("density", "rho0"):
            cfg.rho0 = cp.getfloat("density", "rho0")
        if cp.has_option("density", "box_low"):
            cfg.box_low = _floats(g("density", "box_low"))
        if cp.has_option("density", "box_high"):
            cfg.box_high = _floats(g("density", "box_high"))
        if cp.has_option("density", "time_cap") and g("density", "time_cap").strip():
            cfg.time_cap = cp.getfloat("density", "time_cap")
    if cp.has_section("profile"):
        if cp.has_option("profile", "kind"):
            cfg.psi_kind = g("profile", "kind").strip()
        if cp.has_option("profile", "alpha"):
            cfg.alpha = cp.getfloat("profile", "alpha")
        if cp.has_option("profile", "knots_l"):
            cfg.knots_l = _floats(g("profile", "knots_l"))
        if cp.has_option("profile", "knots_v"):
            cfg.knots_v = _floats(g("profile", "knots_v"))
    if cp.has_section("grid"):
        if cp.has_option("grid", "lambda_grid"):
            cfg.lambda_grid = _floats(g("grid", "lambda_grid"))
        if cp.has_option("grid", "n_grid"):
            cfg.n_grid = _ints(g("grid", "n_grid"))
        if cp.has_option("grid", "R"):
            cfg.R = cp.getint("grid", "R")
    if cp.has_section("method"):
        if cp.has_option("method", "name"):
            cfg.method = g("method", "name").strip()
        if cp.has_option("method", "time_cap_factor"):
            cfg.time_cap_factor = cp.getfloat("method", "time_cap_factor")
    if cp.has_section("functions"):
        fs = []
        for name, text in cp.items("functions"):
            try:
                fs.append(_parse_function(name, text))
            except (ArgumentError, ValueError) as exc:
                raise ArgumentError(f"functions.{name}: {exc}") from exc
        cfg.fs = tuple(fs)
    if cp.has_section("correlation"):
        for key in ("h1", "h2", "separation"):
            if cp.has_option("correlation", key):
                setattr(cfg, key, cp.getfloat("correlation", key))
        if cp.has_option("correlation", "r"):
            cfg.corr_R = cp.getint("correlation", "r")
    if cp.has_section("localization"):
        if cp.has_option("localization", "lambda"):
            cfg.loc_lambda = cp.getfloat("localization", "lambda")
        if cp.has_option("localization", "configs"):
            cfg.loc_configs = cp.getint("localization", "configs")
        if cp.has_option("localization", "r_points"):
            cfg.r_points = cp.getint("localization", "r_points")
    return cfg


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical INI text; parse(serialize(cfg)) == cfg."""
    out = io.StringIO()

    def sec(name, pairs):
        out.write(f"[{name}]\n")
        for k, v in pairs:
            out.write(f"{k} = {v}\n")
        out.write("\n")

    sec("experiment", [("kind", cfg.kind), ("seed", cfg.seed),
                       ("workers", cfg.workers), ("output", cfg.output)])
    dens = [("d", cfg.d), ("delta", f"{cfg.delta:.17g}"),
            ("rho0", f"{cfg.rho0:.17g}"),
            ("box_low", ",".join(f"{v:.17g}" for v in cfg.box_low)),
            ("box_high", ",".join(f"{v:.17g}" for v in cfg.box_high))]
    if cfg.time_cap is not None:
        dens.append(("time_cap", f"{cfg.time_cap:.17g}"))
    sec("density", dens)
    prof = [("kind", cfg.psi_kind), ("alpha", f"{cfg.alpha:.17g}")]
    if cfg.knots_l:
        prof += [("knots_l", ",".join(f"{v:.17g}" for v in cfg.knots_l)),
                 ("knots_v", ",".join(f"{v:.17g}" for v in cfg.knots_v))]
    sec("profile", prof)
    grid = []
    if cfg.lambda_grid:
        grid.append(("lambda_grid", ",".join(f"{v:.17g}" for v in cfg.lambda_grid)))
    if cfg.n_grid:
        grid.append(("n_grid", ",".join(str(v) for v in cfg.n_grid)))
    grid.append(("R", cfg.R))
    sec("grid", grid)
    sec("method", [("name", cfg.method),
                   ("time_cap_factor", f"{cfg.time_cap_factor:.17g}")])
    if cfg.fs:
        sec("functions", [(f.name, _format_function(f)) for f in cfg.fs])
    if cfg.kind == "correlation":
        sec("correlation", [("h1", f"{cfg.h1:.17g}"), ("h2", f"{cfg.h2:.17g}"),
                            ("separation", f"{cfg.separation:.17g}"),
                            ("r", cfg.corr_R)])
    if cfg.kind == "localization":
        sec("localization", [("lambda", f"{cfg.loc_lambda:.17g}"),
                             ("configs", cfg.loc_configs),
                             ("r_points", cfg.r_points)])
    return out.getvalue()


def validate_config(cfg: ExperimentConfig) -> list:
    """Field-level validation messages; empty means the config is runnable."""
    errs = []
    if cfg.kind not in KINDS:
        errs.append(f"experiment.kind: unknown kind {cfg.kind!r}; "
                    f"expected one of {', '.join(KINDS)}")
        return errs
    if cfg.seed < 0:
        errs.append("experiment.seed: must be nonnegative")
    if cfg.workers < 0:
        errs.append("experiment.workers: must be nonnegative (0 = all cores)")
    if cfg.d < 2:
        errs.append("density.d: must be at least 2")
    if cfg.delta < 0:
        errs.append("density.delta: must be nonnegative")
    if cfg.rho0 <= 0:
        errs.append("density.rho0: must be positive")
    if cfg.kind != "hull":
        if len(cfg.box_low) != len(cfg.box_high):
            errs.append("density.box_low/box_high: length mismatch")
        elif len(cfg.box_low) != cfg.d - 1:
            errs.append(f"density.box_low: expected {cfg.d - 1} coordinates "
                        f"for d={cfg.d}")
        elif any(h <= l for l, h in zip(cfg.box_low, cfg.box_high)):
            errs.append("density.box_high: must exceed box_low componentwise")
        if cfg.time_cap is not None and cfg.time_cap <= 0:
            errs.append("density.time_cap: must be positive when given")
    if cfg.psi_kind not in ("power", "cap", "tabulated"):
        errs.append(f"profile.kind: unknown profile {cfg.psi_kind!r}")
    if cfg.psi_kind == "power" and cfg.alpha <= 0:
        errs.append("profile.alpha: must be positive")
    if cfg.psi_kind == "tabulated":
        try:
            PsiSpec.tabulated(cfg.knots_l, cfg.knots_v, cfg.alpha)
        except (ArgumentError, DomainError) as exc:
            errs.append(f"profile.knots_l/knots_v: {exc}")
    if cfg.method not in ("auto", "cone", "envelope"):
        errs.append(f"method.name: unknown method {cfg.method!r}")
    if cfg.method == "cone" and not (cfg.psi_kind == "power"
                                     and cfg.alpha <= 1.0 + 1e-12):
        errs.append("method.name: the downward-cone method requires a "
                    "power-law profile with alpha <= 1; cone emptiness is "
                    "equivalent to extremality only there - use envelope")
    needs_lambda = cfg.kind in ("scaling", "maximal", "hull", "clt", "birth-growth")
    if needs_lambda:
        if not cfg.lambda_grid:
            errs.append("grid.lambda_grid: required for this experiment")
        elif any(v <= 0 for v in cfg.lambda_grid):
            errs.append("grid.lambda_grid: entries must be positive")
        elif any(b <= a for a, b in zip(cfg.lambda_grid, cfg.lambda_grid[1:])):
            errs.append("grid.lambda_grid: must be strictly increasing")
        if cfg.R < 30:
            errs.append("grid.R: at least 30 replicates are required")
        if cfg.kind == "clt" and cfg.R < 200:
            errs.append("grid.R: normality diagnostics need R >= 200")
        if not cfg.fs:
            errs.append("functions: at least one test function is required")
    if cfg.kind == "birth-growth" and not (cfg.psi_kind == "power"
                                           and abs(cfg.alpha - 1.0) <= 1e-12):
        errs.append("profile.alpha: birth-growth requires the linear profile "
                    "(power law, alpha = 1)")
    if cfg.kind == "depoissonize":
        if not cfg.n_grid:
            errs.append("grid.n_grid: required for depoissonize")
        elif any(b <= a for a, b in zip(cfg.n_grid, cfg.n_grid[1:])):
            errs.append("grid.n_grid: must be strictly increasing")
        if cfg.R < 30:
            errs.append("grid.R: at least 30 replicates are required")
        if not (cfg.psi_kind == "power" and cfg.alpha <= 1.0 + 1e-12):
            errs.append("profile.alpha: depoissonize requires alpha <= 1")
        if not errs:
            try:
                mass = total_mass(cfg.density())
                if abs(mass - 1.0) > 1e-9:
                    errs.append(f"density: total mass is {mass:.6g}, but the "
                                "binomial/Poisson comparison needs mass 1; "
                                "set time_cap/rho0 accordingly")
            except (ArgumentError, DomainError) as exc:
                errs.append(f"density: {exc}")
    if cfg.kind == "correlation":
        if cfg.h1 < 0 or cfg.h2 < 0:
            errs.append("correlation.h1/h2: heights must be nonnegative")
        if cfg.separation < 0:
            errs.append("correlation.separation: must be nonnegative")
        if cfg.corr_R < 30:
            errs.append("correlation.r: at least 30 replicates are required")
        if not (cfg.psi_kind == "power" and cfg.alpha <= 1.0 + 1e-12):
            errs.append("profile.alpha: correlation estimators require alpha <= 1")
    if cfg.kind == "localization":
        if cfg.loc_lambda <= 0:
            errs.append("localization.lambda: must be positive")
        if cfg.loc_configs < 1:
            errs.append("localization.configs: must be at least 1")
        if cfg.r_points < 4:
            errs.append("localization.r_points: need at least 4 grid radii")
        if not (cfg.psi_kind == "power" and cfg.alpha <= 1.0 + 1e-12):
            errs.append("profile.alpha: localization radii use the cone "
                        "route, which requires alpha <= 1")
    return errs


def _size_estimate(cfg: ExperimentConfig) -> str:
    try:
        if cfg.kind in ("scaling", "maximal", "clt", "birth-growth"):
            psi = cfg.profile()
            exps = compute_exponents(cfg.d, cfg.alpha if psi.kind == "power" else 2.0,
                                     cfg.delta)
            total = 0.0
            peak = 0.0
            for lam in cfg.lambda_grid:
                dens = cfg.density()
                if dens.time_cap is None:
                    dens = dataclasses.replace(
                        dens, time_cap=auto_time_cap(lam, exps, cfg.time_cap_factor))
                n = lam * total_mass(dens)
                total += cfg.R * n
                peak = max(peak, n)
            return (f"expected points: ~{total:.3g} total, ~{peak:.3g} per "
                    f"largest-lambda replicate; peak memory ~"
                    f"{peak * cfg.d * 8 * 4 / 1e6:.1f} MB")
        if cfg.kind == "hull":
            total = sum(lam * total_mass(cfg.density()) for lam in cfg.lambda_grid)
            return f"expected points: ~{cfg.R * total:.3g} total"
        if cfg.kind == "depoissonize":
            return f"expected points: ~{cfg.R * 2 * sum(cfg.n_grid):.3g} total"
    except (ArgumentError, DomainError):
        pass
    return "expected points: n/a"


# ---------------------------------------------------------------------------
# runners


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(obj, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_config(cfg: ExperimentConfig, out_dir: str | None = None) -> dict:
    """Execute the configured experiment; returns the manifest dict."""
    t0 = time.monotonic()
    out = out_dir or cfg.output
    os.makedirs(out, exist_ok=True)
    workers = cfg.workers if cfg.workers > 0 else None
    outputs = []

    if cfg.kind in ("scaling", "maximal", "hull", "clt", "birth-growth"):
        process = {"scaling": "maximal", "maximal": "maximal", "clt": "maximal",
                   "hull": "hull", "birth-growth": "birth-growth"}[cfg.kind]
        fs = cfg.fs if cfg.fs else (TestFunction("constant", name="count"),)
        report = run_scaling_experiment(
            cfg.density(), cfg.profile(), cfg.lambda_grid, cfg.R, list(fs),
            cfg.seed, process=process, method=cfg.method, workers=workers,
            time_cap_factor=cfg.time_cap_factor)
        write_report_json(report, os.path.join(out, "report.json"))
        write_report_csv(report, os.path.join(out, "report.csv"))
        write_report_plotdata(report, os.path.join(out, "plotdata.csv"))
        outputs += ["report.json", "report.csv", "plotdata.csv"]
        for name, entry in report.slopes.items():
            for which, fit in entry.items():
                print(f"{name} {which} slope: {fit['slope']:.4f} "
                      f"(ci95 {fit['ci95'][0]:.4f}..{fit['ci95'][1]:.4f})")
        for name, diag in report.normality.items():
            print(f"{name} normality: skew {diag['skewness']:.3f} "
                  f"kurtosis {diag['excess_kurtosis']:.3f} "
                  f"KS {diag['ks_distance']:.4f} "
                  f"({'pass' if diag['passed'] else 'fail'})")
    elif cfg.kind == "correlation":
        y2 = np.zeros(cfg.d - 1)
        y2[0] = cfg.separation
        est = estimate_two_point_correlation(cfg.d, cfg.alpha, cfg.delta,
                                             cfg.h1, y2, cfg.h2,
                                             R=cfg.corr_R, seed=cfg.seed)
        payload = {"h1": cfg.h1, "h2": cfg.h2, "separation": cfg.separation,
                   "value": est.value, "se": est.se, "R": est.R,
                   "window_radius": est.window_radius,
                   "time_cap": est.time_cap, "product_mean": est.product_mean,
                   "single_means": list(est.single_means)}
        _write_json(payload, os.path.join(out, "correlation.json"))
        outputs.append("correlation.json")
        print(f"two-point correlation: {est.value:.5f} +- {est.se:.5f}")
    elif cfg.kind == "depoissonize":
        rep = depoissonization_check(cfg.density(), cfg.alpha, cfg.n_grid,
                                     cfg.R, f=cfg.fs[0] if cfg.fs else None,
                                     seed=cfg.seed, workers=workers)
        _write_json(rep.to_dict(), os.path.join(out, "depoissonize.json"))
        lines = ["n,mean_ratio,mean_ratio_se,var_ratio"]
        for k, n in enumerate(rep.n_grid):
            lines.append(f"{n},{rep.mean_ratio[k]:.17g},"
                         f"{rep.mean_ratio_se[k]:.17g},{rep.var_ratio[k]:.17g}")
        with open(os.path.join(out, "depoissonize.csv"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
        outputs += ["depoissonize.json", "depoissonize.csv"]
        for k, n in enumerate(rep.n_grid):
            print(f"n={n}: mean ratio {rep.mean_ratio[k]:.4f} "
                  f"var ratio {rep.var_ratio[k]:.4f}")
    elif cfg.kind == "localization":
        psi = cfg.profile()
        exps = compute_exponents(cfg.d, cfg.alpha, cfg.delta)
        radii = []
        for c in range(cfg.loc_configs):
            dens = cfg.density()
            if dens.time_cap is None:
                dens = dataclasses.replace(
                    dens, time_cap=auto_time_cap(cfg.loc_lambda, exps,
                                                 cfg.time_cap_factor))
            config = sample_poisson_box(dens, cfg.loc_lambda,
                                        (cfg.seed, "loc", c))
            if config.n:
                r = localization_radii_cone(config, psi)
                radii.append(r * cfg.loc_lambda ** exps.beta)  # rescaled units
        radii = np.concatenate(radii) if radii else np.zeros(0)
        pos = np.sort(radii[radii > 0])
        grid = np.linspace(0.0, pos[-1] if pos.size else 1.0, cfg.r_points)
        survival = [(float(L), float((radii > L).mean())) for L in grid]
        payload = {"lambda": cfg.loc_lambda, "configs": cfg.loc_configs,
                   "n_radii": int(radii.size),
                   "zero_fraction": float((radii == 0).mean()) if radii.size else 0.0,
                   "survival": survival}
        small = [(L, s) for L, s in survival if s > 0]
        if len(small) >= 3:
            Ls = np.array([v[0] for v in small])
            Ss = np.array([v[1] for v in small])
            slope = float(np.polyfit(Ls, np.log(Ss), 1)[0])
            payload["log_survival_slope"] = slope
            print(f"survival log-slope: {slope:.4f} over {radii.size} radii")
        _write_json(payload, os.path.join(out, "localization.json"))
        with open(os.path.join(out, "survival.csv"), "w") as fh:
            fh.write("L,survival\n")
            for L, s in survival:
                fh.write(f"{L:.17g},{s:.17g}\n")
        outputs += ["localization.json", "survival.csv"]
    else:  # pragma: no cover - validated earlier
        raise ArgumentError(f"experiment.kind: unknown kind {cfg.kind!r}")

    manifest = {
        "config_sha256": hashlib.sha256(serialize_config(cfg).encode()).hexdigest(),
        "code_version": __version__,
        "root_seed": int(cfg.seed),
        "wall_seconds": round(time.monotonic() - t0, 3),
        "outputs": {name: _sha256(os.path.join(out, name)) for name in outputs},
    }
    _write_json(manifest, os.path.join(out, "manifest.json"))
    return manifest


# ---------------------------------------------------------------------------
# entry point


def _resolve_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    seed = cfg.seed
    workers = cfg.workers
    if os.environ.get("PSIGROWTH_SEED"):
        seed = int(os.environ["PSIGROWTH_SEED"])
    if os.environ.get("PSIGROWTH_WORKERS"):
        workers = int(os.environ["PSIGROWTH_WORKERS"])
    if args.seed is not None:
        seed = args.seed
    if args.workers is not None:
        workers = args.workers
    return dataclasses.replace(cfg, seed=seed, workers=workers)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="psi-growth",
        description="growth-process simulation experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "execute an experiment configuration"),
                        ("validate", "check a configuration without running")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="path to the INI configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override the root seed")
        p.add_argument("--workers", type=int, default=None,
                       help="override the worker count (0 = all cores)")
        p.add_argument("--out", default=None, help="override the output directory")
    args = parser.parse_args(argv)

    if not os.path.exists(args.config):
        print(f"config file not found: {args.config}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(args.config)
    except (ArgumentError, configparser.Error, ValueError) as exc:
        print(f"config parse error: {exc}", file=sys.stderr)
        return 2
    cfg = _resolve_overrides(cfg, args)
    errors = validate_config(cfg)
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return 2
    if args.command == "validate":
        print("OK")
        print(_size_estimate(cfg))
        return 0
    try:
        manifest = run_config(cfg, out_dir=args.out)
    except (ArgumentError, DomainError, MethodError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(manifest['outputs']) + 1} files to "
          f"{args.out or cfg.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
