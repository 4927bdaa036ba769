"""Empirical-measure statistics for growth-process simulations.

The central objects are pairings <f, mu> = sum_i flag_i * f(x_i) of a
test function against the flagged point measure.  This module provides

* replicated scaling experiments over a lambda grid with log-log slope
  fits and confidence intervals,
* Monte Carlo estimators of the one- and two-point correlation
  functions of the unit-intensity limit process,
* quadrature for the limit integrals I(f) and J(f) that drive the
  limiting mean and variance, fed by the Monte Carlo correlation
  estimates on cached grids,
* normality diagnostics (skewness, excess kurtosis, Kolmogorov-Smirnov)
  for standardized pairings,
* a binomial-versus-Poisson comparison at matched intensity.

Replicates are independent tasks keyed by seeds derived from the root
seed and the replicate index, so reports are bit-for-bit reproducible
for a given (parameters, seed) pair regardless of worker count or task
completion order.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special, stats as sstats

from .errors import ArgumentError, BiasWarning
from .extremality import birth_growth_accept, xi_downward_cone, xi_envelope
from .geometry import (BoxRegion, PointConfiguration, PsiSpec,
                       ScalingExponents, compute_exponents)
from .hull import hull_vertices
from .sampling import (DensitySpec, sample_binomial_box, sample_limit_process,
                       sample_poisson_ball, sample_poisson_box, sphere_surface,
                       total_mass)

__all__ = [
    "TestFunction",
    "empirical_pairing",
    "auto_time_cap",
    "fit_scaling_exponent",
    "SlopeFit",
    "EstimateReport",
    "run_scaling_experiment",
    "normality_diagnostics",
    "NormalityReport",
    "estimate_one_point_correlation",
    "estimate_two_point_correlation",
    "estimate_I",
    "estimate_J",
    "kernel_correlation_prediction",
    "depoissonization_check",
    "write_report_json",
    "read_report_json",
    "write_report_csv",
    "write_report_plotdata",
]


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """Bounded test function on the spatial domain.

    kind "constant": f = c.
    kind "coordinate": f(x) = prod_k x_k ** exponents[k].
    kind "bump": smooth bump exp(-s * t^2 / (1 - t^2)) with
        t = |x - center| / radius, vanishing outside the ball; its
        support descriptor marks it interior-supported.
    """

    __test__ = False  # not a test case, despite the name

    kind: str
    c: float = 1.0
    exponents: tuple = ()
    center: tuple = ()
    radius: float = 1.0
    smoothness: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("constant", "coordinate", "bump"):
            raise ArgumentError(f"unknown test-function kind {self.kind!r}")
        object.__setattr__(self, "exponents", tuple(float(e) for e in self.exponents))
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if self.kind == "bump" and not (self.radius > 0 and self.smoothness > 0):
            raise ArgumentError("bump radius and smoothness must be positive")
        if not self.name:
            object.__setattr__(self, "name", self._auto_name())

    def _auto_name(self) -> str:
        if self.kind == "constant":
            return f"const{self.c:g}"
        if self.kind == "coordinate":
            return "x" + "_".join(f"{e:g}" for e in self.exponents)
        return f"bump_r{self.radius:g}"

    @property
    def interior_supported(self) -> bool:
        return self.kind == "bump"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "constant":
            return np.full(x.shape[0], float(self.c))
        if self.kind == "coordinate":
            if len(self.exponents) > x.shape[1]:
                raise ArgumentError("more exponents than coordinates")
            out = np.ones(x.shape[0])
            for k, e in enumerate(self.exponents):
                if e:
                    out = out * x[:, k] ** e
            return out
        center = np.asarray(self.center)
        if center.size != x.shape[1]:
            raise ArgumentError("bump center dimension mismatch")
        t2 = ((x - center) ** 2).sum(axis=1) / self.radius ** 2
        out = np.zeros(x.shape[0])
        inside = t2 < 1.0
        out[inside] = np.exp(-self.smoothness * t2[inside] / (1.0 - t2[inside]))
        return out

    def evaluate(self, config: PointConfiguration) -> np.ndarray:
        pts = config.spatial if config.kind == "spacetime" else config.points
        return self(pts)


def _product(f, g):
    def fg(x):
        return f(x) * g(x)
    return fg


def empirical_pairing(config: PointConfiguration, flags, f) -> float:
    """<f, mu> = sum of f over the flagged points."""
    flags = np.asarray(flags, dtype=float)
    if flags.size != config.n:
        raise ArgumentError("flags length must match the configuration")
    if config.n == 0:
        return 0.0
    vals = f.evaluate(config) if isinstance(f, TestFunction) else f(
        config.spatial if config.kind == "spacetime" else config.points)
    return float(np.dot(flags, vals))


# ---------------------------------------------------------------------------
# slope fits


@dataclass
class SlopeFit:
    slope: float
    stderr: float
    ci95: tuple
    indices: list
    intercept: float

    def to_dict(self):
        return {"slope": self.slope, "stderr": self.stderr,
                "ci95": list(self.ci95), "indices": list(self.indices),
                "intercept": self.intercept}


def fit_scaling_exponent(lambdas, values, window: str = "top-half") -> SlopeFit:
    """Least-squares slope of log(values) against log(lambdas).

    window "top-half" keeps the grid points at or above the geometric
    mean of the grid (reduces pre-asymptotic bias); "full" uses all.
    """
    lam = np.asarray(lambdas, dtype=float)
    val = np.asarray(values, dtype=float)
    if lam.size != val.size or lam.size < 2:
        raise ArgumentError("need matching grids with at least 2 points")
    if np.any(lam <= 0) or np.any(val <= 0):
        raise ArgumentError("slope fit needs positive lambdas and values")
    if np.any(np.diff(lam) <= 0):
        raise ArgumentError("lambda grid must be strictly increasing")
    if window == "top-half":
        gm = math.exp(np.log(lam).mean())
        idx = np.nonzero(lam >= gm * (1 - 1e-12))[0]
        if idx.size < 2:
            idx = np.arange(lam.size)
    elif window == "full":
        idx = np.arange(lam.size)
    else:
        raise ArgumentError("window must be 'top-half' or 'full'")
    res = sstats.linregress(np.log(lam[idx]), np.log(val[idx]))
    dof = idx.size - 2
    half = (sstats.t.ppf(0.975, dof) * res.stderr) if dof > 0 else math.inf
    return SlopeFit(slope=float(res.slope), stderr=float(res.stderr),
                    ci95=(float(res.slope - half), float(res.slope + half)),
                    indices=[int(k) for k in idx], intercept=float(res.intercept))


# ---------------------------------------------------------------------------
# normality diagnostics


@dataclass
class NormalityReport:
    n: int
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    ks_threshold: float
    skew_max: float
    kurt_max: float
    passed_skew: bool
    passed_kurt: bool
    passed_ks: bool
    passed: bool

    def to_dict(self):
        return dataclasses.asdict(self)


def normality_diagnostics(samples, skew_max: float = 0.15, kurt_max: float = 0.3,
                          ks_factor: float = 1.36) -> NormalityReport:
    """Moment and Kolmogorov-Smirnov checks of standardized samples
    against the standard normal; thresholds sit at the asymptotic 5%
    band for the default KS factor."""
    z = np.asarray(samples, dtype=float)
    if z.size < 200:
        raise ArgumentError("normality diagnostics need at least 200 samples")
    skew = float(sstats.skew(z))
    kurt = float(sstats.kurtosis(z))  # excess
    ks = float(sstats.kstest(z, "norm").statistic)
    thr = ks_factor / math.sqrt(z.size)
    ok_s, ok_k, ok_d = abs(skew) < skew_max, abs(kurt) < kurt_max, ks < thr
    return NormalityReport(n=int(z.size), skewness=skew, excess_kurtosis=kurt,
                           ks_distance=ks, ks_threshold=thr,
                           skew_max=skew_max, kurt_max=kurt_max,
                           passed_skew=ok_s, passed_kurt=ok_k, passed_ks=ok_d,
                           passed=ok_s and ok_k and ok_d)


# ---------------------------------------------------------------------------
# scaling experiments


def _seed_record(seed):
    """JSON-friendly form of a root seed (int, or list for tagged tuples)."""
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    return [_seed_record(s) if isinstance(s, (int, np.integer, tuple)) else str(s)
            for s in seed]


def auto_time_cap(lam: float, exps: ScalingExponents, factor: float = 3.0) -> float:
    """Default time truncation factor * lambda^{-gamma} * log(lambda).

    Rescaled, the cap sits at factor * log(lambda); the extremality
    probability there is super-polynomially small, so truncation changes
    kept-point flags not at all (alpha <= 1: covers come from below) and
    the lost mean mass is negligible against Monte Carlo error.
    """
    if lam <= 0:
        raise ArgumentError("lambda must be positive")
    return factor * lam ** (-exps.gamma) * max(math.log(lam), 1.0)


def _flags_for(config: PointConfiguration, psi: PsiSpec, process: str,
               method: str = "auto"):
    if process == "maximal":
        if method == "envelope" or (method == "auto" and not (
                psi.kind == "power" and psi.alpha_at_zero <= 1.0 + 1e-12)):
            return xi_envelope(config, psi)
        return xi_downward_cone(config, psi)
    if process == "birth-growth":
        return birth_growth_accept(config, psi)
    raise ArgumentError(f"unknown process {process!r}")


def _scaling_task(payload):
    """One replicate: sample, flag, pair.  Top-level for pickling."""
    (process, density, psi, lam, li, r, root_seed, fs, method) = payload
    seed = (root_seed, "scaling", li, r)
    if process == "hull":
        config = sample_poisson_ball(density.d, density.delta, density.rho0,
                                     lam, seed, rho0_high=density.rho0_high)
        result = hull_vertices(config)
    else:
        config = sample_poisson_box(density, lam, seed)
        result = _flags_for(config, psi, process, method)
    pair = np.array([empirical_pairing(config, result.flags, f) for f in fs])
    unresolved = len(getattr(result, "unresolved", []))
    return li, r, pair, unresolved, config.n


@dataclass
class EstimateReport:
    """Replicated experiment results over a lambda grid.

    per_lambda[k] holds the replicate count, per-function mean/variance
    with standard errors, and the covariance matrix at lambda_grid[k];
    slopes holds the fitted exponents; normality the diagnostics at the
    largest lambda (when R is large enough).  Wall-clock data is kept
    out so reports are reproducible bit for bit.
    """

    experiment: str
    lambda_grid: list
    replicates: int
    f_names: list
    per_lambda: list
    slopes: dict
    normality: dict
    root_seed: int
    config_hash: str
    params: dict
    standardized: dict = field(default_factory=dict)

    def validate(self) -> None:
        for row in self.per_lambda:
            var = np.asarray(row["var"])
            if np.any(var < 0):
                raise ArgumentError("negative variance in report")
            cov = np.asarray(row["cov"])
            if not np.allclose(cov, cov.T):
                raise ArgumentError("covariance not symmetric")
            w = np.linalg.eigvalsh(cov)
            if w.size and w.min() < -1e-9 * max(np.trace(cov), 1e-300):
                raise ArgumentError("covariance not positive semidefinite")

    def to_dict(self) -> dict:
        return {"experiment": self.experiment,
                "lambda_grid": [float(v) for v in self.lambda_grid],
                "replicates": int(self.replicates),
                "f_names": list(self.f_names),
                "per_lambda": self.per_lambda,
                "slopes": self.slopes,
                "normality": self.normality,
                "root_seed": self.root_seed,
                "config_hash": self.config_hash,
                "params": self.params,
                "standardized": self.standardized}

    @classmethod
    def from_dict(cls, d: dict) -> "EstimateReport":
        return cls(**d)


def _hash_params(params: dict) -> str:
    return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()


def _f_descriptor(f: TestFunction) -> dict:
    return {"kind": f.kind, "c": f.c, "exponents": list(f.exponents),
            "center": list(f.center), "radius": f.radius,
            "smoothness": f.smoothness, "name": f.name}


def run_scaling_experiment(density: DensitySpec, psi: PsiSpec | None,
                           lambda_grid, R: int, fs, seed: int,
                           process: str = "maximal", method: str = "auto",
                           workers: int | None = None,
                           time_cap_factor: float = 3.0,
                           normality_min_R: int = 200) -> EstimateReport:
    """Replicated pairings over a lambda grid with slope fits.

    For each lambda, R independent configurations are sampled and
    flagged; pairings against each test function are aggregated into
    means, variances and covariances with standard errors.  Mean slopes
    are fitted on the top half of the grid, variance slopes on the full
    grid (variance estimates are noisier, and the extra span buys more
    precision than the pre-asymptotic points cost).
    """
    lam_grid = [float(v) for v in lambda_grid]
    if len(lam_grid) < 1 or any(b <= a for a, b in zip(lam_grid, lam_grid[1:])):
        raise ArgumentError("lambda_grid must be strictly increasing")
    if R < 30:
        raise ArgumentError("R must be at least 30")
    if isinstance(fs, TestFunction):
        fs = [fs]
    fs = list(fs)
    if not fs:
        raise ArgumentError("need at least one test function")
    if process not in ("maximal", "birth-growth", "hull"):
        raise ArgumentError(f"unknown process {process!r}")
    if process != "hull" and psi is None:
        raise ArgumentError("psi is required for spacetime processes")

    if process == "hull":
        exps = compute_exponents(density.d + 1, 2.0, density.delta)
    else:
        if psi.kind != "power":
            raise ArgumentError("scaling experiments need a power-law profile "
                                "(the exponent algebra is defined by alpha)")
        exps = compute_exponents(density.d, psi.alpha_at_zero, density.delta)

    params = {"experiment": process,
              "density": {"d": density.d, "delta": density.delta,
                          "rho0": density.rho0 if not callable(density.rho0) else "callable",
                          "region": type(density.region).__name__,
                          "time_cap": density.time_cap},
              "psi": None if psi is None else {"kind": psi.kind,
                                               "alpha": psi.alpha_at_zero},
              "lambda_grid": lam_grid, "R": int(R),
              "fs": [_f_descriptor(f) for f in fs],
              "seed": _seed_record(seed), "time_cap_factor": time_cap_factor,
              "method": method}
    config_hash = _hash_params(params)

    payloads = []
    for li, lam in enumerate(lam_grid):
        dens_l = density
        if process != "hull" and density.time_cap is None:
            dens_l = replace(density, time_cap=auto_time_cap(lam, exps, time_cap_factor))
        for r in range(R):
            payloads.append((process, dens_l, psi, lam, li, r, seed, fs, method))

    F = len(fs)
    pairings = np.zeros((len(lam_grid), R, F))
    unresolved = np.zeros((len(lam_grid), R), dtype=np.int64)
    counts = np.zeros((len(lam_grid), R), dtype=np.int64)

    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1:
        results = map(_scaling_task, payloads)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_scaling_task, payloads, chunksize=max(1, len(payloads) // (8 * workers)))
    for li, r, pair, unres, n in results:
        pairings[li, r] = pair
        unresolved[li, r] = unres
        counts[li, r] = n
    if workers > 1:
        pool.shutdown()

    per_lambda = []
    for li, lam in enumerate(lam_grid):
        X = pairings[li]
        mean = X.mean(axis=0)
        var = X.var(axis=0, ddof=1)
        cov = np.cov(X.T) if F > 1 else np.array([[var[0]]])
        cov = (cov + cov.T) / 2.0
        per_lambda.append({
            "lambda": lam, "R": int(R),
            "mean": [float(v) for v in mean],
            "se_mean": [float(v) for v in np.sqrt(var / R)],
            "var": [float(v) for v in var],
            "se_var": [float(v) for v in var * math.sqrt(2.0 / (R - 1))],
            "cov": [[float(v) for v in row] for row in np.atleast_2d(cov)],
            "unresolved": int(unresolved[li].sum()),
            "mean_points": float(counts[li].mean()),
        })

    slopes = {}
    if len(lam_grid) >= 2:
        for fi, f in enumerate(fs):
            entry = {}
            means = np.array([row["mean"][fi] for row in per_lambda])
            vars_ = np.array([row["var"][fi] for row in per_lambda])
            if np.all(means > 0):
                entry["mean"] = fit_scaling_exponent(lam_grid, means, "top-half").to_dict()
            if np.all(vars_ > 0):
                entry["var"] = fit_scaling_exponent(lam_grid, vars_, "full").to_dict()
            slopes[f.name] = entry

    normality = {}
    standardized = {}
    if R >= normality_min_R:
        X = pairings[-1]
        for fi, f in enumerate(fs):
            sd = X[:, fi].std(ddof=1)
            if sd > 0:
                z = (X[:, fi] - X[:, fi].mean()) / sd
                standardized[f.name] = [float(v) for v in z]
                normality[f.name] = normality_diagnostics(z).to_dict()

    report = EstimateReport(experiment=process, lambda_grid=lam_grid,
                            replicates=int(R), f_names=[f.name for f in fs],
                            per_lambda=per_lambda, slopes=slopes,
                            normality=normality, root_seed=_seed_record(seed),
                            config_hash=config_hash, params=params,
                            standardized=standardized)
    report.validate()
    return report


# ---------------------------------------------------------------------------
# report serialization


def write_report_json(report: EstimateReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report_json(path: str) -> EstimateReport:
    with open(path) as fh:
        return EstimateReport.from_dict(json.load(fh))


def write_report_csv(report: EstimateReport, path: str) -> None:
    """Per-(lambda, f) table with a running slope column (mean slope
    fitted on the grid prefix up to the row's lambda)."""
    lines = ["lambda,R,f,mean,se_mean,var,se_var,slope_so_far"]
    lam = report.lambda_grid
    for fi, name in enumerate(report.f_names):
        means = [row["mean"][fi] for row in report.per_lambda]
        for li, row in enumerate(report.per_lambda):
            if li >= 1 and all(m > 0 for m in means[:li + 1]):
                fit = fit_scaling_exponent(lam[:li + 1], means[:li + 1], "full")
                slope = format(fit.slope, ".17g")
            else:
                slope = ""
            lines.append(",".join([
                format(row["lambda"], ".17g"), str(row["R"]), name,
                format(row["mean"][fi], ".17g"),
                format(row["se_mean"][fi], ".17g"),
                format(row["var"][fi], ".17g"),
                format(row["se_var"][fi], ".17g"), slope]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_report_plotdata(report: EstimateReport, path: str) -> None:
    """log-log table: log lambda against log mean / log variance per f."""
    header = ["log_lambda"]
    for name in report.f_names:
        header += [f"log_mean_{name}", f"log_var_{name}"]
    lines = [",".join(header)]
    for row in report.per_lambda:
        cells = [format(math.log(row["lambda"]), ".17g")]
        for fi in range(len(report.f_names)):
            for v in (row["mean"][fi], row["var"][fi]):
                cells.append(format(math.log(v), ".17g") if v > 0 else "nan")
        lines.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# limit-process correlation estimators


@dataclass
class CorrelationEstimate:
    value: float
    se: float
    R: int
    window_radius: float
    time_cap: float
    biased: bool


def _limit_reach(alpha: float, h: float) -> float:
    return h ** (1.0 / alpha) if h > 0 else 0.0


def _planted_extremal(points: np.ndarray, h_prime: float, alpha: float,
                      extra: np.ndarray | None = None) -> bool:
    """Is (0, h') extremal in the limit configuration (cone test)?"""
    if extra is not None and extra.size:
        points = np.concatenate([points, np.atleast_2d(extra)])
    if points.shape[0] == 0:
        return True
    sp, t = points[:, :-1], points[:, -1]
    dom = t + np.linalg.norm(sp, axis=1) ** alpha <= h_prime
    return not dom.any()


def estimate_one_point_correlation(d: int, alpha: float, delta: float,
                                   h_prime: float,
                                   window_radius: float | None = None,
                                   time_cap: float | None = None,
                                   R: int = 400, seed: int = 0) -> CorrelationEstimate:
    """Monte Carlo probability that a point planted at height h' is
    extremal in the unit-intensity limit process.

    For alpha <= 1 the test is exactly local: only process points with
    time <= h' and |y| <= h'^{1/alpha} can matter, so the default window
    introduces no bias at all.  A window below that reach triggers a
    BiasWarning (the estimate is still returned).
    """
    if not (alpha > 0) or alpha > 1.0 + 1e-12:
        raise ArgumentError("one-point estimator supports alpha <= 1 "
                            "(cone test); larger alpha needs the envelope route")
    if h_prime < 0:
        raise ArgumentError("h_prime must be nonnegative")
    reach = _limit_reach(alpha, h_prime)
    if window_radius is None:
        window_radius = max(reach, 1e-6)
    if time_cap is None:
        time_cap = max(h_prime, 1e-6)
    biased = window_radius < reach - 1e-12 or time_cap < h_prime - 1e-12
    if biased:
        warnings.warn("window smaller than the cone reach; estimate is biased",
                      BiasWarning)
    if h_prime == 0.0:
        return CorrelationEstimate(1.0, 0.0, R, window_radius, time_cap, biased)
    hits = 0
    for r in range(R):
        config = sample_limit_process(d, delta, window_radius, time_cap,
                                      (seed, "onept", r))
        hits += _planted_extremal(config.points, h_prime, alpha)
    p = hits / R
    se = math.sqrt(p * (1 - p) / R)
    return CorrelationEstimate(p, se, R, window_radius, time_cap, biased)


@dataclass
class TwoPointEstimate:
    value: float
    se: float
    R: int
    window_radius: float
    time_cap: float
    biased: bool
    product_mean: float
    single_means: tuple


def estimate_two_point_correlation(d: int, alpha: float, delta: float,
                                   h1: float, y2, h2: float,
                                   window_radius: float | None = None,
                                   time_cap: float | None = None,
                                   R: int = 400, seed: int = 0) -> TwoPointEstimate:
    """Covariance of the extremality indicators of two planted points
    x = (0, h1) and y = (y2, h2) in the limit process.

    One shared sample per replicate feeds the product term and both
    marginal terms (common random numbers), and the standard error of
    mean(prod) - mean(a) * mean(b) comes from the delta method on the
    joint replicate covariance.
    """
    if not (alpha > 0) or alpha > 1.0 + 1e-12:
        raise ArgumentError("two-point estimator supports alpha <= 1")
    y2 = np.atleast_1d(np.asarray(y2, dtype=float))
    if y2.size != d - 1:
        raise ArgumentError("y2 must have d-1 coordinates")
    if h1 < 0 or h2 < 0:
        raise ArgumentError("heights must be nonnegative")
    sep = float(np.linalg.norm(y2))
    reach = max(_limit_reach(alpha, h1), sep + _limit_reach(alpha, h2))
    if window_radius is None:
        window_radius = max(reach, 1e-6)
    if time_cap is None:
        time_cap = max(h1, h2, 1e-6)
    biased = window_radius < reach - 1e-12 or time_cap < max(h1, h2) - 1e-12
    if biased:
        warnings.warn("window smaller than the union of cone reaches; "
                      "estimate is biased", BiasWarning)
    planted_x = np.concatenate([np.zeros(d - 1), [h1]])
    planted_y = np.concatenate([y2, [h2]])
    # cross-domination between the planted points is deterministic
    y_dominates_x = h2 + sep ** alpha <= h1
    x_dominates_y = h1 + sep ** alpha <= h2
    prod = np.empty(R)
    a = np.empty(R)
    b = np.empty(R)
    for r in range(R):
        config = sample_limit_process(d, delta, window_radius, time_cap,
                                      (seed, "twopt", r))
        pts = config.points
        sp, t = pts[:, :-1], pts[:, -1]
        dom_x = bool((t + np.linalg.norm(sp, axis=1) ** alpha <= h1).any())
        dom_y = bool((t + np.linalg.norm(sp - y2, axis=1) ** alpha <= h2).any())
        a[r] = not dom_x
        b[r] = not dom_y
        xi_x = (not dom_x) and (not y_dominates_x)
        xi_y = (not dom_y) and (not x_dominates_y)
        prod[r] = xi_x and xi_y
    mp, ma, mb = prod.mean(), a.mean(), b.mean()
    value = mp - ma * mb
    C = np.cov(np.stack([prod, a, b]))
    g = np.array([1.0, -mb, -ma])
    se = math.sqrt(max(float(g @ C @ g), 0.0) / R)
    return TwoPointEstimate(float(value), se, R, window_radius, time_cap, biased,
                            float(mp), (float(ma), float(mb)))


# ---------------------------------------------------------------------------
# limit integrals


def _spatial_part(f, density: DensitySpec, tau: float, order: int = 32) -> float:
    """integral over the spatial region of f(x) * rho0(x)^tau."""
    if not isinstance(density.region, BoxRegion):
        raise ArgumentError("limit integrals need a box spatial region")
    low = np.asarray(density.region.low)
    high = np.asarray(density.region.high)
    dim = low.size

    def integrand(X):
        if callable(density.rho0):
            rho = np.array([density.rho0(x) for x in X])
        else:
            rho = np.full(X.shape[0], float(density.rho0))
        vals = f(X) if not isinstance(f, TestFunction) else f(X)
        return vals * rho ** tau

    def gl(order):
        nodes, weights = np.polynomial.legendre.leggauss(order)
        axes, wts = [], []
        for k in range(dim):
            a, bnd = low[k], high[k]
            axes.append(0.5 * (bnd - a) * nodes + 0.5 * (bnd + a))
            wts.append(0.5 * (bnd - a) * weights)
        mesh = np.meshgrid(*axes, indexing="ij")
        X = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        W = np.ones(X.shape[0])
        for wm in np.meshgrid(*wts, indexing="ij"):
            W = W * wm.reshape(-1)
        return float(np.dot(W, integrand(X)))

    coarse, fine = gl(order), gl(order + 16)
    if abs(fine - coarse) > 1e-6 * max(abs(fine), 1.0) + 1e-12:
        fine = gl(order + 48)
    return fine


def _one_point_log_decay(d: int, alpha: float, delta: float):
    """Exact decay of the one-point correlation for alpha <= 1:
    m(h') = exp(-c * h'^p), where c * h'^p is the intensity mass of the
    downward cone of (0, h') and p = (d-1)/alpha + delta + 1."""
    k = d - 1
    kappa = math.pi ** (k / 2) / math.gamma(k / 2 + 1)
    p = k / alpha + delta + 1
    c = kappa * special.beta(delta + 1, k / alpha + 1)
    return float(c), float(p)


@dataclass
class IntegralEstimate:
    value: float
    se: float
    x_part: float
    scale_part: float
    tail_bound: float
    params: dict


def estimate_I(f, density: DensitySpec, alpha: float,
               nodes: int = 12, h_max: float | None = None,
               R_per_node: int = 400, seed: int = 0,
               order: int = 32, tail_budget: float = 0.01) -> IntegralEstimate:
    """Limit integral I(f): spatial quadrature of f * rho0^tau times the
    height integral of the one-point correlation against h'^delta.

    The height factor is Gauss-Legendre over [0, h_max] with the
    correlation estimated by Monte Carlo at each node; the truncated
    tail is bounded by the exact exponential decay of the correlation
    and reported (BiasWarning if it exceeds the budget relative to the
    estimate).
    """
    d, delta = density.d, density.delta
    exps = compute_exponents(d, alpha, delta)
    x_part = _spatial_part(f, density, exps.tau, order)
    if x_part == 0.0:
        return IntegralEstimate(0.0, 0.0, 0.0, 0.0, 0.0,
                                {"nodes": nodes, "h_max": 0.0})
    c_dec, p_dec = _one_point_log_decay(d, alpha, delta)
    if h_max is None:
        # choose the cap so the envelope tail is far below the budget
        h_max = (12.0 / c_dec) ** (1.0 / p_dec)
    nods, wts = np.polynomial.legendre.leggauss(nodes)
    hs = 0.5 * h_max * (nods + 1.0)
    ws = 0.5 * h_max * wts
    vals = np.empty(nodes)
    ses = np.empty(nodes)
    for k, h in enumerate(hs):
        est = estimate_one_point_correlation(d, alpha, delta, float(h),
                                             R=R_per_node, seed=(seed, "I", k))
        vals[k] = est.value
        ses[k] = est.se
    weight = ws * hs ** delta
    scale_part = float(np.dot(weight, vals))
    se = x_part * math.sqrt(float(np.dot(weight ** 2, ses ** 2)))
    # tail: integral_{h_max}^inf exp(-c h^p) h^delta dh via the upper
    # incomplete gamma function
    s = (delta + 1) / p_dec
    tail = float(special.gammaincc(s, c_dec * h_max ** p_dec) * special.gamma(s)
                 / (p_dec * c_dec ** s))
    value = x_part * scale_part
    if abs(value) > 0 and tail * abs(x_part) > tail_budget * abs(value):
        warnings.warn("height truncation tail exceeds the error budget",
                      BiasWarning)
    return IntegralEstimate(float(value), float(se), float(x_part),
                            float(scale_part), float(tail * abs(x_part)),
                            {"nodes": nodes, "h_max": float(h_max),
                             "R_per_node": R_per_node})


def estimate_J(f, density: DensitySpec, alpha: float,
               nodes: int = 6, h_max: float | None = None,
               R_per_node: int = 200, seed: int = 0,
               order: int = 32) -> IntegralEstimate:
    """Limit integral J(f): spatial quadrature of f * rho0^tau times the
    triple integral of the two-point correlation of the limit process.

    Rotational invariance reduces the spatial separation to its radius
    s = |y'|, contributing the surface measure of the (d-2)-sphere; for
    alpha <= 1 the correlation vanishes exactly once the two downward
    cones are disjoint (s > h'^{1/alpha} + h_y'^{1/alpha}), which sets
    the separation cutoff.
    """
    d, delta = density.d, density.delta
    exps = compute_exponents(d, alpha, delta)
    x_part = _spatial_part(f, density, exps.tau, order)
    if x_part == 0.0:
        return IntegralEstimate(0.0, 0.0, 0.0, 0.0, 0.0,
                                {"nodes": nodes, "h_max": 0.0})
    c_dec, p_dec = _one_point_log_decay(d, alpha, delta)
    if h_max is None:
        h_max = (9.0 / c_dec) ** (1.0 / p_dec)
    s_max = 2.0 * h_max ** (1.0 / alpha)
    nods, wts = np.polynomial.legendre.leggauss(nodes)

    def stretch(a, b):
        return 0.5 * (b - a) * nods + 0.5 * (b + a), 0.5 * (b - a) * wts

    hs, wh = stretch(0.0, h_max)
    ss, wsep = stretch(0.0, s_max)
    omega = sphere_surface(d - 2)  # surface measure of S^{d-2}
    total = 0.0
    var_acc = 0.0
    for i, h1 in enumerate(hs):
        for j, s in enumerate(ss):
            for k, h2 in enumerate(hs):
                if s > h1 ** (1.0 / alpha) + h2 ** (1.0 / alpha):
                    continue  # disjoint cones: exactly zero
                y2 = np.zeros(d - 1)
                y2[0] = s
                est = estimate_two_point_correlation(
                    d, alpha, delta, float(h1), y2, float(h2),
                    R=R_per_node, seed=(seed, "J", i, j, k))
                w = (wh[i] * wsep[j] * wh[k] * omega
                     * s ** (d - 2) * h1 ** delta * h2 ** delta)
                total += w * est.value
                var_acc += (w * est.se) ** 2
    value = x_part * total
    se = abs(x_part) * math.sqrt(var_acc)
    return IntegralEstimate(float(value), float(se), float(x_part), float(total),
                            0.0, {"nodes": nodes, "h_max": float(h_max),
                                  "s_max": float(s_max),
                                  "R_per_node": R_per_node})


@dataclass
class CorrelationPrediction:
    value: float
    se: float
    numerator: float
    exact_zero: bool


def kernel_correlation_prediction(f: TestFunction, g: TestFunction,
                                  density: DensitySpec, alpha: float,
                                  seed: int = 0, **kw) -> CorrelationPrediction:
    """Predicted limiting correlation of <f, mu> and <g, mu> from the
    covariance kernel (f, g) -> I(fg) + J(fg).

    Both I and J factor through the spatial integral of the product
    against rho0^tau, so test functions with disjoint supports give an
    exactly zero prediction with no Monte Carlo error at all.
    """
    exps = compute_exponents(density.d, alpha, density.delta)
    fg = _product(f, g)
    num_x = _spatial_part(fg, density, exps.tau)
    if num_x == 0.0:
        return CorrelationPrediction(0.0, 0.0, 0.0, True)
    I_fg = estimate_I(fg, density, alpha, seed=(seed, "num_I"), **kw)
    J_fg = estimate_J(fg, density, alpha, seed=(seed, "num_J"), **kw)
    num = I_fg.value + J_fg.value
    num_se = math.hypot(I_fg.se, J_fg.se)
    dens = []
    for tag, fn in (("f", f), ("g", g)):
        ff = _product(fn, fn)
        I2 = estimate_I(ff, density, alpha, seed=(seed, tag + "_I"), **kw)
        J2 = estimate_J(ff, density, alpha, seed=(seed, tag + "_J"), **kw)
        dens.append((I2.value + J2.value, math.hypot(I2.se, J2.se)))
    (vf, sf), (vg, sg) = dens
    if vf <= 0 or vg <= 0:
        raise ArgumentError("nonpositive variance kernel; cannot standardize")
    value = num / math.sqrt(vf * vg)
    rel = math.sqrt((num_se / abs(num)) ** 2 + (sf / (2 * vf)) ** 2
                    + (sg / (2 * vg)) ** 2) if num else 0.0
    return CorrelationPrediction(float(value), abs(value) * rel, float(num), False)


# ---------------------------------------------------------------------------
# binomial versus Poisson


@dataclass
class DepoissonReport:
    n_grid: list
    replicates: int
    binom_mean: list
    pois_mean: list
    binom_var: list
    pois_var: list
    mean_ratio: list
    var_ratio: list
    mean_ratio_se: list
    root_seed: int

    def to_dict(self):
        return dataclasses.asdict(self)


def depoissonization_check(density: DensitySpec, alpha: float, n_grid, R: int,
                           f: TestFunction | None = None, seed: int = 0,
                           workers: int | None = None) -> DepoissonReport:
    """Binomial(n) versus Poisson(lambda = n) pairings at matched size.

    The density must integrate to one so the Poisson configuration has
    expected size n.  The two samplers share the candidate stream per
    replicate (the binomial sample is a prefix-coupled variant of the
    Poisson one), which makes the ratio estimates far tighter than
    independent sampling would.
    """
    if not (0 < alpha <= 1.0 + 1e-12):
        raise ArgumentError("depoissonization check supports alpha in (0, 1]")
    mass = total_mass(density)
    if abs(mass - 1.0) > 1e-9:
        raise ArgumentError(
            f"density must integrate to 1 (total mass {mass:.6g}); adjust "
            "rho0 or time_cap")
    n_grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])) or not n_grid:
        raise ArgumentError("n_grid must be nonempty and strictly increasing")
    if f is None:
        f = TestFunction("constant")
    psi = PsiSpec.power_law(alpha)
    payloads = [(density, n, r, seed, f, psi)
                for n in n_grid for r in range(R)]
    vb = {n: np.empty(R) for n in n_grid}
    vp = {n: np.empty(R) for n in n_grid}
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1:
        results = map(_depois_worker, payloads)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_depois_worker, payloads,
                           chunksize=max(1, len(payloads) // (8 * workers)))
    for n, r, pb, pp in results:
        vb[n][r] = pb
        vp[n][r] = pp
    if workers > 1:
        pool.shutdown()

    bm, pm, bv, pv, mr, vr, mse = [], [], [], [], [], [], []
    for n in n_grid:
        b, p = vb[n], vp[n]
        bm.append(float(b.mean()))
        pm.append(float(p.mean()))
        bv.append(float(b.var(ddof=1)))
        pv.append(float(p.var(ddof=1)))
        mr.append(bm[-1] / pm[-1])
        vr.append(bv[-1] / pv[-1])
        # delta-method SE of the ratio of coupled means
        C = np.cov(np.stack([b, p]))
        g = np.array([1.0 / pm[-1], -bm[-1] / pm[-1] ** 2])
        mse.append(float(math.sqrt(max(g @ C @ g, 0.0) / R)))
    return DepoissonReport(n_grid=n_grid, replicates=int(R), binom_mean=bm,
                           pois_mean=pm, binom_var=bv, pois_var=pv,
                           mean_ratio=mr, var_ratio=vr, mean_ratio_se=mse,
                           root_seed=_seed_record(seed))


def _depois_worker(p):
    density, n, r, root_seed, f, psi = p
    s = (root_seed, "depois", n, r)
    binom = sample_binomial_box(density, n, s)
    pois = sample_poisson_box(density, float(n), s)
    return (n, r,
            empirical_pairing(binom, xi_downward_cone(binom, psi).flags, f),
            empirical_pairing(pois, xi_downward_cone(pois, psi).flags, f))
