"""Samplers for the point processes driving the growth models.

All samplers are deterministic functions of a 64-bit seed.  Derived
streams are built from a root seed plus structured tags (replicate
index, purpose string) so that replicate-level parallelism cannot change
results.

The Poisson and binomial box samplers share one candidate stream per
seed: with equal seeds the binomial sample of size n and the Poisson
sample of size N agree in their first min(n, N) points.  Comparisons
between the two models exploit this coupling for variance reduction.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import betainc, betaincinv

from .errors import ArgumentError
from .geometry import (BallRegion, BoxRegion, CylinderRegion,
                       PointConfiguration)

__all__ = [
    "DensitySpec",
    "derive_seed_sequence",
    "derive_rng",
    "ball_volume",
    "sphere_surface",
    "total_mass",
    "sample_poisson_box",
    "sample_binomial_box",
    "sample_poisson_ball",
    "sample_limit_process",
    "write_points_csv",
    "read_points_csv",
]

_BATCH = 1024  # fixed candidate batch size; keeps streams prefix-stable


def derive_seed_sequence(root_seed, *tags) -> np.random.SeedSequence:
    """Build a SeedSequence from a root seed and structured tags.

    The root may itself be a (seed, tag, ...) tuple, which is flattened.
    Integer tags enter directly; anything else is hashed (sha256, stable
    across runs and platforms).
    """
    if isinstance(root_seed, tuple):
        parts = (*root_seed, *tags)
    else:
        parts = (root_seed, *tags)
    entropy = []
    for t in parts:
        if isinstance(t, (int, np.integer)):
            entropy.append(int(t) & 0xFFFFFFFFFFFFFFFF)
        else:
            digest = hashlib.sha256(repr(t).encode()).digest()
            entropy.append(int.from_bytes(digest[:8], "little"))
    return np.random.SeedSequence(entropy)


def derive_rng(root_seed: int, *tags) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(root_seed, *tags))


def ball_volume(k: int, r: float = 1.0) -> float:
    """Volume of the k-dimensional ball of radius r (k = 0 gives 1)."""
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0) * r ** k


def sphere_surface(k: int) -> float:
    """Surface measure of the unit sphere S^k in R^(k+1)."""
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


@dataclass(frozen=True)
class DensitySpec:
    """Intensity specification rho(x, h) = rho0(x) * h**delta.

    ``rho0`` is a constant or a callable on (n, d-1) arrays of spatial
    positions; callables must declare envelope bounds.  ``time_cap``
    bounds the time coordinate for box regions (None means callers pick
    a cap from the scaling algebra).  ``perturbation`` is an optional
    multiplicative hook rho -> rho * (1 + perturbation(x, h)) for
    robustness studies; it must be > -1 and declare an upper bound.
    """

    d: int
    delta: float
    region: BoxRegion | BallRegion
    rho0: float | Callable = 1.0
    rho0_low: float | None = None
    rho0_high: float | None = None
    time_cap: float | None = None
    perturbation: Callable | None = None
    perturbation_high: float = 0.0

    def __post_init__(self):
        if self.d < 2:
            raise ArgumentError("d must be >= 2")
        if self.delta < 0:
            raise ArgumentError("delta must be nonnegative")
        if callable(self.rho0):
            if self.rho0_high is None or self.rho0_low is None:
                raise ArgumentError("callable rho0 requires declared rho0_low/rho0_high bounds")
            if not (0 <= self.rho0_low <= self.rho0_high):
                raise ArgumentError("rho0 bounds must satisfy 0 <= low <= high")
        else:
            if self.rho0 < 0:
                raise ArgumentError("constant rho0 must be nonnegative")
            if self.rho0_low is None:
                object.__setattr__(self, "rho0_low", float(self.rho0))
            if self.rho0_high is None:
                object.__setattr__(self, "rho0_high", float(self.rho0))
        if isinstance(self.region, BoxRegion):
            if self.region.spatial_dim != self.d - 1:
                raise ArgumentError("box region dimension must equal d - 1")
        elif isinstance(self.region, BallRegion):
            if self.region.d != self.d:
                raise ArgumentError("ball region dimension must equal d")
        else:
            raise ArgumentError("region must be a BoxRegion or BallRegion")
        if self.perturbation is not None and self.perturbation_high < 0:
            raise ArgumentError("perturbation_high must be >= 0")

    def rho0_at(self, x: np.ndarray) -> np.ndarray:
        if callable(self.rho0):
            vals = np.asarray(self.rho0(x), dtype=float)
            if np.any(vals > self.rho0_high * (1 + 1e-9)) or np.any(vals < 0):
                raise ArgumentError("rho0 exceeded its declared bounds")
            return vals
        return np.full(x.shape[0], float(self.rho0))

    def with_time_cap(self, cap: float) -> "DensitySpec":
        return replace(self, time_cap=float(cap))


def _gauss_legendre_box(low, high, order):
    """Tensor Gauss-Legendre nodes and weights on a box."""
    low = np.atleast_1d(np.asarray(low, dtype=float))
    high = np.atleast_1d(np.asarray(high, dtype=float))
    xs, ws = [], []
    for lo, hi in zip(low, high):
        x, w = np.polynomial.legendre.leggauss(order)
        xs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w)
    grids = np.meshgrid(*xs, indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in grids], axis=-1)
    weight = np.ones(nodes.shape[0])
    wgrids = np.meshgrid(*ws, indexing="ij")
    for wg in wgrids:
        weight = weight * wg.reshape(-1)
    return nodes, weight


def spatial_mass(spec: DensitySpec, order: int = 32) -> float:
    """Integral of rho0 over the spatial region (box regions)."""
    region = spec.region
    if not isinstance(region, BoxRegion):
        raise ArgumentError("spatial_mass applies to box regions")
    if not callable(spec.rho0):
        return float(spec.rho0) * region.volume()
    nodes, weight = _gauss_legendre_box(region.low, region.high, order)
    return float(np.sum(weight * spec.rho0_at(nodes)))


def total_mass(spec: DensitySpec, order: int = 32) -> float:
    """Integral of the full intensity over region x [0, time_cap]."""
    region = spec.region
    if isinstance(region, BoxRegion):
        if spec.time_cap is None:
            raise ArgumentError("box sampling requires a time_cap")
        cap = spec.time_cap
        tmass = cap ** (1.0 + spec.delta) / (1.0 + spec.delta)
        if spec.perturbation is None:
            return spatial_mass(spec, order) * tmass
        # joint quadrature over (x, h) for the perturbed intensity
        nodes, weight = _gauss_legendre_box(
            list(region.low) + [0.0], list(region.high) + [cap], order)
        x, h = nodes[:, :-1], nodes[:, -1]
        dens = spec.rho0_at(x) * h ** spec.delta * (1.0 + spec.perturbation(x, h))
        return float(np.sum(weight * dens))
    if isinstance(region, BallRegion):
        radial = float(betainc(region.d, spec.delta + 1.0, 1.0)
                       - betainc(region.d, spec.delta + 1.0, region.inner_radius))
        radial *= math.gamma(region.d) * math.gamma(spec.delta + 1.0) / math.gamma(region.d + spec.delta + 1.0)
        if callable(spec.rho0):
            surf = _sphere_integral(spec, order)
        else:
            surf = float(spec.rho0) * sphere_surface(region.d - 1)
        return surf * radial
    raise ArgumentError("unsupported region")


def _sphere_integral(spec: DensitySpec, order: int = 64) -> float:
    """Integral of rho0 over the unit sphere (d = 2 or 3 only)."""
    d = spec.d
    if d == 2:
        theta, w = np.polynomial.legendre.leggauss(order)
        theta = math.pi * (theta + 1.0)
        w = w * math.pi
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return float(np.sum(w * spec.rho0_at(dirs)))
    if d == 3:
        ct, wt = np.polynomial.legendre.leggauss(order)
        phi = np.linspace(0.0, 2.0 * math.pi, 2 * order, endpoint=False)
        wphi = 2.0 * math.pi / (2 * order)
        st = np.sqrt(1.0 - ct ** 2)
        dirs = np.stack([
            np.outer(st, np.cos(phi)).reshape(-1),
            np.outer(st, np.sin(phi)).reshape(-1),
            np.repeat(ct, phi.size),
        ], axis=-1)
        w = np.repeat(wt, phi.size) * wphi
        return float(np.sum(w * spec.rho0_at(dirs)))
    raise ArgumentError("callable rho0 on the sphere is supported for d in {2, 3}")


def _stream_box_points(rng: np.random.Generator, spec: DensitySpec, count: int) -> np.ndarray:
    """First ``count`` accepted points of the candidate stream.

    Candidates are drawn in fixed-size batches so the accepted sequence
    is a pure function of the stream, independent of ``count``.
    """
    region = spec.region
    low = np.asarray(region.low)
    high = np.asarray(region.high)
    cap = spec.time_cap
    k = spec.d - 1
    out = np.empty((count, spec.d))
    got = 0
    while got < count:
        x = rng.uniform(low, high, size=(_BATCH, k))
        h = cap * rng.uniform(size=_BATCH) ** (1.0 / (1.0 + spec.delta))
        u = rng.uniform(size=_BATCH)
        accept = np.ones(_BATCH, dtype=bool)
        if callable(spec.rho0):
            accept &= u * spec.rho0_high <= spec.rho0_at(x)
        if spec.perturbation is not None:
            u2 = rng.uniform(size=_BATCH)
            pert = np.asarray(spec.perturbation(x, h), dtype=float)
            if np.any(pert > spec.perturbation_high * (1 + 1e-9)) or np.any(pert <= -1):
                raise ArgumentError("perturbation exceeded its declared bounds")
            accept &= u2 * (1.0 + spec.perturbation_high) <= 1.0 + pert
        xa, ha = x[accept], h[accept]
        take = min(count - got, xa.shape[0])
        out[got:got + take, :k] = xa[:take]
        out[got:got + take, k] = ha[:take]
        got += take
    return out


def sample_poisson_box(spec: DensitySpec, lam: float, seed: int) -> PointConfiguration:
    """Poisson sample on a box region with intensity lam * rho0(x) * h**delta.

    The count is Poisson(lam * total mass); given the count, points are
    drawn iid from the normalized intensity.
    """
    if not (lam > 0):
        raise ArgumentError("lam must be positive")
    if not isinstance(spec.region, BoxRegion):
        raise ArgumentError("sample_poisson_box requires a box region")
    mass = total_mass(spec)
    n = int(derive_rng(seed, "count").poisson(lam * mass))
    pts = _stream_box_points(derive_rng(seed, "points"), spec, n)
    region = BoxRegion(spec.region.low, spec.region.high, time_cap=spec.time_cap)
    return PointConfiguration(d=spec.d, points=pts, region=region)


def sample_binomial_box(spec: DensitySpec, n: int, seed: int) -> PointConfiguration:
    """Exactly ``n`` iid points from the normalized box intensity."""
    if n < 0 or int(n) != n:
        raise ArgumentError("n must be a nonnegative integer")
    if not isinstance(spec.region, BoxRegion):
        raise ArgumentError("sample_binomial_box requires a box region")
    if spec.time_cap is None:
        raise ArgumentError("box sampling requires a time_cap")
    pts = _stream_box_points(derive_rng(seed, "points"), spec, int(n))
    region = BoxRegion(spec.region.low, spec.region.high, time_cap=spec.time_cap)
    return PointConfiguration(d=spec.d, points=pts, region=region)


def sample_poisson_ball(d: int, delta: float, rho0, lam: float, seed: int,
                        inner_radius: float = 0.0,
                        rho0_high: float | None = None) -> PointConfiguration:
    """Poisson sample in the unit ball with intensity lam*rho0(x/|x|)*(1-|x|)**delta.

    Returns a ``kind="ball"`` configuration whose rows are Cartesian
    coordinates.  ``rho0`` is a constant or a callable on unit directions
    (callables need ``rho0_high``).
    """
    spec = DensitySpec(d=d, delta=delta, region=BallRegion(d, inner_radius),
                       rho0=rho0, rho0_high=rho0_high,
                       rho0_low=0.0 if callable(rho0) else None)
    mass = total_mass(spec)
    n = int(derive_rng(seed, "count").poisson(lam * mass))
    rng = derive_rng(seed, "points")
    k = d
    out = np.empty((n, d))
    got = 0
    lo_q = float(betainc(d, delta + 1.0, inner_radius))
    while got < n:
        g = rng.standard_normal(size=(_BATCH, k))
        dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
        u = rng.uniform(size=_BATCH)
        r = betaincinv(d, delta + 1.0, lo_q + (1.0 - lo_q) * u)
        accept = np.ones(_BATCH, dtype=bool)
        if callable(spec.rho0):
            v = rng.uniform(size=_BATCH)
            accept &= v * spec.rho0_high <= spec.rho0_at(dirs)
        pts = dirs[accept] * r[accept, None]
        take = min(n - got, pts.shape[0])
        out[got:got + take] = pts[:take]
        got += take
    return PointConfiguration(d=d, points=out, region=BallRegion(d, inner_radius), kind="ball")


def sample_limit_process(d: int, delta: float, window_radius: float,
                         time_cap: float, seed: int) -> PointConfiguration:
    """Poisson sample with intensity h**delta on B_{d-1}(0, r) x [0, cap].

    This is the local limit of a rescaled inhomogeneous sample around an
    interior point with unit spatial density.
    """
    if not (window_radius > 0 and time_cap > 0):
        raise ArgumentError("window_radius and time_cap must be positive")
    k = d - 1
    mass = ball_volume(k, window_radius) * time_cap ** (1.0 + delta) / (1.0 + delta)
    n = int(derive_rng(seed, "count").poisson(mass))
    rng = derive_rng(seed, "points")
    if k == 1:
        x = rng.uniform(-window_radius, window_radius, size=(n, 1))
    else:
        g = rng.standard_normal(size=(n, k))
        dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
        r = window_radius * rng.uniform(size=n) ** (1.0 / k)
        x = dirs * r[:, None]
    h = time_cap * rng.uniform(size=n) ** (1.0 / (1.0 + delta))
    pts = np.concatenate([x, h[:, None]], axis=1)
    region = CylinderRegion(center=(0.0,) * k, radius=window_radius, time_cap=time_cap)
    return PointConfiguration(d=d, points=pts, region=region)


def write_points_csv(config: PointConfiguration, path_or_buf) -> None:
    """Write a configuration as CSV: one header line ``d,count`` then one
    row of coordinates per point, 17 significant digits."""
    buf = io.StringIO()
    buf.write(f"{config.d},{config.n}\n")
    for row in config.points:
        buf.write(",".join(format(v, ".17g") for v in row) + "\n")
    text = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w") as fh:
            fh.write(text)


def read_points_csv(path_or_buf, kind: str = "spacetime") -> PointConfiguration:
    """Read a configuration written by write_points_csv."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        with open(path_or_buf) as fh:
            text = fh.read()
    lines = [ln for ln in text.strip().splitlines() if ln]
    d_str, count_str = lines[0].split(",")
    d, count = int(d_str), int(count_str)
    if len(lines) - 1 != count:
        raise ArgumentError(f"expected {count} point rows, found {len(lines) - 1}")
    if count == 0:
        pts = np.empty((0, d))
    else:
        pts = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return PointConfiguration(d=d, points=pts, kind=kind)
