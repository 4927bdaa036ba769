"""Core geometric primitives for growth processes with overlap.

A configuration lives in ``(d-1)``-dimensional space with an extra
nonnegative time (height) coordinate.  A *growth profile* ``psi`` maps
spatial distance to the time a grain needs to reach that distance;
``psi`` vanishes at zero and is nondecreasing on its domain.  The upward
cone of a space-time point is the epigraph of the profile shifted to that
point; the downward cone is its mirror image in time.

The scaling algebra used throughout the library: for dimension ``d``,
profile exponent ``alpha`` at zero, and time-intensity exponent
``delta``,

    gamma = alpha / ((d - 1) + alpha * (1 + delta))
    beta  = gamma / alpha
    tau   = 1 - gamma * (1 + delta) = beta * (d - 1)

Rescaling a configuration by intensity ``lam`` maps ``(y, h)`` to
``(lam**beta * (y - x), lam**gamma * h)`` around a spatial center ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ArgumentError, DomainError

__all__ = [
    "PsiSpec",
    "ScalingExponents",
    "SpaceTimePoint",
    "BoxRegion",
    "BallRegion",
    "CylinderRegion",
    "PointConfiguration",
    "psi_eval",
    "psi_inverse",
    "compute_exponents",
    "upward_cone_contains",
    "downward_cone_contains",
    "rescale",
]


@dataclass(frozen=True)
class PsiSpec:
    """Radial growth profile.

    Three variants are supported:

    * ``power``: psi(l) = l**alpha on [0, inf), alpha > 0;
    * ``cap``: psi(l) = 1 - cos(l) on [0, pi], the profile induced by
      support heights of points in the unit ball (geodesic argument);
    * ``tabulated``: piecewise-linear interpolation through given knots,
      with a declared small-distance exponent.

    ``alpha_at_zero`` is the exponent of the leading power law at zero
    distance; the scaling algebra only depends on the profile through it.
    """

    kind: str
    alpha_at_zero: float
    knots_l: tuple[float, ...] = ()
    knots_v: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("power", "cap", "tabulated"):
            raise ArgumentError(f"unknown profile kind {self.kind!r}")
        if not (self.alpha_at_zero > 0):
            raise ArgumentError("alpha_at_zero must be positive")
        if self.kind == "tabulated":
            l = np.asarray(self.knots_l, dtype=float)
            v = np.asarray(self.knots_v, dtype=float)
            if l.size < 2 or l.size != v.size:
                raise ArgumentError("tabulated profile needs matching knot arrays of length >= 2")
            if l[0] != 0.0 or v[0] != 0.0:
                raise ArgumentError("tabulated profile must start at (0, 0)")
            if np.any(np.diff(l) <= 0):
                raise ArgumentError("tabulated knot distances must be strictly increasing")
            if np.any(np.diff(v) < 0):
                raise ArgumentError("tabulated knot values must be nondecreasing")

    @staticmethod
    def power_law(alpha: float) -> "PsiSpec":
        if not (alpha > 0):
            raise ArgumentError("alpha must be positive")
        return PsiSpec(kind="power", alpha_at_zero=float(alpha))

    @staticmethod
    def spherical_cap() -> "PsiSpec":
        # 1 - cos(l) ~ l**2 / 2 near zero.
        return PsiSpec(kind="cap", alpha_at_zero=2.0)

    @staticmethod
    def tabulated(knots_l: Sequence[float], knots_v: Sequence[float],
                  alpha_at_zero: float) -> "PsiSpec":
        return PsiSpec(kind="tabulated", alpha_at_zero=float(alpha_at_zero),
                       knots_l=tuple(float(x) for x in knots_l),
                       knots_v=tuple(float(x) for x in knots_v))

    @property
    def alpha(self) -> float:
        return self.alpha_at_zero

    @property
    def domain_max(self) -> float:
        if self.kind == "power":
            return math.inf
        if self.kind == "cap":
            return math.pi
        return self.knots_l[-1]

    @property
    def range_max(self) -> float:
        if self.kind == "power":
            return math.inf
        if self.kind == "cap":
            return 2.0
        return self.knots_v[-1]


def psi_eval(psi: PsiSpec, l):
    """Evaluate the profile at spatial distance(s) ``l``.

    Raises DomainError if any distance is negative or beyond the profile's
    domain (pi for the cap profile, the last knot for tabulated ones).
    """
    arr = np.asarray(l, dtype=float)
    if np.any(arr < 0):
        raise DomainError("distances must be nonnegative")
    if np.any(arr > psi.domain_max):
        raise DomainError(f"distance exceeds profile domain [0, {psi.domain_max}]")
    if psi.kind == "power":
        out = arr ** psi.alpha_at_zero
    elif psi.kind == "cap":
        out = 1.0 - np.cos(arr)
    else:
        out = np.interp(arr, psi.knots_l, psi.knots_v)
    return out if isinstance(l, np.ndarray) else float(out)


def psi_eval_guarded(psi: PsiSpec, l):
    """Like psi_eval but maps distances beyond the domain to +inf.

    Internal helper for coverage computations: a competitor farther away
    than the profile's reach can never cover anything.
    """
    arr = np.asarray(l, dtype=float)
    if psi.kind == "power":
        return arr ** psi.alpha_at_zero
    out = np.full(arr.shape, np.inf)
    ok = arr <= psi.domain_max
    if psi.kind == "cap":
        out[ok] = 1.0 - np.cos(arr[ok])
    else:
        out[ok] = np.interp(arr[ok], psi.knots_l, psi.knots_v)
    return out


def psi_inverse(psi: PsiSpec, u):
    """Smallest distance l with psi(l) = u.

    For flat stretches of a tabulated profile the left endpoint is
    returned.  Raises DomainError for u outside the profile's range.
    """
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0):
        raise DomainError("profile values are nonnegative")
    if np.any(arr > psi.range_max):
        raise DomainError(f"value exceeds profile range [0, {psi.range_max}]")
    if psi.kind == "power":
        out = arr ** (1.0 / psi.alpha_at_zero)
    elif psi.kind == "cap":
        out = np.arccos(np.clip(1.0 - arr, -1.0, 1.0))
    else:
        v = np.asarray(psi.knots_v)
        l = np.asarray(psi.knots_l)
        idx = np.searchsorted(v, arr, side="left")
        out = np.empty(arr.shape, dtype=float)
        flat = arr.reshape(-1)
        res = out.reshape(-1)
        for k, val in enumerate(flat):
            i = int(np.searchsorted(v, val, side="left"))
            if i == 0 or v[i] == val:
                res[k] = l[i]
            else:
                t = (val - v[i - 1]) / (v[i] - v[i - 1])
                res[k] = l[i - 1] + t * (l[i] - l[i - 1])
    return out if isinstance(u, np.ndarray) else float(out)


@dataclass(frozen=True)
class ScalingExponents:
    d: int
    alpha: float
    delta: float
    tau: float
    beta: float
    gamma: float


def compute_exponents(d: int, alpha: float, delta: float) -> ScalingExponents:
    """Scaling exponents (tau, beta, gamma) for given (d, alpha, delta)."""
    if int(d) != d or d < 2:
        raise ArgumentError("d must be an integer >= 2")
    if not (alpha > 0):
        raise ArgumentError("alpha must be positive")
    if delta < 0:
        raise ArgumentError("delta must be nonnegative")
    denom = (d - 1) + alpha * (1.0 + delta)
    gamma = alpha / denom
    beta = 1.0 / denom
    tau = (d - 1) / denom
    return ScalingExponents(d=int(d), alpha=float(alpha), delta=float(delta),
                            tau=tau, beta=beta, gamma=gamma)


@dataclass(frozen=True, eq=False)
class SpaceTimePoint:
    """A single point: spatial position plus nonnegative time coordinate."""

    spatial: tuple[float, ...]
    time: float

    def __post_init__(self):
        object.__setattr__(self, "spatial", tuple(float(x) for x in np.atleast_1d(self.spatial)))
        if not (self.time >= 0):
            raise ArgumentError("time coordinate must be nonnegative")

    @property
    def spatial_array(self) -> np.ndarray:
        return np.asarray(self.spatial, dtype=float)


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned spatial box, optionally with the time cap used to fill it."""

    low: tuple[float, ...]
    high: tuple[float, ...]
    time_cap: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "low", tuple(float(x) for x in np.atleast_1d(self.low)))
        object.__setattr__(self, "high", tuple(float(x) for x in np.atleast_1d(self.high)))
        if len(self.low) != len(self.high):
            raise ArgumentError("box bounds must have matching lengths")
        if any(h <= l for l, h in zip(self.low, self.high)):
            raise ArgumentError("box must have positive extent in every axis")

    @property
    def spatial_dim(self) -> int:
        return len(self.low)

    def volume(self) -> float:
        return float(np.prod(np.asarray(self.high) - np.asarray(self.low)))


@dataclass(frozen=True)
class BallRegion:
    """The unit ball in R^d, optionally hollowed below an inner radius."""

    d: int
    inner_radius: float = 0.0

    def __post_init__(self):
        if self.d < 2:
            raise ArgumentError("ball dimension must be >= 2")
        if not (0.0 <= self.inner_radius < 1.0):
            raise ArgumentError("inner radius must lie in [0, 1)")


@dataclass(frozen=True)
class CylinderRegion:
    """Spatial ball times a time interval [0, time_cap]."""

    center: tuple[float, ...]
    radius: float
    time_cap: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(x) for x in np.atleast_1d(self.center)))
        if not (self.radius > 0 and self.time_cap > 0):
            raise ArgumentError("cylinder radius and time cap must be positive")


@dataclass(eq=False)
class PointConfiguration:
    """A finite configuration of points.

    Two storage layouts share this type:

    * ``kind="spacetime"``: rows are (x_1, ..., x_{d-1}, h) with h >= 0;
    * ``kind="ball"``: rows are d Cartesian coordinates of points in the
      unit ball (no time column).
    """

    d: int
    points: np.ndarray
    region: object | None = None
    kind: str = "spacetime"

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.size == 0:
            self.points = self.points.reshape(0, self.expected_columns)
        if self.points.shape[1] != self.expected_columns:
            raise ArgumentError(
                f"{self.kind} configuration in d={self.d} needs "
                f"{self.expected_columns} columns, got {self.points.shape[1]}")
        if self.kind == "spacetime" and self.n and np.any(self.times < 0):
            raise ArgumentError("time coordinates must be nonnegative")

    @property
    def expected_columns(self) -> int:
        return self.d if self.kind in ("spacetime", "ball") else 0

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def spatial(self) -> np.ndarray:
        if self.kind != "spacetime":
            raise ArgumentError("spatial slice is only defined for spacetime configurations")
        return self.points[:, : self.d - 1]

    @property
    def times(self) -> np.ndarray:
        if self.kind != "spacetime":
            raise ArgumentError("time slice is only defined for spacetime configurations")
        return self.points[:, self.d - 1]

    def point(self, i: int) -> SpaceTimePoint:
        return SpaceTimePoint(tuple(self.spatial[i]), float(self.times[i]))

    def validate(self) -> None:
        """Check structural invariants (no duplicate rows, finite entries)."""
        if not np.all(np.isfinite(self.points)):
            raise ArgumentError("configuration contains non-finite coordinates")
        if self.n > 1:
            order = np.lexsort(self.points.T)
            sorted_pts = self.points[order]
            if np.any(np.all(sorted_pts[1:] == sorted_pts[:-1], axis=1)):
                raise ArgumentError("configuration contains bitwise-identical points")


def _as_point(p) -> SpaceTimePoint:
    if isinstance(p, SpaceTimePoint):
        return p
    spatial, time = p
    return SpaceTimePoint(tuple(np.atleast_1d(spatial)), float(time))


def upward_cone_contains(apex, query, psi: PsiSpec) -> bool:
    """True iff ``query`` lies in the (closed) upward cone anchored at ``apex``."""
    a, q = _as_point(apex), _as_point(query)
    if len(a.spatial) != len(q.spatial):
        raise ArgumentError("points live in different spatial dimensions")
    dist = float(np.linalg.norm(q.spatial_array - a.spatial_array))
    # written as a difference so that the downward predicate evaluates the
    # bit-identical expression and the two cones stay exact duals
    return q.time - a.time >= psi_eval(psi, dist)


def downward_cone_contains(apex, query, psi: PsiSpec) -> bool:
    """True iff ``query`` lies in the (closed) downward cone anchored at ``apex``."""
    a, q = _as_point(apex), _as_point(query)
    if len(a.spatial) != len(q.spatial):
        raise ArgumentError("points live in different spatial dimensions")
    dist = float(np.linalg.norm(q.spatial_array - a.spatial_array))
    return a.time - q.time >= psi_eval(psi, dist)


def rescale(config: PointConfiguration, center, lam: float,
            exps: ScalingExponents) -> PointConfiguration:
    """Rescale a spacetime configuration around ``center`` by intensity ``lam``.

    Spatial offsets are stretched by lam**beta and times by lam**gamma; the
    attached region descriptor is transformed the same way.
    """
    if config.kind != "spacetime":
        raise ArgumentError("only spacetime configurations can be rescaled")
    if not (lam > 0):
        raise ArgumentError("lam must be positive")
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if center.size != config.d - 1:
        raise ArgumentError("center has wrong spatial dimension")
    sfac = lam ** exps.beta
    tfac = lam ** exps.gamma
    pts = np.empty_like(config.points)
    pts[:, : config.d - 1] = (config.spatial - center) * sfac
    pts[:, config.d - 1] = config.times * tfac
    region = config.region
    if isinstance(region, BoxRegion):
        region = BoxRegion(
            low=tuple((np.asarray(region.low) - center) * sfac),
            high=tuple((np.asarray(region.high) - center) * sfac),
            time_cap=None if region.time_cap is None else region.time_cap * tfac)
    elif isinstance(region, CylinderRegion):
        region = CylinderRegion(
            center=tuple((np.asarray(region.center) - center) * sfac),
            radius=region.radius * sfac,
            time_cap=region.time_cap * tfac)
    return PointConfiguration(d=config.d, points=pts, region=region)
