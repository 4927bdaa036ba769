"""Extremality functionals for growth processes.

A point of a configuration is *extremal* when its upward cone (the
epigraph of the growth profile shifted to the point) is not covered by
the union of the other points' cones.  Equivalently, the graph

    f_i(u) = h_i + psi(|u - x_i|)

must dip strictly below the lower envelope of the other graphs
somewhere.

Two computational routes are provided.

* Downward-cone test: point i is flagged iff no other point lies in its
  downward cone.  For power-law profiles with alpha <= 1 this is
  equivalent to extremality (one cone containing another's apex contains
  the whole cone); for alpha > 1 the equivalence fails, so the method
  refuses such profiles.

* Envelope witness search: a grid scan over candidate witness locations
  u followed by local pattern-search refinement.  A positive margin
  min_{j != i} f_j(u) - f_i(u) > tol at any evaluated u certifies the
  flag (the evaluation is exact); coverage is reported when the best
  margin stays below -tol at the deepest refinement.  Points whose best
  margin lands in [-tol, tol] are reported as unresolved, flagged by the
  sign at the best point.

Useful fact used throughout: the apex (x_i, h_i) itself is covered by
another point's cone iff that point lies in i's downward cone.  Hence an
empty downward cone certifies extremality for every profile, and the
witness grid always includes the apex.

The no-overlap variant (birth-growth acceptance) is also here: points
arrive in time order and a seed landing inside an already accepted
grain's region is discarded.  Because the union of grown regions equals
the union of unconstrained balls of radius psi^{-1}(t - s), acceptance
reduces to a distance test against previously accepted seeds.  Only
linear profiles are supported; for nonlinear ones the grown union is no
longer a union of balls around accepted seeds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, MethodError
from .geometry import (PointConfiguration, PsiSpec, psi_eval_guarded,
                       psi_inverse)

__all__ = [
    "ExtremalityResult",
    "SpaceTimeBox",
    "xi_downward_cone",
    "xi_envelope",
    "xi_restricted",
    "xi_finite_range",
    "localization_radius",
    "localization_radii_cone",
    "birth_growth_accept",
    "write_flags_csv",
    "read_flags_csv",
]


@dataclass
class ExtremalityResult:
    flags: np.ndarray
    method: str
    unresolved: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.flags = np.asarray(self.flags, dtype=np.uint8)


def _require_power_le_one(psi: PsiSpec, what: str) -> float:
    if psi.kind != "power" or psi.alpha_at_zero > 1.0 + 1e-12:
        raise MethodError(
            f"{what} requires a power-law profile with alpha <= 1; "
            "cone emptiness is equivalent to extremality only there")
    return psi.alpha_at_zero


def _dist_pow(d2: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return np.sqrt(d2)
    if alpha == 2.0:
        return d2
    return d2 ** (alpha / 2.0)


def _cone_flags_brute(spatial: np.ndarray, times: np.ndarray, alpha: float,
                      block: int = 512) -> np.ndarray:
    n = times.size
    flags = np.ones(n, dtype=bool)
    for start in range(0, n, block):
        stop = min(start + block, n)
        d2 = ((spatial[start:stop, None, :] - spatial[None, :, :]) ** 2).sum(-1)
        dom = times[None, :] + _dist_pow(d2, alpha) <= times[start:stop, None]
        dom[np.arange(stop - start), np.arange(start, stop)] = False
        flags[start:stop] = ~dom.any(axis=1)
    return flags


def _cone_flags_sorted(spatial: np.ndarray, times: np.ndarray, alpha: float,
                       slab: int = 1024) -> np.ndarray:
    """Exact cone flags in roughly O(n * n_extremal) work.

    Points are processed in time order.  Dominators always have strictly
    smaller time, and for alpha <= 1 domination is transitive (t**alpha is
    subadditive), so it suffices to test each point against the extremal
    points seen so far plus the points of its own time slab.
    """
    n = times.size
    order = np.argsort(times, kind="stable")
    sp = spatial[order]
    t = times[order]
    flags_sorted = np.ones(n, dtype=bool)
    ext_sp = np.empty((0, spatial.shape[1]))
    ext_t = np.empty(0)
    for start in range(0, n, slab):
        stop = min(start + slab, n)
        bs, bt = sp[start:stop], t[start:stop]
        alive = np.ones(stop - start, dtype=bool)
        if ext_t.size:
            d2 = ((bs[:, None, :] - ext_sp[None, :, :]) ** 2).sum(-1)
            dom = ext_t[None, :] + _dist_pow(d2, alpha) <= bt[:, None]
            alive = ~dom.any(axis=1)
        idx = np.nonzero(alive)[0]
        if idx.size:
            cs, ct = bs[idx], bt[idx]
            d2 = ((cs[:, None, :] - cs[None, :, :]) ** 2).sum(-1)
            dom = ct[None, :] + _dist_pow(d2, alpha) <= ct[:, None]
            dom[np.arange(idx.size), np.arange(idx.size)] = False
            keep = ~dom.any(axis=1)
            alive[idx[~keep]] = False
            ext_sp = np.concatenate([ext_sp, cs[keep]])
            ext_t = np.concatenate([ext_t, ct[keep]])
        flags_sorted[start:stop] = alive
    flags = np.empty(n, dtype=bool)
    flags[order] = flags_sorted
    return flags


def xi_downward_cone(config: PointConfiguration, psi: PsiSpec,
                     index: str = "auto") -> ExtremalityResult:
    """Extremality flags via the downward-cone emptiness test.

    ``index`` selects the implementation: "none" is the O(n^2) reference,
    "sorted" the time-sorted accelerated one; both return identical
    flags.  "auto" picks by size.
    """
    alpha = _require_power_le_one(psi, "xi_downward_cone")
    if config.kind != "spacetime":
        raise ArgumentError("extremality applies to spacetime configurations")
    if index not in ("auto", "none", "sorted"):
        raise ArgumentError("index must be one of auto|none|sorted")
    sp, t = config.spatial, config.times
    if config.n == 0:
        flags = np.zeros(0, dtype=bool)
    elif index == "none" or (index == "auto" and config.n <= 512):
        flags = _cone_flags_brute(sp, t, alpha)
    else:
        flags = _cone_flags_sorted(sp, t, alpha)
    return ExtremalityResult(flags=flags, method="cone", params={"index": index})


def localization_radii_cone(config: PointConfiguration, psi: PsiSpec) -> np.ndarray:
    """Exact localization radii under the cone test (alpha <= 1).

    A flagged point keeps its flag under any spatial restriction, so its
    radius is 0; for a covered point the flag stabilizes once the nearest
    dominator enters the window.
    """
    alpha = _require_power_le_one(psi, "localization_radii_cone")
    sp, t = config.spatial, config.times
    n = config.n
    radii = np.zeros(n)
    block = 256
    for start in range(0, n, block):
        stop = min(start + block, n)
        d2 = ((sp[start:stop, None, :] - sp[None, :, :]) ** 2).sum(-1)
        dom = t[None, :] + _dist_pow(d2, alpha) <= t[start:stop, None]
        dom[np.arange(stop - start), np.arange(start, stop)] = False
        dist = np.sqrt(d2)
        dist[~dom] = np.inf
        nearest = dist.min(axis=1)
        radii[start:stop] = np.where(np.isinf(nearest), 0.0, nearest)
    return radii


# ---------------------------------------------------------------------------
# envelope witness search


def _default_search_radius(config: PointConfiguration, psi: PsiSpec) -> float:
    t_max = float(config.times.max()) if config.n else 1.0
    reach = psi_inverse(psi, min(t_max, psi.range_max))
    sp = config.spatial
    if config.n:
        diam = float(np.linalg.norm(sp.max(axis=0) - sp.min(axis=0)))
    else:
        diam = 0.0
    return 3.0 * reach + diam if (3.0 * reach + diam) > 0 else 1.0


def _graph_values(psi: PsiSpec, times: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """f_j(u) = t_j + psi(|u - x_j|), +inf beyond the profile's reach."""
    return times + psi_eval_guarded(psi, np.sqrt(d2))


class _MarginEvaluator:
    """Exact margin min_{j in comps} f_j(u) - f_i(u) for one point."""

    def __init__(self, psi, sp, t, i, comp_idx):
        self.psi = psi
        self.x_i = sp[i]
        self.t_i = t[i]
        self.comp_sp = sp[comp_idx]
        self.comp_t = t[comp_idx]

    def __call__(self, u: np.ndarray) -> float:
        if self.comp_t.size == 0:
            env = math.inf
        else:
            d2 = ((self.comp_sp - u[None, :]) ** 2).sum(-1)
            env = float(_graph_values(self.psi, self.comp_t, d2).min())
        own = self.t_i + float(psi_eval_guarded(self.psi, np.linalg.norm(u - self.x_i)))
        if math.isinf(own):
            return -math.inf
        return env - own


def _pattern_search(margin_fn, u0, step0, max_refine, tol,
                    clip=None, max_moves: int = 400):
    """Coordinate pattern search maximizing the margin, halving the step."""
    u = np.array(u0, dtype=float)
    best = margin_fn(u)
    step = float(step0)
    dim = u.size
    for _ in range(max_refine):
        moves = 0
        improved = True
        while improved and moves < max_moves:
            improved = False
            for k in range(dim):
                for sgn in (1.0, -1.0):
                    cand = u.copy()
                    cand[k] += sgn * step
                    if clip is not None:
                        cand = clip(cand)
                    val = margin_fn(cand)
                    moves += 1
                    if val > best:
                        best, u = val, cand
                        improved = True
            if best > tol:
                return best, u
        step *= 0.5
    return best, u


def _competitor_prefilter(psi, sp, t, i, radius):
    """Indices j != i that could interact with point i inside its search ball.

    Dropping only points whose graph exceeds f_i everywhere on the ball
    leaves every margin sign unchanged.
    """
    n = t.size
    psi_max = psi_eval_guarded(psi, np.array(min(radius, psi.domain_max)))
    cap = t[i] + float(psi_max)
    dist = np.linalg.norm(sp - sp[i], axis=1)
    lower = np.maximum(dist - radius, 0.0)
    lower_psi = psi_eval_guarded(psi, np.minimum(lower, psi.domain_max))
    lower_psi = np.where(lower > psi.domain_max, np.inf, lower_psi)
    keep = (t + lower_psi <= cap)
    keep[i] = False
    return np.nonzero(keep)[0]


def xi_envelope(config: PointConfiguration, psi: PsiSpec,
                search_radius: float | None = None,
                grid_step: float | None = None,
                max_refine: int = 12,
                tol: float = 1e-9,
                refine_seeds: int = 8,
                max_cells: int = 4_000_000) -> ExtremalityResult:
    """Extremality flags for arbitrary profiles via envelope witness search.

    A shared coarse grid covering all search balls is scanned once; the
    top-two graph values per grid node give every point's exact coarse
    margin in one pass.  Near-ties are refined by local pattern search.
    """
    if config.kind != "spacetime":
        raise ArgumentError("extremality applies to spacetime configurations")
    n = config.n
    if n == 0:
        return ExtremalityResult(np.zeros(0, np.uint8), "envelope")
    if search_radius is None:
        search_radius = _default_search_radius(config, psi)
    if grid_step is None:
        grid_step = search_radius / 64.0
    if not (search_radius > 0 and grid_step > 0):
        raise ArgumentError("search_radius and grid_step must be positive")
    if max_refine < 0:
        raise ArgumentError("max_refine must be nonnegative")
    sp, t = config.spatial, config.times
    dim = config.d - 1

    lo = sp.min(axis=0) - search_radius
    hi = sp.max(axis=0) + search_radius
    axes = [np.arange(lo[k], hi[k] + grid_step, grid_step) for k in range(dim)]
    n_cells = int(np.prod([a.size for a in axes]))
    if n_cells > max_cells:
        raise ArgumentError(
            f"witness grid would need {n_cells} cells; increase grid_step")
    mesh = np.meshgrid(*axes, indexing="ij")
    cells = np.stack([m.reshape(-1) for m in mesh], axis=-1)

    # top-two envelope values and the argmin over all points, per cell
    min1 = np.full(n_cells, np.inf)
    arg1 = np.zeros(n_cells, dtype=np.int64)
    min2 = np.full(n_cells, np.inf)
    block = max(1, int(4_000_000 // max(n, 1)))
    for start in range(0, n_cells, block):
        stop = min(start + block, n_cells)
        d2 = ((cells[start:stop, None, :] - sp[None, :, :]) ** 2).sum(-1)
        F = _graph_values(psi, t[None, :], d2)
        a1 = np.argmin(F, axis=1)
        rows = np.arange(stop - start)
        m1 = F[rows, a1]
        F[rows, a1] = np.inf
        m2 = F.min(axis=1)
        min1[start:stop], arg1[start:stop], min2[start:stop] = m1, a1, m2

    # apex margins: min_{j != i} f_j(x_i) - t_i  (exact cone-coverage test)
    apex_margin = np.empty(n)
    for start in range(0, n, 256):
        stop = min(start + 256, n)
        d2 = ((sp[start:stop, None, :] - sp[None, :, :]) ** 2).sum(-1)
        F = _graph_values(psi, t[None, :], d2)
        F[np.arange(stop - start), np.arange(start, stop)] = np.inf
        apex_margin[start:stop] = F.min(axis=1) - t[start:stop]

    flags = np.zeros(n, dtype=np.uint8)
    unresolved: list[int] = []
    for i in range(n):
        if apex_margin[i] > tol:
            flags[i] = 1
            continue
        cd2 = ((cells - sp[i][None, :]) ** 2).sum(-1)
        inside = cd2 <= search_radius ** 2
        best = apex_margin[i]
        best_u = sp[i].copy()
        seeds = [sp[i].copy()]
        if np.any(inside):
            own = t[i] + psi_eval_guarded(psi, np.sqrt(cd2[inside]))
            env = np.where(arg1[inside] == i, min2[inside], min1[inside])
            margins = np.where(np.isinf(own), -np.inf, env - own)
            top = np.argsort(margins)[::-1][:refine_seeds]
            cand_cells = cells[inside]
            for k in top:
                if margins[k] > best:
                    best = margins[k]
                    best_u = cand_cells[k]
                if np.isfinite(margins[k]):
                    seeds.append(cand_cells[k])
        if best > tol:
            flags[i] = 1
            continue
        if max_refine > 0:
            comps = _competitor_prefilter(psi, sp, t, i, search_radius)
            margin_fn = _MarginEvaluator(psi, sp, t, i, comps)
            center, rad = sp[i], search_radius

            def clip(u, center=center, rad=rad):
                off = u - center
                norm = np.linalg.norm(off)
                return center + off * (rad / norm) if norm > rad else u

            for s in seeds[: refine_seeds + 1]:
                val, u = _pattern_search(margin_fn, s, grid_step, max_refine, tol, clip)
                if val > best:
                    best, best_u = val, u
                if best > tol:
                    break
        if best > tol:
            flags[i] = 1
        elif best < -tol:
            flags[i] = 0
        else:
            flags[i] = 1 if best > 0 else 0
            unresolved.append(i)
    return ExtremalityResult(flags=flags, method="envelope", unresolved=unresolved,
                             params={"search_radius": search_radius,
                                     "grid_step": grid_step,
                                     "max_refine": max_refine, "tol": tol})


# ---------------------------------------------------------------------------
# restricted variants


@dataclass(frozen=True)
class SpaceTimeBox:
    """Axis-aligned restriction window: spatial box times [t_low, t_high]."""

    low: tuple[float, ...]
    high: tuple[float, ...]
    t_low: float = 0.0
    t_high: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "low", tuple(float(x) for x in np.atleast_1d(self.low)))
        object.__setattr__(self, "high", tuple(float(x) for x in np.atleast_1d(self.high)))
        if len(self.low) != len(self.high):
            raise ArgumentError("box bounds must have matching lengths")
        if any(h < l for l, h in zip(self.low, self.high)) or self.t_high < self.t_low:
            raise ArgumentError("restriction window is empty")
        if self.t_low < 0:
            raise ArgumentError("t_low must be nonnegative")

    def contains_points(self, sp: np.ndarray, t: np.ndarray) -> np.ndarray:
        lo = np.asarray(self.low)
        hi = np.asarray(self.high)
        ok = np.all((sp >= lo) & (sp <= hi), axis=1)
        return ok & (t >= self.t_low) & (t <= self.t_high)


def xi_restricted(config: PointConfiguration, psi: PsiSpec, domain: SpaceTimeBox,
                  grid_step: float | None = None, max_refine: int = 12,
                  tol: float = 1e-9) -> ExtremalityResult:
    """Extremality of each point relative to the window ``domain``.

    Both the competitor set and the witness region are restricted: point i
    is flagged iff some piece of its cone inside the window escapes the
    union of the cones of the *other points lying in the window*.
    """
    if config.kind != "spacetime":
        raise ArgumentError("extremality applies to spacetime configurations")
    sp, t = config.spatial, config.times
    if len(domain.low) != config.d - 1:
        raise ArgumentError("domain dimension must match the configuration")
    n = config.n
    in_dom = domain.contains_points(sp, t)
    lo, hi = np.asarray(domain.low), np.asarray(domain.high)
    if grid_step is None:
        grid_step = float(max(np.max(hi - lo) / 64.0, 1e-6))
    axes = [np.arange(lo[k], hi[k] + grid_step, grid_step) for k in range(lo.size)]
    mesh = np.meshgrid(*axes, indexing="ij")
    cells = np.stack([m.reshape(-1) for m in mesh], axis=-1)

    flags = np.zeros(n, dtype=np.uint8)
    unresolved: list[int] = []
    for i in range(n):
        comp_idx = np.nonzero(in_dom & (np.arange(n) != i))[0]
        margin_fn = _RestrictedMargin(psi, sp, t, i, comp_idx, domain)
        best = -math.inf
        best_u = None
        candidates = [sp[i]] if np.all((sp[i] >= lo) & (sp[i] <= hi)) else []
        candidates.extend(cells)
        vals = np.array([margin_fn(np.asarray(u, dtype=float)) for u in candidates])
        if vals.size:
            k = int(np.argmax(vals))
            best = float(vals[k])
            best_u = np.asarray(candidates[k], dtype=float)
        if best > tol:
            flags[i] = 1
            continue
        if best_u is not None and np.isfinite(best) and max_refine > 0:
            def clip(u, lo=lo, hi=hi):
                return np.clip(u, lo, hi)
            order = np.argsort(vals)[::-1][:4]
            for k in order:
                if not np.isfinite(vals[k]):
                    continue
                val, _ = _pattern_search(margin_fn, np.asarray(candidates[k], dtype=float),
                                         grid_step, max_refine, tol, clip)
                best = max(best, val)
                if best > tol:
                    break
        if best > tol:
            flags[i] = 1
        elif best < -tol:
            flags[i] = 0
        else:
            if math.isinf(best):  # cone never meets the window: covered vacuously
                flags[i] = 0
            else:
                flags[i] = 1 if best > 0 else 0
                unresolved.append(i)
    return ExtremalityResult(flags=flags, method="envelope-restricted",
                             unresolved=unresolved,
                             params={"grid_step": grid_step, "max_refine": max_refine,
                                     "tol": tol})


class _RestrictedMargin:
    """Margin against competitors in a window, witness constrained to it.

    Returns -inf when the cone of i does not meet the window above u.
    """

    def __init__(self, psi, sp, t, i, comp_idx, domain: SpaceTimeBox):
        self.psi = psi
        self.x_i = sp[i]
        self.t_i = t[i]
        self.comp_sp = sp[comp_idx]
        self.comp_t = t[comp_idx]
        self.domain = domain

    def __call__(self, u: np.ndarray) -> float:
        lo = np.asarray(self.domain.low)
        hi = np.asarray(self.domain.high)
        if np.any(u < lo) or np.any(u > hi):
            return -math.inf
        own = self.t_i + float(psi_eval_guarded(self.psi, np.linalg.norm(u - self.x_i)))
        own = max(own, self.domain.t_low)
        if not (own <= self.domain.t_high) or math.isinf(own):
            return -math.inf
        if self.comp_t.size == 0:
            return math.inf
        d2 = ((self.comp_sp - u[None, :]) ** 2).sum(-1)
        env = float(_graph_values(self.psi, self.comp_t, d2).min())
        return env - own


def xi_finite_range(config: PointConfiguration, psi: PsiSpec, r: float, i: int,
                    grid_step: float | None = None, max_refine: int = 12,
                    tol: float = 1e-9) -> int:
    """Extremality of point i with everything restricted to the cylinder
    of spatial radius r around it (competitors and witness search)."""
    if not (r > 0):
        raise ArgumentError("r must be positive")
    if not (0 <= i < config.n):
        raise ArgumentError("index out of range")
    sp, t = config.spatial, config.times
    dist = np.linalg.norm(sp - sp[i], axis=1)
    near = (dist <= r)
    near[i] = False
    if psi.kind == "power" and psi.alpha_at_zero <= 1.0 + 1e-12:
        alpha = psi.alpha_at_zero
        dom = t[near] + dist[near] ** alpha <= t[i]
        return int(not dom.any())
    comp_idx = np.nonzero(near)[0]
    if grid_step is None:
        grid_step = r / 32.0
    margin_fn = _CylinderMargin(psi, sp, t, i, comp_idx, r)
    offsets = np.arange(-r, r + grid_step, grid_step)
    mesh = np.meshgrid(*[offsets] * (config.d - 1), indexing="ij")
    cells = sp[i] + np.stack([m.reshape(-1) for m in mesh], axis=-1)
    vals = np.array([margin_fn(np.asarray(u, dtype=float)) for u in cells])
    vals_apex = margin_fn(sp[i])
    best = max(float(vals.max(initial=-math.inf)), vals_apex)
    if best > tol:
        return 1

    def clip(u, center=sp[i], rad=r):
        off = u - center
        norm = np.linalg.norm(off)
        return center + off * (rad / norm) if norm > rad else u

    seeds = [sp[i]] + [cells[k] for k in np.argsort(vals)[::-1][:4] if np.isfinite(vals[k])]
    for s in seeds:
        val, _ = _pattern_search(margin_fn, np.asarray(s, dtype=float),
                                 grid_step, max_refine, tol, clip)
        best = max(best, val)
        if best > tol:
            return 1
    return int(best > 0)


class _CylinderMargin(_MarginEvaluator):
    def __init__(self, psi, sp, t, i, comp_idx, radius):
        super().__init__(psi, sp, t, i, comp_idx)
        self.radius = radius

    def __call__(self, u: np.ndarray) -> float:
        if np.linalg.norm(u - self.x_i) > self.radius * (1 + 1e-12):
            return -math.inf
        return super().__call__(u)


def localization_radius(config: PointConfiguration, psi: PsiSpec, i: int,
                        r_grid, **kw) -> float:
    """Smallest grid radius r such that the cylinder-restricted flag of
    point i agrees with the unrestricted flag for every grid value >= r.

    The grid must be increasing and reach past the point's farthest
    neighbor, where restriction becomes immaterial.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0 or np.any(np.diff(r_grid) <= 0) or r_grid[0] <= 0:
        raise ArgumentError("r_grid must be nonempty, positive, strictly increasing")
    sp = config.spatial
    reach = float(np.linalg.norm(sp - sp[i], axis=1).max()) if config.n > 1 else 0.0
    if r_grid[-1] < reach:
        raise ArgumentError("r_grid must reach the farthest neighbor distance")
    if psi.kind == "power" and psi.alpha_at_zero <= 1.0 + 1e-12:
        full = int(xi_downward_cone_point(config, psi, i))
    else:
        full = int(xi_envelope(config, psi, **{k: v for k, v in kw.items()
                                               if k in ("search_radius", "grid_step",
                                                        "max_refine", "tol")}).flags[i])
    flags = np.array([xi_finite_range(config, psi, float(r), i,
                                      **{k: v for k, v in kw.items()
                                         if k in ("grid_step", "max_refine", "tol")})
                      for r in r_grid])
    agree = flags == full
    suffix = np.logical_and.accumulate(agree[::-1])[::-1]
    idx = np.nonzero(suffix)[0]
    if idx.size == 0:
        raise ArgumentError("restricted flags never stabilize on this grid")
    return float(r_grid[idx[0]])


def xi_downward_cone_point(config: PointConfiguration, psi: PsiSpec, i: int) -> bool:
    """Cone-emptiness test for a single point (alpha <= 1 power profiles)."""
    alpha = _require_power_le_one(psi, "xi_downward_cone_point")
    sp, t = config.spatial, config.times
    d2 = ((sp - sp[i]) ** 2).sum(-1)
    dom = t + _dist_pow(d2, alpha) <= t[i]
    dom[i] = False
    return not dom.any()


# ---------------------------------------------------------------------------
# birth-growth without overlap


def birth_growth_accept(config: PointConfiguration, psi: PsiSpec) -> ExtremalityResult:
    """Acceptance flags of the no-overlap birth-growth process.

    Seeds are processed in time order (ties broken lexicographically by
    position); a seed is accepted iff it lies strictly outside every
    previously accepted grain, i.e. |x - y| > psi^{-1}(t - s) for all
    accepted (y, s).  A point exactly on a boundary counts as covered.
    Flags are invariant under permutations of the input order.
    """
    if psi.kind != "power" or abs(psi.alpha_at_zero - 1.0) > 1e-12:
        raise MethodError("birth_growth_accept requires the linear profile "
                          "(power law with alpha = 1); for nonlinear profiles "
                          "grown regions are not unions of balls around accepted seeds")
    if config.kind != "spacetime":
        raise ArgumentError("birth-growth applies to spacetime configurations")
    sp, t = config.spatial, config.times
    n = config.n
    order = np.lexsort(tuple(sp[:, k] for k in range(sp.shape[1] - 1, -1, -1)) + (t,))
    accepted_sp: list[np.ndarray] = []
    accepted_t: list[float] = []
    flags = np.zeros(n, dtype=np.uint8)
    for idx in order:
        if accepted_t:
            asp = np.asarray(accepted_sp)
            at = np.asarray(accepted_t)
            dist = np.linalg.norm(asp - sp[idx], axis=1)
            if np.any(dist <= t[idx] - at):
                continue
        flags[idx] = 1
        accepted_sp.append(sp[idx])
        accepted_t.append(float(t[idx]))
    return ExtremalityResult(flags=flags, method="birth-growth")


# ---------------------------------------------------------------------------
# serialization


def write_flags_csv(config: PointConfiguration, result: ExtremalityResult,
                    path: str) -> None:
    """Configuration rows with the flag as a trailing 0/1 column, plus a
    JSON sidecar ``<path>.meta.json`` describing the method."""
    with open(path, "w") as fh:
        fh.write(f"{config.d},{config.n}\n")
        for row, flag in zip(config.points, result.flags):
            coords = ",".join(format(v, ".17g") for v in row)
            fh.write(f"{coords},{int(flag)}\n")
    meta = {"method": result.method,
            "params": {k: (float(v) if isinstance(v, (int, float, np.floating)) else v)
                       for k, v in result.params.items()},
            "unresolved": [int(k) for k in result.unresolved]}
    with open(path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_flags_csv(path: str, kind: str = "spacetime"):
    """Inverse of write_flags_csv: returns (configuration, result)."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().strip().splitlines() if ln]
    d, count = (int(v) for v in lines[0].split(","))
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    if len(rows) != count:
        raise ArgumentError(f"expected {count} rows, found {len(rows)}")
    pts = np.array([r[:-1] for r in rows]) if rows else np.empty((0, d))
    flags = np.array([int(r[-1]) for r in rows], dtype=np.uint8)
    config = PointConfiguration(d=d, points=pts, kind=kind)
    with open(path + ".meta.json") as fh:
        meta = json.load(fh)
    result = ExtremalityResult(flags=flags, method=meta["method"],
                               unresolved=list(meta["unresolved"]),
                               params=dict(meta["params"]))
    return config, result
