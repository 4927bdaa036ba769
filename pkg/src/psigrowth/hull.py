"""Convex-hull vertex detection and its spherical-envelope twin.

Vertex flags are computed two independent ways that must agree:

* hull_vertices: point i is a vertex iff it is NOT a convex combination
  of the other points.  In the plane a pruned monotone chain answers
  this directly; in general dimension each point gets a self-contained
  phase-I simplex feasibility test (dense tableau, Bland's rule).

* support_epigraph_extremal: map each point to the graph
  g_i(u) = 1 - r_i * cos(angle(u_i, u)) = 1 - <x_i, u> over the unit
  sphere of directions.  The epigraph of g_i escapes the union of the
  others iff some direction u has <x_i, u> strictly larger than every
  other point's projection - the classical support-function
  characterization of extreme points.  The search runs on a direction
  grid with local refinement and reports unresolved near-ties, exactly
  like the space-time envelope test.

Ties are pinned: a point lying in the relative interior of a hull facet
(or duplicated exactly) IS a convex combination of the others and is
flagged 0.  Such inputs are reported as degenerate, not errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .geometry import PointConfiguration

__all__ = [
    "ball_sample",
    "HullResult",
    "hull_vertices",
    "support_epigraph_extremal",
    "hull_vertex_measure",
    "shell_prefilter",
]


def ball_sample(points) -> PointConfiguration:
    """Wrap an (n, d) array of points of the closed unit ball."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ArgumentError("ball sample must be nonempty")
    norms = np.linalg.norm(pts, axis=1)
    if norms.max() > 1.0 + 1e-12:
        raise ArgumentError("ball sample points must satisfy |x| <= 1")
    return PointConfiguration(d=pts.shape[1], points=pts, kind="ball")


@dataclass
class HullResult:
    flags: np.ndarray
    method: str
    degenerate: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.flags = np.asarray(self.flags, dtype=np.uint8)


def _as_points(sample) -> np.ndarray:
    if isinstance(sample, PointConfiguration):
        return sample.points
    return np.atleast_2d(np.asarray(sample, dtype=float))


def _duplicate_groups(pts: np.ndarray):
    """Indices of points that appear more than once (bitwise)."""
    order = np.lexsort(pts.T[::-1])
    dup = np.zeros(pts.shape[0], dtype=bool)
    same = np.all(pts[order][1:] == pts[order][:-1], axis=1)
    dup[order[1:]] |= same
    dup[order[:-1]] |= same
    return np.nonzero(dup)[0]


def _chain_flags_2d(pts: np.ndarray):
    """Strict hull vertices in the plane by iterative chain pruning.

    On the x-sorted sequence, repeatedly delete every middle point of a
    non-left-turn triple until none remain.  Strict hull vertices are
    never deleted (any chord over a corner passes strictly above it),
    and at the fixpoint the surviving chain is strictly convex, so the
    survivors are exactly the lower-hull vertices; the mirrored pass
    gives the upper hull.  Exact collinear deletions are reported as
    degenerate.
    """
    n = pts.shape[0]
    flags = np.zeros(n, dtype=bool)
    degenerate: set[int] = set()
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def prune(idx):
        while idx.size > 2:
            a, b, c = pts[idx[:-2]], pts[idx[1:-1]], pts[idx[2:]]
            cross = ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                     - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
            bad = cross <= 0.0
            if not bad.any():
                break
            degenerate.update(int(k) for k in idx[1:-1][cross == 0.0])
            keep = np.ones(idx.size, dtype=bool)
            keep[1:-1][bad] = False
            idx = idx[keep]
        return idx

    lower = prune(order)
    upper = prune(order[::-1])
    flags[lower] = True
    flags[upper] = True
    if n <= 2:
        flags[:] = True
    return flags, degenerate


def _phase_one_feasible(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Feasibility of {w >= 0 : A w = b} by a dense phase-I simplex.

    Artificial variables start basic; Bland's smallest-index rule on
    both the entering and leaving choices rules out cycling.
    """
    m, k = A.shape
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    T = np.zeros((m + 1, k + m + 1))
    T[:m, :k] = A
    T[:m, k:k + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :k] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(k, k + m))
    for _ in range(50 * (k + m)):
        enter = -1
        for j in range(k + m):
            if T[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_ratio = math.inf
        for i in range(m):
            if T[i, enter] > tol:
                ratio = T[i, -1] / T[i, enter]
                if (ratio < best_ratio - 1e-15
                        or (abs(ratio - best_ratio) <= 1e-15
                            and (leave < 0 or basis[i] < basis[leave]))):
                    best_ratio, leave = ratio, i
        if leave < 0:
            break
        piv = T[leave, enter]
        T[leave] /= piv
        col = T[:, enter].copy()
        col[leave] = 0.0
        T -= np.outer(col, T[leave])
        basis[leave] = enter
    return T[m, -1] >= -tol  # phase-I optimum (= -T[m,-1]) is ~0


def _lp_flags(pts: np.ndarray, tol: float = 1e-9):
    n, d = pts.shape
    flags = np.zeros(n, dtype=bool)
    for i in range(n):
        others = np.delete(pts, i, axis=0)
        if others.shape[0] == 0:
            flags[i] = True
            continue
        A = np.vstack([others.T, np.ones(others.shape[0])])
        b = np.concatenate([pts[i], [1.0]])
        flags[i] = not _phase_one_feasible(A, b, tol)
    return flags


def hull_vertices(sample, method: str = "auto", tol: float = 1e-9) -> HullResult:
    """Per-point vertex flags of the convex hull.

    method "chain" (d=2 only) and "lp" (any d) implement the same
    definition - point i is a vertex iff it is not a convex combination
    of the others - and agree exactly; "auto" picks by dimension.
    """
    pts = _as_points(sample)
    if pts.shape[0] == 0:
        raise ArgumentError("hull_vertices needs a nonempty sample")
    n, d = pts.shape
    if method not in ("auto", "chain", "lp"):
        raise ArgumentError("method must be auto|chain|lp")
    if method == "chain" and d != 2:
        raise ArgumentError("the chain method is planar only")
    use_chain = method == "chain" or (method == "auto" and d == 2)
    dup = _duplicate_groups(pts)
    degenerate = set(int(i) for i in dup)
    if use_chain:
        if dup.size:
            # duplicated points are convex combinations of their twins;
            # compute the chain on unique rows and zero the duplicates
            uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
            uflags, udeg = _chain_flags_2d(uniq)
            flags = uflags[inverse]
            flags[dup] = False
            deg_positions = {tuple(uniq[k]) for k in udeg}
            degenerate.update(int(i) for i in range(n)
                              if tuple(pts[i]) in deg_positions)
        else:
            flags, udeg = _chain_flags_2d(pts)
            degenerate.update(udeg)
        name = "chain"
    else:
        flags = _lp_flags(pts, tol)
        name = "lp"
    return HullResult(flags=flags, method=name,
                      degenerate=sorted(degenerate), params={"tol": tol})


# ---------------------------------------------------------------------------
# spherical support-epigraph route


def _icosphere(level: int) -> np.ndarray:
    """Unit vectors of a recursively subdivided icosahedron."""
    phi = (1 + math.sqrt(5)) / 2
    verts = []
    for a in (-1, 1):
        for b in (-phi, phi):
            verts += [(0, a, b), (a, b, 0), (b, 0, a)]
    V = np.array(verts, dtype=float)
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    faces = set()
    # faces = triples of mutually nearest vertices (edge length is constant)
    edge = np.min([np.linalg.norm(V[0] - V[k]) for k in range(1, 12)])
    for i in range(12):
        for j in range(i + 1, 12):
            if abs(np.linalg.norm(V[i] - V[j]) - edge) > 1e-9:
                continue
            for k in range(j + 1, 12):
                if (abs(np.linalg.norm(V[i] - V[k]) - edge) < 1e-9
                        and abs(np.linalg.norm(V[j] - V[k]) - edge) < 1e-9):
                    faces.add((i, j, k))
    F = [list(f) for f in faces]
    for _ in range(level):
        key = {}
        newF = []
        Vlist = [v for v in V]

        def midpoint(i, j):
            k = (min(i, j), max(i, j))
            if k not in key:
                m = Vlist[i] + Vlist[j]
                m /= np.linalg.norm(m)
                key[k] = len(Vlist)
                Vlist.append(m)
            return key[k]

        for (i, j, k) in F:
            a, b, c = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            newF += [[i, a, c], [a, j, b], [c, b, k], [a, b, c]]
        V = np.asarray(Vlist)
        F = newF
    return V


def _directions(d: int, grid_step: float) -> np.ndarray:
    if d == 2:
        m = max(8, int(math.ceil(2 * math.pi / grid_step)))
        th = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if d == 3:
        # subdivision level matching the requested angular pitch
        level = max(0, min(7, int(math.ceil(math.log2(1.1 / grid_step)))))
        return _icosphere(level)
    raise ArgumentError("support-epigraph search covers d in {2, 3}; "
                        "use hull_vertices for higher dimensions")


def _tangent_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at u on the sphere."""
    d = u.size
    B = []
    for k in range(d):
        e = np.zeros(d)
        e[k] = 1.0
        v = e - np.dot(e, u) * u
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            v /= nv
            for w in B:
                v -= np.dot(v, w) * w
                nv2 = np.linalg.norm(v)
                if nv2 > 1e-8:
                    v /= nv2
                else:
                    v = None
                    break
            if v is not None:
                B.append(v)
        if len(B) == d - 1:
            break
    return np.stack(B)


def support_epigraph_extremal(sample, grid_step: float | None = None,
                              max_refine: int = 12, tol: float = 1e-9,
                              refine_seeds: int = 4) -> HullResult:
    """Vertex flags through the spherical lower-envelope test.

    flag(i) = 1 iff some direction u gives <x_i, u> strictly above every
    other point's projection, searched on a direction grid (uniform
    angles for d=2, subdivided icosahedron for d=3) with pattern-search
    refinement on the sphere.  Margins within tol of zero after
    refinement are unresolved and flagged by sign.
    """
    pts = _as_points(sample)
    n, d = pts.shape
    if n == 0:
        raise ArgumentError("support_epigraph_extremal needs a nonempty sample")
    r = np.linalg.norm(pts, axis=1)
    if np.any(r == 0.0):
        raise ArgumentError("no point may sit exactly at the origin (r = 0)")
    if grid_step is None:
        grid_step = math.pi / 720 if d == 2 else 0.05
    if not (grid_step > 0) or max_refine < 0:
        raise ArgumentError("grid parameters must be positive")
    U = _directions(d, grid_step)
    S = pts @ U.T                      # projections, n x m
    top = np.argmax(S, axis=0)
    rows = np.arange(U.shape[0])
    max1 = S[top, rows]
    S2 = S.copy()
    S2[top, rows] = -np.inf
    max2 = S2.max(axis=0)

    flags = np.zeros(n, dtype=np.uint8)
    unresolved: list[int] = []
    for i in range(n):
        others = np.where(top == i, max2, max1)
        margins = S[i] - others
        k_best = np.argsort(margins)[::-1][:refine_seeds]
        best = float(margins[k_best[0]])
        if best > tol:
            flags[i] = 1
            continue
        if max_refine > 0:
            x_i = pts[i]
            mask = np.ones(n, dtype=bool)
            mask[i] = False
            others_pts = pts[mask]

            def margin_fn(u, x_i=x_i, others_pts=others_pts):
                return float(np.dot(x_i, u) - (others_pts @ u).max()
                             if others_pts.size else math.inf)

            for k in k_best:
                u = U[k].copy()
                step = grid_step
                val = margin_fn(u)
                for _ in range(max_refine):
                    improved = True
                    moves = 0
                    B = _tangent_basis(u)
                    while improved and moves < 200:
                        improved = False
                        for t in B:
                            for sgn in (1.0, -1.0):
                                cand = u + sgn * step * t
                                cand /= np.linalg.norm(cand)
                                v = margin_fn(cand)
                                moves += 1
                                if v > val:
                                    val, u = v, cand
                                    improved = True
                                    B = _tangent_basis(u)
                    if val > tol:
                        break
                    step *= 0.5
                if val > best:
                    best = val
                if best > tol:
                    break
        if best > tol:
            flags[i] = 1
        elif best < -tol:
            flags[i] = 0
        else:
            flags[i] = 1 if best > 0 else 0
            unresolved.append(i)
    return HullResult(flags=flags, method="support-epigraph",
                      unresolved=unresolved,
                      params={"grid_step": grid_step, "max_refine": max_refine,
                              "tol": tol})


def hull_vertex_measure(sample, flags, f) -> float:
    """Sum of f over the flagged vertices."""
    pts = _as_points(sample)
    flags = np.asarray(flags, dtype=float)
    if flags.size != pts.shape[0]:
        raise ArgumentError("flags length must match the sample")
    vals = np.broadcast_to(np.asarray(f(pts), dtype=float), (pts.shape[0],))
    return float(np.dot(flags, vals))


def shell_prefilter(sample, width: float):
    """Mask of points within ``width`` of the sphere, the thin shell
    where hull vertices concentrate; an optional accelerator whose
    error should be measured (vertices outside the mask), not assumed.
    """
    pts = _as_points(sample)
    if not (0 < width <= 1):
        raise ArgumentError("width must lie in (0, 1]")
    return np.linalg.norm(pts, axis=1) >= 1.0 - width
