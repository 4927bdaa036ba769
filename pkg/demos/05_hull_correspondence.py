"""
Convex hull vertices as extremal points
=======================================

A point of a sample in the unit ball is a vertex of the convex hull
exactly when, after mapping each point to a height above the sphere
(radius r becomes height 1 - r along its direction), it is extremal for
the support-function epigraph.  This script checks the correspondence
on random disk samples, measures how slowly the vertex count grows, and
evaluates hull statistics through the same pairing interface used for
growth processes.
"""

import numpy as np

from psigrowth import (derive_seed_sequence, fit_scaling_exponent,
                       hull_vertex_measure, hull_vertices,
                       support_epigraph_extremal)

rng = np.random.default_rng(derive_seed_sequence(0, "demo5"))


def disk_sample(n):
    pts = []
    while len(pts) < n:
        x = rng.uniform(-1.0, 1.0, 2)
        if x @ x <= 1.0:
            pts.append(x)
    return np.array(pts)

# ----------------------------------------------------------------------
# 1. Hull vertices two ways
# ----------------------------------------------------------------------
# hull_vertices flags each sample point (1 = vertex); the epigraph route
# answers the same question through the extremality machinery.
sample = disk_sample(12)
hr = hull_vertices(sample)
er = support_epigraph_extremal(sample)
print(f"hull flags:     {hr.flags.tolist()} (method {hr.method})")
print(f"epigraph flags: {er.flags.tolist()}")
print(f"agree: {np.array_equal(hr.flags, er.flags)} "
      f"(unresolved: {sorted(set(hr.unresolved) | set(er.unresolved))})")

agreements = 0
for _ in range(100):
    s = disk_sample(int(rng.integers(4, 25)))
    a = hull_vertices(s)
    b = support_epigraph_extremal(s)
    unres = set(a.unresolved) | set(b.unresolved)
    ok = all(a.flags[i] == b.flags[i]
             for i in range(len(s)) if i not in unres)
    agreements += ok
print(f"correspondence held on {agreements}/100 random samples")

# ----------------------------------------------------------------------
# 2. Vertex counts grow very slowly
# ----------------------------------------------------------------------
# For uniform samples in the disk the expected number of hull vertices
# grows like n**(1/3): doubling the sample adds only ~26% more vertices.
ns = [2 ** 7, 2 ** 9, 2 ** 11, 2 ** 13]
means = []
for n in ns:
    counts = [hull_vertices(disk_sample(n)).flags.sum() for _ in range(30)]
    means.append(np.mean(counts))
    print(f"n={n:5d}: mean vertices {means[-1]:.2f}")
fit = fit_scaling_exponent(ns, means, window="full")
print(f"fitted growth exponent {fit.slope:.3f} (expect 1/3 = 0.333)")

# ----------------------------------------------------------------------
# 3. Summing a function over the vertices
# ----------------------------------------------------------------------
# hull_vertex_measure pairs the vertex indicator with a function of the
# vertex positions: the count, a coordinate sum, or anything callable.
s = disk_sample(64)
flags = hull_vertices(s).flags
count = hull_vertex_measure(s, flags, lambda x: np.ones(x.shape[0]))
xsum = hull_vertex_measure(s, flags, lambda x: x[:, 0])
print(f"vertices {int(count)}, sum of vertex x-coordinates {xsum:+.4f}")
