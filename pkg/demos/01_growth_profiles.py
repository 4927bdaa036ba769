"""
Growth profiles and their space-time cones
==========================================

A growth profile psi maps a spatial distance l to the time psi(l) a
grain needs before it covers that distance.  Each sample point x at
birth time h owns an upward cone: all space-time positions (y, t) with
t >= h + psi(|y - x|).  This script evaluates the built-in profiles,
inverts them, and demonstrates the duality between upward and downward
cones that drives the fast extremality test.
"""

import numpy as np

from psigrowth import (PsiSpec, SpaceTimePoint, downward_cone_contains,
                       psi_eval, psi_inverse, upward_cone_contains)

# ----------------------------------------------------------------------
# 1. Power-law profiles psi(l) = l**alpha
# ----------------------------------------------------------------------
# alpha = 1 is linear growth (Johnson-Mehl style); alpha < 1 grows fast
# near the seed and slows down; alpha > 1 starts slowly.
for alpha in (0.5, 1.0, 2.0):
    psi = PsiSpec.power_law(alpha)
    ls = np.array([0.0, 0.25, 1.0, 4.0])
    print(f"alpha={alpha}: psi({ls.tolist()}) = {psi_eval(psi, ls).round(4).tolist()}")

# The inverse profile answers "how far has a grain grown after time u".
psi = PsiSpec.power_law(2.0)
u = 0.09
print(f"inverse of l**2 at u={u}: {psi_inverse(psi, u):.4f} (expect 0.3)")

# ----------------------------------------------------------------------
# 2. A bounded-range profile: the spherical cap
# ----------------------------------------------------------------------
# The cap profile is defined only up to a maximal distance; beyond the
# cap's footprint the grain never arrives and psi is +infinity.
cap = PsiSpec.spherical_cap()
print(f"cap domain_max={cap.domain_max:.4f} range_max={cap.range_max:.4f}")
print(f"cap at half the footprint: {psi_eval(cap, cap.domain_max / 2):.4f}")

# ----------------------------------------------------------------------
# 3. A tabulated profile interpolates measured knots
# ----------------------------------------------------------------------
tab = PsiSpec.tabulated(knots_l=[0.0, 1.0, 2.0], knots_v=[0.0, 0.5, 2.0],
                        alpha_at_zero=1.0)
print(f"tabulated psi(1.5) = {psi_eval(tab, 1.5):.4f} (linear between knots)")

# ----------------------------------------------------------------------
# 4. Upward cones, downward cones, and their duality
# ----------------------------------------------------------------------
# q lies in the upward cone of a  <=>  a lies in the downward cone of q.
# The two predicates are evaluated from the same floating-point
# difference, so the equivalence is exact, never off by one ulp.
rng = np.random.default_rng(7)
psi = PsiSpec.power_law(1.0)
a = SpaceTimePoint((0.0, 0.0), 0.1)
q = SpaceTimePoint((0.3, 0.4), 0.7)  # distance 0.5, time gap 0.6 >= 0.5
print(f"q in upward cone of a:   {upward_cone_contains(a, q, psi)}")
print(f"a in downward cone of q: {downward_cone_contains(q, a, psi)}")

agree = 0
for _ in range(1000):
    x = SpaceTimePoint(tuple(rng.uniform(-1, 1, 2)), rng.uniform(0, 1))
    y = SpaceTimePoint(tuple(rng.uniform(-1, 1, 2)), rng.uniform(0, 1))
    agree += (upward_cone_contains(x, y, psi)
              == downward_cone_contains(y, x, psi))
print(f"duality holds on {agree}/1000 random pairs")
