"""
Measuring scaling exponents by Monte Carlo
==========================================

The number of extremal points of an intensity-lambda sample grows like
lambda**tau with tau = (d-1) / ((d-1) + alpha*(1+delta)): more points
mean more competition, so the extremal fraction shrinks.  This script
predicts tau from the parameters, estimates it from replicated
simulations over a lambda grid, and saves a log-log picture of the fit.
"""

import numpy as np

from psigrowth import (BoxRegion, DensitySpec, PsiSpec, TestFunction,
                       compute_exponents, run_scaling_experiment)

# ----------------------------------------------------------------------
# 1. The exponent algebra
# ----------------------------------------------------------------------
# d counts space-time dimensions; alpha is the growth-profile power;
# delta tilts the birth-time density.  beta and gamma are the spatial
# and temporal rescaling exponents that make the process locally
# unit-intensity; they satisfy beta*(d-1) + gamma*(1+delta) = 1.
for (d, alpha, delta) in [(2, 1.0, 0.0), (3, 1.0, 0.0), (2, 1.0, 1.0)]:
    e = compute_exponents(d, alpha, delta)
    print(f"d={d} alpha={alpha} delta={delta}: "
          f"tau={e.tau:.4f} beta={e.beta:.4f} gamma={e.gamma:.4f}")

# ----------------------------------------------------------------------
# 2. A replicated experiment over a lambda grid
# ----------------------------------------------------------------------
# Two observables: the plain count (f = 1) and a smooth interior bump,
# which weights extremal points near the middle of the region.  R
# replicates per lambda; everything derives from the one root seed.
density = DensitySpec(2, 0.0, BoxRegion((0.0,), (1.0,)))
psi = PsiSpec.power_law(1.0)
fs = [TestFunction("constant", name="count"),
      TestFunction("bump", center=(0.5,), radius=0.25, name="bump")]
# Variance estimates are much noisier than means: R=60 would be plenty
# for the mean slope but the variance slope needs more replicates.
grid = [2 ** k for k in range(8, 14)]
report = run_scaling_experiment(density, psi, grid, R=150, fs=fs, seed=42,
                                workers=1)

print(f"\nlambda grid {report.lambda_grid}")
for row in report.per_lambda:
    print(f"lambda={row['lambda']:7.0f}: mean count {row['mean'][0]:8.3f} "
          f"+- {row['se_mean'][0]:.3f}  var {row['var'][0]:8.3f}")

tau = compute_exponents(2, 1.0, 0.0).tau
mfit = report.slopes["count"]["mean"]
vfit = report.slopes["count"]["var"]
print(f"\nmean slope {mfit['slope']:.4f} +- {mfit['stderr']:.4f} "
      f"(tau = {tau})")
print(f"var  slope {vfit['slope']:.4f} +- {vfit['stderr']:.4f} "
      f"(tau = {tau})")

# ----------------------------------------------------------------------
# 3. A log-log picture of the fit
# ----------------------------------------------------------------------
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

lams = np.array(report.lambda_grid)
means = np.array([row["mean"][0] for row in report.per_lambda])
ses = np.array([row["se_mean"][0] for row in report.per_lambda])
fig, ax = plt.subplots(figsize=(5, 4))
ax.errorbar(lams, means, yerr=ses, fmt="o", label="mean count")
ax.plot(lams, np.exp(mfit["intercept"]) * lams ** mfit["slope"], "--",
        label=f"fit slope {mfit['slope']:.3f}")
ax.plot(lams, means[0] * (lams / lams[0]) ** tau, ":",
        label=f"slope tau = {tau:g}")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("lambda")
ax.set_ylabel("mean extremal count")
ax.legend()
fig.tight_layout()
fig.savefig("scaling_fit.png", dpi=120)
print("\nwrote scaling_fit.png")
