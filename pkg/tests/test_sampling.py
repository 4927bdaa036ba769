import math

import numpy as np
import pytest
from scipy import stats as sps

from psigrowth import (ArgumentError, BallRegion, BoxRegion, DensitySpec,
                       derive_seed_sequence, read_points_csv,
                       sample_binomial_box, sample_limit_process,
                       sample_poisson_ball, sample_poisson_box, total_mass,
                       write_points_csv)


def unit_density(d=2, delta=0.0, time_cap=1.0):
    return DensitySpec(d=d, delta=delta,
                       region=BoxRegion(low=(0.0,) * (d - 1),
                                        high=(1.0,) * (d - 1)),
                       rho0=1.0, time_cap=time_cap)


# ---------------------------------------------------------------------------
# Poisson sampling on a box


def test_poisson_count_mean():
    dens = unit_density()
    counts = [sample_poisson_box(dens, lam=1000.0, seed=(7, r)).n
              for r in range(200)]
    mean = np.mean(counts)
    # mass = lam * integral(rho0) * H^(1+delta)/(1+delta) = 1000 * 1 * 1
    assert abs(mean - 1000.0) < 3.0 * math.sqrt(1000.0 / 200.0)


def test_poisson_time_marginal_delta_one():
    # density h^delta on [0, H]: CDF is (h/H)^(1+delta); delta=1, H=1 -> h^2
    dens = unit_density(delta=1.0)
    cfg = sample_poisson_box(dens, lam=100000.0, seed=11)
    d = sps.kstest(cfg.times, lambda h: np.clip(h, 0, 1) ** 2)
    assert d.statistic < 0.02


def test_poisson_respects_region_and_cap():
    dens = DensitySpec(d=3, delta=0.0,
                       region=BoxRegion(low=(-1.0, 2.0), high=(1.0, 3.0)),
                       rho0=1.0, time_cap=0.25)
    cfg = sample_poisson_box(dens, lam=5000.0, seed=3)
    assert cfg.spatial[:, 0].min() >= -1.0 and cfg.spatial[:, 0].max() <= 1.0
    assert cfg.spatial[:, 1].min() >= 2.0 and cfg.spatial[:, 1].max() <= 3.0
    assert cfg.times.max() <= 0.25
    assert total_mass(dens) == pytest.approx(2.0 * 0.25)


def test_poisson_inhomogeneous_spatial_marginal():
    # rho0(x) = 2x on [0,1]: thinning must reproduce the triangular marginal
    dens = DensitySpec(d=2, delta=0.0,
                       region=BoxRegion(low=(0.0,), high=(1.0,)),
                       rho0=lambda x: 2.0 * x[:, 0],
                       rho0_low=0.0, rho0_high=2.0, time_cap=1.0)
    cfg = sample_poisson_box(dens, lam=20000.0, seed=5)
    hist, edges = np.histogram(cfg.spatial[:, 0], bins=10, range=(0.0, 1.0))
    centers = 0.5 * (edges[:-1] + edges[1:])
    expected = cfg.n * (2.0 * centers) / 10.0
    chi2 = np.sum((hist - expected) ** 2 / expected)
    assert sps.chi2.sf(chi2, df=9) > 0.01


def test_rho0_bound_violation_raises():
    dens = DensitySpec(d=2, delta=0.0,
                       region=BoxRegion(low=(0.0,), high=(1.0,)),
                       rho0=lambda x: 2.0 * np.ones(len(x)),
                       rho0_low=0.0, rho0_high=1.0, time_cap=1.0)
    with pytest.raises(ArgumentError):
        sample_poisson_box(dens, lam=500.0, seed=0)


def test_callable_rho0_requires_bounds():
    with pytest.raises(ArgumentError):
        DensitySpec(d=2, delta=0.0,
                    region=BoxRegion(low=(0.0,), high=(1.0,)),
                    rho0=lambda x: np.ones(len(x)), time_cap=1.0)


def test_disjoint_boxes_are_independent():
    # Poisson counts in disjoint regions are uncorrelated
    dens = unit_density()
    left, right = [], []
    for r in range(1000):
        cfg = sample_poisson_box(dens, lam=50.0, seed=(99, r))
        left.append(np.count_nonzero(cfg.spatial[:, 0] < 0.5))
        right.append(np.count_nonzero(cfg.spatial[:, 0] >= 0.5))
    c = np.corrcoef(left, right)[0, 1]
    assert abs(c) < 3.0 / math.sqrt(1000.0)


# ---------------------------------------------------------------------------
# binomial sampling


def test_binomial_counts_and_edge_cases():
    dens = unit_density()
    assert sample_binomial_box(dens, n=0, seed=1).n == 0
    one = sample_binomial_box(dens, n=1, seed=1)
    assert one.n == 1
    cfg = sample_binomial_box(dens, n=500, seed=2)
    assert cfg.n == 500
    hist, _ = np.histogram(cfg.spatial[:, 0], bins=10, range=(0.0, 1.0))
    chi2 = np.sum((hist - 50.0) ** 2 / 50.0)
    assert sps.chi2.sf(chi2, df=9) > 0.01


def test_binomial_prefix_coupling():
    # equal seeds share one candidate stream: the 20-point sample is a
    # prefix of the 40-point sample, and of the Poisson sample's points
    dens = unit_density()
    a = sample_binomial_box(dens, n=20, seed=(4, "stream"))
    b = sample_binomial_box(dens, n=40, seed=(4, "stream"))
    assert np.array_equal(a.points, b.points[:20])
    po = sample_poisson_box(dens, lam=100.0, seed=(4, "stream"))
    m = min(po.n, 20)
    assert np.array_equal(a.points[:m], po.points[:m])


def test_binomial_argument_errors():
    dens = unit_density()
    with pytest.raises(ArgumentError):
        sample_binomial_box(dens, n=-1, seed=0)
    no_cap = DensitySpec(d=2, delta=0.0,
                         region=BoxRegion(low=(0.0,), high=(1.0,)), rho0=1.0)
    with pytest.raises(ArgumentError):
        sample_binomial_box(no_cap, n=5, seed=0)


# ---------------------------------------------------------------------------
# ball sampling


def test_ball_radial_law_and_count():
    # intensity (1-|x|)^delta: radial density r^(d-1)(1-r)^delta
    counts = []
    radii = []
    for r in range(40):
        cfg = sample_poisson_ball(3, 1.0, 1.0, lam=500.0, seed=(13, r))
        counts.append(cfg.n)
        radii.append(np.linalg.norm(cfg.points, axis=1))
    # mass = 4*pi * int r^2 (1-r) dr = 4*pi / 12
    mass = 500.0 * 4.0 * math.pi / 12.0
    assert abs(np.mean(counts) - mass) < 3.0 * math.sqrt(mass / 40.0)
    radii = np.concatenate(radii)
    # CDF = int_0^r 12 s^2 (1-s) ds = 4 r^3 - 3 r^4
    cdf = lambda r: 4.0 * np.clip(r, 0, 1) ** 3 - 3.0 * np.clip(r, 0, 1) ** 4
    assert sps.kstest(radii, cdf).statistic < 0.02


def test_ball_uniform_case():
    # delta = 0, d = 2: radial CDF r^2, count Poisson(lam * pi)
    cfg = sample_poisson_ball(2, 0.0, 1.0, lam=2000.0, seed=8)
    r = np.linalg.norm(cfg.points, axis=1)
    assert r.max() <= 1.0 + 1e-12
    assert sps.kstest(r, lambda t: np.clip(t, 0, 1) ** 2).statistic < 0.03
    assert abs(cfg.n - 2000.0 * math.pi) < 4.0 * math.sqrt(2000.0 * math.pi)


def test_ball_direction_thinning():
    # rho0 concentrated on the right half-plane
    rho0 = lambda u: np.where(u[:, 0] > 0, 1.0, 0.0)
    cfg = sample_poisson_ball(2, 0.0, rho0, lam=500.0, seed=9, rho0_high=1.0)
    assert np.all(cfg.points[:, 0] > 0)


# ---------------------------------------------------------------------------
# limit process


def test_limit_process_masses():
    # window [-1,1] x [0,1]: spatial mass 2, time mass 1 (delta = 0)
    reps = 300
    tot = 0
    sub = 0
    for r in range(reps):
        cfg = sample_limit_process(d=2, delta=0.0, window_radius=1.0,
                                   time_cap=1.0, seed=(21, r))
        tot += cfg.n
        sub += int(np.count_nonzero((cfg.spatial[:, 0] > 0)
                                    & (cfg.times < 0.5)))
    mean = tot / reps
    assert abs(mean - 2.0) < 3.0 * math.sqrt(2.0 / reps)
    assert abs(sub / reps - 0.5) < 3.0 * math.sqrt(0.5 / reps)


def test_limit_process_delta_tilts_times():
    cfgs = [sample_limit_process(d=2, delta=2.0, window_radius=1.0,
                                 time_cap=1.0, seed=(22, r)) for r in range(2000)]
    times = np.concatenate([c.times for c in cfgs])
    # density 3h^2 on [0,1] has mean 3/4, sd ~ 0.194
    assert abs(times.mean() - 0.75) < 3.0 * 0.194 / math.sqrt(len(times))


# ---------------------------------------------------------------------------
# determinism, seed derivation, perturbation hook


def test_sampling_deterministic():
    dens = unit_density()
    a = sample_poisson_box(dens, lam=700.0, seed=(5, "run"))
    b = sample_poisson_box(dens, lam=700.0, seed=(5, "run"))
    assert np.array_equal(a.points, b.points)
    c = sample_poisson_box(dens, lam=700.0, seed=(5, "other"))
    assert not np.array_equal(a.points, c.points)


def test_derive_seed_sequence_distinguishes_tags():
    s1 = derive_seed_sequence(0, "a", 1)
    s2 = derive_seed_sequence(0, "a", 2)
    s3 = derive_seed_sequence(0, "b", 1)
    states = {np.random.default_rng(s).integers(0, 2 ** 60) for s in (s1, s2, s3)}
    assert len(states) == 3
    # tuple roots flatten: derive((0, "a"), "x") == derive(0, "a", "x")
    t1 = derive_seed_sequence((0, "a"), "x")
    t2 = derive_seed_sequence(0, "a", "x")
    assert (np.random.default_rng(t1).integers(0, 2 ** 60)
            == np.random.default_rng(t2).integers(0, 2 ** 60))


def test_perturbation_tilts_intensity():
    # rho -> rho * (1 + 1{x < 1/2}): left half twice as heavy
    dens = DensitySpec(d=2, delta=0.0,
                       region=BoxRegion(low=(0.0,), high=(1.0,)), rho0=1.0,
                       time_cap=1.0,
                       perturbation=lambda x, h: (x[:, 0] < 0.5).astype(float),
                       perturbation_high=1.0)
    assert total_mass(dens) == pytest.approx(1.5, rel=1e-6)
    cfg = sample_poisson_box(dens, lam=20000.0, seed=27)
    frac_left = np.count_nonzero(cfg.spatial[:, 0] < 0.5) / cfg.n
    assert abs(frac_left - 2.0 / 3.0) < 0.02


def test_perturbation_bound_violation_raises():
    dens = DensitySpec(d=2, delta=0.0,
                       region=BoxRegion(low=(0.0,), high=(1.0,)), rho0=1.0,
                       time_cap=1.0,
                       perturbation=lambda x, h: np.full(len(x), 2.0),
                       perturbation_high=1.0)
    with pytest.raises(ArgumentError):
        sample_poisson_box(dens, lam=500.0, seed=0)


# ---------------------------------------------------------------------------
# CSV round trip


def test_points_csv_roundtrip(tmp_path):
    dens = unit_density()
    cfg = sample_poisson_box(dens, lam=200.0, seed=33)
    path = tmp_path / "points.csv"
    write_points_csv(cfg, path)
    header = path.read_text().splitlines()[0]
    assert header == f"2,{cfg.n}"
    back = read_points_csv(path)
    assert back.d == cfg.d
    assert np.array_equal(back.points, cfg.points)


def test_points_csv_empty(tmp_path):
    dens = unit_density()
    cfg = sample_binomial_box(dens, n=0, seed=0)
    path = tmp_path / "empty.csv"
    write_points_csv(cfg, path)
    back = read_points_csv(path)
    assert back.n == 0 and back.d == 2
