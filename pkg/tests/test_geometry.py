import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psigrowth import (ArgumentError, BallRegion, BoxRegion, DomainError,
                       PointConfiguration, PsiSpec, SpaceTimePoint,
                       compute_exponents, downward_cone_contains, psi_eval,
                       psi_inverse, rescale, upward_cone_contains)


# ---------------------------------------------------------------------------
# profile construction and evaluation


def test_power_law_eval():
    psi = PsiSpec.power_law(2.0)
    assert psi_eval(psi, 3.0) == 9.0
    assert psi_eval(psi, 0.0) == 0.0


def test_spherical_cap_eval():
    psi = PsiSpec.spherical_cap()
    assert psi_eval(psi, 0.0) == 0.0
    assert psi_eval(psi, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert psi.alpha == 2.0
    with pytest.raises(DomainError):
        psi_eval(psi, math.pi + 0.01)


def test_negative_length_rejected():
    with pytest.raises(DomainError):
        psi_eval(PsiSpec.power_law(1.0), -0.1)


def test_tabulated_eval_interpolates():
    psi = PsiSpec.tabulated([0.0, 1.0, 2.0], [0.0, 0.5, 2.0], alpha_at_zero=1.0)
    assert psi_eval(psi, 1.0) == 0.5
    assert psi_eval(psi, 1.5) == pytest.approx(1.25)
    with pytest.raises(DomainError):
        psi_eval(psi, 2.5)


def test_tabulated_knot_validation():
    with pytest.raises(ArgumentError):
        PsiSpec.tabulated([0.5, 1.0], [0.0, 1.0], alpha_at_zero=1.0)  # no (0,0)
    with pytest.raises(ArgumentError):
        PsiSpec.tabulated([0.0, 1.0, 1.0], [0.0, 1.0, 2.0], alpha_at_zero=1.0)
    with pytest.raises(ArgumentError):
        PsiSpec.tabulated([0.0, 1.0, 2.0], [0.0, 1.0, 0.5], alpha_at_zero=1.0)


def test_power_inverse():
    assert psi_inverse(PsiSpec.power_law(2.0), 9.0) == pytest.approx(3.0)
    assert psi_inverse(PsiSpec.power_law(1.0), 0.7) == pytest.approx(0.7)


def test_cap_inverse_matches_bisection():
    # independent oracle: bisect 1 - cos(l) = u on [0, pi]
    psi = PsiSpec.spherical_cap()
    for u in np.linspace(0.0, 2.0, 21):
        lo, hi = 0.0, math.pi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if 1.0 - math.cos(mid) < u:
                lo = mid
            else:
                hi = mid
        # the cap profile is quadratically flat at l = pi, so bisection on
        # 1 - cos(l) can only localize the preimage of u = 2 to ~1e-8
        assert psi_inverse(psi, u) == pytest.approx(hi, abs=1e-7)
    assert psi_inverse(psi, 1.0) == pytest.approx(math.pi / 2, abs=1e-12)
    with pytest.raises(DomainError):
        psi_inverse(psi, 2.5)


def test_tabulated_inverse_takes_smallest_preimage():
    # a flat segment: every l in [1, 2] has psi(l) = 1; inverse must pick 1
    psi = PsiSpec.tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 1.0, 2.0],
                            alpha_at_zero=1.0)
    assert psi_inverse(psi, 1.0) == pytest.approx(1.0)
    assert psi_inverse(psi, 1.5) == pytest.approx(2.5)
    with pytest.raises(DomainError):
        psi_inverse(psi, 2.1)


@settings(max_examples=200, deadline=None)
@given(alpha=st.sampled_from([0.5, 1.0, 1.5, 2.0]),
       l=st.floats(min_value=0.0, max_value=50.0))
def test_power_roundtrip(alpha, l):
    psi = PsiSpec.power_law(alpha)
    assert psi_inverse(psi, psi_eval(psi, l)) == pytest.approx(l, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(l1=st.floats(min_value=0.0, max_value=3.0),
       l2=st.floats(min_value=0.0, max_value=3.0))
def test_psi_monotone(l1, l2):
    for psi in (PsiSpec.power_law(0.7), PsiSpec.spherical_cap(),
                PsiSpec.tabulated([0.0, 1.0, 4.0], [0.0, 0.3, 0.9],
                                  alpha_at_zero=1.0)):
        a, b = sorted((l1, l2))
        assert psi_eval(psi, a) <= psi_eval(psi, b) + 1e-15


# ---------------------------------------------------------------------------
# scaling exponents


def test_exponents_reference_values():
    e = compute_exponents(2, 1.0, 0.0)
    assert (e.tau, e.beta, e.gamma) == pytest.approx((0.5, 0.5, 0.5))
    assert compute_exponents(2, 2.0, 0.0).tau == pytest.approx(1.0 / 3.0)
    e3 = compute_exponents(3, 1.0, 0.0)
    assert (e3.tau, e3.beta, e3.gamma) == pytest.approx((2 / 3, 1 / 3, 1 / 3))


@settings(max_examples=200, deadline=None)
@given(d=st.integers(min_value=2, max_value=6),
       alpha=st.floats(min_value=0.1, max_value=4.0),
       delta=st.floats(min_value=0.0, max_value=3.0))
def test_exponent_identities(d, alpha, delta):
    e = compute_exponents(d, alpha, delta)
    assert abs(e.beta * (d - 1) + e.gamma * (1 + delta) - 1.0) < 1e-12
    assert abs(e.beta * alpha - e.gamma) < 1e-12
    assert abs(e.tau - (1 - e.gamma * (1 + delta))) < 1e-12
    assert abs(e.tau - (d - 1) / ((d - 1) + alpha * (1 + delta))) < 1e-12


def test_exponent_argument_errors():
    with pytest.raises(ArgumentError):
        compute_exponents(1, 1.0, 0.0)
    with pytest.raises(ArgumentError):
        compute_exponents(2, 0.0, 0.0)
    with pytest.raises(ArgumentError):
        compute_exponents(2, 1.0, -0.5)


# ---------------------------------------------------------------------------
# cones


def test_upward_cone_examples():
    psi = PsiSpec.power_law(1.0)
    assert upward_cone_contains(((0.0,), 0.0), ((0.5,), 0.5), psi)  # boundary
    assert not upward_cone_contains(((0.0,), 0.0), ((0.5,), 0.4), psi)
    for p in (psi, PsiSpec.spherical_cap()):
        assert upward_cone_contains(((0.0,), 1.0), ((0.0,), 2.0), p)


def test_downward_cone_examples():
    psi = PsiSpec.power_law(1.0)
    assert downward_cone_contains(((0.5,), 1.0), ((0.0,), 0.0), psi)
    assert not downward_cone_contains(((0.0,), 0.2), ((1.0,), 0.0), psi)


def test_cone_domain_error_beyond_profile_reach():
    psi = PsiSpec.spherical_cap()
    with pytest.raises(DomainError):
        upward_cone_contains(((0.0,), 0.0), ((4.0,), 1.0), psi)


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_cone_duality(data):
    psi = data.draw(st.sampled_from([
        PsiSpec.power_law(0.5), PsiSpec.power_law(1.0), PsiSpec.power_law(2.0),
        PsiSpec.tabulated([0.0, 1.0, 5.0], [0.0, 0.8, 3.0], alpha_at_zero=1.0),
    ]))
    coords = st.floats(min_value=-2.0, max_value=2.0)
    times = st.floats(min_value=0.0, max_value=3.0)
    u = ((data.draw(coords), data.draw(coords)), data.draw(times))
    z = ((data.draw(coords), data.draw(coords)), data.draw(times))
    assert upward_cone_contains(z, u, psi) == downward_cone_contains(u, z, psi)


def test_space_time_point_validation():
    p = SpaceTimePoint(spatial=(0.5, 0.25), time=1.0)
    assert p.spatial == (0.5, 0.25)
    with pytest.raises(ArgumentError):
        SpaceTimePoint(spatial=(0.0,), time=-0.5)


# ---------------------------------------------------------------------------
# configurations and rescaling


def _config(points, low=(-5.0,), high=(5.0,)):
    return PointConfiguration(d=2, points=np.asarray(points, dtype=float),
                              region=BoxRegion(low=low, high=high))


def test_configuration_views():
    cfg = _config([[0.0, 1.0], [0.5, 2.0]])
    assert cfg.n == 2
    assert np.allclose(cfg.spatial[:, 0], [0.0, 0.5])
    assert np.allclose(cfg.times, [1.0, 2.0])


def test_configuration_duplicate_detection():
    cfg = _config([[0.1, 0.2], [0.1, 0.2]])
    with pytest.raises(ArgumentError):
        cfg.validate()


def test_rescale_identity_and_example():
    exps = compute_exponents(2, 1.0, 0.0)
    cfg = _config([[1.0, 0.5]])
    same = rescale(cfg, (0.0,), 1.0, exps)
    assert np.allclose(same.points, cfg.points)
    scaled = rescale(cfg, (0.0,), 4.0, exps)
    assert np.allclose(scaled.points, [[2.0, 1.0]])


def test_rescale_region_and_errors():
    exps = compute_exponents(2, 1.0, 0.0)
    cfg = _config([[1.0, 0.5]], low=(0.0,), high=(1.0,))
    out = rescale(cfg, (0.0,), 4.0, exps)
    assert out.region.low == pytest.approx((0.0,))
    assert out.region.high == pytest.approx((2.0,))
    with pytest.raises(ArgumentError):
        rescale(cfg, (0.0,), -1.0, exps)
    with pytest.raises(ArgumentError):
        rescale(cfg, (0.0, 0.0), 2.0, exps)
    ball = PointConfiguration(d=2, points=np.array([[0.1, 0.2]]),
                              region=BallRegion(d=2), kind="ball")
    with pytest.raises(ArgumentError):
        rescale(ball, (0.0,), 2.0, exps)


@settings(max_examples=100, deadline=None)
@given(lam=st.floats(min_value=0.1, max_value=100.0),
       alpha=st.sampled_from([0.5, 1.0, 2.0]),
       dist=st.floats(min_value=0.0, max_value=5.0),
       dt=st.floats(min_value=-3.0, max_value=3.0))
def test_power_law_cone_membership_scale_invariant(lam, alpha, dist, dt):
    # lambda^gamma * (lambda^-beta * l)^alpha = l^alpha: membership of a
    # rescaled pair never changes for power-law profiles
    psi = PsiSpec.power_law(alpha)
    exps = compute_exponents(2, alpha, 0.0)
    h_apex = 5.0
    apex = ((0.0,), h_apex)
    query = ((dist,), h_apex + dt)
    if query[1] < 0 or abs(dt - dist ** alpha) < 1e-9:
        return  # exactly-on-boundary membership is ulp-sensitive under rescaling
    before = upward_cone_contains(apex, query, psi)
    s, g = lam ** exps.beta, lam ** exps.gamma
    after = upward_cone_contains(((0.0,), g * h_apex), ((s * dist,), g * query[1]), psi)
    assert before == after
