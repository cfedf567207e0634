import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localization.operators import LocalizationPoint, build_bundle
from localization.uncertainty import (
    CORNERS,
    CornerBounds,
    GammaBound,
    SupportOracle,
    corner_bounds,
    gamma,
    gamma_curve,
    in_W_gamma,
    in_W_gamma_many,
    sample_admissible,
    support_line,
)
from utils import telemetry
from utils.errors import NoUncertaintyError, ValidationError
from tests.helpers import PAIR_KINDS, random_problem_pair


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.0, max_value=0.999))
def test_gamma_endpoints_and_monotonicity(s1):
    b = GammaBound(s1, (1, 1))
    assert gamma(b, s1) == pytest.approx(1.0, abs=1e-12)
    assert gamma(b, 1.0) == pytest.approx(s1, abs=1e-12)
    ts = np.linspace(s1, 1.0, 33)
    vals = np.array([gamma(b, t) for t in ts])
    assert np.all(np.diff(vals) <= 1e-12)


def test_gamma_rejects_vacuous_and_out_of_range():
    with pytest.raises(NoUncertaintyError):
        gamma(GammaBound(1.0, (1, 1)), 1.0)
    with pytest.raises(ValidationError):
        gamma(GammaBound(0.5, (1, 1)), 0.2)
    assert gamma_curve(GammaBound(1.0 - 1e-11, (0, 0))).shape == (0, 2)


def test_gamma_curve_lands_in_its_corner():
    curve = gamma_curve(GammaBound(0.3, (0, 1)), num=17)
    assert curve.shape == (17, 2)
    # local a = 1 - m runs from sigma1 to 1, so m runs from 0.7 down to 0
    assert curve[0].tolist() == pytest.approx([0.7, 1.0])
    assert curve[-1].tolist() == pytest.approx([0.0, 0.3])


def test_corner_membership_by_hand():
    bounds = {k: GammaBound(1.0, corner) for k, (corner, _, _) in CORNERS.items()}
    bounds["fg"] = GammaBound(0.5, (1, 1))
    cb = CornerBounds(bounds)
    far = in_W_gamma(cb, (0.9, 0.9))
    assert not far.ok and far.failed == ["fg"] and far.active["fg"]
    assert in_W_gamma(cb, LocalizationPoint(0.9, 0.7)).ok
    inactive = in_W_gamma(cb, (0.5, 0.5))
    assert inactive.ok and not inactive.active["fg"]
    grid = np.array([[m, c] for m in np.linspace(0, 1, 21) for c in np.linspace(0, 1, 21)])
    many = in_W_gamma_many(cb, grid)
    assert many.tolist() == [in_W_gamma(cb, p).ok for p in grid]


def test_counterexample_corners(bipartite, k4):
    assert corner_bounds(bipartite.decomp, bipartite.pair).all_vacuous
    cb = corner_bounds(k4.decomp, k4.pair)
    assert cb["fg"].vacuous
    assert cb["fg"].sigma1 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kind", PAIR_KINDS)
def test_random_signals_respect_corner_bounds(kind):
    _, decomp, pair = random_problem_pair(10, 21, kind)
    b = build_bundle(decomp, pair)
    cb = corner_bounds(decomp, pair)
    for _, bound in cb.items():
        assert 0.0 <= bound.sigma1 <= 1.0 + 1e-12
    pts = sample_admissible(b, 5000, seed=1)
    assert np.all(in_W_gamma_many(cb, pts))
    assert np.all((pts >= -1e-12) & (pts <= 1 + 1e-12))


@pytest.mark.parametrize("theta", [0.0, 0.7, math.pi / 2, 2.0, math.pi, 4.0, 5.5])
def test_support_line_touches_and_bounds_samples(theta):
    _, decomp, pair = random_problem_pair(9, 8, "distance-projection")
    b = build_bundle(decomp, pair)
    ln = support_line(b, theta)
    cos, sin = ln.normal
    assert cos * ln.point.m + sin * ln.point.c == pytest.approx(ln.rho1, abs=1e-9)
    pts = sample_admissible(b, 2000, seed=3)
    assert np.all(cos * pts[:, 0] + sin * pts[:, 1] <= ln.rho1 + 1e-9)


def test_repeated_top_eigenvalue_picks_segment_end(bipartite):
    b = build_bundle(bipartite.decomp, bipartite.pair)
    # theta = 0: support segment m = 1, clockwise end is (1, 0)
    assert support_line(b, 0.0).point.as_tuple() == pytest.approx((1.0, 0.0), abs=1e-12)
    # theta = pi/2: support segment c = 1, clockwise end is (1, 1)
    assert support_line(b, math.pi / 2).point.as_tuple() == pytest.approx((1.0, 1.0), abs=1e-12)


def test_oracle_caches_by_angle():
    _, decomp, pair = random_problem_pair(10, 3, "distance-laplace")
    b = build_bundle(decomp, pair)
    oracle = SupportOracle(b, maxsize=8)
    first = oracle.line(1.0)
    again = oracle.line(1.0)
    assert again is first
    assert telemetry.count(telemetry.SUPPORT_MISSES) == 1
    assert telemetry.count(telemetry.SUPPORT_HITS) == 1
    angles = [0.1 * k for k in range(12)]
    serial = SupportOracle(b).lines(angles)
    threaded = SupportOracle(b).lines(angles, workers=4)
    assert [ln.point.as_tuple() for ln in serial] == [ln.point.as_tuple() for ln in threaded]
