import math

import numpy as np
import pytest

from sectorwalk import WalkConfig, sample_walk
from sectorwalk.core import PolarPoint
from sectorwalk.errors import DomainError
from sectorwalk.support import (
    SupportBoundary,
    contains,
    contains_batch,
    inner_boundary,
    inner_boundary_curve,
    inner_radius_at,
    is_radius_function_of_angle,
    min_radius,
    outer_boundary,
    uniqueness_threshold,
)


def test_min_radius_known_values():
    assert min_radius(WalkConfig(3, 0.85)) == pytest.approx(2.118, abs=1e-3)
    assert min_radius(WalkConfig(4, 1.4)) == pytest.approx(0.680, abs=1e-3)
    # even N reduces to N cos a
    for n in (2, 4, 10):
        for a in (0.3, 1.0, math.pi / 2):
            assert min_radius(WalkConfig(n, a)) == pytest.approx(n * math.cos(a), abs=1e-12)
    assert min_radius(WalkConfig(1, 0.7)) == pytest.approx(1.0, abs=1e-12)


def test_uniqueness_threshold():
    assert uniqueness_threshold(4) == pytest.approx(0.9553, abs=1e-3)
    assert uniqueness_threshold(2) == pytest.approx(math.pi / 2, abs=1e-12)
    assert uniqueness_threshold(10**6) == pytest.approx(math.pi / 4, abs=1e-5)
    vals = [uniqueness_threshold(n) for n in range(2, 40)]
    assert np.all(np.diff(vals) < 0)
    with pytest.raises(DomainError):
        uniqueness_threshold(1)


def test_is_radius_function_of_angle():
    assert is_radius_function_of_angle(WalkConfig(4, 0.9))
    assert not is_radius_function_of_angle(WalkConfig(4, 1.0))
    assert is_radius_function_of_angle(WalkConfig(1, 1.5))


def test_inner_centers():
    b = SupportBoundary(WalkConfig(3, 0.5))
    k = np.arange(3)
    expect = k * np.exp(1j * 0.5) + (2 - k) * np.exp(-1j * 0.5)
    assert np.allclose(b.inner_centers, expect)


def test_outer_boundary():
    p = outer_boundary(0.3, WalkConfig(5, 0.5))
    assert p.radius == 5.0 and p.angle == 0.3
    with pytest.raises(DomainError):
        outer_boundary(0.6, WalkConfig(5, 0.5))


@pytest.mark.parametrize("n,a", [(2, 0.5), (3, 0.85), (4, 1.4), (5, 1.0), (8, math.pi / 2)])
def test_inner_boundary_curve_properties(n, a):
    cfg = WalkConfig(n, a)
    # point count chosen so arc junctions (t = k/N) land on sample points
    ts, radii, angles = inner_boundary_curve(cfg, 1200 * n + 1)
    # endpoints are the corners where the chain meets the outer arc
    assert radii[0] == pytest.approx(float(n), abs=1e-9)
    assert angles[0] == pytest.approx(-a, abs=1e-9)
    assert radii[-1] == pytest.approx(float(n), abs=1e-9)
    assert angles[-1] == pytest.approx(a, abs=1e-9)
    # the minimum over the chain equals the closed-form minimum radius
    assert radii.min() == pytest.approx(min_radius(cfg), abs=1e-6)
    # every boundary point is a member of the closed region
    assert contains_batch(radii, angles, cfg, tol=1e-9).all()
    # curve is symmetric under t -> 1 - t
    assert np.allclose(radii, radii[::-1], atol=1e-9)
    assert np.allclose(angles, -angles[::-1], atol=1e-9)


def test_inner_boundary_scalar_matches_curve():
    cfg = WalkConfig(4, 0.9)
    ts, radii, angles = inner_boundary_curve(cfg, 101)
    for i in (0, 13, 50, 77, 100):
        s = inner_boundary(ts[i], cfg)
        assert s.point.radius == pytest.approx(radii[i], abs=1e-12)
        assert s.point.angle == pytest.approx(angles[i], abs=1e-12)
        assert abs(s.local_angle) <= cfg.max_angle + 1e-12
    with pytest.raises(DomainError):
        inner_boundary(1.5, cfg)


def test_contains_examples():
    cfg = WalkConfig(3, 0.85)
    rmin = min_radius(cfg)
    assert contains(PolarPoint(radius=3.0, angle=0.0), cfg)
    # for odd N the minimum-radius point sits off the symmetry axis
    _, radii, angles = inner_boundary_curve(cfg, 3601)
    i = int(np.argmin(radii))
    assert contains(PolarPoint(radius=radii[i], angle=angles[i]), cfg, tol=1e-9)
    assert not contains(PolarPoint(radius=rmin - 0.05, angle=0.0), cfg)
    assert not contains(PolarPoint(radius=3.0 + 1e-6, angle=0.0), cfg)
    assert not contains(PolarPoint(radius=2.9, angle=0.9), cfg)
    assert contains(PolarPoint(radius=2.9, angle=0.1), cfg)


def test_contains_single_step():
    cfg = WalkConfig(1, 0.5)
    assert contains(PolarPoint(radius=1.0, angle=0.2), cfg, tol=1e-9)
    assert not contains(PolarPoint(radius=0.9, angle=0.0), cfg)
    assert not contains(PolarPoint(radius=1.0, angle=0.6), cfg)


def test_contains_non_unique_regime():
    # a beyond the uniqueness threshold: rays can cross the chain several times
    cfg = WalkConfig(4, 1.4)
    rmin = min_radius(cfg)
    assert contains_batch(rmin + 1e-6, 0.0, cfg, tol=1e-9).all()
    assert contains(PolarPoint(radius=4.0, angle=0.0), cfg)
    assert not contains(PolarPoint(radius=rmin - 1e-3, angle=0.0), cfg)


@pytest.mark.parametrize(
    "n,a",
    [(1, 0.5), (2, 0.5), (2, math.pi / 2), (3, 0.5), (3, 0.85), (4, 1.4), (5, 1.2), (30, 0.5)],
)
def test_all_mc_endpoints_inside(n, a):
    cfg = WalkConfig(n, a)
    batch = sample_walk(cfg, 20_000, seed=11)
    assert contains_batch(batch.radii, batch.angles, cfg, tol=1e-9).all()


def test_inner_radius_at():
    cfg = WalkConfig(4, 0.9)  # single-valued regime
    th = np.linspace(-0.9, 0.9, 41)
    r_in = inner_radius_at(th, cfg)
    assert np.all(np.isfinite(r_in))
    assert r_in.min() == pytest.approx(min_radius(cfg), abs=1e-6)
    # matches the parametric curve by lookup
    ts, radii, angles = inner_boundary_curve(cfg, 4001)
    order = np.argsort(angles)
    assert np.allclose(r_in, np.interp(th, angles[order], radii[order]), atol=2e-3)
    assert np.isnan(inner_radius_at(1.0, cfg)).all()


def test_contains_rejects_negative_tol():
    with pytest.raises(DomainError):
        contains_batch(1.0, 0.0, WalkConfig(3, 0.5), tol=-1.0)
