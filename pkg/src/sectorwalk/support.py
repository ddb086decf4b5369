"""Exact geometry of the set of reachable endpoints.

After N unit steps with angles in [-a, a], the reachable set is bounded
by an outer circular arc of radius N and an inner chain of N unit-radius
arcs whose centers are k e^{ja} + (N-1-k) e^{-ja}, k = 0..N-1. This
module provides the boundary curves, the minimum radius, the threshold
below which the inner-boundary radius is a single-valued function of the
angle, and a point-membership test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import PolarPoint, WalkConfig
from .errors import DomainError

# tolerance used when matching arc-local angles against [-a, a]
_ANGLE_EPS = 1e-12


@dataclass(frozen=True)
class BoundarySample:
    """One point of the inner boundary with its parametrization data."""

    t: float
    point: PolarPoint
    segment_index: int
    local_angle: float


@dataclass(frozen=True)
class SupportBoundary:
    """Boundary curves of the reachable set for a given configuration."""

    cfg: WalkConfig
    inner_centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, a = self.cfg.n_steps, self.cfg.max_angle
        k = np.arange(n)
        centers = k * np.exp(1j * a) + (n - 1 - k) * np.exp(-1j * a)
        centers.setflags(write=False)
        object.__setattr__(self, "inner_centers", centers)


def min_radius(cfg: WalkConfig) -> float:
    """Smallest attainable radius after N steps.

    sqrt(ceil(N/2)^2 + floor(N/2)^2 + 2 floor(N/2) ceil(N/2) cos 2a);
    reduces to N cos a for even N.
    """
    n, a = cfg.n_steps, cfg.max_angle
    hi = (n + 1) // 2
    lo = n // 2
    return math.sqrt(hi * hi + lo * lo + 2.0 * lo * hi * math.cos(2.0 * a))


def uniqueness_threshold(n_steps: int) -> float:
    """Largest a for which the inner radius is a function of the angle.

    Equals arccos(-1/(N-1))/2; strictly decreasing in N with limit pi/4.
    """
    if n_steps < 2:
        raise DomainError("uniqueness threshold requires at least two steps")
    return 0.5 * math.acos(-1.0 / (n_steps - 1))


def is_radius_function_of_angle(cfg: WalkConfig) -> bool:
    """True iff every angle meets the inner boundary in a single radius."""
    if cfg.n_steps == 1:
        return True
    return cfg.max_angle <= uniqueness_threshold(cfg.n_steps) + _ANGLE_EPS


def outer_boundary(phi: float, cfg: WalkConfig) -> PolarPoint:
    """Point of the outer arc: radius N at angle phi, |phi| <= a."""
    if abs(phi) > cfg.max_angle + _ANGLE_EPS:
        raise DomainError(f"|phi| must not exceed max_angle, got {phi!r}")
    return PolarPoint(radius=float(cfg.n_steps), angle=float(phi))


def _segment_and_angle(t: float, cfg: WalkConfig) -> tuple[int, float]:
    n, a = cfg.n_steps, cfg.max_angle
    k = math.ceil(n * t - 1.0)
    k = min(max(k, 0), n - 1)  # junctions belong to both adjacent arcs
    phi = a * (2.0 * (n * t - k) - 1.0)
    phi = min(max(phi, -a), a)
    return k, phi


def inner_boundary(t: float, cfg: WalkConfig) -> BoundarySample:
    """Point of the inner arc chain for parameter t in [0, 1].

    The chain runs from the corner at angle -a (segment 0, local angle -a)
    to the corner at angle +a (segment N-1, local angle +a).
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"parameter t must lie in [0, 1], got {t!r}")
    n, a = cfg.n_steps, cfg.max_angle
    k, phi = _segment_and_angle(t, cfg)
    y = (2 * k - (n - 1)) * math.sin(a) + math.sin(phi)
    x = (n - 1) * math.cos(a) + math.cos(phi)
    radius = math.hypot(x, y)
    angle = math.atan2(y, x)
    return BoundarySample(
        t=float(t),
        point=PolarPoint(radius=radius, angle=angle),
        segment_index=k,
        local_angle=phi,
    )


def inner_boundary_curve(cfg: WalkConfig, n_points: int = 1024):
    """Sample the inner boundary densely; returns (t, radius, angle) arrays."""
    ts = np.linspace(0.0, 1.0, n_points)
    n, a = cfg.n_steps, cfg.max_angle
    k = np.ceil(n * ts - 1.0).astype(int)
    np.clip(k, 0, n - 1, out=k)
    phi = np.clip(a * (2.0 * (n * ts - k) - 1.0), -a, a)
    y = (2 * k - (n - 1)) * np.sin(a) + np.sin(phi)
    x = (n - 1) * np.cos(a) + np.cos(phi)
    return ts, np.hypot(x, y), np.arctan2(y, x)


def _ray_crossings(theta: np.ndarray, cfg: WalkConfig):
    """Radii at which rays of the given angles cross the inner chain.

    For each segment the ray s e^{j theta} meets the unit circle around
    the segment center where s^2 - 2 b s + |c|^2 - 1 = 0 with
    b = Re(c e^{-j theta}); a root counts only if the arc-local angle of
    the crossing lies in [-a, a]. Returns a (n_theta, 2 N) array padded
    with NaN, plus a parallel boolean array marking tangential touches.
    """
    n, a = cfg.n_steps, cfg.max_angle
    centers = SupportBoundary(cfg).inner_centers
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    unit = np.exp(1j * theta)[:, None]
    b = (unit.conj() * centers[None, :]).real
    disc = b * b - (np.abs(centers[None, :]) ** 2 - 1.0)
    sq = np.sqrt(np.maximum(disc, 0.0))
    roots = np.stack([b - sq, b + sq], axis=-1)  # (nt, N, 2)
    valid = (disc[..., None] >= -1e-12) & (roots > 1e-12)
    # arc-local angle of each candidate crossing
    pts = roots * unit[..., None] - centers[None, :, None]
    local = np.angle(pts)
    valid &= np.abs(local) <= a + 1e-9
    tangent = valid & (disc[..., None] < 1e-10)
    out = np.where(valid, roots, np.nan).reshape(theta.size, -1)
    touch = tangent.reshape(theta.size, -1)
    return out, touch


def contains_batch(radii, angles, cfg: WalkConfig, tol: float = 0.0) -> np.ndarray:
    """Vectorized membership test for polar points against the closed region.

    Uses exact ray-arc intersections: a point is a member if it is within
    tol of a boundary crossing along its ray, or if an odd number of
    boundary crossings (inner chain plus outer arc) lies beyond it.
    """
    if tol < 0:
        raise DomainError("tolerance must be nonnegative")
    n, a = cfg.n_steps, cfg.max_angle
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    radii, angles = np.broadcast_arrays(radii, angles)
    shape = radii.shape
    r = radii.ravel()
    th = angles.ravel()

    ok_angle = np.abs(th) <= a + tol
    ok_radius = (r >= -tol) & (r <= n + tol)
    result = np.zeros(r.size, dtype=bool)
    active = ok_angle & ok_radius
    if n == 1:
        result[active] = np.abs(r[active] - 1.0) <= tol
        return result.reshape(shape)
    if active.any():
        th_act = np.clip(th[active], -a, a)
        crossings, touch = _ray_crossings(th_act, cfg)
        r_act = r[active][:, None]
        with np.errstate(invalid="ignore"):
            near = np.any(np.abs(crossings - r_act) <= tol + 1e-12, axis=1)
            # tangential touches do not flip parity; junction points are
            # reported by both adjacent arcs and must be counted once
            cr = np.sort(np.where(touch, np.nan, crossings), axis=1)
            if cr.shape[1] > 1:
                dup = np.diff(cr, axis=1) < 1e-9
                cr[:, 1:][dup] = np.nan
            inner_beyond = np.sum(cr > r_act + tol, axis=1)
        outer_beyond = (n - r[active]) > tol
        count = inner_beyond + outer_beyond.astype(int)
        on_outer = np.abs(r[active] - n) <= tol
        result[active] = (count % 2 == 1) | near | on_outer
    return result.reshape(shape)


def contains(point: PolarPoint, cfg: WalkConfig, tol: float = 0.0) -> bool:
    """Membership of a single polar point in the closed reachable set."""
    return bool(contains_batch(point.radius, point.angle, cfg, tol)[0])


def inner_radius_at(theta, cfg: WalkConfig) -> np.ndarray:
    """Radius of the innermost boundary crossing along each ray.

    In the single-valued regime this is the inner-boundary radius as a
    function of the angle; NaN outside [-a, a].
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.full(theta.shape, np.nan)
    ok = np.abs(theta) <= cfg.max_angle + _ANGLE_EPS
    if cfg.n_steps == 1:
        out[ok] = 1.0
        return out
    if ok.any():
        crossings, _ = _ray_crossings(np.clip(theta[ok], -cfg.max_angle, cfg.max_angle), cfg)
        with np.errstate(all="ignore"):
            out[ok] = np.nanmin(crossings, axis=1)
    return out
