"""Foundational types, validation, and per-step moment formulas.

The walk is a sum of N unit steps in the complex plane whose angles are
i.i.d. uniform on [-a, a] with 0 < a <= pi/2. Everything downstream
(exact two-step laws, support geometry, grid recursion, large-N
approximation) consumes the :class:`WalkConfig` defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class WalkConfig:
    """Number of steps and half-width of the step-angle interval."""

    n_steps: int
    max_angle: float

    def __post_init__(self):
        if not isinstance(self.n_steps, (int, np.integer)) or self.n_steps < 1:
            raise DomainError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        a = float(self.max_angle)
        if not math.isfinite(a) or a <= 0.0 or a > HALF_PI:
            raise DomainError(f"max_angle must lie in (0, pi/2], got {self.max_angle!r}")
        object.__setattr__(self, "n_steps", int(self.n_steps))
        object.__setattr__(self, "max_angle", a)


@dataclass(frozen=True)
class PolarPoint:
    """A point in the plane given by radius >= 0 and angle in [-pi, pi]."""

    radius: float
    angle: float

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError(f"radius must be nonnegative, got {self.radius!r}")


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of a single step (cos phi, sin phi)."""

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    cov_xy: float


def validate_config(n_steps: int, max_angle: float) -> WalkConfig:
    """Validate and build a :class:`WalkConfig`.

    Raises :class:`DomainError` for n_steps < 1 or max_angle outside
    (0, pi/2].
    """
    return WalkConfig(n_steps=n_steps, max_angle=max_angle)


def step_angle_pdf(theta, cfg: WalkConfig):
    """Density of a single step angle: 1/(2a) on [-a, a], 0 outside."""
    a = cfg.max_angle
    theta = np.asarray(theta, dtype=float)
    out = np.where(np.abs(theta) <= a, 1.0 / (2.0 * a), 0.0)
    return out if out.ndim else float(out)


def step_angle_cdf(theta, cfg: WalkConfig):
    """CDF of a single step angle, clamped to [0, 1] outside [-a, a]."""
    a = cfg.max_angle
    theta = np.asarray(theta, dtype=float)
    out = np.clip((theta + a) / (2.0 * a), 0.0, 1.0)
    return out if out.ndim else float(out)


def step_moments(max_angle: float) -> MomentSet:
    """Per-step moments of (cos phi, sin phi) for phi uniform on [-a, a].

    mean_x = sin(a)/a, var_x = (a + cos a sin a)/(2a) - mean_x^2,
    var_y = (a - cos a sin a)/(2a). By symmetry mean_y and cov_xy vanish;
    both are integrals of odd functions over [-a, a].
    """
    a = float(max_angle)
    if not 0.0 < a <= math.pi:
        raise DomainError(f"max_angle must lie in (0, pi], got {max_angle!r}")
    mean_x = math.sin(a) / a
    cs = math.cos(a) * math.sin(a)
    # for very small a the subtraction cancels almost completely
    # (var_x ~ a^4 / 180); clamp the rounding residue at zero
    var_x = max(0.0, (a + cs) / (2.0 * a) - mean_x**2)
    var_y = (a - cs) / (2.0 * a)
    # E[sin phi] and E[(cos phi - mu_x) sin phi] are integrals of odd
    # functions over [-a, a]; they are identically zero.
    mean_y = 0.0
    cov_xy = 0.0
    assert var_x >= 0.0 and var_y >= 0.0
    return MomentSet(mean_x=mean_x, mean_y=mean_y, var_x=var_x, var_y=var_y, cov_xy=cov_xy)


def clt_moments(cfg: WalkConfig) -> MomentSet:
    """Per-step moments for a validated configuration."""
    return step_moments(cfg.max_angle)
