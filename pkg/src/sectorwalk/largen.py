"""Large-N approximations of the radius, angle, and joint laws.

For many steps the endpoint (X, Y) is approximately bivariate normal
with mean (N mu_x, 0) and variances (N var_x, N var_y). The squared
radius is then a generalized chi-square variable with weights
(N var_x, N var_y), one degree of freedom each, and noncentralities
(N mu_x^2/var_x, 0); the angle follows from the normal-ratio
distribution of tan(theta) = Y/X for a positive-mean denominator.

The joint density may optionally be truncated to the exact reachable
set and renormalized by the in-support mass.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import genchi2, support
from .core import HALF_PI, MomentSet, WalkConfig, step_moments
from .errors import DomainError
from .genchi2 import GenChi2Params, normal_cdf, normal_pdf

_TRUNCATION_GRID = 512


@dataclass(frozen=True)
class LargeNModel:
    """Precomputed large-N model for a given number of steps and angle.

    With extended=True, half-widths up to pi are accepted (the formulas
    stay evaluable) but support truncation is unavailable because the
    exact reachable-set geometry is only defined for a <= pi/2.
    """

    n_steps: int
    max_angle: float
    extended: bool = False
    moments: MomentSet = field(init=False, repr=False)
    radius_law: GenChi2Params = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be positive, got {self.n_steps!r}")
        limit = math.pi if self.extended else HALF_PI
        if not 0.0 < self.max_angle <= limit + 1e-12:
            raise DomainError(
                f"max_angle must lie in (0, {limit!r}], got {self.max_angle!r}"
            )
        m = step_moments(self.max_angle)
        n = self.n_steps
        law = GenChi2Params(
            weights=(n * m.var_x, n * m.var_y),
            dofs=(1, 1),
            noncentralities=(n * m.mean_x**2 / m.var_x, 0.0),
        )
        object.__setattr__(self, "moments", m)
        object.__setattr__(self, "radius_law", law)

    @classmethod
    def from_config(cls, cfg: WalkConfig) -> "LargeNModel":
        return cls(n_steps=cfg.n_steps, max_angle=cfg.max_angle)

    def cdf_radius(self, r, abs_tol: float = 1e-8):
        """Approximate radius CDF: the squared-radius law at r^2."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0):
            raise DomainError("radius must be nonnegative")
        return genchi2.cdf(np.square(r_arr), self.radius_law, abs_tol=abs_tol)

    def pdf_radius(self, r, abs_tol: float = 1e-8):
        """Approximate radius density: 2 r times the squared-radius density."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0):
            raise DomainError("radius must be nonnegative")
        out = 2.0 * r_arr * genchi2.pdf(np.square(r_arr), self.radius_law, abs_tol=abs_tol)
        return out if np.ndim(r) else float(out)

    def _angle_argument(self, theta):
        theta = np.asarray(theta, dtype=float)
        if np.any(np.abs(theta) >= HALF_PI):
            raise DomainError("angle must satisfy |theta| < pi/2")
        m, n = self.moments, self.n_steps
        t = np.tan(theta)
        denom = np.sqrt(n * (t**2 * m.var_x + m.var_y))
        return t, n * m.mean_x * t / denom

    def cdf_angle(self, theta):
        """Approximate angle CDF from the normal-ratio law of tan(theta)."""
        _, arg = self._angle_argument(theta)
        out = normal_cdf(arg)
        return out if np.ndim(theta) else float(out)

    def pdf_angle(self, theta):
        """Derivative of the approximate angle CDF in theta."""
        m, n = self.moments, self.n_steps
        theta_arr = np.asarray(theta, dtype=float)
        t, arg = self._angle_argument(theta_arr)
        jac = (
            math.sqrt(n)
            * m.mean_x
            * m.var_y
            / ((t**2 * m.var_x + m.var_y) ** 1.5 * np.cos(theta_arr) ** 2)
        )
        out = jac * normal_pdf(arg)
        return out if np.ndim(theta) else float(out)

    def joint_pdf(self, r, theta, truncate: bool = False):
        """Bivariate-normal joint density of radius and angle.

        The endpoint components are N(N mu_x, N var_x) and (0, N var_y),
        so in polar form

            f(r, th) = r/(N sx sy) phi((r cos th - N mu_x)/(sqrt(N) sx))
                       phi(r sin th/(sqrt(N) sy)).

        This is the scaling consistent with the squared-radius law and
        with marginalization onto pdf_radius. With truncate=True, zero
        outside the reachable set and rescaled by the cached in-support
        mass.
        """
        r_arr = np.asarray(r, dtype=float)
        th_arr = np.asarray(theta, dtype=float)
        if np.any(r_arr < 0):
            raise DomainError("radius must be nonnegative")
        r_b, th_b = np.broadcast_arrays(r_arr, th_arr)
        m, n = self.moments, self.n_steps
        sx = math.sqrt(m.var_x)
        sy = math.sqrt(m.var_y)
        rt_n = math.sqrt(n)
        val = (
            r_b
            / (n * sx * sy)
            * normal_pdf((r_b * np.cos(th_b) - n * m.mean_x) / (rt_n * sx))
            * normal_pdf(r_b * np.sin(th_b) / (rt_n * sy))
        )
        if truncate:
            if self.extended and self.max_angle > HALF_PI:
                raise DomainError("support truncation requires max_angle <= pi/2")
            cfg = WalkConfig(n_steps=self.n_steps, max_angle=self.max_angle)
            inside = support.contains_batch(r_b, th_b, cfg)
            val = np.where(inside, val, 0.0) / in_support_mass(self.n_steps, self.max_angle)
        return val if val.ndim else float(val)


@functools.lru_cache(maxsize=64)
def in_support_mass(n_steps: int, max_angle: float) -> float:
    """Mass of the untruncated joint density inside the reachable set.

    Computed once per (N, a) by grid quadrature over the support region
    and cached.
    """
    model = LargeNModel(n_steps=n_steps, max_angle=max_angle)
    cfg = WalkConfig(n_steps=n_steps, max_angle=max_angle)
    r_lo = max(0.0, support.min_radius(cfg) - 1e-9)
    radii = np.linspace(r_lo, float(n_steps), _TRUNCATION_GRID)
    angles = np.linspace(-max_angle, max_angle, _TRUNCATION_GRID)
    vals = model.joint_pdf(radii[:, None], angles[None, :], truncate=False)
    inside = support.contains_batch(radii[:, None], angles[None, :], cfg)
    vals = np.where(inside, vals, 0.0)
    return float(np.trapezoid(np.trapezoid(vals, angles, axis=1), radii))
