"""Closed-form distributions for the two-step walk.

With two unit steps whose angles are uniform on [-a, a], the resulting
angle is (phi_1 + phi_2)/2 and the resulting radius is
sqrt(2 (1 + cos(phi_2 - phi_1))). Both marginals, the conditional radius
law given the angle, and the joint density admit closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HALF_PI, WalkConfig
from .errors import DomainError


def _check_radius(r):
    if np.any(np.asarray(r) < 0):
        raise DomainError("radius must be nonnegative")


@dataclass(frozen=True)
class ExactTwoStep:
    """Exact two-step laws for a given half-width a of the step-angle law."""

    max_angle: float

    def __post_init__(self):
        if not (0.0 < self.max_angle <= HALF_PI):
            raise DomainError(f"max_angle must lie in (0, pi/2], got {self.max_angle!r}")

    @classmethod
    def from_config(cls, cfg: WalkConfig) -> "ExactTwoStep":
        if cfg.n_steps != 2:
            raise DomainError(f"two-step law requires n_steps=2, got {cfg.n_steps}")
        return cls(max_angle=cfg.max_angle)

    @property
    def min_radius(self) -> float:
        return 2.0 * math.cos(self.max_angle)

    def cdf_radius(self, r):
        """CDF of the radius: (a - arccos(r/2))^2 / a^2 on [2 cos a, 2]."""
        _check_radius(r)
        a = self.max_angle
        r = np.asarray(r, dtype=float)
        rc = np.clip(r, self.min_radius, 2.0)
        out = (a - np.arccos(rc / 2.0)) ** 2 / a**2
        return out if out.ndim else float(out)

    def pdf_radius(self, r):
        """Density of the radius; diverges (integrably) as r -> 2."""
        _check_radius(r)
        a = self.max_angle
        r = np.asarray(r, dtype=float)
        inside = (r > self.min_radius) & (r < 2.0)
        rc = np.where(inside, r, 1.0)
        with np.errstate(divide="ignore"):
            val = 2.0 * (a - np.arccos(rc / 2.0)) / (a**2 * np.sqrt(4.0 - rc**2))
        out = np.where(inside, val, 0.0)
        return out if out.ndim else float(out)

    def cdf_angle(self, theta):
        """CDF of the angle: (a^2 + 2 a t - sign(t) t^2) / (2 a^2) on [-a, a]."""
        a = self.max_angle
        theta = np.asarray(theta, dtype=float)
        t = np.clip(theta, -a, a)
        out = np.clip((a**2 + 2.0 * a * t - np.sign(t) * t**2) / (2.0 * a**2), 0.0, 1.0)
        return out if out.ndim else float(out)

    def pdf_angle(self, theta):
        """Triangular density (1/a)(1 - |t|/a) on [-a, a]."""
        a = self.max_angle
        theta = np.asarray(theta, dtype=float)
        out = np.where(np.abs(theta) <= a, (1.0 - np.abs(theta) / a) / a, 0.0)
        return out if out.ndim else float(out)

    def conditional_min_radius(self, theta):
        """Smallest radius attainable given the resulting angle theta."""
        a = self.max_angle
        theta = np.asarray(theta, dtype=float)
        out = 2.0 * np.cos(a - np.abs(theta))
        return out if out.ndim else float(out)

    def conditional_cdf_radius_given_angle(self, r, theta):
        """CDF of the radius given the angle: 1 - arccos(r/2)/(a - |theta|).

        Valid for |theta| < a; the conditional support is
        [2 cos(a - |theta|), 2]. By symmetry the angle enters through its
        absolute value.
        """
        _check_radius(r)
        a = self.max_angle
        theta = np.asarray(theta, dtype=float)
        if np.any(np.abs(theta) >= a):
            raise DomainError("conditional law requires |theta| < max_angle")
        r = np.asarray(r, dtype=float)
        r_lo = 2.0 * np.cos(a - np.abs(theta))
        rc = np.clip(r, r_lo, 2.0)
        out = 1.0 - np.arccos(rc / 2.0) / (a - np.abs(theta))
        out = np.clip(out, 0.0, 1.0)
        return out if out.ndim else float(out)

    def joint_pdf(self, r, theta):
        """Joint density 1/(a^2 sqrt(4 - r^2)) on 2 cos(a - |theta|) <= r < 2.

        Returns 0 at exactly r = 2 (measure-zero boundary); the density
        diverges as r -> 2 from inside the support.
        """
        a = self.max_angle
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        r, theta = np.broadcast_arrays(r, theta)
        inside = (
            (np.abs(theta) <= a)
            & (r >= 2.0 * np.cos(a - np.abs(theta)))
            & (r < 2.0)
            & (r >= 0.0)
        )
        rc = np.where(inside, r, 0.0)
        val = 1.0 / (a**2 * np.sqrt(4.0 - rc**2))
        out = np.where(inside, val, 0.0)
        return out if out.ndim else float(out)
