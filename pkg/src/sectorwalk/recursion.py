"""Grid-based recursion for the joint law at moderate step counts.

Starting from the analytic one-step law (a singular line density, kept
symbolic rather than gridded), each propagation step convolves the
previous joint density with one more uniform-angle unit step:

    f_N(r, theta) = r/(2a) int_{-a}^{a} f_{N-1}(r', theta') / r' dphi

evaluated on a uniform polar grid. The radius CDF and the linearized
angle CDF/PDF are computed by quadrature against a previous-step grid
without forming the N-step grid first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import backends, support
from .core import WalkConfig, step_angle_cdf, step_angle_pdf
from .errors import DomainError, GridError

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 400
DEFAULT_PHI_NODES = 64
DEFAULT_GRID_TOL = 5e-3

_QUERY_CHUNK = 32


@dataclass(frozen=True)
class OneStepSource:
    """Analytic one-step law: radius exactly 1, angle uniform on [-a, a].

    The one-step joint density is singular (a line on the unit circle),
    so it is kept in this symbolic form; the first propagation to two
    steps integrates against the uniform angle law in closed form.
    """

    cfg: WalkConfig

    def __post_init__(self):
        if self.cfg.n_steps != 1:
            raise GridError(f"one-step source requires n_steps=1, got {self.cfg.n_steps}")


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    h = grid[1] - grid[0]
    w = np.full(grid.size, h)
    w[0] = w[-1] = 0.5 * h
    return w


def grid_mass(radii, angles, density) -> float:
    """Trapezoidal double integral of a density matrix over its grid."""
    wr = _trapezoid_weights(np.asarray(radii, dtype=float))
    wt = _trapezoid_weights(np.asarray(angles, dtype=float))
    return float(wr @ np.asarray(density, dtype=float) @ wt)


def _check_uniform(grid: np.ndarray, name: str):
    if grid.ndim != 1 or grid.size < 2:
        raise GridError(f"{name} must be a 1-D grid with at least two points")
    d = np.diff(grid)
    if not np.all(d > 0):
        raise GridError(f"{name} must be strictly increasing")
    if not np.allclose(d, d[0], rtol=1e-9, atol=1e-12):
        raise GridError(f"{name} must be uniformly spaced")


@dataclass(frozen=True)
class PolarGridDistribution:
    """Joint density of radius and angle tabulated on a uniform polar grid."""

    cfg: WalkConfig
    radii: np.ndarray
    angles: np.ndarray
    density: np.ndarray
    grid_tol: float = DEFAULT_GRID_TOL
    raw_mass: float = 1.0

    def __post_init__(self):
        radii = np.ascontiguousarray(self.radii, dtype=float)
        angles = np.ascontiguousarray(self.angles, dtype=float)
        density = np.ascontiguousarray(self.density, dtype=float)
        _check_uniform(radii, "radii")
        _check_uniform(angles, "angles")
        if density.shape != (radii.size, angles.size):
            raise GridError(
                f"density shape {density.shape} does not match grids "
                f"({radii.size}, {angles.size})"
            )
        if np.any(density < 0):
            raise GridError("density must be nonnegative")
        mass = grid_mass(radii, angles, density)
        if not (1.0 - self.grid_tol <= mass <= 1.0 + self.grid_tol):
            raise GridError(f"grid mass {mass:.6f} outside 1 +/- {self.grid_tol}")
        for name, arr in (("radii", radii), ("angles", angles), ("density", density)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def mass(self) -> float:
        return grid_mass(self.radii, self.angles, self.density)


def default_grid_axes(cfg: WalkConfig, n_radii: int = DEFAULT_GRID_SIZE, n_angles: int = DEFAULT_GRID_SIZE):
    """Uniform grid axes covering the reachable set, with a small inner pad."""
    n, a = cfg.n_steps, cfg.max_angle
    r_min = support.min_radius(cfg)
    lo = max(0.0, r_min - 0.02 * (n - r_min))
    radii = np.linspace(lo, float(n), n_radii)
    angles = np.linspace(-a, a, n_angles)
    return radii, angles


def seed_two_step(
    cfg: WalkConfig,
    n_radii: int = DEFAULT_GRID_SIZE,
    n_angles: int = DEFAULT_GRID_SIZE,
    grid_tol: float = DEFAULT_GRID_TOL,
) -> PolarGridDistribution:
    """Two-step grid from propagating the one-step source analytically.

    Summing two unit steps with angles phi_{1,2} = theta -/+ delta,
    delta = arccos(r/2), and change of variables with Jacobian
    sqrt(4 - r^2)/2 gives density 1/(a^2 sqrt(4 - r^2)) wherever both
    step angles fit, i.e. |theta| + arccos(r/2) <= a. The outer-rim grid
    node stores the analytic average of the divergent edge cell so the
    tabulated mass matches the true mass.
    """
    if cfg.n_steps != 2:
        raise GridError(f"two-step seed requires n_steps=2, got {cfg.n_steps}")
    a = cfg.max_angle
    radii, angles = default_grid_axes(cfg, n_radii, n_angles)
    r = radii[:, None]
    th = angles[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        delta = np.arccos(np.clip(r / 2.0, -1.0, 1.0))
        inside = (np.abs(th) + delta <= a) & (r < 2.0)
        density = np.where(inside, 1.0 / (a**2 * np.sqrt(np.maximum(4.0 - r**2, 1e-300))), 0.0)
    # rim cell: assign the node value reproducing the analytic cell mass
    # int dr / (a^2 sqrt(4 - r^2)) = arcsin(r/2) / a^2 under the trapezoid
    # rule; columns whose support begins inside the cell (angles near +/-a)
    # integrate from their own lower limit 2 cos(a - |theta|)
    dr = radii[1] - radii[0]
    r_pen = radii[-2]
    r_lo = np.maximum(r_pen, 2.0 * np.cos(a - np.minimum(np.abs(angles), a)))
    cell_mass = (math.asin(1.0) - np.arcsin(r_lo / 2.0)) / a**2
    density[-1, :] = np.maximum(2.0 * cell_mass / dr - density[-2, :], 0.0)
    raw = grid_mass(radii, angles, density)
    logger.info("two-step seed mass %.6f (analytic values kept unscaled)", raw)
    return PolarGridDistribution(
        cfg=cfg, radii=radii, angles=angles, density=density, grid_tol=grid_tol, raw_mass=raw
    )


def _phi_rule(max_angle: float, n_phi: int):
    nodes, weights = np.polynomial.legendre.leggauss(n_phi)
    # force exact +/- pairing so mirrored grids propagate identically
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return nodes * max_angle, weights * max_angle


def _two_step_density(rp, tp, max_angle):
    """Closed-form two-step joint density at back-mapped polar points."""
    a = max_angle
    with np.errstate(invalid="ignore", divide="ignore"):
        delta = np.arccos(np.clip(rp / 2.0, -1.0, 1.0))
        inside = (np.abs(tp) + delta <= a) & (rp < 2.0)
        val = np.where(inside, 1.0 / (a**2 * np.sqrt(np.maximum(4.0 - rp**2, 1e-300))), 0.0)
    return val


def _propagate_from_two(radii, angles, max_angle, phi_nodes, phi_weights):
    """Third-step density using the exact two-step law under the integral.

    The two-step density carries about a tenth of its mass in an
    integrable 1/sqrt divergence at the outer rim; evaluating it in
    closed form here avoids the large interpolation bias a tabulated rim
    would introduce.
    """
    r = radii[:, None]
    th = angles[None, :]
    x0 = r * np.cos(th)
    y0 = r * np.sin(th)
    acc = np.zeros((radii.size, angles.size))
    for phi, w in zip(phi_nodes, phi_weights):
        x = x0 - np.cos(phi)
        y = y0 - np.sin(phi)
        rp = np.hypot(x, y)
        val = _two_step_density(rp, np.arctan2(y, x), max_angle)
        acc += w * val / np.maximum(rp, 1e-12)
    return acc * r / (2.0 * max_angle)


def propagate(
    prev,
    n_radii: int | None = None,
    n_angles: int | None = None,
    n_phi: int = DEFAULT_PHI_NODES,
    grid_tol: float = DEFAULT_GRID_TOL,
) -> PolarGridDistribution:
    """One recursion step: the joint grid for N from the result for N-1."""
    if isinstance(prev, OneStepSource):
        cfg = WalkConfig(n_steps=2, max_angle=prev.cfg.max_angle)
        return seed_two_step(
            cfg,
            n_radii or DEFAULT_GRID_SIZE,
            n_angles or DEFAULT_GRID_SIZE,
            grid_tol,
        )
    if not isinstance(prev, PolarGridDistribution):
        raise GridError(f"cannot propagate from {type(prev).__name__}")
    cfg = WalkConfig(n_steps=prev.cfg.n_steps + 1, max_angle=prev.cfg.max_angle)
    radii, angles = default_grid_axes(
        cfg, n_radii or prev.radii.size, n_angles or prev.angles.size
    )
    phi_nodes, phi_weights = _phi_rule(cfg.max_angle, n_phi)
    if prev.cfg.n_steps == 2:
        density = _propagate_from_two(radii, angles, cfg.max_angle, phi_nodes, phi_weights)
    else:
        density = backends.propagate_density(
            prev.density,
            prev.radii,
            prev.angles,
            radii,
            angles,
            cfg.max_angle,
            phi_nodes,
            phi_weights,
        )
    # zero cells outside the reachable set (boundary cells kept via tol)
    tol = (radii[1] - radii[0]) + cfg.n_steps * (angles[1] - angles[0])
    mask = support.contains_batch(radii[:, None], angles[None, :], cfg, tol=tol)
    density = np.where(mask, np.maximum(density, 0.0), 0.0)
    raw = grid_mass(radii, angles, density)
    if raw <= 0:
        raise GridError("propagation produced zero mass")
    logger.info(
        "propagated to n_steps=%d: raw mass %.6f, renormalization factor %.6f",
        cfg.n_steps,
        raw,
        1.0 / raw,
    )
    return PolarGridDistribution(
        cfg=cfg, radii=radii, angles=angles, density=density / raw, grid_tol=grid_tol, raw_mass=raw
    )


def compute_grid(
    cfg: WalkConfig,
    n_radii: int = DEFAULT_GRID_SIZE,
    n_angles: int = DEFAULT_GRID_SIZE,
    n_phi: int = DEFAULT_PHI_NODES,
    grid_tol: float = DEFAULT_GRID_TOL,
) -> PolarGridDistribution:
    """Joint grid for cfg.n_steps >= 2 by repeated propagation from one step."""
    if cfg.n_steps < 2:
        raise GridError("grid computation requires n_steps >= 2")
    state = OneStepSource(WalkConfig(n_steps=1, max_angle=cfg.max_angle))
    for _ in range(cfg.n_steps - 1):
        state = propagate(state, n_radii, n_angles, n_phi, grid_tol)
    return state


def _weighted_density(prev: PolarGridDistribution):
    wr = _trapezoid_weights(prev.radii)
    wt = _trapezoid_weights(prev.angles)
    fw = prev.density * wr[:, None] * wt[None, :]
    # normalize the quadrature measure so small tabulation-mass deficits
    # (for example the unscaled two-step seed) do not bias expectations
    return fw / fw.sum()


def cdf_radius_recursive(r, prev) -> np.ndarray:
    """CDF of the radius after one more step than `prev` represents.

    P(R_N <= r) = 1 - E[F_phi(t + g) - F_phi(t - g)] over the previous
    endpoint (x, t), with g = arccos((r^2 - x^2 - 1)/(2x)) and the
    argument clamped to [-1, 1] (the event is sure/impossible outside).
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise DomainError("radius must be nonnegative")
    if isinstance(prev, OneStepSource):
        cfg1 = prev.cfg
        t = np.linspace(-cfg1.max_angle, cfg1.max_angle, 2001)
        wt = _trapezoid_weights(t) / (2.0 * cfg1.max_angle)
        x = np.asarray([1.0])
        fw = wt[None, :]
    else:
        cfg1 = prev.cfg
        x = prev.radii
        t = prev.angles
        fw = _weighted_density(prev)
    out = np.empty(r_arr.shape)
    for lo in range(0, r_arr.size, _QUERY_CHUNK):
        rq = r_arr[lo : lo + _QUERY_CHUNK, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = (rq**2 - x[None, :] ** 2 - 1.0) / (2.0 * np.maximum(x[None, :], 1e-300))
        gamma = np.arccos(np.clip(c, -1.0, 1.0))  # (nq, nx)
        hi = step_angle_cdf(t[None, None, :] + gamma[:, :, None], cfg1)
        lo_ = step_angle_cdf(t[None, None, :] - gamma[:, :, None], cfg1)
        out[lo : lo + _QUERY_CHUNK] = 1.0 - np.sum((hi - lo_) * fw[None, :, :], axis=(1, 2))
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(r) else float(out[0])


def _angle_quadrature(theta, prev, density_form: bool):
    th_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if isinstance(prev, OneStepSource):
        cfg1 = prev.cfg
        t = np.linspace(-cfg1.max_angle, cfg1.max_angle, 2001)
        wt = _trapezoid_weights(t) / (2.0 * cfg1.max_angle)
        x = np.asarray([1.0])
        fw = wt[None, :]
    else:
        cfg1 = prev.cfg
        x = prev.radii
        t = prev.angles
        fw = _weighted_density(prev)
    out = np.empty(th_arr.shape)
    xb = x[None, :, None]
    tb = t[None, None, :]
    for lo in range(0, th_arr.size, _QUERY_CHUNK):
        tq = th_arr[lo : lo + _QUERY_CHUNK, None, None]
        # the new angle is <= tq iff sin(phi - tq) <= x sin(tq - t); for
        # a <= pi/2 the admissible step angles form the explicit interval
        # union below, so the conditional law is exact and only the grid
        # expectation is approximate
        s = xb * np.sin(tq - tb)
        sc = np.clip(s, -1.0, 1.0)
        alpha = np.arcsin(sc)
        if density_form:
            with np.errstate(divide="ignore", invalid="ignore"):
                dalpha = np.where(
                    np.abs(s) < 1.0, xb * np.cos(tq - tb) / np.sqrt(1.0 - sc * sc), 0.0
                )
            val = (
                step_angle_pdf(tq + alpha, cfg1) * (1.0 + dalpha)
                - step_angle_pdf(tq - math.pi - alpha, cfg1) * (1.0 - dalpha)
                - step_angle_pdf(tq + math.pi - alpha, cfg1) * (1.0 - dalpha)
            )
        else:
            val = (
                step_angle_cdf(tq + alpha, cfg1)
                - step_angle_cdf(tq - math.pi - alpha, cfg1)
                + 1.0
                - step_angle_cdf(tq + math.pi - alpha, cfg1)
            )
        out[lo : lo + _QUERY_CHUNK] = np.sum(val * fw[None, :, :], axis=(1, 2))
    return out, th_arr


def cdf_angle_approx(theta, prev):
    """CDF of the angle after one more step than `prev` represents.

    The conditional law given the previous endpoint is exact interval
    geometry on the step angle; only the expectation over the tabulated
    previous distribution is approximate.
    """
    out, _ = _angle_quadrature(theta, prev, density_form=False)
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(theta) else float(out[0])


def pdf_angle_approx(theta, prev):
    """Density matching `cdf_angle_approx`.

    Near max_angle = pi/2 the conditional density develops an integrable
    singularity that the grid expectation resolves only approximately.
    """
    out, _ = _angle_quadrature(theta, prev, density_form=True)
    return np.maximum(out, 0.0) if np.ndim(theta) else max(float(out[0]), 0.0)


def marginal_radius(grid: PolarGridDistribution):
    """Marginal radius density: quadrature of the joint over the angles."""
    wt = _trapezoid_weights(grid.angles)
    return grid.radii, grid.density @ wt


def marginal_angle(grid: PolarGridDistribution):
    """Marginal angle density: quadrature of the joint over the radii."""
    wr = _trapezoid_weights(grid.radii)
    return grid.angles, wr @ grid.density


def marginal_cdf(axis: np.ndarray, density: np.ndarray):
    """Interpolating CDF from a tabulated 1-D density (clamped outside)."""
    h = axis[1] - axis[0]
    cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (density[1:] + density[:-1]))])
    if cum[-1] <= 0:
        raise GridError("density has no mass to accumulate")
    cum /= cum[-1]

    def cdf(x):
        out = np.interp(np.asarray(x, dtype=float), axis, cum)
        return out if out.ndim else float(out)

    return cdf
