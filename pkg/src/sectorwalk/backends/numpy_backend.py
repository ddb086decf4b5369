"""Pure-numpy implementation of the grid-propagation kernel.

One propagation step maps the joint polar density after N-1 steps to the
density after N steps:

    f_N(r, theta) = r/(2a) int_{-a}^{a} f_{N-1}(r', theta') / r' dphi

where (r', theta') are the polar coordinates of
(r cos theta - cos phi, r sin theta - sin phi). The phi integral uses
fixed Gauss-Legendre nodes; the previous density is evaluated by
bilinear interpolation on its uniform grid, with back-mapped points
within half a cell of the grid edge clamped to the edge and points
farther outside contributing zero.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def _bilinear(density, radii, angles, rp, tp):
    nr, nt = density.shape
    dr = radii[1] - radii[0]
    dt = angles[1] - angles[0]
    fi = (rp - radii[0]) / dr
    fj = (tp - angles[0]) / dt
    inside = (fi >= -0.5) & (fi <= nr - 0.5) & (fj >= -0.5) & (fj <= nt - 0.5)
    fi = np.clip(fi, 0.0, nr - 1.0)
    fj = np.clip(fj, 0.0, nt - 1.0)
    i0 = np.minimum(fi.astype(np.intp), nr - 2)
    j0 = np.minimum(fj.astype(np.intp), nt - 2)
    wi = fi - i0
    wj = fj - j0
    val = (
        density[i0, j0] * (1.0 - wi) * (1.0 - wj)
        + density[i0 + 1, j0] * wi * (1.0 - wj)
        + density[i0, j0 + 1] * (1.0 - wi) * wj
        + density[i0 + 1, j0 + 1] * wi * wj
    )
    return np.where(inside, val, 0.0)


def propagate_density(
    prev_density,
    prev_radii,
    prev_angles,
    new_radii,
    new_angles,
    max_angle,
    phi_nodes,
    phi_weights,
):
    """Evaluate the propagation integral on the target grid.

    Returns the unnormalized N-step density matrix of shape
    (len(new_radii), len(new_angles)).
    """
    r = np.asarray(new_radii, dtype=float)[:, None]
    th = np.asarray(new_angles, dtype=float)[None, :]
    x0 = r * np.cos(th)
    y0 = r * np.sin(th)
    acc = np.zeros((r.shape[0], th.shape[1]))
    for phi, w in zip(phi_nodes, phi_weights):
        x = x0 - np.cos(phi)
        y = y0 - np.sin(phi)
        rp = np.hypot(x, y)
        tp = np.arctan2(y, x)
        val = _bilinear(prev_density, prev_radii, prev_angles, rp, tp)
        acc += w * val / np.maximum(rp, 1e-12)
    return acc * r / (2.0 * max_angle)
