# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled grid-propagation kernel; semantics match the numpy backend."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, sin, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"


def propagate_density(
    const double[:, ::1] prev_density,
    const double[::1] prev_radii,
    const double[::1] prev_angles,
    const double[::1] new_radii,
    const double[::1] new_angles,
    double max_angle,
    const double[::1] phi_nodes,
    const double[::1] phi_weights,
):
    cdef Py_ssize_t nr = new_radii.shape[0]
    cdef Py_ssize_t nt = new_angles.shape[0]
    cdef Py_ssize_t pr = prev_radii.shape[0]
    cdef Py_ssize_t pt = prev_angles.shape[0]
    cdef Py_ssize_t nphi = phi_nodes.shape[0]
    cdef double dr = prev_radii[1] - prev_radii[0]
    cdef double dt = prev_angles[1] - prev_angles[0]
    cdef double r0 = prev_radii[0]
    cdef double t0 = prev_angles[0]
    out_arr = np.zeros((nr, nt))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] cphi = np.cos(np.asarray(phi_nodes))
    cdef double[::1] sphi = np.sin(np.asarray(phi_nodes))
    cdef Py_ssize_t i, j, q, i0, j0
    cdef double r, th, x0, y0, x, y, rp, tp, fi, fj, wi, wj, val, acc

    for i in range(nr):
        r = new_radii[i]
        for j in range(nt):
            th = new_angles[j]
            x0 = r * cos(th)
            y0 = r * sin(th)
            acc = 0.0
            for q in range(nphi):
                x = x0 - cphi[q]
                y = y0 - sphi[q]
                rp = sqrt(x * x + y * y)
                tp = atan2(y, x)
                fi = (rp - r0) / dr
                fj = (tp - t0) / dt
                if fi < -0.5 or fi > pr - 0.5 or fj < -0.5 or fj > pt - 0.5:
                    continue
                if fi < 0.0:
                    fi = 0.0
                elif fi > pr - 1.0:
                    fi = pr - 1.0
                if fj < 0.0:
                    fj = 0.0
                elif fj > pt - 1.0:
                    fj = pt - 1.0
                i0 = <Py_ssize_t> fi
                if i0 > pr - 2:
                    i0 = pr - 2
                j0 = <Py_ssize_t> fj
                if j0 > pt - 2:
                    j0 = pt - 2
                wi = fi - i0
                wj = fj - j0
                val = (
                    prev_density[i0, j0] * (1.0 - wi) * (1.0 - wj)
                    + prev_density[i0 + 1, j0] * wi * (1.0 - wj)
                    + prev_density[i0, j0 + 1] * (1.0 - wi) * wj
                    + prev_density[i0 + 1, j0 + 1] * wi * wj
                )
                if rp < 1e-12:
                    rp = 1e-12
                acc += phi_weights[q] * val / rp
            out[i, j] = acc * r / (2.0 * max_angle)
    return out_arr
