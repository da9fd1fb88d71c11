# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: masked Laplacian, BFS phase unwrap, BFS integration.

Mirrors ``_kernels_py`` exactly (same signatures, same traversal order).
"""

import numpy as np

from libc.math cimport floor

cdef double TWO_PI = 6.283185307179586476925287


def masked_laplacian(double[:, ::1] values, const unsigned char[:, ::1] mask,
                     double hu, double hv):
    """5-point Laplacian at interior points whose full stencil is admissible."""
    cdef Py_ssize_t nv = values.shape[0]
    cdef Py_ssize_t nu = values.shape[1]
    lap_arr = np.zeros((nv, nu), dtype=np.float64)
    int_arr = np.zeros((nv, nu), dtype=np.uint8)
    cdef double[:, ::1] lap = lap_arr
    cdef unsigned char[:, ::1] interior = int_arr
    cdef double wu = 1.0 / (hu * hu)
    cdef double wv = 1.0 / (hv * hv)
    cdef Py_ssize_t i, j
    for i in range(1, nv - 1):
        for j in range(1, nu - 1):
            if (mask[i, j] and mask[i, j - 1] and mask[i, j + 1]
                    and mask[i - 1, j] and mask[i + 1, j]):
                lap[i, j] = (
                    (values[i, j - 1] - 2.0 * values[i, j] + values[i, j + 1]) * wu
                    + (values[i - 1, j] - 2.0 * values[i, j] + values[i + 1, j]) * wv
                )
                interior[i, j] = 1
    return lap_arr, int_arr


def unwrap_bfs(double[:, ::1] angle, const unsigned char[:, ::1] mask,
               Py_ssize_t i0, Py_ssize_t j0):
    """Breadth-first unwrap of a principal-value angle field from a seed."""
    cdef Py_ssize_t nv = angle.shape[0]
    cdef Py_ssize_t nu = angle.shape[1]
    out_arr = np.zeros((nv, nu), dtype=np.float64)
    vis_arr = np.zeros((nv, nu), dtype=np.uint8)
    queue_arr = np.empty(nv * nu, dtype=np.intp)
    cdef double[:, ::1] out = out_arr
    cdef unsigned char[:, ::1] visited = vis_arr
    cdef Py_ssize_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t ci, cj, ni, nj, t
    cdef double p, k, cur
    cdef Py_ssize_t[4] di
    cdef Py_ssize_t[4] dj
    di[0] = 0; dj[0] = 1
    di[1] = 0; dj[1] = -1
    di[2] = 1; dj[2] = 0
    di[3] = -1; dj[3] = 0
    if not mask[i0, j0]:
        return out_arr, vis_arr
    out[i0, j0] = angle[i0, j0]
    visited[i0, j0] = 1
    queue[tail] = i0 * nu + j0
    tail += 1
    while head < tail:
        ci = queue[head] // nu
        cj = queue[head] - ci * nu
        head += 1
        cur = out[ci, cj]
        for t in range(4):
            ni = ci + di[t]
            nj = cj + dj[t]
            if 0 <= ni < nv and 0 <= nj < nu:
                if mask[ni, nj] and not visited[ni, nj]:
                    p = angle[ni, nj]
                    k = floor((cur - p) / TWO_PI + 0.5)
                    out[ni, nj] = p + TWO_PI * k
                    visited[ni, nj] = 1
                    queue[tail] = ni * nu + nj
                    tail += 1
    return out_arr, vis_arr


def integrate_bfs(double complex[:, :, ::1] phi, const unsigned char[:, ::1] mask,
                  Py_ssize_t i0, Py_ssize_t j0, double hu, double hv):
    """Trapezoid integration of Re(phi dz) over a BFS spanning tree."""
    cdef Py_ssize_t nc = phi.shape[0]
    cdef Py_ssize_t nv = phi.shape[1]
    cdef Py_ssize_t nu = phi.shape[2]
    pos_arr = np.zeros((nc, nv, nu), dtype=np.float64)
    vis_arr = np.zeros((nv, nu), dtype=np.uint8)
    queue_arr = np.empty(nv * nu, dtype=np.intp)
    cdef double[:, :, ::1] pos = pos_arr
    cdef unsigned char[:, ::1] visited = vis_arr
    cdef Py_ssize_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef Py_ssize_t ci, cj, ni, nj, t, c
    cdef double complex avg
    cdef Py_ssize_t[4] di
    cdef Py_ssize_t[4] dj
    di[0] = 0; dj[0] = 1
    di[1] = 0; dj[1] = -1
    di[2] = 1; dj[2] = 0
    di[3] = -1; dj[3] = 0
    if not mask[i0, j0]:
        return pos_arr, vis_arr
    visited[i0, j0] = 1
    queue[tail] = i0 * nu + j0
    tail += 1
    while head < tail:
        ci = queue[head] // nu
        cj = queue[head] - ci * nu
        head += 1
        for t in range(4):
            ni = ci + di[t]
            nj = cj + dj[t]
            if 0 <= ni < nv and 0 <= nj < nu:
                if mask[ni, nj] and not visited[ni, nj]:
                    for c in range(nc):
                        avg = 0.5 * (phi[c, ci, cj] + phi[c, ni, nj])
                        if dj[t] != 0:
                            pos[c, ni, nj] = pos[c, ci, cj] + dj[t] * hu * avg.real
                        else:
                            pos[c, ni, nj] = pos[c, ci, cj] - di[t] * hv * avg.imag
                    visited[ni, nj] = 1
                    queue[tail] = ni * nu + nj
                    tail += 1
    return pos_arr, vis_arr
