"""Pure-Python/numpy fallbacks for the compiled grid kernels.

Signatures and traversal orders match ``_kernels_cy`` exactly so that the
two backends are interchangeable.
"""

from __future__ import annotations

from collections import deque

import numpy as np

TWO_PI = 6.283185307179586476925287

# neighbor order: +u, -u, +v, -v (row-first preference)
_STEPS = ((0, 1), (0, -1), (1, 0), (-1, 0))


def masked_laplacian(values, mask, hu, hv):
    """5-point Laplacian at interior points whose full stencil is admissible.

    Returns (laplacian, interior) where interior is uint8.
    """
    nv, nu = values.shape
    lap = np.zeros((nv, nu), dtype=np.float64)
    interior = np.zeros((nv, nu), dtype=np.uint8)
    m = mask.astype(bool)
    core = (
        m[1:-1, 1:-1]
        & m[1:-1, :-2]
        & m[1:-1, 2:]
        & m[:-2, 1:-1]
        & m[2:, 1:-1]
    )
    wu = 1.0 / (hu * hu)
    wv = 1.0 / (hv * hv)
    c = values[1:-1, 1:-1]
    stencil = (values[1:-1, :-2] - 2.0 * c + values[1:-1, 2:]) * wu + (
        values[:-2, 1:-1] - 2.0 * c + values[2:, 1:-1]
    ) * wv
    inner = lap[1:-1, 1:-1]
    inner[core] = stencil[core]
    interior[1:-1, 1:-1][core] = 1
    return lap, interior


def unwrap_bfs(angle, mask, i0, j0):
    """Breadth-first unwrap of a principal-value angle field from a seed.

    Each newly reached point gets the 2*pi shift that minimizes the jump
    from its discovering neighbor.  Returns (unwrapped, visited uint8).
    """
    nv, nu = angle.shape
    out = np.zeros((nv, nu), dtype=np.float64)
    visited = np.zeros((nv, nu), dtype=np.uint8)
    if not mask[i0, j0]:
        return out, visited
    out[i0, j0] = angle[i0, j0]
    visited[i0, j0] = 1
    queue = deque([(i0, j0)])
    while queue:
        ci, cj = queue.popleft()
        cur = out[ci, cj]
        for di, dj in _STEPS:
            ni, nj = ci + di, cj + dj
            if 0 <= ni < nv and 0 <= nj < nu and mask[ni, nj] and not visited[ni, nj]:
                p = angle[ni, nj]
                k = np.floor((cur - p) / TWO_PI + 0.5)
                out[ni, nj] = p + TWO_PI * k
                visited[ni, nj] = 1
                queue.append((ni, nj))
    return out, visited


def integrate_bfs(phi, mask, i0, j0, hu, hv):
    """Trapezoid integration of Re(phi dz) over a BFS spanning tree.

    phi has shape (4, nv, nu); horizontal edges contribute
    hu*Re(avg), vertical edges -hv*Im(avg).  Returns (positions, visited).
    """
    nc, nv, nu = phi.shape
    pos = np.zeros((nc, nv, nu), dtype=np.float64)
    visited = np.zeros((nv, nu), dtype=np.uint8)
    if not mask[i0, j0]:
        return pos, visited
    visited[i0, j0] = 1
    queue = deque([(i0, j0)])
    while queue:
        ci, cj = queue.popleft()
        for di, dj in _STEPS:
            ni, nj = ci + di, cj + dj
            if 0 <= ni < nv and 0 <= nj < nu and mask[ni, nj] and not visited[ni, nj]:
                avg = 0.5 * (phi[:, ci, cj] + phi[:, ni, nj])
                if dj != 0:
                    step = dj * hu * avg.real
                else:
                    step = -di * hv * avg.imag
                pos[:, ni, nj] = pos[:, ci, cj] + step
                visited[ni, nj] = 1
                queue.append((ni, nj))
    return pos, visited
