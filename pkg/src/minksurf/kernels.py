"""Kernel backend selection and mask-aware orchestration.

The compiled extension is preferred; the pure fallback is used when the
extension is unavailable or when MINKSURF_PURE_PYTHON is set.  On top of
the raw per-component kernels this module provides whole-grid helpers that
loop over connected components and validate continuity.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("MINKSURF_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"


def _as_mask(mask) -> np.ndarray:
    return np.ascontiguousarray(mask, dtype=np.uint8)


def masked_laplacian(values, mask, hu, hv):
    """5-point Laplacian; returns (laplacian, interior bool mask)."""
    lap, interior = _impl.masked_laplacian(
        np.ascontiguousarray(values, dtype=np.float64), _as_mask(mask), float(hu), float(hv)
    )
    return lap, interior.astype(bool)


def unwrap_masked(angle, mask):
    """Unwrap a principal-value angle field over every admissible component.

    Seeds are the first unvisited admissible points in row-major order; the
    seed keeps its principal value.  Returns (unwrapped, ok) where ok is
    False when some admissible neighbors still differ by >= pi (the field
    winds around a masked region and has no continuous branch).
    """
    ang = np.ascontiguousarray(angle, dtype=np.float64)
    m = np.asarray(mask, dtype=bool)
    out = np.full(ang.shape, np.nan)
    remaining = m.copy()
    mask8 = _as_mask(m)
    while remaining.any():
        i0, j0 = np.unravel_index(np.argmax(remaining), remaining.shape)
        part, visited = _impl.unwrap_bfs(ang, mask8, int(i0), int(j0))
        visited = visited.astype(bool)
        out[visited] = part[visited]
        remaining &= ~visited
    ok = True
    both = m[:, 1:] & m[:, :-1]
    if both.any() and np.any(np.abs(out[:, 1:] - out[:, :-1])[both] >= np.pi):
        ok = False
    both = m[1:, :] & m[:-1, :]
    if both.any() and np.any(np.abs(out[1:, :] - out[:-1, :])[both] >= np.pi):
        ok = False
    return out, ok


def integrate_masked(phi, mask, i0, j0, hu, hv):
    """Integrate Re(phi dz) from a basepoint over its connected component.

    Returns (positions (4, nv, nu), visited bool mask).
    """
    pos, visited = _impl.integrate_bfs(
        np.ascontiguousarray(phi, dtype=np.complex128),
        _as_mask(mask),
        int(i0),
        int(j0),
        float(hu),
        float(hv),
    )
    return pos, visited.astype(bool)
