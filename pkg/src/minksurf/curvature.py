"""The complex field alpha and the curvature pair (K, kappa).

All four closed-form families produce the same alpha for one underlying
surface:

    g-form      alpha = -4 g1' conj(g2') / (1 + g1 conj(g2))^2
    w-form      alpha = -w1' conj(w2') / cosh^2((w1 + conj(w2))/2)
    theta-form  alpha = -(theta_u^2 + theta_v^2) / cosh^2(theta)
    eta-form    alpha = (eta_u^2 + eta_v^2) / eta^2

and K = |alpha| Re alpha, kappa = |alpha| Im alpha.  Every derivative is
exact (symbolic), so discretization error lives only in the Laplacian
stencils of the verifier.  alpha is always assembled as one numerator, one
denominator, one division, keeping cross-form comparisons meaningful.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .expr import differentiate, evaluate
from .fields import AlphaField, CurvatureField, GridSpec, Reason
from .pairs import (
    HarmonicScalar,
    PairG,
    PairH,
    PairW,
    PairXi,
    admissibility,
    eta_from_xi,
    h_to_w,
)

__all__ = [
    "alpha_from_g",
    "alpha_from_w",
    "alpha_from_theta",
    "alpha_from_eta",
    "alpha_from_any",
    "curvatures",
]


def _finish(grid, values, mask) -> AlphaField:
    mask.exclude(~np.isfinite(values), Reason.POLE)
    values = np.where(mask.admissible, values, np.nan + 1j * np.nan)
    return AlphaField(grid, values, mask)


def alpha_from_g(p: PairG, grid: GridSpec, tol: float = 1e-9) -> AlphaField:
    mask = admissibility(p, grid, tol)
    zv = grid.zgrid()
    with np.errstate(all="ignore"):
        g1 = evaluate(p.g1, zv)
        g2 = evaluate(p.g2, zv)
        d1 = evaluate(differentiate(p.g1), zv)
        d2 = evaluate(differentiate(p.g2), zv)
        num = -4.0 * d1 * np.conj(d2)
        den = (1.0 + g1 * np.conj(g2)) ** 2
        values = num / den
    return _finish(grid, values, mask)


def alpha_from_w(p: PairW, grid: GridSpec, tol: float = 1e-9) -> AlphaField:
    mask = admissibility(p, grid, tol)
    zv = grid.zgrid()
    with np.errstate(all="ignore"):
        w1 = evaluate(p.w1, zv)
        w2 = evaluate(p.w2, zv)
        d1 = evaluate(differentiate(p.w1), zv)
        d2 = evaluate(differentiate(p.w2), zv)
        num = -d1 * np.conj(d2)
        den = np.cosh(0.5 * (w1 + np.conj(w2))) ** 2
        values = num / den
    return _finish(grid, values, mask)


def alpha_from_theta(scalar: HarmonicScalar, grid: GridSpec, tol: float = 1e-9) -> AlphaField:
    if scalar.kind != "theta":
        raise InputError("alpha_from_theta needs a theta-kind harmonic scalar")
    mask = admissibility(scalar, grid, tol)
    zv = grid.zgrid()
    with np.errstate(all="ignore"):
        num = -scalar.grad_squared(zv)
        den = np.cosh(scalar.value(zv)) ** 2
        values = num / den
    return _finish(grid, values, mask)


def alpha_from_eta(scalar: HarmonicScalar, grid: GridSpec, tol: float = 1e-9) -> AlphaField:
    if scalar.kind != "eta":
        raise InputError("alpha_from_eta needs an eta-kind harmonic scalar")
    mask = admissibility(scalar, grid, tol)
    zv = grid.zgrid()
    with np.errstate(all="ignore"):
        num = scalar.grad_squared(zv)
        val = scalar.value(zv)
        den = val * val
        values = num / den
    return _finish(grid, values, mask)


def alpha_from_any(obj, grid: GridSpec, tol: float = 1e-9) -> AlphaField:
    """Route any representation to its alpha family (h goes through w)."""
    if isinstance(obj, PairG):
        return alpha_from_g(obj, grid, tol)
    if isinstance(obj, PairW):
        return alpha_from_w(obj, grid, tol)
    if isinstance(obj, PairH):
        return alpha_from_w(h_to_w(obj), grid, tol)
    if isinstance(obj, PairXi):
        return alpha_from_eta(eta_from_xi(obj), grid, tol)
    if isinstance(obj, HarmonicScalar):
        if obj.kind == "theta":
            return alpha_from_theta(obj, grid, tol)
        return alpha_from_eta(obj, grid, tol)
    raise TypeError(f"cannot compute alpha for {type(obj).__name__}")


def curvatures(a: AlphaField) -> CurvatureField:
    """K = |alpha| Re alpha, kappa = |alpha| Im alpha, mask propagated."""
    with np.errstate(all="ignore"):
        mod = np.abs(a.values)
        K = mod * a.values.real
        kappa = mod * a.values.imag
    return CurvatureField(a.grid, K, kappa, a.mask)
