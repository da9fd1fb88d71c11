"""Generator-pair representations, conversions between them, and admissibility.

Four holomorphic-pair representations (h, w, g, xi) and the complex harmonic
scalars theta/eta built from them.  A harmonic scalar stores its holomorphic
half A and anti-holomorphic source B and represents A(z) + conj(B(z)), so its
u/v partials are exact:

    f_u = A'(z) + conj(B'(z)),       f_v = i A'(z) - i conj(B'(z)).

Non-strict inequalities like g1'g2' != 0 become threshold tests: a point is
admissible when every condition magnitude exceeds tol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .errors import InputError
from .expr import Call, Expr, differentiate, evaluate, parse, to_string
from .fields import AdmissibilityMask, GridSpec, Reason

__all__ = [
    "PairH",
    "PairW",
    "PairG",
    "PairXi",
    "HarmonicScalar",
    "h_to_w",
    "w_to_g",
    "g_to_xi",
    "theta_from_w",
    "eta_from_xi",
    "admissibility",
    "condition_magnitudes",
    "make_rep",
    "rep_to_dict",
    "rep_from_dict",
]


@dataclass(frozen=True)
class PairH:
    """Admissible where h1'^2 != h2'^2 and cosh(Re h1 + i Im h2) != 0."""

    h1: Expr
    h2: Expr
    rep: ClassVar[str] = "h"

    @property
    def funcs(self):
        return (self.h1, self.h2)


@dataclass(frozen=True)
class PairW:
    """Admissible where w1'w2' != 0 and cosh((w1 + conj w2)/2) != 0."""

    w1: Expr
    w2: Expr
    rep: ClassVar[str] = "w"

    @property
    def funcs(self):
        return (self.w1, self.w2)


@dataclass(frozen=True)
class PairG:
    """Admissible where g1'g2' != 0 and 1 + g1*conj(g2) != 0."""

    g1: Expr
    g2: Expr
    rep: ClassVar[str] = "g"

    @property
    def funcs(self):
        return (self.g1, self.g2)


@dataclass(frozen=True)
class PairXi:
    """Admissible where xi1'xi2' != 0 and xi1 + conj(xi2) != 0."""

    xi1: Expr
    xi2: Expr
    rep: ClassVar[str] = "xi"

    @property
    def funcs(self):
        return (self.xi1, self.xi2)


@dataclass(frozen=True)
class HarmonicScalar:
    """Complex harmonic function A(z) + conj(B(z)) with exact derivatives.

    kind selects the admissibility conditions and the alpha formula:
    "theta" needs cosh(value) != 0, "eta" needs value != 0; both need a
    nonzero squared gradient.
    """

    holo: Expr
    antiholo_source: Expr
    kind: str

    def __post_init__(self):
        if self.kind not in ("theta", "eta"):
            raise InputError(f"unknown harmonic-scalar kind {self.kind!r}")

    @property
    def rep(self) -> str:
        return self.kind

    @property
    def funcs(self):
        return (self.holo, self.antiholo_source)

    def value(self, zv):
        return evaluate(self.holo, zv) + np.conj(evaluate(self.antiholo_source, zv))

    def grad(self, zv):
        da = evaluate(differentiate(self.holo), zv)
        db = evaluate(differentiate(self.antiholo_source), zv)
        return da + np.conj(db), 1j * da - 1j * np.conj(db)

    def grad_squared(self, zv):
        fu, fv = self.grad(zv)
        return fu * fu + fv * fv


# ---------------------------------------------------------------------------
# conversions

def h_to_w(p: PairH) -> PairW:
    return PairW(p.h1 + p.h2, p.h1 - p.h2)


def w_to_g(p: PairW) -> PairG:
    return PairG(Call("exp", p.w1), Call("exp", p.w2))


def g_to_xi(p: PairG) -> PairXi:
    return PairXi(1 / p.g1, p.g2)


def theta_from_w(p: PairW) -> HarmonicScalar:
    return HarmonicScalar(p.w1 / 2, p.w2 / 2, kind="theta")


def eta_from_xi(p: PairXi) -> HarmonicScalar:
    return HarmonicScalar(p.xi1 / 2, p.xi2 / 2, kind="eta")


# ---------------------------------------------------------------------------
# admissibility

def condition_magnitudes(obj, zv):
    """(derivative magnitude, denominator magnitude) at the given points.

    Non-finite entries mark poles of the underlying evaluations.
    """
    with np.errstate(all="ignore"):
        if isinstance(obj, PairH):
            d1 = evaluate(differentiate(obj.h1), zv)
            d2 = evaluate(differentiate(obj.h2), zv)
            h1 = evaluate(obj.h1, zv)
            h2 = evaluate(obj.h2, zv)
            theta = h1.real + 1j * h2.imag
            return np.abs(d1 * d1 - d2 * d2), np.abs(np.cosh(theta))
        if isinstance(obj, PairW):
            d1 = evaluate(differentiate(obj.w1), zv)
            d2 = evaluate(differentiate(obj.w2), zv)
            w1 = evaluate(obj.w1, zv)
            w2 = evaluate(obj.w2, zv)
            return np.abs(d1 * d2), np.abs(np.cosh(0.5 * (w1 + np.conj(w2))))
        if isinstance(obj, PairG):
            d1 = evaluate(differentiate(obj.g1), zv)
            d2 = evaluate(differentiate(obj.g2), zv)
            g1 = evaluate(obj.g1, zv)
            g2 = evaluate(obj.g2, zv)
            return np.abs(d1 * d2), np.abs(1.0 + g1 * np.conj(g2))
        if isinstance(obj, PairXi):
            d1 = evaluate(differentiate(obj.xi1), zv)
            d2 = evaluate(differentiate(obj.xi2), zv)
            x1 = evaluate(obj.xi1, zv)
            x2 = evaluate(obj.xi2, zv)
            return np.abs(d1 * d2), np.abs(x1 + np.conj(x2))
        if isinstance(obj, HarmonicScalar):
            grad2 = obj.grad_squared(zv)
            val = obj.value(zv)
            denom = np.abs(np.cosh(val)) if obj.kind == "theta" else np.abs(val)
            return np.abs(grad2), denom
    raise TypeError(f"no admissibility conditions for {type(obj).__name__}")


def admissibility(obj, grid: GridSpec, tol: float = 1e-9) -> AdmissibilityMask:
    """Evaluate the representation's conditions pointwise on the grid."""
    if tol <= 0:
        raise InputError("tolerance must be positive")
    deriv_mag, denom_mag = condition_magnitudes(obj, grid.zgrid())
    finite = np.isfinite(deriv_mag) & np.isfinite(denom_mag)
    reason = np.full(deriv_mag.shape, int(Reason.POLE), dtype=np.uint8)
    deriv_ok = finite & (deriv_mag > tol)
    denom_ok = finite & (denom_mag > tol)
    reason[finite & ~deriv_ok] = int(Reason.DERIVATIVE_ZERO)
    reason[deriv_ok & ~denom_ok] = int(Reason.DENOMINATOR_DEGENERATE)
    admissible = deriv_ok & denom_ok
    reason[admissible] = int(Reason.OK)
    return AdmissibilityMask(grid, admissible, reason, tol)


# ---------------------------------------------------------------------------
# construction / serialization

_REPS = ("h", "w", "g", "xi", "theta", "eta")


def make_rep(rep: str, f1: str | Expr, f2: str | Expr):
    """Build a pair or harmonic scalar from two expression strings.

    For theta/eta the two entries are the holomorphic halves A and B of
    A(z) + conj(B(z)); z-bar never appears in the input language.
    """
    if rep not in _REPS:
        raise InputError(f"unknown representation {rep!r} (expected one of {_REPS})")
    e1 = parse(f1) if isinstance(f1, str) else f1
    e2 = parse(f2) if isinstance(f2, str) else f2
    if rep == "h":
        return PairH(e1, e2)
    if rep == "w":
        return PairW(e1, e2)
    if rep == "g":
        return PairG(e1, e2)
    if rep == "xi":
        return PairXi(e1, e2)
    return HarmonicScalar(e1, e2, kind=rep)


def rep_to_dict(obj) -> dict:
    f1, f2 = obj.funcs
    return {"rep": obj.rep, "f1": to_string(f1), "f2": to_string(f2)}


def rep_from_dict(d: dict):
    try:
        return make_rep(d["rep"], d["f1"], d["f2"])
    except KeyError as missing:
        raise InputError(f"pair JSON lacks key {missing}") from None
