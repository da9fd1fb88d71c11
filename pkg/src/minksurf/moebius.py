"""Fractional-linear action on g-pairs and solution-equivalence testing.

Two g-pairs generate the same (K, kappa) field exactly when they are
related by

    g1 -> (a g1 + b) / (c g1 + d),
    g2 -> (conj(d) g2 - conj(c)) / (-conj(b) g2 + conj(a)),

with ad - bc != 0.  The transformed pair is kept as expression trees
(quotients), so symbolic derivatives stay exact.  Equality of solutions is
decided by comparing alpha fields on the common admissible set; recovering
the witness (a, b, c, d) from two equivalent pairs is out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .curvature import alpha_from_g
from .errors import EmptyAdmissibleSetError, SingularParamsError
from .expr import Const
from .fields import GridSpec
from .pairs import PairG

__all__ = [
    "MoebiusParams",
    "identity_params",
    "transform",
    "compose",
    "inverse",
    "SameSolutionReport",
    "same_solution",
]

_DET_TOL = 1e-12


@dataclass(frozen=True)
class MoebiusParams:
    """Coefficients of z -> (az + b)/(cz + d); determinant checked scale-free."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if scale == 0.0 or abs(self.det) / scale**2 <= _DET_TOL:
            raise SingularParamsError(
                f"parameters are singular: |ad - bc| = {abs(self.det):.3e}"
            )

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def to_dict(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "d": [self.d.real, self.d.imag],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MoebiusParams":
        def pick(key):
            re, im = d[key]
            return complex(re, im)

        return cls(pick("a"), pick("b"), pick("c"), pick("d"))

    @classmethod
    def from_json(cls, text: str) -> "MoebiusParams":
        return cls.from_dict(json.loads(text))


def identity_params() -> MoebiusParams:
    return MoebiusParams(1.0, 0.0, 0.0, 1.0)


def transform(p: PairG, m: MoebiusParams) -> PairG:
    """Apply the paired fractional-linear maps, building expression trees."""
    a, b, c, d = m.a, m.b, m.c, m.d
    new1 = (Const(a) * p.g1 + Const(b)) / (Const(c) * p.g1 + Const(d))
    new2 = (Const(d.conjugate()) * p.g2 - Const(c.conjugate())) / (
        Const(-b.conjugate()) * p.g2 + Const(a.conjugate())
    )
    return PairG(new1, new2)


def compose(m1: MoebiusParams, m2: MoebiusParams) -> MoebiusParams:
    """Coefficient-matrix product: transform(p, compose(m1, m2)) acts like
    applying m2 first and m1 second."""
    return MoebiusParams(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def inverse(m: MoebiusParams) -> MoebiusParams:
    """Projective inverse (d, -b, -c, a); no determinant division needed."""
    return MoebiusParams(m.d, -m.b, -m.c, m.a)


@dataclass
class SameSolutionReport:
    equal: bool
    max_rel_dev: float
    n_common: int
    rtol: float

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "max_rel_dev": self.max_rel_dev,
            "n_common": self.n_common,
            "rtol": self.rtol,
        }


def same_solution(
    p: PairG,
    q: PairG,
    grid: GridSpec,
    rtol: float = 1e-9,
    mask_tol: float = 1e-9,
) -> SameSolutionReport:
    """Compare the alpha fields of two g-pairs on the common admissible set.

    Agreement of the fields certifies (up to grid sampling and rtol) that
    the pairs generate one and the same solution.
    """
    fa = alpha_from_g(p, grid, mask_tol)
    fb = alpha_from_g(q, grid, mask_tol)
    common = fa.mask.admissible & fb.mask.admissible
    if not common.any():
        raise EmptyAdmissibleSetError("the pairs share no admissible grid points")
    va = fa.values[common]
    vb = fb.values[common]
    with np.errstate(all="ignore"):
        dev = np.abs(va - vb) / np.maximum(np.abs(va), np.abs(vb))
    max_dev = float(dev.max())
    return SameSolutionReport(bool(max_dev < rtol), max_dev, int(common.sum()), rtol)
