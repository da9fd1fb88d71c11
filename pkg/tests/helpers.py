"""Shared fixtures-in-spirit: expression corpus and random pair generators."""

from __future__ import annotations

import numpy as np

from minksurf.expr import Const, Expr, Var

# (expression, centre, radius) with the sampling disc chosen away from
# poles, branch cuts, and zeros of the derivative
CORPUS = [
    ("z", 0.0 + 0.0j, 1.0),
    ("z^2 + 1", 0.5 + 0.5j, 1.0),
    ("z^3 - 2*z + 0.5", 1.0 + 0.0j, 0.8),
    ("exp(z)", 0.0 + 0.0j, 1.5),
    ("exp(2*z) - 1", 0.3 + 0.1j, 0.8),
    ("exp(-z^2)", 0.0 + 0.5j, 0.8),
    ("exp(i*z)", 0.2 - 0.3j, 1.0),
    ("sinh(z)", 0.5 + 0.0j, 1.0),
    ("cosh(z)", 0.5 + 0.5j, 1.0),
    ("sinh(z)*cosh(z)", 0.4 + 0.2j, 0.7),
    ("sinh(2*z + i)", 0.0 + 0.0j, 0.6),
    ("cosh(z)^2 - sinh(z)^2", 0.3 + 0.3j, 0.8),
    ("log(2 + z)", 0.5 + 0.0j, 0.8),
    ("log(1 + z^2)", 0.2 + 0.1j, 0.4),
    ("log(2 + cosh(z))", 0.0 + 0.0j, 0.8),
    ("sqrt(4 + z)", 0.0 + 0.0j, 1.5),
    ("sqrt(1 + z^2)", 0.3 + 0.2j, 0.4),
    ("1/(1 + z^2)", 0.3 + 0.2j, 0.4),
    ("(z - 1)/(z + 2)", 0.4 + 0.3j, 1.0),
    ("z^-2", 2.0 + 1.0j, 0.8),
    ("exp(z)/z", 2.0 + 0.5j, 0.9),
    ("i*z + 3", 0.0 + 0.0j, 1.5),
    ("z*exp(z) + i", 0.5 + 0.2j, 0.9),
    ("(1 + i)*z^2", 1.0 + 0.5j, 0.8),
]


def sample_points(rng: np.random.Generator, centre: complex, radius: float, count: int) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.2, 1.0, count))
    phi = rng.uniform(0.0, 2 * np.pi, count)
    return centre + r * np.exp(1j * phi)


def random_poly(rng: np.random.Generator, degree: int, scale: float = 1.0) -> Expr:
    """Random polynomial whose linear term dominates the higher ones.

    Keeps derivative zeros away from the unit disc, so small sample domains
    stay clear of branch-point obstructions.
    """
    coeffs = scale * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
    coeffs[0] *= 0.4
    lin = rng.uniform(0.8, 1.4) * np.exp(2j * np.pi * rng.uniform())
    coeffs[1] = lin
    coeffs[2:] *= 0.2
    expr: Expr = Const(coeffs[0])
    for k in range(1, degree + 1):
        expr = expr + Const(coeffs[k]) * (Var() ** k)
    return expr


def random_pair_exprs(rng: np.random.Generator, degree: int = 2, scale: float = 0.6):
    return random_poly(rng, degree, scale), random_poly(rng, degree, scale)
