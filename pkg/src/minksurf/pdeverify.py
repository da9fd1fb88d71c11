"""Numerical verification of the natural PDE system in its three forms.

For a field alpha = e^(X+iY) generated by holomorphic data, the residuals of

    (a) Delta log(alpha) - 2 alpha                    (complex form)
    (b) Delta X - 2 e^X cos Y,  Delta Y - 2 e^X sin Y (X/Y system)
    (c) q Delta ln q - 2K,  q Delta atan(kappa/K) - 2 kappa,
        q = (K^2 + kappa^2)^(1/4)                     (curvature system)

are evaluated with an anisotropic 5-point stencil over interior admissible
points (all four neighbors admissible).  Y and the curvature angle are
unwrapped two-argument angle fields, not pointwise arctangents: the
principal branch jumps whenever K changes sign, which it does on perfectly
regular surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import EmptyAdmissibleSetError, UnwrapError
from .fields import AlphaField, CurvatureField, GridSpec, ScalarField
from .pairs import HarmonicScalar

__all__ = [
    "LogPolarField",
    "ResidualReport",
    "laplacian",
    "log_polar",
    "residual_complex",
    "residual_systemXY",
    "residual_system1",
    "check_harmonic",
    "convergence_slope",
    "refinement_study",
]


@dataclass
class LogPolarField:
    """X = ln|alpha| and branch-continuous Y = arg(alpha)."""

    X: ScalarField
    Y: ScalarField
    ok: bool

    def require_unwrapped(self):
        if not self.ok:
            raise UnwrapError(
                "angle field is not continuously unwrappable on some component"
            )


@dataclass
class ResidualReport:
    """Norms of one PDE residual over interior admissible points."""

    equation: str
    max_abs: float
    l2: float
    n_interior: int
    h_u: float
    h_v: float
    slope: float | None = None
    values: np.ndarray | None = field(default=None, repr=False, compare=False)
    interior: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = {
            "equation": self.equation,
            "max_abs": self.max_abs,
            "l2": self.l2,
            "n_interior": self.n_interior,
            "h_u": self.h_u,
            "h_v": self.h_v,
        }
        if self.slope is not None:
            d["slope"] = self.slope
        return d


def laplacian(f: ScalarField) -> ScalarField:
    """Anisotropic 5-point Laplacian, defined on interior admissible points."""
    lap, interior = kernels.masked_laplacian(f.values, f.mask, f.grid.hu, f.grid.hv)
    return ScalarField(f.grid, lap, interior)


def _report(tag: str, grid: GridSpec, res: np.ndarray, interior: np.ndarray) -> ResidualReport:
    n = int(interior.sum())
    if n == 0:
        raise EmptyAdmissibleSetError(f"{tag}: no interior admissible points")
    mag = np.abs(res[interior])
    full = np.full(res.shape, np.nan, dtype=res.dtype)
    full[interior] = res[interior]
    return ResidualReport(
        equation=tag,
        max_abs=float(mag.max()),
        l2=float(np.sqrt(grid.hu * grid.hv * np.sum(mag**2))),
        n_interior=n,
        h_u=grid.hu,
        h_v=grid.hv,
        values=full,
        interior=interior,
    )


def log_polar(a: AlphaField) -> LogPolarField:
    """Split alpha into e^X and the unwrapped angle Y, per component."""
    adm = a.mask.admissible
    if not adm.any():
        raise EmptyAdmissibleSetError("alpha field is fully masked")
    with np.errstate(all="ignore"):
        X = np.where(adm, np.log(np.abs(a.values)), np.nan)
        ang = np.where(adm, np.angle(a.values), 0.0)
    Y, ok = kernels.unwrap_masked(ang, adm)
    return LogPolarField(
        X=ScalarField(a.grid, X, adm.copy()),
        Y=ScalarField(a.grid, Y, adm.copy()),
        ok=ok,
    )


def residual_complex(a: AlphaField) -> ResidualReport:
    """Residual of the complex form, Delta(X + iY) = 2 alpha."""
    lp = log_polar(a)
    lp.require_unwrapped()
    lapX = laplacian(lp.X)
    lapY = laplacian(lp.Y)
    interior = lapX.mask & lapY.mask
    res = (lapX.values - 2.0 * a.values.real) + 1j * (lapY.values - 2.0 * a.values.imag)
    return _report("log_alpha", a.grid, res, interior)


def residual_systemXY(lp: LogPolarField) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the two real equations in the X/Y variables."""
    lp.require_unwrapped()
    grid = lp.X.grid
    lapX = laplacian(lp.X)
    lapY = laplacian(lp.Y)
    interior = lapX.mask & lapY.mask
    with np.errstate(all="ignore"):
        eX = np.exp(lp.X.values)
        resX = lapX.values - 2.0 * eX * np.cos(lp.Y.values)
        resY = lapY.values - 2.0 * eX * np.sin(lp.Y.values)
    return (
        _report("xy_log", grid, resX, interior),
        _report("xy_angle", grid, resY, interior),
    )


def residual_system1(c: CurvatureField, tol: float = 1e-9) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the curvature system in (K, kappa).

    The angle field atan(kappa/K) is realized as unwrapped atan2(kappa, K);
    admissibility additionally requires K^2 + kappa^2 > tol^4.
    """
    grid = c.grid
    with np.errstate(all="ignore"):
        a2 = c.K**2 + c.kappa**2
        adm = c.mask.admissible & np.isfinite(a2) & (a2 > tol**4)
        q = np.where(adm, a2**0.25, np.nan)
        logq = np.where(adm, np.log(q), np.nan)
        ang = np.where(adm, np.arctan2(c.kappa, c.K), 0.0)
    if not adm.any():
        raise EmptyAdmissibleSetError("curvature field is fully masked")
    phi, ok = kernels.unwrap_masked(ang, adm)
    if not ok:
        raise UnwrapError("curvature angle field is not unwrappable")
    lap_logq = laplacian(ScalarField(grid, logq, adm))
    lap_phi = laplacian(ScalarField(grid, phi, adm))
    interior = lap_logq.mask & lap_phi.mask
    res1 = q * lap_logq.values - 2.0 * c.K
    res2 = q * lap_phi.values - 2.0 * c.kappa
    return (
        _report("curvature_log", grid, res1, interior),
        _report("curvature_angle", grid, res2, interior),
    )


def check_harmonic(s: HarmonicScalar, grid: GridSpec) -> ResidualReport:
    """Laplacian residual of the real and imaginary parts of a harmonic scalar."""
    with np.errstate(all="ignore"):
        val = s.value(grid.zgrid())
    adm = np.isfinite(val)
    lap_re = laplacian(ScalarField(grid, np.where(adm, val.real, np.nan), adm))
    lap_im = laplacian(ScalarField(grid, np.where(adm, val.imag, np.nan), adm))
    interior = lap_re.mask & lap_im.mask
    res = lap_re.values + 1j * lap_im.values
    return _report("harmonic", grid, res, interior)


def write_residual_csv(report: ResidualReport, grid: GridSpec, path):
    """Dump a residual field as u,v,residual rows (complex split in two)."""
    complex_valued = np.iscomplexobj(report.values)
    header = "u,v,re_residual,im_residual" if complex_valued else "u,v,residual"
    us, vs = grid.us(), grid.vs()
    lines = [header]
    fmt = "{:.17g}"
    for i in range(grid.nv):
        for j in range(grid.nu):
            val = report.values[i, j]
            cells = [fmt.format(us[j]), fmt.format(vs[i])]
            if complex_valued:
                cells += [fmt.format(val.real), fmt.format(val.imag)]
            else:
                cells.append(fmt.format(val))
            lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def convergence_slope(reports: list[ResidualReport]) -> float:
    """Log-log slope of max residual versus grid step across refinements."""
    if len(reports) < 2:
        raise ValueError("need at least two refinement levels for a slope")
    h = np.array([r.h_u for r in reports])
    m = np.array([r.max_abs for r in reports])
    return float(np.polyfit(np.log(h), np.log(m), 1)[0])


def refinement_study(make_reports, grid: GridSpec, levels: int):
    """Run ``make_reports(grid)`` on successively refined grids.

    ``make_reports`` returns a list of ResidualReports per grid; the result
    is (per-level report lists, {equation: slope}).
    """
    grids = [grid]
    for _ in range(levels - 1):
        grids.append(grids[-1].refined())
    per_level = [make_reports(g) for g in grids]
    slopes = {}
    for idx, rep in enumerate(per_level[0]):
        chain = [level[idx] for level in per_level]
        slopes[rep.equation] = convergence_slope(chain) if len(chain) > 1 else None
        chain[-1].slope = slopes[rep.equation]
    return per_level, slopes
