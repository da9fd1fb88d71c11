"""Canonical Weierstrass frames, surface jets, curvature cross-checks, meshes.

Ambient conventions (recorded, since they are not forced uniquely by the
formulas alone):

* metric signature diag(+1, +1, +1, -1), index 4 time-like:
  <x, y> = x1 y1 + x2 y2 + x3 y3 - x4 y4;
* frame normalization Phi = x_u - i x_v, i.e. x_u = Re Phi, x_v = -Im Phi
  and x = x0 + Re(integral of Phi dz).  This is the unique scaling under
  which the canonical second-fundamental-form conditions
  <s11, s12> = 0, <s11, s11> - <s12, s12> = 1 hold and the extrinsic Gauss
  curvature reproduces |alpha| Re alpha.  It implies E |alpha| = 1 for the
  conformal factor E = <x_u, x_u> and <Phi, conj Phi> |alpha| = 2 for the
  frame norm (which equals 2E);
* the normal frame (n1 space-like, n2 time-like) is oriented so that
  (e1, e2, n1, n2) is positively oriented in R^4; with that choice the
  normal-connection curvature 2 (p1 q2 - q1 p2) / E^2 matches
  |alpha| Im alpha including sign (KAPPA_SIGN below stays +1).

The square-root prefactor 1/sqrt(W) takes the principal branch at the
basepoint of each connected admissible component and is continued by
phase unwrapping, so Phi is continuous per component; a global sign flip
of Phi is equivalent.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DisconnectedBasepointError, EmptyAdmissibleSetError, UnwrapError
from .expr import Call, Const, Mul, Pow, Sub, differentiate, evaluate
from .fields import AdmissibilityMask, CurvatureField, GridSpec, Reason
from .pairs import PairG, PairH, PairW, admissibility

__all__ = [
    "KAPPA_SIGN",
    "mdot",
    "PhiFrame",
    "SurfaceJet",
    "SecondFundamentalData",
    "SurfaceMesh",
    "phi_from_h",
    "phi_from_w",
    "phi_from_g",
    "jet",
    "second_fundamental",
    "curvatures_extrinsic",
    "default_basepoint",
    "integrate_surface",
    "integrate_lpath",
    "export_mesh",
]

# global sign of the normal-connection curvature under the det-positive
# normal orientation; calibrated once on the surface theta = u + iu
KAPPA_SIGN = 1.0


def mdot(x, y):
    """Minkowski inner product over stacked 4-vectors (component axis 0)."""
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]


@dataclass
class PhiFrame:
    """The four Weierstrass components and their z-derivatives on a grid."""

    grid: GridSpec
    rep: str
    phi: np.ndarray  # complex128, (4, nv, nu)
    dphi: np.ndarray  # complex128, (4, nv, nu)
    mask: AdmissibilityMask

    def phi_norm(self) -> np.ndarray:
        """<Phi, conj Phi>; positive exactly on the admissible set."""
        return mdot(self.phi, np.conj(self.phi)).real

    def isotropy(self) -> np.ndarray:
        """phi1^2 + phi2^2 + phi3^2 - phi4^2; an algebraic zero."""
        return mdot(self.phi, self.phi)


def _branch_sqrt(w_values: np.ndarray, admissible: np.ndarray) -> np.ndarray:
    """Continuous square root of a nonvanishing field per component."""
    with np.errstate(all="ignore"):
        ang = np.where(admissible, np.angle(w_values), 0.0)
    unwrapped, ok = kernels.unwrap_masked(ang, admissible)
    if not ok:
        raise UnwrapError("square-root prefactor has no single-valued branch")
    with np.errstate(all="ignore"):
        return np.sqrt(np.abs(w_values)) * np.exp(0.5j * unwrapped)


def _build_frame(tag, pair, grid, tol, numerators, w_expr, half) -> PhiFrame:
    mask = admissibility(pair, grid, tol)
    zv = grid.zgrid()
    with np.errstate(all="ignore"):
        wv = evaluate(w_expr, zv)
        wp = evaluate(differentiate(w_expr), zv)
    s = _branch_sqrt(wv, mask.admissible)
    denom = 2.0 * s if half else s
    phi = np.empty((4,) + zv.shape, dtype=np.complex128)
    dphi = np.empty((4,) + zv.shape, dtype=np.complex128)
    with np.errstate(all="ignore"):
        for k, nk in enumerate(numerators):
            nv_ = evaluate(nk, zv)
            npv = evaluate(differentiate(nk), zv)
            phi[k] = nv_ / denom
            dphi[k] = (npv - nv_ * wp / (2.0 * wv)) / denom
    bad = ~(np.isfinite(phi).all(axis=0) & np.isfinite(dphi).all(axis=0))
    mask.exclude(bad, Reason.POLE)
    keep = mask.admissible
    phi[:, ~keep] = np.nan
    dphi[:, ~keep] = np.nan
    return PhiFrame(grid, tag, phi, dphi, mask)


def phi_from_h(p: PairH, grid: GridSpec, tol: float = 1e-9) -> PhiFrame:
    d1, d2 = differentiate(p.h1), differentiate(p.h2)
    w_expr = Sub(Pow(d1, 2), Pow(d2, 2))
    numerators = [
        Mul(Const(1j), Call("cosh", p.h1)),
        Call("sinh", p.h1),
        Call("cosh", p.h2),
        Call("sinh", p.h2),
    ]
    return _build_frame("h", p, grid, tol, numerators, w_expr, half=False)


def phi_from_w(p: PairW, grid: GridSpec, tol: float = 1e-9) -> PhiFrame:
    a = (p.w1 + p.w2) / 2
    b = (p.w1 - p.w2) / 2
    w_expr = Mul(differentiate(p.w1), differentiate(p.w2))
    numerators = [
        Mul(Const(1j), Call("cosh", a)),
        Call("sinh", a),
        Call("cosh", b),
        Call("sinh", b),
    ]
    return _build_frame("w", p, grid, tol, numerators, w_expr, half=False)


def phi_from_g(p: PairG, grid: GridSpec, tol: float = 1e-9) -> PhiFrame:
    prod = Mul(p.g1, p.g2)
    w_expr = Mul(differentiate(p.g1), differentiate(p.g2))
    numerators = [
        Mul(Const(1j), prod + 1),
        prod - 1,
        p.g1 + p.g2,
        p.g1 - p.g2,
    ]
    return _build_frame("g", p, grid, tol, numerators, w_expr, half=True)


@dataclass
class SurfaceJet:
    """First and second derivative vectors of the immersion."""

    grid: GridSpec
    x_u: np.ndarray  # float64, (4, nv, nu)
    x_v: np.ndarray
    x_uu: np.ndarray
    x_uv: np.ndarray
    x_vv: np.ndarray
    E: np.ndarray  # conformal factor <x_u, x_u>
    mask: np.ndarray  # bool


def jet(frame: PhiFrame) -> SurfaceJet:
    """Derivative vectors from Phi = x_u - i x_v and its z-derivative."""
    x_u = frame.phi.real.copy()
    x_v = -frame.phi.imag
    x_uu = frame.dphi.real.copy()
    x_uv = -frame.dphi.imag
    x_vv = -x_uu
    E = mdot(x_u, x_u)
    return SurfaceJet(frame.grid, x_u, x_v, x_uu, x_uv, x_vv, E, frame.mask.admissible.copy())


@dataclass
class SecondFundamentalData:
    """Normal components of the second derivatives; s22 = -s11 by minimality."""

    jet: SurfaceJet
    sigma11: np.ndarray  # (4, nv, nu)
    sigma12: np.ndarray
    mask: np.ndarray

    @property
    def sigma22(self) -> np.ndarray:
        return -self.sigma11

    @property
    def E(self) -> np.ndarray:
        return self.jet.E


def second_fundamental(j: SurfaceJet, tol: float = 1e-9) -> SecondFundamentalData:
    """Project x_uu and x_uv onto the normal space."""
    mask = j.mask & np.isfinite(j.E) & (j.E > tol)
    with np.errstate(all="ignore"):
        E = np.where(mask, j.E, np.nan)
        s11 = j.x_uu - (mdot(j.x_uu, j.x_u) / E) * j.x_u - (mdot(j.x_uu, j.x_v) / E) * j.x_v
        s12 = j.x_uv - (mdot(j.x_uv, j.x_u) / E) * j.x_u - (mdot(j.x_uv, j.x_v) / E) * j.x_v
    return SecondFundamentalData(j, s11, s12, mask)


def _normal_frame(j: SurfaceJet, mask: np.ndarray, tol: float):
    """Orthonormal normal pair (n1 space-like, n2 time-like), det-oriented.

    The projection of the time-like axis onto the normal space is always
    time-like for a space-like surface, so n2 never degenerates; n1 is
    seeded from the first space-like axis whose orthogonalized projection
    clears the tolerance.
    """
    shape = j.x_u.shape
    with np.errstate(all="ignore"):
        E = np.where(mask, j.E, np.nan)

        def project(axis_idx):
            v = np.zeros(shape)
            v[axis_idx] = 1.0
            return v - (mdot(v, j.x_u) / E) * j.x_u - (mdot(v, j.x_v) / E) * j.x_v

        n2 = project(3)
        nn2 = -mdot(n2, n2)
        n2 = n2 / np.sqrt(nn2)

        n1 = np.full(shape, np.nan)
        found = np.zeros(shape[1:], dtype=bool)
        for axis_idx in (0, 1, 2):
            m = project(axis_idx)
            m = m + mdot(m, n2) * n2  # remove the time-like component
            mm = mdot(m, m)
            sel = mask & ~found & np.isfinite(mm) & (mm > tol)
            if sel.any():
                cand = m / np.sqrt(mm)
                n1[:, sel] = cand[:, sel]
            found |= sel

        # orient (e1, e2, n1, n2) positively; flips are absorbed into n2
        e1 = j.x_u / np.sqrt(E)
        e2 = j.x_v / np.sqrt(E)
        rows = np.stack([e1, e2, n1, n2], axis=0)  # (4 rows, 4 comps, nv, nu)
        mats = np.moveaxis(rows, (0, 1), (2, 3))  # (nv, nu, 4, 4)
        det = np.where(found, np.linalg.det(np.nan_to_num(mats)), 1.0)
        n2 = n2 * np.where(det < 0, -1.0, 1.0)
    return n1, n2, mask & found


def curvatures_extrinsic(s: SecondFundamentalData, tol: float = 1e-9) -> CurvatureField:
    """Gauss curvature from the Gauss equation and normal curvature from the
    shape-operator commutator in an orthonormal adapted frame."""
    j = s.jet
    n1, n2, mask = _normal_frame(j, s.mask, tol)
    with np.errstate(all="ignore"):
        E = np.where(mask, j.E, np.nan)
        K = (mdot(s.sigma11, s.sigma22) - mdot(s.sigma12, s.sigma12)) / E**2
        p1 = mdot(s.sigma11, n1)
        p2 = mdot(s.sigma11, n2)
        q1 = mdot(s.sigma12, n1)
        q2 = mdot(s.sigma12, n2)
        kappa = KAPPA_SIGN * 2.0 * (p1 * q2 - q1 * p2) / E**2
    reason = np.where(mask, int(Reason.OK), int(Reason.DENOMINATOR_DEGENERATE)).astype(np.uint8)
    out_mask = AdmissibilityMask(j.grid, mask, reason, tol)
    return CurvatureField(j.grid, K, kappa, out_mask)


# ---------------------------------------------------------------------------
# integration and meshes

@dataclass
class SurfaceMesh:
    """Integrated vertex positions over the basepoint's admissible component."""

    grid: GridSpec
    positions: np.ndarray  # float64, (4, nv, nu)
    visited: np.ndarray  # bool
    basepoint: tuple[int, int]
    loop_residual: float
    K: np.ndarray | None = None
    kappa: np.ndarray | None = None

    def vertex_count(self) -> int:
        return int(self.visited.sum())


def default_basepoint(mask: np.ndarray, grid: GridSpec) -> tuple[int, int]:
    """Admissible index nearest the domain centre (row-major tie-break)."""
    if not mask.any():
        raise EmptyAdmissibleSetError("no admissible points to integrate from")
    zc = 0.5 * (grid.u0 + grid.u1) + 0.5j * (grid.v0 + grid.v1)
    dist = np.where(mask, np.abs(grid.zgrid() - zc), np.inf)
    k = int(np.argmin(dist))
    return np.unravel_index(k, mask.shape)


def _loop_closure(phi: np.ndarray, visited: np.ndarray, hu: float, hv: float) -> float:
    """Largest trapezoid circulation of Re(phi dz) around a fully visited cell."""
    eu = 0.5 * hu * (phi[:, :, :-1] + phi[:, :, 1:])
    ev = 0.5j * hv * (phi[:, :-1, :] + phi[:, 1:, :])
    loop = eu[:, :-1, :] + ev[:, :, 1:] - eu[:, 1:, :] - ev[:, :, :-1]
    cells = visited[:-1, :-1] & visited[:-1, 1:] & visited[1:, :-1] & visited[1:, 1:]
    if not cells.any():
        return 0.0
    return float(np.abs(loop.real[:, cells]).max())


def integrate_surface(
    frame: PhiFrame,
    basepoint: tuple[int, int] | None = None,
    curv: CurvatureField | None = None,
) -> SurfaceMesh:
    """Integrate x = Re(integral of Phi dz) over the basepoint's component.

    Breadth-first composite-trapezoid integration (row-first neighbor
    preference); vertices outside the component are omitted.
    """
    adm = frame.mask.admissible
    if basepoint is None:
        basepoint = default_basepoint(adm, frame.grid)
    i0, j0 = basepoint
    if not adm[i0, j0]:
        raise DisconnectedBasepointError(f"basepoint {basepoint} is not admissible")
    phi = np.nan_to_num(frame.phi)
    pos, visited = kernels.integrate_masked(
        phi, adm, i0, j0, frame.grid.hu, frame.grid.hv
    )
    pos[:, ~visited] = np.nan
    residual = _loop_closure(frame.phi, visited, frame.grid.hu, frame.grid.hv)
    K = kappa = None
    if curv is not None:
        K, kappa = curv.K, curv.kappa
    return SurfaceMesh(frame.grid, pos, visited, (int(i0), int(j0)), residual, K, kappa)


def _contiguous_from(mask_1d: np.ndarray, k0: int) -> np.ndarray:
    out = np.zeros_like(mask_1d)
    if not mask_1d[k0]:
        return out
    out[k0] = True
    if k0 + 1 < len(mask_1d):
        out[k0 + 1 :] = np.logical_and.accumulate(mask_1d[k0 + 1 :])
    if k0 > 0:
        out[:k0] = np.logical_and.accumulate(mask_1d[:k0][::-1])[::-1]
    return out


def integrate_lpath(frame: PhiFrame, basepoint: tuple[int, int], order: str = "row"):
    """Integrate along L-shaped grid paths (one row leg plus one column leg).

    order="row" walks the basepoint row first and then columns;
    order="column" the transpose.  Used to witness path independence.
    Returns (positions, reach mask).
    """
    if order not in ("row", "column"):
        raise ValueError("order must be 'row' or 'column'")
    grid = frame.grid
    adm = frame.mask.admissible
    i0, j0 = basepoint
    if not adm[i0, j0]:
        raise DisconnectedBasepointError(f"basepoint {basepoint} is not admissible")
    phi = np.nan_to_num(frame.phi)
    hu, hv = grid.hu, grid.hv
    nv, nu = adm.shape
    acc = np.zeros((4, nv, nu), dtype=np.complex128)
    reach = np.zeros((nv, nu), dtype=bool)
    eu = 0.5 * hu * (phi[:, :, :-1] + phi[:, :, 1:])  # (4, nv, nu-1)
    ev = 0.5j * hv * (phi[:, :-1, :] + phi[:, 1:, :])  # (4, nv-1, nu)
    if order == "row":
        leg = np.zeros((4, nu), dtype=np.complex128)
        if j0 + 1 < nu:
            leg[:, j0 + 1 :] = np.cumsum(eu[:, i0, j0:], axis=1)
        if j0 > 0:
            leg[:, :j0] = -np.cumsum(eu[:, i0, :j0][:, ::-1], axis=1)[:, ::-1]
        leg_reach = _contiguous_from(adm[i0, :], j0)
        acc[:, i0, :] = leg
        reach[i0, :] = leg_reach
        if i0 + 1 < nv:
            acc[:, i0 + 1 :, :] = leg[:, None, :] + np.cumsum(ev[:, i0:, :], axis=1)
            reach[i0 + 1 :, :] = leg_reach[None, :] & np.logical_and.accumulate(
                adm[i0 + 1 :, :], axis=0
            )
        if i0 > 0:
            acc[:, :i0, :] = leg[:, None, :] - np.cumsum(ev[:, :i0, :][:, ::-1, :], axis=1)[:, ::-1, :]
            reach[:i0, :] = leg_reach[None, :] & np.logical_and.accumulate(
                adm[:i0, :][::-1, :], axis=0
            )[::-1, :]
    else:
        leg = np.zeros((4, nv), dtype=np.complex128)
        if i0 + 1 < nv:
            leg[:, i0 + 1 :] = np.cumsum(ev[:, i0:, j0], axis=1)
        if i0 > 0:
            leg[:, :i0] = -np.cumsum(ev[:, :i0, j0][:, ::-1], axis=1)[:, ::-1]
        leg_reach = _contiguous_from(adm[:, j0], i0)
        acc[:, :, j0] = leg
        reach[:, j0] = leg_reach
        if j0 + 1 < nu:
            acc[:, :, j0 + 1 :] = leg[:, :, None] + np.cumsum(eu[:, :, j0:], axis=2)
            reach[:, j0 + 1 :] = leg_reach[:, None] & np.logical_and.accumulate(
                adm[:, j0 + 1 :], axis=1
            )
        if j0 > 0:
            acc[:, :, :j0] = leg[:, :, None] - np.cumsum(eu[:, :, :j0][:, :, ::-1], axis=2)[:, :, ::-1]
            reach[:, :j0] = leg_reach[:, None] & np.logical_and.accumulate(
                adm[:, :j0][:, ::-1], axis=1
            )[:, ::-1]
    pos = acc.real.copy()
    pos[:, ~reach] = np.nan
    return pos, reach


# ---------------------------------------------------------------------------
# export

_FMT = "{:.17g}"


def export_mesh(mesh: SurfaceMesh, proj: tuple[int, int, int], obj_path, csv_path):
    """Write an ASCII OBJ of a 3-coordinate projection plus a full sidecar CSV.

    Vertices are emitted row-major over the visited set; quads whose four
    corners are visited are split into two triangles.
    """
    grid = mesh.grid
    nv, nu = mesh.visited.shape
    index = np.zeros((nv, nu), dtype=np.int64)
    us, vs = grid.us(), grid.vs()
    obj_lines = []
    csv_lines = ["u,v,x1,x2,x3,x4,K,kappa"]
    count = 0
    for i in range(nv):
        for j in range(nu):
            if not mesh.visited[i, j]:
                continue
            count += 1
            index[i, j] = count
            x = mesh.positions[:, i, j]
            obj_lines.append(
                "v "
                + " ".join(_FMT.format(x[axis]) for axis in proj)
            )
            K = mesh.K[i, j] if mesh.K is not None else float("nan")
            kappa = mesh.kappa[i, j] if mesh.kappa is not None else float("nan")
            csv_lines.append(
                ",".join(
                    [_FMT.format(us[j]), _FMT.format(vs[i])]
                    + [_FMT.format(c) for c in x]
                    + [_FMT.format(K), _FMT.format(kappa)]
                )
            )
    n_faces = 0
    for i in range(nv - 1):
        for j in range(nu - 1):
            a, b = index[i, j], index[i, j + 1]
            c, d = index[i + 1, j + 1], index[i + 1, j]
            if a and b and c and d:
                obj_lines.append(f"f {a} {b} {c}")
                obj_lines.append(f"f {a} {c} {d}")
                n_faces += 2
    Path(obj_path).write_text("\n".join(obj_lines) + "\n")
    Path(csv_path).write_text("\n".join(csv_lines) + "\n")
    return count, n_faces
