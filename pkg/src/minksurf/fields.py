"""Grids, admissibility masks, and sampled fields with CSV/JSON export.

Grid sampling is row-major over v then u with inclusive endpoints: arrays
have shape (nv, nu) and CSV rows sweep u fastest.  All floats are written
with 17 significant digits so files round-trip losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np

from .errors import EmptyAdmissibleSetError, InputError

FLOAT_FMT = "{:.17g}"


class Reason(IntEnum):
    OK = 0
    DERIVATIVE_ZERO = 1
    DENOMINATOR_DEGENERATE = 2
    POLE = 3


REASON_NAMES = {
    Reason.OK: "ok",
    Reason.DERIVATIVE_ZERO: "derivative-zero",
    Reason.DENOMINATOR_DEGENERATE: "denominator-degenerate",
    Reason.POLE: "pole",
}


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling grid on [u0, u1] x [v0, v1]."""

    u0: float
    u1: float
    v0: float
    v1: float
    nu: int
    nv: int

    def __post_init__(self):
        if not (self.u0 < self.u1 and self.v0 < self.v1):
            raise InputError("grid bounds must satisfy u0 < u1 and v0 < v1")
        if self.nu < 3 or self.nv < 3:
            raise InputError("grids need at least 3 points per direction")

    @property
    def hu(self) -> float:
        return (self.u1 - self.u0) / (self.nu - 1)

    @property
    def hv(self) -> float:
        return (self.v1 - self.v0) / (self.nv - 1)

    def us(self) -> np.ndarray:
        return np.linspace(self.u0, self.u1, self.nu)

    def vs(self) -> np.ndarray:
        return np.linspace(self.v0, self.v1, self.nv)

    def zgrid(self) -> np.ndarray:
        """Complex sample points z = u + iv, shape (nv, nu)."""
        return self.us()[None, :] + 1j * self.vs()[:, None]

    def refined(self) -> "GridSpec":
        """Same bounds with both steps halved (n -> 2n - 1)."""
        return GridSpec(self.u0, self.u1, self.v0, self.v1, 2 * self.nu - 1, 2 * self.nv - 1)

    def to_dict(self) -> dict:
        return {
            "u0": self.u0,
            "u1": self.u1,
            "v0": self.v0,
            "v1": self.v1,
            "nu": self.nu,
            "nv": self.nv,
        }


@dataclass
class AdmissibilityMask:
    """Per-point validity of a representation's conditions on a grid."""

    grid: GridSpec
    admissible: np.ndarray  # bool, (nv, nu)
    reason: np.ndarray  # uint8 Reason codes, (nv, nu)
    tol: float

    def fraction(self) -> float:
        return float(self.admissible.mean())

    def count(self) -> int:
        return int(self.admissible.sum())

    def require_nonempty(self):
        if not self.admissible.any():
            raise EmptyAdmissibleSetError(
                f"no admissible grid points (tol={self.tol:g})"
            )

    def exclude(self, bad: np.ndarray, reason: Reason):
        hit = self.admissible & bad
        self.admissible[hit] = False
        self.reason[hit] = int(reason)

    def to_csv(self, path):
        lines = ["u,v,admissible,reason"]
        us, vs = self.grid.us(), self.grid.vs()
        for i in range(self.grid.nv):
            for j in range(self.grid.nu):
                lines.append(
                    f"{FLOAT_FMT.format(us[j])},{FLOAT_FMT.format(vs[i])},"
                    f"{int(self.admissible[i, j])},{REASON_NAMES[Reason(self.reason[i, j])]}"
                )
        Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class ScalarField:
    """Real field sampled on a grid; invalid points are masked."""

    grid: GridSpec
    values: np.ndarray  # float64, (nv, nu)
    mask: np.ndarray  # bool, (nv, nu)


@dataclass
class AlphaField:
    """Complex field alpha on a grid, nonzero and finite where admissible."""

    grid: GridSpec
    values: np.ndarray  # complex128, (nv, nu)
    mask: AdmissibilityMask


@dataclass
class CurvatureField:
    """Gauss curvature K and normal curvature kappa on a grid."""

    grid: GridSpec
    K: np.ndarray
    kappa: np.ndarray
    mask: AdmissibilityMask


def write_field_csv(path, alpha: AlphaField, curv: CurvatureField):
    """Combined alpha + curvature export, one row per grid point."""
    grid = alpha.grid
    adm = alpha.mask.admissible
    us, vs = grid.us(), grid.vs()
    lines = ["u,v,K,kappa,re_alpha,im_alpha,admissible"]
    for i in range(grid.nv):
        for j in range(grid.nu):
            lines.append(
                ",".join(
                    [
                        FLOAT_FMT.format(us[j]),
                        FLOAT_FMT.format(vs[i]),
                        FLOAT_FMT.format(curv.K[i, j]),
                        FLOAT_FMT.format(curv.kappa[i, j]),
                        FLOAT_FMT.format(alpha.values[i, j].real),
                        FLOAT_FMT.format(alpha.values[i, j].imag),
                        str(int(adm[i, j])),
                    ]
                )
            )
    Path(path).write_text("\n".join(lines) + "\n")


def write_field_header(path, csv_name: str, grid: GridSpec, tol: float, extra: dict | None = None):
    """JSON sidecar describing a CSV payload."""
    header = {
        "type": "curvature_field",
        "csv": csv_name,
        "grid": grid.to_dict(),
        "tol": tol,
        "columns": ["u", "v", "K", "kappa", "re_alpha", "im_alpha", "admissible"],
    }
    if extra:
        header.update(extra)
    Path(path).write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")


def read_curvature_csv(path) -> CurvatureField:
    """Load a field written by :func:`write_field_csv` (or the same schema)."""
    text = Path(path).read_text().strip().splitlines()
    if not text or not text[0].startswith("u,v,"):
        raise InputError(f"{path}: not a curvature CSV (missing header)")
    rows = [line.split(",") for line in text[1:]]
    data = np.array([[float(c) for c in row[:4]] for row in rows])
    adm_col = np.array([int(float(row[6])) if len(row) > 6 else 1 for row in rows], dtype=bool)
    us = np.unique(data[:, 0])
    vs = np.unique(data[:, 1])
    nu, nv = len(us), len(vs)
    if nu * nv != len(rows):
        raise InputError(f"{path}: grid is not rectangular")
    expected_u = np.tile(us, nv)
    expected_v = np.repeat(vs, nu)
    if not (np.array_equal(data[:, 0], expected_u) and np.array_equal(data[:, 1], expected_v)):
        raise InputError(f"{path}: rows must sweep u fastest, v-major")
    grid = GridSpec(float(us[0]), float(us[-1]), float(vs[0]), float(vs[-1]), nu, nv)
    K = data[:, 2].reshape(nv, nu)
    kappa = data[:, 3].reshape(nv, nu)
    adm = adm_col.reshape(nv, nu)
    reason = np.where(adm, int(Reason.OK), int(Reason.POLE)).astype(np.uint8)
    mask = AdmissibilityMask(grid, adm, reason, tol=0.0)
    return CurvatureField(grid, K, kappa, mask)
