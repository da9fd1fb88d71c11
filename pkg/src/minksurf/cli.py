"""Command-line orchestration.

Subcommands: curvature | verify | surface | transform | equiv.  Flags may
also be supplied through a JSON config file (--config PATH); explicit flags
win.  Exit codes: 0 success, 2 input error, 3 numeric/domain failure.

Note: values starting with a dash need the ``--flag=value`` form, e.g.
``--domain=-1,1,-1,1``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from types import SimpleNamespace

from .curvature import alpha_from_any, curvatures
from .errors import InputError, NumericError
from .expr import ExprError
from .fields import (
    GridSpec,
    read_curvature_csv,
    write_field_csv,
    write_field_header,
)
from .moebius import MoebiusParams, same_solution, transform
from .pairs import make_rep, rep_to_dict
from .pdeverify import (
    log_polar,
    refinement_study,
    residual_complex,
    residual_system1,
    residual_systemXY,
    write_residual_csv,
)
from .weierstrass import (
    export_mesh,
    integrate_surface,
    jet,
    mdot,
    phi_from_g,
    phi_from_h,
    phi_from_w,
    second_fundamental,
)

import numpy as np

_DEFAULTS = {
    "rep": "g",
    "f1": None,
    "f2": None,
    "f1b": None,
    "f2b": None,
    "domain": "-1,1,-1,1",
    "n": 101,
    "nu": None,
    "nv": None,
    "tol": 1e-9,
    "seed": 12345,
    "out": ".",
    "refine": 1,
    "from_field": None,
    "dump_residuals": False,
    "proj": "1,2,3",
    "params": None,
}

_FMT = "{:.17g}"


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rep", choices=["h", "w", "g", "theta", "eta", "xi"])
    common.add_argument("--f1", help="first expression (or harmonic half A)")
    common.add_argument("--f2", help="second expression (or harmonic half B)")
    common.add_argument("--domain", help="u0,u1,v0,v1 (use --domain=-1,1,-1,1)")
    common.add_argument("--n", type=int, help="points per direction")
    common.add_argument("--nu", type=int)
    common.add_argument("--nv", type=int)
    common.add_argument("--tol", type=float, help="admissibility tolerance")
    common.add_argument("--seed", type=int, help="seed recorded in outputs")
    common.add_argument("--out", help="output directory")
    common.add_argument("--config", help="JSON config mirroring the flags")

    parser = argparse.ArgumentParser(
        prog="minksurf",
        description="Curvature fields, PDE verification, surfaces, and "
        "fractional-linear equivalence for minimal space-like surfaces.",
    )
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("curvature", parents=[common], help="alpha and (K, kappa) CSV export")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("verify", parents=[common], help="PDE residual reports")
    p.add_argument("--refine", type=int, help="number of refinement levels")
    p.add_argument("--from-field", dest="from_field", help="curvature CSV to verify")
    p.add_argument(
        "--dump-residuals",
        dest="dump_residuals",
        action="store_const",
        const=True,
        help="also write per-equation residual fields as CSV",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("surface", parents=[common], help="integrate and export the surface mesh")
    p.add_argument("--proj", help="1-based coordinate triple for the OBJ, e.g. 1,2,4")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("transform", parents=[common], help="apply fractional-linear parameters to a g-pair")
    p.add_argument("--params", help='JSON {"a":[re,im],"b":...,"c":...,"d":...}')
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("equiv", parents=[common], help="decide whether two g-pairs generate the same solution")
    p.add_argument("--f1b", help="first expression of the second pair")
    p.add_argument("--f2b", help="second expression of the second pair")
    p.set_defaults(func=cmd_equiv)
    return parser


def _resolve(args: argparse.Namespace) -> SimpleNamespace:
    cfg = dict(_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"config {config_path}: {exc}") from None
        unknown = set(data) - set(cfg)
        if unknown:
            raise InputError(f"config has unknown keys: {sorted(unknown)}")
        cfg.update(data)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return SimpleNamespace(**cfg)


def _grid(cfg) -> GridSpec:
    dom = cfg.domain
    if isinstance(dom, str):
        parts = dom.split(",")
    else:
        parts = list(dom)
    if len(parts) != 4:
        raise InputError("--domain needs u0,u1,v0,v1")
    u0, u1, v0, v1 = (float(p) for p in parts)
    nu = cfg.nu if cfg.nu else cfg.n
    nv = cfg.nv if cfg.nv else cfg.n
    return GridSpec(u0, u1, v0, v1, int(nu), int(nv))


def _rep_obj(cfg):
    if not cfg.f1 or not cfg.f2:
        raise InputError("--f1 and --f2 are required")
    return make_rep(cfg.rep, cfg.f1, cfg.f2)


def _outdir(cfg) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc: dict):
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _params_from(cfg) -> MoebiusParams:
    if not cfg.params:
        raise InputError("--params is required")
    if isinstance(cfg.params, dict):
        return MoebiusParams.from_dict(cfg.params)
    return MoebiusParams.from_json(cfg.params)


def cmd_curvature(cfg) -> int:
    obj = _rep_obj(cfg)
    grid = _grid(cfg)
    alpha = alpha_from_any(obj, grid, cfg.tol)
    alpha.mask.require_nonempty()
    curv = curvatures(alpha)
    out = _outdir(cfg)
    write_field_csv(out / "curvature.csv", alpha, curv)
    write_field_header(
        out / "curvature.json",
        "curvature.csv",
        grid,
        cfg.tol,
        extra={"rep": cfg.rep, "f1": cfg.f1, "f2": cfg.f2, "seed": cfg.seed},
    )
    alpha.mask.to_csv(out / "mask.csv")
    adm = alpha.mask.admissible
    print(f"admissible fraction: {_FMT.format(alpha.mask.fraction())}")
    print(
        "K range: "
        f"[{_FMT.format(curv.K[adm].min())}, {_FMT.format(curv.K[adm].max())}]"
    )
    print(
        "kappa range: "
        f"[{_FMT.format(curv.kappa[adm].min())}, {_FMT.format(curv.kappa[adm].max())}]"
    )
    return 0


def cmd_verify(cfg) -> int:
    out = _outdir(cfg)
    if cfg.from_field:
        print(
            "caveat: externally supplied fields are assumed to be sampled in "
            "canonical coordinates; residuals are computed as-is"
        )
        curv = read_curvature_csv(cfg.from_field)
        reports = list(residual_system1(curv, cfg.tol))
        doc = {
            "source": str(cfg.from_field),
            "grid": curv.grid.to_dict(),
            "reports": [[r.to_dict() for r in reports]],
            "slopes": {},
            "seed": cfg.seed,
        }
        _write_json(out / "residuals.json", doc)
        if cfg.dump_residuals:
            for r in reports:
                write_residual_csv(r, curv.grid, out / f"residual_{r.equation}.csv")
        for r in reports:
            print(f"{r.equation}: max_abs={_FMT.format(r.max_abs)} l2={_FMT.format(r.l2)}")
        return 0

    obj = _rep_obj(cfg)
    grid = _grid(cfg)

    def make_reports(g):
        alpha = alpha_from_any(obj, g, cfg.tol)
        alpha.mask.require_nonempty()
        rc = residual_complex(alpha)
        rx, ry = residual_systemXY(log_polar(alpha))
        c1, c2 = residual_system1(curvatures(alpha), cfg.tol)
        return [rc, rx, ry, c1, c2]

    levels = max(1, int(cfg.refine))
    if levels > 1:
        per_level, slopes = refinement_study(make_reports, grid, levels)
    else:
        per_level, slopes = [make_reports(grid)], {}
    grids = [grid]
    for _ in range(levels - 1):
        grids.append(grids[-1].refined())
    doc = {
        "rep": cfg.rep,
        "f1": cfg.f1,
        "f2": cfg.f2,
        "grids": [g.to_dict() for g in grids],
        "reports": [[r.to_dict() for r in level] for level in per_level],
        "slopes": slopes,
        "seed": cfg.seed,
    }
    _write_json(out / "residuals.json", doc)
    if cfg.dump_residuals:
        for r in per_level[-1]:
            write_residual_csv(r, grids[-1], out / f"residual_{r.equation}.csv")
    for r in per_level[-1]:
        line = f"{r.equation}: max_abs={_FMT.format(r.max_abs)} l2={_FMT.format(r.l2)}"
        if r.equation in slopes and slopes[r.equation] is not None:
            line += f" slope={_FMT.format(slopes[r.equation])}"
        print(line)
    return 0


def cmd_surface(cfg) -> int:
    if cfg.rep not in ("h", "w", "g"):
        raise InputError("surface export needs --rep h, w, or g")
    obj = _rep_obj(cfg)
    grid = _grid(cfg)
    builder = {"h": phi_from_h, "w": phi_from_w, "g": phi_from_g}[cfg.rep]
    frame = builder(obj, grid, cfg.tol)
    frame.mask.require_nonempty()
    alpha = alpha_from_any(obj, grid, cfg.tol)
    curv = curvatures(alpha)
    j = jet(frame)
    sff = second_fundamental(j, cfg.tol)
    sm = sff.mask
    canon_orth = float(np.nanmax(np.abs(mdot(sff.sigma11, sff.sigma12)[sm])))
    canon_norm = float(
        np.nanmax(
            np.abs(
                mdot(sff.sigma11, sff.sigma11)[sm]
                - mdot(sff.sigma12, sff.sigma12)[sm]
                - 1.0
            )
        )
    )
    adm = frame.mask.admissible
    norm_law = float(
        np.nanmax(np.abs(frame.phi_norm()[adm] * np.abs(alpha.values[adm]) - 2.0))
    )
    mesh = integrate_surface(frame, curv=curv)
    proj_parts = cfg.proj.split(",") if isinstance(cfg.proj, str) else list(cfg.proj)
    proj = tuple(int(p) - 1 for p in proj_parts)
    if len(proj) != 3 or len(set(proj)) != 3 or any(k not in (0, 1, 2, 3) for k in proj):
        raise InputError("--proj needs three distinct coordinates in 1..4")
    out = _outdir(cfg)
    nverts, nfaces = export_mesh(mesh, proj, out / "surface.obj", out / "surface_data.csv")
    print(f"vertices: {nverts}")
    print(f"triangles: {nfaces}")
    print(f"canonicity <s11,s12>: {_FMT.format(canon_orth)}")
    print(f"canonicity <s11,s11>-<s12,s12>-1: {_FMT.format(canon_norm)}")
    print(f"frame-norm law |<Phi,conj Phi>|alpha| - 2|: {_FMT.format(norm_law)}")
    print(f"loop residual: {_FMT.format(mesh.loop_residual)}")
    return 0


def cmd_transform(cfg) -> int:
    if cfg.rep != "g":
        raise InputError("transform acts on g-pairs (--rep g)")
    p = _rep_obj(cfg)
    m = _params_from(cfg)
    q = transform(p, m)
    out = _outdir(cfg)
    doc = {
        "input": rep_to_dict(p),
        "params": m.to_dict(),
        "transformed": rep_to_dict(q),
        "seed": cfg.seed,
    }
    _write_json(out / "transformed.json", doc)
    print(f"g1 -> {doc['transformed']['f1']}")
    print(f"g2 -> {doc['transformed']['f2']}")
    return 0


def cmd_equiv(cfg) -> int:
    if cfg.rep != "g":
        raise InputError("equiv compares g-pairs (--rep g)")
    p = _rep_obj(cfg)
    if not cfg.f1b or not cfg.f2b:
        raise InputError("--f1b and --f2b are required")
    q = make_rep("g", cfg.f1b, cfg.f2b)
    grid = _grid(cfg)
    report = same_solution(p, q, grid, mask_tol=cfg.tol)
    out = _outdir(cfg)
    doc = {
        "pair_a": rep_to_dict(p),
        "pair_b": rep_to_dict(q),
        "report": report.to_dict(),
        "grid": grid.to_dict(),
        "seed": cfg.seed,
    }
    _write_json(out / "equiv.json", doc)
    print(
        f"same solution: {'true' if report.equal else 'false'} "
        f"(max relative deviation {_FMT.format(report.max_rel_dev)} "
        f"over {report.n_common} points)"
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = _resolve(args)
        return args.func(cfg)
    except (ExprError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
