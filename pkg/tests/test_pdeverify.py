"""Stencil, log-polar decomposition, and PDE residual tests."""

import numpy as np
import pytest

from minksurf.curvature import alpha_from_any, alpha_from_eta, alpha_from_g, curvatures
from minksurf.errors import UnwrapError
from minksurf.expr import Const, Var
from minksurf.fields import AdmissibilityMask, AlphaField, GridSpec, Reason, ScalarField
from minksurf.pairs import PairG, PairW, eta_from_xi, make_rep
from minksurf.pdeverify import (
    check_harmonic,
    convergence_slope,
    laplacian,
    log_polar,
    refinement_study,
    residual_complex,
    residual_system1,
    residual_systemXY,
)

GRID = GridSpec(-1, 1, -1, 1, 41, 41)


def _full(grid):
    return np.ones((grid.nv, grid.nu), dtype=bool)


def _scalar(grid, fn):
    zv = grid.zgrid()
    return ScalarField(grid, fn(zv.real, zv.imag), _full(grid))


def _alpha_field(grid, values):
    adm = np.isfinite(values) & (np.abs(values) > 0)
    reason = np.where(adm, 0, int(Reason.POLE)).astype(np.uint8)
    return AlphaField(grid, values, AdmissibilityMask(grid, adm, reason, 1e-9))


def test_laplacian_exact_on_quadratics():
    f = _scalar(GRID, lambda u, v: u**2 + v**2)
    lap = laplacian(f)
    # exact in real arithmetic; float noise is ~eps/h^2
    assert np.max(np.abs(lap.values[lap.mask] - 4.0)) < 5e-12


def test_laplacian_exact_on_linear():
    f = _scalar(GRID, lambda u, v: 3 * u - 2 * v)
    lap = laplacian(f)
    assert np.max(np.abs(lap.values[lap.mask])) < 5e-12


def test_laplacian_convergence_on_log():
    # Delta ln(1 + u^2 + v^2) = 4 / (1 + u^2 + v^2)^2
    maxes = []
    hs = []
    grid = GridSpec(-1, 1, -1, 1, 26, 26)
    for _ in range(4):
        f = _scalar(grid, lambda u, v: np.log(1 + u**2 + v**2))
        lap = laplacian(f)
        zv = grid.zgrid()
        exact = 4.0 / (1 + zv.real**2 + zv.imag**2) ** 2
        maxes.append(np.max(np.abs(lap.values - exact)[lap.mask]))
        hs.append(grid.hu)
        grid = grid.refined()
    slope = np.polyfit(np.log(hs), np.log(maxes), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_laplacian_anisotropic_grid():
    grid = GridSpec(-1, 1, -0.5, 0.5, 41, 31)
    assert grid.hu != grid.hv
    f = _scalar(grid, lambda u, v: u**2 - 3 * v**2)
    lap = laplacian(f)
    assert np.max(np.abs(lap.values[lap.mask] - (-4.0))) < 1e-11


def test_log_polar_constant_fields():
    vals = np.full((GRID.nv, GRID.nu), -4.0 + 0.0j)
    lp = log_polar(_alpha_field(GRID, vals))
    assert lp.ok
    assert np.allclose(lp.X.values, np.log(4.0))
    assert np.allclose(lp.Y.values, np.pi)

    vals = np.full((GRID.nv, GRID.nu), -2.0j)
    lp = log_polar(_alpha_field(GRID, vals))
    assert np.allclose(lp.X.values, np.log(2.0))
    assert np.allclose(lp.Y.values, -np.pi / 2)


def test_log_polar_reconstructs_alpha():
    a = alpha_from_any(make_rep("w", "z", "z"), GRID)
    lp = log_polar(a)
    assert lp.ok
    adm = a.mask.admissible
    rebuilt = np.exp(lp.X.values + 1j * lp.Y.values)
    assert np.max(np.abs(rebuilt[adm] - a.values[adm])) < 1e-14
    # X = -2 ln cosh u, Y = pi
    zv = GRID.zgrid()
    assert np.max(np.abs(lp.X.values[adm] + 2 * np.log(np.cosh(zv.real[adm])))) < 1e-13
    assert np.allclose(lp.Y.values[adm], np.pi)


def test_log_polar_winding_flagged():
    # alpha = z on an annulus-like mask encircling the origin cannot unwrap
    vals = GRID.zgrid().copy()
    adm = np.abs(vals) > 0.3
    reason = np.where(adm, 0, int(Reason.POLE)).astype(np.uint8)
    a = AlphaField(GRID, np.where(adm, vals, np.nan), AdmissibilityMask(GRID, adm, reason, 1e-9))
    lp = log_polar(a)
    assert not lp.ok
    with pytest.raises(UnwrapError):
        residual_complex(a)


def test_residual_complex_closed_forms():
    # g1 = g2 = z: Delta ln|alpha| = 2 Re alpha with Y constant
    r = residual_complex(alpha_from_g(make_rep("g", "z", "z"), GRID))
    assert r.max_abs < 2e-2

    # eta = u on [1, 2]: Delta(-2 ln u) = 2/u^2 = 2 alpha
    grid = GridSpec(1, 2, -0.5, 0.5, 41, 41)
    r2 = residual_complex(alpha_from_eta(eta_from_xi(make_rep("xi", "z", "z")), grid))
    assert r2.max_abs < 2e-2

    # theta = u: Delta(-2 ln cosh u) = -2 sech^2 u = 2 Re alpha
    r3 = residual_complex(alpha_from_any(make_rep("w", "z", "z"), GRID))
    assert r3.max_abs < 2e-2


@pytest.mark.parametrize(
    "builder",
    [
        lambda: (make_rep("g", "z", "z"), GRID),
        lambda: (PairW(Const(1 + 1j) * Var(), Const(1 - 1j) * Var()), GridSpec(-0.6, 0.6, -0.6, 0.6, 31, 31)),
        lambda: (eta_from_xi(make_rep("xi", "z", "z")), GridSpec(1, 2, -0.5, 0.5, 31, 31)),
    ],
)
def test_residual_convergence_order(builder):
    obj, grid = builder()

    def reports(g):
        return [residual_complex(alpha_from_any(obj, g))]

    per_level, slopes = refinement_study(reports, grid, 3)
    assert 1.8 <= slopes["log_alpha"] <= 2.2


def test_xy_form_equals_complex_form():
    for obj, grid in [
        (make_rep("g", "z", "z"), GRID),
        (PairW(Const(1 + 1j) * Var(), Const(1 - 1j) * Var()), GridSpec(-0.6, 0.6, -0.6, 0.6, 31, 31)),
    ]:
        a = alpha_from_any(obj, grid)
        rc = residual_complex(a)
        rx, ry = residual_systemXY(log_polar(a))
        interior = rc.interior
        assert np.nanmax(np.abs(rc.values.real - rx.values)[interior]) < 1e-13
        assert np.nanmax(np.abs(rc.values.imag - ry.values)[interior]) < 1e-13


def test_system1_matches_scaled_complex_form():
    grid = GridSpec(-1, 1, -1, 1, 21, 21)
    a = alpha_from_g(PairG(Var(), Const(1j) * Var()), grid)
    rc = residual_complex(a)
    c1, c2 = residual_system1(curvatures(a))
    interior = rc.interior
    aa = np.abs(a.values)
    assert np.nanmax(np.abs(c1.values - aa * rc.values.real)[interior]) < 1e-12
    assert np.nanmax(np.abs(c2.values - aa * rc.values.imag)[interior]) < 1e-12
    # ln (K^2 + kappa^2)^(1/4) equals X
    lp = log_polar(a)
    c = curvatures(a)
    adm = a.mask.admissible
    lhs = 0.25 * np.log(c.K[adm] ** 2 + c.kappa[adm] ** 2)
    assert np.max(np.abs(lhs - lp.X.values[adm])) < 1e-12


def test_system1_angle_equation_trivial_for_real_alpha():
    a = alpha_from_g(make_rep("g", "z", "z"), GRID)
    _, c2 = residual_system1(curvatures(a))
    assert c2.max_abs < 1e-13


def test_check_harmonic():
    grid = GRID
    eta = eta_from_xi(make_rep("xi", "z", "z"))
    assert check_harmonic(eta, grid).max_abs < 1e-12  # linear, exactly harmonic

    from minksurf.pairs import theta_from_w

    theta = theta_from_w(make_rep("w", "z", "z"))  # theta = u
    grid51 = GridSpec(-1, 1, -1, 1, 51, 51)
    assert check_harmonic(theta, grid51).max_abs < 1e-8

    theta = make_rep("theta", "z^3/6", "sinh(z)")
    assert check_harmonic(theta, grid).max_abs < 5e-3  # truncation only

    # negative control: u^2 is not harmonic, Delta = 2
    f = _scalar(grid, lambda u, v: u**2)
    lap = laplacian(f)
    assert abs(np.max(lap.values[lap.mask]) - 2.0) < 1e-10


def test_residual_spike_negative_control():
    a = alpha_from_g(make_rep("g", "z", "z"), GridSpec(-1, 1, -1, 1, 21, 21))
    c = curvatures(a)
    r_clean, _ = residual_system1(c)
    c.K[10, 10] += 0.01
    r_spiked, _ = residual_system1(c)
    diff = np.abs(np.nan_to_num(r_spiked.values) - np.nan_to_num(r_clean.values))
    hit = np.argwhere(diff > 1e-6)
    expected = {(10, 10), (9, 10), (11, 10), (10, 9), (10, 11)}
    assert set(map(tuple, hit)) == expected


def test_convergence_slope_needs_two_levels():
    a = alpha_from_g(make_rep("g", "z", "z"), GRID)
    with pytest.raises(ValueError):
        convergence_slope([residual_complex(a)])


def test_residual_field_csv_dump(tmp_path):
    from minksurf.pdeverify import write_residual_csv

    a = alpha_from_g(make_rep("g", "z", "z"), GridSpec(-1, 1, -1, 1, 11, 11))
    r = residual_complex(a)
    write_residual_csv(r, a.grid, tmp_path / "res.csv")
    lines = (tmp_path / "res.csv").read_text().splitlines()
    assert lines[0] == "u,v,re_residual,im_residual"
    assert len(lines) == 1 + 11 * 11


def test_report_serialization_keys():
    r = residual_complex(alpha_from_g(make_rep("g", "z", "z"), GRID))
    d = r.to_dict()
    assert set(d) == {"equation", "max_abs", "l2", "n_interior", "h_u", "h_v"}
    r.slope = 2.0
    assert "slope" in r.to_dict()
