"""Parser, evaluator, and symbolic-derivative tests."""

import math

import numpy as np
import pytest

from minksurf.expr import (
    Add,
    Call,
    Const,
    Div,
    ExprError,
    Mul,
    Pow,
    Sub,
    Var,
    differentiate,
    evaluate,
    parse,
    to_string,
)

from helpers import CORPUS, sample_points


def test_parse_variable():
    assert parse("z") == Var()


def test_parse_structure():
    assert parse("exp(2*z) - 1") == Sub(
        Call("exp", Mul(Const(2.0), Var())), Const(1.0)
    )


def test_parse_imaginary_unit():
    assert parse("i") == Const(1j)
    assert parse("3*i") == Mul(Const(3.0), Const(1j))


def test_parse_precedence():
    from minksurf.expr import Neg

    # ^ binds tighter than unary minus; * tighter than +; left associativity
    assert parse("-z^2") == Neg(Pow(Var(), 2))
    assert parse("2*z + 1") == Add(Mul(Const(2.0), Var()), Const(1.0))
    assert parse("z - z - z") == Sub(Sub(Var(), Var()), Var())
    assert parse("z/2/4") == Div(Div(Var(), Const(2.0)), Const(4.0))


def test_parse_errors_with_offsets():
    with pytest.raises(ExprError) as err:
        parse("z^^2")
    assert err.value.offset == 2

    with pytest.raises(ExprError) as err:
        parse("q + 1")
    assert err.value.offset == 0
    assert "unknown identifier" in str(err.value)

    with pytest.raises(ExprError) as err:
        parse("exp(z, z)")
    assert "exactly one argument" in str(err.value)

    with pytest.raises(ExprError):
        parse("")

    with pytest.raises(ExprError) as err:
        parse("z^1.5")
    assert "integer" in str(err.value)


def test_integer_exponents_stored_exactly():
    node = parse("z^3")
    assert isinstance(node, Pow) and node.exponent == 3
    assert parse("z^-2") == Pow(Var(), -2)
    assert parse("z^(2)") == Pow(Var(), 2)
    # right associativity folds constant towers
    assert parse("z^2^3") == Pow(Var(), 8)


def test_eval_trivial_values():
    assert evaluate(parse("z^2 + 1"), 1j) == 0
    assert evaluate(parse("cosh(z)"), 0.0) == 1.0


def test_eval_exp_against_series():
    # high-precision series oracle for e^1
    expected = math.fsum(1.0 / math.factorial(k) for k in range(25))
    got = evaluate(parse("exp(z)"), 1.0 + 0j)
    assert abs(got - expected) < 1e-15


def test_eval_pole_is_flagged_not_raised():
    val = evaluate(parse("1/z"), 0.0 + 0.0j)
    assert not np.isfinite(val)
    val = evaluate(parse("z^-2"), 0.0 + 0.0j)
    assert not np.isfinite(val)


def test_eval_principal_branches():
    assert evaluate(parse("sqrt(z)"), -1.0 + 0.0j) == pytest.approx(1j)
    assert evaluate(parse("log(z)"), -1.0 + 0.0j) == pytest.approx(1j * np.pi)


def test_eval_grid_matches_scalar():
    rng = np.random.default_rng(7)
    pts = sample_points(rng, 0.3 + 0.2j, 0.8, 16)
    expr = parse("exp(z)*z - sinh(z)/cosh(2 + z)")
    grid_vals = evaluate(expr, pts)
    for k, p in enumerate(pts):
        assert grid_vals[k] == evaluate(expr, complex(p))


def test_derivative_exp_is_exp():
    expr = parse("exp(z)")
    d = differentiate(expr)
    rng = np.random.default_rng(3)
    pts = sample_points(rng, 0.0, 1.5, 10)
    assert np.allclose(evaluate(d, pts), evaluate(expr, pts), rtol=0, atol=0)


def test_derivative_power_rule():
    assert evaluate(differentiate(parse("z^3")), 2.0 + 0.0j) == 12.0


def test_derivative_against_central_difference():
    rng = np.random.default_rng(11)
    h = 1e-5
    assert len(CORPUS) >= 20
    for text, centre, radius in CORPUS:
        expr = parse(text)
        d = differentiate(expr)
        pts = sample_points(rng, centre, radius, 5)
        sym = evaluate(d, pts)
        fd = (evaluate(expr, pts + h) - evaluate(expr, pts - h)) / (2 * h)
        err = np.abs(sym - fd)
        assert np.all(err <= 1e-8 * np.maximum(1.0, np.abs(sym))), text


def test_derivative_linearity():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a_text, _, _ = CORPUS[rng.integers(0, len(CORPUS))]
        b_text, _, _ = CORPUS[rng.integers(0, len(CORPUS))]
        a, b = parse(a_text), parse(b_text)
        c = complex(rng.standard_normal(), rng.standard_normal())
        combo = a + Const(c) * b
        z0 = complex(rng.uniform(0.2, 0.5), rng.uniform(0.2, 0.5))
        lhs = evaluate(differentiate(combo), z0)
        rhs = evaluate(differentiate(a), z0) + c * evaluate(differentiate(b), z0)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_cauchy_riemann_witness():
    rng = np.random.default_rng(13)
    h = 1e-5
    for text, centre, radius in CORPUS:
        expr = parse(text)
        pts = sample_points(rng, centre, radius, 4)
        fu = (evaluate(expr, pts + h) - evaluate(expr, pts - h)) / (2 * h)
        fv = (evaluate(expr, pts + 1j * h) - evaluate(expr, pts - 1j * h)) / (2 * h)
        assert np.all(np.abs(fv - 1j * fu) <= 1e-6 * np.maximum(1.0, np.abs(fu))), text


def test_print_parse_round_trip_structural():
    extra = ["-(z + 1)^2", "z - (z - z)", "2*z/(3*z)", "z^2^2", "--z", "z/ exp( z )"]
    for text in [t for t, _, _ in CORPUS] + extra:
        tree = parse(text)
        assert parse(to_string(tree)) == tree, text


def test_print_programmatic_constants_eval_equal():
    tree = Div(Add(Mul(Const(2 - 3j), Var()), Const(-1.5)), Const(0.25 + 1e-7j))
    reparsed = parse(to_string(tree))
    rng = np.random.default_rng(23)
    pts = sample_points(rng, 0.0, 1.0, 8)
    assert np.allclose(evaluate(reparsed, pts), evaluate(tree, pts), rtol=1e-15, atol=0)


def test_derivative_of_constant_power_is_zero():
    d = differentiate(Pow(Var(), 0))
    assert evaluate(d, 0.0 + 0.0j) == 0
