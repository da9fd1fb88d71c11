"""Expression language for holomorphic functions of one complex variable.

The grammar (whitespace insignificant)::

    expr   :=  term (('+' | '-') term)*
    term   :=  unary (('*' | '/') unary)*
    unary  :=  '-' unary | power
    power  :=  atom ('^' unary)?
    atom   :=  NUMBER | 'z' | 'i' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   :=  'exp' | 'log' | 'sinh' | 'cosh' | 'sqrt'

Binary '+', '-', '*', '/' are left associative, '^' is right associative
and binds tighter than unary minus.  Exponents must fold to plain integers
at parse time and are stored exactly; non-integer powers are rejected
(write exp(c*log(z)) instead).  log and sqrt evaluate on their principal
branches.  Evaluation at poles or branch points yields non-finite complex
values instead of raising, so grid sweeps never abort.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Call",
    "ExprError",
    "Z",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "differentiate",
    "to_string",
]

FUNCTIONS = ("exp", "log", "sinh", "cosh", "sqrt")


class ExprError(ValueError):
    """Malformed expression; ``offset`` is the byte position in the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class Expr:
    """Immutable node of a holomorphic expression tree.

    Arithmetic operators build new trees, so downstream code can write
    ``h1 + h2`` or ``1 / g1`` and get expressions back.
    """

    __slots__ = ()

    def __add__(self, other):
        return Add(self, _coerce(other))

    def __radd__(self, other):
        return Add(_coerce(other), self)

    def __sub__(self, other):
        return Sub(self, _coerce(other))

    def __rsub__(self, other):
        return Sub(_coerce(other), self)

    def __mul__(self, other):
        return Mul(self, _coerce(other))

    def __rmul__(self, other):
        return Mul(_coerce(other), self)

    def __truediv__(self, other):
        return Div(self, _coerce(other))

    def __rtruediv__(self, other):
        return Div(_coerce(other), self)

    def __pow__(self, n):
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, slots=True)
class Var(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, (int, np.integer)):
            raise TypeError("power exponent must be an integer")
        object.__setattr__(self, "exponent", int(self.exponent))


@dataclass(frozen=True, slots=True)
class Call(Expr):
    fn: str
    arg: Expr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


Z = Var()


def _coerce(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex, np.integer, np.floating, np.complexfloating)):
        return Const(complex(x))
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


# ---------------------------------------------------------------------------
# parsing

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"(?P<num>{_NUMBER})|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),])|(?P<ws>\s+)"
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._k = 0

    def peek(self) -> _Token:
        return self._tokens[self._k]

    def advance(self) -> _Token:
        tok = self._tokens[self._k]
        self._k += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            shown = tok.text if tok.kind != "end" else "end of input"
            raise ExprError(f"expected {op!r}, found {shown!r}", tok.pos)
        return self.advance()

    def parse_sum(self) -> Expr:
        node = self.parse_term()
        while self.at_op("+", "-"):
            op = self.advance().text
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            rhs = self.parse_unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_unary(self) -> Expr:
        if self.at_op("-"):
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.at_op("^"):
            self.advance()
            rhs_pos = self.peek().pos
            rhs = self.parse_unary()
            n = _fold_int(rhs)
            if n is None:
                raise ExprError("power exponent must be an integer literal", rhs_pos)
            return Pow(base, n)
        return base

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "z":
                return Var()
            if tok.text == "i":
                return Const(1j)
            if tok.text in FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_sum()
                if self.at_op(","):
                    raise ExprError(
                        f"function {tok.text!r} takes exactly one argument",
                        self.peek().pos,
                    )
                self.expect_op(")")
                return Call(tok.text, arg)
            raise ExprError(f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_sum()
            self.expect_op(")")
            return node
        shown = tok.text if tok.kind != "end" else "end of input"
        raise ExprError(f"expected a value, found {shown!r}", tok.pos)


def _fold_int(node: Expr) -> int | None:
    """Collapse an exponent subtree to a plain integer, or None."""
    if isinstance(node, Const):
        v = node.value
        if v.imag == 0.0 and v.real == int(v.real):
            return int(v.real)
        return None
    if isinstance(node, Neg):
        inner = _fold_int(node.arg)
        return None if inner is None else -inner
    if isinstance(node, Pow):
        base = _fold_int(node.base)
        if base is None or node.exponent < 0:
            return None
        return base ** node.exponent
    return None


def parse(text: str) -> Expr:
    """Parse an expression string into a tree, reporting byte offsets on error."""
    if not text or not text.strip():
        raise ExprError("empty expression", 0)
    parser = _Parser(_tokenize(text))
    node = parser.parse_sum()
    tok = parser.peek()
    if tok.kind != "end":
        raise ExprError(f"unexpected {tok.text!r}", tok.pos)
    return node


# ---------------------------------------------------------------------------
# evaluation

_FUNC_EVAL = {
    "exp": np.exp,
    "log": np.log,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "sqrt": np.sqrt,
}


def _int_pow(base, n: int):
    # binary exponentiation keeps integer powers exact and deterministic
    if n == 0:
        return np.ones_like(np.asarray(base, dtype=np.complex128))
    if n < 0:
        return 1.0 / _int_pow(base, -n)
    result = None
    b = base
    while True:
        if n & 1:
            result = b if result is None else result * b
        n >>= 1
        if n == 0:
            return result
        b = b * b


def _eval(e: Expr, zv):
    if isinstance(e, Var):
        return zv
    if isinstance(e, Const):
        return np.complex128(e.value)
    if isinstance(e, Add):
        return _eval(e.lhs, zv) + _eval(e.rhs, zv)
    if isinstance(e, Sub):
        return _eval(e.lhs, zv) - _eval(e.rhs, zv)
    if isinstance(e, Mul):
        return _eval(e.lhs, zv) * _eval(e.rhs, zv)
    if isinstance(e, Div):
        return _eval(e.lhs, zv) / _eval(e.rhs, zv)
    if isinstance(e, Neg):
        return -_eval(e.arg, zv)
    if isinstance(e, Pow):
        return _int_pow(_eval(e.base, zv), e.exponent)
    if isinstance(e, Call):
        return _FUNC_EVAL[e.fn](_eval(e.arg, zv))
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(expr: Expr, z):
    """Evaluate at a complex scalar or an array of points.

    Returns a python complex for scalar input, a complex128 array otherwise.
    Poles and branch points produce non-finite entries (never exceptions).
    """
    zv = np.asarray(z, dtype=np.complex128)
    with np.errstate(all="ignore"):
        out = _eval(expr, zv)
    out = np.asarray(out, dtype=np.complex128)
    if out.shape != zv.shape:
        out = np.broadcast_to(out, zv.shape).copy()
    if zv.ndim == 0:
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# differentiation

_ZERO = Const(0.0)
_ONE = Const(1.0)


@lru_cache(maxsize=None)
def differentiate(expr: Expr) -> Expr:
    """Exact d/dz as a new (unreduced) expression tree."""
    if isinstance(expr, Const):
        return _ZERO
    if isinstance(expr, Var):
        return _ONE
    if isinstance(expr, Neg):
        return Neg(differentiate(expr.arg))
    if isinstance(expr, Add):
        return Add(differentiate(expr.lhs), differentiate(expr.rhs))
    if isinstance(expr, Sub):
        return Sub(differentiate(expr.lhs), differentiate(expr.rhs))
    if isinstance(expr, Mul):
        return Add(
            Mul(differentiate(expr.lhs), expr.rhs),
            Mul(expr.lhs, differentiate(expr.rhs)),
        )
    if isinstance(expr, Div):
        return Div(
            Sub(
                Mul(differentiate(expr.lhs), expr.rhs),
                Mul(expr.lhs, differentiate(expr.rhs)),
            ),
            Pow(expr.rhs, 2),
        )
    if isinstance(expr, Pow):
        if expr.exponent == 0:
            return _ZERO
        return Mul(
            Mul(Const(float(expr.exponent)), Pow(expr.base, expr.exponent - 1)),
            differentiate(expr.base),
        )
    if isinstance(expr, Call):
        arg, darg = expr.arg, differentiate(expr.arg)
        if expr.fn == "exp":
            return Mul(Call("exp", arg), darg)
        if expr.fn == "log":
            return Div(darg, arg)
        if expr.fn == "sinh":
            return Mul(Call("cosh", arg), darg)
        if expr.fn == "cosh":
            return Mul(Call("sinh", arg), darg)
        if expr.fn == "sqrt":
            return Div(darg, Mul(Const(2.0), Call("sqrt", arg)))
    raise TypeError(f"not an expression node: {expr!r}")


# ---------------------------------------------------------------------------
# printing

_PREC_SUM = 1
_PREC_TERM = 2
_PREC_UNARY = 3
_PREC_POW = 4
_PREC_ATOM = 5


def to_string(expr: Expr) -> str:
    """Render a tree so that re-parsing reproduces it (structurally for
    parser-built trees, up to evaluation for programmatic constants)."""
    text, _ = _fmt(expr)
    return text


def _wrap(child: Expr, minimum: int) -> str:
    text, prec = _fmt(child)
    return f"({text})" if prec < minimum else text


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _fmt_const(v: complex) -> tuple[str, int]:
    if v == 1j:
        return "i", _PREC_ATOM
    if v.imag == 0.0:
        text = _fmt_float(v.real)
        return text, (_PREC_UNARY if text.startswith("-") else _PREC_ATOM)
    sign = "-" if v.imag < 0 else "+"
    return f"({_fmt_float(v.real)} {sign} {_fmt_float(abs(v.imag))}*i)", _PREC_ATOM


def _fmt(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "z", _PREC_ATOM
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _PREC_UNARY), _PREC_UNARY
    if isinstance(e, Add):
        return f"{_wrap(e.lhs, _PREC_SUM)} + {_wrap(e.rhs, _PREC_TERM)}", _PREC_SUM
    if isinstance(e, Sub):
        return f"{_wrap(e.lhs, _PREC_SUM)} - {_wrap(e.rhs, _PREC_TERM)}", _PREC_SUM
    if isinstance(e, Mul):
        return f"{_wrap(e.lhs, _PREC_TERM)}*{_wrap(e.rhs, _PREC_UNARY)}", _PREC_TERM
    if isinstance(e, Div):
        return f"{_wrap(e.lhs, _PREC_TERM)}/{_wrap(e.rhs, _PREC_UNARY)}", _PREC_TERM
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}", _PREC_POW
    if isinstance(e, Call):
        return f"{e.fn}({to_string(e.arg)})", _PREC_ATOM
    raise TypeError(f"not an expression node: {e!r}")
