"""Recursive-descent parser for algebraic equations P(z, y) = Q(z, y).

Grammar (whitespace is ignored)::

    Equation := Expr '=' Expr
    Expr     := Term (('+' | '-') Term)*
    Term     := Factor (('*' | '/') Factor)*
    Factor   := ('-' | '+') Factor | Base ('^' Exponent)?
    Base     := Integer | 'z' | 'y' | '(' Expr ')'
    Exponent := Integer | '-' Integer | '(' ('-' | '+')? Integer ')'

Rational constants are written as quotients such as ``2/3``. Every
subexpression evaluates to a quotient of two bivariate polynomials, so
division by expressions in z and y is allowed; the two sides are moved to
one side and the denominators cleared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..algebra import BiPoly


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.message = message


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "var", "op", "end"
    value: str
    pos: int


_OPS = set("+-*/^()=")


def tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] in ".eE" and (text[j] == "." or (j + 1 < len(text) and text[j + 1].isdigit())):
                raise ParseError("decimal literals are not allowed; write a quotient such as 1/2", j, text)
            toks.append(_Tok("int", text[i:j], i))
            i = j
        elif ch in "zy":
            if i + 1 < len(text) and (text[i + 1].isalnum() or text[i + 1] == "_"):
                raise ParseError("only the variables z and y are allowed", i, text)
            toks.append(_Tok("var", ch, i))
            i += 1
        elif ch in _OPS:
            toks.append(_Tok("op", ch, i))
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            raise ParseError(f"unknown variable {text[i:j]!r} (only z and y are allowed)", i, text)
        elif ch == ".":
            raise ParseError("decimal literals are not allowed; write a quotient such as 1/2", i, text)
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    toks.append(_Tok("end", "", len(text)))
    return toks


# a value is a pair (numerator, denominator) of BiPolys
_Q = tuple


def _const(c) -> BiPoly:
    return BiPoly.from_terms({(0, 0): Fraction(c)})


def _mul(a: _Q, b: _Q) -> _Q:
    return (a[0] * b[0], a[1] * b[1])


def _add(a: _Q, b: _Q, sign: int = 1) -> _Q:
    if a[1] == b[1]:
        return (a[0] + b[0] * sign, a[1])
    return (a[0] * b[1] + b[0] * a[1] * sign, a[1] * b[1])


def _simplify(v: _Q) -> _Q:
    """Fold constant denominators into the numerator."""
    num, den = v
    if den.deg_y == 0 and den.y_coeffs[0].degree == 0:
        c = den.y_coeffs[0].coeffs[0]
        return (num * (1 / c), _const(1))
    return v


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        raise ParseError(message, (tok or self.cur).pos, self.text)

    def accept(self, op: str) -> bool:
        if self.cur.kind == "op" and self.cur.value == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.error(f"expected {op!r}" if self.cur.kind != "end" else f"expected {op!r}, found end of input")

    def equation(self) -> BiPoly:
        lhs = self.expr()
        if not self.accept("="):
            self.error("expected '='")
        rhs = self.expr()
        if self.cur.kind == "op" and self.cur.value == "=":
            self.error("more than one '='")
        if self.cur.kind != "end":
            self.error(f"unexpected {self.cur.value!r}")
        num = lhs[0] * rhs[1] - rhs[0] * lhs[1]
        return num

    def expr(self) -> _Q:
        v = self.term()
        while self.cur.kind == "op" and self.cur.value in "+-":
            sign = 1 if self.cur.value == "+" else -1
            self.i += 1
            v = _simplify(_add(v, self.term(), sign))
        return v

    def term(self) -> _Q:
        v = self.factor()
        while self.cur.kind == "op" and self.cur.value in "*/":
            op_tok = self.cur
            self.i += 1
            w = self.factor()
            if op_tok.value == "*":
                v = _mul(v, w)
            else:
                if w[0].is_zero():
                    self.error("division by zero", op_tok)
                v = _mul(v, (w[1], w[0]))
            v = _simplify(v)
        return v

    def factor(self) -> _Q:
        if self.accept("-"):
            v = self.factor()
            return (-v[0], v[1])
        if self.accept("+"):
            return self.factor()
        base = self.base()
        if self.accept("^"):
            k = self.exponent()
            if k < 0:
                if base[0].is_zero():
                    self.error("zero raised to a negative power")
                base, k = (base[1], base[0]), -k
            return _simplify((base[0] ** k, base[1] ** k))
        return base

    def exponent(self) -> int:
        paren = self.accept("(")
        sign = 1
        if self.accept("-"):
            sign = -1
        elif paren:
            self.accept("+")
        tok = self.cur
        if tok.kind != "int":
            self.error("exponent must be an integer literal")
        self.i += 1
        if paren:
            if self.cur.kind == "op" and self.cur.value != ")":
                self.error("exponent must be an integer literal (non-integer exponent)")
            self.expect(")")
        elif self.cur.kind == "op" and self.cur.value == "^":
            self.error("chained exponents are ambiguous; add parentheses")
        return sign * int(tok.value)

    def base(self) -> _Q:
        tok = self.cur
        if tok.kind == "int":
            self.i += 1
            return (_const(int(tok.value)), _const(1))
        if tok.kind == "var":
            self.i += 1
            term = {(1, 0): 1} if tok.value == "z" else {(0, 1): 1}
            return (BiPoly.from_terms(term), _const(1))
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.value!r}")


def parse_algebraic_expression(text: str) -> BiPoly:
    """Parse ``lhs = rhs`` into the polynomial lhs - rhs with denominators cleared."""
    p = _Parser(text).equation()
    if p.is_zero():
        raise ParseError("equation is trivially satisfied (both sides are equal)", 0, text)
    return p


def format_equation(p: BiPoly) -> str:
    """Pretty-print ``p`` as an equation that parses back to the same polynomial."""
    return f"{p.format()} = 0"
