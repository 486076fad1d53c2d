"""Text syntax for scalars and algebra elements, with a canonical printer.

Grammar (recursive descent, one token of lookahead)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | factor
    factor   := atom ('^' exponent)?
    exponent := '-'? INT | '(' '-'? INT ('/' INT)? ')'
    atom     := INT | 'q' | 'a' | 'a*' | 'g' | 'g*' | '(' expr ')'

``a*`` and ``g*`` are single tokens when the star directly follows the letter,
so multiplication by a generator needs a space: ``a * g``.  Division is only
allowed by nonzero scalars.  ``a^-k`` means (a*)^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .ncalg import ALPHA, ALPHA_STAR, GAMMA, GAMMA_STAR, ONE_ELEMENT, NCElement, NCMonomial, UNIT
from .qscalar import QZeroDivisionError, RatFunc, laurent_str


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Num:
    value: int
    offset: int


@dataclass(frozen=True)
class QSym:
    offset: int


@dataclass(frozen=True)
class Gen:
    name: str  # a, a*, g, g*
    offset: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    offset: int


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction
    offset: int


@dataclass(frozen=True)
class Paren:
    inner: "Expr"
    offset: int


Expr = Union[Num, QSym, Gen, Neg, BinOp, Pow, Paren]


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    offset: int


def tokenize(src: str) -> list[Token]:
    out = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(Token("INT", src[i:j], i))
            i = j
        elif ch in "ag":
            if i + 1 < len(src) and src[i + 1] == "*":
                out.append(Token("NAME", ch + "*", i))
                i += 2
            else:
                out.append(Token("NAME", ch, i))
                i += 1
        elif ch == "q":
            out.append(Token("NAME", "q", i))
            i += 1
        elif ch in "+-*/^()":
            out.append(Token("OP", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    out.append(Token("END", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "END":
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.offset)
        return self.advance()

    def parse(self) -> Expr:
        if self.tok.kind == "END":
            raise ParseError("empty expression", 0)
        node = self.expr()
        if self.tok.kind != "END":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            t = self.advance()
            node = BinOp(t.text, node, self.term(), t.offset)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            t = self.advance()
            node = BinOp(t.text, node, self.unary(), t.offset)
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "OP" and self.tok.text == "-":
            t = self.advance()
            return Neg(self.unary(), t.offset)
        return self.factor()

    def factor(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "OP" and self.tok.text == "^":
            t = self.advance()
            return Pow(base, self.exponent(), t.offset)
        return base

    def _signed_int(self) -> int:
        sign = 1
        if self.tok.kind == "OP" and self.tok.text == "-":
            self.advance()
            sign = -1
        if self.tok.kind != "INT":
            raise ParseError("expected an integer exponent", self.tok.offset)
        return sign * int(self.advance().text)

    def exponent(self) -> Fraction:
        if self.tok.kind == "OP" and self.tok.text == "(":
            self.advance()
            num = self._signed_int()
            den = 1
            if self.tok.kind == "OP" and self.tok.text == "/":
                self.advance()
                if self.tok.kind != "INT":
                    raise ParseError("expected an integer denominator", self.tok.offset)
                t = self.advance()
                den = int(t.text)
                if den == 0:
                    raise ParseError("zero denominator in exponent", t.offset)
            self.expect(")")
            return Fraction(num, den)
        return Fraction(self._signed_int())

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(int(t.text), t.offset)
        if t.kind == "NAME":
            self.advance()
            return QSym(t.offset) if t.text == "q" else Gen(t.text, t.offset)
        if t.kind == "OP" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return Paren(inner, t.offset)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.offset)


def parse_expr(src: str) -> Expr:
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# evaluation

_GEN_VALUES = {"a": ALPHA, "a*": ALPHA_STAR, "g": GAMMA, "g*": GAMMA_STAR}


def evaluate(node: Expr) -> NCElement:
    if isinstance(node, Num):
        return NCElement.scalar(node.value)
    if isinstance(node, QSym):
        return NCElement.scalar(RatFunc.q_power(1))
    if isinstance(node, Gen):
        return _GEN_VALUES[node.name]
    if isinstance(node, Paren):
        return evaluate(node.inner)
    if isinstance(node, Neg):
        return -evaluate(node.operand)
    if isinstance(node, BinOp):
        left, right = evaluate(node.left), evaluate(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if not right.is_scalar():
            raise ParseError("division by a non-scalar", node.offset)
        try:
            return left.scale(right.scalar_value().inverse())
        except QZeroDivisionError:
            raise ParseError("division by zero", node.offset) from None
    if isinstance(node, Pow):
        return _evaluate_pow(node)
    raise TypeError(f"not an expression node: {node!r}")


def _evaluate_pow(node: Pow) -> NCElement:
    e = node.exponent
    if isinstance(node.base, QSym):
        if (2 * e).denominator != 1:
            raise ParseError("exponent of q must be an integer or half-integer", node.offset)
        return NCElement.scalar(RatFunc.q_power(e))
    if e.denominator != 1:
        raise ParseError("fractional exponent is only allowed on q", node.offset)
    e = int(e)
    base = evaluate(node.base)
    if isinstance(node.base, Gen) and node.base.name == "a" and e < 0:
        return ALPHA_STAR ** (-e)
    if base.is_scalar():
        try:
            return NCElement.scalar(base.scalar_value() ** e)
        except QZeroDivisionError:
            raise ParseError("zero raised to a negative power", node.offset) from None
    if e <= 0:
        raise ParseError("exponent on a noncommutative factor must be a positive integer", node.offset)
    return base ** e


def parse_element(src: str) -> NCElement:
    return evaluate(parse_expr(src))


def parse_scalar(src: str) -> RatFunc:
    x = parse_element(src)
    if not x.is_scalar():
        raise ParseError("expected a scalar expression", 0)
    return x.scalar_value()


# ---------------------------------------------------------------------------
# printing


def print_scalar(c: RatFunc) -> str:
    return str(c)


def monomial_str(mono: NCMonomial) -> str:
    k, m, n = mono
    parts = []
    if k:
        name = "a" if k > 0 else "a*"
        parts.append(name if abs(k) == 1 else f"{name}^{abs(k)}")
    if n:
        parts.append("g*" if n == 1 else f"g*^{n}")
    if m:
        parts.append("g" if m == 1 else f"g^{m}")
    return " * ".join(parts)


def _is_simple(c: RatFunc) -> bool:
    """A single signed term c q^e that prints without parentheses."""
    return c.is_laurent() and len(c.numerator_terms()) == 1


def print_element(x: NCElement) -> str:
    """Canonical rendering with terms ordered by (k, m, n)."""
    if x.is_zero():
        return "0"
    out = []
    for i, mono in enumerate(x.monomials()):
        c = x.coefficient(mono)
        first = i == 0
        if _is_simple(c):
            (e, v), = c.numerator_terms().items()
            negative = v < 0
            mag = RatFunc.laurent({e: abs(v)})
            if mono == UNIT:
                body = str(mag)
            elif mag == 1:
                body = monomial_str(mono)
            else:
                body = f"{mag} * {monomial_str(mono)}"
        else:
            negative = False
            cs = str(c)
            if mono == UNIT:
                body = cs if first else f"({cs})"
            else:
                body = f"({cs}) * {monomial_str(mono)}"
        if first:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


__all__ = [
    "ParseError",
    "parse_expr",
    "parse_element",
    "parse_scalar",
    "print_element",
    "print_scalar",
    "monomial_str",
    "laurent_str",
    "ONE_ELEMENT",
]
