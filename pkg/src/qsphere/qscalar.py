"""Exact scalars: the field Q(q^(1/2)) of rational functions in the deformation parameter.

Values are stored in terms of t = q^(1/2).  Everything that only involves
integer powers of q lives in the subfield Q(q); half-integer powers show up
when the e and f actions are applied to even-weight elements, so the field is
taken one square root larger to keep those computations exact.

A value is t^shift * num(t) / den(t) with num, den in Q[t], both having a
nonzero constant term, den(0) = 1 and gcd(num, den) = 1.  That form is unique,
so equality and hashing work on the stored data directly.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from typing import Union

from flint import fmpq, fmpq_poly

Number = Union[int, Fraction]

_ZERO_POLY = fmpq_poly([])
_ONE_POLY = fmpq_poly([1])


class QZeroDivisionError(ZeroDivisionError):
    """Division by the zero element of Q(q)."""


class PoleError(ArithmeticError):
    """A rational function was evaluated at one of its poles."""


def _fmpq_to_fraction(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _to_fmpq(x: Number) -> fmpq:
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    return fmpq(int(x))


def _valuation(p: fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no valuation")


def _half_exponent(e: int) -> Fraction | int:
    """Exponent of t converted to an exponent of q."""
    return e // 2 if e % 2 == 0 else Fraction(e, 2)


class RatFunc:
    """Immutable element of Q(q^(1/2)) in canonical reduced form."""

    __slots__ = ("_num", "_den", "_shift", "_hash")

    def __init__(self, value: Number | "RatFunc" = 0):
        if isinstance(value, RatFunc):
            self._num, self._den, self._shift = value._num, value._den, value._shift
        else:
            c = _to_fmpq(value)
            self._num = fmpq_poly([c]) if c != 0 else _ZERO_POLY
            self._den = _ONE_POLY
            self._shift = 0
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly, shift: int) -> "RatFunc":
        obj = cls.__new__(cls)
        obj._num, obj._den, obj._shift, obj._hash = num, den, shift, None
        return obj

    @classmethod
    def _make(cls, num: fmpq_poly, den: fmpq_poly, shift: int) -> "RatFunc":
        if den.is_zero():
            raise QZeroDivisionError("zero denominator")
        if num.is_zero():
            return ZERO
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        v = _valuation(den)
        if v:
            den = den.right_shift(v)
            shift -= v
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        c = den[0]
        if c != 1:
            num = num / c
            den = den / c
        return cls._raw(num, den, shift)

    @classmethod
    def q_power(cls, e: Number) -> "RatFunc":
        """q^e for an integer or half-integer e."""
        e2 = Fraction(e) * 2
        if e2.denominator != 1:
            raise ValueError(f"q-exponent {e} is not a half-integer")
        return cls._raw(_ONE_POLY, _ONE_POLY, int(e2))

    @classmethod
    def laurent(cls, coeffs: dict) -> "RatFunc":
        """Build sum c * q^e from a map of (half-)integer exponents to rationals."""
        items = {}
        for e, c in coeffs.items():
            e2 = Fraction(e) * 2
            if e2.denominator != 1:
                raise ValueError(f"q-exponent {e} is not a half-integer")
            items[int(e2)] = items.get(int(e2), 0) + Fraction(c)
        items = {e: c for e, c in items.items() if c != 0}
        if not items:
            return ZERO
        lo = min(items)
        hi = max(items)
        poly = [fmpq(0)] * (hi - lo + 1)
        for e, c in items.items():
            poly[e - lo] = _to_fmpq(c)
        return cls._raw(fmpq_poly(poly), _ONE_POLY, lo)

    # inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        """True when the denominator is 1."""
        return self._den.degree() == 0

    def in_q_field(self) -> bool:
        """True when the value lies in Q(q), i.e. only integer powers of q occur."""
        if self.is_zero():
            return True
        num = self._num.coeffs()
        den = self._den.coeffs()
        if any(c != 0 for c in den[1::2]):
            return False
        parity = self._shift % 2
        return all(c == 0 for i, c in enumerate(num) if (i + parity) % 2 == 1)

    def is_rational(self) -> bool:
        return self.is_zero() or (self._shift == 0 and self._num.degree() == 0 and self._den.degree() == 0)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return _fmpq_to_fraction(self._num[0]) if not self.is_zero() else Fraction(0)

    def numerator_terms(self) -> dict:
        """Numerator as {q-exponent: Fraction}, including the t^shift factor."""
        return _poly_terms(self._num, self._shift)

    def denominator_terms(self) -> dict:
        return _poly_terms(self._den, 0)

    def key(self) -> tuple:
        return (self._shift, tuple(self._num.coeffs()), tuple(self._den.coeffs()))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self._shift, other._shift)
        a = self._num.left_shift(self._shift - s)
        b = other._num.left_shift(other._shift - s)
        if self._den == other._den:
            num = a + b
            den = self._den
            if den.degree() == 0:
                if num.is_zero():
                    return ZERO
                v = _valuation(num)
                if v:
                    num = num.right_shift(v)
                return RatFunc._raw(num, den, s + v)
            return RatFunc._make(num, den, s)
        return RatFunc._make(a * other._den + b * self._den, self._den * other._den, s)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return RatFunc._raw(-self._num, self._den, self._shift)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        shift = self._shift + other._shift
        if self._den.degree() == 0 and other._den.degree() == 0:
            return RatFunc._raw(self._num * other._num, _ONE_POLY, shift)
        return RatFunc._make(self._num * other._num, self._den * other._den, shift)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise QZeroDivisionError("inverse of zero in Q(q)")
        return RatFunc._make(self._den, self._num, -self._shift)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return ONE if e == 0 else ZERO
        return RatFunc._raw(self._num ** e, self._den ** e, self._shift * e)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._shift == other._shift and self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def subs_inverse(self) -> "RatFunc":
        """The image under q -> 1/q."""
        if self.is_zero():
            return self
        dn = self._num.degree()
        dd = self._den.degree()
        num = fmpq_poly(list(reversed(self._num.coeffs())))
        den = fmpq_poly(list(reversed(self._den.coeffs())))
        return RatFunc._make(num, den, -self._shift - dn + dd)

    def sqrt(self) -> "RatFunc | None":
        """Exact square root with positive leading behaviour, or None if there is none."""
        if self.is_zero():
            return self
        if self._shift % 2:
            return None
        try:
            num = self._num.sqrt()
            den = self._den.sqrt()
        except Exception:
            num = -self._num
            try:
                num = num.sqrt()
                den = (-self._den).sqrt()
            except Exception:
                return None
        r = RatFunc._make(num, den, self._shift // 2)
        if r._num[0] < 0:
            r = -r
        return r

    # evaluation ---------------------------------------------------------

    def eval_exact(self, q0: Number) -> Fraction:
        """Exact value at q = q0 > 0; requires q0^(1/2) rational when half powers occur."""
        q0 = Fraction(q0)
        if q0 <= 0:
            raise ValueError("q0 must be positive")
        if self.is_zero():
            return Fraction(0)
        if self.in_q_field():
            x, y = self._split(q0)
            return x
        r = _rational_sqrt(q0)
        if r is None:
            raise ValueError(f"value involves q^(1/2), irrational at q0={q0}")
        return self._eval_at_t(r)

    def _eval_at_t(self, t0: Fraction) -> Fraction:
        f = _to_fmpq(t0)
        d = self._den(f)
        if d == 0:
            raise PoleError(f"pole at t={t0}")
        return _fmpq_to_fraction(self._num(f) / d) * t0 ** self._shift

    def _split(self, q0: Fraction) -> tuple[Fraction, Fraction]:
        """Write the value at q0 as X + Y*sqrt(q0) with X, Y rational."""
        f = _to_fmpq(q0)
        ne, no = _even_odd(self._num, self._shift)
        de, do = _even_odd(self._den, 0)
        # value = (ne + s*no) / (de + s*do) where s = sqrt(q0)
        a, b = ne(f), no(f)
        c, d = de(f), do(f)
        norm = c * c - d * d * f
        if norm == 0:
            raise PoleError(f"pole at q={q0}")
        x = (a * c - b * d * f) / norm
        y = (b * c - a * d) / norm
        # the parity of the shift is absorbed in ne/no; q0^(shift//2) remains
        scale = _fmpq_to_fraction(f) ** (self._shift // 2)
        return _fmpq_to_fraction(x) * scale, _fmpq_to_fraction(y) * scale

    def eval_float(self, q0: Number) -> float:
        """Value at q0 in (0,1), evaluated exactly and rounded once."""
        q0 = Fraction(q0)
        if not 0 < q0 < 1:
            raise PoleError(f"q0={q0} outside the domain (0, 1)")
        if self.is_zero():
            return 0.0
        x, y = self._split(q0)
        if y == 0:
            return float(x)
        r = _rational_sqrt(q0)
        if r is not None:
            return float(x + y * r)
        with localcontext() as ctx:
            ctx.prec = 60
            s = (Decimal(q0.numerator) / Decimal(q0.denominator)).sqrt()
            val = Decimal(x.numerator) / Decimal(x.denominator) + Decimal(y.numerator) / Decimal(y.denominator) * s
            return float(val)

    # rendering ----------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        num = laurent_str(self.numerator_terms())
        if self.is_laurent():
            return num
        den = laurent_str(self.denominator_terms())
        if len(self.numerator_terms()) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _even_odd(p: fmpq_poly, shift: int) -> tuple[fmpq_poly, fmpq_poly]:
    """Split t^shift * p(t) as E(q) + t*O(q) with q = t^2, up to a factor q^(shift//2)."""
    cs = p.coeffs()
    even: list = []
    odd: list = []
    parity = shift % 2
    for i, c in enumerate(cs):
        e = i + parity
        if e % 2 == 0:
            j = e // 2
            even.extend([fmpq(0)] * (j + 1 - len(even)))
            even[j] += c
        else:
            j = (e - 1) // 2
            odd.extend([fmpq(0)] * (j + 1 - len(odd)))
            odd[j] += c
    return fmpq_poly(even), fmpq_poly(odd)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    a, b = x.numerator, x.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def _poly_terms(p: fmpq_poly, shift: int) -> dict:
    out = {}
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            out[_half_exponent(i + shift)] = _fmpq_to_fraction(c)
    return out


def _coerce(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc(x)
    return NotImplemented


def q_exponent_str(e) -> str:
    if e == 1:
        return "q"
    if isinstance(e, Fraction):
        return f"q^({e.numerator}/{e.denominator})"
    return f"q^{e}"


def term_str(c: Fraction, e, leading: bool) -> str:
    """One signed term c*q^e, with the sign attached to the separator."""
    mag = abs(c)
    if e == 0:
        body = str(mag)
    elif mag == 1:
        body = q_exponent_str(e)
    else:
        body = f"{mag} * {q_exponent_str(e)}"
    if leading:
        return f"-{body}" if c < 0 else body
    return f" - {body}" if c < 0 else f" + {body}"


def laurent_str(terms: dict) -> str:
    """Render {exponent: coefficient} in ascending exponent order."""
    if not terms:
        return "0"
    parts = [term_str(terms[e], e, i == 0) for i, e in enumerate(sorted(terms))]
    return "".join(parts)


ZERO = RatFunc._raw(_ZERO_POLY, _ONE_POLY, 0)
ONE = RatFunc._raw(_ONE_POLY, _ONE_POLY, 0)
Q = RatFunc.q_power(1)
Q_INV = RatFunc.q_power(-1)
SQRT_Q = RatFunc.q_power(Fraction(1, 2))


def qint(n: int) -> RatFunc:
    """The q-integer [n] = (q^n - q^-n)/(q - q^-1) as a Laurent polynomial."""
    if n < 0:
        return -qint(-n)
    return RatFunc.laurent({n - 1 - 2 * j: 1 for j in range(n)})


def as_ratfunc(x) -> RatFunc:
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RatFunc")
    return r


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def eval_float(x: RatFunc, q0: Number) -> float:
    return as_ratfunc(x).eval_float(q0)


class LaurentPoly:
    """Finitely supported map from q-exponents to rationals, with exact ring operations."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {e: Fraction(c) for e, c in (coeffs or {}).items() if c != 0}

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_ratfunc(self) -> RatFunc:
        return RatFunc.laurent(self.coeffs)

    def __str__(self):
        return laurent_str(self.coeffs)
