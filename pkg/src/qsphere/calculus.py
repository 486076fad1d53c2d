"""Haar state, L2 inner product and the covariant two-dimensional de Rham calculus over the Podles sphere.

A form is a quadruple (c00, c01, c10, c11) with c00, c11 of weight 0, c01 of
weight -2 and c10 of weight 2.  Products, the differential and the twisted
integral follow the explicit component formulas of the calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ncalg import (
    ZERO_ELEMENT,
    NCElement,
    NCMonomial,
    d_e,
    d_f,
    is_homogeneous,
    monomial_product,
    star,
    twist,
)
from .qscalar import ONE, Q, ZERO, RatFunc, as_ratfunc


class GradingError(ValueError):
    """An element does not have the weight its slot requires."""


@lru_cache(maxsize=None)
def haar_monomial(mono: NCMonomial) -> RatFunc:
    k, m, n = mono
    if k != 0 or m != n:
        return ZERO
    q2 = Q * Q
    return (ONE - q2) / (ONE - q2 ** (n + 1))


def haar(a: NCElement) -> RatFunc:
    """The Haar state: nonzero only on powers of gamma* gamma."""
    total = ZERO
    for mono, c in a.items():
        if mono.k == 0 and mono.m == mono.n:
            total = total + c * haar_monomial(mono)
    return total


@lru_cache(maxsize=None)
def haar_of_product(m1: NCMonomial, m2: NCMonomial) -> RatFunc:
    total = ZERO
    for mono, c in monomial_product(m1, m2):
        if mono.k == 0 and mono.m == mono.n:
            total = total + c * haar_monomial(mono)
    return total


def haar_product(a: NCElement, b: NCElement) -> RatFunc:
    """h(ab) without forming the full product."""
    total = ZERO
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            if m1.lw + m2.lw == 0 and m1.rw + m2.rw == 0:
                h = haar_of_product(m1, m2)
                if not h.is_zero():
                    total = total + c1 * c2 * h
    return total


def inner(a: NCElement, b: NCElement) -> RatFunc:
    """<a, b> = h(a* b)."""
    return haar_product(star(a), b)


_SLOT_WEIGHTS = {"c00": 0, "c01": -2, "c10": 2, "c11": 0}


@dataclass(frozen=True)
class Form:
    c00: NCElement = ZERO_ELEMENT
    c01: NCElement = ZERO_ELEMENT
    c10: NCElement = ZERO_ELEMENT
    c11: NCElement = ZERO_ELEMENT

    def __post_init__(self):
        for name, w in _SLOT_WEIGHTS.items():
            if not is_homogeneous(getattr(self, name), w):
                raise GradingError(f"component {name} must have left weight {w}")

    def components(self) -> tuple[NCElement, NCElement, NCElement, NCElement]:
        return (self.c00, self.c01, self.c10, self.c11)

    def __add__(self, other: "Form") -> "Form":
        return Form(*(x + y for x, y in zip(self.components(), other.components())))

    def __sub__(self, other: "Form") -> "Form":
        return Form(*(x - y for x, y in zip(self.components(), other.components())))

    def __neg__(self) -> "Form":
        return Form(*(-x for x in self.components()))

    def scale(self, c) -> "Form":
        c = as_ratfunc(c)
        return Form(*(x.scale(c) for x in self.components()))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components())

    def degree(self) -> int | None:
        """Form degree if homogeneous (0, 1 or 2), None for mixed forms."""
        present = set()
        if not self.c00.is_zero():
            present.add(0)
        if not (self.c01.is_zero() and self.c10.is_zero()):
            present.add(1)
        if not self.c11.is_zero():
            present.add(2)
        if len(present) == 1:
            return present.pop()
        return 0 if not present else None

    def part(self, degree: int) -> "Form":
        if degree == 0:
            return Form(c00=self.c00)
        if degree == 1:
            return Form(c01=self.c01, c10=self.c10)
        if degree == 2:
            return Form(c11=self.c11)
        raise ValueError("form degree must be 0, 1 or 2")


def function_form(b: NCElement) -> Form:
    return Form(c00=b)


def wedge(x: Form, y: Form) -> Form:
    a00, a01, a10, a11 = x.components()
    b00, b01, b10, b11 = y.components()
    return Form(
        a00 * b00,
        a00 * b01 + a01 * b00,
        a00 * b10 + a10 * b00,
        a00 * b11 - a01 * b10 + (a10 * b01).scale(Q * Q) + a11 * b00,
    )


def dee(x: Form) -> Form:
    """d = del + delbar on the four components."""
    a00, a01, a10, _ = x.components()
    return Form(
        ZERO_ELEMENT,
        d_f(a00),
        d_e(a00),
        (d_e(a01) - d_f(a10)).scale(Q),
    )


def sigma_form(x: Form, t: int = 1) -> Form:
    """The twist extended component-wise to forms."""
    return Form(*(twist(c, t) for c in x.components()))


def integrate(x: Form) -> RatFunc:
    return haar(x.c11)


def tau_via_forms(b0: NCElement, b1: NCElement, b2: NCElement) -> RatFunc:
    """The volume cocycle computed as the integral of b0 db1 ^ db2."""
    return integrate(wedge(function_form(b0), wedge(dee(function_form(b1)), dee(function_form(b2)))))
