"""Twisted cyclic cochains on the Podles sphere, the cocycles built from the calculus, and index pairings.

A cochain of degree n is a multilinear functional of n+1 arguments.  It is
stored as a function on tuples of normal monomials (memoised) and extended
multilinearly.  The twist is sigma(b) = b <| k^2; untwisted cochains use the
identity instead.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .calculus import GradingError, haar_product
from .ncalg import (
    UNIT,
    NCElement,
    NCMonomial,
    act_monomial,
    monomial_product,
    sphere_basis,
)
from .qscalar import ONE, Q, ZERO, RatFunc, as_ratfunc


class CocycleError(ValueError):
    """A functional expected to be a cocycle failed the check; ``witness`` holds the arguments."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message if witness is None else f"{message}; witness {witness}")
        self.witness = witness


Args = tuple  # tuple of NCMonomial


def _as_element(x) -> NCElement:
    if isinstance(x, NCElement):
        return x
    if isinstance(x, tuple) and len(x) == 3:
        return NCElement({NCMonomial(*x): ONE})
    return NCElement.scalar(x)


def sigma_scalar(mono: NCMonomial, twisted: bool = True) -> RatFunc:
    """sigma(mono) = q^{rw} mono."""
    return RatFunc.q_power(mono.rw) if twisted and mono.rw else ONE


class Cochain:
    """Multilinear functional on the sphere given on tuples of monomials."""

    def __init__(
        self,
        degree: int,
        on_monomials: Callable[[Args], RatFunc],
        name: str = "",
        twisted: bool = True,
        check_grade: bool = False,
    ):
        if degree < 0:
            raise ValueError("cochain degree must be non-negative")
        self.degree = degree
        self._fn = on_monomials
        self.name = name
        self.twisted = twisted
        self.check_grade = check_grade
        self._cache: dict = {}

    def on_monomials(self, monos: Args) -> RatFunc:
        v = self._cache.get(monos)
        if v is None:
            if self.check_grade:
                for m in monos:
                    if m.lw != 0:
                        raise GradingError(f"{self.name or 'cochain'} argument {tuple(m)} is not in the sphere")
            v = self._fn(monos)
            self._cache[monos] = v
        return v

    def __call__(self, *args) -> RatFunc:
        if len(args) != self.degree + 1:
            raise TypeError(f"degree-{self.degree} cochain takes {self.degree + 1} arguments, got {len(args)}")
        elems = [_as_element(a) for a in args]
        if self.check_grade:
            for e in elems:
                for m in e.monomials():
                    if m.lw != 0:
                        raise GradingError(f"{self.name or 'cochain'} argument is not in the sphere")
        return self.on_terms([list(e.items()) for e in elems])

    def on_terms(self, term_lists: Sequence[list]) -> RatFunc:
        total = ZERO
        for combo in itertools.product(*term_lists):
            c = ONE
            for _, ci in combo:
                c = c * ci
            v = self.on_monomials(tuple(m for m, _ in combo))
            if not v.is_zero():
                total = total + c * v
        return total

    # linear structure ---------------------------------------------------

    def __add__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        return Cochain(self.degree, lambda m: self.on_monomials(m) + other.on_monomials(m),
                       f"({self.name} + {other.name})", self.twisted)

    def __sub__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        return Cochain(self.degree, lambda m: self.on_monomials(m) - other.on_monomials(m),
                       f"({self.name} - {other.name})", self.twisted)

    def scale(self, c) -> "Cochain":
        c = as_ratfunc(c)
        return Cochain(self.degree, lambda m: c * self.on_monomials(m), f"{c}*{self.name}", self.twisted)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def __rmul__(self, c) -> "Cochain":
        return self.scale(c)

    def __repr__(self):
        return f"Cochain(degree={self.degree}, name={self.name!r}, twisted={self.twisted})"


def _check_compatible(f: Cochain, g: Cochain) -> None:
    if f.degree != g.degree:
        raise ValueError("cochains of different degrees")
    if f.twisted != g.twisted:
        raise ValueError("cannot combine twisted and untwisted cochains")


def zero_cochain(degree: int, twisted: bool = True) -> Cochain:
    return Cochain(degree, lambda m: ZERO, "0", twisted)


# ---------------------------------------------------------------------------
# operators


def _product_terms(m1: NCMonomial, m2: NCMonomial, c: RatFunc = ONE) -> list:
    return [(mono, c * v) for mono, v in monomial_product(m1, m2)]


def twisted_b(f: Cochain) -> Cochain:
    """Twisted Hochschild coboundary; the last face uses sigma(b_n) b_0."""
    n = f.degree + 1

    def fn(ms: Args) -> RatFunc:
        total = ZERO
        for i in range(n):
            lists = [[(m, ONE)] for m in ms[:i]] + [_product_terms(ms[i], ms[i + 1])] + [[(m, ONE)] for m in ms[i + 2:]]
            v = f.on_terms(lists)
            total = total + v if i % 2 == 0 else total - v
        last = ms[n]
        lists = [_product_terms(last, ms[0], sigma_scalar(last, f.twisted))] + [[(m, ONE)] for m in ms[1:n]]
        v = f.on_terms(lists)
        return total + v if n % 2 == 0 else total - v

    return Cochain(n, fn, f"b{f.name}", f.twisted)


def twisted_lambda(f: Cochain) -> Cochain:
    """(lambda f)(b_0..b_n) = (-1)^n f(sigma(b_n), b_0, ..., b_{n-1})."""
    n = f.degree
    sign = -1 if n % 2 else 1

    def fn(ms: Args) -> RatFunc:
        last = ms[n]
        v = f.on_monomials((last,) + ms[:n])
        return v * (sigma_scalar(last, f.twisted) * sign) if not v.is_zero() else v

    return Cochain(n, fn, f"lambda{f.name}", f.twisted)


def twisted_B0(f: Cochain) -> Cochain:
    """(B0 f)(b_0..b_n) = f(1, b_0..b_n) - (-1)^{n+1} f(b_0..b_n, 1)."""
    if f.degree < 1:
        raise ValueError("B is not defined on degree-0 cochains")
    n = f.degree - 1
    sign = 1 if (n + 1) % 2 else -1  # -(-1)^{n+1}

    def fn(ms: Args) -> RatFunc:
        return f.on_monomials((UNIT,) + ms) + f.on_monomials(ms + (UNIT,)) * sign

    return Cochain(n, fn, f"B0{f.name}", f.twisted)


def cyclic_sum(f: Cochain) -> Cochain:
    """N = sum_{i=0}^{n} lambda^i."""
    powers = [f]
    for _ in range(f.degree):
        powers.append(twisted_lambda(powers[-1]))

    def fn(ms: Args) -> RatFunc:
        total = ZERO
        for g in powers:
            total = total + g.on_monomials(ms)
        return total

    return Cochain(f.degree, fn, f"N{f.name}", f.twisted)


def twisted_B(f: Cochain) -> Cochain:
    """B = N B0, lowering the degree by one."""
    g = cyclic_sum(twisted_B0(f))
    g.name = f"B{f.name}"
    return g


# ---------------------------------------------------------------------------
# comparison over finite bases


def find_difference(f: Cochain, g: Cochain, basis: Sequence[NCMonomial]) -> tuple | None:
    """First monomial tuple where f and g differ, or None."""
    if f.degree != g.degree:
        raise ValueError("cochains of different degrees")
    for ms in itertools.product(basis, repeat=f.degree + 1):
        if f.on_monomials(ms) != g.on_monomials(ms):
            return ms
    return None


def find_nonzero(f: Cochain, basis: Sequence[NCMonomial]) -> tuple | None:
    for ms in itertools.product(basis, repeat=f.degree + 1):
        if not f.on_monomials(ms).is_zero():
            return ms
    return None


# ---------------------------------------------------------------------------
# concrete cocycles


def _de(m: NCMonomial) -> NCElement:
    return act_monomial("e", "left", m)


def _df(m: NCMonomial) -> NCElement:
    return act_monomial("f", "left", m)


def _h3(m0: NCMonomial, x: NCElement, y: NCElement) -> RatFunc:
    if x.is_zero() or y.is_zero():
        return ZERO
    return haar_product(NCElement({m0: ONE}), x * y)


def _tau1(ms: Args) -> RatFunc:
    return _h3(ms[0], _de(ms[1]), _df(ms[2]))


def _tau2(ms: Args) -> RatFunc:
    return _h3(ms[0], _df(ms[1]), _de(ms[2]))


def _tau(ms: Args) -> RatFunc:
    return (Q * Q) * _tau1(ms) - _tau2(ms)


def _tau_tilde(ms: Args) -> RatFunc:
    x, y = _df(ms[0]), _de(ms[1])
    if x.is_zero() or y.is_zero():
        return ZERO
    return haar_product(x, y)


def _tau_prime(ms: Args) -> RatFunc:
    k, m, n = ms[0]
    if k == 0 and m == n and n > 0:
        return ONE / (ONE - (Q * Q) ** n)
    return ZERO


def tau1() -> Cochain:
    """tau1(b0, b1, b2) = h(b0 d_e(b1) d_f(b2))."""
    return Cochain(2, _tau1, "tau1", check_grade=True)


def tau2() -> Cochain:
    """tau2(b0, b1, b2) = h(b0 d_f(b1) d_e(b2))."""
    return Cochain(2, _tau2, "tau2", check_grade=True)


def tau() -> Cochain:
    """Volume cocycle: the integral of b0 db1 ^ db2, i.e. q^2 tau1 - tau2."""
    return Cochain(2, _tau, "tau", check_grade=True)


def tau_tilde() -> Cochain:
    """tauTilde(b0, b1) = h(d_f(b0) d_e(b1))."""
    return Cochain(1, _tau_tilde, "tauTilde", check_grade=True)


def tau_prime() -> Cochain:
    """Untwisted trace with value 1/(1 - q^{2n}) on (gamma* gamma)^n, n > 0."""
    return Cochain(0, _tau_prime, "tauPrime", twisted=False, check_grade=True)


NAMED_COCYCLES: dict[str, Callable[[], Cochain]] = {
    "tau": tau,
    "tau1": tau1,
    "tau2": tau2,
    "tauTilde": tau_tilde,
    "tauPrime": tau_prime,
}


def named_cocycle(name: str) -> Cochain:
    try:
        return NAMED_COCYCLES[name]()
    except KeyError:
        raise ValueError(f"unknown cocycle {name!r}; choose from {', '.join(NAMED_COCYCLES)}") from None


def random_cochain(degree: int, seed: int, twisted: bool = True) -> Cochain:
    """Pseudo-random sigma-invariant cochain on the sphere.

    Values on a monomial tuple are drawn from a generator seeded by the tuple,
    and vanish unless the total right weight is zero, which makes the cochain
    invariant under the twist.
    """

    def fn(ms: Args) -> RatFunc:
        if sum(m.rw for m in ms) != 0:
            return ZERO
        rng = random.Random(hash((seed,) + tuple(tuple(m) for m in ms)))
        c = rng.randint(-3, 3)
        return RatFunc(c) + RatFunc.q_power(rng.randint(-2, 2)) * rng.randint(-1, 1)

    return Cochain(degree, fn, f"rand{seed}", twisted)


# ---------------------------------------------------------------------------
# pairings


def _weights(p, twisted: bool) -> list[RatFunc]:
    if not twisted:
        return [ONE] * p.dim
    return [RatFunc.q_power(-2 * Fraction(i)) for i in p.weights]


def check_cyclic_cocycle(f: Cochain, basis: Sequence[NCMonomial] | None = None) -> None:
    """Raise CocycleError unless b f = 0 and lambda f = f on the given basis."""
    basis = sphere_basis(2) if basis is None else basis
    w = find_nonzero(twisted_b(f), basis)
    if w is not None:
        raise CocycleError(f"{f.name} is not a Hochschild cocycle", w)
    w = find_difference(twisted_lambda(f), f, basis)
    if w is not None:
        raise CocycleError(f"{f.name} is not cyclic", w)


def _cycle_sum(f: Cochain, p, weights: list[RatFunc], shift_first: RatFunc | None = None) -> RatFunc:
    """sum over index cycles of w_{i0} f(p_{i0 i1}, ..., p_{i_n i0}).

    With shift_first the first argument is p_{i0 i1} - shift_first * delta.
    """
    n = f.degree
    dim = p.dim
    total = ZERO
    entries = [[list(p.entries[i][j].items()) for j in range(dim)] for i in range(dim)]
    for idx in itertools.product(range(dim), repeat=n + 1):
        lists = []
        for s in range(n + 1):
            i, j = idx[s], idx[(s + 1) % (n + 1)]
            terms = entries[i][j]
            if s == 0 and shift_first is not None and i == j:
                terms = NCElement(dict(terms)) - NCElement.scalar(shift_first)
                terms = list(terms.items())
            lists.append(terms)
        if any(not t for t in lists):
            continue
        v = f.on_terms(lists)
        if not v.is_zero():
            total = total + weights[idx[0]] * v
    return total


def pair_cyclic(f: Cochain, p, check: bool = True) -> RatFunc:
    """Pairing of an even twisted cyclic cocycle with an equivariant idempotent."""
    if f.degree % 2:
        raise ValueError("only even cocycles pair with projections")
    if check:
        check_cyclic_cocycle(f)
    n = f.degree // 2
    return _cycle_sum(f, p, _weights(p, f.twisted)) / factorial(n)


def check_bB_cocycle(fs: Mapping[int, Cochain], basis: Sequence[NCMonomial] | None = None) -> None:
    """Raise CocycleError unless (b + B) applied to the family vanishes on the basis."""
    basis = sphere_basis(2) if basis is None else basis
    if not fs:
        return
    top = max(fs)
    for deg in range(0, top + 2):
        parts = []
        if deg - 1 in fs:
            parts.append(twisted_b(fs[deg - 1]))
        if deg + 1 in fs:
            parts.append(twisted_B(fs[deg + 1]))
        if not parts:
            continue
        total = parts[0]
        for g in parts[1:]:
            total = total + g
        w = find_nonzero(total, basis)
        if w is not None:
            raise CocycleError(f"(b+B) of the family is nonzero in degree {deg}", w)


def pair_bB(fs: Mapping[int, Cochain] | Iterable[Cochain], p, check: bool = True) -> RatFunc:
    """sum_n (-1)^n (2n)!/n! sum w_{i0} f_{2n}(p - 1/2, p, ..., p)."""
    if not isinstance(fs, Mapping):
        fs = {f.degree: f for f in fs}
    for d, f in fs.items():
        if d != f.degree:
            raise ValueError("family keys must equal cochain degrees")
        if d % 2:
            raise ValueError("a (b,B)-cocycle family for pairing must consist of even cochains")
    if check:
        check_bB_cocycle(fs)
    total = ZERO
    half = RatFunc(Fraction(1, 2))
    for d in sorted(fs):
        f = fs[d]
        n = d // 2
        coeff = RatFunc(Fraction((-1) ** n * factorial(2 * n), factorial(n)))
        total = total + coeff * _cycle_sum(f, p, _weights(p, f.twisted), shift_first=half)
    return total
