"""The coordinate *-algebra of SU_q(2) in the normal basis a^k g^m g*^n.

Letters used in words: ``a`` = alpha, ``A`` = alpha*, ``g`` = gamma, ``G`` = gamma*.
A monomial (k, m, n) stands for alpha^k gamma^m gamma*^n with alpha^k = (alpha*)^-k
for k < 0.

Two independent product routes exist: ``normal_form`` rewrites words with the
defining relations, and ``NCElement.__mul__`` uses cached closed-form structure
constants.  The test-suite checks them against each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .qscalar import ONE, Q, Q_INV, SQRT_Q, ZERO, RatFunc, as_ratfunc

LETTERS = ("a", "A", "g", "G")
LETTER_ALIASES = {"a": "a", "a*": "A", "A": "A", "g": "g", "g*": "G", "G": "G"}


class NCMonomial(NamedTuple):
    k: int
    m: int
    n: int

    @property
    def lw(self) -> int:
        """Left weight: the exponent of q^(1/2) under the left k-action."""
        return self.k + self.m - self.n

    @property
    def rw(self) -> int:
        """Right weight: the exponent of q^(1/2) under the right k-action."""
        return self.k - self.m + self.n

    @property
    def degree(self) -> int:
        return abs(self.k) + self.m + self.n

    def word(self) -> str:
        head = "a" * self.k if self.k >= 0 else "A" * (-self.k)
        return head + "g" * self.m + "G" * self.n


UNIT = NCMonomial(0, 0, 0)


def monomial_of_word(word: str) -> NCMonomial | None:
    """The monomial for a word already in normal form, otherwise None."""
    i = 0
    k = 0
    while i < len(word) and word[i] == "a":
        k += 1
        i += 1
    if k == 0:
        while i < len(word) and word[i] == "A":
            k -= 1
            i += 1
    m = 0
    while i < len(word) and word[i] == "g":
        m += 1
        i += 1
    n = 0
    while i < len(word) and word[i] == "G":
        n += 1
        i += 1
    if i != len(word):
        return None
    return NCMonomial(k, m, n)


class NCElement:
    """Finite Q(q)-linear combination of normal monomials."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = as_ratfunc(c)
                if not c.is_zero():
                    clean[NCMonomial(*mono)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> "NCElement":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k: int, m: int = 0, n: int = 0, coeff=1) -> "NCElement":
        if m < 0 or n < 0:
            raise ValueError("gamma exponents must be non-negative")
        return cls({NCMonomial(k, m, n): coeff})

    @classmethod
    def scalar(cls, c) -> "NCElement":
        return cls({UNIT: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[NCMonomial]:
        return sorted(self._terms)

    def coefficient(self, mono) -> RatFunc:
        return self._terms.get(NCMonomial(*mono), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(m == UNIT for m in self._terms)

    def scalar_value(self) -> RatFunc:
        if not self.is_scalar():
            raise ValueError("element is not a scalar multiple of 1")
        return self._terms.get(UNIT, ZERO)

    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[mono]
                else:
                    out[mono] = s
        return NCElement._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return NCElement._wrap({m: -c for m, c in self._terms.items()})

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

    def scale(self, c) -> "NCElement":
        c = as_ratfunc(c)
        if c.is_zero():
            return ZERO_ELEMENT
        return NCElement._wrap({m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        acc: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                c12 = c1 * c2
                for mono, coeff in monomial_product(m1, m2):
                    _accumulate(acc, mono, c12 * coeff)
        return NCElement._wrap({m: c for m, c in acc.items() if not c.is_zero()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = ONE_ELEMENT
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        from .exprparse import print_element

        return f"NCElement({print_element(self)})"

    def __str__(self):
        from .exprparse import print_element

        return print_element(self)

    # structure maps -----------------------------------------------------

    def star(self) -> "NCElement":
        return star(self)

    def map_monomials(self, fn) -> "NCElement":
        """Apply a linear map given on monomials as fn(mono) -> NCElement."""
        out = ZERO_ELEMENT
        for mono, c in self._terms.items():
            out = out + fn(mono).scale(c)
        return out


def _accumulate(acc: dict, mono, c: RatFunc) -> None:
    s = acc.get(mono)
    acc[mono] = c if s is None else s + c


def _coerce(x):
    if isinstance(x, NCElement):
        return x
    if isinstance(x, (int, Fraction, RatFunc)):
        return NCElement.scalar(x)
    return NotImplemented


ZERO_ELEMENT = NCElement._wrap({})
ONE_ELEMENT = NCElement._wrap({UNIT: ONE})
ALPHA = NCElement.monomial(1)
ALPHA_STAR = NCElement.monomial(-1)
GAMMA = NCElement.monomial(0, 1, 0)
GAMMA_STAR = NCElement.monomial(0, 0, 1)
GENERATORS = {"a": ALPHA, "A": ALPHA_STAR, "g": GAMMA, "G": GAMMA_STAR}


# ---------------------------------------------------------------------------
# closed-form structure constants


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _x_product(factors: Iterable[int]) -> list[dict]:
    """Expand prod_i (1 - q^{e_i} x) as a list indexed by the power of x.

    Coefficients are Laurent polynomials {q-exponent: int}.
    """
    poly: list[dict] = [{0: 1}]
    for e in factors:
        nxt: list[dict] = [dict() for _ in range(len(poly) + 1)]
        for j, c in enumerate(poly):
            for ex, v in c.items():
                nxt[j][ex] = nxt[j].get(ex, 0) + v
                nxt[j + 1][ex + e] = nxt[j + 1].get(ex + e, 0) - v
        poly = [{ex: v for ex, v in c.items() if v} for c in nxt]
    return poly


@lru_cache(maxsize=None)
def _alpha_product(k1: int, k2: int) -> tuple[int, tuple]:
    """alpha^k1 alpha^k2 = alpha^(k1+k2) * sum_j c_j x^j with x = gamma* gamma."""
    if k1 * k2 >= 0:
        return k1 + k2, ({0: 1},)
    if k1 > 0:
        a, b = k1, -k2
        if a >= b:
            factors = [2 * i for i in range(1, b + 1)]
        else:
            factors = [2 * i + 2 * (b - a) for i in range(1, a + 1)]
    else:
        b, a = -k1, k2
        if b >= a:
            factors = [-2 * i for i in range(a)]
        else:
            factors = [-2 * i - 2 * (a - b) for i in range(b)]
    return k1 + k2, tuple(_x_product(factors))


@lru_cache(maxsize=None)
def _monomial_product_laurent(m1: NCMonomial, m2: NCMonomial) -> tuple:
    k, xpoly = _alpha_product(m1.k, m2.k)
    shift = -m2.k * (m1.m + m1.n)
    out = []
    for j, coeff in enumerate(xpoly):
        if coeff:
            out.append((NCMonomial(k, m1.m + m2.m + j, m1.n + m2.n + j), {e + shift: c for e, c in coeff.items()}))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_product(m1: NCMonomial, m2: NCMonomial) -> tuple:
    """Normal-form expansion of m1 * m2 as ((monomial, RatFunc), ...)."""
    return tuple((mono, RatFunc.laurent(c)) for mono, c in _monomial_product_laurent(m1, m2))


def monomial_product_laurent(m1: NCMonomial, m2: NCMonomial) -> tuple:
    """Same as monomial_product with integer Laurent coefficients {q-exponent: int}."""
    return _monomial_product_laurent(NCMonomial(*m1), NCMonomial(*m2))


# ---------------------------------------------------------------------------
# rewriting route

_RULES: dict[tuple[str, str], tuple] = {
    ("a", "A"): ((ONE, ""), (-(Q * Q), "gG")),
    ("A", "a"): ((ONE, ""), (-ONE, "gG")),
    ("G", "g"): ((ONE, "gG"),),
    ("g", "a"): ((Q_INV, "ag"),),
    ("G", "a"): ((Q_INV, "aG"),),
    ("g", "A"): ((Q, "Ag"),),
    ("G", "A"): ((Q, "AG"),),
}


def _redexes(word: str) -> list[int]:
    return [i for i in range(len(word) - 1) if (word[i], word[i + 1]) in _RULES]


def _normalize_word(word: Sequence[str]) -> str:
    letters = []
    for x in word:
        if x not in LETTER_ALIASES:
            raise ValueError(f"unknown generator {x!r}")
        letters.append(LETTER_ALIASES[x])
    return "".join(letters)


def normal_form(word: Sequence[str] | str, coeff=1, rng: random.Random | None = None) -> NCElement:
    """Rewrite a word in the generators to the normal basis.

    ``word`` is a string over ``aAgG`` or a sequence of tokens among
    ``a, a*, g, g*``.  Redexes are contracted leftmost-first, or in an order
    drawn from ``rng`` when one is supplied.
    """
    if isinstance(word, str):
        word = list(word)
    pending: list[tuple[RatFunc, str]] = [(as_ratfunc(coeff), _normalize_word(word))]
    done: dict = {}
    while pending:
        c, w = pending.pop()
        spots = _redexes(w)
        if not spots:
            mono = monomial_of_word(w)
            assert mono is not None
            _accumulate(done, mono, c)
            continue
        i = rng.choice(spots) if rng is not None else spots[0]
        for rc, rw in _RULES[(w[i], w[i + 1])]:
            pending.append((c * rc, w[:i] + rw + w[i + 2:]))
    return NCElement._wrap({m: v for m, v in done.items() if not v.is_zero()})


def word_of_element_product(words: Iterable[str]) -> str:
    return "".join(words)


# ---------------------------------------------------------------------------
# involution


@lru_cache(maxsize=None)
def star_monomial(mono: NCMonomial) -> NCElement:
    """(a^k g^m g*^n)* = g^n g*^m a^-k rewritten: q^{k(m+n)} a^-k g^n g*^m."""
    k, m, n = mono
    return NCElement._wrap({NCMonomial(-k, n, m): RatFunc.q_power(k * (m + n))})


def star(x: NCElement) -> NCElement:
    out: dict = {}
    for mono, c in x.items():
        for m2, c2 in star_monomial(mono).items():
            _accumulate(out, m2, c * c2)
    return NCElement._wrap(out)


# ---------------------------------------------------------------------------
# U_q(su2) actions


@dataclass(frozen=True)
class GenAction:
    generator: str  # one of e, f, k, kinv
    side: str = "left"  # left: the action d_w, right: a <| w

    def __post_init__(self):
        if self.generator not in ("e", "f", "k", "kinv"):
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.side not in ("left", "right"):
            raise ValueError(f"unknown side {self.side!r}")


def _rep_matrix(gen: str) -> list[list[RatFunc]]:
    """The spin-1/2 representation of the enveloping algebra generators."""
    if gen == "k":
        return [[SQRT_Q, ZERO], [ZERO, SQRT_Q.inverse()]]
    if gen == "kinv":
        return [[SQRT_Q.inverse(), ZERO], [ZERO, SQRT_Q]]
    if gen == "e":
        return [[ZERO, ONE], [ZERO, ZERO]]
    if gen == "f":
        return [[ZERO, ZERO], [ONE, ZERO]]
    raise ValueError(gen)


def _corep() -> list[list[NCElement]]:
    """The fundamental corepresentation matrix [[a, -q g*], [g, a*]]."""
    return [[ALPHA, GAMMA_STAR.scale(-Q)], [GAMMA, ALPHA_STAR]]


def _generator_values() -> dict:
    """Values of each action on the four generators, read off the corepresentation.

    Left: d_w(U) = U pi(w).  Right: U <| w = pi(w) U.
    """
    u = _corep()
    out = {}
    for gen in ("e", "f", "k", "kinv"):
        p = _rep_matrix(gen)
        left = [[sum((u[i][l].scale(p[l][j]) for l in range(2)), ZERO_ELEMENT) for j in range(2)] for i in range(2)]
        right = [[sum((u[l][j].scale(p[i][l]) for l in range(2)), ZERO_ELEMENT) for j in range(2)] for i in range(2)]
        for side, mat in (("left", left), ("right", right)):
            out[(gen, side)] = {
                "a": mat[0][0],
                "g": mat[1][0],
                "A": mat[1][1],
                "G": mat[0][1].scale(-Q_INV),
            }
    return out


GENERATOR_VALUES = _generator_values()


def _letter_weight(letter: str, side: str) -> int:
    """Weight of a single letter: exponent of q^(1/2) under the k-action."""
    if side == "left":
        return {"a": 1, "g": 1, "A": -1, "G": -1}[letter]
    return {"a": 1, "g": -1, "A": -1, "G": 1}[letter]


@lru_cache(maxsize=None)
def act_monomial(gen: str, side: str, mono: NCMonomial) -> NCElement:
    """Apply a generator action to a monomial via the coproduct.

    e and f act as twisted derivations: on a word x_1...x_L the letter x_i is
    hit by e while the letters before it see k and those after it see k^-1
    (both the left and right actions use Delta(e) = e (x) k^-1 + k (x) e).
    """
    if gen in ("k", "kinv"):
        w = mono.lw if side == "left" else mono.rw
        return NCElement._wrap({mono: RatFunc.q_power(Fraction(w if gen == "k" else -w, 2))})
    word = mono.word()
    values = GENERATOR_VALUES[(gen, side)]
    weights = [_letter_weight(x, side) for x in word]
    total = sum(weights)
    out = ZERO_ELEMENT
    before = 0
    for i, x in enumerate(word):
        after = total - before - weights[i]
        hit = values[x]
        if not hit.is_zero():
            prefix = monomial_of_word(word[:i])
            suffix = monomial_of_word(word[i + 1:])
            term = NCElement._wrap({prefix: ONE}) * hit * NCElement._wrap({suffix: ONE})
            out = out + term.scale(RatFunc.q_power(Fraction(before - after, 2)))
        before += weights[i]
    return out


def act(omega: GenAction | str, a: NCElement, side: str | None = None) -> NCElement:
    """Apply a generator of the enveloping algebra to a, on the left (d_w) or right (<| w)."""
    if isinstance(omega, str):
        omega = GenAction(omega, side or "left")
    out: dict = {}
    for mono, c in a.items():
        for m2, c2 in act_monomial(omega.generator, omega.side, mono).items():
            _accumulate(out, m2, c * c2)
    return NCElement._wrap({m: v for m, v in out.items() if not v.is_zero()})


def d_e(a: NCElement) -> NCElement:
    return act(GenAction("e", "left"), a)


def d_f(a: NCElement) -> NCElement:
    return act(GenAction("f", "left"), a)


def d_k_power(a: NCElement, p: Fraction | int) -> NCElement:
    """The left action of k^p: scales a monomial by q^{lw p / 2}."""
    return NCElement._wrap({m: c * RatFunc.q_power(Fraction(m.lw * p, 2)) for m, c in a.items()})


def right_k_power(a: NCElement, p: Fraction | int) -> NCElement:
    """The right action of k^p: scales a monomial by q^{rw p / 2}."""
    return NCElement._wrap({m: c * RatFunc.q_power(Fraction(m.rw * p, 2)) for m, c in a.items()})


def twist(b: NCElement, t: Fraction | int = 1) -> NCElement:
    """sigma^t(b) = b <| k^{2t}."""
    return right_k_power(b, 2 * Fraction(t))


def grade(a: NCElement) -> dict[int, NCElement]:
    """Split a into its left-weight components A_n."""
    parts: dict[int, dict] = {}
    for mono, c in a.items():
        parts.setdefault(mono.lw, {})[mono] = c
    return {n: NCElement._wrap(t) for n, t in sorted(parts.items())}


def is_homogeneous(a: NCElement, n: int) -> bool:
    return all(m.lw == n for m in a.monomials())


def in_sphere(a: NCElement) -> bool:
    """True when a lies in the weight-zero subalgebra (the Podles sphere)."""
    return is_homogeneous(a, 0)


def monomials_up_to(max_degree: int, lw: int | None = None) -> list[NCMonomial]:
    """All normal monomials of degree <= max_degree, optionally of a fixed left weight."""
    out = []
    for m in range(max_degree + 1):
        for n in range(max_degree + 1 - m):
            rest = max_degree - m - n
            for k in range(-rest, rest + 1):
                mono = NCMonomial(k, m, n)
                if lw is None or mono.lw == lw:
                    out.append(mono)
    return sorted(out, key=lambda x: (x.degree, x))


def sphere_basis(max_degree: int) -> list[NCMonomial]:
    return monomials_up_to(max_degree, lw=0)


def random_word(rng: random.Random, max_len: int = 8) -> str:
    return "".join(rng.choice(LETTERS) for _ in range(rng.randint(0, max_len)))


def random_element(rng: random.Random, max_degree: int = 3, n_terms: int = 3, lw: int | None = None) -> NCElement:
    pool = monomials_up_to(max_degree, lw)
    out = ZERO_ELEMENT
    for _ in range(n_terms):
        mono = rng.choice(pool)
        c = RatFunc(rng.randint(-3, 3)) + RatFunc.q_power(rng.randint(-2, 2)) * rng.randint(-2, 2)
        out = out + NCElement._wrap({mono: ONE}).scale(c)
    return out
