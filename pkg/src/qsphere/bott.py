"""Equivariant idempotents over the Podles sphere representing the line bundles A_n.

For n > 0 the row is w_j = alpha^j gamma^(n-j) (j = 0..n), for n < 0 it is
w_j = alpha*^j gamma*^(|n|-j).  Solving sum_j g_j w_j w_j* = 1 exactly gives
the idempotent e_ij = g_i w_i* w_j.  When every g_j is a square in the scalar
field (|n| = 1) the self-adjoint projection p_ij = v_i* v_j with
v_j = (-1)^j sqrt(g_j) w_j is returned instead.  For |n| > 1 the g_j are not
squares (g_1 = 1 + q^2 for n = 2), and e is the diagonal conjugate
G^(1/2) p G^(-1/2) of the self-adjoint projection; pairings are unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .ncalg import (
    ZERO_ELEMENT,
    GenAction,
    NCElement,
    NCMonomial,
    act,
    star,
)
from .qscalar import ONE, Q, ZERO, RatFunc
from .exprparse import print_element

DEFAULT_BOUND = 4
_POSITIVITY_POINTS = (Fraction(1, 2), Fraction(1, 3), Fraction(9, 10))


class BottError(ValueError):
    """The coefficient system for a line-bundle idempotent could not be solved."""


Matrix = tuple  # tuple of tuples of NCElement


@dataclass(frozen=True)
class ProjMatrix:
    entries: Matrix
    weights: tuple  # spin weights i, entering the trace as q^{-2i}
    row: tuple = ()  # defining row v with entries v_i* v_j (times gram_i)
    gram: tuple = ()  # g_i for the idempotent form; empty for a self-adjoint projection
    n: int = 0

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def square(self) -> Matrix:
        return mat_mul(self.entries, self.entries)

    def adjoint(self) -> Matrix:
        d = self.dim
        return tuple(tuple(star(self.entries[j][i]) for j in range(d)) for i in range(d))

    def is_idempotent(self) -> bool:
        return self.square() == self.entries

    def is_selfadjoint(self) -> bool:
        return self.adjoint() == self.entries

    def adjoint_relation_holds(self) -> bool:
        """e* = G^-1 e G, the self-adjointness up to the diagonal Gram weights."""
        if not self.gram:
            return self.is_selfadjoint()
        d = self.dim
        g = self.gram
        target = tuple(tuple(self.entries[i][j].scale(g[j] / g[i]) for j in range(d)) for i in range(d))
        return self.adjoint() == target

    def to_json(self) -> str:
        data = {
            "dim": self.dim,
            "weights": [str(Fraction(w)) for w in self.weights],
            "entries": [[print_element(x) for x in row] for row in self.entries],
        }
        if self.gram:
            data["gram"] = [str(g) for g in self.gram]
        return json.dumps(data, indent=2)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][l] * b[l][j] for l in range(m)), ZERO_ELEMENT) for j in range(k)) for i in range(n)
    )


def scalar_matrix_mul(s: list, a: Matrix, right: bool = False) -> Matrix:
    """Product of a scalar matrix with an element matrix (s a, or a s when right)."""
    d = len(a)
    if right:
        return tuple(
            tuple(sum((a[i][l].scale(s[l][j]) for l in range(d) if not s[l][j].is_zero()), ZERO_ELEMENT) for j in range(d))
            for i in range(d)
        )
    return tuple(
        tuple(sum((a[l][j].scale(s[i][l]) for l in range(d) if not s[i][l].is_zero()), ZERO_ELEMENT) for j in range(d))
        for i in range(d)
    )


def row_monomials(n: int) -> list[NCMonomial]:
    size = abs(n)
    if n > 0:
        return [NCMonomial(j, size - j, 0) for j in range(size + 1)]
    return [NCMonomial(-j, 0, size - j) for j in range(size + 1)]


def _solve(rows: list[list[RatFunc]], rhs: list[RatFunc]) -> list[RatFunc]:
    """Exact Gaussian elimination over the scalar field."""
    n = len(rhs)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise BottError("singular coefficient system")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def gram_coefficients(n: int) -> list[RatFunc]:
    """Solve sum_j g_j w_j w_j* = 1 over the powers of gamma* gamma."""
    mons = row_monomials(n)
    size = len(mons)
    prods = [NCElement({m: ONE}) * star(NCElement({m: ONE})) for m in mons]
    targets = [NCMonomial(0, i, i) for i in range(size)]
    for x in prods:
        for m in x.monomials():
            if m not in targets:
                raise BottError(f"w w* has an unexpected monomial {tuple(m)}")
    rows = [[prods[j].coefficient(t) for j in range(size)] for t in targets]
    rhs = [ONE] + [ZERO] * (size - 1)
    g = _solve(rows, rhs)
    for gj in g:
        for q0 in _POSITIVITY_POINTS:
            if not gj.eval_float(q0) > 0:
                raise BottError(f"coefficient {gj} is not positive at q={q0}")
    return g


def bott(n: int, bound: int = DEFAULT_BOUND) -> ProjMatrix:
    """Equivariant idempotent for the line bundle of charge n."""
    if n == 0:
        raise ValueError("n must be nonzero")
    if abs(n) > bound:
        raise ValueError(f"|n| = {abs(n)} exceeds the configured bound {bound}")
    mons = row_monomials(n)
    g = gram_coefficients(n)
    weights = tuple(Fraction(m.rw, 2) for m in mons)
    roots = [x.sqrt() for x in g]
    if all(r is not None for r in roots):
        v = tuple(NCElement({m: r if j % 2 == 0 else -r}) for j, (m, r) in enumerate(zip(mons, roots)))
        vs = [star(x) for x in v]
        entries = tuple(tuple(vs[i] * v[j] for j in range(len(v))) for i in range(len(v)))
        return ProjMatrix(entries, weights, v, (), n)
    w = tuple(NCElement({m: ONE}) for m in mons)
    ws = [star(x) for x in w]
    entries = tuple(tuple((ws[i] * w[j]).scale(g[i]) for j in range(len(w))) for i in range(len(w)))
    return ProjMatrix(entries, weights, w, tuple(g), n)


# ---------------------------------------------------------------------------
# equivariance


def _decompose(x: NCElement, row: tuple) -> list[RatFunc]:
    """Coefficients c_l with x = sum_l row_l c_l (row entries are scaled monomials)."""
    coeffs = []
    rest = x
    for r in row:
        (mono, c), = r.items()
        v = rest.coefficient(mono) / c
        coeffs.append(v)
        rest = rest - r.scale(v)
    if not rest.is_zero():
        raise BottError("the row is not stable under the action")
    return coeffs


def row_representation(p: ProjMatrix, generator: str) -> list[list[RatFunc]]:
    """R(w) defined by v <| w = v R(w) for the defining row v."""
    d = p.dim
    cols = [_decompose(act(GenAction(generator, "right"), p.row[j]), p.row) for j in range(d)]
    return [[cols[j][l] for j in range(d)] for l in range(d)]


def _identity(d: int) -> list[list[RatFunc]]:
    return [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]


def _scaled(m: list, c: RatFunc) -> list:
    return [[x * c for x in r] for r in m]


def _right_act(p: ProjMatrix, generator: str) -> Matrix:
    return tuple(tuple(act(GenAction(generator, "right"), x) for x in r) for r in p.entries)


def _hopf_terms(generator: str):
    """Second iterated coproduct as (w0, w1, w2, scalar applied to R(S^-1 w2))."""
    if generator == "k":
        return [("k", "k", "kinv")]  # S^-1(k) = k^-1
    if generator == "e":
        return [("e", "kinv", "k"), ("k", "e", "k"), ("k", "k", "-qe")]
    if generator == "f":
        return [("f", "kinv", "k"), ("k", "f", "k"), ("k", "k", "-q^-1f")]
    raise ValueError(f"equivariance is checked for e, f, k, got {generator!r}")


def equivariance_defect(p: ProjMatrix, omega: GenAction | str, rep: dict | None = None) -> Matrix:
    """sum R(w0) (p <| w1) R(S^-1 w2) - eps(w) p, entrywise in the algebra.

    S^-1 is applied to the last tensor factor of the iterated coproduct
    e (x) k^-1 (x) k^-1 + k (x) e (x) k^-1 + k (x) k (x) e (same shape for f,
    and k (x) k (x) k for k).  ``rep`` overrides the matrices R.
    """
    gen = omega.generator if isinstance(omega, GenAction) else omega
    d = p.dim
    if rep is None:
        rep = {g: row_representation(p, g) for g in ("e", "f", "k", "kinv")}
    named = {
        "e": rep["e"],
        "f": rep["f"],
        "k": rep["k"],
        "kinv": rep["kinv"],
        "-qe": _scaled(rep["e"], -Q),
        "-q^-1f": _scaled(rep["f"], -Q.inverse()),
    }
    acted = {g: _right_act(p, g) for g in ("e", "f", "k", "kinv")}
    total = tuple(tuple(ZERO_ELEMENT for _ in range(d)) for _ in range(d))
    for w0, w1, w2 in _hopf_terms(gen):
        left = named[w0]
        last = named[w2]
        term = scalar_matrix_mul(left, acted[w1])
        term = scalar_matrix_mul(last, term, right=True)
        total = tuple(tuple(total[i][j] + term[i][j] for j in range(d)) for i in range(d))
    if gen == "k":
        total = tuple(tuple(total[i][j] - p.entries[i][j] for j in range(d)) for i in range(d))
    return total


def is_zero_matrix(m: Matrix) -> bool:
    return all(x.is_zero() for r in m for x in r)
