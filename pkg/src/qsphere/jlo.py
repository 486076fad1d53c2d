"""Truncated spinor model and the numerical JLO cochains psi_0, psi_2.

The spinor space is L2(A_1) + L2(A_-1).  The truncation keeps monomials of
degree <= d.  Within a weight sector (fixed left and right weight) the
monomials are a^k (g g*)^j-chains, one per degree, and Gram-Schmidt in degree
order produces the spin basis: the j-th vector spans the unique copy of spin
(degree/2) in that sector.  The process runs in exact rationals at q0, so the
Dirac operator is diagonal by construction and the only floating-point step is
the final normalisation by square roots of exact norms.

Multiplication operators are compressed to the truncated space.  Because the
truncated space is invariant under D, the compressed commutator [D, PbP]
equals P[D, b]P, and the commutators are formed from the exact formula
[D, b] = (0, q^(1/2) d_e(b); q^(-1/2) d_f(b), 0).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .calculus import GradingError, haar_of_product
from .cohomology import tau1 as _tau1_cochain, tau2 as _tau2_cochain
from .ncalg import NCElement, NCMonomial, act_monomial, d_e, d_f, in_sphere, monomials_up_to, star_monomial
from .qscalar import ONE, Q, SQRT_Q, ZERO, RatFunc
from .spectral import format_float, heat_moment, qint_exact

SERIES_SPREAD = 1.0


# ---------------------------------------------------------------------------
# divided differences of exp


def exp_divdiff2(a: float, b: float) -> float:
    """exp[a, b] = (e^b - e^a)/(b - a), with the confluent limit e^a."""
    if a > b:
        a, b = b, a
    h = b - a
    if h == 0:
        return math.exp(a)
    if h > 1:
        return (math.exp(b) - math.exp(a)) / h
    return math.exp(a) * math.expm1(h) / h


def exp_divdiff3(a: float, b: float, c: float) -> float:
    """Second divided difference exp[a, b, c] = integral over the 2-simplex of exp(t.x).

    Close points use the series e^lo sum_k h_k(0, b-lo, c-lo)/(k+2)!, whose
    terms are all positive; well separated points use the recurrence.
    """
    lo, mid, hi = sorted((a, b, c))
    spread = hi - lo
    if spread < SERIES_SPREAD:
        x, y = mid - lo, hi - lo
        # h_k(0, x, y) = sum_{i=0}^{k} x^i y^(k-i)
        total = 0.0
        fact = 2.0
        xp = [1.0]
        yp = [1.0]
        for k in range(0, 60):
            if k > 0:
                xp.append(xp[-1] * x)
                yp.append(yp[-1] * y)
                fact *= k + 2
            hk = math.fsum(xp[i] * yp[k - i] for i in range(k + 1))
            term = hk / fact
            total += term
            if term < 1e-18 * total:
                break
        return math.exp(lo) * total
    return (exp_divdiff2(mid, hi) - exp_divdiff2(lo, mid)) / spread


# ---------------------------------------------------------------------------
# model


class ModelError(ArithmeticError):
    pass


@dataclass
class Side:
    """One chirality half: monomial basis, exact spin basis and spectral labels."""

    sign: int
    monomials: list  # NCMonomial, grouped by sector, degree order within a sector
    transform: list  # rows: exact coefficients of the orthogonal vector u_i in the monomials
    norms: list  # exact <u_i, u_i>
    levels: list  # n = spin + 1/2 for each basis vector
    rw: list

    @property
    def size(self) -> int:
        return len(self.monomials)


@dataclass
class SpectralModel:
    q0: Fraction
    d: int
    plus: Side
    minus: Side
    gram_plus: np.ndarray
    gram_minus: np.ndarray
    d_plus_minus: np.ndarray  # D block mapping H_- to H_+ (d_e)
    d_minus_plus: np.ndarray  # D block mapping H_+ to H_- (d_f)
    eig_plus: np.ndarray
    eig_minus: np.ndarray
    rho_plus: np.ndarray
    rho_minus: np.ndarray
    _ops: dict = field(default_factory=dict, repr=False)

    @property
    def basis_plus(self) -> list:
        return self.plus.monomials

    @property
    def basis_minus(self) -> list:
        return self.minus.monomials

    @property
    def dim(self) -> int:
        return self.plus.size + self.minus.size

    def op_d(self) -> np.ndarray:
        n = self.plus.size
        out = np.zeros((self.dim, self.dim))
        out[:n, n:] = self.d_plus_minus
        out[n:, :n] = self.d_minus_plus
        return out

    def chirality(self) -> np.ndarray:
        return np.concatenate([np.ones(self.plus.size), -np.ones(self.minus.size)])

    def rho_diag(self) -> np.ndarray:
        return np.concatenate([self.rho_plus, self.rho_minus])

    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.eig_plus, self.eig_minus])


def _sectors(lw: int, d: int) -> list[list[NCMonomial]]:
    groups: dict = {}
    for m in monomials_up_to(d, lw):
        groups.setdefault(m.rw, []).append(m)
    return [sorted(groups[r], key=lambda x: x.degree) for r in sorted(groups)]


@lru_cache(maxsize=None)
def _inner_exact(m1: NCMonomial, m2: NCMonomial, q0: Fraction) -> Fraction:
    """<m1, m2> = h(m1* m2) at q0."""
    total = Fraction(0)
    for mono, c in star_monomial(m1).items():
        total += (c * haar_of_product(mono, m2)).eval_exact(q0)
    return total


def _build_side(sign: int, d: int, q0: Fraction) -> Side:
    monos: list = []
    transform: list = []
    norms: list = []
    levels: list = []
    rws: list = []
    for sector in _sectors(sign, d):
        base = len(monos)
        size = len(sector)
        gram = [[_inner_exact(a, b, q0) for b in sector] for a in sector]
        vecs: list = []
        for j in range(size):
            v = [Fraction(0)] * size
            v[j] = Fraction(1)
            for i, u in enumerate(vecs):
                proj = sum(u[k] * gram[k][j] for k in range(size)) / norms[base + i]
                if proj:
                    v = [vk - proj * uk for vk, uk in zip(v, u)]
            nrm = sum(v[a] * v[b] * gram[a][b] for a in range(size) for b in range(size) if v[a] and v[b])
            if nrm <= 0:
                raise ModelError(f"Gram matrix not positive definite in sector {sector[0]}")
            vecs.append(v)
            norms.append(nrm)
        for j, m in enumerate(sector):
            monos.append(m)
            transform.append((base, vecs[j]))
            levels.append((m.degree + 1) // 2)
            rws.append(m.rw)
    return Side(sign, monos, transform, norms, levels, rws)


def _gram_float(side: Side, q0: Fraction) -> np.ndarray:
    n = side.size
    g = np.zeros((n, n))
    for i, a in enumerate(side.monomials):
        for j, b in enumerate(side.monomials):
            if a.rw == b.rw:
                g[i, j] = float(_inner_exact(a, b, q0))
    return g


def _image_matrix(src: Side, dst: Side, apply, q0: Fraction) -> np.ndarray:
    """Matrix of P X P between orthonormal spin bases, X given on monomials.

    ``apply(mono)`` returns the NCElement X(mono).  Entries are exact until the
    division by square roots of the norms.
    """
    # exact monomial matrix T[k][l] = <w_k^dst, X w_l^src>
    images = [apply(m) for m in src.monomials]
    by_rw: dict = {}
    for k, m in enumerate(dst.monomials):
        by_rw.setdefault(m.rw, []).append(k)
    t: dict = {}
    for l, img in enumerate(images):
        if img.is_zero():
            continue
        rws = {m.rw for m in img.monomials()}
        for r in rws:
            for k in by_rw.get(r, ()):
                wk = dst.monomials[k]
                total = ZERO
                for mono, c in img.items():
                    if mono.rw != r or mono.lw != wk.lw:
                        continue
                    for sm, sc in star_monomial(wk).items():
                        h = haar_of_product(sm, mono)
                        if not h.is_zero():
                            total = total + c * sc * h
                if not total.is_zero():
                    t[(k, l)] = total.eval_exact(q0)
    n_dst, n_src = dst.size, src.size
    out = np.zeros((n_dst, n_src))
    # M[i][j] = sum_{k,l} S_dst[i][k] S_src[j][l] T[k][l] / sqrt(n_i n_j)
    tl: dict = {}
    for (k, l), v in t.items():
        tl.setdefault(l, []).append((k, v))
    for j in range(n_src):
        base_j, vj = src.transform[j]
        col: dict = {}
        for off, cj in enumerate(vj):
            if not cj:
                continue
            for k, v in tl.get(base_j + off, ()):
                col[k] = col.get(k, 0) + cj * v
        if not col:
            continue
        for i in range(n_dst):
            base_i, vi = dst.transform[i]
            acc = Fraction(0)
            for off, ci in enumerate(vi):
                if ci:
                    x = col.get(base_i + off)
                    if x:
                        acc += ci * x
            if acc:
                out[i, j] = float(acc / _sqrt_norm_product(dst.norms[i], src.norms[j]))
    return out


def _sqrt_norm_product(a: Fraction, b: Fraction) -> Fraction:
    """sqrt(a b) to about 40 digits as an exact rational."""
    x = a * b
    scale = 10 ** 40
    r = math.isqrt(x.numerator * scale * scale // x.denominator)
    return Fraction(r, scale) if r else Fraction(math.sqrt(float(x)))


def build_model(q0=Fraction(1, 2), d: int = 12) -> SpectralModel:
    q0 = Fraction(q0)
    if not 0 < q0 < 1:
        raise ValueError("q0 must lie in (0, 1)")
    if d < 2:
        raise ValueError("cutoff d must be at least 2")
    plus = _build_side(1, d, q0)
    minus = _build_side(-1, d, q0)
    dpm = _image_matrix(minus, plus, lambda m: act_monomial("e", "left", m), q0)
    dmp = _image_matrix(plus, minus, lambda m: act_monomial("f", "left", m), q0)
    eig_p = np.array([float(qint_exact(n, q0) ** 2) for n in plus.levels])
    eig_m = np.array([float(qint_exact(n, q0) ** 2) for n in minus.levels])
    rho_p = np.array([float(q0 ** (-r)) for r in plus.rw])
    rho_m = np.array([float(q0 ** (-r)) for r in minus.rw])
    return SpectralModel(q0, d, plus, minus, _gram_float(plus, q0), _gram_float(minus, q0),
                         dpm, dmp, eig_p, eig_m, rho_p, rho_m)


# ---------------------------------------------------------------------------
# operators


def _check_sphere(*bs: NCElement) -> None:
    for b in bs:
        if not in_sphere(b):
            raise GradingError("JLO arguments must lie in the sphere (left weight 0)")


def _multiplier(x: NCElement):
    def apply(m: NCMonomial) -> NCElement:
        return x * NCElement({m: ONE})

    return apply


def _key(x: NCElement) -> tuple:
    return tuple(sorted((tuple(m), c.key()) for m, c in x.items()))


def multiplication_blocks(model: SpectralModel, b: NCElement) -> tuple[np.ndarray, np.ndarray]:
    """Compressed multiplication by b on H_+ and on H_-."""
    key = ("mul", _key(b))
    if key not in model._ops:
        model._ops[key] = (
            _image_matrix(model.plus, model.plus, _multiplier(b), model.q0),
            _image_matrix(model.minus, model.minus, _multiplier(b), model.q0),
        )
    return model._ops[key]


def commutator_blocks(model: SpectralModel, b: NCElement) -> tuple[np.ndarray, np.ndarray]:
    """Compressed [D, b]: (H_- -> H_+ block q^(1/2) d_e(b), H_+ -> H_- block q^(-1/2) d_f(b))."""
    key = ("comm", _key(b))
    if key not in model._ops:
        up = d_e(b).scale(SQRT_Q)
        down = d_f(b).scale(SQRT_Q.inverse())
        model._ops[key] = (
            _image_matrix(model.minus, model.plus, _multiplier(up), model.q0),
            _image_matrix(model.plus, model.minus, _multiplier(down), model.q0),
        )
    return model._ops[key]


def psi0(model: SpectralModel, eps: float, b: NCElement, chiral: bool = True) -> float:
    """Tr(gamma b exp(-eps D^2) rho); with chiral=False the grading is dropped."""
    _check_sphere(b)
    mp, mm = multiplication_blocks(model, b)
    wp = np.exp(-eps * model.eig_plus) * model.rho_plus
    wm = np.exp(-eps * model.eig_minus) * model.rho_minus
    sp = math.fsum(np.diag(mp) * wp)
    sm = math.fsum(np.diag(mm) * wm)
    return sp - sm if chiral else sp + sm


def psi0_scale(model: SpectralModel, eps: float, b: NCElement) -> float:
    """sum |b_aa| exp(-eps lambda_a) rho_a over both halves, the reference size for psi0."""
    mp, mm = multiplication_blocks(model, b)
    wp = np.exp(-eps * model.eig_plus) * model.rho_plus
    wm = np.exp(-eps * model.eig_minus) * model.rho_minus
    return math.fsum(np.abs(np.diag(mp)) * wp) + math.fsum(np.abs(np.diag(mm)) * wm)


def _kernel(eps: float, levels_a: list, levels_b: list, levels_c: list, q0: Fraction) -> np.ndarray:
    """K[b, c, a] = exp[-eps lam_b, -eps lam_c, -eps lam_a] via a table over spin levels."""
    distinct = sorted(set(levels_a) | set(levels_b) | set(levels_c))
    pos = {n: i for i, n in enumerate(distinct)}
    lam = [float(qint_exact(n, q0) ** 2) for n in distinct]
    m = len(distinct)
    table = np.empty((m, m, m))
    for i in range(m):
        for j in range(m):
            for k in range(m):
                table[i, j, k] = exp_divdiff3(-eps * lam[i], -eps * lam[j], -eps * lam[k])
    ib = np.array([pos[n] for n in levels_b])
    ic = np.array([pos[n] for n in levels_c])
    ia = np.array([pos[n] for n in levels_a])
    return table[np.ix_(ib, ic, ia)]


def psi2(model: SpectralModel, eps: float, b0: NCElement, b1: NCElement, b2: NCElement) -> float:
    """eps * integral over the 2-simplex of Tr(gamma b0 e^{-t0 eps D^2}[D,b1] e^{-t1 eps D^2}[D,b2] e^{-t2 eps D^2} rho)."""
    _check_sphere(b0, b1, b2)
    m0p, m0m = multiplication_blocks(model, b0)
    up1, down1 = commutator_blocks(model, b1)
    up2, down2 = commutator_blocks(model, b2)
    lp, lm = model.plus.levels, model.minus.levels
    # a in H_+: b0 (+,+), [D,b1] (+,-), [D,b2] (-,+)
    k_plus = _kernel(eps, lp, lp, lm, model.q0)
    s_plus = np.einsum("ab,bc,ca,a,bca->", m0p, up1, down2, model.rho_plus, k_plus)
    # a in H_-: b0 (-,-), [D,b1] (-,+), [D,b2] (+,-)
    k_minus = _kernel(eps, lm, lm, lp, model.q0)
    s_minus = np.einsum("ab,bc,ca,a,bca->", m0m, down1, up2, model.rho_minus, k_minus)
    return float(eps * (s_plus - s_minus))


# ---------------------------------------------------------------------------
# comparison with the predicted small-eps expansion


def cocycle_values(b0: NCElement, b1: NCElement, b2: NCElement) -> tuple[RatFunc, RatFunc]:
    """Exact (tau1, tau2) on the triple."""
    return _tau1_cochain()(b0, b1, b2), _tau2_cochain()(b0, b1, b2)


def local_index_prediction(q0, eps: float, b0, b1, b2, oscillatory: bool = True) -> float:
    """q/(1-q^2) (tau1+tau2) - (q^2 tau1 + tau2) eps/(1-q^2)^2 J(eps)."""
    q0 = Fraction(q0)
    t1, t2 = cocycle_values(b0, b1, b2)
    q = Q
    lead = (q / (1 - q * q) * (t1 + t2)).eval_float(q0)
    if not oscillatory:
        return lead
    osc = ((q * q * t1 + t2) / (1 - q * q) ** 2).eval_float(q0)
    return lead - osc * eps * heat_moment(eps, q0)


def local_index_residual(model: SpectralModel, eps: float, b0, b1, b2, oscillatory: bool = True) -> float:
    return psi2(model, eps, b0, b1, b2) - local_index_prediction(model.q0, eps, b0, b1, b2, oscillatory)


@dataclass(frozen=True)
class ResidualRow:
    q0: Fraction
    d: int
    epsilon: float
    psi2: float
    prediction: float
    residual: float


RESIDUAL_HEADER = ("q0", "d", "epsilon", "psi2", "prediction", "residual")


def residual_table(model: SpectralModel, epsilons, b0, b1, b2) -> list[ResidualRow]:
    rows = []
    for eps in epsilons:
        p = psi2(model, eps, b0, b1, b2)
        pred = local_index_prediction(model.q0, eps, b0, b1, b2)
        rows.append(ResidualRow(model.q0, model.d, eps, p, pred, p - pred))
    return rows


def residual_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESIDUAL_HEADER)
    for r in rows:
        w.writerow([str(r.q0), r.d, format_float(r.epsilon), format_float(r.psi2),
                    format_float(r.prediction), format_float(r.residual)])
    return buf.getvalue()
