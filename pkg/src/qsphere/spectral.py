"""q-weighted heat traces of the Casimir on the spinor space.

With rho = k^2 the weighted trace is Tr(f(C) rho) = sum_{n>=1} [2n] f([n]^2).
All weights and eigenvalues are computed exactly at the rational q0 and
rounded once; sums are accumulated with math.fsum in a fixed order, so every
value is reproducible bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

TAIL_RELATIVE = 1e-18
TAIL_EXPONENT = 50.0
MAX_TERMS = 2000


def qint_exact(n: int, q0: Fraction) -> Fraction:
    """[n] at q0, exactly."""
    q0 = Fraction(q0)
    return (q0 ** (-n) - q0 ** n) / (1 / q0 - q0)


@dataclass
class SpectralSeries:
    """Terms (weight [2n], eigenvalue [n]^2) of the weighted Casimir spectrum at q0."""

    q0: Fraction
    _weights: list = field(default_factory=list, repr=False)
    _eigs: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.q0 = Fraction(self.q0)
        if not 0 < self.q0 < 1:
            raise ValueError("q0 must lie in (0, 1)")

    def term(self, n: int) -> tuple[float, float]:
        if n < 1:
            raise ValueError("terms start at n = 1")
        while len(self._weights) < n:
            j = len(self._weights) + 1
            self._weights.append(float(qint_exact(2 * j, self.q0)))
            self._eigs.append(float(qint_exact(j, self.q0) ** 2))
        return self._weights[n - 1], self._eigs[n - 1]

    @property
    def q2(self) -> float:
        return float(self.q0 ** 2)

    def _sum(self, eps: float, fn, decay: float) -> float:
        """fsum of fn(weight, eig) until the terms are negligible.

        ``decay`` is the fraction of eps*eig that governs the exponential decay
        of the terms; stopping requires eps*decay*eig > TAIL_EXPONENT and the
        term below TAIL_RELATIVE times the running sum.
        """
        terms = []
        running = 0.0
        for n in range(1, MAX_TERMS + 1):
            w, lam = self.term(n)
            t = fn(w, lam)
            terms.append(t)
            running += abs(t)
            if eps * decay * lam > TAIL_EXPONENT and abs(t) < TAIL_RELATIVE * running:
                return math.fsum(terms)
        raise ArithmeticError("spectral series did not converge within the term budget")

    def heat_trace(self, eps: float) -> float:
        """Tr(exp(-eps C) rho)."""
        _check_eps(eps)
        return self._sum(eps, lambda w, lam: w * math.exp(-eps * lam), 1.0)

    def heat_difference(self, eps: float) -> float:
        """Tr(exp(-eps C) rho) - q^2 Tr(exp(-eps q^2 C) rho), summed termwise."""
        _check_eps(eps)
        q2 = self.q2
        return self._sum(eps, lambda w, lam: w * (math.exp(-eps * lam) - q2 * math.exp(-eps * q2 * lam)), q2)

    def heat_integral(self, eps: float) -> float:
        """eps * integral_{q^2}^1 Tr(exp(-eps t C) rho) dt, integrated exactly term by term."""
        _check_eps(eps)
        q2 = self.q2

        def fn(w, lam):
            return w * math.exp(-eps * q2 * lam) * -math.expm1(-eps * (1 - q2) * lam) / lam

        return self._sum(eps, fn, q2)

    def heat_moment(self, eps: float) -> float:
        """J(eps) = integral_{q^2}^1 t Tr(exp(-eps t C) rho) dt."""
        _check_eps(eps)
        q2 = self.q2
        return self._sum(eps, lambda w, lam: w * _t_exp_integral(eps * lam, q2), q2)


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError("eps must be positive")


def _t_exp_integral(a: float, q2: float) -> float:
    """integral_{q2}^1 t exp(-a t) dt."""
    if a < 0.5:
        total = 0.0
        term = 1.0
        for k in range(60):
            total += term * (1 - q2 ** (k + 2)) / (k + 2)
            term *= -a / (k + 1)
            if abs(term) < 1e-20:
                break
        return total
    return (q2 / a + 1 / a ** 2) * math.exp(-a * q2) - (1 / a + 1 / a ** 2) * math.exp(-a)


_SERIES_CACHE: dict = {}


def series(q0) -> SpectralSeries:
    q0 = Fraction(q0)
    s = _SERIES_CACHE.get(q0)
    if s is None:
        s = _SERIES_CACHE[q0] = SpectralSeries(q0)
    return s


def qtrace_heat(eps: float, q0=Fraction(1, 2)) -> float:
    return series(q0).heat_trace(eps)


def heat_moment(eps: float, q0=Fraction(1, 2)) -> float:
    return series(q0).heat_moment(eps)


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class ScanRow:
    q0: Fraction
    c: Fraction
    m: int
    epsilon: float
    eps_trace: float
    diff_ii: float
    integral_iii: float


SCAN_HEADER = ("q0", "c", "m", "epsilon", "eps_trace", "diff_ii", "integral_iii")


def grid_epsilon(q0: Fraction, c: Fraction, m: int) -> float:
    """eps = c q0^{2m}, rounded once from the exact rational."""
    return float(Fraction(c) * Fraction(q0) ** (2 * m))


def scan_row(q0, c, m: int) -> ScanRow:
    q0, c = Fraction(q0), Fraction(c)
    s = series(q0)
    eps = grid_epsilon(q0, c, m)
    return ScanRow(q0, c, m, eps, eps * s.heat_trace(eps), eps * s.heat_difference(eps), s.heat_integral(eps))


def heat_limit_scan(q0, ms: Iterable[int]) -> list[ScanRow]:
    """Rows at eps = q0^{2m}: eps Tr, eps (Tr - q^2 Tr(q^2 .)), eps integral of Tr."""
    return [scan_row(q0, 1, m) for m in ms]


def oscillation_scan(q0, cs: Sequence, ms: Iterable[int]) -> list[ScanRow]:
    q0 = Fraction(q0)
    ms = list(ms)
    rows = []
    for c in cs:
        c = Fraction(c)
        if not q0 ** 2 < c <= 1:
            raise ValueError(f"c={c} must lie in (q0^2, 1]")
        rows.extend(scan_row(q0, c, m) for m in ms)
    return rows


def cauchy_residual(rows: Sequence[ScanRow], c, m: int) -> float:
    """|value(c, m) - value(c, m-1)| for the eps*Tr column."""
    by = {(r.c, r.m): r.eps_trace for r in rows}
    c = Fraction(c)
    return abs(by[(c, m)] - by[(c, m - 1)])


def format_float(x: float) -> str:
    return format(x, ".17g")


def rows_to_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in rows:
        w.writerow([str(r.q0), str(r.c), r.m, format_float(r.epsilon), format_float(r.eps_trace),
                    format_float(r.diff_ii), format_float(r.integral_iii)])
    return buf.getvalue()
