"""Exact identity suites behind ``qsphere verify`` and the acceptance tests.

Each suite returns a list of CheckResult; a failed check carries the first
counterexample found in ``detail``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .bott import bott, equivariance_defect, is_zero_matrix, row_representation
from .calculus import Form, dee, haar, haar_product, integrate, sigma_form, tau_via_forms, wedge
from .cohomology import (
    find_difference,
    find_nonzero,
    pair_bB,
    pair_cyclic,
    random_cochain,
    tau,
    tau1,
    tau2,
    tau_prime,
    tau_tilde,
    twisted_B,
    twisted_B0,
    twisted_b,
    twisted_lambda,
)
from .ncalg import (
    ALPHA,
    ALPHA_STAR,
    GAMMA,
    GAMMA_STAR,
    GENERATORS,
    ONE_ELEMENT,
    GenAction,
    NCElement,
    act,
    d_e,
    d_f,
    d_k_power,
    monomials_up_to,
    normal_form,
    random_element,
    random_word,
    right_k_power,
    sphere_basis,
    star,
    twist,
)
from .qscalar import ONE, Q, Q_INV, RatFunc, qint


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        if self.passed:
            extra = f"  [{self.detail}]" if self.detail else ""
            return f"ok   {self.name}{extra}"
        return f"FAIL {self.name}  counterexample: {self.detail}"


def _check(name: str, items: Iterable, predicate: Callable) -> CheckResult:
    for item in items:
        if not predicate(item):
            return CheckResult(name, False, repr(item))
    return CheckResult(name, True)


def _mono(m) -> NCElement:
    return NCElement({m: ONE})


# ---------------------------------------------------------------------------
# algebra


def _all_parenthesizations_agree(word: str) -> bool:
    """Every bracketing of the letter product gives the same element.

    Interval DP: the value on each interval is unique iff every split of it
    multiplies the (unique) values of its two halves to the same result.
    """
    n = len(word)
    if n == 0:
        return True
    value = {(i, i + 1): GENERATORS[word[i]] for i in range(n)}
    for length in range(2, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            results = {value[(i, k)] * value[(k, j)] for k in range(i + 1, j)}
            if len(results) != 1:
                return False
            value[(i, j)] = results.pop()
    return True


def verify_algebra(seed: int = 0, n_words: int = 200, max_len: int = 8) -> list[CheckResult]:
    rng = random.Random(seed)
    q2 = Q * Q
    out = [
        CheckResult("a* a + g* g = 1", normal_form("Aa") + normal_form("Gg") == ONE_ELEMENT),
        CheckResult("a a* + q^2 g* g = 1", normal_form("aA") + normal_form("Gg").scale(q2) == ONE_ELEMENT),
        CheckResult("g* g = g g*", normal_form("Gg") == normal_form("gG")),
        CheckResult("a g = q g a", normal_form("ag") == normal_form("ga").scale(Q)),
        CheckResult("a g* = q g* a", normal_form("aG") == normal_form("Ga").scale(Q)),
        CheckResult("fast product agrees with rewriting on the relations",
                    ALPHA * ALPHA_STAR == normal_form("aA") and ALPHA_STAR * ALPHA == normal_form("Aa")
                    and GAMMA * ALPHA == normal_form("ga") and GAMMA_STAR * ALPHA_STAR == normal_form("GA")),
    ]
    words = [random_word(rng, max_len) for _ in range(n_words)]

    def confluent(w: str) -> bool:
        ref = normal_form(w)
        for trial in range(3):
            if normal_form(w, rng=random.Random(hash((seed, w, trial)))) != ref:
                return False
        fast = ONE_ELEMENT
        for x in w:
            fast = fast * GENERATORS[x]
        return fast == ref and _all_parenthesizations_agree(w)

    out.append(_check(f"confluence on {n_words} random words", words, confluent))

    def star_laws(w: str) -> bool:
        x = normal_form(w)
        reversed_star = normal_form("".join({"a": "A", "A": "a", "g": "G", "G": "g"}[c] for c in reversed(w)))
        return star(x) == reversed_star and star(star(x)) == x

    out.append(_check("star is the anti-multiplicative involution", words, star_laws))
    pairs = [(random_element(rng, 3, 3), random_element(rng, 3, 3)) for _ in range(30)]
    out.append(_check("star(xy) = star(y) star(x)", pairs, lambda p: star(p[0] * p[1]) == star(p[1]) * star(p[0])))
    out.append(_check("associativity of the fast product", [
        (random_element(rng, 3, 2), random_element(rng, 3, 2), random_element(rng, 3, 2)) for _ in range(20)
    ], lambda t: (t[0] * t[1]) * t[2] == t[0] * (t[1] * t[2])))
    out.extend(_action_checks(rng))
    return out


def _action_checks(rng: random.Random) -> list[CheckResult]:
    elems = [random_element(rng, 5, 3) for _ in range(12)]
    out = []

    def left(g):
        return lambda x: act(GenAction(g, "left"), x)

    def right(g):
        return lambda x: act(GenAction(g, "right"), x)

    e, f, k, ki = left("e"), left("f"), left("k"), left("kinv")
    re, rf, rk, rki = right("e"), right("f"), right("k"), right("kinv")
    qq = Q - Q_INV
    out.append(_check("left: k e = q e k", elems, lambda x: k(e(x)) == e(k(x)).scale(Q)))
    out.append(_check("left: k f = q^-1 f k", elems, lambda x: k(f(x)) == f(k(x)).scale(Q_INV)))
    out.append(_check("left: ef - fe = (k^2 - k^-2)/(q - q^-1)", elems,
                      lambda x: e(f(x)) - f(e(x)) == (k(k(x)) - ki(ki(x))).scale(ONE / qq)))
    # a right action reverses composition order: (x <| f) <| e = x <| fe
    out.append(_check("right: ef - fe = (k^2 - k^-2)/(q - q^-1)", elems,
                      lambda x: rf(re(x)) - re(rf(x)) == (rk(rk(x)) - rki(rki(x))).scale(ONE / qq)))
    out.append(_check("k k^-1 = 1 on both sides", elems, lambda x: k(ki(x)) == x and rk(rki(x)) == x))
    out.append(_check("left and right actions commute", [(x, a, b) for x in elems[:6] for a in "efk" for b in "efk"],
                      lambda t: left(t[1])(right(t[2])(t[0])) == right(t[2])(left(t[1])(t[0]))))
    pairs = [(random_element(rng, 3, 2), random_element(rng, 3, 2)) for _ in range(15)]
    out.append(_check("d_e is a twisted derivation", pairs,
                      lambda p: e(p[0] * p[1]) == e(p[0]) * ki(p[1]) + k(p[0]) * e(p[1])))
    out.append(_check("grading: d_e raises and d_f lowers the weight by 2", elems,
                      lambda x: all(m.lw == n + 2 for n, part in _grade(x).items() for m in e(part).monomials())
                      and all(m.lw == n - 2 for n, part in _grade(x).items() for m in f(part).monomials())))
    out.append(_check("twist is an automorphism", pairs,
                      lambda p: twist(p[0] * p[1]) == twist(p[0]) * twist(p[1]) and twist(twist(p[0]), -1) == p[0]))
    return out


def _grade(x):
    from .ncalg import grade

    return grade(x)


# ---------------------------------------------------------------------------
# calculus


def _forms_basis(max_degree: int) -> list[Form]:
    forms = [Form(c00=_mono(m)) for m in sphere_basis(max_degree)]
    forms += [Form(c01=_mono(m)) for m in monomials_up_to(max_degree, -2)]
    forms += [Form(c10=_mono(m)) for m in monomials_up_to(max_degree, 2)]
    forms += [Form(c11=_mono(m)) for m in sphere_basis(max_degree)]
    return forms


def verify_calculus(max_degree: int = 5, stokes_degree: int = 6) -> list[CheckResult]:
    out = []
    monos = monomials_up_to(max_degree)
    # invariance of the Haar state guards the closed-form vanishing rule
    out.append(_check("Haar invariance h(d_w a) = eps(w) h(a) and h(a <| w) = eps(w) h(a)", monos, lambda m: all(
        haar(act(GenAction(g, side), _mono(m))) == (haar(_mono(m)) if g in ("k", "kinv") else 0)
        for g in ("e", "f", "k", "kinv") for side in ("left", "right"))))

    def modular(p) -> bool:
        a1, a2 = _mono(p[0]), _mono(p[1])
        rhs = haar_product(a2, d_k_power(right_k_power(a1, -2), -2))
        return haar_product(a1, a2) == rhs

    out.append(_check(f"modular property h(a1 a2) = h(a2 d_k^-2(a1 <| k^-2)), degree <= {max_degree}",
                      itertools.product(monos, repeat=2), modular))
    sb = sphere_basis(stokes_degree)
    out.append(_check(f"q^2 h(d_e b1 d_f b2) = h(d_f b1 d_e b2), degree <= {stokes_degree}",
                      itertools.product(sb, repeat=2),
                      lambda p: (Q * Q) * haar(d_e(_mono(p[0])) * d_f(_mono(p[1])))
                      == haar(d_f(_mono(p[0])) * d_e(_mono(p[1])))))
    a_plus = monomials_up_to(max_degree, 2)
    a_minus = monomials_up_to(max_degree, -2)
    out.append(_check("twisted trace q^2 h(a a') = h(sigma(a') a)", itertools.product(a_plus, a_minus),
                      lambda p: haar_product(_mono(p[0]), _mono(p[1])) * (Q * Q)
                      == haar_product(twist(_mono(p[1])), _mono(p[0]))))
    forms = _forms_basis(max_degree)
    low = [x for x in forms if x.degree() in (0, 1)]
    out.append(_check("d^2 = 0", low, lambda x: dee(dee(x)).is_zero()))
    out.append(_check("closed integral: integral of d(omega) = 0", [x for x in forms if x.degree() == 1],
                      lambda x: integrate(dee(x)).is_zero()))
    small = _forms_basis(min(max_degree, 3))
    out.append(_check("graded Leibniz d(x^y) = dx^y + (-1)^#x x^dy",
                      [(x, y) for x in small for y in small if x.degree() in (0, 1) and y.degree() in (0, 1)],
                      lambda p: dee(wedge(p[0], p[1]))
                      == wedge(dee(p[0]), p[1]) + wedge(p[0], dee(p[1])).scale(-1 if p[0].degree() == 1 else 1)))
    out.append(_check("wedge is associative", [(x, y, z) for x in small[:12] for y in small[:12] for z in small[:12]],
                      lambda t: wedge(t[0], wedge(t[1], t[2])) == wedge(wedge(t[0], t[1]), t[2])))
    complementary = [(x, y) for x in forms for y in forms if x.degree() + y.degree() == 2]
    out.append(_check("twisted graded trace of the integral", complementary,
                      lambda p: integrate(wedge(p[0], p[1]))
                      == integrate(wedge(sigma_form(p[1]), p[0])) * (-1 if p[0].degree() == 1 else 1)))
    return out


# ---------------------------------------------------------------------------
# cohomology


def verify_cocycles(max_degree: int = 4, seed: int = 0) -> list[CheckResult]:
    basis = sphere_basis(max_degree)
    out = []
    t, t1, t2, tt = tau(), tau1(), tau2(), tau_tilde()
    q2 = Q * Q

    def none_or(name: str, witness) -> CheckResult:
        return CheckResult(name, witness is None, "" if witness is None else repr(witness))

    out.append(none_or("b tau = 0", find_nonzero(twisted_b(t), basis)))
    out.append(none_or("lambda tau = tau", find_difference(twisted_lambda(t), t, basis)))
    out.append(none_or("b tauTilde = q^2 tau1 + tau2", find_difference(twisted_b(tt), t1.scale(q2) + t2, basis)))
    out.append(none_or("B0 tauTilde = 0", find_nonzero(twisted_B0(tt), basis)))
    out.append(none_or("B tauTilde = 0", find_nonzero(twisted_B(tt), basis)))
    small = sphere_basis(min(max_degree, 2))
    w = find_difference(twisted_lambda(t1), t1, small)
    out.append(CheckResult("tau1 is not cyclic (witness exists)", w is not None, f"witness {w}" if w else ""))
    out.append(none_or("tau agrees with the form calculus", find_difference(
        t, _from_forms(), sphere_basis(min(max_degree, 4)))))
    f1, f2, f3 = random_cochain(1, seed), random_cochain(2, seed + 1), random_cochain(3, seed + 2)
    out.append(none_or("b b = 0 on a random 2-cochain", find_nonzero(twisted_b(twisted_b(f2)), basis)))
    out.append(none_or("B B = 0 on a random 3-cochain", find_nonzero(twisted_B(twisted_B(f3)), basis)))
    out.append(none_or("b B + B b = 0 on a random 2-cochain",
                       find_nonzero(twisted_b(twisted_B(f2)) + twisted_B(twisted_b(f2)), basis)))
    out.append(none_or("b B + B b = 0 on a random 1-cochain",
                       find_nonzero(twisted_b(twisted_B(f1)) + twisted_B(twisted_b(f1)), basis)))
    lam3 = twisted_lambda(twisted_lambda(twisted_lambda(f2)))
    out.append(none_or("lambda^3 = id on an invariant 2-cochain", find_difference(lam3, f2, basis)))
    return out


def _from_forms():
    from .cohomology import Cochain

    return Cochain(2, lambda ms: tau_via_forms(*(_mono(m) for m in ms)), "tauForms")


# ---------------------------------------------------------------------------
# projections and index pairings


def verify_bott(ns: Iterable[int] = (1, 2, 3, -1)) -> list[CheckResult]:
    out = []
    for n in ns:
        p = bott(n)
        out.append(CheckResult(f"bott({n}) is idempotent", p.is_idempotent()))
        out.append(CheckResult(f"bott({n}) is self-adjoint up to its Gram weights", p.adjoint_relation_holds()))
        for g in ("k", "e", "f"):
            out.append(CheckResult(f"bott({n}) is invariant under {g}", is_zero_matrix(equivariance_defect(p, g))))
        rk = row_representation(p, "k")
        diag_ok = all(rk[i][j] == (RatFunc.q_power(p.weights[i]) if i == j else 0)
                      for i in range(p.dim) for j in range(p.dim))
        out.append(CheckResult(f"bott({n}) weights match the k-representation", diag_ok))
        v = pair_cyclic(tau().scale(-Q_INV), p)
        out.append(CheckResult(f"<-q^-1 tau, bott({n})> = -[{n}]", v == -qint(n), str(v)))
        v = pair_bB({0: tau_prime()}, p)
        out.append(CheckResult(f"<tauPrime, bott({n})> = {-n}", v == -n, str(v)))
        v = pair_bB({2: tau1().scale(Q * Q) + tau2()}, p)
        out.append(CheckResult(f"<q^2 tau1 + tau2, bott({n})> = 0", v.is_zero(), str(v)))
    return out


SUITES = {
    "algebra": verify_algebra,
    "calculus": verify_calculus,
    "cocycles": verify_cocycles,
    "bott": verify_bott,
}
