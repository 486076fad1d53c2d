from __future__ import annotations

import json

import pytest

from qsphere.bott import bott, equivariance_defect, gram_coefficients, is_zero_matrix, mat_mul
from qsphere.exprparse import parse_element
from qsphere.ncalg import ONE_ELEMENT, ZERO_ELEMENT, in_sphere, star
from qsphere.qscalar import ONE, Q


def test_bott_one_is_selfadjoint_projection():
    p = bott(1)
    assert p.dim == 2
    assert p.is_idempotent() and p.is_selfadjoint()
    assert p[1, 1] == ONE_ELEMENT - parse_element("g* * g")
    assert p[0, 0] == parse_element("q^2 * g* * g")


@pytest.mark.parametrize("n", [1, 2, 3, -1, -2])
def test_idempotent_over_sphere(n):
    p = bott(n)
    assert p.is_idempotent()
    assert p.adjoint_relation_holds()
    assert all(in_sphere(x) or x.is_zero() for r in p.entries for x in r)


@pytest.mark.parametrize("n", [1, 2, -1])
def test_row_normalization(n):
    p = bott(n)
    g = gram_coefficients(n)
    total = ZERO_ELEMENT
    for gj, w in zip(g, p.row):
        total = total + (w * star(w)).scale(gj if p.gram else ONE)
    assert total == ONE_ELEMENT


def test_gram_coefficients_for_charge_two():
    assert gram_coefficients(2) == [Q ** 4, ONE + Q * Q, ONE]


@pytest.mark.parametrize("n", [1, 2, -2])
@pytest.mark.parametrize("gen", ["e", "f", "k"])
def test_equivariance(n, gen):
    assert is_zero_matrix(equivariance_defect(bott(n), gen))


def test_trace_is_rank_one_at_classical_limit():
    # the trace of p evaluated through the Haar state has integral 1
    from qsphere.calculus import haar

    for n in (1, 2, 3):
        p = bott(n)
        tr = sum((haar(p[i, i]) for i in range(p.dim)), start=ONE * 0)
        assert tr.eval_float(0.999) == pytest.approx(1.0, abs=1e-2)


def test_bounds_and_json():
    with pytest.raises(ValueError):
        bott(0)
    with pytest.raises(ValueError):
        bott(5)
    data = json.loads(bott(2).to_json())
    assert data["dim"] == 3 and data["gram"] == ["q^4", "1 + q^2", "1"]
    assert mat_mul(bott(1).entries, bott(1).entries) == bott(1).entries
