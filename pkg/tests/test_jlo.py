from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from qsphere.calculus import GradingError
from qsphere.exprparse import parse_element
from qsphere.jlo import (
    build_model,
    commutator_blocks,
    exp_divdiff2,
    exp_divdiff3,
    local_index_prediction,
    multiplication_blocks,
    psi0,
    psi0_scale,
    psi2,
    residual_csv,
    residual_table,
)
from qsphere.ncalg import GAMMA
from qsphere.spectral import qint_exact


def _divdiff_oracle(a, b, c):
    m = np.array([[a, 1.0, 0.0], [0.0, b, 1.0], [0.0, 0.0, c]])
    return expm(m)[0, 2]


@pytest.mark.parametrize("pts", [(0.0, 0.0, 0.0), (-1.0, -1.0 + 1e-9, -0.5), (-3.0, -0.2, -0.1),
                                 (-40.0, -2.0, -1.5), (-0.3, -0.30001, -0.7), (2.0, -5.0, 0.5)])
def test_divided_difference_matches_expm(pts):
    assert exp_divdiff3(*pts) == pytest.approx(_divdiff_oracle(*pts), rel=1e-12)
    assert exp_divdiff3(*pts) == exp_divdiff3(*reversed(pts))


def test_first_divided_difference():
    assert exp_divdiff2(0.0, 0.0) == 1.0
    assert exp_divdiff2(-1.0, -3.0) == pytest.approx((math.exp(-1) - math.exp(-3)) / 2, rel=1e-15)
    assert exp_divdiff2(1e-12, 0.0) == pytest.approx(1.0, rel=1e-11)


@pytest.fixture(scope="module")
def small():
    return build_model(Fraction(1, 2), 6)


def test_halves_have_equal_size(small):
    assert small.plus.size == small.minus.size
    assert small.dim == 2 * small.plus.size


def test_d_squared_is_casimir(small):
    d = small.op_d()
    d2 = d @ d
    assert np.allclose(d2, np.diag(small.eigenvalues()), atol=1e-12 * d2.max())
    levels = small.plus.levels + small.minus.levels
    expected = [float(qint_exact(n, small.q0) ** 2) for n in levels]
    assert np.allclose(small.eigenvalues(), expected, rtol=1e-15)


def test_commutator_blocks_match_matrix_commutator(small):
    b = parse_element("g* * g")
    mp, mm = multiplication_blocks(small, b)
    n = small.plus.size
    mb = np.zeros((small.dim, small.dim))
    mb[:n, :n], mb[n:, n:] = mp, mm
    d = small.op_d()
    comm = d @ mb - mb @ d
    up, down = commutator_blocks(small, b)
    assert np.allclose(comm[:n, n:], up, atol=1e-12)
    assert np.allclose(comm[n:, :n], down, atol=1e-12)


def test_psi2_vanishes_with_constant_slot(small):
    one = parse_element("1")
    b = parse_element("g* * g")
    assert psi2(small, 0.1, b, one, b) == 0.0
    assert psi2(small, 0.1, b, b, one) == 0.0


def test_psi0_vanishes_relative_to_scale(small):
    for src in ("1", "g* * g", "a * g*"):
        b = parse_element(src)
        assert abs(psi0(small, 0.05, b)) <= 1e-9 * psi0_scale(small, 0.05, b)
    assert psi0(small, 0.05, parse_element("1"), chiral=False) > 0


def test_arguments_must_lie_in_sphere(small):
    with pytest.raises(GradingError):
        psi0(small, 0.1, GAMMA)


def test_invalid_model_parameters():
    with pytest.raises(ValueError):
        build_model(Fraction(3, 2), 6)
    with pytest.raises(ValueError):
        build_model(Fraction(1, 2), 1)


def test_residual_table_rows(small):
    b = parse_element("g* * g")
    one = parse_element("1")
    rows = residual_table(small, [0.25], one, b, b)
    assert rows[0].residual == rows[0].psi2 - rows[0].prediction
    assert rows[0].prediction == local_index_prediction(small.q0, 0.25, one, b, b)
    assert residual_csv(rows).startswith("q0,d,epsilon,psi2,prediction,residual\n")


def test_residual_decreases_once_cutoff_resolves_the_heat_kernel():
    # at eps = 2^-10 the heat kernel still weights spin levels above those kept at d = 12;
    # with d = 16 the residual falls roughly fourfold per step of eps/4
    one, b = parse_element("1"), parse_element("g* * g")
    model = build_model(Fraction(1, 2), 16)
    mags = [abs(r.residual) for r in residual_table(model, [2.0 ** -e for e in (2, 4, 6, 8, 10)], one, b, b)]
    assert all(a > b for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 0.1 * mags[0]
    assert all(3.5 < a / b < 4.5 for a, b in zip(mags, mags[1:]))
