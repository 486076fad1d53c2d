from __future__ import annotations

import random

import pytest

from qsphere.exprparse import ParseError, parse_element, parse_scalar, print_element
from qsphere.ncalg import ALPHA, ALPHA_STAR, GAMMA, GAMMA_STAR, random_element
from qsphere.qscalar import Q, SQRT_Q, qint


def test_basic_parse():
    assert parse_element("a * a*") == ALPHA * ALPHA_STAR
    assert parse_element("g* * g") == GAMMA_STAR * GAMMA
    assert parse_element("a* * g") == ALPHA_STAR * GAMMA
    assert parse_element("a^-2") == ALPHA_STAR ** 2
    assert parse_element("-q^(1/2) * g") == GAMMA.scale(-SQRT_Q)
    assert parse_element("(g + g*)/2") == (GAMMA + GAMMA_STAR).scale(Q ** 0 / 2)


def test_printer_output():
    assert print_element(parse_element("a * (a*)")) == "1 - q^2 * g* * g"
    assert str(parse_scalar("q + q^-1")) == str(qint(2))


def test_round_trip_random_elements():
    rng = random.Random(11)
    for _ in range(200):
        x = random_element(rng, max_degree=4, n_terms=3)
        assert parse_element(print_element(x)) == x


@pytest.mark.parametrize("src", ["a +", "a ** g", "(a", "a^(1/2)", "x", "a / g", "a^-g", "", "a*g"])
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_element(src)


def test_error_offset():
    with pytest.raises(ParseError) as info:
        parse_element("a + + b")
    assert info.value.offset >= 4
