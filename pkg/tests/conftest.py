from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from qsphere.qscalar import RatFunc

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def laurent(draw, max_terms: int = 4, half: bool = False):
    step = Fraction(1, 2) if half else 1
    exps = draw(st.lists(st.integers(-4, 4), min_size=0, max_size=max_terms, unique=True))
    return RatFunc.laurent({e * step: draw(small_fractions) for e in exps})


@st.composite
def ratfuncs(draw, half: bool = False):
    num = draw(laurent(half=half))
    den = draw(laurent(half=half))
    if den.is_zero():
        den = RatFunc(1)
    return num / den


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, passed: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
