"""CSV tables behind acceptance criteria 5 to 8.

Run as ``python3 acceptance_tables.py N`` to print the table for criterion N;
the determinism check compares these outputs across fresh processes.
"""

from __future__ import annotations

import csv
import io
import sys
from fractions import Fraction

from qsphere.exprparse import parse_element
from qsphere.jlo import build_model, psi0, residual_csv, residual_table
from qsphere.spectral import format_float, heat_limit_scan, oscillation_scan, rows_to_csv

Q0 = Fraction(1, 2)
LIMIT_MS = range(4, 41)
OSC_CS = (Fraction(1), Q0)
OSC_MS = range(4, 21)
PSI0_ELEMENTS = (
    "1",
    "g* * g",
    "(g* * g)^2",
    "1 + a * g*",
    "g* * g - 2 * a* * g",
    "3 - q * g* * g + (g* * g)^3",
    "a * g* * a* * g",
    "a* * g * a * g*",
    "(g* * g)^5 - q^-2",
    "2 + a^2 * g*^2 + a*^2 * g^2",
)
PSI0_EPS = (2.0 ** -2, 2.0 ** -6, 2.0 ** -10)
TRIPLE = ("1", "g* * g", "g* * g")
RESIDUAL_EPS = [2.0 ** -e for e in (2, 4, 6, 8, 10)]
REFINE_EPS = 2.0 ** -6
REFINE_DS = (10, 12, 14)


def limit_rows():
    return heat_limit_scan(Q0, LIMIT_MS)


def oscillation_rows():
    return oscillation_scan(Q0, OSC_CS, OSC_MS)


def psi0_rows(d: int = 12):
    model = build_model(Q0, d)
    rows = []
    for src in PSI0_ELEMENTS:
        b = parse_element(src)
        for eps in PSI0_EPS:
            rows.append((src, eps, psi0(model, eps, b), psi0(model, eps, b, chiral=False)))
    return rows


def psi0_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("element", "epsilon", "psi0", "trace_without_grading"))
    for src, eps, v, free in rows:
        w.writerow((src, format_float(eps), format_float(v), format_float(free)))
    return buf.getvalue()


def residual_rows(d: int = 12):
    b = [parse_element(s) for s in TRIPLE]
    return residual_table(build_model(Q0, d), RESIDUAL_EPS, *b)


def refinement_rows():
    b = [parse_element(s) for s in TRIPLE]
    return [residual_table(build_model(Q0, d), [REFINE_EPS], *b)[0] for d in REFINE_DS]


def table(criterion: int) -> str:
    if criterion == 5:
        return rows_to_csv(limit_rows())
    if criterion == 6:
        return rows_to_csv(oscillation_rows())
    if criterion == 7:
        return psi0_csv(psi0_rows())
    if criterion == 8:
        return residual_csv(residual_rows()) + residual_csv(refinement_rows())
    raise ValueError(f"no table for criterion {criterion}")


if __name__ == "__main__":
    sys.stdout.write(table(int(sys.argv[1])))
