"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Every test records a single PASS/FAIL line, shown in the terminal summary.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
from pathlib import Path

import acceptance_tables as tables
from conftest import record
from qsphere.bott import bott
from qsphere.cohomology import pair_bB, pair_cyclic, tau, tau1, tau2, tau_prime
from qsphere.qscalar import Q, Q_INV, qint
from qsphere.spectral import cauchy_residual
from qsphere.verify import verify_algebra, verify_calculus, verify_cocycles

HERE = Path(__file__).parent


def _suite(criterion: int, fn, limit: float, **kwargs) -> None:
    start = time.perf_counter()
    results = fn(**kwargs)
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    ok = not failed and elapsed < limit
    detail = f"{len(results)} checks, {elapsed:.2f} s (limit {limit:g} s)"
    if failed:
        detail += f"; first failure: {failed[0].line()}"
    record(criterion, ok, detail)
    assert not failed, [r.line() for r in failed]
    assert elapsed < limit


def test_criterion_1_relations_involution_confluence():
    _suite(1, verify_algebra, 5.0, seed=0, n_words=200, max_len=8)


def test_criterion_2_haar_and_calculus():
    _suite(2, verify_calculus, 60.0, max_degree=5, stokes_degree=6)


def test_criterion_3_cohomology():
    _suite(3, verify_cocycles, 60.0, max_degree=4)


def test_criterion_4_index_values():
    start = time.perf_counter()
    vol = tau().scale(-Q_INV)
    checks = []
    for n in (1, 2, 3, -1):
        checks.append((f"<-q^-1 tau, p_{n}>", pair_cyclic(vol, bott(n)), -qint(n)))
    checks.append(("<tauPrime, p_1>", pair_bB([tau_prime()], bott(1)), -1))
    for n in (1, 2, 3, -1):
        checks.append((f"<q^2 tau1 + tau2, p_{n}>", pair_bB({2: tau1().scale(Q * Q) + tau2()}, bott(n)), 0))
    elapsed = time.perf_counter() - start
    bad = [(name, str(got), str(want)) for name, got, want in checks if got != want]
    ok = not bad and elapsed < 120
    record(4, ok, f"{len(checks)} exact pairings, {elapsed:.2f} s" + (f"; mismatches {bad}" if bad else ""))
    assert not bad
    assert elapsed < 120


def test_criterion_5_small_eps_limits():
    start = time.perf_counter()
    rows = tables.limit_rows()
    elapsed = time.perf_counter() - start
    by_m = {r.m: r for r in rows}
    window = range(8, 15)
    err3 = [abs(by_m[m].integral_iii - 1.5) for m in window]
    err2 = [abs(by_m[m].diff_ii) for m in window]
    col1 = [r.eps_trace for r in rows]
    dec3 = all(a > b for a, b in zip(err3, err3[1:]))
    dec2 = all(a > b for a, b in zip(err2, err2[1:]))
    bounded = all(math.isfinite(x) and x > 0 for x in col1)
    ok = err3[-1] < 1e-2 and dec3 and err2[-1] < 1e-2 and dec2 and bounded and elapsed < 5
    record(5, ok, f"|(iii)-1.5| at m=14: {err3[-1]:.3e}, |(ii)| at m=14: {err2[-1]:.3e}, "
                  f"(i) over m=4..40 in [{min(col1):.15f}, {max(col1):.15f}], {elapsed:.2f} s")
    assert err3[-1] < 1e-2 and dec3
    assert err2[-1] < 1e-2 and dec2
    assert bounded
    assert elapsed < 5


def test_criterion_6_oscillation():
    start = time.perf_counter()
    rows = tables.oscillation_rows()
    elapsed = time.perf_counter() - start
    last = max(tables.OSC_MS)
    res = {c: cauchy_residual(rows, c, last) for c in tables.OSC_CS}
    lim = {r.c: r.eps_trace for r in rows if r.m == last}
    gap = abs(lim[tables.OSC_CS[0]] - lim[tables.OSC_CS[1]])
    worst = max(res.values())
    ok = worst < 1e-10 and gap > 1e3 * worst and elapsed < 5
    record(6, ok, f"Cauchy residuals at m={last}: " + ", ".join(f"c={c}: {v:.2e}" for c, v in res.items())
           + f"; |limit(1) - limit(q0)| = {gap:.6f} ({gap / worst:.1e} x residual), {elapsed:.2f} s")
    assert worst < 1e-10
    assert gap > 1e3 * worst
    assert elapsed < 5


def test_criterion_7_psi0_vanishes():
    start = time.perf_counter()
    rows = tables.psi0_rows(d=12)
    elapsed = time.perf_counter() - start
    worst = 0.0
    bad = []
    for src, eps, v, free in rows:
        if abs(v) > 1e-9 * abs(free):
            bad.append((src, eps, v, free))
        if free:
            worst = max(worst, abs(v) / abs(free))
    ok = not bad and elapsed < 60
    record(7, ok, f"{len(tables.PSI0_ELEMENTS)} elements x {len(tables.PSI0_EPS)} eps, "
                  f"max |psi0|/|trace without grading| = {worst:.2e}, {elapsed:.2f} s"
                  + (f"; violations {bad[:2]}" if bad else ""))
    assert not bad
    assert elapsed < 60


def test_criterion_8_local_index_residual():
    start = time.perf_counter()
    rows = tables.residual_rows(d=12)
    refine = tables.refinement_rows()
    elapsed = time.perf_counter() - start
    mags = [abs(r.residual) for r in rows]
    decreasing = all(a > b for a, b in zip(mags, mags[1:]))
    shrinks = mags[-1] < 0.1 * mags[0]
    p10, p12, p14 = (r.psi2 for r in refine)
    refines = abs(p14 - p12) < abs(p12 - p10)
    ok = decreasing and shrinks and refines and elapsed < 600
    record(8, ok, "|R| at eps=2^-2..2^-10 (d=12): " + ", ".join(f"{m:.3e}" for m in mags)
           + f"; decreasing={decreasing}, |R(2^-10)|<0.1|R(2^-2)|={shrinks}; "
           f"refinement |psi2(14)-psi2(12)|={abs(p14 - p12):.2e} < |psi2(12)-psi2(10)|={abs(p12 - p10):.2e}: "
           f"{refines}; {elapsed:.2f} s")
    assert decreasing, mags
    assert shrinks, mags
    assert refines
    assert elapsed < 600


def _fresh_table(criterion: int) -> bytes:
    res = subprocess.run([sys.executable, str(HERE / "acceptance_tables.py"), str(criterion)],
                         capture_output=True, check=True, cwd=HERE)
    return res.stdout


def test_criterion_9_determinism():
    mismatched = []
    for criterion in (5, 6, 7, 8):
        first = _fresh_table(criterion)
        second = _fresh_table(criterion)
        in_process = tables.table(criterion).encode()
        if not (first == second == in_process) or not first:
            mismatched.append(criterion)
    ok = not mismatched
    record(9, ok, "CSV tables of criteria 5-8 byte-identical across two fresh processes and in-process"
           + (f"; differing: {mismatched}" if mismatched else ""))
    assert not mismatched
