"""Acceptance criteria, one test each; every test records a pass/fail line.

The lines are echoed in the terminal summary under "acceptance criteria".
"""
from __future__ import annotations

import random
import time
from fractions import Fraction as F

import pytest

from kcert import tables
from kcert.fano35 import (
    STATED_ENDPOINTS,
    a2_counter_check,
    anticanonical_degree,
    certificate_value,
    fibre_integral,
    pu_volume,
)
from kcert.flagdelta import (
    FLAG_RULES,
    corollary_bound,
    f_certificate,
    root_a,
    root_b,
    s_curve,
    sample_grid,
    verify_formula_table,
)
from kcert.picard import KINDS, PointStratum, build_config, delta_reference
from kcert.zariski import (
    decompose,
    decomposition_violations,
    random_effective_class,
    volume_profile,
)

GRID = sample_grid(1, 2, 9)
PROPERTY_CLASSES = 200


def test_criterion_01_anticanonical_degree(acceptance):
    times = []
    for _ in range(5):
        t0 = time.perf_counter()
        value = anticanonical_degree()
        times.append(time.perf_counter() - t0)
    best = min(times)
    ok = value == 20 and best < 1e-3
    acceptance(1, ok, f"(-K_X)^3 = {value} in {best * 1e6:.0f} us")
    assert ok


def test_criterion_02_threefold_s_value(acceptance):
    fi = fibre_integral()
    ok = (
        fi.value == F(69, 80)
        and fi.low_integral == 14
        and fi.high_integral == F(13, 4)
        and fi.low(1) == fi.high(1) == pu_volume(1) == 8
    )
    acceptance(2, ok, f"S_X = {fi.value}, branch integrals {fi.low_integral} and {fi.high_integral}")
    assert ok


def test_criterion_03_a1_closed_forms(acceptance, a1):
    results = verify_formula_table(a1, samples=9)
    confirmed = sum(r.verdict == "confirmed" for r in results)
    sd = s_curve(a1, "E4", F(3, 2))
    ok = confirmed == len(results) >= 14 and all(len(r.samples) >= 9 for r in results) and sd == F(28, 33)
    acceptance(3, ok, f"{confirmed}/{len(results)} A1 closed forms confirmed, S_D(E4)(3/2) = {sd}")
    assert ok


def test_criterion_04_named_two_a1_forms(two_a1):
    results = {r.id: r for r in verify_formula_table(two_a1, samples=9)}
    assert results["2a1.sd.L24"].verdict == "confirmed"
    assert results["2a1.sw.L24.generic"].verdict == "confirmed"
    assert tables.evaluate(results["2a1.sd.L24"].formula, u=F(3, 2)) == s_curve(two_a1, "L24", F(3, 2))


@pytest.mark.xfail(
    strict=True,
    reason="two displayed S(W;P) forms for points on E4 disagree with exact integration",
)
def test_criterion_04_all_two_a1_forms(acceptance, two_a1):
    results = verify_formula_table(two_a1, samples=9)
    refuted = sorted(r.id for r in results if r.verdict != "confirmed")
    ok = not refuted
    detail = f"{len(results) - len(refuted)}/{len(results)} TwoA1 closed forms confirmed"
    if refuted:
        detail += f"; refuted: {', '.join(refuted)} (S_D(L24) and S(W;P) on L24 confirmed)"
    acceptance(4, ok, detail)
    assert ok


def test_criterion_05_a2(acceptance, a2):
    (result,) = [r for r in verify_formula_table(a2, samples=9) if r.id == "a2.sd.E4"]
    taus = {volume_profile(a2, u, "E4").tau for u in GRID}
    ok = result.verdict == "confirmed" and taus == {2}
    acceptance(5, ok, f"A2 S_D(E4) {result.verdict}, tau(E4) = {', '.join(map(str, sorted(taus)))} on the grid")
    assert ok


def test_criterion_06_root_certificates(acceptance):
    a, b = root_a(), root_b()
    ok = (
        a.check() and a.within(F(1355, 1000), F(1356, 1000))
        and b.check() and b.within(F(1261, 1000), F(1262, 1000))
    )
    acceptance(6, ok, f"a in [{a.lo}, {a.hi}], b in [{b.lo}, {b.hi}]")
    assert ok


def test_criterion_07_certificate_inequality(acceptance):
    _, _, value = certificate_value(*STATED_ENDPOINTS)
    ok = value <= F(99, 100) and 1 / value >= F(100, 99)
    acceptance(7, ok, f"value = {value} (~{float(value):.5f}) <= 99/100")
    assert ok


def test_criterion_08_a2_remark(acceptance):
    r = a2_counter_check()
    ok = (
        r.remark_term + F(3, 5) == F(83, 80) == r.remark_value
        and r.chain_value == F(91, 80)
        and 1 / r.remark_value < 1
        and 1 / r.chain_value < 1
    )
    acceptance(8, ok, f"remark {r.remark_value}, exact chain {r.chain_value}, both give ratio < 1")
    assert ok


def test_criterion_09_property_suites(acceptance):
    failures = []
    for kind in KINDS:
        cfg = build_config(kind)
        rng = random.Random(9000 + KINDS.index(kind))
        for _ in range(PROPERTY_CLASSES):
            cls = random_effective_class(cfg, rng)
            failures += decomposition_violations(cfg, cls, decompose(cfg, cls))
        for flag, _ in FLAG_RULES[kind]:
            for u in GRID:
                prof = volume_profile(cfg, u, flag).profile
                if prof.max_degree > 2:
                    failures.append(f"{kind} {flag} u={u}: degree {prof.max_degree}")
                for p in prof.pieces:
                    if p.poly.derivative()(p.lo) > 0 or p.poly.derivative()(p.hi) > 0:
                        failures.append(f"{kind} {flag} u={u}: increasing on [{p.lo}, {p.hi}]")
    ok = not failures
    acceptance(9, ok, f"{PROPERTY_CLASSES} classes per config, {len(failures)} violations")
    assert ok, failures[:5]


def test_criterion_10_consistency_at_one(acceptance):
    mismatches = []
    for kind in ("A1", "TwoA1"):
        cfg = build_config(kind)
        for flag, _ in FLAG_RULES[kind]:
            if 1 / s_curve(cfg, flag, 1) != delta_reference(cfg, PointStratum.of(flag)):
                mismatches.append(f"{kind} {flag}")
        for u in GRID:
            if corollary_bound(cfg, u) != f_certificate(u):
                mismatches.append(f"{kind} corollary at u={u}")
    ok = not mismatches
    acceptance(10, ok, f"reference values and corollary bounds agree ({len(mismatches)} mismatches)")
    assert ok, mismatches


@pytest.mark.run_last
def test_criterion_11_suite_runtime(acceptance, session_elapsed):
    elapsed = session_elapsed()
    ok = elapsed < 60
    acceptance(11, ok, f"suite ran in {elapsed:.1f} s")
    assert ok
