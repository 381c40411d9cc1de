from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcert.fano35 import (
    E,
    H1,
    H2,
    MINUS_K,
    STATED_ENDPOINTS,
    ThreefoldClass,
    a2_counter_check,
    anticanonical_degree,
    certificate_value,
    fibre_integral,
    fibre_square,
    negative_part,
    positive_part,
    pu_volume,
    s_threefold_fiber,
    s_w_exact,
    threefold_checks,
    triple,
)
from kcert.flagdelta import root_a, sample_grid
from kcert.picard import intersect
from kcert.zariski import divisor_at

small = st.fractions(min_value=-4, max_value=4, max_denominator=5)
classes = st.builds(ThreefoldClass, small, small, small)


def test_triple_examples():
    assert triple(H1, H2, H2) == 1
    assert triple(H1, H1, E) == 0 and triple(H1, H1, H2) == 0
    assert triple(E, E, E) == -14


@given(classes, classes, classes)
def test_triple_is_symmetric(a, b, c):
    assert triple(a, b, c) == triple(b, a, c) == triple(c, b, a) == triple(a, c, b)


@given(classes, classes, classes, classes, small)
def test_triple_is_multilinear(a, b, c, d, k):
    assert triple(a + k * d, b, c) == triple(a, b, c) + k * triple(d, b, c)


def test_anticanonical_degree():
    assert anticanonical_degree() == 20
    assert MINUS_K == ThreefoldClass(2, 3, -1)


def test_pu_volume_examples():
    assert pu_volume(0) == 20
    assert pu_volume(1) == 8
    assert pu_volume(2) == 0


def test_positive_and_negative_parts_add_up():
    for u in sample_grid(0, 2, 9):
        assert positive_part(u) + negative_part(u) == MINUS_K - u * H1


@given(st.fractions(min_value=0, max_value=2, max_denominator=30))
def test_pu_volume_branches(u):
    expected = 20 - 12 * u if u <= 1 else 22 - 15 * u + u**3
    assert pu_volume(u) == expected


def test_fibre_integral():
    fi = fibre_integral()
    assert fi.low_integral == 14
    assert fi.high_integral == F(13, 4)
    assert fi.low(1) == fi.high(1) == 8
    assert s_threefold_fiber() == F(69, 80)
    assert 1 / s_threefold_fiber() >= F(100, 99)


def test_fibre_square_matches_surface(a1):
    for u in sample_grid(0, 2, 9):
        D = divisor_at(a1, u)
        assert fibre_square(u) == intersect(D, D)


def test_threefold_checks_pass():
    checks = threefold_checks()
    assert checks and all(c.passed for c in checks)


def test_s_w_exact_examples(a1, a2):
    assert s_w_exact(a1, "E4") == F(19, 20)
    assert s_w_exact(a1, "E4", ("E4",)) == F(19, 20)
    assert s_w_exact(a2, "E4") == F(91, 80)


def test_s_w_order_term_only_on_the_conic(a1):
    plain = s_w_exact(a1, "E5", ("E5",))
    on_conic = s_w_exact(a1, "E5", ("E5", "C2"))
    # (3/20) * integral of (u - 1)(5 - u^2) over [1, 2]
    assert on_conic - plain == F(3, 20) * F(13, 12)


def test_a2_counter_check():
    r = a2_counter_check()
    assert r.polynomial_integral == F(35, 4)
    assert r.remark_term == F(7, 16)
    assert r.remark_value == F(83, 80) and r.matches_display
    assert r.chain_value == F(91, 80)
    assert r.chain_low_term == F(7, 10)
    assert r.reference_delta == F(6, 7)
    assert r.method_fails
    assert 1 / r.remark_value < 1 and 1 / r.chain_value < 1


def test_certificate_value_with_stated_endpoints():
    i1, i2, value = certificate_value(*STATED_ENDPOINTS)
    assert value == F(78409391764017, 80000000000000)
    assert value <= F(99, 100)
    assert 1 / value >= F(100, 99)


def test_certificate_value_shrinks_with_overlap():
    cert = root_a()
    _, _, paper = certificate_value(*STATED_ENDPOINTS)
    _, _, tight = certificate_value(cert.hi, cert.lo)
    assert tight <= paper


def test_paper_certificate_report(paper_certificate):
    rep = paper_certificate
    assert rep.gates_pass
    assert rep.value == F(78409391764017, 80000000000000)
    assert rep.split == STATED_ENDPOINTS
    assert sorted(rep.refutations) == ["fixture 2a1.sw.E4.L14", "fixture 2a1.sw.E4.L24"]


def test_isolated_certificate_report(isolated_certificate, paper_certificate):
    rep = isolated_certificate
    assert rep.gates_pass
    assert rep.value < paper_certificate.value
    lo, hi = rep.split[1], rep.split[0]
    assert hi - lo <= F(1, 10**9)
