from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcert.flagdelta import FLAG_RULES, sample_grid
from kcert.picard import KINDS, build_config, intersect
from kcert.ratcore import UniPoly
from kcert.zariski import (
    IrrationalBreakpoint,
    NotPseudoEffective,
    _smallest_root_after,
    breakpoints,
    chamber_walk,
    decompose,
    decomposition_violations,
    divisor_at,
    random_effective_class,
    volume_profile,
)

CLASSES_PER_CONFIG = 220
GRID = sample_grid(1, 2, 5)


def flag_cases():
    for kind in KINDS:
        for flag, _ in FLAG_RULES[kind]:
            yield kind, flag


# -- decompose --------------------------------------------------------------


def test_decompose_nef_class_is_its_own_positive_part(a1, two_a1, a2):
    for cfg in (a1, two_a1, a2):
        z = decompose(cfg, cfg.anticanonical)
        assert z.N == () and z.P == cfg.anticanonical


def test_decompose_examples(a1):
    D = divisor_at(a1, F(3, 2))
    z = decompose(a1, D - F(1, 4) * a1["E4"])
    assert z.N == () and z.volume == F(21, 8)
    z = decompose(a1, D - F(3, 4) * a1["E4"])
    assert dict(z.N) == {"E5": F(1, 4)}


def test_decompose_rejects_non_effective(a1):
    with pytest.raises(NotPseudoEffective):
        decompose(a1, -a1.anticanonical)


@pytest.mark.parametrize("kind", KINDS)
def test_zariski_invariants_on_seeded_classes(kind):
    cfg = build_config(kind)
    rng = random.Random(20240601)
    for _ in range(CLASSES_PER_CONFIG):
        cls = random_effective_class(cfg, rng)
        z = decompose(cfg, cls)
        assert decomposition_violations(cfg, cls, z) == []


@pytest.mark.parametrize("kind", KINDS)
@given(seed=st.integers(0, 2**32), k=st.fractions(min_value=F(1, 7), max_value=7, max_denominator=7))
def test_decompose_is_homogeneous(kind, seed, k):
    cfg = build_config(kind)
    cls = random_effective_class(cfg, random.Random(seed))
    z, zk = decompose(cfg, cls), decompose(cfg, k * cls)
    assert zk.P == k * z.P
    assert dict(zk.N) == {n: k * x for n, x in z.N}
    assert decomposition_violations(cfg, k * cls, zk) == []


# -- chamber walk -----------------------------------------------------------


def test_chambers_e4_at_three_halves(a1):
    assert breakpoints(chamber_walk(a1, F(3, 2), "E4")) == [0, F(1, 2), 1, F(3, 2)]


def test_chambers_e5_at_three_halves(a1):
    chambers = chamber_walk(a1, F(3, 2), "E5")
    assert breakpoints(chambers) == [0, 1, F(3, 2), 2]
    assert [set(c.support) for c in chambers] == [{"E4"}, {"E4", "L45"}, {"E4", "L45", "C2"}]


def test_two_a1_final_chamber_slope(two_a1):
    last = chamber_walk(two_a1, F(5, 4), "E4")[-1]
    assert last.N_poly("L24").coeffs[1] == 2
    assert last.N_poly("L14").coeffs[1] == 1


@pytest.mark.parametrize("kind,flag", list(flag_cases()))
def test_support_grows_monotonically(kind, flag):
    cfg = build_config(kind)
    for u in GRID:
        chambers = chamber_walk(cfg, u, flag)
        for a, b in zip(chambers, chambers[1:]):
            assert set(a.support) <= set(b.support)
            assert a.v_hi == b.v_lo


@pytest.mark.parametrize("kind,flag", list(flag_cases()))
@given(data=st.data())
def test_chamber_data_matches_decompose(kind, flag, data):
    cfg = build_config(kind)
    u = data.draw(st.sampled_from(GRID))
    chambers = chamber_walk(cfg, u, flag)
    ch = data.draw(st.sampled_from(chambers))
    t = data.draw(st.fractions(min_value=0, max_value=1, max_denominator=50))
    v = ch.v_lo + t * (ch.v_hi - ch.v_lo)
    z = decompose(cfg, divisor_at(cfg, u) - v * cfg[flag])
    assert z.P == ch.P_at(v)
    assert dict(z.N) == {n: x for n, x in ch.N_at(v).items() if x != 0}


def test_past_threshold_is_not_pseudo_effective(a1):
    tau = chamber_walk(a1, F(3, 2), "E4")[-1].v_hi
    with pytest.raises(NotPseudoEffective):
        decompose(a1, divisor_at(a1, F(3, 2)) - (tau + 1) * a1["E4"])


def test_irrational_threshold_is_bracketed_not_rounded():
    with pytest.raises(IrrationalBreakpoint) as info:
        _smallest_root_after(UniPoly.of(2, 0, -1), F(0), None)
    cert = info.value.certificate
    assert cert.check()
    assert cert.lo ** 2 < 2 < cert.hi ** 2
    assert cert.width <= F(1, 1000)


def test_rational_threshold_is_exact():
    assert _smallest_root_after(UniPoly.of(4, 0, -1), F(0), None) == 2
    assert _smallest_root_after(UniPoly.of(4, 0, -1), F(0), F(1)) is None


# -- volume profiles --------------------------------------------------------


@pytest.mark.parametrize("kind,flag", list(flag_cases()))
def test_volume_profile_invariants(kind, flag):
    cfg = build_config(kind)
    for u in GRID:
        D = divisor_at(cfg, u)
        vp = volume_profile(cfg, u, flag)
        prof = vp.profile
        assert prof(0) == intersect(D, D)
        assert prof(vp.tau) == 0
        assert prof.max_degree <= 2
        for a, b in zip(prof.pieces, prof.pieces[1:]):
            assert a.poly(a.hi) == b.poly(b.lo)
        for p in prof.pieces:
            d = p.poly.derivative()
            assert d(p.lo) <= 0 and d(p.hi) <= 0


@pytest.mark.parametrize("kind", KINDS)
@given(data=st.data())
def test_volume_profile_agrees_with_decompose(kind, data):
    cfg = build_config(kind)
    flag = data.draw(st.sampled_from([f for f, _ in FLAG_RULES[kind]]))
    u = data.draw(st.sampled_from(GRID))
    vp = volume_profile(cfg, u, flag)
    v = data.draw(st.fractions(min_value=0, max_value=1, max_denominator=40)) * vp.tau
    assert vp.profile(v) == decompose(cfg, divisor_at(cfg, u) - v * cfg[flag]).volume


def test_a2_threshold(a2):
    for u in GRID:
        assert volume_profile(a2, u, "E4").tau == 2
