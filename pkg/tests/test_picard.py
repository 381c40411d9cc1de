from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcert.picard import (
    KINDS,
    BLOWUP_LATTICE,
    DivClass,
    Lattice,
    PointStratum,
    build_config,
    cls,
    config_from_json,
    config_to_json,
    delta_reference,
    intersect,
    ramification_index,
    replace_curve,
    validate_config,
)
from kcert.zariski import divisor_at


def test_lattice_is_hyperbolic():
    assert BLOWUP_LATTICE.signature() == (1, 5)


@pytest.mark.parametrize("kind", KINDS)
def test_anticanonical_degree_four(kind):
    cfg = build_config(kind)
    assert intersect(cfg.anticanonical, cfg.anticanonical) == 4


def test_intersection_examples(a1):
    assert intersect(a1["C2"], a1["E5"]) == 1
    D = divisor_at(a1, F(3, 2))
    assert intersect(D, D) == F(11, 4)


def test_intersect_rejects_mismatched_lattices():
    other = Lattice(((1, 0), (0, -1)), ("l", "e"))
    with pytest.raises(ValueError):
        intersect(cls(1, 0, 0, 0, 0, 0), DivClass((1, 0), other))
    with pytest.raises(ValueError):
        DivClass((1, 2, 3))


def test_curve_counts(a1, two_a1, a2):
    assert len(a1.curves) == 13 and a1.minus_two_curves == ["E4"]
    assert len(two_a1.curves) == 11
    assert sum(c.self_intersection == -1 for c in two_a1.curves) == 9
    assert len(a2.curves) == 10
    assert sorted(a2.minus_two_curves) == ["E3", "E4"]
    assert intersect(a2["E3"], a2["E4"]) == 1
    assert intersect(a2["E3"], a2["E5"]) == 0
    assert intersect(a2["E4"], a2["E5"]) == 1


@pytest.mark.parametrize("kind", KINDS)
def test_configs_validate(kind):
    assert validate_config(build_config(kind)) == []


@pytest.mark.parametrize("kind", KINDS)
def test_adjunction_and_integrality(kind):
    cfg = build_config(kind)
    for c in cfg.curves:
        assert c.cls.is_integral()
        # arithmetic genus zero: C^2 + K.C = -2
        assert c.self_intersection + intersect(cfg.canonical, c.cls) == -2
        assert intersect(cfg.anticanonical, c.cls) == (0 if c.self_intersection == -2 else 1)


def test_fault_injection_on_conic(a1):
    broken = replace_curve(a1, "C2", cls(2, -1, 0, 0, 0, 0))
    problems = validate_config(broken)
    assert any("C2^2 = 3" in p for p in problems)


def test_fault_injection_on_dual_graph(a1):
    broken = replace_curve(a1, "L45", cls(1, -1, -2, 0, 0, 0) + cls(0, 0, 1, 0, 0, 0))
    assert validate_config(broken)


def test_delta_reference_examples(a1, a2):
    assert delta_reference(a1, PointStratum.of("E4")) == 1
    assert delta_reference(a1, PointStratum.of("E5")) == F(6, 5)
    assert delta_reference(a2, PointStratum.of("E3")) == F(6, 7)


@pytest.mark.parametrize("kind", KINDS)
def test_delta_reference_is_total(kind):
    cfg = build_config(kind)
    for s in cfg.strata():
        assert cfg.is_valid_stratum(s)
        assert 0 < delta_reference(cfg, s) <= F(3, 2)


def test_delta_reference_rejects_disjoint_pair(a1):
    disjoint = next(
        (a, b) for a in a1.names for b in a1.names if a < b and a1.adjacency_number(a, b) == 0
    )
    with pytest.raises(ValueError):
        delta_reference(a1, PointStratum.of(*disjoint))


def test_ramification_examples():
    assert ramification_index(0, 0, 1) == 2
    assert ramification_index(0, 1, 0) == 3
    assert ramification_index(1, 0, 0) == 4
    assert ramification_index(0, 0, 0) == 5


coefficient = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(coefficient, coefficient, coefficient)
def test_ramification_depends_on_last_nonzero(x1, x2, x3):
    r = ramification_index(x1, x2, x3)
    assert r in (2, 3, 4, 5)
    if x3:
        assert r == 2
    elif x1 or x2:
        assert r == ramification_index(0, x1, x2) + 1
    else:
        assert r == 5


@pytest.mark.parametrize("kind", KINDS)
def test_json_round_trip(kind):
    cfg = build_config(kind)
    back = config_from_json(config_to_json(cfg))
    assert back == cfg
    assert validate_config(back) == []
