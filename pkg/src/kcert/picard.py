"""Combinatorial models of the singular quartic del Pezzo fibres.

Each configuration is the minimal resolution ``T`` of a degree-4 Du Val del
Pezzo surface, written as a blowup of the plane at five (possibly
infinitely near) points.  The Picard lattice has basis ``l, e1, ..., e5``
with intersection form ``diag(1, -1, -1, -1, -1, -1)``.

Points of ``T`` are never given coordinates.  A point is a *stratum*: the set
of negative curves passing through it (empty for a general point).  Curves
are assumed to meet transversally, at most once per pair.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .ratcore import as_rational, is_negative_definite

A1, TWO_A1, A2 = "A1", "TwoA1", "A2"
KINDS = (A1, TWO_A1, A2)
CLI_NAMES = {"a1": A1, "2a1": TWO_A1, "a2": A2}


@dataclass(frozen=True)
class Lattice:
    gram: tuple[tuple[int, ...], ...]
    basis: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.gram)

    def signature(self) -> tuple[int, int]:
        """(positive, negative) index, by exact symmetric elimination."""
        n = self.rank
        a = [[Fraction(x) for x in row] for row in self.gram]
        pos = neg = 0
        for k in range(n):
            piv = next((r for r in range(k, n) if a[r][r] != 0), None)
            if piv is None:
                # every remaining diagonal entry vanishes; not needed for our forms
                raise ValueError("degenerate pivot in signature computation")
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
            d = a[k][k]
            pos += d > 0
            neg += d < 0
            for i in range(k + 1, n):
                f = a[i][k] / d
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        return pos, neg


BLOWUP_LATTICE = Lattice(
    gram=tuple(tuple((1 if i == j == 0 else -1 if i == j else 0) for j in range(6)) for i in range(6)),
    basis=("l", "e1", "e2", "e3", "e4", "e5"),
)


@dataclass(frozen=True)
class DivClass:
    coords: tuple[Fraction, ...]
    lattice: Lattice = field(default=BLOWUP_LATTICE, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_rational(c) for c in self.coords))
        if len(self.coords) != self.lattice.rank:
            raise ValueError(f"class has {len(self.coords)} coordinates, lattice rank {self.lattice.rank}")

    def _check(self, other: DivClass) -> None:
        if other.lattice != self.lattice:
            raise ValueError("classes live in different lattices")

    def __add__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __neg__(self) -> DivClass:
        return DivClass(tuple(-a for a in self.coords), self.lattice)

    def __mul__(self, k) -> DivClass:
        k = as_rational(k)
        return DivClass(tuple(k * a for a in self.coords), self.lattice)

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def zero(self) -> DivClass:
        return DivClass((0,) * self.lattice.rank, self.lattice)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def intersect(a: DivClass, b: DivClass) -> Fraction:
    a._check(b)
    g = a.lattice.gram
    return sum(
        (a.coords[i] * g[i][j] * b.coords[j] for i in range(len(g)) for j in range(len(g)) if g[i][j]),
        Fraction(0),
    )


def cls(*coords) -> DivClass:
    return DivClass(tuple(coords))


@dataclass(frozen=True)
class NegativeCurve:
    name: str
    cls: DivClass

    @property
    def self_intersection(self) -> Fraction:
        return intersect(self.cls, self.cls)


@dataclass(frozen=True)
class DeltaPattern:
    """One row of a delta-invariant table.

    ``rule`` is one of ``on_any``, ``on_two_of``, ``on_exactly_one_of``,
    ``pair_between`` or ``otherwise``; ``names`` and ``other`` are its
    curve-name arguments and ``excluded`` lists curves the point must avoid.
    """

    label: str
    rule: str
    value: Fraction
    names: frozenset[str] = frozenset()
    other: frozenset[str] = frozenset()
    excluded: frozenset[str] = frozenset()

    def matches(self, on: frozenset[str]) -> bool:
        if on & self.excluded:
            return False
        if self.rule == "on_any":
            return bool(on & self.names)
        if self.rule == "on_two_of":
            return len(on & self.names) >= 2
        if self.rule == "on_exactly_one_of":
            return len(on & self.names) == 1
        if self.rule == "pair_between":
            return any(a in on and b in on and a != b for a in self.names for b in self.other)
        if self.rule == "otherwise":
            return True
        raise ValueError(f"unknown pattern rule {self.rule!r}")


@dataclass(frozen=True)
class PointStratum:
    on_curves: frozenset[str] = frozenset()

    @classmethod
    def of(cls, *names: str) -> PointStratum:
        return cls(frozenset(names))

    def __str__(self) -> str:
        if not self.on_curves:
            return "general point"
        return "∩".join(sorted(self.on_curves))


@dataclass(frozen=True)
class SurfaceConfig:
    kind: str
    lattice: Lattice
    canonical: DivClass
    curves: tuple[NegativeCurve, ...]
    adjacency: tuple[tuple[str, str, int], ...]
    delta_table: tuple[DeltaPattern, ...]

    @property
    def anticanonical(self) -> DivClass:
        return -self.canonical

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.curves)

    def curve(self, name: str) -> NegativeCurve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(f"{self.kind} has no negative curve {name!r}")

    def __getitem__(self, name: str) -> DivClass:
        return self.curve(name).cls

    def adjacency_number(self, a: str, b: str) -> int:
        for x, y, n in self.adjacency:
            if {x, y} == {a, b}:
                return n
        return 0

    def neighbours(self, name: str) -> list[str]:
        return [c for c in self.names if c != name and self.adjacency_number(name, c) > 0]

    @property
    def minus_two_curves(self) -> list[str]:
        return [c.name for c in self.curves if c.self_intersection == -2]

    def strata(self) -> list[PointStratum]:
        """Every combinatorial point type: general, on one curve, on two meeting curves."""
        out = [PointStratum()]
        out += [PointStratum.of(n) for n in self.names]
        out += [PointStratum.of(a, b) for a, b in combinations(self.names, 2) if self.adjacency_number(a, b) > 0]
        return out

    def is_valid_stratum(self, stratum: PointStratum) -> bool:
        on = stratum.on_curves
        if not on <= set(self.names) or len(on) > 2:
            return False
        if len(on) == 2:
            a, b = sorted(on)
            return self.adjacency_number(a, b) >= 1
        return True


def _line(i: int, j: int) -> DivClass:
    v = [0] * 6
    v[0], v[i], v[j] = 1, -1, -1
    return cls(*v)


def _exc(i: int, j: int | None = None) -> DivClass:
    """e_i, or the chain difference e_i - e_j for infinitely near blowups."""
    v = [0] * 6
    v[i] = 1
    if j is not None:
        v[j] = -1
    return cls(*v)


CONIC = cls(2, -1, -1, -1, -1, -1)
CANONICAL = cls(-3, 1, 1, 1, 1, 1)


def _pairs(text: str) -> tuple[tuple[str, str, int], ...]:
    out = []
    for item in text.split():
        a, b = item.split("-")
        out.append((a, b, 1))
    return tuple(out)


def _fs(*names: str) -> frozenset[str]:
    return frozenset(names)


def _curves_a1() -> tuple[NegativeCurve, ...]:
    return (
        NegativeCurve("E1", _exc(1)),
        NegativeCurve("E2", _exc(2)),
        NegativeCurve("E3", _exc(3)),
        NegativeCurve("E4", _exc(4, 5)),
        NegativeCurve("E5", _exc(5)),
        NegativeCurve("L12", _line(1, 2)),
        NegativeCurve("L13", _line(1, 3)),
        NegativeCurve("L14", _line(1, 4)),
        NegativeCurve("L23", _line(2, 3)),
        NegativeCurve("L24", _line(2, 4)),
        NegativeCurve("L34", _line(3, 4)),
        NegativeCurve("L45", _line(4, 5)),
        NegativeCurve("C2", CONIC),
    )


# Dual graphs: every listed pair meets once, every other pair is disjoint.
ADJ_A1 = _pairs(
    "E1-L12 E1-L13 E1-L14 E1-C2 E2-L12 E2-L23 E2-L24 E2-C2 E3-L13 E3-L23 E3-L34 E3-C2 "
    "E4-L14 E4-L24 E4-L34 E4-E5 E5-L45 E5-C2 L12-L34 L12-L45 L13-L24 L13-L45 L23-L14 L23-L45"
)

_BOLD_E_A1 = _fs("L14", "L24", "L34", "E5")
_REST_A1 = _fs("E1", "E2", "E3", "L12", "L13", "L23", "L45", "C2")

DELTA_A1 = (
    DeltaPattern("P on E4", "on_any", Fraction(1), _fs("E4")),
    DeltaPattern("P on L14, L24, L34 or E5, off E4", "on_any", Fraction(6, 5), _BOLD_E_A1, excluded=_fs("E4")),
    DeltaPattern("P on two of E1,E2,E3,L12,L13,L23,L45,C2", "on_two_of", Fraction(4, 3), _REST_A1),
    DeltaPattern("P on exactly one of E1,E2,E3,L12,L13,L23,L45,C2", "on_exactly_one_of", Fraction(18, 13), _REST_A1),
    DeltaPattern("otherwise", "otherwise", Fraction(3, 2)),
)


def _curves_2a1() -> tuple[NegativeCurve, ...]:
    return (
        NegativeCurve("E1", _exc(1)),
        NegativeCurve("E2", _exc(2, 3)),
        NegativeCurve("E3", _exc(3)),
        NegativeCurve("E4", _exc(4, 5)),
        NegativeCurve("E5", _exc(5)),
        NegativeCurve("L12", _line(1, 2)),
        NegativeCurve("L14", _line(1, 4)),
        NegativeCurve("L24", _line(2, 4)),
        NegativeCurve("L23", _line(2, 3)),
        NegativeCurve("L45", _line(4, 5)),
        NegativeCurve("C2", CONIC),
    )


ADJ_2A1 = _pairs(
    "E1-L12 E1-L14 E1-C2 E2-E3 E2-L12 E2-L24 E3-L23 E3-C2 E4-E5 E4-L14 E4-L24 "
    "E5-L45 E5-C2 L12-L45 L14-L23 L23-L45"
)

DELTA_2A1 = (
    DeltaPattern("P on E2, E4 or L24", "on_any", Fraction(1), _fs("E2", "E4", "L24")),
    DeltaPattern(
        "P on E3, E5, L12 or L14, off E2 and E4",
        "on_any",
        Fraction(6, 5),
        _fs("E3", "E5", "L12", "L14"),
        excluded=_fs("E2", "E4"),
    ),
    DeltaPattern("P = C2∩E1 or L23∩L45", "pair_between", Fraction(4, 3), _fs("C2", "L23"), _fs("E1", "L45")),
    DeltaPattern(
        "P on C2, E1, L23 or L45, elsewhere",
        "on_any",
        Fraction(18, 13),
        _fs("C2", "E1", "L23", "L45"),
        excluded=_fs("E3", "E5", "L12", "L14"),
    ),
    DeltaPattern("otherwise", "otherwise", Fraction(3, 2)),
)


def _curves_a2() -> tuple[NegativeCurve, ...]:
    return (
        NegativeCurve("E1", _exc(1)),
        NegativeCurve("E2", _exc(2)),
        NegativeCurve("E3", _exc(3, 4)),
        NegativeCurve("E4", _exc(4, 5)),
        NegativeCurve("E5", _exc(5)),
        NegativeCurve("L12", _line(1, 2)),
        NegativeCurve("L13", _line(1, 3)),
        NegativeCurve("L23", _line(2, 3)),
        NegativeCurve("L34", _line(3, 4)),
        NegativeCurve("C2", CONIC),
    )


ADJ_A2 = _pairs(
    "E1-L12 E1-L13 E1-C2 E2-L12 E2-L23 E2-C2 E3-E4 E3-L13 E3-L23 E4-E5 E4-L34 E5-C2 L12-L34"
)

DELTA_A2 = (
    DeltaPattern("P on E3 or E4", "on_any", Fraction(6, 7), _fs("E3", "E4")),
    DeltaPattern(
        "P on L13, L23, L34 or E5, off E3 and E4",
        "on_any",
        Fraction(8, 7),
        _fs("L13", "L23", "L34", "E5"),
        excluded=_fs("E3", "E4"),
    ),
    DeltaPattern("P on (L12 or C2) and (E1 or E2)", "pair_between", Fraction(4, 3), _fs("L12", "C2"), _fs("E1", "E2")),
    DeltaPattern("P on L12, C2, E1 or E2, elsewhere", "on_any", Fraction(18, 13), _fs("L12", "C2", "E1", "E2")),
    DeltaPattern("otherwise", "otherwise", Fraction(3, 2)),
)

_BUILDERS = {
    A1: (_curves_a1, ADJ_A1, DELTA_A1),
    TWO_A1: (_curves_2a1, ADJ_2A1, DELTA_2A1),
    A2: (_curves_a2, ADJ_A2, DELTA_A2),
}

EXPECTED_MINUS_TWO = {A1: 1, TWO_A1: 2, A2: 2}


@lru_cache(maxsize=None)
def build_config(kind: str) -> SurfaceConfig:
    kind = CLI_NAMES.get(kind, kind)
    if kind not in _BUILDERS:
        raise ValueError(f"unknown configuration {kind!r}; expected one of {KINDS}")
    curves, adjacency, table = _BUILDERS[kind]
    return SurfaceConfig(kind, BLOWUP_LATTICE, CANONICAL, curves(), adjacency, table)


def validate_config(cfg: SurfaceConfig) -> list[str]:
    """Return every violated structural fact; an empty list means valid."""
    problems = []
    mK = cfg.anticanonical
    if intersect(mK, mK) != 4:
        problems.append(f"(-K)^2 = {intersect(mK, mK)}, expected 4")
    if cfg.lattice.signature() != (1, cfg.lattice.rank - 1):
        problems.append(f"lattice signature {cfg.lattice.signature()} is not hyperbolic")
    names = set(cfg.names)
    for x, y, _ in cfg.adjacency:
        if x not in names or y not in names:
            problems.append(f"adjacency mentions unknown curve {x if x not in names else y}")
    for c in cfg.curves:
        sq = c.self_intersection
        deg = intersect(mK, c.cls)
        if not c.cls.is_integral():
            problems.append(f"{c.name} has non-integral class")
        if sq not in (-1, -2):
            problems.append(f"{c.name}^2 = {sq}, expected -1 or -2")
        if sq + intersect(cfg.canonical, c.cls) != -2:
            problems.append(f"{c.name} violates adjunction (arithmetic genus != 0)")
        if deg < 0:
            problems.append(f"-K.{c.name} = {deg} < 0: -K not nef")
        if (deg == 0) != (sq == -2):
            problems.append(f"-K.{c.name} = {deg} inconsistent with {c.name}^2 = {sq}")
    for a, b in combinations(cfg.curves, 2):
        m = intersect(a.cls, b.cls)
        expected = cfg.adjacency_number(a.name, b.name)
        if m < 0:
            problems.append(f"{a.name}.{b.name} = {m} < 0 for distinct curves")
        if m != expected:
            problems.append(f"{a.name}.{b.name} = {m} but dual graph says {expected}")
    n2 = len(cfg.minus_two_curves)
    if cfg.kind in EXPECTED_MINUS_TWO and n2 != EXPECTED_MINUS_TWO[cfg.kind]:
        problems.append(f"{n2} (-2)-curves, expected {EXPECTED_MINUS_TWO[cfg.kind]}")
    g = [[intersect(cfg[a], cfg[b]) for b in cfg.minus_two_curves] for a in cfg.minus_two_curves]
    if not is_negative_definite(g):
        problems.append("Gram matrix of (-2)-curves is not negative definite")
    if "C2" in names:
        if intersect(mK, cfg["C2"]) != 1 or intersect(cfg["C2"], cfg["C2"]) != -1:
            problems.append("C2 must satisfy -K.C2 = 1 and C2^2 = -1")
    return problems


def delta_reference(cfg: SurfaceConfig, stratum: PointStratum) -> Fraction:
    """Tabulated delta-invariant of (T, -K_T) at a point, first matching row wins."""
    if not cfg.is_valid_stratum(stratum):
        raise ValueError(f"{stratum} is not a point of {cfg.kind}")
    for row in cfg.delta_table:
        if row.matches(stratum.on_curves):
            return row.value
    raise AssertionError("delta table has no catch-all row")


def delta_reference_row(cfg: SurfaceConfig, stratum: PointStratum) -> DeltaPattern:
    for row in cfg.delta_table:
        if row.matches(stratum.on_curves):
            return row
    raise AssertionError("delta table has no catch-all row")


def ramification_index(a1, a2, a3) -> int:
    """Ramification index at ([1:0],[0:1]) of the degree-five projection of the curve."""
    a1, a2, a3 = as_rational(a1), as_rational(a2), as_rational(a3)
    if a3 != 0:
        return 2
    if a2 != 0:
        return 3
    if a1 != 0:
        return 4
    return 5


# -- JSON interchange -------------------------------------------------------


def config_to_json(cfg: SurfaceConfig) -> str:
    doc = {
        "kind": cfg.kind,
        "basis": list(cfg.lattice.basis),
        "gram": [list(r) for r in cfg.lattice.gram],
        "canonical": [int(c) for c in cfg.canonical.coords],
        "curves": [{"name": c.name, "class": [int(x) for x in c.cls.coords]} for c in cfg.curves],
        "adjacency": [[a, b, n] for a, b, n in cfg.adjacency],
        "delta_table": [
            {
                "label": r.label,
                "rule": r.rule,
                "value": str(r.value),
                "names": sorted(r.names),
                "other": sorted(r.other),
                "excluded": sorted(r.excluded),
            }
            for r in cfg.delta_table
        ],
    }
    return json.dumps(doc, indent=2)


def config_from_json(text: str) -> SurfaceConfig:
    doc = json.loads(text)
    lattice = Lattice(tuple(tuple(int(x) for x in r) for r in doc["gram"]), tuple(doc["basis"]))

    def dc(v: Sequence[int]) -> DivClass:
        if any(int(x) != x for x in v):
            raise ValueError("class coordinates must be integers")
        return DivClass(tuple(int(x) for x in v), lattice)

    return SurfaceConfig(
        kind=doc["kind"],
        lattice=lattice,
        canonical=dc(doc["canonical"]),
        curves=tuple(NegativeCurve(c["name"], dc(c["class"])) for c in doc["curves"]),
        adjacency=tuple((a, b, int(n)) for a, b, n in doc["adjacency"]),
        delta_table=tuple(
            DeltaPattern(
                r["label"],
                r["rule"],
                Fraction(r["value"]),
                frozenset(r.get("names", ())),
                frozenset(r.get("other", ())),
                frozenset(r.get("excluded", ())),
            )
            for r in doc["delta_table"]
        ),
    )


def replace_curve(cfg: SurfaceConfig, name: str, new: DivClass) -> SurfaceConfig:
    """Copy of ``cfg`` with one curve class swapped (used for fault injection)."""
    curves = tuple(NegativeCurve(c.name, new if c.name == name else c.cls) for c in cfg.curves)
    return SurfaceConfig(cfg.kind, cfg.lattice, cfg.canonical, curves, cfg.adjacency, cfg.delta_table)


def curve_names(cfg: SurfaceConfig, names: Iterable[str]) -> list[str]:
    known = set(cfg.names)
    bad = [n for n in names if n not in known]
    if bad:
        raise KeyError(f"{cfg.kind} has no curves {bad}")
    return list(names)
