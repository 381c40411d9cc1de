"""Threefold side: intersection numbers on X, the fibre-divisor invariants and the final certificate.

X is the blowup of P^1 x P^2 along a rational curve C of bidegree (5, 2)
(H1.C = 5, H2.C = 2).  Classes are written in the basis H1, H2, E.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import tables
from .flagdelta import (
    A_POLY,
    FLAG_RULES,
    ClaimResult,
    FixtureResult,
    corollary_bound,
    corollary_sweep,
    f_certificate,
    root_a,
    s_curve,
    sample_grid,
    verify_chamber_displays,
    verify_delta_claims,
    verify_formula_table,
)
from .picard import A1, A2, KINDS, TWO_A1, SurfaceConfig, build_config, delta_reference, intersect
from .ratcore import (
    UniPoly,
    VerificationFailure,
    as_rational,
    interpolate,
    isolate_root,
    poly_defint,
)
from .zariski import divisor_at, volume_profile


@dataclass(frozen=True)
class ThreefoldClass:
    h1: Fraction = Fraction(0)
    h2: Fraction = Fraction(0)
    e: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("h1", "h2", "e"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.h1, self.h2, self.e)

    def __add__(self, other: ThreefoldClass) -> ThreefoldClass:
        return ThreefoldClass(*(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: ThreefoldClass) -> ThreefoldClass:
        return ThreefoldClass(*(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> ThreefoldClass:
        return ThreefoldClass(*(-a for a in self.coords))

    def __mul__(self, k) -> ThreefoldClass:
        k = as_rational(k)
        return ThreefoldClass(*(k * a for a in self.coords))

    __rmul__ = __mul__


H1 = ThreefoldClass(1, 0, 0)
H2 = ThreefoldClass(0, 1, 0)
E = ThreefoldClass(0, 0, 1)
MINUS_K = 2 * H1 + 3 * H2 - E
T_BAR = H1
S_TILDE = 2 * H2 - E

# nonzero products on sorted index triples (0 = H1, 1 = H2, 2 = E).  H1.E^2 = -H1.C,
# H2.E^2 = -H2.C and E^3 = -deg N_C = -(-K_Y.C + 2g - 2) with -K_Y = 2H1 + 3H2, g = 0.
TRIPLE_TABLE = {
    (0, 1, 1): Fraction(1),
    (0, 2, 2): Fraction(-5),
    (1, 2, 2): Fraction(-2),
    (2, 2, 2): Fraction(-14),
}


def triple(a: ThreefoldClass, b: ThreefoldClass, c: ThreefoldClass) -> Fraction:
    total = Fraction(0)
    for i, j, k in product(range(3), repeat=3):
        t = TRIPLE_TABLE.get(tuple(sorted((i, j, k))))
        if t:
            total += a.coords[i] * b.coords[j] * c.coords[k] * t
    return total


def anticanonical_degree() -> Fraction:
    return triple(MINUS_K, MINUS_K, MINUS_K)


def positive_part(u) -> ThreefoldClass:
    u = as_rational(u)
    if not 0 <= u <= 2:
        raise ValueError(f"u = {u} outside [0, 2]")
    P = MINUS_K - u * T_BAR
    if u > 1:
        P = P - (u - 1) * S_TILDE
    return P


def negative_part(u) -> ThreefoldClass:
    u = as_rational(u)
    return (u - 1) * S_TILDE if u > 1 else ThreefoldClass()


def pu_volume(u) -> Fraction:
    P = positive_part(u)
    return triple(P, P, P)


def fibre_square(u) -> Fraction:
    """(P(u)|_T)^2 = P(u)^2 . T."""
    P = positive_part(u)
    return triple(P, P, T_BAR)


@dataclass(frozen=True)
class FibreIntegral:
    low: UniPoly  # P(u)^3 on [0, 1]
    high: UniPoly  # P(u)^3 on [1, 2]
    low_integral: Fraction
    high_integral: Fraction
    value: Fraction  # S_X(T)


def _fit(fn, lo, hi, degree: int) -> UniPoly:
    """Exact polynomial through degree+1 interior samples, checked at one more."""
    pts = [lo + (hi - lo) * Fraction(k, degree + 3) for k in range(1, degree + 3)]
    return interpolate([(x, fn(x)) for x in pts], degree)


@lru_cache(maxsize=None)
def fibre_integral() -> FibreIntegral:
    deg = anticanonical_degree()
    low = _fit(pu_volume, Fraction(0), Fraction(1), 3)
    high = _fit(pu_volume, Fraction(1), Fraction(2), 3)
    if low(1) != high(1):
        raise VerificationFailure("P(u)^3 is discontinuous at u = 1")
    i0 = poly_defint(low, 0, 1)
    i1 = poly_defint(high, 1, 2)
    return FibreIntegral(low, high, i0, i1, (i0 + i1) / deg)


def s_threefold_fiber() -> Fraction:
    return fibre_integral().value


# ---------------------------------------------------------------- S(W;F) on the fibre

U_BREAKS = (Fraction(1), Fraction(3, 2), Fraction(2))


def _chamber_signature(cfg: SurfaceConfig, u: Fraction, flag: str) -> tuple:
    return tuple(frozenset(c.support) for c in volume_profile(cfg, u, flag).chambers)


def fibre_volume_integral(cfg: SurfaceConfig, flag: str, u) -> Fraction:
    """A(u) = integral over v of vol(P(u)|_T - v*flag)."""
    u = as_rational(u)
    D = divisor_at(cfg, u)
    return s_curve(cfg, flag, u) * intersect(D, D)


@lru_cache(maxsize=None)
def fibre_volume_pieces(cfg: SurfaceConfig, flag: str) -> tuple[tuple[Fraction, Fraction, UniPoly], ...]:
    """A(u) on [1, 2] as cubic pieces between the candidate breakpoints.

    The v-chamber pattern must be constant inside each piece; five samples fix
    the cubic and a sixth verifies it.
    """
    out = []
    for lo, hi in zip(U_BREAKS, U_BREAKS[1:]):
        pts = [lo + (hi - lo) * Fraction(k, 7) for k in range(1, 7)]
        sigs = {_chamber_signature(cfg, u, flag) for u in pts}
        if len(sigs) != 1:
            raise VerificationFailure(f"v-chamber pattern of {flag} changes inside u in [{lo}, {hi}]")
        poly = interpolate([(u, fibre_volume_integral(cfg, flag, u)) for u in pts], 3)
        for end in (lo, hi):
            if poly(end) != fibre_volume_integral(cfg, flag, end):
                raise VerificationFailure(f"A(u) for {flag} does not extend to u = {end}")
        out.append((lo, hi, poly))
    return tuple(out)


def s_w_exact(cfg: SurfaceConfig, flag: str, stratum=()) -> Fraction:
    """S(W;F) for the flag curve F, exactly.

    The order term along N(u) = (u-1)S contributes only when the point lies
    on C2 = S|_T; the certificate itself only needs points off S.
    """
    deg = anticanonical_degree()
    a0 = fibre_volume_integral(cfg, flag, 0)  # constant on [0, 1]
    high = sum((poly_defint(p, lo, hi) for lo, hi, p in fibre_volume_pieces(cfg, flag)), Fraction(0))
    ord_term = Fraction(0)
    if "C2" in set(stratum):
        ord_term = poly_defint(UniPoly.of(-1, 1) * UniPoly.of(5, 0, -1), 1, 2)
    return 3 * (a0 + high + ord_term) / deg


def anticanonical_s(cfg: SurfaceConfig, flag: str) -> Fraction:
    return s_curve(cfg, flag, 0)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class Check:
    name: str
    location: str
    passed: bool
    detail: str = ""
    values: tuple[tuple[str, Fraction], ...] = ()


@dataclass(frozen=True)
class A2Remark:
    polynomial_integral: Fraction
    remark_term: Fraction
    remark_value: Fraction
    displayed_value: Fraction
    chain_value: Fraction
    chain_low_term: Fraction
    reference_delta: Fraction

    @property
    def matches_display(self) -> bool:
        return self.remark_value == self.displayed_value

    @property
    def method_fails(self) -> bool:
        return self.remark_value > 1 and self.chain_value > 1


def a2_counter_check() -> A2Remark:
    cfg = build_config(A2)
    poly = tables.as_poly_in_u("u**3 - 6*u**2 + 19")
    integral = poly_defint(poly, 1, 2)
    term = Fraction(3, 20) * integral / 3
    chain = s_w_exact(cfg, "E4", ("E4",))
    low = Fraction(3, 20) * fibre_volume_integral(cfg, "E4", 0)
    ref = min(delta_reference(cfg, s) for s in cfg.strata() if "E4" in s.on_curves)
    return A2Remark(integral, term, term + Fraction(3, 5), Fraction(83, 80), chain, low, ref)


STATED_ENDPOINTS = (Fraction(339, 250), Fraction(271, 200))  # upper end of branch 1, lower end of branch 2


def certificate_value(split_hi: Fraction, split_lo: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """(3/20)(I1 + I2) + 3/5 with I1 over [1, split_hi] and I2 over [split_lo, 2]."""
    b1 = tables.as_poly_in_u("16 + 3*u - 9*u**2 + 2*u**3") / 3
    b2 = tables.as_poly_in_u("11 - u**3") / 3
    i1 = poly_defint(b1, 1, split_hi)
    i2 = poly_defint(b2, split_lo, 2)
    return i1, i2, Fraction(3, 20) * (i1 + i2) + Fraction(3, 5)


@dataclass
class CertificateReport:
    endpoints: str
    split: tuple[Fraction, Fraction]
    value: Fraction
    gates: list[Check] = field(default_factory=list)
    fixtures: dict[str, list[FixtureResult]] = field(default_factory=dict)
    claims: dict[str, list[ClaimResult]] = field(default_factory=dict)
    a2: A2Remark | None = None
    configs: dict[str, str] = field(default_factory=dict)
    verdict: str = ""

    @property
    def refutations(self) -> list[str]:
        out = [f"gate {g.name}" for g in self.gates if not g.passed]
        for kind, results in self.fixtures.items():
            out += [f"fixture {r.id}" for r in results if r.verdict == "refuted"]
        return out

    @property
    def gates_pass(self) -> bool:
        return all(g.passed for g in self.gates)


def _grid() -> list[Fraction]:
    return sample_grid(1, 2, 9)


def threefold_checks() -> list[Check]:
    fi = fibre_integral()
    deg = anticanonical_degree()
    grid21 = sample_grid(0, 2, 21)
    vols = [pu_volume(u) for u in grid21]
    checks = [
        Check("anticanonical degree", "threefold", deg == 20, f"(-K_X)^3 = {deg}", (("value", deg),)),
        Check("P(u)^3 continuity at u=1", "threefold", fi.low(1) == fi.high(1) == pu_volume(1) == 8,
              f"branches give {fi.low(1)} and {fi.high(1)}"),
        Check("P(u)^3 non-increasing", "threefold", all(a >= b for a, b in zip(vols, vols[1:])),
              "21-point grid on [0,2]"),
        Check("P(u)^3 vanishes at u=2", "threefold", pu_volume(2) == 0, f"P(2)^3 = {pu_volume(2)}"),
        Check("branch integrals", "threefold S_X", (fi.low_integral, fi.high_integral) == (14, Fraction(13, 4)),
              f"{fi.low_integral} and {fi.high_integral}",
              (("low", fi.low_integral), ("high", fi.high_integral))),
        Check("S_X(T) = 69/80", "threefold S_X", fi.value == Fraction(69, 80), f"computed {fi.value}",
              (("value", fi.value),)),
        Check("1/S_X(T) >= 100/99", "threefold S_X", 1 / fi.value >= Fraction(100, 99), f"1/S_X = {1 / fi.value}"),
    ]
    rest = [fibre_square(u) == (4 if u <= 1 else 5 - u * u) for u in grid21]
    checks.append(Check("fibre restriction square", "threefold/surface", all(rest),
                        "P(u)^2.T equals D(u)^2 on the surface"))
    return checks


def surface_gates(cfg: SurfaceConfig) -> list[Check]:
    """Gates the certificate needs from one fibre configuration."""
    grid = _grid()
    kind = cfg.kind
    out = []
    strata = [s for s in cfg.strata() if s.on_curves and delta_reference(cfg, s) <= Fraction(6, 5)]
    min_ref = min(delta_reference(cfg, s) for s in strata)
    out.append(Check(f"{kind}: delta_O(T) >= 1 on special points", f"{kind} reference table", min_ref >= 1,
                     f"smallest reference value {min_ref}", (("min", min_ref),)))
    if kind in (A1, TWO_A1):
        f_ok = all(f_certificate(u) == corollary_bound(cfg, u) for u in grid)
        out.append(Check(f"{kind}: f equals corollary bound", f"{kind} corollary", f_ok, "9-point grid on [1,2]"))
        rows = corollary_sweep(cfg, grid)
        bad = [r for r in rows if not r.ok]
        detail = f"{len(rows)} (stratum, u) pairs"
        if bad:
            r = bad[0]
            detail += f"; first failure {sorted(r.stratum)} at u={r.u}: {r.lower} < {r.bound}"
        out.append(Check(f"{kind}: delta lower bounds dominate the corollary bound", f"{kind} corollary",
                         not bad, detail))
    flags = sorted(f for f, _ in FLAG_RULES[kind])
    chain_ok = True
    worst = ""
    for flag in flags:
        sw = s_w_exact(cfg, flag, (flag,))
        cap = Fraction(6, 5) * anticanonical_s(cfg, flag)
        if sw > cap:
            chain_ok = False
            worst = f"{flag}: {sw} > {cap}"
    out.append(Check(f"{kind}: S(W;F) <= (6/5) S_-K(F)", f"{kind} fibre chain", chain_ok,
                     worst or f"flags {', '.join(flags)}"))
    return out


def certificate(endpoints: str = "paper", samples: int = 9) -> CertificateReport:
    a = root_a()
    if endpoints == "paper":
        split = STATED_ENDPOINTS
        cover = a
    elif endpoints == "isolated":
        cover = isolate_root(A_POLY, (Fraction(1), Fraction(2)), width=Fraction(1, 10**9))
        split = (cover.hi, cover.lo)
    else:
        raise ValueError(f"unknown endpoint mode {endpoints!r}")
    i1, i2, value = certificate_value(*split)
    stated_value = certificate_value(*STATED_ENDPOINTS)[2]
    rep = CertificateReport(endpoints, split, value)
    rep.gates += threefold_checks()
    rep.gates.append(Check("root a certified", "certificate split", a.check() and a.within(Fraction(1355, 1000),
                                                                                         Fraction(1356, 1000)),
                           f"a in [{a.lo}, {a.hi}]"))
    rep.gates.append(Check("split covers the root", "certificate split",
                           split[1] <= cover.lo and cover.hi <= split[0] and cover.check(),
                           f"branch 1 up to {split[0]}, branch 2 from {split[1]}"))
    third = tables.as_poly_in_u("5 - u**2") * 3 == tables.as_poly_in_u("15 - 3*u**2")
    rep.gates.append(Check("(5-u^2)/(15-3u^2) = 1/3", "certificate integrand", third, "cross-multiplied"))
    rep.gates.append(Check("certificate value <= 99/100", "certificate", value <= Fraction(99, 100),
                           f"(3/20)({i1} + {i2}) + 3/5 = {value}",
                           (("I1", i1), ("I2", i2), ("value", value))))
    rep.gates.append(Check("tighter split never exceeds the stated split", "certificate", value <= stated_value,
                           f"{value} <= {stated_value}"))
    for kind in KINDS:
        cfg = build_config(kind)
        rep.fixtures[kind] = verify_formula_table(cfg, samples)
        rep.claims[kind] = verify_delta_claims(cfg, samples) + verify_chamber_displays(cfg)
        gates = surface_gates(cfg)
        if kind != A2:
            rep.gates += gates
            rep.configs[kind] = "certificate holds" if all(g.passed for g in gates) else "certificate fails"
        else:
            rep.configs[kind] = "not covered: delta_O(T) = 6/7 < 1 breaks the 3/5 term"
    rep.a2 = a2_counter_check()
    rep.gates.append(Check("A2 remark value 7/16 + 3/5 = 83/80", "A2 remark", rep.a2.matches_display,
                           f"{rep.a2.remark_term} + 3/5 = {rep.a2.remark_value}"))
    rep.gates.append(Check("A2 method failure reproduced", "A2 remark", rep.a2.method_fails,
                           f"remark {rep.a2.remark_value}, exact chain {rep.a2.chain_value}"))
    if rep.gates_pass:
        rep.verdict = "K-stable certificate holds for fibres with only A1 singular points"
    else:
        rep.verdict = "certificate does not hold: see failed gates"
    return rep
