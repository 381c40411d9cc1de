"""Flag invariants on the fibre surface and their comparison with the reference tables.

For a flag curve F through a point P, with D = D(u):

* S_D(F) = (1/D^2) * integral of vol(D - vF) dv,
* h(v) = (P(v).F) * sum of n_i(v) (C_i.F) over negative-part curves C_i through P,
  plus (P(v).F)^2 / 2,
* S(W;P) = (2/D^2) * integral of h,

and delta_P(T, D) >= min(1/S_D(F), 1/S(W;P)) while 1/S_D(F) is an upper bound.
Local intersections at P are taken to equal global ones (transversal, single
meeting point), which the dual graphs support.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import tables
from .picard import A1, A2, TWO_A1, PointStratum, SurfaceConfig, delta_reference, intersect
from .ratcore import (
    Piece,
    PiecewisePoly,
    RootCertificate,
    UniPoly,
    VerificationFailure,
    as_rational,
    interpolate,
    isolate_root,
    poly_defint,
    pw_integrate,
)
from .zariski import divisor_at, volume_profile


class StratumNotOnFlag(ValueError):
    pass


class NoFlagAssigned(LookupError):
    pass


A_POLY = UniPoly.of(5, 3, -9, 3)  # 3u^3 - 9u^2 + 3u + 5
B_POLY = UniPoly.of(7, 12, -24, 8)  # 8u^3 - 24u^2 + 12u + 7


@lru_cache(maxsize=None)
def root_a() -> RootCertificate:
    """Crossing point of the two branches of f on [1, 2]."""
    return isolate_root(A_POLY, (Fraction(1), Fraction(2)))


@lru_cache(maxsize=None)
def root_b() -> RootCertificate:
    return isolate_root(B_POLY, (Fraction(1), Fraction(3, 2)))


def named_point(name: str) -> RootCertificate | Fraction:
    if name == "a":
        return root_a()
    if name == "b":
        return root_b()
    return Fraction(name)


def _stratum(stratum) -> frozenset[str]:
    if isinstance(stratum, PointStratum):
        return stratum.on_curves
    if isinstance(stratum, str):
        return frozenset((stratum,))
    return frozenset(stratum)


def _d_squared(cfg: SurfaceConfig, u: Fraction) -> Fraction:
    D = divisor_at(cfg, u)
    return intersect(D, D)


def s_curve(cfg: SurfaceConfig, flag: str, u) -> Fraction:
    return _s_curve(cfg, flag, as_rational(u))


@lru_cache(maxsize=None)
def _s_curve(cfg: SurfaceConfig, flag: str, u: Fraction) -> Fraction:
    vp = volume_profile(cfg, u, flag)
    return pw_integrate(vp.profile) / _d_squared(cfg, u)


def h_profile(cfg: SurfaceConfig, flag: str, stratum, u) -> PiecewisePoly:
    return _h_profile(cfg, flag, _stratum(stratum), as_rational(u))


@lru_cache(maxsize=None)
def _h_profile(cfg: SurfaceConfig, flag: str, on: frozenset, u: Fraction) -> PiecewisePoly:
    if flag not in on:
        raise StratumNotOnFlag(f"stratum {sorted(on)} does not lie on {flag}")
    F = cfg[flag]
    pieces = []
    for ch in volume_profile(cfg, u, flag).chambers:
        pc = ch.p_dot(F)
        local = UniPoly()
        for name in ch.support:
            if name in on and name != flag:
                local = local + ch.N_poly(name) * intersect(cfg[name], F)
        h = pc * local + pc * pc / 2
        if h.degree > 2:
            raise VerificationFailure(f"h has degree {h.degree} on [{ch.v_lo}, {ch.v_hi}]")
        pieces.append(Piece(ch.v_lo, ch.v_hi, h))
    return PiecewisePoly(tuple(pieces), check_continuity=False)


def s_point(cfg: SurfaceConfig, flag: str, stratum, u) -> Fraction:
    return _s_point(cfg, flag, _stratum(stratum), as_rational(u))


@lru_cache(maxsize=None)
def _s_point(cfg: SurfaceConfig, flag: str, on: frozenset, u: Fraction) -> Fraction:
    return 2 * pw_integrate(_h_profile(cfg, flag, on, u)) / _d_squared(cfg, u)


# flags chosen per stratum, in priority order: (flag, curves the point must avoid)
FLAG_RULES: dict[str, tuple[tuple[str, tuple[str, ...]], ...]] = {
    A1: (("E4", ()), ("E5", ()), ("L14", ()), ("L24", ()), ("L34", ())),
    TWO_A1: (("E2", ()), ("E4", ()), ("E3", ()), ("E5", ()), ("L24", ()), ("L14", ()), ("L12", ())),
    A2: (("E4", ("L34", "E5")),),
}


def assigned_flag(cfg: SurfaceConfig, stratum) -> str:
    on = _stratum(stratum)
    for flag, avoid in FLAG_RULES[cfg.kind]:
        if flag in on and not on.intersection(avoid):
            return flag
    raise NoFlagAssigned(f"no flag is assigned to stratum {sorted(on)} on {cfg.kind}")


@dataclass(frozen=True)
class DeltaBound:
    stratum: frozenset
    u: Fraction
    flag: str
    lower: Fraction
    upper: Fraction
    s_curve: Fraction
    s_point: Fraction


def delta_point_bound(cfg: SurfaceConfig, stratum, u, flag: str | None = None) -> DeltaBound:
    u = as_rational(u)
    on = _stratum(stratum)
    if on and not cfg.is_valid_stratum(PointStratum(on)):
        raise ValueError(f"{sorted(on)} is not a point stratum of {cfg.kind}")
    flag = flag or assigned_flag(cfg, on)
    sc = s_curve(cfg, flag, u)
    sp = s_point(cfg, flag, on, u)
    upper = 1 / sc
    return DeltaBound(on, u, flag, min(upper, 1 / sp), upper, sc, sp)


# ---------------------------------------------------------------- sample grids


def sample_grid(lo, hi, n: int = 9) -> list[Fraction]:
    lo, hi = as_rational(lo), as_rational(hi)
    if n < 2:
        raise ValueError("need at least two samples")
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _resolve(endpoint) -> tuple[Fraction, Fraction]:
    """Closed range a named endpoint may take: a root bracket or a single point."""
    p = named_point(endpoint)
    if isinstance(p, RootCertificate):
        return p.lo, p.hi
    return p, p


# ---------------------------------------------------------------- formula table


@dataclass(frozen=True)
class SampleCheck:
    u: Fraction
    case: str
    expected: Fraction
    computed: Fraction
    match: bool


@dataclass(frozen=True)
class FixtureResult:
    id: str
    location: str
    quantity: str
    formula: str
    samples: tuple[SampleCheck, ...]
    verdict: str  # confirmed | refuted
    below_sd: bool | None = None  # computed S(W;P) <= computed S_D at every sample
    recomputed: str | None = None  # closed form fitted to the computed values when refuted


def _case_label(flag: str, stratum: tuple[str, ...]) -> str:
    return f"{flag}@{'∩'.join(stratum)}" if stratum else flag


def verify_fixture(cfg: SurfaceConfig, fx: tables.FormulaFixture, samples: int = 9) -> FixtureResult:
    checks = []
    below = None if not fx.below_sd else True
    for u in sample_grid(fx.lo, fx.hi, samples):
        expected = fx.value(u)
        for flag, stratum in fx.cases:
            if fx.quantity == tables.S_D:
                computed = s_curve(cfg, flag, u)
            else:
                computed = s_point(cfg, flag, stratum, u)
                if fx.below_sd and computed > s_curve(cfg, flag, u):
                    below = False
            ok = computed == expected if fx.relation == "eq" else computed <= expected
            checks.append(SampleCheck(u, _case_label(flag, stratum), expected, computed, ok))
    verdict = "confirmed" if all(c.match for c in checks) else "refuted"
    recomputed = None
    if verdict == "refuted":
        recomputed = _fit_closed_form(fx, [c for c in checks if c.case == checks[0].case])
    return FixtureResult(fx.id, fx.location, fx.quantity, fx.text, tuple(checks), verdict, below, recomputed)


def _fit_closed_form(fx: tables.FormulaFixture, checks) -> str | None:
    """Numerator over the fixture's denominator that fits the computed values, if one of degree <= 4 does."""
    den = fx.den
    pts = [(c.u, c.computed * den(c.u)) for c in checks]
    for degree in range(min(5, len(pts) - 1)):
        try:
            num = interpolate(pts, degree)
        except VerificationFailure:
            continue
        return f"({num.format('u')})/({fx.den.format('u')})"
    return None


def verify_formula_table(cfg: SurfaceConfig, samples: int = 9) -> list[FixtureResult]:
    return [verify_fixture(cfg, fx, samples) for fx in tables.FORMULA_FIXTURES[cfg.kind]]


# ---------------------------------------------------------------- delta statements


@dataclass(frozen=True)
class ClaimResult:
    id: str
    location: str
    statement: str
    verdict: str  # confirmed | erratum | unsupported
    detail: str


def verify_delta_claim(cfg: SurfaceConfig, claim: tables.DeltaClaim, samples: int = 9) -> ClaimResult:
    """Compare a stated delta value or bound with the recomputed [lower, upper] window.

    A named endpoint (a or b) is replaced by its certified bracket, shrinking
    the tested interval to the part that is certainly inside the claim's range.
    """
    lo = _resolve(claim.lo)[1]
    hi = _resolve(claim.hi)[0]
    worst = "confirmed"
    detail = ""
    rank = {"confirmed": 0, "unsupported": 1, "erratum": 2}
    for u in sample_grid(lo, hi, samples):
        stated = tables.evaluate(claim.expression, u=u)
        for stratum in claim.strata:
            b = delta_point_bound(cfg, stratum, u)
            if claim.relation == "eq":
                if b.lower == b.upper == stated:
                    v = "confirmed"
                elif stated > b.upper or stated < b.lower:
                    v = "erratum"
                else:
                    v = "unsupported"
            elif claim.relation == "ge":
                v = "confirmed" if stated <= b.lower else ("erratum" if stated > b.upper else "unsupported")
            else:
                v = "confirmed" if stated >= b.upper else ("erratum" if stated < b.lower else "unsupported")
            if rank[v] > rank[worst]:
                worst = v
                detail = (
                    f"u={u}, P={'∩'.join(stratum)}: stated {stated}, "
                    f"recomputed window [{b.lower}, {b.upper}] via flag {b.flag}"
                )
    statement = f"delta {'=' if claim.relation == 'eq' else ('>=' if claim.relation == 'ge' else '<=')} " \
                f"{claim.expression} on [{claim.lo}, {claim.hi}]"
    return ClaimResult(claim.id, claim.location, statement, worst, detail)


def verify_delta_claims(cfg: SurfaceConfig, samples: int = 9) -> list[ClaimResult]:
    return [verify_delta_claim(cfg, c, samples) for c in tables.DELTA_CLAIMS[cfg.kind]]


# ---------------------------------------------------------------- chamber displays


def _interior_grid(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    return [lo + (hi - lo) * k / (n + 1) for k in range(1, n + 1)]


def verify_chamber_display(cfg: SurfaceConfig, disp: tables.ChamberDisplay, samples: int = 7) -> list[ClaimResult]:
    """Check each displayed chamber table item at interior u samples.

    Returns one result per item: breakpoints, negative parts, P^2, P.F and
    every displayed h.
    """
    problems: dict[str, str] = {}
    items = ["breakpoints", "negative part", "P^2", "P.F"] + [f"h at {'∩'.join(s)}" for s, _ in disp.h]
    F = cfg[disp.flag]
    for u in _interior_grid(disp.lo, disp.hi, samples):
        chambers = volume_profile(cfg, u, disp.flag).chambers
        shown = [p for p in disp.pieces if tables.evaluate(p.v_lo, u=u) < tables.evaluate(p.v_hi, u=u)]
        bps = [(tables.evaluate(p.v_lo, u=u), tables.evaluate(p.v_hi, u=u)) for p in shown]
        got = [(c.v_lo, c.v_hi) for c in chambers]
        if bps != got:
            problems.setdefault("breakpoints", f"u={u}: shown {bps}, computed {got}")
            continue
        for p, ch in zip(shown, chambers):
            neg = {n: tables.as_poly_in_v(e, u) for n, e in p.negative}
            mine = {n: ch.N_poly(n) for n in ch.support}
            if neg != mine:
                problems.setdefault("negative part", f"u={u}, v in [{ch.v_lo}, {ch.v_hi}]: "
                                    f"shown {_fmt_polys(neg)}, computed {_fmt_polys(mine)}")
            if tables.as_poly_in_v(p.p_squared, u) != ch.p_squared():
                problems.setdefault("P^2", f"u={u}, v in [{ch.v_lo}, {ch.v_hi}]: shown "
                                    f"{tables.as_poly_in_v(p.p_squared, u).format('v')}, computed {ch.p_squared().format('v')}")
            if tables.as_poly_in_v(p.p_dot_flag, u) != ch.p_dot(F):
                problems.setdefault("P.F", f"u={u}, v in [{ch.v_lo}, {ch.v_hi}]: shown "
                                    f"{tables.as_poly_in_v(p.p_dot_flag, u).format('v')}, computed {ch.p_dot(F).format('v')}")
        idx = [i for i, p in enumerate(disp.pieces) if p in shown]
        for stratum, exprs in disp.h:
            key = f"h at {'∩'.join(stratum)}"
            h = h_profile(cfg, disp.flag, frozenset(stratum), u)
            rel = disp.relation_for(stratum)
            for i, piece in zip(idx, h.pieces):
                want = tables.as_poly_in_v(exprs[i], u)
                ok = want == piece.poly if rel == "eq" else nonnegative_on(want - piece.poly, piece.lo, piece.hi)
                if not ok:
                    problems.setdefault(key, f"u={u}, v in [{piece.lo}, {piece.hi}]: shown {want.format('v')}, "
                                        f"computed {piece.poly.format('v')}")
    out = []
    for item in items:
        if item in problems:
            out.append(ClaimResult(f"{disp.id}.{_slug(item)}", disp.location, item, "erratum", problems[item]))
        else:
            out.append(ClaimResult(f"{disp.id}.{_slug(item)}", disp.location, item, "confirmed", ""))
    return out


def _slug(text: str) -> str:
    return text.replace("^", "").replace(".", "").replace("∩", "-").replace(" ", "_")


def _fmt_polys(d: dict) -> str:
    return "{" + ", ".join(f"{k}: {p.format('v')}" for k, p in sorted(d.items())) + "}"


def nonnegative_on(p: UniPoly, lo: Fraction, hi: Fraction) -> bool:
    """Exact test that a polynomial of degree at most 2 is >= 0 on [lo, hi]."""
    if p.degree > 2:
        raise ValueError("nonnegative_on handles degree at most 2")
    points = [lo, hi]
    if p.degree == 2:
        vertex = -p.coeffs[1] / (2 * p.coeffs[2])
        if lo < vertex < hi:
            points.append(vertex)
    return all(p(x) >= 0 for x in points)


def verify_chamber_displays(cfg: SurfaceConfig, samples: int = 7) -> list[ClaimResult]:
    out = []
    for disp in tables.CHAMBER_DISPLAYS[cfg.kind]:
        out += verify_chamber_display(cfg, disp, samples)
    return out


def e5_integrand_check(cfg: SurfaceConfig, samples: int = 9) -> dict[Fraction, bool]:
    """Which denominator of the last E5 volume integrand reproduces (11 - u^3)/(15 - 3u^2).

    Returns, per candidate denominator, whether it matches at every sample.
    """
    out = {}
    for den in tables.E5_LAST_INTEGRAND_DENOMINATORS:
        ok = True
        for u in sample_grid(1, 2, samples):
            first = tables.as_poly_in_v("5 - 4*v + 2*u*v - u**2 - v**2/2", u)
            second = tables.as_poly_in_v("6 - 6*v + v**2/2 + 2*u*v - u**2", u)
            third = tables.as_poly_in_v("3*(2-v)**2", u) / den
            total = poly_defint(first, 0, 1) + poly_defint(second, 1, u) + poly_defint(third, u, 2)
            if total / (5 - u * u) != (11 - u**3) / (15 - 3 * u * u):
                ok = False
        out[den] = ok
    return out


# ---------------------------------------------------------------- f and corollaries


def _two_branch(branches: tuple[str, str], u: Fraction) -> Fraction:
    cert = root_a()
    b1 = tables.evaluate(branches[0], u=u)
    b2 = tables.evaluate(branches[1], u=u)
    if u <= cert.lo:
        return b1
    if u >= cert.hi:
        return b2
    return min(b1, b2)


F_BRANCHES = (tables.B1, tables.B2)


def f_certificate(u) -> Fraction:
    u = as_rational(u)
    if not 1 <= u <= 2:
        raise ValueError(f"u = {u} outside [1, 2]")
    return _two_branch(F_BRANCHES, u)


def corollary_bound(cfg: SurfaceConfig, u) -> Fraction:
    u = as_rational(u)
    if cfg.kind not in tables.COROLLARY_CURVES:
        raise ValueError(f"no corollary bound is stated for {cfg.kind}")
    if not 1 <= u <= 2:
        raise ValueError(f"u = {u} outside [1, 2]")
    return _two_branch(tables.COROLLARY_BRANCHES, u)


@dataclass(frozen=True)
class SweepRow:
    stratum: frozenset
    reference: Fraction
    u: Fraction
    flag: str
    lower: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.lower >= self.bound


def corollary_sweep(cfg: SurfaceConfig, grid: Iterable[Fraction], threshold=Fraction(6, 5)) -> list[SweepRow]:
    """delta lower bounds against the corollary bound on every stratum with reference delta <= threshold."""
    rows = []
    strata = [s for s in cfg.strata() if s.on_curves and delta_reference(cfg, s) <= threshold]
    for u in grid:
        cb = corollary_bound(cfg, u)
        for s in strata:
            b = delta_point_bound(cfg, s, u)
            rows.append(SweepRow(s.on_curves, delta_reference(cfg, s), u, b.flag, b.lower, cb))
    return rows


@dataclass(frozen=True)
class AuditRow:
    curve: str
    listed: bool
    strata: int
    self_flagged: int
    holds: bool
    worst_margin: Fraction


def corollary_audit(cfg: SurfaceConfig, grid: Iterable[Fraction]) -> list[AuditRow]:
    """For each curve in or near the stated list, does every point on it satisfy the bound?

    Points without an assigned flag fall back to the curve itself as flag.
    """
    listed = set(tables.COROLLARY_CURVES[cfg.kind])
    candidates = sorted(listed | {c for c, _ in FLAG_RULES[cfg.kind]})
    grid = list(grid)
    rows = []
    for curve in candidates:
        strata = [s for s in cfg.strata() if curve in s.on_curves]
        worst = None
        fallback = 0
        for s in strata:
            try:
                flag = assigned_flag(cfg, s)
            except NoFlagAssigned:
                flag = curve
                fallback += 1
            for u in grid:
                m = delta_point_bound(cfg, s, u, flag).lower - corollary_bound(cfg, u)
                worst = m if worst is None else min(worst, m)
        rows.append(AuditRow(curve, curve in listed, len(strata), fallback, worst >= 0, worst))
    return rows
