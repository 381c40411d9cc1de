"""Zariski decomposition on a configuration and its chamber structure along a flag.

The decomposition follows the support-growing iteration: start from the
curves the class meets negatively, make the remainder orthogonal to the
accumulated support, and repeat until the remainder is nef.  Because the
negative curves of a weak del Pezzo surface of degree four generate its
cone of curves, nefness is tested against the configuration's curve list
only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .picard import DivClass, SurfaceConfig, intersect
from .ratcore import (
    PiecewisePoly,
    Piece,
    RootCertificate,
    UniPoly,
    VerificationFailure,
    as_rational,
    count_roots,
    interpolate,
    is_negative_definite,
    isolate_root,
    rational_sqrt,
    solve_linear,
)


class NotPseudoEffective(ValueError):
    pass


class IrrationalBreakpoint(ArithmeticError):
    def __init__(self, message: str, certificate: RootCertificate):
        super().__init__(message)
        self.certificate = certificate


class NonMonotoneSupport(VerificationFailure):
    pass


@dataclass(frozen=True)
class ZariskiResult:
    P: DivClass
    N: tuple[tuple[str, Fraction], ...]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.N)

    def coeff(self, name: str) -> Fraction:
        return dict(self.N).get(name, Fraction(0))

    @property
    def volume(self) -> Fraction:
        return intersect(self.P, self.P)


def divisor_at(cfg: SurfaceConfig, u) -> DivClass:
    """Restriction of the threefold's positive part to the fibre, pulled back to T."""
    u = as_rational(u)
    if not 0 <= u <= 2:
        raise ValueError(f"u = {u} outside [0, 2]")
    mK = cfg.anticanonical
    if u <= 1:
        return mK
    return mK - (u - 1) * cfg["C2"]


def _gram(cfg: SurfaceConfig, names) -> list[list[Fraction]]:
    return [[intersect(cfg[a], cfg[b]) for b in names] for a in names]


def decompose(cfg: SurfaceConfig, D: DivClass) -> ZariskiResult:
    support: list[str] = []
    coeffs: list[Fraction] = []
    P = D
    while True:
        new = [c for c in cfg.names if c not in support and intersect(P, cfg[c]) < 0]
        if not new:
            break
        support += new
        gram = _gram(cfg, support)
        if not is_negative_definite(gram):
            raise NotPseudoEffective(f"support {support} is not negative definite")
        coeffs = solve_linear(gram, [intersect(D, cfg[c]) for c in support])
        if any(x < 0 for x in coeffs):
            raise NotPseudoEffective(f"negative coefficient in negative part over {support}")
        P = D
        for name, x in zip(support, coeffs):
            P = P - x * cfg[name]
    if intersect(P, P) < 0:
        raise NotPseudoEffective("nef part has negative self-intersection")
    return ZariskiResult(P, tuple((n, x) for n, x in zip(support, coeffs) if x != 0))


@dataclass(frozen=True)
class VChamber:
    """Chamber [v_lo, v_hi] on which the negative part has fixed support.

    Here ``P(v) = P_const + v * P_slope`` and each negative-part coefficient
    is ``a + b*v`` for the triple ``(curve, a, b)`` in ``N_coeffs``.
    """

    v_lo: Fraction
    v_hi: Fraction
    P_const: DivClass
    P_slope: DivClass
    N_coeffs: tuple[tuple[str, Fraction, Fraction], ...]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(n for n, _, _ in self.N_coeffs)

    def P_at(self, v) -> DivClass:
        return self.P_const + as_rational(v) * self.P_slope

    def N_at(self, v) -> dict[str, Fraction]:
        v = as_rational(v)
        return {n: a + b * v for n, a, b in self.N_coeffs}

    def N_poly(self, name: str) -> UniPoly:
        for n, a, b in self.N_coeffs:
            if n == name:
                return UniPoly.linear(a, b)
        return UniPoly()

    def p_squared(self) -> UniPoly:
        c, s = self.P_const, self.P_slope
        return UniPoly.of(intersect(c, c), 2 * intersect(c, s), intersect(s, s))

    def p_dot(self, other: DivClass) -> UniPoly:
        return UniPoly.linear(intersect(self.P_const, other), intersect(self.P_slope, other))


def _affine_part(cfg, D, F, support):
    """Negative-part coefficients on a fixed support as affine functions of v."""
    if not support:
        return [], [], D, -F
    gram = _gram(cfg, support)
    if not is_negative_definite(gram):
        raise NotPseudoEffective(f"support {support} is not negative definite")
    n0 = solve_linear(gram, [intersect(D, cfg[c]) for c in support])
    n1 = solve_linear(gram, [-intersect(F, cfg[c]) for c in support])
    P_c, P_s = D, -F
    for name, a, b in zip(support, n0, n1):
        P_c = P_c - a * cfg[name]
        P_s = P_s - b * cfg[name]
    return n0, n1, P_c, P_s


def _smallest_root_after(q: UniPoly, lo: Fraction, hi: Fraction | None):
    """Smallest root of q in (lo, hi] (or (lo, inf) if hi is None), exactly."""
    if q.degree <= 0:
        return None
    if q.degree == 1:
        r = -q.coeffs[0] / q.coeffs[1]
        return r if r > lo and (hi is None or r <= hi) else None
    if q.degree != 2:
        raise VerificationFailure(f"volume polynomial {q} exceeds degree 2")
    c0, c1, c2 = q.coeffs
    disc = c1 * c1 - 4 * c0 * c2
    if disc < 0:
        return None
    root = rational_sqrt(disc)
    if root is None:
        bound = hi if hi is not None else lo + 64
        if count_roots(q, lo, bound) == 0:
            return None
        # narrow onto the first root by Sturm counts, then certify the bracket
        lo_b, hi_b = lo, bound
        while hi_b - lo_b > Fraction(1, 1000) or count_roots(q, lo_b, hi_b) > 1:
            mid = (lo_b + hi_b) / 2
            if count_roots(q, lo_b, mid) >= 1:
                hi_b = mid
            else:
                lo_b = mid
        cert = isolate_root(q, (lo_b, hi_b))
        raise IrrationalBreakpoint(f"threshold in [{cert.lo}, {cert.hi}] is irrational", cert)
    roots = sorted({(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)})
    for r in roots:
        if r > lo and (hi is None or r <= hi):
            return r
    return None


@lru_cache(maxsize=4096)
def chamber_walk(cfg: SurfaceConfig, u, flag: str) -> tuple[VChamber, ...]:
    """Chambers of v -> Zariski decomposition of D(u) - v*flag, from 0 to the threshold."""
    u = as_rational(u)
    D = divisor_at(cfg, u)
    F = cfg[flag]
    if intersect(D, D) <= 0:
        raise NotPseudoEffective(f"D(u) is not big at u = {u}")
    support = list(decompose(cfg, D).support)
    v_lo = Fraction(0)
    chambers: list[VChamber] = []
    for _ in range(64):
        # infinitesimal closure: curves that P(v) is about to meet negatively join now
        while True:
            n0, n1, P_c, P_s = _affine_part(cfg, D, F, support)
            joining = []
            for c in cfg.names:
                if c in support:
                    continue
                a, b = intersect(P_c, cfg[c]), intersect(P_s, cfg[c])
                if a + b * v_lo < 0:
                    raise VerificationFailure(f"{c} meets P negatively at chamber start v = {v_lo}")
                if a + b * v_lo == 0 and b < 0:
                    joining.append(c)
            if not joining:
                break
            support += joining
        for name, a, b in zip(support, n0, n1):
            if a + b * v_lo < 0 or (a + b * v_lo == 0 and b < 0):
                raise NonMonotoneSupport(f"{name} would leave the negative part at v = {v_lo}")
        events: dict[Fraction, list[str]] = {}
        for c in cfg.names:
            if c in support:
                continue
            a, b = intersect(P_c, cfg[c]), intersect(P_s, cfg[c])
            if b < 0:
                r = -a / b
                if r > v_lo:
                    events.setdefault(r, []).append(c)
        leaving = [(-a / b, n) for n, a, b in zip(support, n0, n1) if b < 0 and -a / b > v_lo]
        p2 = UniPoly.of(intersect(P_c, P_c), 2 * intersect(P_c, P_s), intersect(P_s, P_s))
        if p2(v_lo) <= 0:
            raise NotPseudoEffective(f"volume vanishes at chamber start v = {v_lo}")
        first_event = min(events) if events else None
        tau = _smallest_root_after(p2, v_lo, first_event)
        v_hi = tau if tau is not None else first_event
        if v_hi is None:
            raise VerificationFailure(f"no threshold found beyond v = {v_lo}")
        for r, name in leaving:
            if r < v_hi:
                raise NonMonotoneSupport(f"{name} leaves the negative part at v = {r}")
        chambers.append(
            VChamber(
                v_lo,
                v_hi,
                P_c,
                P_s,
                tuple((n, a, b) for n, a, b in zip(support, n0, n1)),
            )
        )
        if tau is not None:
            return tuple(chambers)
        support += events[v_hi]
        v_lo = v_hi
    raise VerificationFailure("chamber walk did not terminate")


@dataclass(frozen=True)
class VolumeProfile:
    profile: PiecewisePoly
    tau: Fraction
    chambers: tuple[VChamber, ...]


def _interior_samples(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    return [lo + (hi - lo) * k / (n + 1) for k in range(1, n + 1)]


@lru_cache(maxsize=4096)
def volume_profile(cfg: SurfaceConfig, u, flag: str) -> VolumeProfile:
    """vol(D(u) - v*flag) as a piecewise quadratic in v.

    Each chamber polynomial is rebuilt from four fresh decompositions at
    interior points (three to interpolate, one to verify), and each of those
    decompositions must agree with the chamber's affine data.
    """
    u = as_rational(u)
    D = divisor_at(cfg, u)
    F = cfg[flag]
    chambers = chamber_walk(cfg, u, flag)
    pieces = []
    for ch in chambers:
        samples = []
        for v in _interior_samples(ch.v_lo, ch.v_hi, 4):
            z = decompose(cfg, D - v * F)
            if z.P != ch.P_at(v) or set(z.support) != set(ch.support):
                raise VerificationFailure(
                    f"chamber [{ch.v_lo}, {ch.v_hi}] affine data disagrees with decomposition at v = {v}"
                )
            samples.append((v, z.volume))
        poly = interpolate(samples, 2)
        if poly != ch.p_squared():
            raise VerificationFailure(f"interpolated volume {poly} differs from affine data {ch.p_squared()}")
        pieces.append(Piece(ch.v_lo, ch.v_hi, poly))
    profile = PiecewisePoly(tuple(pieces))
    tau = chambers[-1].v_hi
    if profile(0) != intersect(D, D):
        raise VerificationFailure("volume profile does not start at D^2")
    if profile(tau) != 0:
        raise VerificationFailure("volume profile does not vanish at the threshold")
    for p in profile.pieces:
        d = p.poly.derivative()
        if d(p.lo) > 0 or d(p.hi) > 0:
            raise VerificationFailure(f"volume increases on [{p.lo}, {p.hi}]")
    return VolumeProfile(profile, tau, chambers)


def breakpoints(chambers) -> list[Fraction]:
    return [c.v_lo for c in chambers] + [chambers[-1].v_hi]


def decomposition_violations(cfg: SurfaceConfig, cls: DivClass, z: ZariskiResult) -> list[str]:
    """Every defining property of a Zariski decomposition that ``z`` fails for ``cls``."""
    out = []
    N = cls.zero()
    for name, x in z.N:
        N = N + x * cfg[name]
        if x <= 0:
            out.append(f"coefficient of {name} is {x}")
        if intersect(z.P, cfg[name]) != 0:
            out.append(f"P.{name} = {intersect(z.P, cfg[name])}")
    if z.P + N != cls:
        out.append("P + N differs from the input class")
    for c in cfg.names:
        if intersect(z.P, cfg[c]) < 0:
            out.append(f"P.{c} < 0")
    if z.N and not is_negative_definite(_gram(cfg, z.support)):
        out.append("negative part support is not negative definite")
    return out


def random_effective_class(cfg: SurfaceConfig, rng, max_num: int = 6, max_den: int = 4) -> DivClass:
    """A big class: positive multiple of -K plus a random non-negative combination of negative curves."""
    cls = Fraction(rng.randint(1, max_num), rng.randint(1, max_den)) * cfg.anticanonical
    for name in cfg.names:
        if rng.random() < 0.4:
            cls = cls + Fraction(rng.randint(0, max_num), rng.randint(1, max_den)) * cfg[name]
    return cls
