"""Exact rational arithmetic substrate.

Everything here works over :class:`fractions.Fraction`; no floating point
value is ever produced except by :func:`decimal_approx`, which exists only
for human-readable report output.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class VerificationFailure(ArithmeticError):
    """An exact consistency check failed (surplus sample, continuity, degree bound)."""


class NoSignChange(ValueError):
    pass


class MultipleRoots(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}: all arithmetic must be exact")
    if isinstance(x, bool):
        raise TypeError("refusing bool")
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def decimal_approx(q: Fraction, digits: int = 20) -> str:
    ctx = decimal.Context(prec=digits)
    return str(ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator)))


def is_canonical(q: Fraction) -> bool:
    from math import gcd

    return q.denominator > 0 and gcd(q.numerator, q.denominator) == 1


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    from math import isqrt

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial with rational coefficients in ascending degree."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs) -> UniPoly:
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls((c,))

    @classmethod
    def linear(cls, c0, c1) -> UniPoly:
        return cls((c0, c1))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: UniPoly) -> UniPoly:
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> UniPoly:
        return UniPoly.constant(other) - self

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            k = as_rational(other)
            return UniPoly(tuple(k * c for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, k) -> UniPoly:
        k = as_rational(k)
        return UniPoly(tuple(c / k for c in self.coeffs))

    def __pow__(self, n: int) -> UniPoly:
        out = UniPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 1)
        d = other.degree
        while len(rem) - 1 >= d and rem:
            shift = len(rem) - 1 - d
            factor = rem[-1] / other.lead
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= factor * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(tuple(q)), UniPoly(tuple(rem))

    def derivative(self) -> UniPoly:
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def antiderivative(self) -> UniPoly:
        return UniPoly((Fraction(0),) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def shift(self, a) -> UniPoly:
        """Return q with q(x) = p(x + a)."""
        out = UniPoly()
        x_plus_a = UniPoly.linear(a, 1)
        for c in reversed(self.coeffs):
            out = out * x_plus_a + c
        return out

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


def poly_defint(p: UniPoly, lo, hi) -> Fraction:
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError(f"integration bounds reversed: [{lo}, {hi}]")
    anti = p.antiderivative()
    return anti(hi) - anti(lo)


def interpolate(samples: Sequence[tuple], degree: int) -> UniPoly:
    """Polynomial of degree <= ``degree`` through the first degree+1 samples.

    Every remaining sample must lie on it exactly, otherwise
    :class:`VerificationFailure` is raised. At least one surplus sample is
    required, so the degree bound is always checked rather than assumed.
    """
    pts = [(as_rational(x), as_rational(y)) for x, y in samples]
    if len(pts) < degree + 2:
        raise ValueError(f"need at least {degree + 2} samples for degree {degree}, got {len(pts)}")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be distinct")
    head = pts[: degree + 1]
    # Newton divided differences
    n = len(head)
    coef = [y for _, y in head]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (head[i][0] - head[i - j][0])
    poly = UniPoly.constant(coef[-1])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly.linear(-head[i][0], 1) + coef[i]
    for x, y in pts[degree + 1:]:
        if poly(x) != y:
            raise VerificationFailure(
                f"surplus sample ({x}, {y}) off the degree-{degree} interpolant (value {poly(x)})"
            )
    return poly


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        _, r = seq[-2].divmod(seq[-1])
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(q(lo) for q in seq) - _sign_changes(q(hi) for q in seq)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class RootCertificate:
    """A bracket [lo, hi] holding exactly one real root of ``poly``.

    When the root is rational and hit exactly, ``lo == hi`` and both
    signs are 0.
    """

    poly: UniPoly
    lo: Fraction
    hi: Fraction
    sign_lo: int
    sign_hi: int

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def check(self) -> bool:
        """Re-verify the certificate from scratch by direct evaluation."""
        if self.exact:
            return self.poly(self.lo) == 0
        if _sign(self.poly(self.lo)) != self.sign_lo or _sign(self.poly(self.hi)) != self.sign_hi:
            return False
        return self.sign_lo * self.sign_hi < 0 and count_roots(self.poly, self.lo, self.hi) == 1

    def within(self, lo, hi) -> bool:
        return as_rational(lo) <= self.lo and self.hi <= as_rational(hi)


def isolate_root(p: UniPoly, bracket: tuple, width=Fraction(1, 1000)) -> RootCertificate:
    """Shrink ``bracket`` around the unique root of ``p`` to at most ``width``.

    The search walks the grid of multiples of ``width`` inside the bracket,
    so the returned endpoints are grid points whenever the original bracket
    is wide enough (for width 1/1000 they are three-decimal numbers).
    """
    from math import ceil, floor

    lo, hi = as_rational(bracket[0]), as_rational(bracket[1])
    width = as_rational(width)
    if lo > hi:
        raise ValueError("bracket reversed")
    flo, fhi = p(lo), p(hi)
    if flo == 0 and fhi != 0 and count_roots(p, lo, hi) == 0:
        return RootCertificate(p, lo, lo, 0, 0)
    if fhi == 0 and flo != 0 and count_roots(p, lo, hi) == 1:
        return RootCertificate(p, hi, hi, 0, 0)
    if flo * fhi >= 0:
        raise NoSignChange(f"{p} has no strict sign change on [{lo}, {hi}]")
    n = count_roots(p, lo, hi)
    if n != 1:
        raise MultipleRoots(f"{p} has {n} distinct roots in ({lo}, {hi}]")
    # points are lo, the interior grid multiples k*width, then hi, addressed by index
    k0 = floor(lo / width) + 1
    k1 = ceil(hi / width) - 1
    inner = max(0, k1 - k0 + 1)

    def point(idx: int) -> Fraction:
        if idx == 0:
            return lo
        if idx == inner + 1:
            return hi
        return (k0 + idx - 1) * width

    s_lo = _sign(flo)
    i, j = 0, inner + 1
    while j - i > 1:
        m = (i + j) // 2
        s = _sign(p(point(m)))
        if s == 0:
            return RootCertificate(p, point(m), point(m), 0, 0)
        if s == s_lo:
            i = m
        else:
            j = m
    a, b = point(i), point(j)
    # bracket narrower than one grid cell to begin with: plain bisection
    while b - a > width:
        m = (a + b) / 2
        s = _sign(p(m))
        if s == 0:
            return RootCertificate(p, m, m, 0, 0)
        if s == s_lo:
            a = m
        else:
            b = m
    return RootCertificate(p, a, b, _sign(p(a)), _sign(p(b)))


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    poly: UniPoly


@dataclass(frozen=True)
class PiecewisePoly:
    """Contiguous polynomial pieces on [pieces[0].lo, pieces[-1].hi].

    Continuity at every interior breakpoint is checked on construction
    unless ``check_continuity`` is false.
    """

    pieces: tuple[Piece, ...]
    check_continuity: bool = True

    def __post_init__(self):
        ps = tuple(
            p if isinstance(p, Piece) else Piece(as_rational(p[0]), as_rational(p[1]), p[2])
            for p in self.pieces
        )
        object.__setattr__(self, "pieces", ps)
        if not ps:
            raise ValueError("empty piecewise polynomial")
        for p in ps:
            if not p.lo < p.hi:
                raise ValueError(f"piece with empty interval [{p.lo}, {p.hi}]")
        for a, b in zip(ps, ps[1:]):
            if a.hi != b.lo:
                raise ValueError(f"pieces not contiguous at {a.hi} / {b.lo}")
            if self.check_continuity and a.poly(a.hi) != b.poly(b.lo):
                raise VerificationFailure(
                    f"discontinuity at {a.hi}: {a.poly(a.hi)} vs {b.poly(b.lo)}"
                )

    @property
    def lo(self) -> Fraction:
        return self.pieces[0].lo

    @property
    def hi(self) -> Fraction:
        return self.pieces[-1].hi

    @property
    def breakpoints(self) -> list[Fraction]:
        return [p.lo for p in self.pieces] + [self.hi]

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        if x < self.lo or x > self.hi:
            raise ValueError(f"{x} outside [{self.lo}, {self.hi}]")
        for p in self.pieces:
            if x <= p.hi:
                return p.poly(x)
        raise AssertionError("unreachable")

    @property
    def max_degree(self) -> int:
        return max(p.poly.degree for p in self.pieces)


def pw_integrate(f: PiecewisePoly) -> Fraction:
    return sum((poly_defint(p.poly, p.lo, p.hi) for p in f.pieces), Fraction(0))


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Exact Gauss-Jordan solve of a square system; raises on singular input."""
    n = len(matrix)
    a = [[as_rational(x) for x in row] + [as_rational(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def is_negative_definite(gram: Sequence[Sequence[Fraction]]) -> bool:
    """Sylvester's criterion on -gram, via exact elimination."""
    n = len(gram)
    if n == 0:
        return True
    a = [[-as_rational(x) for x in row] for row in gram]
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True
