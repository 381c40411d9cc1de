"""Transcribed closed forms, delta statements and chamber displays to be checked.

Every entry here is an expectation, never an input to the engine: the
engine recomputes each quantity from the lattice data and the verifier
compares.  Expressions are stored as text in Python syntax over the
variables ``u`` and ``v`` and evaluated exactly by :func:`evaluate`.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction

from .picard import A1, A2, TWO_A1
from .ratcore import UniPoly

# ---------------------------------------------------------------- evaluator

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def evaluate(text: str, **env):
    """Evaluate an arithmetic expression exactly.

    Integer literals become Fractions; names are looked up in ``env`` and
    may be Fractions or UniPolys.  Only + - * / unary minus and integer
    powers are accepted.
    """
    tree = ast.parse(text, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise NameError(f"unknown variable {node.id!r} in {text!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int and exp.value >= 0):
                    raise ValueError(f"only non-negative integer exponents allowed in {text!r}")
                return ev(node.left) ** exp.value
            op = _BINOPS.get(type(node.op))
            if op is None:
                raise ValueError(f"operator {type(node.op).__name__} not allowed in {text!r}")
            return op(ev(node.left), ev(node.right))
        raise ValueError(f"unsupported syntax {ast.dump(node)} in {text!r}")

    return ev(tree)


U = UniPoly.of(0, 1)


def as_poly_in_u(text: str) -> UniPoly:
    out = evaluate(text, u=U)
    return out if isinstance(out, UniPoly) else UniPoly.constant(out)


def as_poly_in_v(text: str, u: Fraction) -> UniPoly:
    out = evaluate(text, u=u, v=U)
    return out if isinstance(out, UniPoly) else UniPoly.constant(out)


# ---------------------------------------------------------------- closed forms

DEN = "15 - 3*u**2"
DEN2 = "2*(15 - 3*u**2)"

S_D = "S_D"
S_W = "S_W"


@dataclass(frozen=True)
class FormulaFixture:
    """A closed form in u, claimed on [lo, hi].

    ``cases`` lists (flag, stratum) pairs the form applies to; for S_D the
    stratum is empty.  ``relation`` is "eq" for a stated value and "le" for
    a stated upper bound.  ``below_sd`` records the accompanying claim that
    the value is at most S_D of the same flag.
    """

    id: str
    kind: str
    quantity: str
    cases: tuple[tuple[str, tuple[str, ...]], ...]
    lo: Fraction
    hi: Fraction
    numerator: str
    denominator: str
    location: str
    relation: str = "eq"
    below_sd: bool = False

    @property
    def num(self) -> UniPoly:
        return as_poly_in_u(self.numerator)

    @property
    def den(self) -> UniPoly:
        return as_poly_in_u(self.denominator)

    def value(self, u) -> Fraction:
        return self.num(u) / self.den(u)

    @property
    def text(self) -> str:
        return f"({self.numerator})/({self.denominator})"


ONE, THREE_HALVES, TWO = Fraction(1), Fraction(3, 2), Fraction(2)


def _fx(id, kind, quantity, cases, interval, num, den, location, **kw):
    lo, hi = interval
    return FormulaFixture(id, kind, quantity, tuple((f, tuple(s)) for f, s in cases),
                          Fraction(lo), Fraction(hi), num, den, location, **kw)


def _e4_family(kind, prefix, images):
    """Closed forms for the flag on the (-2)-curve meeting E5 (and its symmetric images)."""
    main = images[0]
    loc = f"{kind} flag {main['flag']}"
    out = [
        _fx(f"{prefix}.sd.{main['flag']}", kind, S_D, [(m["flag"], ()) for m in images], (1, 2),
            "16 + 3*u - 9*u**2 + 2*u**3", DEN, f"{loc}: S_D"),
        _fx(f"{prefix}.sw.{main['flag']}.generic", kind, S_W, [(m["flag"], (m["flag"],)) for m in images], (1, 2),
            "9 + 6*u - 9*u**2 + 2*u**3", DEN, f"{loc}: S(W;P), P general on the flag", below_sd=True),
        _fx(f"{prefix}.sw.{main['flag']}.{main['tail']}", kind, S_W,
            [(m["flag"], (m["flag"], m["tail"])) for m in images], (1, 2),
            "11 - u**3", DEN, f"{loc}: S(W;P), P = {main['flag']}∩{main['tail']}"),
    ]
    return out


A1_FIXTURES = [
    *_e4_family(A1, "a1", [{"flag": "E4", "tail": "E5"}]),
    _fx("a1.sw.E4.lines", A1, S_W, [("E4", ("E4", "L14")), ("E4", ("E4", "L24")), ("E4", ("E4", "L34"))], (1, 2),
        "13 + 3*u**3 - 12*u**2 + 6*u", DEN, "A1 flag E4: S(W;P), P on E4 and a line L14/L24/L34", below_sd=True),
    _fx("a1.sd.E5", A1, S_D, [("E5", ())], (1, 2), "11 - u**3", DEN, "A1 flag E5: S_D"),
    _fx("a1.sw.E5.generic", A1, S_W, [("E5", ("E5",))], (1, 2),
        "21 + 6*u - 18*u**2 + 5*u**3", DEN2, "A1 flag E5: S(W;P), P general on E5", below_sd=True),
    _fx("a1.sw.E5.C2", A1, S_W, [("E5", ("E5", "C2"))], (1, 2),
        "45 - 30*u + 2*u**3", DEN2, "A1 flag E5: S(W;P), P = E5∩C2", below_sd=True),
    _fx("a1.sw.E5.L45", A1, S_W, [("E5", ("E5", "L45"))], (1, 2),
        "26 - 12*u**2 + 3*u**3", DEN2, "A1 flag E5: S(W;P), P = E5∩L45", below_sd=True),
]

# the three lines through E4 are permuted by relabelling points 1, 2, 3
_A1_LINE_IMAGES = [("L14", "E1", "L23"), ("L24", "E2", "L13"), ("L34", "E3", "L12")]
_2A1_LINE_IMAGES = [("L14", "E1", "L23"), ("L12", "E1", "L45")]


def _line_family(kind, prefix, images):
    loc = f"{kind} flag {images[0][0]}"
    lo_cases = lambda f: [(c, f(c, e, o)) for c, e, o in images]  # noqa: E731
    return [
        _fx(f"{prefix}.sd.L14.low", kind, S_D, lo_cases(lambda c, e, o: ()), (1, "3/2"),
            "3*u**3 - 12*u**2 + 6*u + 13", DEN, f"{loc}, u in [1,3/2]: S_D"),
        _fx(f"{prefix}.sw.L14.generic.low", kind, S_W, lo_cases(lambda c, e, o: (c,)), (1, "3/2"),
            "21 - u**3 - 6*u", DEN2, f"{loc}, u in [1,3/2]: S(W;P), P general on the flag", below_sd=True),
        _fx(f"{prefix}.sw.L14.E1.low", kind, S_W, lo_cases(lambda c, e, o: (c, e)), (1, "3/2"),
            "19 - 2*u**3", DEN2, f"{loc}, u in [1,3/2]: S(W;P), P = flag∩E1"),
        _fx(f"{prefix}.sw.L14.L23.low", kind, S_W, lo_cases(lambda c, e, o: (c, o)), (1, "3/2"),
            "26 - 12*u**2 + 3*u**3", DEN2, f"{loc}, u in [1,3/2]: S(W;P), P = flag∩{images[0][2]}", below_sd=True),
        _fx(f"{prefix}.sd.L14.high", kind, S_D, lo_cases(lambda c, e, o: ()), ("3/2", 2),
            "3*u**3 - 12*u**2 + 6*u + 13", DEN, f"{loc}, u in [3/2,2]: S_D"),
        _fx(f"{prefix}.sw.L14.generic.high", kind, S_W, lo_cases(lambda c, e, o: (c,)), ("3/2", 2),
            "7*u**3 - 36*u**2 + 48*u - 6", DEN2, f"{loc}, u in [3/2,2]: S(W;P), P general on the flag",
            below_sd=True),
        _fx(f"{prefix}.sw.L14.E1.high", kind, S_W, lo_cases(lambda c, e, o: (c, e)), ("3/2", 2),
            "3*u**3 - 18*u**2 + 27*u - 4", DEN, f"{loc}, u in [3/2,2]: S(W;P), P = flag∩E1"),
        _fx(f"{prefix}.sw.L14.L23.high", kind, S_W, lo_cases(lambda c, e, o: (c, o)), ("3/2", 2),
            "3*u**3 - 12*u**2 + 26", DEN2, f"{loc}, u in [3/2,2]: S(W;P), P = flag∩{images[0][2]}",
            below_sd=True),
    ]


A1_FIXTURES += _line_family(A1, "a1", _A1_LINE_IMAGES)

TWO_A1_FIXTURES = [
    *_e4_family(TWO_A1, "2a1", [{"flag": "E4", "tail": "E5"}, {"flag": "E2", "tail": "E3"}]),
    _fx("2a1.sw.E4.L24", TWO_A1, S_W, [("E4", ("E4", "L24")), ("E2", ("E2", "L24"))], (1, 2),
        "2*u**3 - 6*u**2 + 8", DEN, "TwoA1 flag E4: S(W;P), P = E4∩L24", below_sd=True),
    _fx("2a1.sw.E4.L14", TWO_A1, S_W, [("E4", ("E4", "L14")), ("E2", ("E2", "L12"))], (1, 2),
        "2*u**3 - 6*u**2 + 8", DEN, "TwoA1 flag E4: S(W;P), P = E4∩L14 (stated jointly with L24)",
        relation="le", below_sd=True),
    _fx("2a1.sd.E5", TWO_A1, S_D, [("E5", ()), ("E3", ())], (1, 2), "11 - u**3", DEN, "TwoA1 flag E5: S_D"),
    _fx("2a1.sw.E5.generic", TWO_A1, S_W, [("E5", ("E5",)), ("E3", ("E3",))], (1, 2),
        "21 + 6*u - 18*u**2 + 5*u**3", DEN2, "TwoA1 flag E5: S(W;P), P general on E5", below_sd=True),
    _fx("2a1.sw.E5.C2", TWO_A1, S_W, [("E5", ("E5", "C2")), ("E3", ("E3", "C2"))], (1, 2),
        "45 - 30*u + 2*u**3", DEN2, "TwoA1 flag E5: S(W;P), P = E5∩C2", below_sd=True),
    _fx("2a1.sw.E5.L45", TWO_A1, S_W, [("E5", ("E5", "L45")), ("E3", ("E3", "L23"))], (1, 2),
        "26 - 12*u**2 + 3*u**3", DEN2, "TwoA1 flag E5: S(W;P), P = E5∩L45", below_sd=True),
    _fx("2a1.sd.L24", TWO_A1, S_D, [("L24", ())], (1, 2),
        "4*u**3 - 15*u**2 + 6*u + 17", DEN, "TwoA1 flag L24: S_D"),
    _fx("2a1.sw.L24.generic", TWO_A1, S_W, [("L24", ("L24",))], (1, 2),
        "u**3 - 6*u**2 + 6*u + 5", DEN, "TwoA1 flag L24: S(W;P), P general on L24", below_sd=True),
    *_line_family(TWO_A1, "2a1", _2A1_LINE_IMAGES),
]

A2_FIXTURES = [
    _fx("a2.sd.E4", A2, S_D, [("E4", ())], (1, 2), "19 + u**3 - 6*u**2", DEN, "A2 flag E4: S_D"),
    _fx("a2.sw.E4.generic", A2, S_W, [("E4", ("E4",))], (1, 2),
        "21 + 6*u - 18*u**2 + 5*u**3", DEN2, "A2 flag E4: S(W;P), P general on E4", below_sd=True),
]

FORMULA_FIXTURES = {A1: tuple(A1_FIXTURES), TWO_A1: tuple(TWO_A1_FIXTURES), A2: tuple(A2_FIXTURES)}


# ---------------------------------------------------------------- delta statements


@dataclass(frozen=True)
class DeltaClaim:
    """A stated value ("eq") or lower bound ("ge") or upper bound ("le") for delta_P(T, D).

    Interval endpoints may be the names "a" or "b" of the certified roots.
    """

    id: str
    kind: str
    strata: tuple[tuple[str, ...], ...]
    lo: str
    hi: str
    relation: str
    expression: str
    location: str


def _dc(id, kind, strata, lo, hi, relation, expr, location):
    return DeltaClaim(id, kind, tuple(tuple(s) for s in strata), str(lo), str(hi), relation, expr, location)


B1 = "(15 - 3*u**2)/(16 + 3*u - 9*u**2 + 2*u**3)"
B2 = "(15 - 3*u**2)/(11 - u**3)"
BL = "(15 - 3*u**2)/(3*u**3 - 12*u**2 + 6*u + 13)"


def _line_meets_e1_claims(kind, prefix, pairs, loc):
    return [
        _dc(f"{prefix}.ge.{pairs[0][0]}E1.1", kind, pairs, 1, "b", "ge", BL, loc),
        _dc(f"{prefix}.ge.{pairs[0][0]}E1.2", kind, pairs, "b", "3/2", "ge", "2*(15 - 3*u**2)/(19 - 2*u**3)", loc),
        _dc(f"{prefix}.ge.{pairs[0][0]}E1.3", kind, pairs, "3/2", 2, "ge",
            "(15 - 3*u**2)/(3*u**3 - 18*u**2 + 27*u - 4)", loc),
    ]


DELTA_CLAIMS = {
    A1: (
        _dc("a1.eq.E4", A1, [("E4",), ("E4", "L14"), ("E4", "L24"), ("E4", "L34")], 1, 2, "eq", B1,
            "A1 lemma: P on E4 off E5"),
        _dc("a1.eq.E5", A1, [("E5",), ("E5", "C2"), ("E5", "L45")], 1, 2, "eq", B2, "A1 lemma: P on E5 off E4"),
        _dc("a1.eq.L14", A1, [("L14",), ("L14", "L23")], 1, 2, "eq", BL, "A1 lemma: P on L14 off E1, E4, E5"),
        _dc("a1.ge.E4E5.lemma", A1, [("E4", "E5")], 1, "a", "ge", BL,
            "A1 lemma statement: P = E4∩E5, u in [1,a]"),
        _dc("a1.ge.E4E5.proof", A1, [("E4", "E5")], 1, "a", "ge", B1,
            "A1 flag E4 conclusion: P = E4∩E5, u in [1,a]"),
        _dc("a1.ge.E4E5.2", A1, [("E4", "E5")], "a", 2, "ge", B2, "A1 lemma: P = E4∩E5, u in [a,2]"),
        *_line_meets_e1_claims(A1, "a1", [("L14", "E1")], "A1 lemma: P = L14∩E1"),
    ),
    TWO_A1: (
        _dc("2a1.eq.E4", TWO_A1, [("E4",), ("E2",), ("E4", "L24"), ("E4", "L14"), ("E2", "L24"), ("E2", "L12")],
            1, 2, "eq", B1, "TwoA1 lemma: P on E2 or E4 off E3, E5"),
        _dc("2a1.eq.E5", TWO_A1, [("E5",), ("E3",), ("E5", "C2"), ("E5", "L45"), ("E3", "C2"), ("E3", "L23")],
            1, 2, "eq", B2, "TwoA1 lemma: P on E3 or E5 off E2, E4"),
        _dc("2a1.eq.L24", TWO_A1, [("L24",)], 1, 2, "eq", "(15 - 3*u**2)/(u**3 - 6*u**2 + 6*u + 5)",
            "TwoA1 lemma and flag L24 conclusion: P on L24 off E2, E4"),
        _dc("2a1.eq.L14", TWO_A1, [("L14",), ("L14", "L23"), ("L12",), ("L12", "L45")], 1, 2, "eq", BL,
            "TwoA1 lemma: P on L14 off E1, E4, E5"),
        _dc("2a1.ge.EE.1", TWO_A1, [("E2", "E3"), ("E4", "E5")], 1, "a", "ge", B1,
            "TwoA1 lemma: P = E2∩E3 or E4∩E5, u in [1,a]"),
        _dc("2a1.ge.EE.2", TWO_A1, [("E2", "E3"), ("E4", "E5")], "a", 2, "ge", B2,
            "TwoA1 lemma: P = E2∩E3 or E4∩E5, u in [a,2]"),
        *_line_meets_e1_claims(TWO_A1, "2a1", [("L14", "E1"), ("L12", "E1")], "TwoA1 lemma: P = L14∩E1"),
    ),
    A2: (
        _dc("a2.eq.E4", A2, [("E4",)], 1, 2, "eq", "(u**3 - 6*u**2 + 19)/(15 - 3*u**2)",
            "A2 delta claim: P on E4 off L34, E5 (value as displayed)"),
        _dc("a2.le.E4", A2, [("E4",)], 1, 2, "le", "(15 - 3*u**2)/(19 + u**3 - 6*u**2)",
            "A2 delta claim: upper bound from the flag E4"),
    ),
}

# stated curve lists of the two "contained in" corollaries, as printed
COROLLARY_CURVES = {
    A1: ("L12", "L24", "L34", "E4", "E5"),
    TWO_A1: ("L12", "L14", "L24", "E2", "E3", "E4", "E4"),
}
COROLLARY_BRANCHES = (B1, B2)


# ---------------------------------------------------------------- chamber displays


@dataclass(frozen=True)
class DisplayPiece:
    v_lo: str
    v_hi: str
    negative: tuple[tuple[str, str], ...]
    p_squared: str
    p_dot_flag: str


@dataclass(frozen=True)
class ChamberDisplay:
    """A displayed chamber table for one flag on a u-interval.

    ``h`` maps a stratum (tuple of curve names) to the displayed h pieces,
    aligned with ``pieces``; ``h_relation`` marks strata shown only as an
    upper bound.
    """

    id: str
    kind: str
    flag: str
    lo: Fraction
    hi: Fraction
    pieces: tuple[DisplayPiece, ...]
    h: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    location: str
    h_relation: tuple[tuple[tuple[str, ...], str], ...] = ()

    def relation_for(self, stratum) -> str:
        return dict(self.h_relation).get(tuple(stratum), "eq")


def _dp(v_lo, v_hi, neg, p2, pc):
    return DisplayPiece(v_lo, v_hi, tuple(neg.items()), p2, pc)


def _cd(id, kind, flag, interval, pieces, h, location, h_relation=()):
    lo, hi = interval
    return ChamberDisplay(id, kind, flag, Fraction(lo), Fraction(hi), tuple(pieces),
                          tuple((tuple(k), tuple(v)) for k, v in h.items()), location, tuple(h_relation))


_E4_HEAD = [
    _dp("0", "2-u", {}, "5 - u**2 - 2*v**2", "2*v"),
    _dp("2-u", "1", {"E5": "u+v-2"}, "9 + 2*u*v - 4*u - 4*v - v**2", "2-u+v"),
]
_E4_H_GENERIC = ("2*v**2", "(2-u+v)**2/2", "(5-u-2*v)**2/2")
_E4_H_TAIL = ("2*v**2", "(2-u+v)*(u+3*v-2)/2", "(u+1)*(5-u-2*v)/2")

_E5_PIECES = [
    _dp("0", "1", {"E4": "v/2"}, "5 - 4*v + 2*u*v - u**2 - v**2/2", "2-u+v/2"),
    _dp("1", "u", {"E4": "v/2", "L45": "v-1"}, "6 - 6*v + v**2/2 + 2*u*v - u**2", "3-u-v/2"),
    _dp("u", "2", {"E4": "v/2", "L45": "v-1", "C2": "v-u"}, "3*(2-v)**2/2", "3-3*v/2"),
]
_E5_H = {
    ("E5",): ("(2-u+v/2)**2/2", "(3-u-v/2)**2/2", "(3-3*v/2)**2/2"),
    ("E5", "C2"): ("(2-u+v/2)**2/2", "(3-u-v/2)**2/2", "3*(2-v)*(6-4*u+v)/8"),
    ("E5", "L45"): ("(2-u+v/2)**2/2", "(6-2*u-v)*(2-2*u+3*v)/8", "3*(2-v)*(v+2)/8"),
}

_L14_LOW_PIECES = [
    _dp("0", "2-u", {"E4": "v/2"}, "5 - 2*v - v**2/2 - u**2", "v/2 + 1"),
    _dp("2-u", "1", {"E4": "v/2", "E1": "u+v-2"}, "9 - 4*u - 6*v + v**2/2 + 2*u*v", "3 - u - v/2"),
    _dp("1", "4-2*u", {"E4": "v/2", "E1": "u+v-2", "L23": "v-1"}, "(v-2)*(3*v+4*u-10)/2", "4 - u - 3*v/2"),
    _dp("4-2*u", "3-u", {"E1": "u+v-2", "E4": "u+v-2", "L23": "v-1", "E5": "2*u+v-4"},
        "2*(u+v-3)**2", "2*(3-u-v)"),
]
_L14_LOW_H = {
    ("L14",): ("(v/2+1)**2/2", "(3-u-v/2)**2/2", "(4-u-3*v/2)**2/2", "2*(3-u-v)**2"),
    ("L14", "E1"): ("(v/2+1)**2/2", "(6-2*u-v)*(2*u+3*v-2)/8", "(8-2*u-3*v)*(2*u+v)/8", "(3-u-v)"),
    ("L14", "L23"): ("(v/2+1)**2/2", "(3-u-v/2)**2/2", "(8-2*u-3*v)*(4-2*u+v)/8", "2*(2-u)*(3-u-v)"),
}
_L14_HIGH_PIECES = [
    _dp("0", "2-u", {"E4": "v/2"}, "5 - 2*v - v**2/2 - u**2", "1 + v/2"),
    _dp("2-u", "4-2*u", {"E4": "v/2", "E1": "u+v-2"}, "9 - 4*u - 6*v + v**2/2 + 2*u*v", "3 - u - v/2"),
    _dp("4-2*u", "1", {"E1": "u+v-2", "E4": "u+v-2", "E5": "2*u+v-4"},
        "2*u**2 + 4*u*v + v**2 - 12*u - 10*v + 17", "5 - 2*u - v"),
    _dp("1", "3-u", {"E1": "u+v-2", "E4": "u+v-2", "L23": "v-1", "E5": "2*u+v-4"}, "2*(u+v-3)**2", "2*(3-u-v)"),
]
_L14_HIGH_H = {
    ("L14",): ("(1+v/2)**2/2", "(3-u-v/2)**2/2", "(5-2*u-v)**2/2", "2*(3-u-v)**2"),
    ("L14", "E1"): ("(1+v/2)**2/2", "(6-2*u-v)*(2*u+3*v-2)/8", "(v+1)*(5-2*u-v)/2", "2*(3-u-v)"),
    ("L14", "L23"): ("(1+v/2)**2/2", "(3-u-v/2)**2/2", "(5-2*u-v)**2/2", "2*(2-u)*(3-u-v)"),
}

CHAMBER_DISPLAYS = {
    A1: (
        _cd("a1.ch.E4", A1, "E4", (1, 2),
            _E4_HEAD + [_dp("1", "3-u", {"E5": "u+v-2", "L14": "v-1", "L24": "v-1", "L34": "v-1"},
                            "2*(2-v)*(3-u-v)", "5-u-2*v")],
            {("E4",): _E4_H_GENERIC, ("E4", "E5"): _E4_H_TAIL,
             ("E4", "L14"): ("2*v**2", "(2-u+v)**2/2", "(3-u)*(5-u-2*v)/2")},
            "A1 flag E4 chamber table"),
        _cd("a1.ch.E5", A1, "E5", (1, 2), _E5_PIECES, _E5_H, "A1 flag E5 chamber table"),
        _cd("a1.ch.L14.low", A1, "L14", (1, "3/2"), _L14_LOW_PIECES, _L14_LOW_H,
            "A1 flag L14 chamber table, u in [1,3/2]"),
        _cd("a1.ch.L14.high", A1, "L14", ("3/2", 2), _L14_HIGH_PIECES, _L14_HIGH_H,
            "A1 flag L14 chamber table, u in [3/2,2]"),
    ),
    TWO_A1: (
        _cd("2a1.ch.E4", TWO_A1, "E4", (1, 2),
            _E4_HEAD + [_dp("1", "3-u", {"E5": "u+v-2", "L14": "v-1", "L24": "2*(v-1)", "E2": "v-1"},
                            "2*(2-v)*(3-u-v)", "5-u-2*v")],
            {("E4",): _E4_H_GENERIC, ("E4", "E5"): _E4_H_TAIL,
             ("E4", "L24"): ("2*v**2", "(2-u+v)**2/2", "(5-u-2*v)*(1-u+2*v)/2"),
             ("E4", "L14"): ("2*v**2", "(2-u+v)**2/2", "(5-u-2*v)*(1-u+2*v)/2")},
            "TwoA1 flag E4 chamber table", h_relation=[(("E4", "L14"), "le")]),
        _cd("2a1.ch.E5", TWO_A1, "E5", (1, 2), _E5_PIECES, _E5_H, "TwoA1 flag E5 chamber table"),
        _cd("2a1.ch.L24", TWO_A1, "L24", (1, 2),
            [_dp("0", "4-2*u", {"E2": "v/2", "E4": "v/2"}, "-u**2 - 2*v + 5", "1"),
             _dp("4-2*u", "3-u", {"E2": "u+v-2", "E4": "u+v-2", "E3": "2*u+v-4", "E5": "2*u+v-4"},
                 "(u+v-3)*(3*u+v-7)", "5-2*u-v")],
            {("L24",): ("1/2", "(5-2*u-v)**2/2")},
            "TwoA1 flag L24 chamber table"),
        _cd("2a1.ch.L14.low", TWO_A1, "L14", (1, "3/2"), _L14_LOW_PIECES, _L14_LOW_H,
            "TwoA1 flag L14 chamber table, u in [1,3/2]"),
        _cd("2a1.ch.L14.high", TWO_A1, "L14", ("3/2", 2), _L14_HIGH_PIECES, _L14_HIGH_H,
            "TwoA1 flag L14 chamber table, u in [3/2,2]"),
    ),
    A2: (
        _cd("a2.ch.E4", A2, "E4", (1, 2),
            [_dp("0", "2-u", {"E3": "v/2"}, "5 - u**2 - 3*v**2/2", "3*v/2"),
             _dp("2-u", "1", {"E3": "v/2", "E5": "u+v-2"}, "9 - 4*u - 4*v + 2*u*v - v**2/2", "2-u+v/2"),
             _dp("1", "2", {"E3": "v/2", "E5": "u+v-2", "L34": "v-1"}, "(v-2)*(v+4*u-10)/2", "3-u-v/2")],
            {("E4",): ("9*v**2/8", "(2-u+v/2)**2/2", "(3-u-v/2)**2/2")},
            "A2 flag E4 chamber table"),
    ),
}

# the flag E5 S_D display prints the last integrand over 3 while the table has 2
E5_LAST_INTEGRAND_DENOMINATORS = (Fraction(2), Fraction(3))
