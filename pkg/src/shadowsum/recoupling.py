"""Closed colored-graph evaluations: Delta, theta, tet, 6j-symbols, fusion
and twist coefficients, and Omega-colored unknots.

All graph values are defined as brackets of explicit planar diagrams and
computed by the diagram engine in `tl`, then memoized.  The quantum-integer
closed form is used only for Delta, where it is cheap to state and is
cross-checked against the projector trace in the test suite.  A triple of
colors is admissible when each color is at most the sum of the other two
and the total is even; it is q-admissible when additionally the total is
at most 2(r-2).  Vertices with non-q-admissible triples make a closed
graph evaluate to zero, which is how the guards below short-circuit.

Values of closed graphs with trivalent vertices are exact quotients of
Laurent polynomials (already theta of colors (2,2,2)), so theta and tet
return LaurentFraction.  Memo keys include the arithmetic context, letting
several roots coexist in one process.
"""

from fractions import Fraction
from typing import NamedTuple

from .arith import (
    ComplexValue,
    LaurentFraction,
    LaurentScalar,
    RootContext,
    eta,
    quantum_int,
)
from .tl import (
    Budget,
    FramedGraphDiagram,
    GraphVertex,
    Strand,
    bracket,
    half_twist_monomial,
)

__all__ = [
    "ColorTriple",
    "TetLabels",
    "is_admissible",
    "is_q_admissible",
    "delta",
    "theta",
    "tet",
    "sixj",
    "half_twist_coeff",
    "omega_unknot",
    "fusion2_coeff",
    "fusion3_coeff",
]


class ColorTriple(NamedTuple):
    a: int
    b: int
    c: int


class TetLabels(NamedTuple):
    """Colors on the six edges of the tetrahedral graph, with vertex
    triples (a,b,c), (a,e,f), (b,f,d), (c,e,d)."""

    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def triples(self) -> tuple[ColorTriple, ...]:
        return (
            ColorTriple(self.a, self.b, self.c),
            ColorTriple(self.a, self.e, self.f),
            ColorTriple(self.b, self.f, self.d),
            ColorTriple(self.c, self.e, self.d),
        )


def is_admissible(t: ColorTriple) -> bool:
    a, b, c = t
    if a < 0 or b < 0 or c < 0:
        return False
    return (a + b + c) % 2 == 0 and a <= b + c and b <= a + c and c <= a + b


def is_q_admissible(ctx: RootContext, t: ColorTriple) -> bool:
    return is_admissible(t) and sum(t) <= 2 * (ctx.r - 2)


_delta_cache: dict[int, LaurentScalar] = {}
_theta_cache: dict[tuple, LaurentFraction] = {}
_tet_cache: dict[tuple, LaurentFraction] = {}


def delta(ctx: RootContext, n: int) -> LaurentScalar:
    """Value of the 0-framed unknot colored n: (-1)^n [n+1].

    Args:
        ctx: arithmetic context, bounding the range.
        n: color, 0 <= n <= r-1.

    Returns:
        The exact Laurent polynomial; it vanishes under numeric
        evaluation exactly at n = r-1.

    Raises:
        ValueError: n out of range.
    """
    if not 0 <= n <= ctx.r - 1:
        raise ValueError(f"color {n} outside 0..{ctx.r - 1}")
    got = _delta_cache.get(n)
    if got is None:
        sign = -1 if n % 2 else 1
        got = quantum_int(n + 1) * LaurentScalar.integer(sign)
        _delta_cache[n] = got
    return got


def _theta_diagram(a: int, b: int, c: int) -> FramedGraphDiagram:
    return FramedGraphDiagram(
        strands=[
            Strand("ea", ("a",), color=a),
            Strand("eb", ("b",), color=b),
            Strand("ec", ("c",), color=c),
        ],
        vertices=[
            GraphVertex("v1", ("a", "c", "b")),
            GraphVertex("v2", ("a", "b", "c")),
        ],
    )


def theta(ctx: RootContext, t: ColorTriple) -> LaurentFraction:
    """Bracket of the planar theta graph with edge colors t.

    Args:
        ctx: arithmetic context.
        t: the three edge colors (any order; the value is symmetric).

    Returns:
        The exact value, or the zero fraction if t is not q-admissible.
    """
    t = ColorTriple(*t)
    if not is_q_admissible(ctx, t):
        return LaurentFraction.zero()
    key = (ctx, tuple(sorted(t)))
    got = _theta_cache.get(key)
    if got is None:
        a, b, c = key[1]
        got = bracket(ctx, _theta_diagram(a, b, c), budget=Budget(0, 64))
        _theta_cache[key] = got
    return got


def _tet_diagram(L: TetLabels) -> FramedGraphDiagram:
    # K4 drawn as a triangle around a central vertex: v1 top, v2 bottom
    # left, v3 bottom right, v4 center.  Edge strands: a=v1v2, b=v1v3,
    # c=v1v4, d=v3v4, e=v2v4, f=v2v3; rotations read off the drawing.
    return FramedGraphDiagram(
        strands=[
            Strand("ea", ("a",), color=L.a),
            Strand("eb", ("b",), color=L.b),
            Strand("ec", ("c",), color=L.c),
            Strand("ed", ("d",), color=L.d),
            Strand("ee", ("e",), color=L.e),
            Strand("ef", ("f",), color=L.f),
        ],
        vertices=[
            GraphVertex("v1", ("a", "c", "b")),
            GraphVertex("v2", ("f", "e", "a")),
            GraphVertex("v3", ("b", "d", "f")),
            GraphVertex("v4", ("c", "e", "d")),
        ],
    )


def tet(ctx: RootContext, L: TetLabels) -> LaurentFraction:
    """Bracket of the planar tetrahedral graph with edge colors L.

    Args:
        ctx: arithmetic context.
        L: the six edge colors in the TetLabels convention.

    Returns:
        The exact value, or the zero fraction if any vertex triple is
        not q-admissible.
    """
    L = TetLabels(*L)
    if not all(is_q_admissible(ctx, t) for t in L.triples()):
        return LaurentFraction.zero()
    key = (ctx, tuple(L))
    got = _tet_cache.get(key)
    if got is None:
        got = bracket(ctx, _tet_diagram(L), budget=Budget(0, 64))
        _tet_cache[key] = got
    return got


def sixj(
    ctx: RootContext, a: int, b: int, c: int, d: int, i: int, j: int
) -> ComplexValue:
    """The 6j-symbol {a b i; c d j}: Delta_i tet / (theta_adi theta_cbi).

    The i channel pairs (a,d) and (c,b); the j channel pairs (a,b) and
    (c,d).  The tetrahedral labels are assembled so that those four
    triples sit at the four vertices.

    Returns:
        The numeric value at the root; zero whenever the tet vanishes
        with nonvanishing thetas.

    Raises:
        ArithmeticError: both the tet and a theta vanish (0/0), which
            happens exactly when an i-channel triple is not q-admissible.
    """
    th1 = theta(ctx, ColorTriple(a, d, i))
    th2 = theta(ctx, ColorTriple(c, b, i))
    top = tet(ctx, TetLabels(a, b, j, c, d, i))
    if th1.is_zero() or th2.is_zero():
        if top.is_zero():
            raise ArithmeticError(
                f"sixj {{{a} {b} {i}; {c} {d} {j}}} is indeterminate: "
                "tet and theta both vanish"
            )
        raise ArithmeticError(
            f"sixj {{{a} {b} {i}; {c} {d} {j}}}: theta vanishes under a "
            "nonzero tet"
        )
    if top.is_zero():
        return ComplexValue(0.0)
    num = delta(ctx, i).evaluate(ctx) * top.evaluate(ctx)
    return ComplexValue(num / (th1.evaluate(ctx) * th2.evaluate(ctx)))


def half_twist_coeff(ctx: RootContext, n: int, k) -> LaurentScalar:
    """Coefficient of k positive twists on a color-n edge, k half-integral.

    Args:
        ctx: arithmetic context.
        n: edge color, 0 <= n <= r-2.
        k: twist count as int, Fraction, or an exact float multiple of 1/2.

    Returns:
        ((sqrt(-1))^n A^{(n^2+2n)/2})^{2k} as an exact monomial.

    Raises:
        ValueError: color out of range or k not a half-integer.
    """
    if not 0 <= n <= ctx.r - 2:
        raise ValueError(f"color {n} outside 0..{ctx.r - 2}")
    two_k = Fraction(k) * 2
    if two_k.denominator != 1:
        raise ValueError(f"twist count {k} is not a half-integer")
    return half_twist_monomial(ctx, n, int(two_k))


def omega_unknot(ctx: RootContext, framing: int) -> ComplexValue:
    """Evaluation of an Omega-colored unknot with the given framing.

    Omega is eta times the Delta-weighted sum of colored cores, so the
    value is eta * sum_n Delta_n^2 * twist_n^framing.  Framing 0 gives
    eta^{-1}, framing +1 the constant kappa, framing -1 its inverse.
    """
    total = 0j
    for n in range(ctx.r - 1):
        dn = delta(ctx, n).evaluate(ctx)
        twist = half_twist_monomial(ctx, n, 2 * framing).evaluate(ctx)
        total += dn * dn * twist
    return ComplexValue(eta(ctx).value * total)


def fusion2_coeff(ctx: RootContext, a: int, b: int) -> ComplexValue:
    """Coefficient of the 2-strand fusion: eta^{-1}/Delta_a if the two
    strand colors agree, else zero."""
    if a != b:
        return ComplexValue(0.0)
    dn = delta(ctx, a).evaluate(ctx)
    if abs(dn) < 1e-14:
        raise ArithmeticError(f"fusion through a vanishing circle, color {a}")
    return ComplexValue(1.0 / (eta(ctx).value * dn))


def fusion3_coeff(ctx: RootContext, t: ColorTriple) -> ComplexValue:
    """Coefficient of the 3-strand fusion: eta^{-1}/theta(t) if t is
    q-admissible, else zero."""
    t = ColorTriple(*t)
    if not is_q_admissible(ctx, t):
        return ComplexValue(0.0)
    th = theta(ctx, t).evaluate(ctx)
    if abs(th) < 1e-14:
        raise ArithmeticError(f"fusion through a vanishing theta {tuple(t)}")
    return ComplexValue(1.0 / (eta(ctx).value * th))
