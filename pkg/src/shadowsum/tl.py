"""Temperley-Lieb diagram algebra and exact Kauffman bracket evaluation.

Skein conventions, fixed once for the whole package:

  * crossing resolution:  X = A )(  +  A^{-1} ><  (the A-smoothing opens
    the regions swept counterclockwise from the over strand);
  * a closed circle contributes  -A^2 - A^{-2};
  * a positive half twist of framing on a color-n component multiplies
    the bracket by  (sqrt-1)^n A^{(n^2+2n)/2}, realized exactly as the
    monomial  sigma^n s^{2rn + n^2 + 2n}  in the arithmetic layer.

With these choices a positive kink (writhe +1) on a plain strand equals
-A^3 times the kink-free strand.  The opposite chirality is available
through the `mirror` flag on bracket evaluation; it is never chosen
silently.

Colored diagrams are evaluated by cabling: each color-n strand becomes n
parallels through one Jones-Wenzl insertion per strand, trivalent sites
become the banded wirings determined by the admissibility data, and the
resulting web is contracted as an abstract tensor network whose states
are planar matchings with exact Laurent coefficients.  Merging equal
partial matchings as contraction proceeds is what keeps cabled diagrams
tractable; it plays the role of memoization on the canonical form of the
remaining tangle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .arith import LaurentFraction, LaurentScalar, RootContext, quantum_int
from .arith import _poly_gcd

__all__ = [
    "TLDiagram",
    "TLElement",
    "FramedGraphDiagram",
    "Strand",
    "Crossing",
    "GraphVertex",
    "Budget",
    "BudgetExceeded",
    "tl_compose",
    "tl_trace",
    "jones_wenzl",
    "bracket",
    "half_twist_monomial",
]

LOOP = LaurentScalar({4: -1, -4: -1})  # value of one closed circle


class BudgetExceeded(Exception):
    """The diagram is too large for the configured brute-force budget."""


@dataclass(frozen=True)
class Budget:
    """Caps on brute-force evaluation size.

    Args:
        max_crossings: largest number of elementary (wire-level) crossings
            the expanded diagram may contain.
        max_strands: widest planar-matching frontier allowed during
            contraction, counted in strands (pairs of wire ends).
    """

    max_crossings: int = 24
    max_strands: int = 14


# --------------------------------------------------------------------------
# Temperley-Lieb diagrams and elements
# --------------------------------------------------------------------------
#
# Boundary points of a TL_n diagram are numbered 0..2n-1 in counterclockwise
# boundary order: bottom points 0..n-1 left to right, then top points, so the
# j-th top point from the LEFT gets index 2n-1-j.  Planarity is then exactly
# non-interleaving of the pairing in this circular numbering.


def _top_index(n: int, j: int) -> int:
    return 2 * n - 1 - j


class TLDiagram:
    """A planar perfect matching of the 2n boundary points of a square,
    plus a count of closed loops absorbed during composition."""

    __slots__ = ("n", "pairs", "loops")

    def __init__(self, n, pairs, loops=0):
        seen = set()
        canon = []
        for a, b in pairs:
            if a == b:
                raise ValueError("degenerate pair in TL diagram")
            canon.append((a, b) if a < b else (b, a))
            seen.update((a, b))
        if seen != set(range(2 * n)) or len(canon) != n:
            raise ValueError("pairing must cover the 2n boundary points exactly")
        if loops < 0:
            raise ValueError("negative loop count")
        canon.sort()
        for (a, b), (c, d) in itertools.combinations(canon, 2):
            if a < c < b < d:
                raise ValueError(f"pairs ({a},{b}) and ({c},{d}) cross")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", tuple(canon))
        object.__setattr__(self, "loops", loops)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("TLDiagram is immutable")

    @classmethod
    def identity(cls, n: int) -> "TLDiagram":
        return cls(n, [(j, _top_index(n, j)) for j in range(n)])

    @classmethod
    def generator(cls, n: int, i: int) -> "TLDiagram":
        """The cap-cup generator e_i, 1 <= i <= n-1 (1-based)."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for TL_{n}")
        pairs = [(i - 1, i), (_top_index(n, i - 1), _top_index(n, i))]
        for j in range(n):
            if j not in (i - 1, i):
                pairs.append((j, _top_index(n, j)))
        return cls(n, pairs)

    def strip_loops(self) -> "TLDiagram":
        return TLDiagram(self.n, self.pairs) if self.loops else self

    def compose(self, other: "TLDiagram") -> "TLDiagram":
        """Stack `other` on top of self, chasing strands through the seam."""
        if self.n != other.n:
            raise ValueError("strand count mismatch in composition")
        n = self.n
        adj: dict[tuple, list] = {}

        def connect(u, v):
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)

        for a, b in self.pairs:
            connect(("x", a), ("x", b))
        for a, b in other.pairs:
            connect(("y", a), ("y", b))
        for j in range(n):
            connect(("x", _top_index(n, j)), ("y", j))

        def boundary(pt):
            tag, idx = pt
            if tag == "x" and idx < n:
                return idx  # bottom of the composite
            if tag == "y" and idx >= n:
                return idx  # top of the composite
            return None

        pairs, visited = [], set()
        loops = self.loops + other.loops
        for start in adj:
            if start in visited or boundary(start) is None:
                continue
            visited.add(start)
            prev, cur = None, start
            while True:
                nxt = next(p for p in adj[cur] if p != prev)
                prev, cur = cur, nxt
                visited.add(cur)
                if boundary(cur) is not None:
                    break
            pairs.append((boundary(start), boundary(cur)))
        for start in adj:
            if start in visited:
                continue
            loops += 1
            prev, cur = None, start
            while cur not in visited:
                visited.add(cur)
                nxt = next(p for p in adj[cur] if p != prev)
                prev, cur = cur, nxt
        return TLDiagram(n, pairs, loops)

    def tensor(self, other: "TLDiagram") -> "TLDiagram":
        """Place `other` to the right of self."""
        n, m = self.n, other.n
        pairs = [
            (a if a < n else a + 2 * m, b if b < n else b + 2 * m)
            for a, b in self.pairs
        ]
        pairs += [(a + n, b + n) for a, b in other.pairs]
        return TLDiagram(n + m, pairs, self.loops + other.loops)

    def mirror(self) -> "TLDiagram":
        """Left-right reflection."""
        n = self.n

        def ref(p):
            return n - 1 - p if p < n else 3 * n - 1 - p

        return TLDiagram(n, [(ref(a), ref(b)) for a, b in self.pairs], self.loops)

    def __eq__(self, other):
        return (
            isinstance(other, TLDiagram)
            and self.n == other.n
            and self.pairs == other.pairs
            and self.loops == other.loops
        )

    def __hash__(self):
        return hash((self.n, self.pairs, self.loops))

    def __repr__(self):
        body = ",".join(f"({a},{b})" for a, b in self.pairs)
        tail = f";loops={self.loops}" if self.loops else ""
        return f"TLDiagram({self.n}:{body}{tail})"


class TLElement:
    """Formal linear combination of loop-free TL diagrams over exact
    fractions of Laurent polynomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        clean: dict[TLDiagram, LaurentFraction] = {}
        for diag, coeff in (terms or {}).items():
            if diag.n != n:
                raise ValueError("mixed strand counts in TLElement")
            if isinstance(coeff, LaurentScalar):
                coeff = LaurentFraction.from_laurent(coeff)
            if diag.loops:
                coeff = coeff * _loop_fraction_power(diag.loops)
                diag = diag.strip_loops()
            if coeff.is_zero():
                continue
            acc = clean.get(diag)
            total = coeff if acc is None else acc + coeff
            if total.is_zero():
                clean.pop(diag, None)
            else:
                clean[diag] = total
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("TLElement is immutable")

    @classmethod
    def identity(cls, n: int) -> "TLElement":
        return cls(n, {TLDiagram.identity(n): LaurentFraction.one()})

    @classmethod
    def generator(cls, n: int, i: int) -> "TLElement":
        return cls(n, {TLDiagram.generator(n, i): LaurentFraction.one()})

    def __add__(self, other: "TLElement") -> "TLElement":
        if self.n != other.n:
            raise ValueError("strand count mismatch")
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return TLElement(self.n, out)

    def __sub__(self, other: "TLElement") -> "TLElement":
        minus_one = LaurentFraction.from_laurent(LaurentScalar.integer(-1))
        return self + other.scale(minus_one)

    def scale(self, coeff) -> "TLElement":
        if isinstance(coeff, LaurentScalar):
            coeff = LaurentFraction.from_laurent(coeff)
        return TLElement(self.n, {d: c * coeff for d, c in self.terms.items()})

    def tensor(self, other: "TLElement") -> "TLElement":
        out: dict[TLDiagram, LaurentFraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d = d1.tensor(d2)
                c = c1 * c2
                out[d] = out[d] + c if d in out else c
        return TLElement(self.n + other.n, out)

    def mirror(self) -> "TLElement":
        return TLElement(self.n, {d.mirror(): c for d, c in self.terms.items()})

    def trace_fraction(self) -> LaurentFraction:
        total = LaurentFraction.zero()
        for d, c in self.terms.items():
            total = total + c * _closure_power(d)
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TLElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"TLElement({self.n}: 0)"
        bits = [f"({c!r})*{d!r}" for d, c in self.terms.items()]
        return f"TLElement({self.n}: " + " + ".join(bits) + ")"


_loop_fraction_cache: dict[int, LaurentFraction] = {}


def _loop_fraction_power(k: int) -> LaurentFraction:
    got = _loop_fraction_cache.get(k)
    if got is None:
        got = LaurentFraction.from_laurent(LOOP**k)
        _loop_fraction_cache[k] = got
    return got


def _closure_power(d: TLDiagram) -> LaurentFraction:
    """delta^(circles when d's top is closed back around to its bottom)."""
    n = d.n
    partner = {}
    for a, b in d.pairs:
        partner[a] = b
        partner[b] = a
    visited, circles = set(), 0
    for start in range(2 * n):
        if start in visited:
            continue
        circles += 1
        cur = start
        while cur not in visited:
            visited.add(cur)
            through = partner[cur]
            visited.add(through)
            # closure arc: bottom j meets the j-th top point from the left
            cur = _top_index(n, through) if through < n else 2 * n - 1 - through
    return _loop_fraction_power(circles + d.loops)


def _cleared_terms(x: TLElement):
    """x as (integer-coefficient diagram dict, common denominator)."""
    den = LaurentScalar.one()
    for c in x.terms.values():
        den = _laurent_lcm(den, c.den)
    terms = {d: c.num * den.exact_div(c.den) for d, c in x.terms.items()}
    return terms, den


def tl_compose(x: TLElement, y: TLElement) -> TLElement:
    """Stack y on top of x, bilinearly, absorbing closed loops.

    Coefficients are moved onto a common denominator first so the double
    loop over diagram pairs runs in plain integer Laurent arithmetic; the
    fraction layer reappears only once per output diagram.

    Args:
        x: bottom factor.
        y: top factor with the same strand count.

    Returns:
        The product as a TLElement with loop-free diagram keys.

    Raises:
        ValueError: strand counts differ.
    """
    if x.n != y.n:
        raise ValueError(f"cannot compose TL_{x.n} with TL_{y.n}")
    xt, dx = _cleared_terms(x)
    yt, dy = _cleared_terms(y)
    out: dict[TLDiagram, LaurentScalar] = {}
    for d1, c1 in xt.items():
        for d2, c2 in yt.items():
            d = d1.compose(d2)
            c = c1 * c2
            if d.loops:
                c = c * _loop_power(d.loops)
                d = d.strip_loops()
            out[d] = out[d] + c if d in out else c
    den = dx * dy
    return TLElement(
        x.n, {d: LaurentFraction(c, den) for d, c in out.items() if not c.is_zero()}
    )


def tl_trace(x: TLElement) -> LaurentScalar:
    """Markov closure of a TL element into nested circles.

    Returns:
        The sum over terms of coeff * (-A^2-A^{-2})^circles, which for all
        elements arising here is an honest Laurent polynomial.

    Raises:
        ArithmeticError: the closure is a genuine fraction (possible only
            for hand-built elements whose coefficients fail to clear).
    """
    return x.trace_fraction().as_laurent()


# --------------------------------------------------------------------------
# Jones-Wenzl projectors
# --------------------------------------------------------------------------

_jw_cache: dict[int, TLElement] = {}
_jw_cleared_cache: dict[int, tuple] = {}


def jones_wenzl(ctx: RootContext, n: int) -> TLElement:
    """The n-th Jones-Wenzl projector as an exact TL element.

    Built by the recursion f(n) = f(n-1) + ([n-1]/[n]) f(n-1) e_{n-1} f(n-1),
    with f(n-1) included into TL_n by a free strand on the right.  The output
    does not depend on the context, which enters only through the range
    check n <= r-1; the defining properties are certified in the test suite.

    Args:
        ctx: arithmetic context bounding the admissible projector index.
        n: projector index, 0 <= n <= r-1.

    Returns:
        f(n) as a TLElement in TL_n.

    Raises:
        ValueError: n out of range.
    """
    if not 0 <= n <= ctx.r - 1:
        raise ValueError(f"projector index {n} outside 0..{ctx.r - 1}")
    return _jones_wenzl_raw(n)


def _jones_wenzl_raw(n: int) -> TLElement:
    got = _jw_cache.get(n)
    if got is not None:
        return got
    if n == 0:
        out = TLElement(0, {TLDiagram(0, []): LaurentFraction.one()})
    elif n == 1:
        out = TLElement.identity(1)
    else:
        prev = _jones_wenzl_raw(n - 1).tensor(TLElement.identity(1))
        coeff = LaurentFraction(quantum_int(n - 1), quantum_int(n))
        middle = tl_compose(prev, tl_compose(TLElement.generator(n, n - 1), prev))
        out = prev + middle.scale(coeff)
    _jw_cache[n] = out
    return out


def _laurent_lcm(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    if a == LaurentScalar.one():
        return b
    if b == LaurentScalar.one():
        return a
    return a.exact_div(_poly_gcd(a, b)) * b


def _jones_wenzl_cleared(n: int):
    """f(n) as (tuple of (diagram, integer-Laurent coeff), denominator)."""
    got = _jw_cleared_cache.get(n)
    if got is not None:
        return got
    element = _jones_wenzl_raw(n)
    denom = LaurentScalar.one()
    for c in element.terms.values():
        denom = _laurent_lcm(denom, c.den)
    scale = LaurentFraction.from_laurent(denom)
    terms = tuple((d, (c * scale).as_laurent()) for d, c in element.terms.items())
    _jw_cleared_cache[n] = (terms, denom)
    return terms, denom


# --------------------------------------------------------------------------
# Abstract skein network contraction
# --------------------------------------------------------------------------


class SkeinNetwork:
    """A tensor network whose nodes are formal sums of partial matchings.

    Ports are fresh integer ids.  Gluings match ports in pairs; ports left
    unglued must be declared open.  Contraction processes nodes one at a
    time while a dictionary maps canonical matchings of the live frontier
    to coefficients, so equal partial tangles merge instead of multiplying
    out.  Coefficients are exact Laurent polynomials, with node
    denominators (from projector clearing) accumulated globally and
    divided out once by the caller; in numeric mode coefficients are
    complex numbers at a fixed root and denominators fold in immediately.
    """

    def __init__(self):
        self._port_counter = itertools.count()
        self.nodes = []  # (ports, terms, denominator-or-None)
        self._glue: dict[int, int] = {}
        self.open_ports: tuple[int, ...] = ()
        self.crossing_count = 0

    def new_ports(self, k: int) -> list[int]:
        return [next(self._port_counter) for _ in range(k)]

    def add_node(self, terms, denominator=None) -> None:
        """terms: list of (pairs, LaurentScalar); every term must pair the
        same port set."""
        if not terms:
            raise ValueError("node with no terms")
        ports = tuple(sorted(p for a, b in terms[0][0] for p in (a, b)))
        self.nodes.append((ports, terms, denominator))

    def glue(self, p: int, q: int) -> None:
        if p in self._glue or q in self._glue:
            raise ValueError("port glued twice")
        if p == q:
            raise ValueError("cannot glue a port to itself")
        self._glue[p] = q
        self._glue[q] = p

    def glue_lists(self, xs, ys) -> None:
        if len(xs) != len(ys):
            raise ValueError("bundle width mismatch")
        for p, q in zip(xs, ys):
            self.glue(p, q)

    def set_open(self, ports) -> None:
        self.open_ports = tuple(ports)

    # -- structured node builders -----------------------------------------

    def add_arc(self):
        p, q = self.new_ports(2)
        self.add_node([(((p, q),), LaurentScalar.one())])
        return p, q

    def add_crossing(self, mirror: bool = False):
        """One wire crossing in braid layout; the strand entering at the
        bottom-left passes over.  Returns (b0, b1, t0, t1), b0/t0 on the
        left.  mirror=True swaps the chirality."""
        b0, b1, t0, t1 = self.new_ports(4)
        parallel = ((b0, t0), (b1, t1))
        turnback = ((b0, b1), (t0, t1))
        hi, lo = LaurentScalar.a_power(1), LaurentScalar.a_power(-1)
        if mirror:
            hi, lo = lo, hi
        self.add_node([(parallel, hi), (turnback, lo)])
        self.crossing_count += 1
        return b0, b1, t0, t1

    def add_cable_crossing(self, left_width, right_width, left_over, mirror=False):
        """Cross a cable of `left_width` wires over or under one of
        `right_width` wires.  Returns (bottom_left, bottom_right, top_left,
        top_right) port lists, all ordered left to right; the left cable
        emerges at the top right."""
        if left_width == 0 or right_width == 0:
            arcs = [self.add_arc() for _ in range(left_width + right_width)]
            bottoms = [p for p, _ in arcs]
            tops = [q for _, q in arcs]
            if left_width == 0:
                return [], bottoms, tops, []
            return bottoms, [], [], tops
        # Bottom positions start as unfilled slots; the first crossing to
        # consume a slot donates its own bottom port as the external one.
        frontier: list = [("slot", i) for i in range(left_width + right_width)]
        external = [None] * (left_width + right_width)
        for step in range(left_width):
            pos = left_width - 1 - step
            for _ in range(right_width):
                u, v = frontier[pos], frontier[pos + 1]
                elementary_mirror = mirror if left_over else not mirror
                b0, b1, t0, t1 = self.add_crossing(mirror=elementary_mirror)
                for incoming, node_port in ((u, b0), (v, b1)):
                    if isinstance(incoming, tuple):
                        external[incoming[1]] = node_port
                    else:
                        self.glue(incoming, node_port)
                frontier[pos], frontier[pos + 1] = t0, t1
                pos += 1
        bl, br = external[:left_width], external[left_width:]
        return bl, br, frontier[:right_width], frontier[right_width:]

    def add_jw(self, n: int):
        """A Jones-Wenzl box; returns (bottom_ports, top_ports)."""
        bottom = self.new_ports(n)
        top = self.new_ports(n)
        if n == 0:
            self.add_node([((), LaurentScalar.one())])
            return bottom, top

        def port_of(point):
            return bottom[point] if point < n else top[2 * n - 1 - point]

        terms, denom = _jones_wenzl_cleared(n)
        node_terms = [
            (tuple((port_of(a), port_of(b)) for a, b in d.pairs), coeff)
            for d, coeff in terms
        ]
        self.add_node(node_terms, None if denom == LaurentScalar.one() else denom)
        return bottom, top

    def add_fan_node(self, a_ports, b_ports, c_ports) -> None:
        """Banded trivalent wiring with all three bundles on one side, laid
        out left to right as a, b, c: adjacent bundles connect by nested
        bands, the outer pair by enclosing bands."""
        a, b, c = len(a_ports), len(b_ports), len(c_ports)
        z2, x2, y2 = a + b - c, b + c - a, a + c - b
        if min(z2, x2, y2) < 0 or z2 % 2:
            raise ValueError(f"inadmissible widths at vertex: ({a},{b},{c})")
        z, x, y = z2 // 2, x2 // 2, y2 // 2
        pairs = [(a_ports[a - 1 - t], b_ports[t]) for t in range(z)]
        pairs += [(b_ports[b - 1 - t], c_ports[t]) for t in range(x)]
        pairs += [(a_ports[s], c_ports[c - 1 - s]) for s in range(y)]
        self.add_node([(tuple(pairs), LaurentScalar.one())])

    # -- contraction --------------------------------------------------------

    def _ordering(self):
        """Greedy node order: maximize glue edges shared with the frontier,
        then minimize frontier growth, then insertion order."""
        remaining = list(range(len(self.nodes)))
        live: set[int] = set()
        order = []
        while remaining:
            best_key, best_idx = None, None
            for idx in remaining:
                ports = self.nodes[idx][0]
                shared = sum(1 for p in ports if self._glue.get(p) in live)
                key = (-shared, len(ports) - 2 * shared, idx)
                if best_key is None or key < best_key:
                    best_key, best_idx = key, idx
            order.append(best_idx)
            remaining.remove(best_idx)
            for p in self.nodes[best_idx][0]:
                partner = self._glue.get(p)
                if partner in live:
                    live.discard(partner)
                else:
                    live.add(p)
        return order

    def contract(self, budget: Budget | None = None, numeric_ctx: RootContext | None = None):
        """Contract the network.

        Args:
            budget: size caps, Budget() by default.
            numeric_ctx: when given, work with complex coefficients at this
                context (denominators folded in); otherwise exact.

        Returns:
            (states, denominator): states maps canonical matchings of the
            open ports to coefficients; denominator is the accumulated
            LaurentScalar to divide by (always 1 in numeric mode).

        Raises:
            BudgetExceeded: a cap was violated.
        """
        budget = budget or Budget()
        if self.crossing_count > budget.max_crossings:
            raise BudgetExceeded(
                f"{self.crossing_count} elementary crossings exceed the cap "
                f"of {budget.max_crossings}"
            )
        numeric = numeric_ctx is not None
        loop_val = LOOP.evaluate(numeric_ctx) if numeric else None
        state = {(): (1 + 0j) if numeric else LaurentScalar.one()}
        denominator = LaurentScalar.one()

        for idx in self._ordering():
            ports, terms, denom = self.nodes[idx]
            if numeric:
                scale = 1.0 / denom.evaluate(numeric_ctx) if denom is not None else 1.0
                node_terms = [
                    (pairs, c.evaluate(numeric_ctx) * scale) for pairs, c in terms
                ]
            else:
                if denom is not None:
                    denominator = denominator * denom
                node_terms = terms

            new_state: dict = {}
            for key, acc in state.items():
                for pairs, coeff in node_terms:
                    merged, loops = _splice(key, pairs, ports, self._glue)
                    value = acc * coeff
                    if loops:
                        value = value * (loop_val**loops if numeric else _loop_power(loops))
                    got = new_state.get(merged)
                    new_state[merged] = value if got is None else got + value
            if not numeric:
                new_state = {k: v for k, v in new_state.items() if not v.is_zero()}
            state = new_state
            if state:
                width = len(next(iter(state)))
                if width > budget.max_strands:
                    raise BudgetExceeded(
                        f"contraction frontier of {width} strands exceeds "
                        f"the cap of {budget.max_strands}"
                    )

        open_set = set(self.open_ports)
        for key in state:
            for a, b in key:
                if a not in open_set or b not in open_set:
                    raise ArithmeticError(
                        "contraction finished with unresolved internal ports"
                    )
        return state, denominator


_loop_power_cache: dict[int, LaurentScalar] = {}


def _loop_power(k: int) -> LaurentScalar:
    got = _loop_power_cache.get(k)
    if got is None:
        got = LOOP**k
        _loop_power_cache[k] = got
    return got


def _splice(match_pairs, node_pairs, node_ports, glue):
    """Merge a frontier matching with one node term.  Returns the new
    canonical matching and the number of closed loops formed."""
    pair = {}
    for a, b in match_pairs:
        pair[a] = b
        pair[b] = a
    for a, b in node_pairs:
        pair[a] = b
        pair[b] = a
    active = {}
    for q in node_ports:
        partner = glue.get(q)
        if partner is not None and partner in pair:
            active[q] = partner
            active[partner] = q

    visited = set()
    out = []
    for x in pair:
        if x in visited or x in active:
            continue
        visited.add(x)
        cur = x
        while True:
            y = pair[cur]
            visited.add(y)
            step = active.get(y)
            if step is None:
                out.append((x, y) if x < y else (y, x))
                break
            visited.add(step)
            cur = step
    loops = 0
    for x in pair:
        if x in visited:
            continue
        loops += 1
        cur = x
        while cur not in visited:
            visited.add(cur)
            y = pair[cur]
            visited.add(y)
            cur = active[y]
    out.sort()
    return tuple(out), loops


# --------------------------------------------------------------------------
# Framed graph diagrams
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Strand:
    """One edge or closed component of a diagram.

    `arcs` run in order along the strand.  `framing2` is twice the framing
    offset relative to blackboard framing, so half-integer twists stay
    integral.  `role` is "color" for a concretely colored strand and
    "omega" for a surgery component awaiting color expansion.
    """

    id: str
    arcs: tuple[str, ...]
    color: int | None = None
    framing2: int = 0
    role: str = "color"

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))


@dataclass(frozen=True)
class Crossing:
    """A crossing site: `over` holds the arcs at counterclockwise positions
    0 and 2, `under` the arcs at positions 1 and 3."""

    id: str
    over: tuple[str, str]
    under: tuple[str, str]

    def __post_init__(self):
        object.__setattr__(self, "over", tuple(self.over))
        object.__setattr__(self, "under", tuple(self.under))


@dataclass(frozen=True)
class GraphVertex:
    """A trivalent site; arcs listed in counterclockwise order."""

    id: str
    arcs: tuple[str, str, str]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))


class FramedGraphDiagram:
    """A planar diagram of a colored framed trivalent graph or link.

    The diagram is purely combinatorial: crossings and trivalent sites
    carry counterclockwise orderings of their incident arc ends, and arcs
    chain into strands.  Validation checks that every arc end is used
    exactly once, that strand chains traverse sites consistently, that
    vertex colors are admissible, and that the rotation data is planar
    (Euler count V - E + F = 2 on each connected component).
    """

    def __init__(self, strands, crossings=(), vertices=()):
        self.strands = tuple(
            s if isinstance(s, Strand) else Strand(**s) for s in strands
        )
        self.crossings = tuple(
            c if isinstance(c, Crossing) else Crossing(**c) for c in crossings
        )
        self.vertices = tuple(
            v if isinstance(v, GraphVertex) else GraphVertex(**v) for v in vertices
        )
        self._strand_of_arc: dict[str, Strand] = {}
        self._slots: dict[str, list] = {}
        self._ends: dict[str, tuple] = {}
        self.validate()

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        strand_of_arc: dict[str, Strand] = {}
        for s in self.strands:
            if not s.arcs:
                raise ValueError(f"strand {s.id} has no arcs")
            if s.role not in ("color", "omega"):
                raise ValueError(f"strand {s.id}: unknown role {s.role!r}")
            if s.role == "color" and (s.color is None or s.color < 0):
                raise ValueError(f"strand {s.id} needs a nonnegative color")
            for a in s.arcs:
                if a in strand_of_arc:
                    raise ValueError(f"arc {a} appears twice")
                strand_of_arc[a] = s

        slots: dict[str, list] = {}
        slot_owner: dict[tuple, str] = {}

        def use(arc, kind, site, pos):
            if arc not in strand_of_arc:
                raise ValueError(f"arc {arc} at {kind} {site} belongs to no strand")
            key = (kind, site, pos)
            if key in slot_owner:
                raise ValueError(f"site slot {key} is used twice")
            slot_owner[key] = arc
            slots.setdefault(arc, []).append(key)

        seen_sites = set()
        for c in self.crossings:
            if c.id in seen_sites:
                raise ValueError(f"duplicate site id {c.id}")
            seen_sites.add(c.id)
            use(c.over[0], "crossing", c.id, 0)
            use(c.under[0], "crossing", c.id, 1)
            use(c.over[1], "crossing", c.id, 2)
            use(c.under[1], "crossing", c.id, 3)
        for v in self.vertices:
            if v.id in seen_sites:
                raise ValueError(f"duplicate site id {v.id}")
            seen_sites.add(v.id)
            for i, a in enumerate(v.arcs):
                use(a, "vertex", v.id, i)
        for arc, occs in slots.items():
            if len(occs) != 2:
                raise ValueError(f"arc {arc} has {len(occs)} site ends, expected 2")

        self._strand_of_arc = strand_of_arc
        self._slots = slots
        self._ends = self._orient_strands(slots)

        color_of = {s.id: s.color for s in self.strands}
        for v in self.vertices:
            for a in v.arcs:
                if strand_of_arc[a].role != "color":
                    raise ValueError(
                        f"vertex {v.id} touches non-colored strand "
                        f"{strand_of_arc[a].id}"
                    )
            a, b, c = (color_of[strand_of_arc[x].id] for x in v.arcs)
            if (a + b + c) % 2 or a + b < c or b + c < a or a + c < b:
                raise ValueError(
                    f"vertex {v.id}: colors ({a},{b},{c}) are not admissible"
                )

        self._euler_check()

    def _orient_strands(self, slots):
        """Assign each sited arc a (tail, head) pair of site slots by
        walking strand chains and consuming arc ends jointly."""
        available = {arc: list(occs) for arc, occs in slots.items()}
        tail: dict[str, tuple] = {}
        head: dict[str, tuple] = {}
        vertex_arcs = {a for v in self.vertices for a in v.arcs}

        for s in self.strands:
            arcs = s.arcs
            if len(arcs) == 1 and not slots.get(arcs[0]):
                continue  # free loop with no sites
            for a in arcs:
                if len(slots.get(a, ())) != 2:
                    raise ValueError(f"strand {s.id}: arc {a} has loose ends")
            closed = arcs[0] not in vertex_arcs and arcs[-1] not in vertex_arcs
            if closed:
                transitions = list(zip(arcs, arcs[1:])) + [(arcs[-1], arcs[0])]
            else:
                t_occ = next(
                    (o for o in available[arcs[0]] if o[0] == "vertex"), None
                )
                if t_occ is not None:
                    available[arcs[0]].remove(t_occ)
                h_occ = next(
                    (o for o in available[arcs[-1]] if o[0] == "vertex"), None
                )
                if t_occ is None or h_occ is None:
                    raise ValueError(f"strand {s.id} does not end at vertices")
                available[arcs[-1]].remove(h_occ)
                tail[arcs[0]] = t_occ
                head[arcs[-1]] = h_occ
                transitions = list(zip(arcs, arcs[1:]))
            for p, q in transitions:
                if not self._consume_transition(p, q, available, tail, head):
                    raise ValueError(
                        f"strand {s.id}: arcs {p} -> {q} do not continue "
                        "through any crossing"
                    )
        for arc, rest in available.items():
            if rest:
                raise ValueError(f"arc {arc} has unused site ends")
        return {a: (tail[a], head[a]) for a in tail}

    def _consume_transition(self, p, q, available, tail, head) -> bool:
        for c in self.crossings:
            for pass_arcs, (pos_a, pos_b) in ((c.over, (0, 2)), (c.under, (1, 3))):
                for pp, qq, p_pos, q_pos in (
                    (pass_arcs[0], pass_arcs[1], pos_a, pos_b),
                    (pass_arcs[1], pass_arcs[0], pos_b, pos_a),
                ):
                    if pp != p or qq != q:
                        continue
                    p_occ = ("crossing", c.id, p_pos)
                    q_occ = ("crossing", c.id, q_pos)
                    if p_occ not in available.get(p, ()):
                        continue
                    rest = list(available.get(q, ()))
                    if p == q:
                        rest.remove(p_occ)
                    if q_occ not in rest:
                        continue
                    available[p].remove(p_occ)
                    head[p] = p_occ
                    available[q].remove(q_occ)
                    tail[q] = q_occ
                    return True
        return False

    def _euler_check(self) -> None:
        if not self._slots:
            return  # free loops only
        slot_to_end = {}
        for arc, occs in self._slots.items():
            for j, occ in enumerate(occs):
                slot_to_end[occ] = (arc, j)
        rotation_size = {("crossing", c.id): 4 for c in self.crossings}
        rotation_size.update({("vertex", v.id): 3 for v in self.vertices})

        def next_dart(dart):
            arc, j = dart
            kind, site, pos = self._slots[arc][j]
            nxt_pos = (pos + 1) % rotation_size[(kind, site)]
            nxt_arc, nxt_end = slot_to_end[(kind, site, nxt_pos)]
            return (nxt_arc, 1 - nxt_end)

        seen, faces = set(), 0
        for dart in [(a, e) for a in self._slots for e in (0, 1)]:
            if dart in seen:
                continue
            faces += 1
            cur = dart
            while cur not in seen:
                seen.add(cur)
                cur = next_dart(cur)

        parent: dict = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for occs in self._slots.values():
            (k1, s1, _), (k2, s2, _) = occs
            a, b = find((k1, s1)), find((k2, s2))
            if a != b:
                parent[a] = b
        components = len({find(site) for site in rotation_size})
        v_count = len(self.crossings) + len(self.vertices)
        e_count = len(self._slots)
        if v_count - e_count + faces != 2 * components:
            raise ValueError(
                "rotation data is not planar: Euler count "
                f"{v_count} - {e_count} + {faces} != 2 * {components}"
            )

    # -- helpers --------------------------------------------------------------

    def strand_by_id(self, sid: str) -> Strand:
        for s in self.strands:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def strand_of_arc(self, arc: str) -> Strand:
        return self._strand_of_arc[arc]

    def is_closed(self, s: Strand) -> bool:
        vertex_arcs = {a for v in self.vertices for a in v.arcs}
        return s.arcs[0] not in vertex_arcs and s.arcs[-1] not in vertex_arcs

    def arc_ends(self, arc: str):
        """(tail, head) site slots of a sited arc in strand order, each a
        (kind, site id, position) triple."""
        return self._ends[arc]

    def crossing_entries(self, crossing_id: str):
        """Whether, under the strand orientations, the over pass enters at
        position 0 and the under pass at position 1."""
        c = next(c for c in self.crossings if c.id == crossing_id)
        over_in_0 = self._ends[c.over[0]][1] == ("crossing", c.id, 0)
        under_in_1 = self._ends[c.under[0]][1] == ("crossing", c.id, 1)
        return over_in_0, under_in_1


def half_twist_monomial(ctx: RootContext, color: int, half_twists: int) -> LaurentScalar:
    """Framing-change factor ((sqrt-1)^c A^{(c^2+2c)/2})^h, exact in the
    Laurent layer via sqrt(-1) = sigma A^r."""
    base_exp = 2 * ctx.r * color + color * color + 2 * color
    flips = (color * half_twists) % 2
    sign = ctx.sqrt_minus_one_sign if flips else 1
    return LaurentScalar.monomial(base_exp * half_twists, sign)


def _expand_diagram(
    d: FramedGraphDiagram, widths: dict[str, int], mirror: bool = False
) -> SkeinNetwork:
    """Build the closed skein network of a colored diagram; widths maps
    strand id to cable width."""
    net = SkeinNetwork()
    slot_ports: dict[tuple, list[int]] = {}
    slot_flow: dict[tuple, str] = {}  # "in" toward the site, "out" away

    for c in d.crossings:
        w_over = widths[d.strand_of_arc(c.over[0]).id]
        w_under = widths[d.strand_of_arc(c.under[0]).id]
        bl, br, top_left, top_right = net.add_cable_crossing(
            w_over, w_under, left_over=True, mirror=mirror
        )
        slot_ports[("crossing", c.id, 0)] = bl
        slot_ports[("crossing", c.id, 1)] = br
        slot_ports[("crossing", c.id, 2)] = top_right
        slot_ports[("crossing", c.id, 3)] = top_left
        slot_flow[("crossing", c.id, 0)] = "in"
        slot_flow[("crossing", c.id, 1)] = "in"
        slot_flow[("crossing", c.id, 2)] = "out"
        slot_flow[("crossing", c.id, 3)] = "out"

    for v in d.vertices:
        bundles = [net.new_ports(widths[d.strand_of_arc(a).id]) for a in v.arcs]
        # all three bundles point away from the site; a counterclockwise
        # listing therefore runs right to left in the layout
        net.add_fan_node(bundles[2], bundles[1], bundles[0])
        for i in range(3):
            slot_ports[("vertex", v.id, i)] = bundles[i]
            slot_flow[("vertex", v.id, i)] = "out"

    for s in d.strands:
        w = widths[s.id]
        first_arc = s.arcs[0]
        if not d._slots.get(first_arc):
            bottom, top = net.add_jw(w)  # free loop: box closed on itself
            for i in range(w):
                net.glue(top[i], bottom[i])
            continue
        for arc in s.arcs:
            tail, head = d.arc_ends(arc)
            t_list = list(slot_ports[tail])
            if slot_flow[tail] == "in":
                t_list.reverse()  # walker leaves against the local frame
            h_list = list(slot_ports[head])
            if slot_flow[head] == "out":
                h_list.reverse()  # walker arrives against the local frame
            if arc == first_arc:
                bottom, top = net.add_jw(w)
                net.glue_lists(t_list, bottom)
                net.glue_lists(top, h_list)
            else:
                net.glue_lists(t_list, h_list)
    net.set_open(())
    return net


def bracket(
    ctx: RootContext,
    d: FramedGraphDiagram,
    budget: Budget | None = None,
    mirror: bool = False,
    colors: dict[str, int] | None = None,
) -> LaurentScalar:
    """Exact Kauffman bracket of a closed colored framed diagram.

    Each color-c strand is cabled into c parallels through one projector
    insertion, trivalent sites become banded wirings, crossings resolve by
    the skein relation, and each strand's framing offset contributes the
    half-twist monomial once per half twist.

    Args:
        ctx: arithmetic context; colors must be at most r-2.
        d: validated diagram.  Every strand needs a concrete color, either
            its own or through `colors`.
        budget: evaluation caps, Budget() by default.
        mirror: evaluate the mirror diagram instead (swaps A and A^{-1}).
        colors: per-strand color overrides, used by the surgery module to
            expand omega components.

    Returns:
        The bracket as an exact LaurentFraction.  For links the denominator
        reduces to 1; graphs with trivalent sites can take genuine quotient
        values (the theta of colors (2,2,2) already does).

    Raises:
        BudgetExceeded: the diagram exceeds the caps.
        ValueError: missing or out-of-range colors.
    """
    widths = {}
    for s in d.strands:
        c = (colors or {}).get(s.id, s.color)
        if c is None:
            raise ValueError(f"strand {s.id} has no color")
        if not 0 <= c <= ctx.r - 2:
            raise ValueError(f"color {c} of strand {s.id} outside 0..{ctx.r - 2}")
        widths[s.id] = c
    net = _expand_diagram(d, widths, mirror=mirror)
    states, denominator = net.contract(budget=budget)
    value = LaurentFraction(states.get((), LaurentScalar.zero()), denominator)
    for s in d.strands:
        if s.framing2:
            twist = half_twist_monomial(ctx, widths[s.id], s.framing2)
            if mirror:
                twist = LaurentScalar({-e: c for e, c in twist.coeffs.items()})
            value = value * LaurentFraction.from_laurent(twist)
    return value
