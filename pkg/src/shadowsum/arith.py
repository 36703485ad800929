"""Exact scalar arithmetic at a primitive 4r-th root of unity.

Everything upstream of the final numeric assembly is computed in the ring
Z[s, s^-1] where s is a formal square root of A, so A = s^2 and integer
powers of A live on even exponents.  A RootContext fixes the numeric value
of s (a primitive 8r-th root of unity), a square root of -1 realized as
sigma * A^r, and the level r.  The two global constants eta and kappa are
generally not cyclotomic integers and live only in the numeric layer.

Conventions:
  * A = e^{k pi i / (2r)} with gcd(k, 4r) = 1, default k = 1.
  * s = sqrt_a_sign * e^{k pi i / (4r)}, so s^2 = A either way.
  * sqrt(-1) = sqrt_minus_one_sign * A^r; (A^r)^2 = A^{2r} = -1 always.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "RootContext",
    "LaurentScalar",
    "LaurentFraction",
    "ComplexValue",
    "quantum_int",
    "quantum_loop",
    "eta",
    "kappa",
    "gauss_sum",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RootContext:
    """Level r together with all root-of-unity choices.

    Args:
        r: the level, at least 3; colors run over 0..r-2.
        a_exponent: integer k with A = e^{k pi i/(2r)}; must satisfy
            gcd(k, 4r) = 1 so that A is a primitive 4r-th root of unity.
        sqrt_a_sign: +1 or -1, selecting which square root of A the
            formal generator s evaluates to.
        sqrt_minus_one_sign: +1 or -1, selecting sqrt(-1) = sign * A^r.
    """

    r: int
    a_exponent: int = 1
    sqrt_a_sign: int = 1
    sqrt_minus_one_sign: int = 1

    def __post_init__(self) -> None:
        if self.r < 3:
            raise ValueError(f"level r must be >= 3, got {self.r}")
        if math.gcd(self.a_exponent, 4 * self.r) != 1:
            raise ValueError(
                f"a_exponent {self.a_exponent} is not coprime to 4r = {4 * self.r};"
                " A would not be a primitive 4r-th root of unity"
            )
        if self.sqrt_a_sign not in (1, -1):
            raise ValueError("sqrt_a_sign must be +1 or -1")
        if self.sqrt_minus_one_sign not in (1, -1):
            raise ValueError("sqrt_minus_one_sign must be +1 or -1")

    @property
    def s_order(self) -> int:
        """Multiplicative order of the numeric value of s, namely 8r."""
        return 8 * self.r

    def s_power(self, exponent: int) -> complex:
        """Numeric value of s^exponent (reduced modulo 8r)."""
        table = _s_power_table(self.r, self.a_exponent, self.sqrt_a_sign)
        return table[exponent % self.s_order]

    def a_value(self) -> complex:
        return self.s_power(2)

    def sqrt_minus_one(self) -> complex:
        """The chosen square root of -1, sigma * A^r."""
        return self.sqrt_minus_one_sign * self.s_power(2 * self.r)


@lru_cache(maxsize=None)
def _s_power_table(r: int, k: int, sign: int) -> tuple[complex, ...]:
    # s = sign * e^{k pi i/(4r)} has order 8r; tabulating all powers keeps
    # polynomial evaluation down to table lookups.
    base = cmath.exp(1j * math.pi * k / (4 * r))
    return tuple((sign ** (m % 2)) * base ** m for m in range(8 * r))


class LaurentScalar:
    """Exact Laurent polynomial in the formal generator s = sqrt(A).

    Stored as a map exponent -> nonzero integer coefficient.  Instances are
    treated as immutable; all arithmetic returns fresh objects.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: dict[int, int] | None = None):
        clean = {e: c for e, c in (coeffs or {}).items() if c != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("LaurentScalar is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentScalar":
        return cls({})

    @classmethod
    def one(cls) -> "LaurentScalar":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentScalar":
        """coefficient * s^exponent."""
        return cls({exponent: coefficient})

    @classmethod
    def a_power(cls, exponent: int, coefficient: int = 1) -> "LaurentScalar":
        """coefficient * A^exponent (A = s^2)."""
        return cls({2 * exponent: coefficient})

    @classmethod
    def integer(cls, value: int) -> "LaurentScalar":
        return cls({0: value})

    # -- ring structure --------------------------------------------------

    def __add__(self, other: "LaurentScalar") -> "LaurentScalar":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentScalar(out)

    def __sub__(self, other: "LaurentScalar") -> "LaurentScalar":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentScalar(out)

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentScalar({e: c * other for e, c in self.coeffs.items()})
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        if len(self.coeffs) > len(other.coeffs):
            self, other = other, self
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentScalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentScalar":
        if n < 0:
            inv = self.unit_inverse()
            return inv ** (-n)
        result = LaurentScalar.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_inverse(self) -> "LaurentScalar":
        """Inverse of a unit monomial +-s^k; raises for anything else."""
        if len(self.coeffs) != 1:
            raise ArithmeticError(f"not an invertible monomial: {self!r}")
        (e, c), = self.coeffs.items()
        if c not in (1, -1):
            raise ArithmeticError(f"not an invertible monomial: {self!r}")
        return LaurentScalar({-e: c})

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentScalar) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash(frozenset(self.coeffs.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exponent(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def max_exponent(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    # -- evaluation and exact division ------------------------------------

    def evaluate(self, ctx: RootContext) -> complex:
        """Numeric value with s specialized to the context's root."""
        table = _s_power_table(ctx.r, ctx.a_exponent, ctx.sqrt_a_sign)
        order = 8 * ctx.r
        total = 0j
        for e, c in self.coeffs.items():
            total += c * table[e % order]
        return total

    def exact_div(self, divisor: "LaurentScalar") -> "LaurentScalar":
        """Exact quotient self / divisor in Z[s, s^-1].

        Raises ArithmeticError when the division leaves a remainder or a
        non-integer coefficient.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero LaurentScalar")
        if self.is_zero():
            return LaurentScalar.zero()
        # Shift both to ordinary polynomials and long-divide over Q.
        sh_self, sh_div = self.min_exponent(), divisor.min_exponent()
        num = _dense(self, sh_self)
        den = _dense(divisor, sh_div)
        quot, rem = _poly_divmod(num, den)
        if any(rem):
            raise ArithmeticError("exact_div: nonzero remainder")
        out: dict[int, int] = {}
        offset = sh_self - sh_div
        for i, q in enumerate(quot):
            if q == 0:
                continue
            if q.denominator != 1:
                raise ArithmeticError("exact_div: non-integer quotient coefficient")
            out[i + offset] = int(q)
        return LaurentScalar(out)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*s^{e}")
        return " + ".join(parts).replace("+ -", "- ")


def _dense(p: LaurentScalar, shift: int) -> list[Fraction]:
    """Coefficient list of s^-shift * p, lowest degree first."""
    top = p.max_exponent() - shift
    out = [Fraction(0)] * (top + 1)
    for e, c in p.coeffs.items():
        out[e - shift] = Fraction(c)
    return out


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    dn = len(den) - 1
    lead = den[dn]
    if len(num) - 1 < dn:
        return [Fraction(0)], num
    quot = [Fraction(0)] * (len(num) - dn)
    for i in range(len(num) - 1 - dn, -1, -1):
        q = num[i + dn] / lead
        quot[i] = q
        if q:
            for j, d in enumerate(den):
                num[i + j] -= q * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _poly_gcd(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    """Monic-free gcd in Z[s, s^-1], normalized to an integer-primitive
    polynomial with nonnegative minimal exponent 0 and positive leading
    coefficient.  Units (monomials) collapse to 1."""
    if a.is_zero():
        return _normalize_gcd(b)
    if b.is_zero():
        return _normalize_gcd(a)
    fa = _dense(a, a.min_exponent())
    fb = _dense(b, b.min_exponent())
    while any(fb):
        _, rem = _poly_divmod(fa, fb)
        fa, fb = fb, rem
        if len(fb) == 1 and fb[0] == 0:
            break
    # fa is the gcd over Q[x]; rescale to primitive integer form.
    denom_lcm = 1
    for c in fa:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in fa]
    content = 0
    for c in ints:
        content = math.gcd(content, abs(c))
    ints = [c // content for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return LaurentScalar({i: c for i, c in enumerate(ints) if c})


def _normalize_gcd(p: LaurentScalar) -> LaurentScalar:
    if p.is_zero():
        return p
    shifted = {e - p.min_exponent(): c for e, c in p.coeffs.items()}
    content = 0
    for c in shifted.values():
        content = math.gcd(content, abs(c))
    lead_sign = 1 if shifted[max(shifted)] > 0 else -1
    return LaurentScalar({e: lead_sign * c // content for e, c in shifted.items()})


class LaurentFraction:
    """Exact quotient of two LaurentScalars, kept in reduced form.

    The denominator is normalized to an integer-primitive polynomial with
    minimal exponent 0 and positive leading coefficient; the gcd of
    numerator and denominator is divided out on construction.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentScalar, den: LaurentScalar | None = None):
        if den is None:
            den = LaurentScalar.one()
        if den.is_zero():
            raise ZeroDivisionError("LaurentFraction with zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", LaurentScalar.zero())
            object.__setattr__(self, "den", LaurentScalar.one())
            return
        g = _poly_gcd(num, den)
        if g != LaurentScalar.one():
            num = num.exact_div(g)
            den = den.exact_div(g)
        # Strip the denominator's unit part (sign and power of s).
        shift = den.min_exponent()
        if shift:
            den = LaurentScalar({e - shift: c for e, c in den.coeffs.items()})
            num = LaurentScalar({e - shift: c for e, c in num.coeffs.items()})
        content = 0
        for c in den.coeffs.values():
            content = math.gcd(content, abs(c))
        if den.coeffs[den.max_exponent()] < 0:
            content = -content
        if content != 1:
            den = LaurentScalar({e: c // content for e, c in den.coeffs.items()})
            num_scaled: dict[int, int] = {}
            for e, c in num.coeffs.items():
                if c % content:
                    # Fall back to rational scaling via gcd of contents.
                    break
                num_scaled[e] = c // content
            else:
                num = LaurentScalar(num_scaled)
                object.__setattr__(self, "num", num)
                object.__setattr__(self, "den", den)
                return
            # Numerator does not absorb the integer content; keep it on den.
            den = LaurentScalar({e: c * content for e, c in den.coeffs.items()})
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("LaurentFraction is immutable")

    @classmethod
    def from_laurent(cls, p: LaurentScalar) -> "LaurentFraction":
        return cls(p, LaurentScalar.one())

    @classmethod
    def one(cls) -> "LaurentFraction":
        return cls(LaurentScalar.one())

    @classmethod
    def zero(cls) -> "LaurentFraction":
        return cls(LaurentScalar.zero())

    def __add__(self, other: "LaurentFraction") -> "LaurentFraction":
        if self.den == other.den:
            return LaurentFraction(self.num + other.num, self.den)
        return LaurentFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "LaurentFraction") -> "LaurentFraction":
        if self.den == other.den:
            return LaurentFraction(self.num - other.num, self.den)
        return LaurentFraction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "LaurentFraction":
        return LaurentFraction(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, LaurentScalar):
            other = LaurentFraction.from_laurent(other)
        if not isinstance(other, LaurentFraction):
            return NotImplemented
        return LaurentFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentScalar):
            other = LaurentFraction.from_laurent(other)
        if not isinstance(other, LaurentFraction):
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero LaurentFraction")
        return LaurentFraction(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentScalar):
            other = LaurentFraction.from_laurent(other)
        if not isinstance(other, LaurentFraction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, ctx: RootContext) -> complex:
        return self.num.evaluate(ctx) / self.den.evaluate(ctx)

    def as_laurent(self) -> LaurentScalar:
        """The underlying polynomial, when the reduced denominator is 1."""
        if self.den != LaurentScalar.one():
            raise ArithmeticError(f"not a Laurent polynomial: den = {self.den!r}")
        return self.num

    def __repr__(self) -> str:
        if self.den == LaurentScalar.one():
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"


class ComplexValue(complex):
    """A complex number with tolerance comparison and JSON helpers."""

    def close_to(self, other: complex, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return abs(self - other) <= tolerance

    def as_json_pair(self) -> dict[str, str]:
        """{re, im} with 15 significant digits, lossless for doubles."""
        return {"re": f"{self.real:.15g}", "im": f"{self.imag:.15g}"}


def quantum_int(m: int) -> LaurentScalar:
    """Quantum integer [m] = (A^{2m} - A^{-2m}) / (A^2 - A^{-2}).

    Expanded form: sum of A^{2(m-1-2j)} for j = 0..m-1, an honest Laurent
    polynomial for every m >= 0.
    """
    if m < 0:
        raise ValueError("quantum_int expects m >= 0")
    return LaurentScalar({4 * (m - 1 - 2 * j): 1 for j in range(m)})


def quantum_loop(ctx: RootContext) -> LaurentScalar:
    """Loop value -A^2 - A^{-2} (a closed circle in the skein)."""
    return LaurentScalar({4: -1, -4: -1})


def eta(ctx: RootContext) -> ComplexValue:
    """The normalization constant (sum of squared circle values)^(-1/2).

    The defining sum evaluates exactly to r / (2 sin^2(k pi / r)), a
    positive real for every admissible context, so the defining property
    pins eta to the positive real root sqrt(2/r) * |sin(k pi / r)|.
    For k = 1 this is the familiar sqrt(2/r) sin(pi/r).
    """
    k = ctx.a_exponent
    return ComplexValue(math.sqrt(2.0 / ctx.r) * abs(math.sin(k * math.pi / ctx.r)))


def gauss_sum(ctx: RootContext) -> ComplexValue:
    """Sum of A^{n^2} for n = 1..4r (numerically, from the root table)."""
    total = 0j
    for n in range(1, 4 * ctx.r + 1):
        total += ctx.s_power(2 * (n * n % (4 * ctx.r)))
    return ComplexValue(total)


def kappa(ctx: RootContext) -> ComplexValue:
    """The twist constant: eta times the sum of Delta_n^2 (-1)^n A^{n^2+2n}.

    This is the skein evaluation of a +1-framed unknot carrying the
    surgery color, the defining property of kappa.  It always has modulus
    one.  A Gauss-sum closed form also holds,

        kappa = (sum_{n=1}^{4r} A^{n^2}) / (2 sqrt(-2r) A^{3 + r^2}),

    where the branch of sqrt(-2r) is +i sqrt(2r) for k = 1 but in general
    is a quadratic-reciprocity sign depending jointly on r and k, so the
    defining sum is what gets computed here.  The closed form is exercised
    at k = 1 by the test suite.
    """
    total = 0j
    for n in range(ctx.r - 1):
        # Delta_n^2 = [n+1]^2 evaluated at the root; the (-1)^n signs of
        # Delta_n square away, leaving the twist sign explicit.
        qint = quantum_int(n + 1).evaluate(ctx)
        twist = ctx.s_power((2 * (n * n + 2 * n)) % ctx.s_order)
        total += qint * qint * ((-1) ** n) * twist
    return ComplexValue(eta(ctx) * total)
