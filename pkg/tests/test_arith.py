"""Tests for the exact scalar layer: Laurent rings, roots of unity, constants."""

import cmath
import math
import random

import pytest

from shadowsum.arith import (
    ComplexValue,
    LaurentFraction,
    LaurentScalar,
    RootContext,
    eta,
    gauss_sum,
    kappa,
    quantum_int,
    quantum_loop,
)

TOL = 1e-9


def random_laurent(rng, max_terms=6, max_exp=20, max_coeff=9):
    coeffs = {}
    for _ in range(rng.randint(0, max_terms)):
        coeffs[rng.randint(-max_exp, max_exp)] = rng.randint(-max_coeff, max_coeff)
    return LaurentScalar(coeffs)


# ---------------------------------------------------------------- contexts


def test_root_context_validation():
    RootContext(3)
    RootContext(5, a_exponent=3)
    with pytest.raises(ValueError):
        RootContext(2)
    with pytest.raises(ValueError):
        RootContext(4, a_exponent=2)  # gcd(2, 16) != 1
    with pytest.raises(ValueError):
        RootContext(5, a_exponent=5)  # gcd(5, 20) != 1
    with pytest.raises(ValueError):
        RootContext(5, sqrt_a_sign=0)
    with pytest.raises(ValueError):
        RootContext(5, sqrt_minus_one_sign=2)


def test_root_values():
    for r in (3, 4, 7):
        for k in (1, 3):
            if math.gcd(k, 4 * r) != 1:
                continue
            ctx = RootContext(r, a_exponent=k)
            a = ctx.a_value()
            assert abs(a - cmath.exp(1j * math.pi * k / (2 * r))) < TOL
            # A is a primitive 4r-th root: A^{2r} = -1.
            assert abs(a ** (2 * r) + 1) < TOL
            # s^2 = A for either square-root choice.
            for sign in (1, -1):
                c2 = RootContext(r, a_exponent=k, sqrt_a_sign=sign)
                assert abs(c2.s_power(1) ** 2 - a) < TOL
            # The chosen sqrt(-1) squares to -1 for either sign.
            for sign in (1, -1):
                c3 = RootContext(r, a_exponent=k, sqrt_minus_one_sign=sign)
                assert abs(c3.sqrt_minus_one() ** 2 + 1) < TOL


def test_s_power_periodicity():
    ctx = RootContext(6)
    rng = random.Random(11)
    for _ in range(50):
        e = rng.randint(-300, 300)
        assert abs(ctx.s_power(e) - ctx.s_power(e + 8 * ctx.r)) < TOL


# ---------------------------------------------------------------- Laurent ring


def test_laurent_ring_laws():
    rng = random.Random(7)
    for _ in range(60):
        p, q, w = (random_laurent(rng) for _ in range(3))
        assert (p + q) * w == p * w + q * w
        assert (p * q) * w == p * (q * w)
        assert p * q == q * p
        assert p - p == LaurentScalar.zero()
        assert p + LaurentScalar.zero() == p
        assert p * LaurentScalar.one() == p


def test_laurent_no_zero_coefficients_stored():
    p = LaurentScalar({3: 2, 5: 0, -1: 0})
    assert set(p.coeffs) == {3}
    assert (p - p).coeffs == {}


def test_laurent_pow_and_unit_inverse():
    s = LaurentScalar.monomial(1)
    assert s ** 5 == LaurentScalar.monomial(5)
    assert s ** (-3) == LaurentScalar.monomial(-3)
    m = LaurentScalar.monomial(4, -1)
    assert m * m.unit_inverse() == LaurentScalar.one()
    with pytest.raises(ArithmeticError):
        LaurentScalar({0: 2}).unit_inverse()
    with pytest.raises(ArithmeticError):
        (s + LaurentScalar.one()).unit_inverse()


def test_evaluate_is_ring_homomorphism():
    rng = random.Random(13)
    ctx = RootContext(5)
    for _ in range(40):
        p, q = random_laurent(rng), random_laurent(rng)
        lhs = (p * q).evaluate(ctx)
        rhs = p.evaluate(ctx) * q.evaluate(ctx)
        assert abs(lhs - rhs) < 1e-8
        assert abs((p + q).evaluate(ctx) - (p.evaluate(ctx) + q.evaluate(ctx))) < TOL


def test_evaluate_reduces_exponents():
    ctx = RootContext(4, sqrt_a_sign=-1)
    rng = random.Random(17)
    for _ in range(30):
        e = rng.randint(-200, 200)
        direct = LaurentScalar.monomial(e).evaluate(ctx)
        reduced = LaurentScalar.monomial(e % (8 * ctx.r)).evaluate(ctx)
        assert abs(direct - reduced) < TOL


def test_exact_div():
    rng = random.Random(19)
    for _ in range(40):
        p, q = random_laurent(rng), random_laurent(rng)
        if q.is_zero():
            continue
        assert (p * q).exact_div(q) == p
    # A division with remainder must raise rather than truncate.
    num = LaurentScalar({2: 1, 0: 1})  # s^2 + 1
    den = LaurentScalar({1: 1, 0: 1})  # s + 1
    with pytest.raises(ArithmeticError):
        num.exact_div(den)
    with pytest.raises(ZeroDivisionError):
        num.exact_div(LaurentScalar.zero())


# ---------------------------------------------------------------- fractions


def test_fraction_reduction():
    six, three = quantum_int(6), quantum_int(3)
    f = LaurentFraction(six * three, three)
    assert f.as_laurent() == six
    g = LaurentFraction(quantum_int(2), quantum_int(4))
    # [4] = [2] (A^4 + A^-4), so [2]/[4] reduces to 1/(A^4 + A^-4); the
    # denominator is normalized to start at exponent zero.
    assert g.num == LaurentScalar.monomial(8)
    assert g.den == LaurentScalar({16: 1, 0: 1})


def test_fraction_field_laws():
    rng = random.Random(23)
    for _ in range(25):
        a = LaurentFraction(random_laurent(rng), quantum_int(rng.randint(1, 4)))
        b = LaurentFraction(random_laurent(rng), quantum_int(rng.randint(1, 4)))
        c = LaurentFraction(random_laurent(rng), quantum_int(rng.randint(1, 4)))
        assert (a + b) * c == a * c + b * c
        assert a - a == LaurentFraction.zero()
        if not b.is_zero():
            assert (a / b) * b == a


def test_fraction_evaluate_matches_quotient():
    ctx = RootContext(7)
    rng = random.Random(29)
    for _ in range(20):
        num = random_laurent(rng)
        den = quantum_int(rng.randint(1, 5))
        f = LaurentFraction(num, den)
        expect = num.evaluate(ctx) / den.evaluate(ctx)
        assert abs(f.evaluate(ctx) - expect) < 1e-8


def test_fraction_as_laurent_raises_for_true_fraction():
    f = LaurentFraction(LaurentScalar.one(), quantum_int(2))
    with pytest.raises(ArithmeticError):
        f.as_laurent()


# ---------------------------------------------------------------- quantum integers


def test_quantum_int_small_values():
    A2 = LaurentScalar.a_power(1)  # just to spell the expansions below
    assert quantum_int(0) == LaurentScalar.zero()
    assert quantum_int(1) == LaurentScalar.one()
    assert quantum_int(2) == LaurentScalar({4: 1, -4: 1})
    assert quantum_int(3) == LaurentScalar({8: 1, 0: 1, -8: 1})
    assert A2 * A2.unit_inverse() == LaurentScalar.one()


def test_quantum_int_recurrence():
    # [2][m] = [m+1] + [m-1]
    for m in range(1, 9):
        lhs = quantum_int(2) * quantum_int(m)
        assert lhs == quantum_int(m + 1) + quantum_int(m - 1)


def test_quantum_int_defining_quotient():
    # [m] * (A^2 - A^-2) = A^{2m} - A^{-2m}
    diff = LaurentScalar({4: 1}) - LaurentScalar({-4: 1})
    for m in range(8):
        target = LaurentScalar({4 * m: 1}) - LaurentScalar({-4 * m: 1})
        assert quantum_int(m) * diff == target


def test_quantum_loop_value():
    ctx = RootContext(5)
    loop = quantum_loop(ctx)
    assert loop == LaurentScalar({4: -1, -4: -1})
    expect = -2 * math.cos(math.pi / 5)  # A^2 = e^{i pi/5} at r = 5, k = 1
    assert abs(loop.evaluate(ctx) - expect) < TOL


# ---------------------------------------------------------------- constants


def local_delta(ctx, n):
    """(-1)^n [n+1] at the root; kept local so constant tests are
    self-contained."""
    return ((-1) ** n) * quantum_int(n + 1).evaluate(ctx)


def test_eta_defining_property():
    # 1/eta^2 equals the sum of squared circle values over all colors.
    for r in range(3, 13):
        for k in (1, 3):
            if math.gcd(k, 4 * r) != 1:
                continue
            ctx = RootContext(r, a_exponent=k)
            total = sum(local_delta(ctx, n) ** 2 for n in range(r - 1))
            assert abs(total.imag) < TOL
            assert abs(1.0 / eta(ctx) ** 2 - total) < 1e-7
            assert eta(ctx).real > 0


def test_eta_closed_form_k1():
    for r in range(3, 13):
        ctx = RootContext(r)
        expect = math.sqrt(2.0 / r) * math.sin(math.pi / r)
        assert abs(eta(ctx) - expect) < TOL


def test_gauss_sum_k1_closed_form():
    for r in range(3, 13):
        ctx = RootContext(r)
        expect = 2 * math.sqrt(2 * r) * cmath.exp(1j * math.pi / 4)
        assert abs(gauss_sum(ctx) - expect) < 1e-8


def test_kappa_k1_closed_form():
    # kappa = -i exp(-i pi (2r^2 - r + 6) / (4r)) at k = 1, modulus one.
    for r in range(3, 13):
        ctx = RootContext(r)
        k = kappa(ctx)
        expect = -1j * cmath.exp(-1j * math.pi * (2 * r * r - r + 6) / (4 * r))
        assert abs(k - expect) < 1e-8
        assert abs(abs(k) - 1.0) < TOL


def test_kappa_gauss_quotient_k1():
    # The Gauss-sum closed form with sqrt(-2r) = +i sqrt(2r), valid at k=1.
    for r in range(3, 13):
        ctx = RootContext(r)
        denom = 2 * (1j * math.sqrt(2.0 * r)) * ctx.a_value() ** (3 + r * r)
        assert abs(kappa(ctx) - gauss_sum(ctx) / denom) < 1e-8


def test_kappa_unit_modulus_general_exponent():
    for r, k in [(3, 5), (5, 3), (7, 9), (8, 7), (12, 5)]:
        ctx = RootContext(r, a_exponent=k)
        assert abs(abs(kappa(ctx)) - 1.0) < TOL


# ---------------------------------------------------------------- ComplexValue


def test_complex_value_close_to():
    z = ComplexValue(1.0 + 2.0j)
    assert z.close_to(1.0 + 2.0j + 1e-12)
    assert not z.close_to(1.0 + 2.0j + 1e-6)
    assert z.close_to(1.0 + 2.0j + 1e-6, tolerance=1e-3)


def test_complex_value_json_pair():
    z = ComplexValue(-0.12345678901234567 + 3.9999999999999996j)
    pair = z.as_json_pair()
    assert set(pair) == {"re", "im"}
    assert abs(float(pair["re"]) - z.real) < 1e-14
    assert abs(float(pair["im"]) - z.imag) < 1e-14
