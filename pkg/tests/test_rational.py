from fractions import Fraction

import pytest

from epolylog.rational import Poly, RationalFn, rational_sum

V = ("x", "y", "z")


def test_poly_arithmetic():
    x = Poly.variable(V, "x")
    y = Poly.variable(V, "y")
    p = (x + y) * (x - y)
    q = x * x - y * y
    assert p == q
    assert (p - q).is_zero()


def test_poly_eval():
    x = Poly.variable(V, "x")
    p = x**3 - 2 * x + 1
    assert p.eval({"x": Fraction(2), "y": 0, "z": 0}) == Fraction(5)


def test_linear_builder():
    p = Poly.linear(V, {"x": 2, "z": -1}, const=3)
    assert p.eval({"x": 1, "y": 99, "z": 4}) == Fraction(1)


def test_subs_linear_elimination():
    # eliminate z via z = -x - y in x*z
    x = Poly.variable(V, "x")
    y = Poly.variable(V, "y")
    p = x * Poly.variable(V, "z")
    q = p.subs_linear("z", -x - y)
    assert q == -(x * x) - x * y


def test_rational_equals():
    x = Poly.variable(V, "x")
    y = Poly.variable(V, "y")
    r = RationalFn(Poly.const(V, 1), x) + RationalFn(Poly.const(V, 1), y)
    s = RationalFn(x + y, x * y)
    assert r.equals(s)
    assert not r.equals(RationalFn(x, y))


def test_rational_inv_and_div():
    x = Poly.variable(V, "x")
    r = RationalFn(x, x + Poly.const(V, 1))
    assert (r / r).equals(1)
    assert r.inv().equals(RationalFn(x + Poly.const(V, 1), x))


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFn(Poly.const(V, 1), Poly(V, {}))


def test_rational_sum_telescopes():
    # 1/(x(x+1)) = 1/x - 1/(x+1), so the three-part sum cancels exactly
    x = Poly.variable(V, "x")
    one = Poly.const(V, 1)
    parts = [
        RationalFn(one, x * (x + one)),
        RationalFn(-one, x),
        RationalFn(one, x + one),
    ]
    assert rational_sum(parts).is_zero()


def test_rational_sum_nonzero():
    x = Poly.variable(V, "x")
    one = Poly.const(V, 1)
    s = rational_sum([RationalFn(one, x), RationalFn(one, x)])
    assert not s.is_zero()
    assert s.equals(RationalFn(2 * one, x))
