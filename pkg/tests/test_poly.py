from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coulomb.poly import Poly

X = sympy.symbols("x0:3")


def polys(nvars=3):
    mono = st.tuples(*[st.integers(0, 3)] * nvars)
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(mono, coeff, max_size=5).map(lambda t: Poly(nvars, t))


def to_sympy(p: Poly):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([x**e for x, e in zip(X, m)])
                            for m, c in p.terms.items()))


@settings(max_examples=150, deadline=None)
@given(polys(), polys())
def test_arithmetic_matches_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(-2, 2), st.integers(-2, 2))
def test_shift_matches_substitution(p, a, b):
    # x0 -> x0 + a*x2, x1 -> x1 + b*x2
    shifted = p.shift({0: [0, 0, a], 1: [0, 0, b]})
    expect = sympy.expand(to_sympy(p).subs({X[0]: X[0] + a * X[2], X[1]: X[1] + b * X[2]}, simultaneous=True))
    assert to_sympy(shifted) == expect


@settings(max_examples=60, deadline=None)
@given(polys(), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_evaluate_matches_sympy(p, v):
    got = p.evaluate({1: v})
    assert to_sympy(got) == sympy.expand(to_sympy(p).subs(X[1], sympy.Rational(v.numerator, v.denominator)))


def test_zero_coefficients_are_dropped():
    p = Poly(2, {(1, 0): 1, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]
    assert (p - p).is_zero()


def test_power_and_constant():
    x = Poly.variable(2, 0)
    one = Poly.constant(2, 1)
    assert (x + one) ** 2 == x * x + x * 2 + one
    assert ((x + one) ** 0) == one


def test_divide_by_variable():
    x, y = Poly.variable(2, 0), Poly.variable(2, 1)
    assert (x * y + y * y).divide_by_variable(1) == x + y
    with pytest.raises(ArithmeticError):
        (x + y).divide_by_variable(1)


def test_render():
    w, x, y = (Poly.variable(3, i) for i in range(3))
    assert (x * y - w).render(["w", "x", "y"]) == "x*y - w"
    assert (w * Fraction(-1, 2) + Poly.constant(3, 3)).render(["w", "x", "y"]) == "-1/2*w + 3"
    assert Poly(3).render(["w", "x", "y"]) == "0"


def test_scalar():
    assert Poly.constant(2, Fraction(3, 4)).scalar() == Fraction(3, 4)
    with pytest.raises(ValueError):
        Poly.variable(2, 0).scalar()


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.integers(-3, 3))
def test_coefficients_stay_exact(p, q, s):
    for r in (p * q, (p * q).shift({0: [0, s, 0]}), p + q, p * Fraction(1, 3)):
        assert all(isinstance(c, (int, Fraction)) and not isinstance(c, bool) for c in r.terms.values())


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(-3, 3))
def test_simple_shift_matches_general_path(p, s):
    fast = p.shift({0: [0, 0, s]})
    # a zero entry in a second row forces the general expansion
    general = p.shift({0: [0, 0, s], 1: [0, 0, 0]})
    assert fast == general
