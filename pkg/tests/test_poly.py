import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from bunchain.errors import PolyParseError
from bunchain.jets import random_poly
from bunchain.poly import Poly, parse

VARS = ("x", "y", "u")
SYMS = sympy.symbols(VARS)


def to_sympy(p: Poly):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator)
                       * sympy.Mul(*[s ** e for s, e in zip(SYMS, exps)])
                       for exps, c in p.terms.items()])


def polys(degree=3):
    return st.integers(0, 2**31).map(lambda s: random_poly(random.Random(s), VARS, degree))


def same(p: Poly, expr) -> bool:
    return sympy.expand(to_sympy(p) - expr) == 0


def test_constructors():
    x = Poly.var(VARS, "x")
    assert (x * x).degree() == 2
    assert Poly.constant(VARS, 0).is_zero()
    assert Poly.monomial(VARS, (1, 2, 0), Fraction(1, 2)).coefficient((1, 2, 0)) == Fraction(1, 2)
    assert (x - x).terms == {}


def test_zero_coefficients_not_stored():
    p = Poly(VARS, {(1, 0, 0): 0, (0, 1, 0): 2})
    assert list(p.terms) == [(0, 1, 0)]


@settings(max_examples=80, deadline=None)
@given(polys(), polys())
def test_ring_ops_match_sympy(p, q):
    P, Q = to_sympy(p), to_sympy(q)
    assert same(p + q, P + Q)
    assert same(p - q, P - Q)
    assert same(p * q, P * Q)
    assert same(p ** 2, P ** 2)
    assert same(p / 3, P / 3)


@settings(max_examples=80, deadline=None)
@given(polys(4), st.sampled_from(VARS), st.integers(0, 3))
def test_diff_matches_sympy(p, name, times):
    assert same(p.diff(name, times), sympy.diff(to_sympy(p), sympy.Symbol(name), times))


@settings(max_examples=60, deadline=None)
@given(polys(), st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=5), min_size=3, max_size=3))
def test_evaluate_matches_sympy(p, point):
    expected = to_sympy(p).subs(dict(zip(SYMS, (sympy.Rational(f.numerator, f.denominator) for f in point))))
    assert p.evaluate(point) == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))
    assert p.evaluate(dict(zip(VARS, point))) == p.evaluate(point)


@settings(max_examples=60, deadline=None)
@given(polys(2), polys(2), polys(2))
def test_substitute_matches_sympy(p, a, b):
    out = p.substitute({"x": a, "u": b}, VARS)
    expected = to_sympy(p).subs({SYMS[0]: to_sympy(a), SYMS[2]: to_sympy(b)}, simultaneous=True)
    assert same(out, expected)


@settings(max_examples=100, deadline=None)
@given(polys(4))
def test_parse_round_trip(p):
    assert parse(str(p), VARS) == p


def test_parse_examples():
    x, y = Poly.var(VARS, "x"), Poly.var(VARS, "y")
    assert parse("x^2*y", VARS) == x * x * y
    assert parse("3/2 * x - y + 1", VARS) == Fraction(3, 2) * x - y + 1
    assert parse("-x^2 - 2*y", VARS) == -(x * x) - 2 * y
    assert parse("0", VARS).is_zero()


@pytest.mark.parametrize("text", ["", "x^", "x y", "z + 1", "1/0", "1.5*x", "x^-1", "x**2", "+", "x + -y"])
def test_parse_errors(text):
    with pytest.raises(PolyParseError):
        parse(text, VARS)


def test_str_is_readable():
    p = parse("3/2*x^2*u - y + 1", VARS)
    assert str(p) == "3/2 * x^2 * u - y + 1"
    assert str(Poly(VARS)) == "0"


def test_hash_and_equality_ignore_construction_order():
    a = parse("x + y", VARS)
    b = parse("y + x", VARS)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


def test_partial_multi_index():
    p = parse("x^2*y^3", VARS)
    assert p.partial((1, 2, 0)) == parse("12*x*y", VARS)
