from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eta_forge.jets import Jet, JetError, monomials_upto
from eta_forge.rational import Q

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def polys(draw, degree=3, order=8):
    exps = monomials_upto(3, degree)
    coeffs = draw(st.lists(small, min_size=len(exps), max_size=len(exps)))
    return Jet({e: Q(c.numerator, c.denominator) for e, c in zip(exps, coeffs)}, order)


points = st.tuples(small, small, small)


@given(polys(), polys(), points)
def test_product_evaluates_pointwise(a, b, p):
    p = tuple(Q(v.numerator, v.denominator) for v in p)
    assert (a * b)(*p) == a(*p) * b(*p)


@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Jet.zero(8)


@given(polys(), polys(), st.integers(0, 2))
def test_leibniz(a, b, k):
    assert (a * b).derive(k) == a.derive(k) * b + a * b.derive(k)


@given(polys(degree=2, order=5))
def test_inverse_and_sqrt(a):
    u = a - Jet.const(a.constant(), 5) + Jet.const(1, 5)  # unit constant term
    assert (u * u.invert()).agrees_with(Jet.const(1, 5))
    r = u.sqrt()
    assert (r * r).agrees_with(u)


def test_truncation_drops_high_terms():
    x = Jet.var(0, order=2)
    assert x * x * x == Jet.zero(2)
    assert (x * x)[(2, 0, 0)] == 1


def test_derivative_lowers_order():
    x = Jet.var(1, order=4)
    assert (x ** 3).derive(1) == Jet.mono((0, 2, 0), 3, order=3)
    assert (x ** 3).derive(1).order == 3


def test_mismatched_variables_rejected():
    with pytest.raises(JetError):
        Jet.var(0) + Jet.var(0, nvars=6)
    with pytest.raises(JetError):
        Jet({(1, 0): 1})


def test_exact_rationals():
    j = Jet.const(Q(1, 3)) * Jet.const(3)
    assert j.constant() == 1
    assert Fraction(str(Jet.const(Q(2, 6)).constant())) == Fraction(1, 3)
