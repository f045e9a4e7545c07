from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eta_forge.powers import (
    FORMULA_ORDERS,
    agree_through,
    check_resolvent_identity,
    formula_checks,
    formula_q,
    keyhole_residue,
    power_symbols,
    quasi_homogeneous,
    residue_coefficient,
    resolvent_recursion,
    vanishing_checks,
)
from eta_forge.rational import Q
from eta_forge.symbols import SymbolError


def rising(s, n):
    """((s+1)/2)_{n-1} / (n-1)!  -- Gamma-ratio form of the residue, in Fractions."""
    a = (Fraction(s) + 1) / 2
    out = Fraction(1)
    for k in range(n - 1):
        out *= a + k
    return out / factorial(n - 1)


def lagrange(points, x):
    total = Fraction(0)
    for i, (xi, yi) in enumerate(points):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(points):
            if j != i:
                term *= (x - xj) / (xi - xj)
        total += term
    return total


@pytest.mark.parametrize("n", range(1, 8))
def test_residue_against_gamma_ratio(n):
    for s in (Fraction(1, 2), Fraction(-1, 3), Fraction(5, 2), Fraction(7)):
        assert Fraction(str(residue_coefficient(n, Q(s)))) == rising(s, n)


@pytest.mark.parametrize("n", range(1, 6))
def test_residue_interpolation_certificate(n):
    # C_n is a polynomial of degree n - 1 <= 4: five nodes pin it down
    nodes = [Fraction(k, 3) for k in range(5)]
    pts = [(x, Fraction(str(residue_coefficient(n, Q(x))))) for x in nodes]
    for x in (Fraction(-7, 5), Fraction(11, 2), Fraction(100)):
        assert lagrange(pts, x) == Fraction(str(residue_coefficient(n, Q(x))))
        assert lagrange(pts, x) == rising(x, n)


@pytest.mark.parametrize("n", [2, 3])
def test_keyhole_at_half(n):
    got = keyhole_residue(n, 0.5)
    assert abs(got - float(residue_coefficient(n, Q(1, 2)))) < 1e-10


@given(st.integers(1, 5), st.floats(-0.9, 3.0), st.floats(0.5, 3.0))
def test_keyhole_matches_residue(n, s, xi):
    got = keyhole_residue(n, s, xi_norm=xi)
    want = float(rising(Fraction(s), n)) * xi ** (1 - s - 2 * n)
    assert abs(got - want) <= 1e-8 * max(1.0, abs(want))


def test_residue_domain():
    with pytest.raises(ValueError):
        residue_coefficient(0, 1)
    with pytest.raises(ValueError):
        keyhole_residue(2, -1.0)


def test_resolvent_identity(ctx, general_ctx):
    assert check_resolvent_identity(ctx.hodge, ctx.resolvent)
    assert check_resolvent_identity(general_ctx.hodge, general_ctx.resolvent)
    assert quasi_homogeneous(ctx.resolvent)


def test_resolvent_depth_limited(ctx):
    with pytest.raises(SymbolError):
        resolvent_recursion(ctx.hodge, depth=4)


def test_power_symbols_need_contour_range(ctx):
    with pytest.raises(SymbolError):
        power_symbols(ctx.resolvent, -1)


@pytest.mark.parametrize("s", [Q(1, 2), Q(1), Q(5, 2)])
def test_formula_checks(general_ctx, s):
    q = general_ctx.powers(s)
    rep = formula_checks(general_ctx.hodge, general_ctx.resolvent, q, s)
    for key in ("r_-3", "r_-4", "r_-5", "q_-s-2", "q_-s-3", "q_-s-4"):
        assert rep[key], key
    # the cubic-derivative coefficients as displayed are twice the derived ones
    assert not rep["r_-5 displayed"] and not rep["q_-s-4 displayed"]


def test_perturbed_formula_fails(general_ctx):
    s = Q(1)
    q = general_ctx.powers(s)
    j = 2
    good = formula_q(general_ctx.hodge, j, s)
    assert agree_through(q[j], good, FORMULA_ORDERS[j])
    assert not agree_through(q[j], good.scale(Q(101, 100)), FORMULA_ORDERS[j])
    assert not agree_through(q[j], formula_q(general_ctx.hodge, j, s + 2), FORMULA_ORDERS[j])


@pytest.mark.parametrize("s", [Q(0), Q(1, 2), Q(2)])
def test_vanishing(ctx, s):
    rep = vanishing_checks(ctx.hodge, ctx.powers(s), s)
    assert all(rep.values()), rep
