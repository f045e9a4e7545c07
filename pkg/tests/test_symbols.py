from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eta_forge.curvature import random_curvature
from eta_forge.geometry import Geometry
from eta_forge.hodge import DiffOpJet, ScalarOp
from eta_forge.jets import Jet, monomials_upto
from eta_forge.powers import residue_coefficient
from eta_forge.rational import Q
from eta_forge.symbols import (
    MatrixSymbol,
    Symbol,
    SymbolError,
    canonical_text,
    centre_witness,
    compose,
    equal_as_jets,
    equal_at_centre,
    is_zero_at_centre,
    matrix_compose,
    poisson_bracket,
    residue_map,
)

GEO = Geometry.from_curvature(random_curvature(7))
small = st.integers(-3, 3)


@st.composite
def scalar_ops(draw, max_order=2):
    """Random scalar differential operator with polynomial coefficients."""
    coeffs = {}
    for kappa in monomials_upto(3, max_order):
        if draw(st.booleans()):
            c = {e: draw(small) for e in monomials_upto(3, 2) if draw(st.booleans())}
            coeffs[kappa] = Jet(c, GEO.order)
    return ScalarOp(coeffs)


def _embed(op):
    entries = [[ScalarOp() for _ in range(3)] for _ in range(3)]
    entries[0][0] = op
    return DiffOpJet(entries)


@given(scalar_ops(), scalar_ops())
def test_compose_matches_operator_composition(a, b):
    A, B = _embed(a), _embed(b)
    via_ops = (A @ B).symbol(GEO).m[0, 0]
    via_symbols = compose(A.symbol(GEO).m[0, 0], B.symbol(GEO).m[0, 0], min_degree=0)
    assert equal_as_jets(via_ops, via_symbols)


@given(scalar_ops(1), scalar_ops(1))
def test_scalar_bracket_antisymmetric(a, b):
    sa, sb = _embed(a).symbol(GEO).m[0, 0], _embed(b).symbol(GEO).m[0, 0]
    total = poisson_bracket(sa, sb) + poisson_bracket(sb, sa)
    assert equal_as_jets(total, Symbol.zero("norm", GEO))


@pytest.mark.parametrize("p", [Q(-1, 2), Q(-3), Q(5, 2)])
def test_xi_derivative_of_norm_power(p):
    flat = Geometry.flat()
    got = Symbol.power(p, "norm", flat).dxi(1)
    want = Symbol.from_terms({((0, 1, 0), p - 1, 0): Jet.const(2 * p, flat.order)}, "norm", flat)
    assert equal_at_centre(got, want)
    assert got.degrees() == [2 * p - 1]


def test_identity_is_neutral():
    I = MatrixSymbol.identity("norm", GEO)
    h = _embed(ScalarOp.d(0, GEO.order) @ ScalarOp.d(1, GEO.order)).symbol(GEO)
    out = matrix_compose(I, h, min_degree=0)
    assert all(equal_as_jets(x, y) for x, y in zip(out.m.flat, h.m.flat))


def test_residue_map_degree_and_coefficient():
    s = Q(1, 2)
    r = Symbol.power(-3, "resolvent", GEO)  # (N - lambda)^-3, degree -6
    q = residue_map(r, s, residue_coefficient)
    assert q.kind == "norm"
    assert q.degrees() == [-6 + 1 - s]
    ((_, p, _), jet), = q.terms().items()
    assert p == (1 - s) / 2 - 3
    assert jet.constant() == residue_coefficient(3, s)
    with pytest.raises(SymbolError):
        residue_map(Symbol.power(-1, "norm", GEO), s, residue_coefficient)


def test_centre_oracle_sees_differences():
    a = Symbol.from_terms({((2, 0, 0), Q(-1), 0): Jet.const(1)}, "norm", GEO)
    b = Symbol.from_terms({((0, 2, 0), Q(-1), 0): Jet.const(1)}, "norm", GEO)
    assert not equal_at_centre(a, b)
    w = centre_witness(a, b)
    assert w is not None and w["lhs"] != w["rhs"]
    assert is_zero_at_centre(a - a)
    assert centre_witness(a, a) is None


def test_evaluation_needs_norm_kind():
    with pytest.raises(SymbolError):
        Symbol.power(-1, "resolvent", GEO).eval_centre((Q(1), Q(0), Q(0)))


def test_kinds_do_not_mix():
    with pytest.raises(SymbolError):
        Symbol.power(-1, "resolvent", GEO) + Symbol.power(-1, "norm", GEO)
    with pytest.raises(SymbolError):
        Symbol("weird", GEO, {})


def test_canonical_text_is_stable():
    h = _embed(ScalarOp.d(2, GEO.order)).symbol(GEO)
    assert canonical_text(h.m[0, 0]) == canonical_text(h.m[0, 0])
    assert canonical_text(Symbol.zero("norm", GEO)) == "0"


def test_floor_marks_unknown_degrees():
    a = Symbol.power(-1, "resolvent", GEO)
    b = a.truncate_below(-3)
    out = compose(b, a, min_degree=-5)
    assert out.floor is not None and out.floor >= -5
    assert all(d >= out.floor for d in out.degrees())
