from itertools import product

import pytest

from eta_forge.curvature import R3, random_curvature
from eta_forge.geometry import Geometry, GeometryError
from eta_forge.jets import Jet


@pytest.fixture(scope="module", params=["general", "curvature_free_origin"])
def geo(request):
    c = random_curvature(5)
    if request.param == "curvature_free_origin":
        c = c.with_flat_origin()
    return Geometry.from_curvature(c, request.param)


def test_normal_coordinates(geo):
    # g_ab(x) x^b = x_a
    for a in R3:
        lhs = sum((geo.g[a, b] * Jet.var(b, geo.order) for b in R3), start=Jet.zero(geo.order))
        assert lhs.agrees_with(Jet.var(a, geo.order))


def test_christoffel_vanish_at_origin(geo):
    assert all(G.constant() == 0 for G in geo.christoffel.flat)


def test_curvature_recovered_at_origin(geo):
    c = geo.curvature
    R = geo.riemann_at_origin()
    for idx in product(R3, R3, R3, R3):
        assert R[idx] == c.riem0[idx]
    dR = geo.nabla_ricci_at_origin()
    for idx in product(R3, R3, R3):
        assert dR[idx] == c.dric0[idx]


def test_inverse_metric(geo):
    for a, b in product(R3, R3):
        val = sum((geo.g[a, m] * geo.ginv[m, b] for m in R3), start=Jet.zero(geo.order))
        assert val.agrees_with(Jet.const(int(a == b), geo.order))


def test_gauge_requires_flat_origin():
    with pytest.raises(GeometryError):
        Geometry.from_curvature(random_curvature(1), "curvature_free_origin")
    with pytest.raises(GeometryError):
        Geometry.from_curvature(random_curvature(1), "bogus")


def test_flat_metric():
    geo = Geometry.flat()
    assert all(G.is_zero() for G in geo.christoffel.flat)
    assert geo.scalar.is_zero()
