import pytest

from eta_forge.curvature import random_curvature
from eta_forge.geometry import Geometry
from eta_forge.transport import transport_double_jet


@pytest.fixture(scope="module", params=[3, 6])
def Z(request):
    return transport_double_jet(Geometry.from_curvature(random_curvature(request.param)))


def test_identity_on_diagonal(Z):
    assert Z.check_identity_on_diagonal()


def test_metric_compatible(Z):
    assert Z.check_metric_compatibility()


def test_backward_is_raised_lowered_forward(Z):
    assert Z.check_swap_identity()


def test_flat_transport_is_identity():
    Z = transport_double_jet(Geometry.flat())
    for n in range(3):
        for a in range(3):
            assert Z.Z[n, a].c == ({(0,) * 6: 1} if n == a else {})
