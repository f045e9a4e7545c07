import math
import random
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eta_forge.curvature import CurvatureData, random_curvature, rat_array
from eta_forge.geometry import Geometry
from eta_forge.rational import Q
from eta_forge.reference import (
    CurvedModel,
    CutoffFn,
    c_of_s,
    dominican_check,
    fitted_exponent,
    fourier_asymptotics_check,
    sphere_average,
    symmetric_sphere_rule,
)

PI = math.pi


# -- c(s) -----------------------------------------------------------------------------


def test_c_values():
    assert c_of_s(0) == pytest.approx(-6 * PI ** 2, rel=1e-14)
    assert c_of_s(-2) == pytest.approx(-PI ** 2, rel=1e-14)
    assert abs(c_of_s(2)) < 1e-10
    assert c_of_s(1) == pytest.approx(-32 * PI, rel=1e-14)


@given(st.floats(-2.95, 1.99).filter(lambda s: abs(s) > 1e-3 and abs(s + 2) > 1e-3))
def test_c_matches_unpatched_formula(s):
    direct = -4 * PI * math.gamma(s + 4) * math.sin(PI * s / 2) / (s * (s + 2))
    assert c_of_s(s) == pytest.approx(direct, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("s0", [0.0, -2.0])
def test_c_continuous_at_patches(s0):
    for eps in (1e-10, -1e-10):
        assert abs(c_of_s(s0 + eps) - c_of_s(s0)) < 1e-8


def test_c_domain():
    with pytest.raises(ValueError):
        c_of_s(-3)


# -- cutoff ------------------------------------------------------------------------------


@pytest.mark.parametrize("recipe", ["smooth", "hermite5"])
def test_cutoff_shape(recipe):
    chi = CutoffFn(0.5, 1.0, recipe)
    r = np.linspace(0, 1.5, 3001)
    v = chi(r)
    assert (v[r <= 0.5] == 1).all() and (v[r >= 1.0] == 0).all()
    assert (np.diff(v) <= 1e-15).all()
    # second differences stay small across the joins (C^2)
    h = 1e-4
    for join in (0.5, 1.0):
        d2 = [(chi(x + h) - 2 * chi(x) + chi(x - h)) / h ** 2 for x in (join - 2 * h, join + 2 * h)]
        assert abs(d2[0] - d2[1]) < 0.1


def test_cutoff_rejects_bad_radii():
    with pytest.raises(ValueError):
        CutoffFn(1.0, 0.5)
    with pytest.raises(ValueError):
        CutoffFn(0.5, 1.0, "box")


# -- radial lemmas ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "t, xi, lemma, closed",
    [(-1, 50, 1, PI / 2), (0, 50, 1, 0.02), (-2, 50, 2, 50.0)],
)
def test_dominican_examples(t, xi, lemma, closed):
    c, q, err = dominican_check(t, xi, lemma)
    assert c == pytest.approx(closed, rel=1e-15)
    assert err < 1e-6


@pytest.mark.parametrize("lemma, ts", [(1, (-1.5, -1, 0, 0.7)), (2, (-3, -2, -1, 0.5))])
@pytest.mark.parametrize("xi", [20, 50, 100])
def test_dominican_grid(lemma, ts, xi):
    for t in ts:
        c, q, err = dominican_check(t, xi, lemma)
        assert err <= 1e-6 * abs(c)


def test_dominican_ranges():
    with pytest.raises(ValueError):
        dominican_check(-2, 10, 1)
    with pytest.raises(ValueError):
        dominican_check(-4, 10, 2)
    with pytest.raises(ValueError):
        dominican_check(0, 10, 3)


# -- Fourier asymptotics ----------------------------------------------------------------------


def test_fourier_s_zero():
    r = fourier_asymptotics_check(0.0, 30.0)
    assert r["predicted"] == pytest.approx(-6 * PI ** 2 * (-1 / 3) / 30 ** 3, rel=1e-14)
    assert r["rel_err"] <= 2e-2


@pytest.mark.parametrize("s", [-0.5, 0.0, 0.5, 1.0])
def test_fourier_structure_and_trend(s):
    rows = [fourier_asymptotics_check(s, xi) for xi in (20.0, 30.0, 40.0)]
    for r in rows:
        assert r["ratio_33_22"] == pytest.approx(-2, abs=1e-8)
        assert r["trace_rel"] < 1e-8
    errs = [r["rel_err"] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] <= 2e-2


def test_fourier_domain():
    with pytest.raises(ValueError):
        fourier_asymptotics_check(2.0, 30.0)
    with pytest.raises(ValueError):
        fourier_asymptotics_check(0.0, 5.0)


# -- sphere averages -----------------------------------------------------------------------------


def test_rule_is_symmetric_and_exact():
    nodes = symmetric_sphere_rule()
    assert len(nodes) == 174
    s = set(nodes)
    for w in nodes:
        assert sum(v * v for v in w) == 1
        for perm in permutations(range(3)):
            for signs in product((1, -1), repeat=3):
                assert tuple(signs[i] * w[perm[i]] for i in range(3)) in s


@pytest.mark.parametrize("seed", [1, 2, 3])
@pytest.mark.parametrize("r", [0.1, 0.05])
def test_symmetric_average_is_zero(seed, r):
    assert sphere_average(0.5, r, random_curvature(seed)) == 0.0


def test_zero_curvature():
    c = CurvatureData(rat_array((3, 3)), rat_array((3, 3, 3)))
    assert sphere_average(1.0, 0.1, c) == 0.0


def test_unsymmetric_nodes_see_the_integrand():
    # negative control: a lopsided node set does not average the quadratic form away
    rng = random.Random(0)
    nodes = []
    for _ in range(12):
        v = np.array([rng.uniform(0.2, 1) for _ in range(3)])
        nodes.append(tuple(v / np.linalg.norm(v)))
    assert sphere_average(0.5, 0.1, random_curvature(1), nodes=nodes) != 0.0


def test_sphere_domain():
    with pytest.raises(ValueError):
        sphere_average(-2, 0.1, random_curvature(1))


def test_symmetrised_average_decays():
    c = random_curvature(1)
    model = CurvedModel(Geometry.from_curvature(c, "general"), c, seed=1)
    radii = (0.1, 0.05, 0.025)
    vals = [model.symmetrised_average(0.5, r) for r in radii]
    assert fitted_exponent(radii, vals) >= 1.4
    defects = [model.defect(0.5, r) for r in radii]
    assert fitted_exponent(radii, defects) == pytest.approx(1.5, abs=0.15)


def test_fitted_exponent_oracle():
    radii = [0.1, 0.05, 0.025]
    assert fitted_exponent(radii, [3 * r ** 2.5 for r in radii]) == pytest.approx(2.5)
