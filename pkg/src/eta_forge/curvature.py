"""Curvature data at the origin of normal coordinates, in dimension three."""
import json
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product

import numpy as np

from .rational import Q, ZERO

R3 = range(3)


def levi_civita():
    eps = np.full((3, 3, 3), ZERO, dtype=object)
    for p in permutations(R3):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    sign = -sign
        eps[p] = Q(sign)
    return eps


EPS = levi_civita()
DELTA = np.array([[Q(int(i == j)) for j in R3] for i in R3], dtype=object)


def rat_array(shape):
    return np.full(shape, ZERO, dtype=object)


def riemann_from_ricci_3d(ric, sc=None):
    """Riemann tensor R_{abcd} of a 3-manifold at a point with g = delta, from Ricci."""
    ric = np.asarray(ric, dtype=object)
    for i, j in product(R3, R3):
        if ric[i, j] != ric[j, i]:
            raise ValueError("Ricci input must be symmetric")
    trace = sum(ric[i, i] for i in R3)
    if sc is None:
        sc = trace
    elif Q(sc) != trace:
        raise ValueError("scalar curvature must equal the trace of the Ricci input")
    half = Q(sc) / 2
    d = DELTA
    out = rat_array((3, 3, 3, 3))
    for a, b, c, e in product(R3, R3, R3, R3):
        out[a, b, c, e] = (
            d[a, c] * ric[b, e] + d[b, e] * ric[a, c] - d[a, e] * ric[b, c] - d[b, c] * ric[a, e]
            - half * (d[a, c] * d[b, e] - d[a, e] * d[b, c])
        )
    return out


def _random_rat(rng):
    return Q(rng.randint(-9, 9), rng.choice((1, 2, 3)))


def _symmetrize_last(t):
    out = rat_array((3, 3, 3))
    for s, m, n in product(R3, R3, R3):
        out[s, m, n] = (t[s, m, n] + t[s, n, m]) / 2
    return out


def bianchi_defect(dric):
    """div_n - (1/2) grad_n Sc of a candidate covariant derivative of Ricci."""
    return [
        sum(dric[m, m, n] for m in R3) - sum(dric[n, m, m] for m in R3) / 2
        for n in R3
    ]


def enforce_contracted_bianchi(dric):
    """Project onto the contracted second Bianchi identity.

    Adding delta_{sm} w_n + delta_{sn} w_m changes the divergence by 4 w and
    half the gradient of the trace by w, so w = -defect / 3 removes the defect.
    """
    w = [-x / 3 for x in bianchi_defect(dric)]
    out = dric.copy()
    for s, m, n in product(R3, R3, R3):
        out[s, m, n] = out[s, m, n] + DELTA[s, m] * w[n] + DELTA[s, n] * w[m]
    return out


@dataclass(frozen=True)
class CurvatureData:
    """Ric(0) and nabla Ric(0) in normal coordinates; Riemann data is rebuilt from them.

    ``dric0[s, m, n]`` is nabla_s Ric_{mn}; ``driem0[s, a, b, c, d]`` is nabla_s R_{abcd}.
    """

    ric0: np.ndarray
    dric0: np.ndarray
    bianchi2: bool = True
    seed: int | None = None

    def __post_init__(self):
        ric = np.asarray(self.ric0, dtype=object)
        dric = np.asarray(self.dric0, dtype=object)
        ric = np.vectorize(Q, otypes=[object])(ric)
        dric = np.vectorize(Q, otypes=[object])(dric)
        if ric.shape != (3, 3) or dric.shape != (3, 3, 3):
            raise ValueError("ric0 must be 3x3 and dric0 3x3x3")
        for i, j in product(R3, R3):
            if ric[i, j] != ric[j, i]:
                raise ValueError("ric0 must be symmetric")
            for s in R3:
                if dric[s, i, j] != dric[s, j, i]:
                    raise ValueError("dric0 must be symmetric in its last two slots")
        if self.bianchi2 and any(bianchi_defect(dric)):
            raise ValueError("dric0 violates the contracted second Bianchi identity")
        ric.setflags(write=False)
        dric.setflags(write=False)
        object.__setattr__(self, "ric0", ric)
        object.__setattr__(self, "dric0", dric)

    @cached_property
    def sc0(self):
        return sum(self.ric0[i, i] for i in R3)

    @cached_property
    def dsc0(self):
        return [sum(self.dric0[s, i, i] for i in R3) for s in R3]

    @cached_property
    def riem0(self):
        return riemann_from_ricci_3d(self.ric0, self.sc0)

    @cached_property
    def driem0(self):
        out = rat_array((3, 3, 3, 3, 3))
        for s in R3:
            out[s] = riemann_from_ricci_3d(self.dric0[s], self.dsc0[s])
        return out

    @property
    def flat_origin(self):
        return not any(self.ric0.flat)

    def with_flat_origin(self):
        return CurvatureData(rat_array((3, 3)), self.dric0, self.bianchi2, self.seed)

    def eps_dric_contraction(self, xi):
        """eps^{abc} nabla_a Ric_b^r xi_c xi_r at the origin (g = delta)."""
        total = ZERO
        for a, b, c in permutations(R3):
            e = EPS[a, b, c]
            for r in R3:
                total += e * self.dric0[a, b, r] * xi[c] * xi[r]
        return total

    # -- serialisation --------------------------------------------------

    def to_json(self):
        doc = {
            "ric0": [[str(v) for v in row] for row in self.ric0],
            "dric0": [[[str(v) for v in row] for row in mat] for mat in self.dric0],
            "bianchi2": self.bianchi2,
            "seed": self.seed,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        ric = doc.get("ric0", [[0] * 3 for _ in R3])
        return cls(
            np.array([[Q(v) for v in row] for row in ric], dtype=object),
            np.array([[[Q(v) for v in row] for row in mat] for mat in doc["dric0"]], dtype=object),
            bool(doc.get("bianchi2", True)),
            doc.get("seed"),
        )


def random_curvature(seed, bianchi2=True, flat_origin=False):
    """Deterministic random curvature data; ``flat_origin`` zeroes Ric(0) (hence Riem(0))."""
    rng = random.Random(seed)
    dric = rat_array((3, 3, 3))
    for s, m, n in product(R3, R3, R3):
        dric[s, m, n] = _random_rat(rng)
    dric = _symmetrize_last(dric)
    if bianchi2:
        dric = enforce_contracted_bianchi(dric)
    ric = rat_array((3, 3))
    for i in R3:
        for j in range(i, 3):
            ric[i, j] = ric[j, i] = _random_rat(rng)
    if flat_origin:
        ric = rat_array((3, 3))
    return CurvatureData(ric, dric, bianchi2, seed)


def riemann_symmetry_violations(r):
    """List of violated algebraic identities of a rank-4 Riemann candidate."""
    bad = []
    for a, b, c, d in product(R3, R3, R3, R3):
        if r[a, b, c, d] != -r[b, a, c, d]:
            bad.append(("antisym12", (a, b, c, d)))
        if r[a, b, c, d] != -r[a, b, d, c]:
            bad.append(("antisym34", (a, b, c, d)))
        if r[a, b, c, d] != r[c, d, a, b]:
            bad.append(("pair", (a, b, c, d)))
        if r[a, b, c, d] + r[a, c, d, b] + r[a, d, b, c] != 0:
            bad.append(("bianchi1", (a, b, c, d)))
    return bad


def second_bianchi_violations(dr):
    bad = []
    for s, a, b, c, d in product(R3, R3, R3, R3, R3):
        if dr[s, a, b, c, d] + dr[c, a, b, d, s] + dr[d, a, b, s, c] != 0:
            bad.append((s, a, b, c, d))
    return bad


def validate(c):
    """Check all stated symmetries of a CurvatureData; returns a list of problems."""
    problems = [("riem0",) + v for v in riemann_symmetry_violations(c.riem0)]
    for s in R3:
        problems += [("driem0", s) + v for v in riemann_symmetry_violations(c.driem0[s])]
    for a, b in product(R3, R3):
        if sum(c.riem0[k, a, k, b] for k in R3) != c.ric0[a, b]:
            problems.append(("ricci-contraction", a, b))
    if c.bianchi2:
        if any(bianchi_defect(c.dric0)):
            problems.append(("contracted-bianchi2",))
        if second_bianchi_violations(c.driem0):
            problems.append(("bianchi2",))
    return problems
