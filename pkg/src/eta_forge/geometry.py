"""Normal-coordinate metric jets, the Christoffel/curvature chain and parallel transport."""
from functools import cached_property
from itertools import product

import numpy as np

from .curvature import EPS, R3
from .jets import Jet, JetError
from .rational import Q

METRIC_ORDER = 4


class GeometryError(ValueError):
    pass


def jet_array(shape, order=METRIC_ORDER, nvars=3):
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Jet.zero(order, nvars)
    return out


def identity_jets(order=METRIC_ORDER):
    out = jet_array((3, 3), order)
    for i in R3:
        out[i, i] = Jet.const(1, order)
    return out


def metric_from_curvature(c, gauge="general", order=METRIC_ORDER):
    """Cubic normal-coordinate metric built from Riem(0) and nabla Riem(0).

    The cubic polynomial is used as an exact model metric: it satisfies
    g_{ab}(x) x^b = x_a, so the coordinates are normal for it, and its jets
    through degree three are those of any metric with the given curvature data.
    """
    if gauge not in ("general", "curvature_free_origin"):
        raise GeometryError(f"unknown gauge {gauge!r}")
    if gauge == "curvature_free_origin" and not c.flat_origin:
        raise GeometryError("curvature_free_origin gauge requires Riem(0) = 0")
    riem, driem = c.riem0, c.driem0
    g = np.empty((3, 3), dtype=object)
    for a, b in product(R3, R3):
        coeffs = {(0, 0, 0): int(a == b)}
        if gauge == "general":
            for m, n in product(R3, R3):
                e = [0, 0, 0]
                e[m] += 1
                e[n] += 1
                e = tuple(e)
                coeffs[e] = coeffs.get(e, 0) - Q(1, 3) * riem[a, m, b, n]
        for s, m, n in product(R3, R3, R3):
            e = [0, 0, 0]
            e[s] += 1
            e[m] += 1
            e[n] += 1
            e = tuple(e)
            coeffs[e] = coeffs.get(e, 0) - Q(1, 6) * driem[s, a, m, b, n]
        g[a, b] = Jet(coeffs, order)
    return g


def matrix_mul(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            out[i, j] = sum((a[i, l] * b[l, j] for l in range(k)), start=a[i, 0] * 0)
    return out


def matrix_inverse(g):
    """Inverse of a jet matrix equal to the identity at the origin (Neumann series)."""
    order = g[0, 0].order
    h = g - identity_jets(order)
    for i, j in product(R3, R3):
        if h[i, j].constant():
            raise JetError("matrix inverse needs identity at the origin")
    out = identity_jets(order)
    power = identity_jets(order)
    for k in range(1, order + 1):
        power = matrix_mul(power, h)
        if all(p.is_zero() for p in power.flat):
            break
        out = out + (power if k % 2 == 0 else -power)
    return out


def det3(m):
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


class Geometry:
    """Metric jets together with everything derived from them (the shared symbol context)."""

    def __init__(self, g, curvature=None, gauge=None):
        self.g = g
        self.order = g[0, 0].order
        self.curvature = curvature
        self.gauge = gauge
        for a, b in product(R3, R3):
            if g[a, b] != g[b, a]:
                raise GeometryError("metric must be symmetric")
            if g[a, b].constant() != int(a == b):
                raise GeometryError("metric must be the identity at the origin")

    @classmethod
    def from_curvature(cls, c, gauge="general", order=METRIC_ORDER):
        return cls(metric_from_curvature(c, gauge, order), curvature=c, gauge=gauge)

    @classmethod
    def flat(cls, order=METRIC_ORDER):
        return cls(identity_jets(order))

    @cached_property
    def ginv(self):
        return matrix_inverse(self.g)

    @cached_property
    def dg(self):
        """dg[k, a, b] = d_k g_{ab}."""
        out = np.empty((3, 3, 3), dtype=object)
        for k, a, b in product(R3, R3, R3):
            out[k, a, b] = self.g[a, b].derive(k)
        return out

    @cached_property
    def dginv(self):
        """dginv[k, a, b] = d_k g^{ab}."""
        out = np.empty((3, 3, 3), dtype=object)
        for k, a, b in product(R3, R3, R3):
            out[k, a, b] = self.ginv[a, b].derive(k)
        return out

    @cached_property
    def det(self):
        return det3(self.g)

    @cached_property
    def rho(self):
        return self.det.sqrt()

    @cached_property
    def rho_inv(self):
        return self.rho.invert()

    @cached_property
    def christoffel(self):
        """christoffel[a, b, c] = Gamma^a_{bc}."""
        dg = self.dg
        low = np.empty((3, 3, 3), dtype=object)
        for d, b, c in product(R3, R3, R3):
            low[d, b, c] = (dg[b, d, c] + dg[c, d, b] - dg[d, b, c]).scale(Q(1, 2))
        out = np.empty((3, 3, 3), dtype=object)
        for a, b, c in product(R3, R3, R3):
            out[a, b, c] = sum((self.ginv[a, d] * low[d, b, c] for d in R3), start=Jet.zero(self.order))
        return out

    @cached_property
    def riemann_up(self):
        """riemann_up[k, l, m, n] = R^k_{lmn} with the d_m Gamma^k_{nl} - ... convention."""
        G = self.christoffel
        dG = np.empty((3, 3, 3, 3), dtype=object)
        for m, k, n, l in product(R3, R3, R3, R3):
            dG[m, k, n, l] = G[k, n, l].derive(m)
        out = np.empty((3, 3, 3, 3), dtype=object)
        for k, l, m, n in product(R3, R3, R3, R3):
            val = dG[m, k, n, l] - dG[n, k, m, l]
            for h in R3:
                val = val + G[k, m, h] * G[h, n, l] - G[k, n, h] * G[h, m, l]
            out[k, l, m, n] = val
        return out

    @cached_property
    def riemann(self):
        """All indices down: R_{klmn} = g_{kp} R^p_{lmn}."""
        up = self.riemann_up
        out = np.empty((3, 3, 3, 3), dtype=object)
        for k, l, m, n in product(R3, R3, R3, R3):
            out[k, l, m, n] = sum((self.g[k, p] * up[p, l, m, n] for p in R3), start=Jet.zero(self.order))
        return out

    @cached_property
    def ricci(self):
        up = self.riemann_up
        out = np.empty((3, 3), dtype=object)
        for m, n in product(R3, R3):
            out[m, n] = up[0, m, 0, n] + up[1, m, 1, n] + up[2, m, 2, n]
        return out

    @cached_property
    def scalar(self):
        return sum((self.ginv[m, n] * self.ricci[m, n] for m, n in product(R3, R3)), start=Jet.zero(self.order))

    @cached_property
    def E_low(self):
        """E_{abc} = rho * eps_{abc}."""
        out = np.empty((3, 3, 3), dtype=object)
        for a, b, c in product(R3, R3, R3):
            out[a, b, c] = self.rho.scale(EPS[a, b, c])
        return out

    @cached_property
    def E_mixed(self):
        """E_mixed[a, b, c] = E_a^{bc} = g^{bm} g^{cn} E_{amn}."""
        half = np.empty((3, 3, 3), dtype=object)
        for a, m, c in product(R3, R3, R3):
            half[a, m, c] = sum((self.ginv[c, n] * self.E_low[a, m, n] for n in R3), start=Jet.zero(self.order))
        out = np.empty((3, 3, 3), dtype=object)
        for a, b, c in product(R3, R3, R3):
            out[a, b, c] = sum((self.ginv[b, m] * half[a, m, c] for m in R3), start=Jet.zero(self.order))
        return out

    @cached_property
    def E_up(self):
        out = np.empty((3, 3, 3), dtype=object)
        for a, b, c in product(R3, R3, R3):
            out[a, b, c] = sum((self.ginv[a, m] * self.E_mixed[m, b, c] for m in R3), start=Jet.zero(self.order))
        return out

    def riemann_at_origin(self):
        return np.vectorize(lambda j: j.constant(), otypes=[object])(self.riemann)

    def nabla_riemann_at_origin(self):
        """nabla_s R_{abcd}(0); equals the plain derivative because Gamma(0) = 0."""
        out = np.empty((3, 3, 3, 3, 3), dtype=object)
        for s, a, b, c, d in product(R3, R3, R3, R3, R3):
            out[s, a, b, c, d] = self.riemann[a, b, c, d].derive(s).constant()
        return out

    def nabla_ricci_at_origin(self):
        out = np.empty((3, 3, 3), dtype=object)
        for s, a, b in product(R3, R3, R3):
            out[s, a, b] = self.ricci[a, b].derive(s).constant()
        return out

    def laplace_beltrami(self, f):
        """rho^{-1} d_m (rho g^{mn} d_n f)."""
        out = Jet.zero(self.order)
        for m in R3:
            inner = sum((self.ginv[m, n] * f.derive(n) for n in R3), start=Jet.zero(self.order))
            out = out + (self.rho * inner).derive(m)
        return self.rho_inv * out


def curvature_chain(g):
    """Christoffels, Riemann, Ricci, scalar curvature, density and E for a metric jet."""
    geo = g if isinstance(g, Geometry) else Geometry(g)
    return {
        "christoffel": geo.christoffel,
        "riemann": geo.riemann,
        "ricci": geo.ricci,
        "scalar": geo.scalar,
        "rho": geo.rho,
        "E": geo.E_low,
    }
