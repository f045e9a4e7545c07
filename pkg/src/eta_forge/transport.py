"""Parallel transport along short geodesics as a jet in the six variables (x, y)."""
from itertools import product

import numpy as np

from .curvature import R3
from .geometry import Geometry, GeometryError
from .jets import Jet
from .rational import Q

TRANSPORT_ORDER = 3


class TauPoly:
    """Polynomial in the path parameter tau with six-variable jet coefficients."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        self.order = order

    @classmethod
    def const(cls, jet):
        return cls({0: jet}, jet.order)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return TauPoly(out, min(self.order, other.order))

    def __neg__(self):
        return TauPoly({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            other = TauPoly.const(other)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                p = a * b
                out[i + j] = out[i + j] + p if i + j in out else p
        return TauPoly(out, min(self.order, other.order))

    def derive_tau(self):
        return TauPoly({k - 1: v.scale(k) for k, v in self.coeffs.items() if k}, self.order)

    def integrate(self):
        """Antiderivative vanishing at tau = 0."""
        return TauPoly({k + 1: v.scale(Q(1, k + 1)) for k, v in self.coeffs.items()}, self.order)

    def at_one(self):
        return sum(self.coeffs.values(), start=Jet.zero(self.order, 6))

    def is_zero(self):
        return not self.coeffs

    def truncate(self, order):
        return TauPoly({k: v.truncate(order) for k, v in self.coeffs.items()}, order)


def _compose(jet3, path):
    """jet3(path(tau)) where path is a list of three TauPolys without constant term."""
    order = min(path[0].order, jet3.order)
    cache = {}

    def power(i, k):
        if (i, k) not in cache:
            cache[(i, k)] = (
                TauPoly.const(Jet.const(1, order, 6)) if k == 0 else power(i, k - 1) * path[i]
            ).truncate(order)
        return cache[(i, k)]

    out = TauPoly({}, order)
    for e, v in jet3.c.items():
        term = TauPoly.const(Jet.const(v, order, 6))
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term.truncate(order)
    return out


def _solve_geodesic(christoffel, order):
    """Geodesic from x (tau = 0) to y (tau = 1) by Picard iteration on the boundary value problem."""
    x = [Jet.var(i, order, 6) for i in R3]
    u = [Jet.var(3 + i, order, 6) - x[i] for i in R3]
    base = [TauPoly({0: x[i], 1: u[i]}, order) for i in R3]
    path = list(base)
    for _ in range(order + 2):
        vel = [p.derive_tau() for p in path]
        gam = {idx: _compose(christoffel[idx], path) for idx in product(R3, R3, R3)}
        new = []
        for a in R3:
            force = TauPoly({}, order)
            for m, n in product(R3, R3):
                force = force - gam[a, m, n] * vel[m] * vel[n]
            twice = force.integrate().integrate()
            correction = twice - TauPoly({1: twice.at_one()}, order)
            new.append((base[a] + correction).truncate(order))
        if all((p - q).is_zero() for p, q in zip(new, path)):
            break
        path = new
    return path


def transport_double_jet(g, order=TRANSPORT_ORDER):
    """Z[n, a](x, y): component a at y of the parallel transport of e_n from x to y."""
    geo = g if isinstance(g, Geometry) else Geometry(g)
    for a, b, c in product(R3, R3, R3):
        if geo.christoffel[a, b, c].constant():
            raise GeometryError("transport needs normal coordinates (Gamma(0) = 0)")
    G = geo.christoffel
    path = _solve_geodesic(G, order)
    vel = [p.derive_tau() for p in path]
    gam = {idx: _compose(G[idx], path) for idx in product(R3, R3, R3)}
    ident = [[TauPoly.const(Jet.const(int(i == j), order, 6)) for j in R3] for i in R3]
    V = ident
    for _ in range(order + 2):
        new = []
        for n in R3:
            row = []
            for a in R3:
                rhs = TauPoly({}, order)
                for m, b in product(R3, R3):
                    rhs = rhs - gam[a, m, b] * vel[m] * V[n][b]
                row.append((ident[n][a] + rhs.truncate(order).integrate()).truncate(order))
            new.append(row)
        done = all((new[n][a] - V[n][a]).is_zero() for n, a in product(R3, R3))
        V = new
        if done:
            break
    Z = np.empty((3, 3), dtype=object)
    for n, a in product(R3, R3):
        Z[n, a] = V[n][a].at_one()
    return TransportJet(Z, geo)


def swap_xy(jet6):
    return Jet._raw({e[3:] + e[:3]: v for e, v in jet6.c.items()}, jet6.order, 6)


def restrict(jet6, which, point_zero=True):
    """Set one group of variables to zero; returns a three-variable jet in the other group."""
    out = {}
    for e, v in jet6.c.items():
        if which == "x":
            if any(e[:3]):
                continue
            out[e[3:]] = v
        else:
            if any(e[3:]):
                continue
            out[e[:3]] = v
    return Jet._raw(out, jet6.order, 3)


def diagonal(jet6):
    """Restriction to y = x."""
    out = {}
    for e, v in jet6.c.items():
        f = (e[0] + e[3], e[1] + e[4], e[2] + e[5])
        out[f] = out.get(f, 0) + v
    return Jet({f: v for f, v in out.items()}, jet6.order, 3)


class TransportJet:
    """Forward transport Z[n, a](x, y) together with the metric context it came from."""

    def __init__(self, Z, geometry):
        self.Z = Z
        self.geometry = geometry
        self.order = Z[0, 0].order

    def backward(self):
        """W[b, a](y, x): transport from y back to x, i.e. the swapped double jet."""
        out = np.empty((3, 3), dtype=object)
        for b, a in product(R3, R3):
            out[b, a] = swap_xy(self.Z[b, a])
        return out

    def backward_at_centre(self):
        """W[b, a](y, 0) as a jet in y: vectors at y carried to the origin."""
        W = self.backward()
        out = np.empty((3, 3), dtype=object)
        for b, a in product(R3, R3):
            out[b, a] = restrict(W[b, a], "x")
        return out

    def raised_lowered(self):
        """Z^a_b(x, y) = g^{am}(x) Z_m^n(x, y) g_{nb}(y)."""
        geo = self.geometry
        order = self.order
        gy = [[geo.g[i, j].embed(6, 3).truncate(order) for j in R3] for i in R3]
        gix = [[geo.ginv[i, j].embed(6, 0).truncate(order) for j in R3] for i in R3]
        out = np.empty((3, 3), dtype=object)
        for a, b in product(R3, R3):
            val = Jet.zero(order, 6)
            for m, n in product(R3, R3):
                val = val + gix[a][m] * self.Z[m, n] * gy[n][b]
            out[a, b] = val
        return out

    def check_identity_on_diagonal(self):
        return all(
            diagonal(self.Z[n, a]) == Jet.const(int(n == a), self.order) for n, a in product(R3, R3)
        )

    def check_metric_compatibility(self):
        geo = self.geometry
        order = self.order
        for m, n in product(R3, R3):
            lhs = Jet.zero(order, 6)
            for a, b in product(R3, R3):
                lhs = lhs + geo.g[a, b].embed(6, 3).truncate(order) * self.Z[m, a] * self.Z[n, b]
            rhs = geo.g[m, n].embed(6, 0).truncate(order)
            if not lhs.agrees_with(rhs, order):
                return False
        return True

    def check_swap_identity(self):
        W = self.backward()
        R = self.raised_lowered()
        return all(W[b, a].agrees_with(R[a, b], self.order) for a, b in product(R3, R3))

    def centre_expansion(self):
        """Z^a_b(0, y) as jets in y."""
        R = self.raised_lowered()
        out = np.empty((3, 3), dtype=object)
        for a, b in product(R3, R3):
            out[a, b] = restrict(R[a, b], "x")
        return out
