"""Resolvent parametrix of the Hodge Laplacian and the symbols of its complex powers."""
import cmath
import math
from itertools import product

import numpy as np
from scipy import integrate

from .curvature import R3
from .hodge import hodge_laplacian, hodge_symbol_parts
from .jets import Jet
from .rational import Q, ZERO
from .symbols import (
    MatrixSymbol,
    Symbol,
    SymbolError,
    equal_as_jets,
    is_zero_at_centre,
    matrix_compose,
    poisson_bracket,
    residue_map,
)

MAX_DEPTH = 3


def residue_coefficient(n, s):
    """C_n(s): contour integral of lambda^{-(s+1)/2} (|xi|^2 - lambda)^{-n}, |xi| = 1."""
    if n < 1:
        raise ValueError("residue index must be positive")
    s = Q(s)
    table = {
        1: lambda: Q(1),
        2: lambda: (s + 1) / 2,
        3: lambda: (s + 1) * (s + 3) / 8,
        4: lambda: (s + 1) * (s + 3) * (s + 5) / 48,
        5: lambda: (s + 1) * (s + 3) * (s + 5) * (s + 7) / 384,
    }
    if n in table:
        return table[n]()
    out = Q(1)
    for k in range(1, n):
        out *= s + 2 * k - 1
    return out / (2 ** (n - 1) * math.factorial(n - 1))


def _cquad(f, a, b):
    kw = {"epsabs": 1e-13, "epsrel": 1e-12, "limit": 400}
    re = integrate.quad(lambda u: f(u).real, a, b, **kw)[0]
    im = integrate.quad(lambda u: f(u).imag, a, b, **kw)[0]
    return complex(re, im)


def _gauss(f, a, b, nodes=200):
    """Gauss-Legendre rule; the circle integrand is analytic on the open arc."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = (b - a) / 2
    return half * sum(wi * f(a + half * (xi + 1)) for xi, wi in zip(x, w))


def keyhole_residue(n, s, xi_norm=1.0, radius=None):
    """Numeric (i/2pi) * integral of lambda^{-(s+1)/2} (|xi|^2 - lambda)^{-n} over the keyhole.

    The contour comes in from infinity along arg = pi, circles the origin
    clockwise at the given radius and goes back out along arg = -pi, so the
    pole at |xi|^2 lies outside it.
    """
    if s <= -1:
        raise ValueError("the contour representation needs s > -1")
    N = xi_norm ** 2
    rad = N / 2 if radius is None else radius
    a = (s + 1) / 2

    def on_ray(arg):
        w = cmath.exp(1j * arg)
        return lambda r: (r * w) ** (-a) * (N - r * w) ** (-n) * w

    def on_circle(theta):
        lam = rad * cmath.exp(1j * theta)
        return lam ** (-a) * (N - lam) ** (-n) * 1j * lam

    total = (-_cquad(on_ray(math.pi), rad, math.inf)
             - _gauss(on_circle, -math.pi, math.pi)
             + _cquad(on_ray(-math.pi), rad, math.inf))
    return 1j / (2 * math.pi) * total


def _to_resolvent(ms):
    """Reinterpret a polynomial (p = 0) norm symbol in resolvent kind."""
    def conv(s):
        for (_, p, _) in s.terms():
            if p:
                raise SymbolError("only polynomial symbols can be reinterpreted")
        return Symbol("resolvent", s.geo, s.comps, s.floor)
    return ms.map(conv)


class HodgeSymbol:
    """h = N I + h1 + h0 for the given geometry, with the resolvent-kind operator h - lambda."""

    def __init__(self, geo, op=None):
        self.geo = geo
        self.op = op or hodge_laplacian(geo)
        self.h2, self.h1, self.h0 = hodge_symbol_parts(geo, self.op)
        self._check_principal()
        identity = MatrixSymbol.identity("resolvent", geo, Symbol.power(1, "resolvent", geo))
        self.h_minus_lambda = identity + _to_resolvent(self.h1) + _to_resolvent(self.h0)

    def _check_principal(self):
        ginv = self.geo.ginv
        for a, b in product(R3, R3):
            terms = self.h2[a, b].terms()
            for m in R3:
                for n in range(m, 3):
                    e = [0, 0, 0]
                    e[m] += 1
                    e[n] += 1
                    want = ginv[m, n].scale(1 if m == n else 2) if a == b else Jet.zero(self.geo.order)
                    got = terms.get((tuple(e), ZERO, 0), Jet.zero(self.geo.order))
                    if not got.agrees_with(want):
                        raise SymbolError("principal symbol of the Hodge Laplacian is not N I")


def resolvent_recursion(hodge, depth=MAX_DEPTH):
    """r_{-2}, ..., r_{-2-depth} with compose(r, h - lambda) = I degree by degree."""
    if depth > MAX_DEPTH:
        raise SymbolError("resolvent recursion is limited to depth 3")
    geo = hodge.geo
    hl = hodge.h_minus_lambda
    r = MatrixSymbol.identity("resolvent", geo, Symbol.power(-1, "resolvent", geo))
    parts = [r]
    for j in range(1, depth + 1):
        x = matrix_compose(r, hl, min_degree=-j).component(Q(-j))
        rj = (-x).times_power(-1)
        parts.append(rj)
        r = r + rj
    return parts


def power_symbols(resolvent_parts, s):
    """q_{-s-1-j} from r_{-2-j} via the residue map; s must exceed -1 for the contour route."""
    s = Q(s)
    if s <= -1:
        raise SymbolError("complex powers via the contour need s > -1")
    return [p.map(lambda e: residue_map(e, s, residue_coefficient)) for p in resolvent_parts]


def total(parts):
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def check_resolvent_identity(hodge, parts):
    """compose(r, h - lambda) equals I at degrees 0, -1, ..., -depth (exact symbols)."""
    r = total(parts)
    depth = len(parts) - 1
    prod_ = matrix_compose(r, hodge.h_minus_lambda, min_degree=-depth)
    ident = MatrixSymbol.identity("resolvent", hodge.geo)
    diff = prod_ - ident
    for d in range(0, -depth - 1, -1):
        comp = diff.component(Q(d))
        for e in comp.m.flat:
            if not e.is_zero():
                return False
    return True


def quasi_homogeneous(parts):
    """Every term of r_{-2-j} has |mono| + 2p = -2 - j."""
    for j, part in enumerate(parts):
        for e in part.m.flat:
            for (m, p, _) in e.terms():
                if sum(m) + 2 * p != -2 - j:
                    return False
    return True


# -- displayed formula cross-checks ------------------------------------------------------


def _xi_up(geo, m, kind):
    """xi^m = g^{mn} xi_n as a symbol."""
    terms = {}
    for n in R3:
        e = [0, 0, 0]
        e[n] = 1
        terms[(tuple(e), ZERO, 0)] = geo.ginv[m, n]
    return Symbol.from_terms(terms, kind, geo)


def _ginv_sym(geo, m, n, kind):
    return Symbol.from_terms({((0, 0, 0), ZERO, 0): geo.ginv[m, n]}, kind, geo)


def _parts(hodge, kind):
    if kind == "norm":
        return hodge.h1, hodge.h0
    return _to_resolvent(hodge.h1), _to_resolvent(hodge.h0)


def _weights_resolvent(n):
    return Q(1), Q(-n)


def power_weights(s):
    """(coefficient, exponent) of the power replacing (N - lambda)^{-n}, as displayed."""
    s = Q(s)
    table = {
        2: (s + 1) / 2,
        3: (s + 1) * (s + 3) / 8,
        4: (s + 1) * (s + 3) * (s + 5) / 48,
        5: (s + 1) * (s + 3) * (s + 5) * (s + 7) / 384,
    }
    return lambda n: (table[n], (1 - s) / 2 - n)


def _first_order_terms(hodge, kind, w):
    """Terms of r_{-3} / q_{-s-2}: -B^-2 h1 - 2i B^-3 xi^m (N)_{x^m} I."""
    geo = hodge.geo
    h1, _ = _parts(hodge, kind)
    N = Symbol.power(1, kind, geo)
    dn = Symbol.zero(kind, geo)
    for m in R3:
        dn = dn + _xi_up(geo, m, kind) * N.dx(m)
    c2, p2 = w(2)
    c3, p3 = w(3)
    out = h1.times_power(p2).scale(-c2)
    return out + MatrixSymbol.identity(kind, geo, dn.times_power(p3).times_i().scale(-2 * c3))


def _second_order_terms(hodge, kind, w):
    """Leading terms of r_{-4} / q_{-s-3}; exact through x-order 1."""
    geo = hodge.geo
    h1, h0 = _parts(hodge, kind)
    N = Symbol.power(1, kind, geo)
    (c2, p2), (c3, p3), (c4, p4) = w(2), w(3), w(4)
    out = h0.times_power(p2).scale(-c2)
    inner = None
    for m in R3:
        t = h1.dx(m).map(lambda e: _xi_up(geo, m, kind) * e).times_i().scale(2)
        inner = t if inner is None else inner + t
    lap_n = Symbol.zero(kind, geo)
    quad = Symbol.zero(kind, geo)
    for m, n in product(R3, R3):
        d2 = N.dx(m).dx(n)
        lap_n = lap_n + _ginv_sym(geo, m, n, kind) * d2
        quad = quad + _xi_up(geo, m, kind) * _xi_up(geo, n, kind) * d2
    inner = inner + MatrixSymbol.identity(kind, geo, lap_n)
    out = out + inner.times_power(p3).scale(-c3)
    return out + MatrixSymbol.identity(kind, geo, quad.times_power(p4).scale(8 * c4))


def _third_order_terms(hodge, kind, w, displayed=False):
    """Leading terms of r_{-5} / q_{-s-4}; exact at x = 0.

    The two third-derivative-of-norm terms come from d_xi^3 (N - lambda)^{-1};
    their coefficients are -4i/3 and 8i in r_{-5}.  ``displayed=True`` uses the
    doubled values -8i/3 and 16i instead.
    """
    geo = hodge.geo
    h1, h0 = _parts(hodge, kind)
    N = Symbol.power(1, kind, geo)
    twice = 2 if displayed else 1
    (c3, p3), (c4, p4), (c5, p5) = w(3), w(4), w(5)
    first = None
    second = None
    for m in R3:
        t = h0.dx(m).map(lambda e: _xi_up(geo, m, kind) * e).times_i().scale(-2)
        first = t if first is None else first + t
    for m, n in product(R3, R3):
        d2 = h1.dx(m).dx(n)
        first = first - d2.map(lambda e: _ginv_sym(geo, m, n, kind) * e)
        t = d2.map(lambda e: _xi_up(geo, m, kind) * _xi_up(geo, n, kind) * e).scale(4)
        second = t if second is None else second + t
    sym3 = Symbol.zero(kind, geo)
    cub = Symbol.zero(kind, geo)
    for m, n, k in product(R3, R3, R3):
        d3 = N.dx(m).dx(n).dx(k)
        if d3.is_zero():
            continue
        pre = (_ginv_sym(geo, m, n, kind) * _xi_up(geo, k, kind)
               + _ginv_sym(geo, m, k, kind) * _xi_up(geo, n, kind)
               + _ginv_sym(geo, n, k, kind) * _xi_up(geo, m, kind))
        sym3 = sym3 + pre * d3
        cub = cub + _xi_up(geo, m, kind) * _xi_up(geo, n, kind) * _xi_up(geo, k, kind) * d3
    second = second - MatrixSymbol.identity(kind, geo, sym3.times_i().scale(Q(4 * twice, 3)))
    out = first.times_power(p3).scale(c3)
    out = out + second.times_power(p4).scale(c4)
    return out + MatrixSymbol.identity(kind, geo, cub.times_power(p5).times_i().scale(8 * twice * c5))


def formula_r(hodge, j, displayed=False):
    """Displayed truncation of r_{-2-j}, j = 1, 2, 3."""
    builders = {1: _first_order_terms, 2: _second_order_terms}
    if j == 3:
        return _third_order_terms(hodge, "resolvent", _weights_resolvent, displayed)
    return builders[j](hodge, "resolvent", _weights_resolvent)


def formula_q(hodge, j, s, displayed=False):
    """Displayed truncation of q_{-s-1-j}, j = 1, 2, 3."""
    w = power_weights(s)
    if j == 3:
        return _third_order_terms(hodge, "norm", w, displayed)
    return {1: _first_order_terms, 2: _second_order_terms}[j](hodge, "norm", w)


# x-orders through which the displayed truncations are exact
FORMULA_ORDERS = {1: 3, 2: 1, 3: 0}


def agree_through(a, b, order, trials=4, seed=0):
    """Matrix symbols agree as x-jets through the given order at random xi."""
    for x, y in zip(a.m.flat, b.m.flat):
        if not _jets_agree(_with_order(x, order), _with_order(y, order), trials, seed):
            return False
    return True


def _jets_agree(a, b, trials, seed):
    if a.kind == "resolvent":
        # compare at lambda = 0, which leaves a norm-kind symbol with integer powers
        a = Symbol("norm", a.geo, a.comps, a.floor)
        b = Symbol("norm", b.geo, b.comps, b.floor)
    return equal_as_jets(a, b, trials, seed)


def _with_order(sym, order):
    comps = {d: (min(o, order), ts) for d, (o, ts) in sym.comps.items()}
    return Symbol(sym.kind, sym.geo, comps, sym.floor)


def formula_checks(hodge, r_parts, q_parts, s):
    """Compare r_{-2-j} and q_{-s-1-j}, j = 1..3, with the displayed truncations."""
    out = {}
    for j in (1, 2, 3):
        o = FORMULA_ORDERS[j]
        out[f"r_{-2 - j}"] = agree_through(r_parts[j], formula_r(hodge, j), o)
        out[f"q_-s{-1 - j}"] = agree_through(q_parts[j], formula_q(hodge, j, s), o)
    out["r_-5 displayed"] = agree_through(r_parts[3], formula_r(hodge, 3, displayed=True), 0)
    out["q_-s-4 displayed"] = agree_through(q_parts[3], formula_q(hodge, 3, s, displayed=True), 0)
    return out


def curl_principal(geo, kind="norm"):
    """-i E_a^{bc} xi_c as an exact matrix symbol."""
    E = geo.E_mixed
    out = [[None] * 3 for _ in R3]
    for a, b in product(R3, R3):
        terms = {}
        for c in R3:
            e = [0, 0, 0]
            e[c] = 1
            terms[(tuple(e), ZERO, 1)] = -E[a, b, c]
        out[a][b] = Symbol.from_terms(terms, kind, geo)
    return MatrixSymbol(out)


def vanishing_checks(hodge, q_parts, s):
    """q_{-s-2}(0, xi) = 0 and the bracket of curl with N^{-(s+1)/2} I vanishes."""
    s = Q(s)
    geo = hodge.geo
    power = MatrixSymbol.identity("norm", geo, Symbol.power(-(s + 1) / 2, "norm", geo))
    bracket = poisson_bracket(curl_principal(geo), power)
    bracket_zero = all(equal_as_jets(e, Symbol.zero("norm", geo)) for e in bracket.m.flat)
    return {
        "q_-s-2 at centre": is_zero_at_centre(q_parts[1]),
        "bracket curl with power": bracket_zero,
        "curl has no subleading part": len(curl_principal(geo).degrees()) == 1,
    }
