"""Polyhomogeneous symbols with jet coefficients, composition and matrix traces.

A term is ``coef(x) * i**im * xi**mono * B(x, xi)**p`` where the base ``B`` is
either the norm ``N = g^{mn}(x) xi_m xi_n`` (kind ``"norm"``, rational ``p``)
or ``N - lambda`` (kind ``"resolvent"``, integer ``p``).  Terms are keyed by
``(mono, p, im)`` and grouped by homogeneity degree ``|mono| + 2p``.

Every graded component carries the x-order through which its coefficient
jets are known, so a component that is zero only because of truncation is
never mistaken for an exact zero.  ``floor`` marks the lowest degree that was
computed; degrees below it are unknown (``None`` means the symbol is exact).
"""
import random
from fractions import Fraction
from itertools import product
from math import factorial, inf

import numpy as np

from .curvature import R3
from .jets import Jet, monomials
from .rational import Q, Rat, ZERO

KINDS = ("norm", "resolvent")


class SymbolError(ValueError):
    pass


def _madd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _unit(k):
    e = [0, 0, 0]
    e[k] = 1
    return tuple(e)


def _degree(key):
    mono, p, _ = key
    return sum(mono) + 2 * p


def _accumulate(dst, key, jet):
    if jet.is_zero():
        return
    old = dst.get(key)
    if old is None:
        dst[key] = jet
    else:
        new = old + jet
        if new.is_zero():
            del dst[key]
        else:
            dst[key] = new


def _times_i(key, jet, power=1):
    """Multiply a term by i**power."""
    mono, p, im = key
    total = im + power % 4
    jet = jet if total % 4 < 2 else -jet
    return (mono, p, total % 2), jet


class Symbol:
    """Scalar symbol; immutable once built."""

    __slots__ = ("kind", "geo", "comps", "floor", "_cache")

    def __init__(self, kind, geo, comps, floor=None):
        if kind not in KINDS:
            raise SymbolError(f"unknown symbol kind {kind!r}")
        self.kind = kind
        self.geo = geo
        self.floor = None if floor is None else Q(floor)
        clean = {}
        for d, (order, terms) in sorted(comps.items(), key=lambda t: -t[0]):
            d = Q(d)
            if self.floor is not None and d < self.floor:
                continue
            if order < 0:
                # coefficients unknown at this degree: everything from here down is unknown
                self.floor = d + 1 if self.floor is None else max(self.floor, d + 1)
                continue
            kept = {}
            for key, jet in terms.items():
                if _degree(key) != d:
                    raise SymbolError(f"term {key} does not have degree {d}")
                jet = jet.truncate(order)
                if not jet.is_zero():
                    kept[key] = jet
            if kept or order != inf:
                clean[d] = (order, kept)
        if self.floor is not None:
            clean = {d: v for d, v in clean.items() if d >= self.floor}
        self.comps = clean
        self._cache = {}

    # -- construction ---------------------------------------------------

    @classmethod
    def from_terms(cls, terms, kind, geo, order=None, floor=None):
        """Group terms by degree; component order defaults to the smallest jet order."""
        grouped = {}
        for key, jet in terms.items():
            key = (tuple(key[0]), Q(key[1]), key[2])
            d = _degree(key)
            grouped.setdefault(d, {})
            _accumulate(grouped[d], key, jet)
        comps = {}
        for d, ts in grouped.items():
            o = order if order is not None else min((j.order for j in ts.values()), default=inf)
            comps[d] = (o, ts)
        return cls(kind, geo, comps, floor)

    @classmethod
    def zero(cls, kind, geo):
        return cls(kind, geo, {})

    @classmethod
    def const(cls, value, kind, geo, order=inf):
        jet = Jet.const(value, geo.order if order == inf else order)
        return cls(kind, geo, {ZERO: (order, {((0, 0, 0), ZERO, 0): jet})})

    @classmethod
    def power(cls, p, kind, geo, coef=1):
        """coef * B**p, exact in x."""
        p = Q(p)
        key = ((0, 0, 0), p, 0)
        return cls(kind, geo, {2 * p: (inf, {key: Jet.const(coef, geo.order)})})

    # -- queries ---------------------------------------------------------

    def degrees(self):
        return sorted(self.comps, reverse=True)

    def top(self):
        return max(self.comps, default=None)

    def order_at(self, d):
        d = Q(d)
        if self.floor is not None and d < self.floor:
            return -1
        return self.comps[d][0] if d in self.comps else inf

    def terms(self):
        out = {}
        for _, ts in self.comps.values():
            out.update(ts)
        return out

    def is_zero(self):
        return all(not ts for _, ts in self.comps.values())

    def part(self, d):
        """Cached single-component view (used by composition)."""
        key = ("part", d)
        if key not in self._cache:
            self._cache[key] = Symbol(self.kind, self.geo, {d: self.comps[d]})
        return self._cache[key]

    def component(self, d):
        d = Q(d)
        if self.floor is not None and d < self.floor:
            raise SymbolError(f"degree {d} lies below the computed floor {self.floor}")
        if d not in self.comps:
            return Symbol(self.kind, self.geo, {})
        return Symbol(self.kind, self.geo, {d: self.comps[d]})

    def _same(self, other):
        if not isinstance(other, Symbol):
            raise SymbolError("expected a Symbol")
        if self.kind != other.kind:
            raise SymbolError("cannot combine norm and resolvent symbols")
        if self.geo is not other.geo:
            raise SymbolError("symbols built over different geometry contexts")

    def _floor_with(self, other):
        fl = [f for f in (self.floor, other.floor) if f is not None]
        return max(fl) if fl else None

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        self._same(other)
        comps = {}
        for d in set(self.comps) | set(other.comps):
            order = min(self.order_at(d), other.order_at(d))
            terms = dict(self.comps.get(d, (inf, {}))[1])
            for key, jet in other.comps.get(d, (inf, {}))[1].items():
                _accumulate(terms, key, jet)
            comps[d] = (order, terms)
        return Symbol(self.kind, self.geo, comps, self._floor_with(other))

    def __neg__(self):
        return Symbol(
            self.kind, self.geo,
            {d: (o, {k: -j for k, j in ts.items()}) for d, (o, ts) in self.comps.items()},
            self.floor,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        """Multiply by a rational, a complex rational (Fraction pair) or a jet."""
        if isinstance(k, complex) or (isinstance(k, tuple) and len(k) == 2):
            re, im = k if isinstance(k, tuple) else (k.real, k.imag)
            return self.scale(Q(re)) + self.times_i().scale(Q(im))
        comps = {}
        for d, (o, ts) in self.comps.items():
            if isinstance(k, Jet):
                o = min(o, k.order)
                comps[d] = (o, {key: j * k for key, j in ts.items()})
            else:
                comps[d] = (o, {key: j.scale(k) for key, j in ts.items()})
        return Symbol(self.kind, self.geo, comps, self.floor)

    def times_i(self, power=1):
        comps = {}
        for d, (o, ts) in self.comps.items():
            new = {}
            for key, jet in ts.items():
                k2, j2 = _times_i(key, jet, power)
                new[k2] = j2
            comps[d] = (o, new)
        return Symbol(self.kind, self.geo, comps, self.floor)

    def times_power(self, p):
        """Multiply by B**p."""
        p = Q(p)
        comps = {}
        for d, (o, ts) in self.comps.items():
            comps[d + 2 * p] = (o, {(m, q + p, im): j for (m, q, im), j in ts.items()})
        fl = None if self.floor is None else self.floor + 2 * p
        return Symbol(self.kind, self.geo, comps, fl)

    def truncate_below(self, d):
        d = Q(d)
        fl = d if self.floor is None else max(d, self.floor)
        return Symbol(self.kind, self.geo, self.comps, fl)

    # -- products ----------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, Symbol):
            return self.scale(other)
        return _product(self, other)

    # -- derivatives -------------------------------------------------------

    def dxi(self, k):
        key = ("xi", k)
        if key not in self._cache:
            ginv = self.geo.ginv
            comps = {}
            for d, (o, ts) in self.comps.items():
                new = {}
                for (m, p, im), jet in ts.items():
                    if m[k]:
                        mm = list(m)
                        mm[k] -= 1
                        _accumulate(new, (tuple(mm), p, im), jet.scale(m[k]))
                    if p:
                        for n in R3:
                            _accumulate(new, (_madd(m, _unit(n)), p - 1, im), jet * ginv[k, n].scale(2 * p))
                comps[d - 1] = (o, new)
            fl = None if self.floor is None else self.floor - 1
            self._cache[key] = Symbol(self.kind, self.geo, comps, fl)
        return self._cache[key]

    def dx(self, k):
        key = ("x", k)
        if key not in self._cache:
            dginv = self.geo.dginv
            comps = {}
            for d, (o, ts) in self.comps.items():
                new = {}
                for (m, p, im), jet in ts.items():
                    _accumulate(new, (m, p, im), jet.derive(k))
                    if p:
                        for a in R3:
                            for b in range(a, 3):
                                c = p if a == b else 2 * p
                                _accumulate(
                                    new, (_madd(m, _madd(_unit(a), _unit(b))), p - 1, im),
                                    jet * dginv[k, a, b].scale(c),
                                )
                comps[d] = (o - 1, new)
            self._cache[key] = Symbol(self.kind, self.geo, comps, self.floor)
        return self._cache[key]

    def dxi_multi(self, kappa):
        s = self
        for axis, n in enumerate(kappa):
            for _ in range(n):
                s = s.dxi(axis)
        return s

    def dx_multi(self, kappa):
        s = self
        for axis, n in enumerate(kappa):
            for _ in range(n):
                s = s.dx(axis)
        return s

    # -- evaluation --------------------------------------------------------

    def rho_class(self):
        """The common value of 2p modulo 2, or None for the zero symbol."""
        classes = {(2 * p) % 2 for (_, p, _) in self.terms()}
        if len(classes) > 1:
            raise SymbolError("terms have incongruent norm exponents")
        return classes.pop() if classes else None

    def eval_centre(self, xi, p0=None):
        """(real, imag) rational parts of the value at x = 0 divided by |xi|**(2*p0)."""
        if self.kind != "norm":
            raise SymbolError("only norm-kind symbols can be evaluated")
        if self.floor is not None and any(d < self.floor for d in self.comps):
            raise SymbolError("component below floor")
        n2 = sum(Q(v) ** 2 for v in xi)
        re = im_ = ZERO
        for (m, p, im), jet in self.terms().items():
            e = p - p0 if p0 is not None else p
            if e.denominator != 1:
                raise SymbolError("norm exponent not congruent to the reference class")
            v = jet.constant() * n2 ** int(e)
            for x, k in zip(xi, m):
                if k:
                    v *= Q(x) ** k
            if im:
                im_ += v
            else:
                re += v
        return re, im_

    def eval_float(self, x, xi):
        """Floating value at a point (x given to jet evaluation, xi a real covector)."""
        if self.kind != "norm":
            raise SymbolError("only norm-kind symbols can be evaluated")
        xf = [float(v) for v in x]
        g = np.array([[float(self.geo.ginv[a, b](xf)) for b in R3] for a in R3])
        xi = np.asarray(xi, dtype=float)
        nn = float(xi @ g @ xi)
        total = 0j
        for (m, p, im), jet in self.terms().items():
            v = float(jet(xf)) * nn ** float(p) * np.prod(xi ** np.array(m))
            total += v * (1j if im else 1)
        return total

    def text(self):
        return canonical_text(self)

    def __repr__(self):
        return f"Symbol<{self.kind}>({len(self.terms())} terms, degrees {self.degrees()})"


def _product(a, b):
    a._same(b)
    comps = {}
    for da, (oa, ta) in a.comps.items():
        for db, (ob, tb) in b.comps.items():
            d = da + db
            o = min(oa, ob)
            cur = comps.setdefault(d, [o, {}])
            cur[0] = min(cur[0], o)
            for (ma, pa, ia), ja in ta.items():
                for (mb, pb, ib), jb in tb.items():
                    jet = ja * jb
                    if ia and ib:
                        jet = -jet
                    _accumulate(cur[1], (_madd(ma, mb), pa + pb, ia ^ ib), jet)
    floor = _product_floor(a, b)
    return Symbol(a.kind, a.geo, {d: tuple(v) for d, v in comps.items()}, floor)


def _product_floor(a, b):
    cands = []
    if a.floor is not None and b.comps:
        cands.append(a.floor + b.top())
    if b.floor is not None and a.comps:
        cands.append(b.floor + a.top())
    if a.floor is not None and not b.comps and b.floor is not None:
        cands.append(a.floor + b.floor)
    return max(cands) if cands else None


def multi_indices(k):
    return monomials(3, k)


def _kappa_factor(kappa):
    out = 1
    for n in kappa:
        out *= factorial(n)
    return Fraction(1, out)


def compose(a, b, min_degree=None, depth=None):
    """Left symbol of the composition: sum_k (1/i^k k!) d_xi^k a . d_x^k b.

    Components below ``min_degree`` (default: the top degree minus ``depth - 1``,
    depth 4) are not computed and the result's floor records that.
    """
    a._same(b)
    if not a.comps or not b.comps:
        return Symbol(a.kind, a.geo, {}, a._floor_with(b))
    top = a.top() + b.top()
    if min_degree is None:
        min_degree = top - ((depth or 4) - 1)
    min_degree = Q(min_degree)
    floor = _product_floor(a, b)
    floor = min_degree if floor is None else max(floor, min_degree)
    total = Symbol(a.kind, a.geo, {}, floor)
    for da in a.comps:
        ca = a.part(da)
        for db in b.comps:
            cb = b.part(db)
            for k in range(int(da + db - floor) + 1):
                for kappa in multi_indices(k):
                    xa = ca.dxi_multi(kappa)
                    if not xa.comps:
                        continue
                    term = _product(xa, cb.dx_multi(kappa)).truncate_below(floor)
                    # 1/(i^k kappa!) = (-i)^k / kappa!
                    total = total + term.times_i(-k % 4).scale(_kappa_factor(kappa))
    return total


# -- matrix symbols -----------------------------------------------------------


class MatrixSymbol:
    """3x3 array of scalar symbols of one kind over one geometry."""

    __slots__ = ("m", "kind", "geo")

    def __init__(self, entries):
        self.m = np.empty((3, 3), dtype=object)
        for i, j in product(R3, R3):
            self.m[i, j] = entries[i][j] if not isinstance(entries, np.ndarray) else entries[i, j]
        self.kind = self.m[0, 0].kind
        self.geo = self.m[0, 0].geo

    @classmethod
    def identity(cls, kind, geo, scalar=None):
        one = scalar if scalar is not None else Symbol.const(1, kind, geo)
        zero = Symbol.zero(kind, geo)
        return cls([[one if i == j else zero for j in R3] for i in R3])

    @classmethod
    def zero(cls, kind, geo):
        z = Symbol.zero(kind, geo)
        return cls([[z] * 3 for _ in R3])

    def __getitem__(self, idx):
        return self.m[idx]

    def map(self, fn):
        return MatrixSymbol([[fn(self.m[i, j]) for j in R3] for i in R3])

    def __add__(self, other):
        return MatrixSymbol([[self.m[i, j] + other.m[i, j] for j in R3] for i in R3])

    def __neg__(self):
        return self.map(lambda s: -s)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return self.map(lambda s: s.scale(k))

    def times_i(self, power=1):
        return self.map(lambda s: s.times_i(power))

    def times_power(self, p):
        return self.map(lambda s: s.times_power(p))

    def component(self, d):
        return self.map(lambda s: s.component(d))

    def dxi(self, k):
        return self.map(lambda s: s.dxi(k))

    def dx(self, k):
        return self.map(lambda s: s.dx(k))

    def matmul(self, other):
        """Pointwise matrix product (no composition corrections)."""
        out = [[None] * 3 for _ in R3]
        for i, j in product(R3, R3):
            acc = None
            for l in R3:
                t = _product(self.m[i, l], other.m[l, j])
                acc = t if acc is None else acc + t
            out[i][j] = acc
        return MatrixSymbol(out)

    def trace(self):
        return self.m[0, 0] + self.m[1, 1] + self.m[2, 2]

    def is_zero(self):
        return all(s.is_zero() for s in self.m.flat)

    def degrees(self):
        return sorted({d for s in self.m.flat for d in s.comps}, reverse=True)

    def top(self):
        return max((s.top() for s in self.m.flat if s.comps), default=None)

    def eval_centre(self, xi, p0=None):
        return [[self.m[i, j].eval_centre(xi, p0) for j in R3] for i in R3]

    def text(self):
        return "\n".join(f"[{i}{j}] " + canonical_text(self.m[i, j]) for i, j in product(R3, R3))


def matrix_compose(a, b, min_degree=None, depth=None):
    if min_degree is None:
        min_degree = a.top() + b.top() - ((depth or 4) - 1)
    out = [[None] * 3 for _ in R3]
    for i, j in product(R3, R3):
        acc = None
        for l in R3:
            if not a.m[i, l].comps or not b.m[l, j].comps:
                continue
            t = compose(a.m[i, l], b.m[l, j], min_degree=min_degree)
            acc = t if acc is None else acc + t
        out[i][j] = acc if acc is not None else Symbol(a.kind, a.geo, {}, Q(min_degree))
    return MatrixSymbol(out)


# -- residues -------------------------------------------------------------------


def residue_map(sym, s, coefficient):
    """(N - lambda)^{-n} -> C_n(s) N^{(1 - s)/2 - n}, term by term."""
    if sym.kind != "resolvent":
        raise SymbolError("residue map applies to resolvent symbols")
    s = Q(s)
    comps = {}
    for d, (o, ts) in sym.comps.items():
        new = {}
        for (m, p, im), jet in ts.items():
            n = -p
            if n.denominator != 1 or n < 1:
                raise SymbolError("resolvent term without a negative integer power")
            c = coefficient(int(n), s)
            if c:
                _accumulate(new, (m, (1 - s) / 2 - n, im), jet.scale(c))
        comps[d + 1 - s] = (o, new)
    floor = None if sym.floor is None else sym.floor + 1 - s
    return Symbol("norm", sym.geo, comps, floor)


# -- matrix trace and amplitudes -----------------------------------------------


def amplitude_to_symbol(t, W, depth=4, centre=True):
    """Left symbol of the amplitude t[a][b](x, xi) * W[b][a](y, x).

    ``W[b, a]`` is a six-variable jet with x in the first three slots and y in
    the last three.  S_{-k} = (-i)^k sum_{|kappa|=k} (1/kappa!) d_xi^kappa t .
    d_y^kappa W at y = x.  With ``centre`` only the value at x = 0 is kept,
    and the result is exact in the remaining variables.
    """
    if depth - 1 > W[0, 0].order:
        raise SymbolError("transport jet is too short for the requested depth")
    top = t.top()
    min_degree = top - (depth - 1)
    total = None
    for k in range(depth):
        for kappa in multi_indices(k):
            dk = [0, 0, 0] + list(kappa)
            dt = t.map(lambda s: s.dxi_multi(kappa))
            coeffs = np.empty((3, 3), dtype=object)
            for b, a in product(R3, R3):
                jw = W[b, a].derive_multi(tuple(dk))
                coeffs[b, a] = _diagonal_value(jw, centre)
            acc = None
            for a, b in product(R3, R3):
                c = coeffs[b, a]
                if c.is_zero():
                    continue
                term = dt.m[a, b].scale(c)
                acc = term if acc is None else acc + term
            if acc is None:
                continue
            acc = acc.times_i(-k % 4).scale(_kappa_factor(kappa)).truncate_below(min_degree)
            total = acc if total is None else total + acc
    if total is None:
        total = Symbol(t.kind, t.geo, {}, min_degree)
    if centre:
        total = at_centre(total)
    return total


def _diagonal_value(jet6, centre):
    if jet6.order < 0:
        raise SymbolError("transport jet is too short for the requested depth")
    if centre:
        return Jet.const(jet6.constant(), jet6.order)
    out = {}
    for e, v in jet6.c.items():
        f = (e[0] + e[3], e[1] + e[4], e[2] + e[5])
        out[f] = out.get(f, 0) + v
    return Jet(out, jet6.order, 3)


def at_centre(sym):
    """Keep only the x = 0 value of every coefficient, marked exact."""
    comps = {}
    for d, (o, ts) in sym.comps.items():
        if o < 0:
            raise SymbolError("component unknown at the centre")
        comps[d] = (inf, {k: Jet.const(j.constant(), sym.geo.order) for k, j in ts.items()})
    return _CentreSymbol(sym.kind, sym.geo, comps, sym.floor)


class _CentreSymbol(Symbol):
    """Symbol whose coefficients are frozen at x = 0; x-derivatives are not meaningful."""

    __slots__ = ()

    def dx(self, k):
        raise SymbolError("x-derivative of a symbol evaluated at the centre")


def matrix_trace_pseudo(q, transport, depth=4, centre=True):
    """Matrix trace of a matrix symbol against the transport map, as a scalar symbol."""
    if depth > 4:
        raise SymbolError("depth above 4 exceeds the transport jet")
    return amplitude_to_symbol(q, transport.backward(), depth=depth, centre=centre)


# -- Poisson bracket ---------------------------------------------------------------


def poisson_bracket(a, b):
    """Generalised bracket with the Christoffel corrections for 1-form indices."""
    if isinstance(a, Symbol):
        return _scalar_bracket(a, b)
    G = a.geo.christoffel
    out = [[None] * 3 for _ in R3]
    for al, be in product(R3, R3):
        acc = Symbol(a.kind, a.geo, {})
        for ga in R3:
            for ka in R3:
                cov_a = a.m[al, ka].dx(ga)
                for ap in R3:
                    cov_a = cov_a - a.m[ap, ka].scale(G[ap, ga, al])
                    cov_a = cov_a + a.m[al, ap].scale(G[ka, ga, ap])
                acc = acc + _product(cov_a, b.m[ka, be].dxi(ga))
                cov_b = b.m[ka, be].dx(ga)
                for kp in R3:
                    cov_b = cov_b - b.m[kp, be].scale(G[kp, ga, ka])
                    cov_b = cov_b + b.m[ka, kp].scale(G[be, ga, kp])
                acc = acc - _product(a.m[al, ka].dxi(ga), cov_b)
        out[al][be] = acc
    return MatrixSymbol(out)


def _scalar_bracket(a, b):
    acc = Symbol(a.kind, a.geo, {})
    for g in R3:
        acc = acc + _product(a.dx(g), b.dxi(g)) - _product(a.dxi(g), b.dx(g))
    return acc


# -- equality oracle -----------------------------------------------------------------


def _reference_class(*syms):
    ps = set()
    for s in syms:
        for (_, p, _) in s.terms():
            ps.add(p)
    if not ps:
        return None
    p0 = min(ps)
    for p in ps:
        if (p - p0).denominator != 1:
            raise SymbolError("symbols have incongruent norm exponents")
    return p0


def random_xi(rng, bound=1000):
    while True:
        xi = tuple(Q(rng.randint(-bound, bound)) for _ in R3)
        if any(xi):
            return xi


def equal_at_centre(a, b, trials=10, seed=0):
    """Exact equality of two scalar or matrix symbols at x = 0 on random rational xi."""
    sa = list(a.m.flat) if isinstance(a, MatrixSymbol) else [a]
    sb = list(b.m.flat) if isinstance(b, MatrixSymbol) else [b]
    p0 = _reference_class(*sa, *sb)
    if p0 is None:
        return True
    rng = random.Random(seed)
    for _ in range(trials):
        xi = random_xi(rng)
        for x, y in zip(sa, sb):
            if x.eval_centre(xi, p0) != y.eval_centre(xi, p0):
                return False
    return True


def centre_witness(a, b, trials=10, seed=0):
    """First xi (and the two values) where the symbols differ at the centre, or None."""
    p0 = _reference_class(a, b)
    if p0 is None:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        xi = random_xi(rng)
        va, vb = a.eval_centre(xi, p0), b.eval_centre(xi, p0)
        if va != vb:
            return {"xi": [str(v) for v in xi], "lhs": [str(v) for v in va], "rhs": [str(v) for v in vb]}
    return None


def is_zero_at_centre(a, trials=10, seed=0):
    if isinstance(a, MatrixSymbol):
        return all(is_zero_at_centre(s, trials, seed) for s in a.m.flat)
    return equal_at_centre(a, Symbol(a.kind, a.geo, {}), trials, seed)


def jet_value(sym, xi, p0):
    """Jet in x of sym(x, xi) / N(x, xi)**p0 for rational xi (exact in the jet ring)."""
    geo = sym.geo
    order = min((o for o, _ in sym.comps.values()), default=geo.order)
    order = geo.order if order == inf else order
    n2 = sum(Q(v) ** 2 for v in xi)
    N = sum((geo.ginv[a, b].scale(Q(xi[a]) * Q(xi[b])) for a, b in product(R3, R3)), start=Jet.zero(geo.order))
    u = N.scale(1 / n2)
    re = Jet.zero(order)
    im_ = Jet.zero(order)
    for (m, p, im), jet in sym.terms().items():
        e = p - p0
        if e.denominator != 1:
            raise SymbolError("norm exponent not congruent to the reference class")
        v = jet * (u ** int(e)).truncate(order) * (n2 ** int(e))
        for x, k in zip(xi, m):
            if k:
                v = v.scale(Q(x) ** k)
        if im:
            im_ = im_ + v
        else:
            re = re + v
    return re, im_


def equal_as_jets(a, b, trials=6, seed=0):
    """Equality of the x-jets of two scalar symbols at random rational xi."""
    p0 = _reference_class(a, b)
    if p0 is None:
        return True
    rng = random.Random(seed)
    for _ in range(trials):
        xi = random_xi(rng, 50)
        ra, ia = jet_value(a, xi, p0)
        rb, ib = jet_value(b, xi, p0)
        o = min(ra.order, rb.order)
        if not (ra.agrees_with(rb, o) and ia.agrees_with(ib, o)):
            return False
    return True


# -- text form -------------------------------------------------------------------------


def canonical_text(sym):
    if not sym.comps:
        return "0"
    lines = []
    for d in sym.degrees():
        o, ts = sym.comps[d]
        head = f"deg {d} (x-order {'exact' if o == inf else o}):"
        parts = []
        for (m, p, im) in sorted(ts, key=lambda k: (tuple(-v for v in k[0]), k[1], k[2])):
            jet = ts[(m, p, im)]
            parts.append(f"{'i*' if im else ''}[{jet!r}]*xi^{m}*B^({p})")
        lines.append(head + (" " + " + ".join(parts) if parts else " 0"))
    if sym.floor is not None:
        lines.append(f"(unknown below degree {sym.floor})")
    return "\n".join(lines)
