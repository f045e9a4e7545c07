"""Truncated multivariate Taylor series (jets) with exact rational coefficients.

A :class:`Jet` of order ``J`` stores the Taylor coefficients of total degree
``<= J`` of a function of ``nvars`` variables at the origin.  Everything above
degree ``J`` is unknown, so products keep the smaller of the two orders and a
derivative loses one order.
"""
from itertools import combinations_with_replacement
from operator import add

from .rational import ONE, Q, Rat, ZERO


def monomials(nvars, degree):
    """All exponent tuples of the given total degree, in lexicographic order (descending)."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def monomials_upto(nvars, degree):
    return [e for d in range(degree + 1) for e in monomials(nvars, d)]


class JetError(ValueError):
    pass


class Jet:
    __slots__ = ("nvars", "order", "c")

    def __init__(self, coeffs=None, order=4, nvars=3):
        self.nvars = nvars
        self.order = order
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if len(e) != nvars:
                    raise JetError(f"exponent {e} does not have {nvars} entries")
                if sum(e) > order:
                    continue
                v = Q(v)
                if v:
                    c[tuple(e)] = v
        self.c = c

    @classmethod
    def _raw(cls, c, order, nvars):
        j = cls.__new__(cls)
        j.nvars = nvars
        j.order = order
        j.c = c
        return j

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, value, order=4, nvars=3):
        v = Q(value)
        return cls._raw({(0,) * nvars: v} if v else {}, order, nvars)

    @classmethod
    def var(cls, i, order=4, nvars=3):
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): ONE} if order >= 1 else {}, order, nvars)

    @classmethod
    def mono(cls, exp, value=1, order=4):
        return cls({tuple(exp): value}, order=order, nvars=len(exp))

    @classmethod
    def zero(cls, order=4, nvars=3):
        return cls._raw({}, order, nvars)

    # -- basic queries --------------------------------------------------

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def __getitem__(self, exp):
        return self.c.get(tuple(exp), ZERO)

    def constant(self):
        return self.c.get((0,) * self.nvars, ZERO)

    def valuation(self):
        return min((sum(e) for e in self.c), default=self.order + 1)

    def degree_part(self, d):
        return Jet._raw({e: v for e, v in self.c.items() if sum(e) == d}, self.order, self.nvars)

    def truncate(self, order):
        if order >= self.order:
            return self
        return Jet._raw({e: v for e, v in self.c.items() if sum(e) <= order}, order, self.nvars)

    def with_order(self, order):
        """Same coefficients, relabelled order (used for exact polynomials)."""
        return Jet._raw({e: v for e, v in self.c.items() if sum(e) <= order}, order, self.nvars)

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.nvars == other.nvars and self.c == other.c
        if isinstance(other, (int, Rat)):
            return self == Jet.const(other, self.order, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.c.items())))

    def agrees_with(self, other, order=None):
        """Coefficient equality through ``order`` (default: the smaller of the two orders)."""
        if order is None:
            order = min(self.order, other.order)
        keys = set(self.c) | set(other.c)
        return all(self[e] == other[e] for e in keys if sum(e) <= order)

    # -- ring operations ------------------------------------------------

    def _check(self, other):
        if other.nvars != self.nvars:
            raise JetError("jets in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Jet):
            return self + Jet.const(other, self.order, self.nvars)
        self._check(other)
        order = min(self.order, other.order)
        out = {e: v for e, v in self.c.items() if sum(e) <= order}
        for e, v in other.c.items():
            if sum(e) > order:
                continue
            w = out.get(e)
            if w is None:
                out[e] = v
            else:
                w = w + v
                if w:
                    out[e] = w
                else:
                    del out[e]
        return Jet._raw(out, order, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Jet._raw({e: -v for e, v in self.c.items()}, self.order, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        k = Q(k)
        if not k:
            return Jet._raw({}, self.order, self.nvars)
        return Jet._raw({e: v * k for e, v in self.c.items()}, self.order, self.nvars)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        if not self.c or not other.c:
            return Jet._raw({}, order, self.nvars)
        rhs = sorted(((sum(e), e, v) for e, v in other.c.items()), key=lambda t: t[0])
        out = {}
        for ea, va in self.c.items():
            room = order - sum(ea)
            if room < 0:
                continue
            for db, eb, vb in rhs:
                if db > room:
                    break
                e = tuple(map(add, ea, eb))
                w = out.get(e)
                out[e] = va * vb if w is None else w + va * vb
        return Jet._raw({e: v for e, v in out.items() if v}, order, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.invert() ** (-n)
        out = Jet.const(1, self.order, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def derive(self, axis):
        """Partial derivative; the result is known one order less."""
        out = {}
        for e, v in self.c.items():
            k = e[axis]
            if k:
                f = list(e)
                f[axis] = k - 1
                out[tuple(f)] = v * k
        return Jet._raw(out, self.order - 1, self.nvars)

    def derive_multi(self, kappa):
        j = self
        for axis, k in enumerate(kappa):
            for _ in range(k):
                j = j.derive(axis)
        return j

    def _series(self, coeff):
        """sum_k coeff(k) * u**k with u = self - 1 (constant term must be 1)."""
        if self.constant() != 1:
            raise JetError("series inversion needs constant term 1")
        u = self - 1
        out = Jet.const(coeff(0), self.order, self.nvars)
        power = Jet.const(1, self.order, self.nvars)
        for k in range(1, self.order + 1):
            power = power * u
            if power.is_zero():
                break
            out = out + power.scale(coeff(k))
        return out

    def invert(self):
        return self._series(lambda k: (-1) ** k)

    def sqrt(self):
        return self._series(_half_binomial)

    def power_rational(self, p):
        """(1 + u)**p for rational p, via the binomial series."""
        p = Q(p)

        def coeff(k):
            out = ONE
            for i in range(k):
                out = out * (p - i) / (i + 1)
            return out

        return self._series(coeff)

    # -- evaluation and substitution ------------------------------------

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        total = 0
        for e, v in self.c.items():
            term = v if not _is_float(point) else float(v)
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def substitute(self, images):
        """Compose with ``x_i -> images[i]`` where each image is a jet without constant term."""
        if len(images) != self.nvars:
            raise JetError("need one image per variable")
        nv = images[0].nvars
        order = min(min(j.order for j in images), self.order) if self.c else min(j.order for j in images)
        for j in images:
            if j.constant():
                raise JetError("substitution images must vanish at the origin")
        cache = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = Jet.const(1, order, nv) if k == 0 else power(i, k - 1) * images[i]
            return cache[key]

        out = Jet.zero(order, nv)
        for e, v in self.c.items():
            term = Jet.const(v, order, nv)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def embed(self, nvars, offset):
        """View as a jet in ``nvars`` variables, placing ours at ``offset``."""
        out = {}
        for e, v in self.c.items():
            f = [0] * nvars
            f[offset:offset + self.nvars] = e
            out[tuple(f)] = v
        return Jet._raw(out, self.order, nvars)

    # -- text -----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.c.items(), key=lambda t: (sum(t[0]), tuple(-k for k in t[0])))

    def __repr__(self):
        if not self.c:
            return f"Jet(0; J={self.order})"
        parts = []
        for e, v in self.sorted_terms():
            m = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"({v})" + (f"*{m}" if m else ""))
        return " + ".join(parts) + f" [J={self.order}]"


def _half_binomial(k):
    out = ONE
    for i in range(k):
        out = out * (Q(1, 2) - i) / (i + 1)
    return out


def _is_float(point):
    return any(isinstance(x, float) for x in point)


def jet_arithmetic(a, b, kind, axis=None):
    """Dispatch helper mirroring the five primitive jet operations."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "derive":
        return a.derive(axis)
    if kind == "invert":
        return a.invert()
    if kind == "sqrt":
        return a.sqrt()
    raise JetError(f"unknown jet operation {kind!r}")
