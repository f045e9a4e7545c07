"""Curl and the Hodge Laplacian on 1-forms as jet-coefficient differential operators."""
from itertools import product
from math import comb, inf

import numpy as np

from .curvature import EPS, R3
from .geometry import Geometry
from .jets import Jet, monomials_upto
from .rational import Q
from .symbols import MatrixSymbol, Symbol
from .transport import restrict

ZERO_KAPPA = (0, 0, 0)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _below(kappa):
    """All multi-indices nu <= kappa componentwise."""
    return product(*(range(k + 1) for k in kappa))


class ScalarOp:
    """sum_kappa coef[kappa](x) d^kappa with coefficients on the left."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def mult(cls, f):
        return cls({ZERO_KAPPA: f})

    @classmethod
    def d(cls, k, order):
        e = [0, 0, 0]
        e[k] = 1
        return cls({tuple(e): Jet.const(1, order)})

    def __add__(self, other):
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return ScalarOp(out)

    def __neg__(self):
        return ScalarOp({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        """Operator composition self o other via Leibniz."""
        out = {}
        for ka, a in self.c.items():
            for kb, b in other.c.items():
                for nu in _below(ka):
                    coef = 1
                    for x, y in zip(ka, nu):
                        coef *= comb(x, y)
                    term = (a * b.derive_multi(_sub(ka, nu))).scale(coef)
                    key = tuple(x + y for x, y in zip(nu, kb))
                    out[key] = out[key] + term if key in out else term
        return ScalarOp(out)

    def order(self):
        return max((sum(k) for k in self.c), default=0)

    def apply(self, f):
        return sum((v * f.derive_multi(k) for k, v in self.c.items()), start=Jet.zero(f.order))


class DiffOpJet:
    """Matrix differential operator on 1-forms: (Qu)_a = sum_b entries[a][b] u_b."""

    def __init__(self, entries):
        self.e = np.empty((3, 3), dtype=object)
        for a, b in product(R3, R3):
            self.e[a, b] = entries[a][b]

    @classmethod
    def zero(cls):
        return cls([[ScalarOp() for _ in R3] for _ in R3])

    def __add__(self, other):
        return DiffOpJet([[self.e[a, b] + other.e[a, b] for b in R3] for a in R3])

    def __neg__(self):
        return DiffOpJet([[-self.e[a, b] for b in R3] for a in R3])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        out = [[ScalarOp() for _ in R3] for _ in R3]
        for a, b, m in product(R3, R3, R3):
            out[a][b] = out[a][b] + (self.e[a, m] @ other.e[m, b])
        return DiffOpJet(out)

    def order(self):
        return max(op.order() for op in self.e.flat)

    def coefficients(self):
        """kappa -> 3x3 array of coefficient jets (missing entries are zero)."""
        keys = {k for op in self.e.flat for k in op.c}
        out = {}
        for k in keys:
            arr = np.empty((3, 3), dtype=object)
            for a, b in product(R3, R3):
                arr[a, b] = self.e[a, b].c.get(k)
            out[k] = arr
        return out

    def apply(self, u):
        """Apply to a 1-form given as three jets."""
        return [sum((self.e[a, b].apply(u[b]) for b in R3), start=Jet.zero(u[0].order)) for a in R3]

    def symbol(self, geo):
        """Left symbol sum i^|kappa| q^kappa(x) xi^kappa as a norm-kind matrix symbol."""
        out = [[None] * 3 for _ in R3]
        for a, b in product(R3, R3):
            terms = {}
            for k, jet in self.e[a, b].c.items():
                n = sum(k)
                jet = jet if n % 4 < 2 else -jet
                terms[(k, Q(0), n % 2)] = jet
            out[a][b] = Symbol.from_terms(terms, "norm", geo)
        return MatrixSymbol(out)


def curl_operator(geo):
    """(curl u)_a = -E_a^{bc} d_c u_b; symbol -i E_a^{bc} xi_c."""
    E = geo.E_mixed
    out = [[None] * 3 for _ in R3]
    for a, b in product(R3, R3):
        coeffs = {}
        for c in R3:
            e = [0, 0, 0]
            e[c] = 1
            coeffs[tuple(e)] = -E[a, b, c]
        out[a][b] = ScalarOp(coeffs)
    return DiffOpJet(out)


def d_delta(geo):
    """(d delta)_a^b = -d_a rho^{-1} d_c g^{cb} rho."""
    order = geo.order
    rho, rinv, ginv = geo.rho, geo.rho_inv, geo.ginv
    out = [[ScalarOp() for _ in R3] for _ in R3]
    for a, b in product(R3, R3):
        acc = ScalarOp()
        for c in R3:
            acc = acc + (ScalarOp.d(a, order) @ ScalarOp.mult(rinv) @ ScalarOp.d(c, order)
                         @ ScalarOp.mult(ginv[c, b] * rho))
        out[a][b] = -acc
    return DiffOpJet(out)


def delta_d(geo):
    """(delta d)_a^b = g_{an} rho^{-1} d_m (g^{mb} g^{nc} - g^{mc} g^{nb}) rho d_c."""
    order = geo.order
    g, ginv, rho, rinv = geo.g, geo.ginv, geo.rho, geo.rho_inv
    out = [[ScalarOp() for _ in R3] for _ in R3]
    for a, b in product(R3, R3):
        acc = ScalarOp()
        for n, m, c in product(R3, R3, R3):
            inner = (ginv[m, b] * ginv[n, c] - ginv[m, c] * ginv[n, b]) * rho
            if inner.is_zero():
                continue
            acc = acc + (ScalarOp.mult(g[a, n] * rinv) @ ScalarOp.d(m, order)
                         @ ScalarOp.mult(inner) @ ScalarOp.d(c, order))
        out[a][b] = acc
    return DiffOpJet(out)


def hodge_laplacian(geo):
    """The nonnegative operator -Delta = d delta + delta d on 1-forms."""
    return d_delta(geo) + delta_d(geo)


def hodge_symbol_parts(geo, op=None):
    """(h2, h1, h0) as matrix symbols, h2 being the degree-2 part."""
    h = (op or hodge_laplacian(geo)).symbol(geo)
    return tuple(h.component(d) for d in (2, 1, 0))


def matrix_trace_differential(op, transport, f):
    """[R_a^b(0) W_b^a(y, 0) f(y)] at y = 0 for a differential operator on 1-forms."""
    W = transport.backward_at_centre()
    total = Q(0)
    for kappa, arr in op.coefficients().items():
        for a, b in product(R3, R3):
            coef = arr[a, b]
            if coef is None:
                continue
            c0 = coef.constant()
            if not c0:
                continue
            if sum(kappa) > min(W[b, a].order, f.order):
                raise ValueError("coefficient jets too short for this operator")
            total += c0 * (W[b, a] * f).derive_multi(kappa).constant()
    return total


# -- the a/b tensor forms -----------------------------------------------------------


def hodge_tensors(c, corrected=False):
    """The tensors a0, a1, b1, b0 at the origin built from curvature data.

    The displayed Ricci coefficient in a0 and a1 is 1; the operator itself
    carries 2/3 there (``corrected=True``).
    """
    ric, riem, dric, driem = c.ric0, c.riem0, c.dric0, c.driem0
    k = Q(2, 3) if corrected else Q(1)
    a0 = np.empty((3, 3), dtype=object)
    for a, b in product(R3, R3):
        a0[a, b] = k * ric[a, b]
    a1 = np.empty((3, 3, 3, 3), dtype=object)
    for a, b, g, m in product(R3, R3, R3, R3):
        a1[a, b, g, m] = k * ric[g, m] * int(a == b) - Q(2, 3) * (riem[g, m, b, a] + riem[b, g, a, m])
    b1 = np.empty((3, 3, 3, 3, 3), dtype=object)
    for a, b, g, m, n in product(R3, R3, R3, R3, R3):
        b1[a, b, g, m, n] = (
            (Q(1, 2) * dric[m, g, n] - Q(1, 12) * dric[g, m, n]) * int(a == b)
            - Q(1, 6) * (driem[a, g, m, b, n] - 3 * driem[m, g, a, b, n] + 5 * driem[n, g, m, b, a])
        )
    b0 = np.empty((3, 3, 3), dtype=object)
    for a, b, n in product(R3, R3, R3):
        b0[a, b, n] = -Q(1, 6) * dric[b, a, n] + Q(1, 2) * dric[a, b, n] + Q(1, 2) * dric[n, a, b]
    return {"a0": a0, "a1": a1, "b1": b1, "b0": b0}


def _mono(*idx):
    e = [0, 0, 0]
    for i in idx:
        e[i] += 1
    return tuple(e)


def verify_hodge_symbol(c, geo=None, tensors=None, op=None):
    """Coefficient-wise comparison of h1, h0 with a1, b1, a0, b0; returns a report dict."""
    geo = geo or Geometry.from_curvature(c, "general")
    T = tensors or hodge_tensors(c)
    _, h1, h0 = hodge_symbol_parts(geo, op)
    report = {}

    def first_diff(pairs):
        for where, got, want in pairs:
            if got != want:
                return {"index": where, "computed": str(got), "expected": str(want)}
        return None

    pairs_a1, pairs_b1, pairs_r = [], [], []
    for a, b in product(R3, R3):
        terms = h1[a, b].terms()
        for key in terms:
            if key[2] == 0:
                pairs_r.append(((a, b, "real part"), terms[key], 0))
        for g in R3:
            jet = terms.get((_mono(g), Q(0), 1), Jet.zero(3))
            pairs_r.append(((a, b, g, "constant"), jet.constant(), 0))
            for m in R3:
                pairs_a1.append(((a, b, g, m), jet[_mono(m)], T["a1"][a, b, g, m]))
            for m in R3:
                for n in range(m, 3):
                    want = T["b1"][a, b, g, m, n] + (T["b1"][a, b, g, n, m] if m != n else 0)
                    pairs_b1.append(((a, b, g, m, n), jet[_mono(m, n)], want))
    pairs_a0, pairs_b0 = [], []
    for a, b in product(R3, R3):
        terms = h0[a, b].terms()
        jet = terms.get(((0, 0, 0), Q(0), 0), Jet.zero(2))
        if ((0, 0, 0), Q(0), 1) in terms:
            pairs_r.append(((a, b, "h0 imaginary"), terms[((0, 0, 0), Q(0), 1)], 0))
        pairs_a0.append(((a, b), jet.constant(), T["a0"][a, b]))
        for n in R3:
            pairs_b0.append(((a, b, n), jet[_mono(n)], T["b0"][a, b, n]))
    for name, pairs in (("shape", pairs_r), ("a1", pairs_a1), ("b1", pairs_b1), ("a0", pairs_a0), ("b0", pairs_b0)):
        w = first_diff(pairs)
        report[name] = {"pass": w is None, "witness": w}
    return report


def h0_at_origin(geo, op=None):
    _, _, h0 = hodge_symbol_parts(geo, op)
    out = np.empty((3, 3), dtype=object)
    for a, b in product(R3, R3):
        out[a, b] = h0[a, b].terms().get(((0, 0, 0), Q(0), 0), Jet.zero(2)).constant()
    return out


# -- trace propositions -----------------------------------------------------------


def monomial_test_basis(order=4):
    """All monomials of degree <= 3 as exact jets."""
    return [Jet.mono(e, 1, order) for e in monomials_upto(3, 3)]


def verify_trace_props(c, geo=None, transport=None, gauge="general"):
    """Matrix traces of curl, curl^3 and the Hodge Laplacian on the monomial test basis."""
    from .transport import transport_double_jet

    geo = geo or Geometry.from_curvature(c, gauge)
    Z = transport or transport_double_jet(geo)
    curl = curl_operator(geo)
    curl3 = curl @ curl @ curl
    lap = -hodge_laplacian(geo)
    sc = geo.scalar.constant()
    bad = {"curl": None, "curl3": None, "hodge": None}
    for f in monomial_test_basis():
        v1 = matrix_trace_differential(curl, Z, f)
        v3 = matrix_trace_differential(curl3, Z, f)
        vh = matrix_trace_differential(lap, Z, f)
        want = 3 * geo.laplace_beltrami(f).constant() - sc * f.constant()
        exp = next(iter(f.c))
        if v1 and bad["curl"] is None:
            bad["curl"] = {"f": exp, "value": str(v1)}
        if v3 and bad["curl3"] is None:
            bad["curl3"] = {"f": exp, "value": str(v3)}
        if vh != want and bad["hodge"] is None:
            bad["hodge"] = {"f": exp, "value": str(vh), "expected": str(want)}
    report = {k: {"pass": v is None, "witness": v} for k, v in bad.items()}
    report["R0_hodge"] = _compare_R0_hodge(geo, lap)
    report["R0_curl3"] = _compare_R0_curl3(geo, curl3)
    report["R0_curl3 corrected"] = _compare_R0_curl3(geo, curl3, corrected=True)
    return report


def r0_coefficients(op):
    """kappa -> 3x3 array of constant coefficients at the origin."""
    out = {}
    for kappa, arr in op.coefficients().items():
        vals = np.empty((3, 3), dtype=object)
        for a, b in product(R3, R3):
            vals[a, b] = arr[a, b].constant() if arr[a, b] is not None else Q(0)
        if any(vals.flat):
            out[kappa] = vals
    return out


def _compare_R0(geo, op, expected):
    got = r0_coefficients(op)
    for kappa in set(got) | set(expected):
        g = got.get(kappa)
        w = expected.get(kappa)
        for a, b in product(R3, R3):
            gv = g[a, b] if g is not None else 0
            wv = w[a, b] if w is not None else 0
            if gv != wv:
                return {"pass": False, "witness": {"kappa": kappa, "index": (a, b), "computed": str(gv), "expected": str(wv)}}
    return {"pass": True, "witness": None}


def _compare_R0_hodge(geo, lap):
    ric = geo.ricci
    exp = {}
    for k in R3:
        e = _mono(k, k)
        exp[e] = np.array([[Q(int(a == b)) for b in R3] for a in R3], dtype=object)
    exp[(0, 0, 0)] = np.array([[-Q(2, 3) * ric[a, b].constant() for b in R3] for a in R3], dtype=object)
    return _compare_R0(geo, lap, exp)


def _compare_R0_curl3(geo, curl3, corrected=False):
    sign = -1 if corrected else 1
    ric = np.array([[geo.ricci[a, b].constant() for b in R3] for a in R3], dtype=object)
    exp = {}
    for t in R3:
        arr = np.empty((3, 3), dtype=object)
        for a, b in product(R3, R3):
            arr[a, b] = sum(
                EPS[b, r, t] * ric[a, r] - sign * Q(1, 3) * (EPS[a, b, r] * ric[r, t] - EPS[a, t, r] * ric[r, b])
                for r in R3
            )
        exp[_mono(t)] = arr
    for r in R3:
        for s in R3:
            key = _mono(r, s, s)
            arr = exp.get(key)
            if arr is None:
                arr = np.array([[Q(0)] * 3 for _ in R3], dtype=object)
            for a, b in product(R3, R3):
                arr[a, b] = arr[a, b] + EPS[a, b, r]
            exp[key] = arr
    return _compare_R0(geo, curl3, exp)
