"""Scalar symbol of the asymmetry operator trace(curl (-Delta)^{-(s+1)/2}) at the centre."""
from dataclasses import dataclass, field
from itertools import product

from .curvature import EPS, R3, CurvatureData, rat_array
from .geometry import Geometry
from .hodge import curl_operator
from .powers import HodgeSymbol, power_symbols, resolvent_recursion
from .rational import Q, ZERO
from .symbols import (
    MatrixSymbol,
    Symbol,
    SymbolError,
    at_centre,
    canonical_text,
    centre_witness,
    equal_at_centre,
    is_zero_at_centre,
    matrix_compose,
    matrix_trace_pseudo,
)
from .transport import transport_double_jet

DEPTH = 4


class Context:
    """Geometry, Hodge symbol, resolvent parametrix and transport for one curvature sample."""

    def __init__(self, curvature, gauge="curvature_free_origin"):
        if gauge == "curvature_free_origin" and not curvature.flat_origin:
            curvature = curvature.with_flat_origin()
        self.curvature = curvature
        self.gauge = gauge
        self.geo = Geometry.from_curvature(curvature, gauge)
        self.hodge = HodgeSymbol(self.geo)
        self._resolvent = None
        self._transport = None

    @property
    def resolvent(self):
        if self._resolvent is None:
            self._resolvent = resolvent_recursion(self.hodge)
        return self._resolvent

    @property
    def transport(self):
        if self._transport is None:
            self._transport = transport_double_jet(self.geo)
        return self._transport

    def powers(self, s):
        return power_symbols(self.resolvent, s)


def assemble_t(ctx, s, q=None):
    """Full symbol of curl (-Delta)^{-(s+1)/2}, graded to depth 4."""
    q = q if q is not None else ctx.powers(s)
    total = q[0]
    for part in q[1:]:
        total = total + part
    curl = curl_operator(ctx.geo).symbol(ctx.geo)
    top = Q(-s)
    return matrix_compose(curl, total, min_degree=top - (DEPTH - 1))


@dataclass
class AsymmetryResult:
    s: object
    components: dict
    formula_value: Symbol
    diag: dict
    pt: dict
    t: MatrixSymbol = field(repr=False, default=None)

    def component(self, k):
        return self.components[k]


def principal_formula(curvature, s, geo):
    """-((s+1)(s+3)/6) |xi|^{-s-5} eps^{abc} nabla_a Ric_b^r xi_c xi_r at the centre."""
    s = Q(s)
    lead = -(s + 1) * (s + 3) / 6
    return _eps_dric_symbol(curvature, geo, lead, -(s + 5) / 2)


def _eps_dric_symbol(curvature, geo, coef, power):
    dric = curvature.dric0
    terms = {}
    for a, b, c, r in product(R3, R3, R3, R3):
        v = EPS[a, b, c] * dric[a, b, r]
        if not v:
            continue
        e = [0, 0, 0]
        e[c] += 1
        e[r] += 1
        key = (tuple(e), Q(power), 0)
        terms[key] = terms.get(key, ZERO) + v * coef
    from .jets import Jet

    terms = {k: Jet.const(v, geo.order) for k, v in terms.items() if v}
    return Symbol.from_terms(terms, "norm", geo)


def asymmetry_components(ctx, s, q=None):
    """Trace symbol components at degrees -s-k, k = 0..3, evaluated at the centre."""
    s = Q(s)
    t = assemble_t(ctx, s, q)
    full = matrix_trace_pseudo(t, ctx.transport, depth=DEPTH, centre=True)
    diag = at_centre(t.trace().truncate_below(-s - (DEPTH - 1)))
    pt = full - diag
    comps, dparts, pparts = {}, {}, {}
    for k in range(DEPTH):
        d = -s - k
        comps[k] = full.component(d)
        dparts[k] = diag.component(d)
        pparts[k] = pt.component(d)
    return AsymmetryResult(s, comps, principal_formula(ctx.curvature, s, ctx.geo), dparts, pparts, t)


def _check(name, ok, lhs=None, rhs=None, trials=10):
    out = {"pass": bool(ok)}
    if not ok and lhs is not None:
        out["witness"] = centre_witness(lhs, rhs, trials=trials)
        out["component"] = canonical_text(lhs)
    return name, out


def verify_components(ctx, s, trials=10, result=None):
    """Lower-order vanishing and the principal-symbol identity for one (sample, s)."""
    res = result or asymmetry_components(ctx, s)
    report = {}
    for k in range(3):
        c = res.components[k]
        name, out = _check(f"degree -s-{k} vanishes", is_zero_at_centre(c, trials), c, _zero(ctx))
        report[name] = out
    c3 = res.components[3]
    name, out = _check("principal symbol", equal_at_centre(c3, res.formula_value, trials), c3, res.formula_value, trials)
    report[name] = out
    recombined = all(
        equal_at_centre(res.diag[k] + res.pt[k], res.components[k], 4) for k in range(DEPTH)
    )
    report["diag + pt = total"] = {"pass": recombined}
    return report


def _zero(ctx):
    return Symbol.zero("norm", ctx.geo)


# -- the constituent contractions -----------------------------------------------------


def _xi_sym(geo, idx, power=ZERO, coef=1):
    from .jets import Jet

    e = [0, 0, 0]
    for i in idx:
        e[i] += 1
    return Symbol.from_terms({(tuple(e), Q(power), 0): Jet.const(coef, geo.order)}, "norm", geo)


def constituent_contractions(ctx):
    """The four contractions of x-derivatives of h1, h0 with eps at the centre.

    Returns scalar symbols (homogeneous polynomials in xi times a unit power):
    second-derivative-of-h1 trace, first-derivative-of-h0, and the two
    combinations expected to vanish.  At the centre g = delta, so indices are
    raised and lowered freely.
    """
    geo = ctx.geo
    h1, h0 = ctx.hodge.h1, ctx.hodge.h0
    lap_h1 = _zero(ctx)
    dh0 = _zero(ctx)
    quartic = _zero(ctx)
    mixed = _zero(ctx)
    for a, m, g in product(R3, R3, R3):
        e = EPS[a, m, g]
        if not e:
            continue
        for r in R3:
            d0 = at_centre(h0.m[g, a].dx(r))
            dh0 = dh0 + _xi_sym(geo, (m, r)) * d0.scale(2 * e)
            for sg in R3:
                d2 = at_centre(h1.m[g, a].dx(r).dx(sg))
                if r == sg:
                    lap_h1 = lap_h1 + _xi_sym(geo, (m,)) * d2.times_i().scale(-e)
                quartic = quartic + _xi_sym(geo, (m, r, sg)) * d2.times_i().scale(Q(e, 12))
            dm = at_centre(h1.m[g, a].dx(r).dx(m))
            mixed = mixed + _xi_sym(geo, (r,)) * dm.times_i().scale(-Q(e, 4))
    return {"lap_h1": lap_h1, "dh0": dh0, "quartic": quartic, "mixed": mixed}


def verify_constituents(ctx, trials=10):
    c = constituent_contractions(ctx)
    geo = ctx.geo
    report = {}
    for name, key, coef in (("h1 second-derivative trace", "lap_h1", Q(-8, 3)), ("h0 derivative", "dh0", Q(4, 3))):
        want = _eps_dric_symbol(ctx.curvature, geo, coef, ZERO)
        n, out = _check(name, equal_at_centre(c[key], want, trials), c[key], want)
        report[n] = out
    for name, key in (("quartic h1 term vanishes", "quartic"), ("mixed h1 term vanishes", "mixed")):
        n, out = _check(name, is_zero_at_centre(c[key], trials), c[key], _zero(ctx))
        report[n] = out
    return report


def verify_principal_symbol(ctx, s, trials=10, result=None):
    """Principal symbol identity plus the constituent contractions (curvature-free origin)."""
    if not ctx.curvature.flat_origin:
        raise SymbolError("the principal-symbol check runs with Riem(0) = 0")
    report = verify_components(ctx, s, trials, result)
    report.update(verify_constituents(ctx, trials))
    return report


def formula_vanishes(s):
    """The principal-symbol coefficient -(s+1)(s+3)/6 vanishes (formula route)."""
    s = Q(s)
    return -(s + 1) * (s + 3) / 6 == 0


def single_generator_example(s=1):
    """nabla_1 Ric_23 = 1 (all else zero): the principal symbol against the brute-force value."""
    dric = rat_array((3, 3, 3))
    dric[0, 1, 2] = dric[0, 2, 1] = Q(1)
    c = CurvatureData(rat_array((3, 3)), dric, True, None)
    ctx = Context(c)
    res = asymmetry_components(ctx, s)
    s = Q(s)
    coef = -(s + 1) * (s + 3) / 6
    # eps^{abc} nabla_a Ric_b^r xi_c xi_r reduces to xi_3^2 - xi_2^2
    want = _xi_sym(ctx.geo, (2, 2), -(s + 5) / 2, coef) - _xi_sym(ctx.geo, (1, 1), -(s + 5) / 2, coef)
    return {"pass": equal_at_centre(res.components[3], want), "value": canonical_text(res.components[3])}


def tilde_cancellation(ctx, s, c_of_s, result=None, trials=10):
    """A_prin + ((s+1)(s+3)/(6 c(s))) Ref_prin = 0 with Ref_prin = c(s) |xi|^{-s-5} eps nabla Ric xi xi.

    c(s) enters only as a common factor, so it is carried symbolically: the
    callable is used just to reject the values of s where it vanishes.
    """
    s = Q(s)
    if not (-3 < s < 2):
        raise SymbolError("the cancellation is stated for -3 < s < 2")
    if c_of_s(float(s)) == 0:
        raise SymbolError("c(s) vanishes")
    ref_over_c = _eps_dric_symbol(ctx.curvature, ctx.geo, Q(1), -(s + 5) / 2)
    if s > -1:
        a_prin = (result or asymmetry_components(ctx, s)).components[3]
    else:
        a_prin = principal_formula(ctx.curvature, s, ctx.geo)
    total = a_prin + ref_over_c.scale((s + 1) * (s + 3) / 6)
    return {"pass": is_zero_at_centre(total, trials)}


# -- transport corrections ----------------------------------------------------------------


def _t_principal(geo, s):
    """i eps^{a g k} xi_g |xi|^{-s-1}, built directly."""
    from .jets import Jet

    out = [[None] * 3 for _ in R3]
    for a, k in product(R3, R3):
        terms = {}
        for g in R3:
            if EPS[a, g, k]:
                e = [0, 0, 0]
                e[g] = 1
                terms[(tuple(e), -(Q(s) + 1) / 2, 1)] = Jet.const(EPS[a, g, k], geo.order)
        out[a][k] = Symbol.from_terms(terms, "norm", geo)
    return MatrixSymbol(out)


def symmetrised_christoffel(geo):
    """Symmetrisation over (sigma, mu, nu) of d_mu d_nu Gamma^a_{sigma k}(0) and of (1/2) nabla_nu R_{a sigma mu k}(0)."""
    G = geo.christoffel
    dR = geo.nabla_riemann_at_origin()
    lhs = rat_array((3, 3, 3, 3, 3))
    rhs = rat_array((3, 3, 3, 3, 3))
    perms = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
    for a, sg, m, n, k in product(R3, R3, R3, R3, R3):
        idx = (sg, m, n)
        acc_l = ZERO
        acc_r = ZERO
        for p in perms:
            i, j, l = idx[p[0]], idx[p[1]], idx[p[2]]
            acc_l += G[a, i, k].derive(j).derive(l).constant()
            acc_r += dR[l, a, i, j, k] / 2
        lhs[a, sg, m, n, k] = acc_l / 6
        rhs[a, sg, m, n, k] = acc_r / 6
    return lhs, rhs


def transport_corrections(ctx, s, result=None, trials=10):
    """pt-part components at degrees -s-2 and -s-3 against the closed forms; both vanish."""
    s = Q(s)
    geo = ctx.geo
    res = result or asymmetry_components(ctx, s)
    t0 = _t_principal(geo, s)
    riem = geo.riemann_at_origin()
    G = geo.christoffel
    pt2 = _zero(ctx)
    pt3 = _zero(ctx)
    for a, m, k, n in product(R3, R3, R3, R3):
        r = riem[a, m, k, n]
        if r:
            pt2 = pt2 + at_centre(t0.m[a, k].dxi(m).dxi(n)).scale(r / 6)
    for a, sg, k, m, n in product(R3, R3, R3, R3, R3):
        d2 = G[a, sg, k].derive(m).derive(n).constant()
        if d2:
            pt3 = pt3 + at_centre(t0.m[a, k].dxi(sg).dxi(m).dxi(n)).times_i(-1).scale(d2 / 6)
    lhs, rhs = symmetrised_christoffel(geo)
    report = {}
    for name, got, want in (("pt degree -s-2", res.pt[2], pt2), ("pt degree -s-3", res.pt[3], pt3)):
        n_, out = _check(name + " closed form", equal_at_centre(got, want, trials), got, want)
        report[n_] = out
        n_, out = _check(name + " vanishes", is_zero_at_centre(got, trials), got, _zero(ctx))
        report[n_] = out
    report["t_-s-1 at centre vanishes"] = {"pass": is_zero_at_centre(res.t.component(-s - 1).map(at_centre), trials)}
    report["symmetrised Christoffel"] = {"pass": bool((lhs == rhs).all())}
    return report


def general_gauge_run(curvature, s, trials=10):
    """Informational: the pipeline with Riem(0) != 0, compared with the covariant formula."""
    ctx = Context(curvature, "general")
    res = asymmetry_components(ctx, s)
    report = verify_components(ctx, s, trials, res)
    return {k: v for k, v in report.items()}
