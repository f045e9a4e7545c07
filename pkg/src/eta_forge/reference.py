"""Reference kernel: c(s), oscillatory radial integrals, Fourier asymptotics and sphere averages."""
import math
import random
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np
from scipy import integrate, special

from .curvature import EPS, R3
from .rational import Q, ZERO

GAUSS_NODES = 32
EULER_CELLS = 60


@dataclass(frozen=True)
class CutoffFn:
    """chi = 1 on [0, r1], 0 on [r2, oo).

    ``recipe="smooth"`` joins with the exp(-1/u) partition (infinitely smooth);
    ``recipe="hermite5"`` uses the degree-5 smoothstep (C^2 at the joins).
    """

    r1: float = 0.5
    r2: float = 4.0
    recipe: str = "smooth"

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise ValueError("cutoff radii must satisfy 0 < r1 < r2")
        if self.recipe not in ("smooth", "hermite5"):
            raise ValueError(f"unknown cutoff recipe {self.recipe!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        u = np.clip((r - self.r1) / (self.r2 - self.r1), 0.0, 1.0)
        if self.recipe == "hermite5":
            return 1.0 - u ** 3 * (10 - 15 * u + 6 * u ** 2)
        with np.errstate(divide="ignore", over="ignore"):
            a = np.where(u < 1, np.exp(-1.0 / np.where(u < 1, 1 - u, 1.0)), 0.0)
            b = np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)
        return a / (a + b)


DEFAULT_CUTOFF = CutoffFn()


def c_of_s(s):
    """-4 pi Gamma(s+4) sin(pi s/2) / (s (s+2)), continuous through s = 0 and s = -2."""
    s = float(s)
    if s <= -3:
        raise ValueError("c(s) is defined for s > -3")
    # sin(pi s/2)/s = (pi/2) sinc(s/2); near -2 use sin(pi s/2) = -sin(pi (s+2)/2)
    if abs(s) <= abs(s + 2):
        return float(-4 * math.pi * math.gamma(s + 4) * (math.pi / 2) * np.sinc(s / 2) / (s + 2))
    return float(4 * math.pi * math.gamma(s + 4) * (math.pi / 2) * np.sinc((s + 2) / 2) / s)


# -- oscillatory quadrature --------------------------------------------------------------


def _gauss(f, a, b, n=GAUSS_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    half = (b - a) / 2
    return half * float(np.dot(w, f(a + half * (x + 1))))


def _euler(partial):
    """Repeated averaging of the partial sums of an alternating series."""
    row = np.asarray(partial, dtype=float)
    while len(row) > 1:
        row = (row[:-1] + row[1:]) / 2
    return float(row[0])


def oscillatory_integral(head, full, t, omega, upper=None, cells=EULER_CELLS):
    """Integral over (0, upper) of ``full(y) = y**t * head(y)``, where full oscillates with period 2 pi/omega.

    The first half period uses an algebraic-weight rule for the y**t factor;
    the remainder is split into half periods whose contributions alternate in
    sign.  With ``upper=None`` the alternating tail is summed by repeated
    averaging (the Abel limit for growing amplitudes).
    """
    a = math.pi / omega
    if upper is not None and upper <= a:
        return integrate.quad(head, 0, upper, weight="alg", wvar=(t, 0), limit=200)[0]
    first = integrate.quad(head, 0, a, weight="alg", wvar=(t, 0), limit=200)[0]
    if upper is not None:
        total = first
        edge = a
        while edge + a < upper:
            total += _gauss(full, edge, edge + a)
            edge += a
        return total + _gauss(full, edge, upper)
    cell = [_gauss(full, a + k * a, a + (k + 1) * a) for k in range(cells)]
    partial = np.cumsum(cell)
    # start the averaging late enough that the amplitude varies slowly across cells
    return first + _euler(partial[cells // 3:])


# -- the two radial lemmas -----------------------------------------------------------------


def dominican_closed_form(t, xi, lemma):
    if lemma == 1:
        if t == -1:
            return math.pi / 2
        return math.gamma(t + 1) * math.cos(math.pi * t / 2) / xi ** (t + 1)
    if t == -1:
        return math.pi / 2
    if t == -2:
        return xi
    if t == -3:
        return math.pi / 4 * xi ** 2
    return (t + 2) * math.gamma(t + 1) * math.cos(math.pi * t / 2) / xi ** (t + 1)


def _sinc_pow(y, xi):
    """sin(xi y)/y, smooth at 0."""
    return xi * np.sinc(xi * y / math.pi)


def _lemma2_head(y, xi):
    """(sin(xi y) - xi y cos(xi y)) / y**3, smooth at 0."""
    y = np.asarray(y, dtype=float)
    z = xi * y
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    exact = (np.sin(zs) - zs * np.cos(zs)) / zs ** 3
    series = 1 / 3 - z ** 2 / 30 + z ** 4 / 840
    return xi ** 3 * np.where(small, series, exact)


def dominican_integral(t, xi, lemma, cutoff=None):
    """Quadrature value of the radial integral; ``cutoff=None`` is the uncut Abel limit."""
    if lemma == 1:
        if t <= -2:
            raise ValueError("lemma 1 needs t > -2")
        head = lambda y: _sinc_pow(y, xi) * _chi(cutoff, y)
        tt = t + 1
        full = lambda y: y ** t * np.sin(xi * y) * _chi(cutoff, y)
    elif lemma == 2:
        if t <= -4:
            raise ValueError("lemma 2 needs t > -4")
        head = lambda y: _lemma2_head(y, xi) * _chi(cutoff, y)
        tt = t + 3
        full = lambda y: y ** t * (np.sin(xi * y) - xi * y * np.cos(xi * y)) * _chi(cutoff, y)
    else:
        raise ValueError("lemma must be 1 or 2")
    if xi <= 0:
        raise ValueError("xi must be positive")
    upper = None if cutoff is None else cutoff.r2
    return oscillatory_integral(head, full, tt, xi, upper)


def _chi(cutoff, y):
    return 1.0 if cutoff is None else cutoff(y)


def dominican_check(t, xi, lemma, cutoff=None):
    """(closed form, quadrature, absolute difference)."""
    closed = dominican_closed_form(t, xi, lemma)
    quad = dominican_integral(t, xi, lemma, cutoff)
    return closed, quad, abs(closed - quad)


# -- Fourier transform of the model function ----------------------------------------------------


def _radial_bracket_integral(s, lam, cutoff):
    """Integral of (r^2 sin/lam + 3 r cos/lam^2 - 3 sin/lam^3)(lam r) r^{s-1} chi(r) dr."""

    def bracket_over_r(r):
        # the bracket divided by r, written to stay smooth at r = 0
        z = lam * r
        return (r * np.sin(z) / lam + 3 * np.cos(z) / lam ** 2 - 3 * _sinc_pow(r, lam) / lam ** 3) * cutoff(r)

    def full(r):
        z = lam * r
        return (r ** 2 * np.sin(z) / lam + 3 * r * np.cos(z) / lam ** 2 - 3 * np.sin(z) / lam ** 3) * r ** (s - 1) * cutoff(r)

    return oscillatory_integral(bracket_over_r, full, s, lam, cutoff.r2)


def fourier_components(s, lam, cutoff=DEFAULT_CUTOFF):
    """(f22, f33) at xi = (0, 0, lam) from the two radial reductions, and f11 from the Bessel route."""
    core = _radial_bracket_integral(s, lam, cutoff)
    f22 = -4 * math.pi / 3 * core
    f33 = 8 * math.pi / 3 * core

    def bessel_head(r):
        return r ** 2 * special.spherical_jn(2, lam * r) * cutoff(r)

    def bessel_full(r):
        return r ** (s + 2) * special.spherical_jn(2, lam * r) * cutoff(r)

    # f_ab = -4 pi (xi_a xi_b/|xi|^2 - delta_ab/3) int r^{s+2} j_2(lam r) chi dr
    f11 = -4 * math.pi * (-1 / 3) * oscillatory_integral(bessel_head, bessel_full, s, lam, cutoff.r2)
    return f11, f22, f33


def fourier_prediction(s, lam):
    """c(s) (xi_2^2 - |xi|^2/3) / |xi|^{5+s} at xi = (0, 0, lam)."""
    return c_of_s(s) * (-1 / 3) * lam ** (-3 - s)


def fourier_asymptotics_check(s, xi_mag, cutoff=DEFAULT_CUTOFF):
    if not -3 < s < 2:
        raise ValueError("s must lie in (-3, 2)")
    if xi_mag < 10:
        raise ValueError("the asymptotic check needs |xi| >= 10")
    f11, f22, f33 = fourier_components(s, xi_mag, cutoff)
    pred = fourier_prediction(s, xi_mag)
    return {
        "s": s,
        "xi": xi_mag,
        "predicted": pred,
        "quadrature": f22,
        "rel_err": abs(f22 - pred) / abs(pred),
        "ratio_33_22": f33 / f22,
        "trace": f11 + f22 + f33,
        "trace_rel": abs(f11 + f22 + f33) / abs(f22),
    }


# -- sphere averages ------------------------------------------------------------------------------

# primitive integer directions (a, b, c) with a^2 + b^2 + c^2 a perfect square
_SEEDS = ((1, 0, 0), (1, 2, 2), (2, 3, 6), (1, 4, 8), (2, 6, 9))


def symmetric_sphere_rule():
    """Unit vectors with rational coordinates, closed under sign changes and coordinate permutations."""
    nodes = set()
    for seed in _SEEDS:
        norm = math.isqrt(sum(v * v for v in seed))
        for perm in permutations(seed):
            for signs in product((1, -1), repeat=3):
                nodes.add(tuple(Q(sg * v, norm) for sg, v in zip(signs, perm)))
    return sorted(nodes)


def _eps_dric_quadratic(dric, y):
    """eps_{abg} nabla_a Ric_{bs} y^g y^s (exact if y is rational)."""
    exact = not isinstance(y[0], float)
    total = ZERO if exact else 0.0
    for a, b, g in permutations(R3):
        e = EPS[a, b, g] if exact else float(EPS[a, b, g])
        for sg in R3:
            total += e * dric[a, b, sg] * y[g] * y[sg]
    return total


def sphere_average(s, r, curvature, nodes=None):
    """Mean of the flat-model kernel r^{s-2} eps nabla Ric y y over the sphere of radius r."""
    if s <= -2:
        raise ValueError("sphere averages need s > -2")
    nodes = nodes or symmetric_sphere_rule()
    moment = sum((_eps_dric_quadratic(curvature.dric0, w) for w in nodes), ZERO) / len(nodes)
    # on the sphere y = r w, so the kernel is r^s eps nabla Ric w w
    return float(moment) * r ** s


class CurvedModel:
    """Normal-coordinate model around the centre used for the reversed kernel ref(y, 0)."""

    def __init__(self, geo, curvature, second=None, seed=0):
        self.geo = geo
        self.dric = np.array([[[float(curvature.dric0[a, b, c]) for c in R3] for b in R3] for a in R3])
        self.eps = np.array([[[float(EPS[a, b, c]) for c in R3] for b in R3] for a in R3])
        if second is None:
            rng = random.Random(seed)
            second = np.zeros((3, 3, 3, 3))
            for l, a, b, c in product(R3, R3, R3, R3):
                if b <= c:
                    second[l, a, b, c] = second[l, a, c, b] = rng.uniform(-1, 1)
        self.second = np.asarray(second, dtype=float)

    def kernel_from_centre(self, s, y):
        """ref(0, y) = |y|^{s-2} eps^{ab}_g nabla_a Ric_{bs}(0) y^g y^s."""
        r = float(np.linalg.norm(y))
        return r ** (s - 2) * _eps_dric_quadratic(self.dric, list(map(float, y)))

    def kernel_to_centre(self, s, y):
        """ref(y, 0) = |y|^{s-2} E^{ab}_g(y) nabla_a Ric_{bs}(y) v^g v^s with v = -y."""
        y = list(map(float, y))
        r = float(np.linalg.norm(y))
        geo = self.geo
        ginv = np.array([[float(geo.ginv[a, b](y)) for b in R3] for a in R3])
        rho = float(geo.rho(y))
        dric = self.dric + np.einsum("l,labc->abc", np.array(y), self.second)
        E = rho * np.einsum("am,bn,mnc->abc", ginv, ginv, self.eps)
        v = -np.array(y)
        return r ** (s - 2) * float(np.einsum("abg,abs,g,s->", E, dric, v, v))

    def symmetrised_average(self, s, r, nodes=None):
        nodes = nodes or symmetric_sphere_rule()
        vals = []
        for w in nodes:
            y = [float(c) * r for c in w]
            vals.append(0.5 * (self.kernel_from_centre(s, y) + self.kernel_to_centre(s, y)))
        return math.fsum(vals) / len(vals)

    def defect(self, s, r, nodes=None):
        """Largest |ref(0, y) - ref(y, 0)| on the sphere of radius r."""
        nodes = nodes or symmetric_sphere_rule()
        return max(
            abs(self.kernel_from_centre(s, [float(c) * r for c in w]) - self.kernel_to_centre(s, [float(c) * r for c in w]))
            for w in nodes
        )


def fitted_exponent(radii, values):
    """Slope of log|value| against log r."""
    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.abs(np.asarray(values, dtype=float)))
    return float(np.polyfit(x, y, 1)[0])
