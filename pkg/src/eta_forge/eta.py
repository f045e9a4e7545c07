"""Eta partial sums for explicit spectra; the flat-torus curl spectrum and its mode-level checks."""
import csv
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np


class SpectrumError(ValueError):
    pass


@dataclass
class Spectrum:
    """Eigenvalues with multiplicities, sorted by |lambda| (negative first within a shell).

    ``counting`` is an optional pair (A, B) with N(L) <= A L^3 (1 + B/L)^3 for
    the number of eigenvalues of modulus at most L, counted with multiplicity.
    """

    levels: list
    meta: dict = field(default_factory=dict)
    counting: tuple = None

    def __post_init__(self):
        merged = {}
        for lam, mult in self.levels:
            if lam == 0:
                raise SpectrumError("zero is not allowed in the spectrum")
            if int(mult) != mult or mult <= 0:
                raise SpectrumError("multiplicities must be positive integers")
            merged[lam] = merged.get(lam, 0) + int(mult)
        self.levels = sorted(merged.items(), key=lambda lm: (abs(lm[0]), lm[0]))

    def shells(self):
        """(|lambda|, signed multiplicity) per distinct modulus, in increasing order."""
        out = {}
        for lam, mult in self.levels:
            key = abs(lam)
            out[key] = out.get(key, 0) + (mult if lam > 0 else -mult)
        return sorted(out.items())

    def count(self):
        return sum(m for _, m in self.levels)

    def radius(self):
        return max((abs(lam) for lam, _ in self.levels), default=0.0)

    def is_symmetric(self):
        return all(m == 0 for _, m in self.shells())


@dataclass(frozen=True)
class EtaPartial:
    s: float
    K: float
    value: float
    tail_bound: object  # float, or None when not applicable


def _exact(x):
    return Fraction(x) if not isinstance(x, Fraction) else x


def torus_spectrum(L, radius):
    """Curl on the flat torus R^3 / (L1 Z x L2 Z x L3 Z).

    Each nonzero wavevector k = 2 pi (n1/L1, n2/L2, n3/L3) carries a
    two-dimensional plane of coexact modes on which curl acts with the
    eigenvalues +|k| and -|k|; the counts are per wavevector (k and -k are both
    listed), so every shell holds equal positive and negative multiplicity.
    """
    L = tuple(float(v) for v in L)
    if len(L) != 3 or min(L) <= 0:
        raise SpectrumError("torus side lengths must be three positive numbers")
    radius = float(radius)
    kmin = 2 * math.pi / max(L)
    if radius < kmin:
        raise SpectrumError("radius below the smallest nonzero wavevector: empty spectrum")
    bounds = [int(math.floor(radius * l / (2 * math.pi))) for l in L]
    inv2 = [Fraction(1) / _exact(l) ** 2 for l in L]
    limit = _exact(radius / (2 * math.pi)) ** 2
    shells = {}
    for n in product(*(range(-b, b + 1) for b in bounds)):
        if not any(n):
            continue
        key = sum(ni * ni * w for ni, w in zip(n, inv2))
        if key <= limit:
            shells[key] = shells.get(key, 0) + 1
    levels = []
    for key, mult in shells.items():
        lam = 2 * math.pi * math.sqrt(key)
        levels.append((lam, mult))
        levels.append((-lam, mult))
    vol = L[0] * L[1] * L[2]
    # lattice points inside the ellipsoid with semi-axes a_i = Lambda L_i / (2 pi), cubes grown by sqrt(3)/2
    A = 2 * (4 * math.pi / 3) * vol / (2 * math.pi) ** 3
    B = (math.sqrt(3) / 2) * 2 * math.pi / min(L)
    meta = {"source": "torus", "L": list(L), "radius": radius, "volume": vol,
            "multiplicity": "per wavevector, one + and one - eigenvalue each"}
    return Spectrum(levels, meta, (A, B))


def read_spectrum_csv(path):
    """CSV rows ``lambda,multiplicity``; '#' starts a comment, a header row is optional."""
    levels = []
    with open(path, newline="") as fh:
        rows = csv.reader(line for line in fh if line.split("#", 1)[0].strip())
        for row in rows:
            row = [c.split("#", 1)[0].strip() for c in row]
            if not row or not row[0]:
                continue
            try:
                lam = float(row[0])
            except ValueError:
                if levels:
                    raise SpectrumError(f"bad eigenvalue {row[0]!r}") from None
                continue  # header
            mult = int(row[1]) if len(row) > 1 and row[1] else 1
            levels.append((lam, mult))
    if not levels:
        raise SpectrumError("empty spectrum file")
    sp = Spectrum(levels, {"source": str(path)})
    # empirical cubic envelope of the counting function
    running, A = 0, 0.0
    for lam, m in sorted(((abs(l), m) for l, m in sp.levels)):
        running += m
        A = max(A, running / lam ** 3)
    sp.counting = (A, 0.0)
    sp.meta["counting"] = "empirical envelope"
    return sp


def _tail_bound(counting, R, s):
    """Bound on sum_{|lambda| > R} |lambda|^{-s} from N(L) <= A L^3 (1 + B/L)^3 (s > 3)."""
    A, B = counting
    total = 0.0
    for j, binom in enumerate((1, 3, 3, 1)):
        total += binom * B ** j * R ** (3 - s - j) / (s - 3 + j)
    return s * A * total


def eta_partial(sp, s, radius=None):
    """sum sgn(lambda) |lambda|^{-s} over |lambda| <= radius (whole spectrum by default).

    Contributions are grouped by modulus first, so a shell with equal positive
    and negative multiplicity contributes exactly zero.
    """
    s = float(s)
    R = sp.radius() if radius is None else float(radius)
    terms = [m * lam ** (-s) for lam, m in sp.shells() if lam <= R and m]
    value = math.fsum(terms)
    tail = _tail_bound(sp.counting, R, s) if (s > 3 and sp.counting) else None
    return EtaPartial(s, R, value, tail)


def eta_reversed(sp, s, radius=None):
    """Independent summation: every level separately, largest modulus first."""
    R = sp.radius() if radius is None else float(radius)
    total = 0.0
    for lam, m in reversed(sp.levels):
        if abs(lam) <= R:
            total += math.copysign(1.0, lam) * m * abs(lam) ** (-float(s))
    return total


def mode_density(L):
    """|u|^2 of an L^2-normalised real Fourier mode on the torus: constant, 1/vol."""
    return 1.0 / math.prod(float(v) for v in L)


def local_eta_torus(L, s, x, radius):
    """sum sgn(lambda) |lambda|^{-s} |u(x)|^2 over the truncated spectrum."""
    if s <= 3:
        raise ValueError("the local eta density is summed for s > 3")
    del x  # translation invariance: |u|^2 does not depend on the point
    sp = torus_spectrum(L, radius)
    return eta_partial(sp, s).value * mode_density(L)


def curl_mode_matrix(L, n):
    """Curl on e^{i k.x} v: v -> i k x v, a Hermitian 3x3 matrix."""
    k = 2 * math.pi * np.array([n[i] / L[i] for i in range(3)], dtype=float)
    cross = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return 1j * cross, k


def sign_projector_identity(L, n, s=0.0, r=0.75):
    """Mode-level checks of curl (-Delta)^{-(s+1)/2} and (-Delta)^r on one wavevector."""
    if not any(n):
        raise ValueError("the zero wavevector carries no coexact modes")
    K, k = curl_mode_matrix(L, n)
    kn = float(np.linalg.norm(k))
    lap = kn ** 2 * np.eye(3)
    vals, vecs = np.linalg.eigh(K)
    vecs = vecs[:, np.argsort(vals)]
    minus, plus = vecs[:, 0:1], vecs[:, 2:3]
    P_plus = plus @ plus.conj().T
    P_minus = minus @ minus.conj().T
    power = np.diag(np.diag(lap) ** (-(s + 1) / 2))
    op = K @ power
    op_vals = np.sort(np.linalg.eigvalsh(op))
    unit = np.sort(np.linalg.eigvalsh(K / kn))
    grad = k / kn
    lap_r = np.linalg.eigvalsh(np.diag(np.diag(lap) ** r))
    return {
        "unit_eigenvalues": unit.tolist(),
        "unit_error": float(max(abs(unit[0] + 1), abs(unit[1]), abs(unit[2] - 1))),
        "power_error": float(max(abs(op_vals[0] + kn ** -s), abs(op_vals[1]), abs(op_vals[2] - kn ** -s))),
        "projector_error": float(np.abs(K / kn - (P_plus - P_minus)).max()),
        "gradient_error": float(np.abs(K @ grad).max() / kn),
        "laplacian_power_error": float(np.abs(lap_r - kn ** (2 * r)).max() / kn ** (2 * r)),
    }


def random_modes(count, seed=0, bound=6):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = tuple(rng.randint(-bound, bound) for _ in range(3))
        if any(n):
            out.append(n)
    return out
