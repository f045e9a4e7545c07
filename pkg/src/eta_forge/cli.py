"""eta-forge command line: verify, eta, tables, fourier-check.

Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error.
"""
import argparse
import csv
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import suite
from .curvature import random_curvature
from .eta import SpectrumError, eta_partial, read_spectrum_csv, torus_spectrum
from .geometry import Geometry
from .powers import keyhole_residue, power_weights, residue_coefficient
from .rational import Q
from .reference import (
    CurvedModel,
    c_of_s,
    dominican_check,
    fitted_exponent,
    fourier_asymptotics_check,
    sphere_average,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DOMINICAN_GRID = {1: (-1.5, -1.0, 0.0, 0.7), 2: (-3.0, -2.0, -1.0, 0.5)}
DOMINICAN_XI = (20.0, 50.0, 100.0)
SPHERE_RADII = (0.1, 0.05, 0.025)


class ConfigError(Exception):
    pass


def _num(x):
    """Deterministic text for a CSV cell."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _list(text, conv):
    try:
        return [conv(v) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {text!r}: {exc}") from None


def _seeds(text):
    """'5' means seeds 1..5; '3,7,11' lists them."""
    vals = _list(text, int)
    if len(vals) == 1:
        if vals[0] < 1:
            raise ConfigError("--seeds needs a positive count")
        return list(range(1, vals[0] + 1))
    return vals


@contextmanager
def _out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_csv(path, header, rows):
    with _out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])


# -- verify -----------------------------------------------------------------------------


def cmd_verify(args):
    if args.gauge not in suite.GAUGES:
        raise ConfigError(f"unknown gauge {args.gauge!r}")
    cfg = suite.RunConfig(
        seeds=_seeds(args.seeds),
        s_list=_list(args.s_list, suite.parse_s),
        gauge=args.gauge,
        trials=args.trials,
        threads=suite.threads_from_env(),
        fixture=args.fixture,
    )
    checks = suite.run(cfg)
    rep = suite.report(cfg, checks)
    if args.json:
        with _out(args.json) as fh:
            fh.write(json.dumps(rep, sort_keys=True, indent=1, default=str) + "\n")
    counts = rep["summary"]
    print(f"{len(checks)} checks: " + ", ".join(f"{k} {counts[k]}" for k in sorted(counts)), file=sys.stderr)
    for c in checks:
        if c.status == suite.FAIL:
            print(f"FAIL {c.name} seed={c.seed} s={c.s}", file=sys.stderr)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


# -- eta ----------------------------------------------------------------------------------------


def cmd_eta(args):
    s_vals = _list(args.s, float)
    if args.torus:
        L = _list(args.torus, float)
        if len(L) != 3:
            raise ConfigError("--torus takes three side lengths")
        if args.radius is None:
            raise ConfigError("--torus needs --radius")
        sp = torus_spectrum(L, args.radius)
        radius = None
    else:
        sp = read_spectrum_csv(args.spectrum)
        radius = args.radius
    rows = []
    for s in s_vals:
        ep = eta_partial(sp, s, radius)
        rows.append((s, ep.K, ep.value, "n/a" if ep.tail_bound is None else ep.tail_bound))
    _write_csv(args.csv, ("s", "K", "eta_partial", "tail_bound"), rows)
    return EXIT_OK


# -- tables ----------------------------------------------------------------------------------------


def _table_residues(s_vals):
    rows = []
    for n in range(1, 6):
        for s in s_vals:
            exact = residue_coefficient(n, Q(s))
            quad = keyhole_residue(n, float(s)).real if s > -1 else "n/a"
            rows.append((n, s, exact, float(exact), quad))
    return ("n", "s", "C_n", "C_n_float", "keyhole"), rows


def _table_coefficients(s_vals):
    rows = []
    for s in s_vals:
        w = power_weights(Q(s))
        for n in range(2, 6):
            coef, expo = w(n)
            rows.append((n, s, coef, expo))
    return ("n", "s", "coefficient", "exponent_of_N"), rows


def _table_c(s_vals):
    return ("s", "c"), [(s, c_of_s(float(s))) for s in s_vals]


def _table_dominican(_):
    rows = []
    for lemma, ts in DOMINICAN_GRID.items():
        for t in ts:
            for xi in DOMINICAN_XI:
                closed, quad, err = dominican_check(t, xi, lemma)
                rows.append((lemma, t, xi, closed, quad, err))
    return ("lemma", "t", "xi", "closed_form", "quadrature", "abs_err"), rows


def _table_sphere(s_vals, seed=1):
    c = random_curvature(seed)
    model = CurvedModel(Geometry.from_curvature(c, "general"), c, seed=seed)
    rows = []
    for s in s_vals:
        sym = [model.symmetrised_average(float(s), r) for r in SPHERE_RADII]
        expo = fitted_exponent(SPHERE_RADII, sym)
        for r, v in zip(SPHERE_RADII, sym):
            rows.append((s, r, sphere_average(float(s), r, c), v, expo))
    return ("s", "r", "symmetric_rule_average", "symmetrised_average", "fitted_exponent"), rows


TABLES = {
    "residues": _table_residues,
    "coefficients": _table_coefficients,
    "c": _table_c,
    "dominican": _table_dominican,
    "sphere": _table_sphere,
}


def cmd_tables(args):
    s_vals = _list(args.s, suite.parse_s)
    header, rows = TABLES[args.table](s_vals)
    _write_csv(args.csv, header, rows)
    return EXIT_OK


# -- fourier-check ----------------------------------------------------------------------------------


def cmd_fourier(args):
    rows, ok = [], True
    for s in _list(args.s, float):
        for xi in _list(args.xi, float):
            r = fourier_asymptotics_check(s, xi)
            rows.append((r["s"], r["xi"], r["predicted"], r["quadrature"], r["rel_err"]))
            if args.tol is not None and r["rel_err"] > args.tol:
                ok = False
    _write_csv(args.csv, ("s", "xi", "predicted", "quadrature", "rel_err"), rows)
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point ------------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="eta-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="symbolic checks over curvature seeds and s values")
    v.add_argument("--seeds", default="3", help="count N (seeds 1..N) or a comma list")
    v.add_argument("--s-list", default="1/2,1,2,5/2", help="comma list; fractions allowed")
    v.add_argument("--gauge", default=suite.GAUGES[0], choices=suite.GAUGES)
    v.add_argument("--trials", type=int, default=10, help="random xi per symbol comparison")
    v.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
    v.add_argument("--fixture", choices=("corrupt-b1",), help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eta", help="eta partial sums of an explicit spectrum")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--torus", metavar="L1,L2,L3")
    src.add_argument("--spectrum", metavar="FILE.csv")
    e.add_argument("--s", default="4,5,6")
    e.add_argument("--radius", type=float)
    e.add_argument("--csv", metavar="PATH")
    e.set_defaults(func=cmd_eta)

    t = sub.add_parser("tables", help="residue coefficients, power coefficients, c(s), radial lemmas, sphere averages")
    t.add_argument("--table", choices=sorted(TABLES), default="residues")
    t.add_argument("--s", default="-1/2,0,1/2,1")
    t.add_argument("--csv", metavar="PATH")
    t.set_defaults(func=cmd_tables)

    f = sub.add_parser("fourier-check", help="Fourier asymptotics of the reference function")
    f.add_argument("--s", default="-0.5,0,0.5,1")
    f.add_argument("--xi", default="20,30,40")
    f.add_argument("--tol", type=float)
    f.add_argument("--csv", metavar="PATH")
    f.set_defaults(func=cmd_fourier)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SpectrumError, ValueError, OSError) as exc:
        print(f"eta-forge: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
