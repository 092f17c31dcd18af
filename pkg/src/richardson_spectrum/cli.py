"""Command-line front end: catalogs, sweeps and figure datasets as CSV or JSON.

Exit status is 0 on success, 1 when ``verify`` finds a failing criterion and
2 on a usage error.  ``RICHARDSON_THREADS`` sets the number of worker
processes for the energy sweeps; output order never depends on it.
"""
import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import acceptance
from .errors import SpectrumError
from .lattice import multiplicity_table, reduced_energy_matrix, site
from .richardson import (SheetLabel, census_radius, classify_segments, oscillation_census,
                         real_couplings)
from .charfun import node_count
from .schrodinger import (PI2_4, branch_catalog, critical_catalog, eigencurves, trace_real_locus,
                          trace_type_b)

THREADS_ENV = "RICHARDSON_THREADS"


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == 0:
            x = 0.0   # no negative zeros in the output
        return f"{x:.9g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(_fmt(x))
    return x


def _emit(columns, rows, fmt, out):
    if fmt == "json":
        recs = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
        out.write(json.dumps(recs, indent=1) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


def _workers():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, n)


def _pmap(fn, items):
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands, each returning (columns, rows)

def cmd_eigencurves(a):
    grid = np.linspace(a.lmin, a.lmax, a.points)
    pairs = sorted(eigencurves(a.nmax, grid), key=lambda p: (p.sheet, p.lam.real))
    rows = [(p.lam.real, p.sheet, p.E.real, p.osc) for p in pairs]
    return ["lambda", "n", "E", "osc"], rows


def cmd_branch_points(a):
    cat = branch_catalog(a.nmax, a.radius)
    if a.quadrant:
        cat = [b for b in cat if b.lam.real >= -1e-9 and b.lam.imag > 0]
    rows = [(b.sheets[0], b.sheets[1], b.lam.real, b.lam.imag, b.E.real, b.E.imag) for b in cat]
    return ["sheet_lo", "sheet_hi", "re_lambda", "im_lambda", "re_E", "im_E"], rows


def cmd_critical_points(a):
    cat = critical_catalog(a.nmax)
    rows = [(c.sheet, c.kind.value, c.lam, c.E, c.exact) for c in cat]
    return ["sheet", "kind", "lambda", "E", "exact"], rows


def cmd_trace_locus(a):
    if a.type_b:
        loc = trace_type_b(a.sheet)
    else:
        loc = trace_real_locus((a.start_lambda, a.start_E))
    rows = [(k, complex(l).real, complex(l).imag, complex(E).real) for k, (l, E) in enumerate(loc.points)]
    return ["index", "re_lambda", "im_lambda", "E"], rows


def _curves_at(args):
    E, radius = args
    return [(E, lam, node_count(lam, E, sample=False)) for lam, _ in real_couplings(E, radius)]


def cmd_richardson_curves(a):
    grid = np.linspace(a.emin, a.emax, a.points)
    radius = a.radius if a.radius else census_radius(a.emax, a.nmax - 1)
    chunks = _pmap(_curves_at, [(float(E), radius) for E in grid])
    rows = [r for ch in chunks for r in ch if r[2] < a.nmax]
    return ["E", "lambda", "osc"], rows


def cmd_segments(a):
    rows = []
    for label in a.sheet:
        for s in classify_segments(SheetLabel.parse(label), a.emin, a.emax):
            rows.append((str(s.sheet), s.type.value, s.E_lo, s.E_hi,
                         "" if s.osc is None else s.osc,
                         ";".join(_fmt(e) for e in s.critical_points),
                         s.lo_cataloged and s.hi_cataloged))
    return ["sheet", "type", "E_lo", "E_hi", "osc", "critical_E", "cataloged"], rows


def _census_at(args):
    E, m_max, radius = args
    return oscillation_census(E, m_max, radius)


def cmd_census(a):
    Es = [float(e) for e in a.E]
    res = _pmap(_census_at, [(E, a.mmax, a.radius) for E in Es])
    rows = [(E, m, N) for E, Ns in zip(Es, res) for m, N in enumerate(Ns)]
    return ["E", "m", "N_m"], rows


def cmd_lattice(a):
    if a.table3:
        return ["E_red", "N_d"], [(e, k) for e, k in multiplicity_table(10)]
    if a.extrema:
        rows = []
        for c in critical_catalog(a.nmax):
            i = j = ""
            if c.exact:
                lam_red = int(round(c.lam / PI2_4))
                # i + j - 1 = n and 2 n (j - i) = lam_red
                d = lam_red // (2 * c.sheet)
                j = (c.sheet + 1 + d) // 2
                i = c.sheet + 1 - j
                assert site(i, j).lambda_red == lam_red
            rows.append((c.sheet, c.kind.value, i, j, c.lam, c.E))
        return ["n", "kind", "i", "j", "lambda", "E"], rows
    M = reduced_energy_matrix(a.size)
    rows = [(i + 1, j + 1, int(M[i, j])) for i in range(a.size) for j in range(a.size)]
    return ["i", "j", "E_red"], rows


def cmd_verify(a, out):
    results = acceptance.run_all(echo=lambda s: (out.write(s + "\n"), out.flush()))
    failed = [c for c in results if not c.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return 1 if failed else 0


def _positive(kind):
    def conv(text):
        x = kind(text)
        if x <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return x
    return conv


def build_parser():
    p = argparse.ArgumentParser(prog="richardson-spectrum",
                                description="Spectra of -psi'' - lambda sgn(x) psi = E psi on [-1, 1].")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", help="write here instead of standard output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eigencurves", help="E_n(lambda) for real lambda")
    s.add_argument("--nmax", type=_positive(int), default=4)
    s.add_argument("--lmin", type=float, default=-40.0)
    s.add_argument("--lmax", type=float, default=40.0)
    s.add_argument("--points", type=_positive(int), default=321)

    s = sub.add_parser("branch-points", help="collisions of levels at complex lambda")
    s.add_argument("--nmax", type=_positive(int), default=5)
    s.add_argument("--radius", type=_positive(float), default=70.0)
    s.add_argument("--quadrant", action="store_true", help="only Re lambda >= 0, Im lambda > 0")

    s = sub.add_parser("critical-points", help="maxima and minima of E_n(lambda)")
    s.add_argument("--nmax", type=_positive(int), default=6)

    s = sub.add_parser("trace-locus", help="a curve in the lambda-plane on which E stays real")
    s.add_argument("--start-lambda", type=float, default=float(np.pi ** 2))
    s.add_argument("--start-E", type=float, default=float(5 * np.pi ** 2 / 4))
    s.add_argument("--type-b", action="store_true", help="imaginary-axis locus from lambda = 0")
    s.add_argument("--sheet", type=_positive(int), default=1)

    s = sub.add_parser("richardson-curves", help="real couplings lambda_n(E) with node counts")
    s.add_argument("--nmax", type=_positive(int), default=4)
    s.add_argument("--emin", type=float, default=-10.0)
    s.add_argument("--emax", type=float, default=40.0)
    s.add_argument("--points", type=_positive(int), default=201)
    s.add_argument("--radius", type=_positive(float), default=None)

    s = sub.add_parser("segments", help="spectral types along a labelled coupling")
    s.add_argument("--sheet", nargs="+", default=["1+"], help="labels such as 1+ 2- 3+")
    s.add_argument("--emin", type=float, default=0.0)
    s.add_argument("--emax", type=float, default=25.0)

    s = sub.add_parser("census", help="number of real couplings with m nodes")
    s.add_argument("--E", nargs="+", type=float, required=True)
    s.add_argument("--mmax", type=int, default=8)
    s.add_argument("--radius", type=_positive(float), default=None)

    s = sub.add_parser("lattice", help="integer lattice of maxima")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--table3", action="store_true", help="smallest energy for each multiplicity")
    g.add_argument("--extrema", action="store_true", help="extrema with lattice coordinates")
    s.add_argument("--size", type=_positive(int), default=8, help="matrix size")
    s.add_argument("--nmax", type=_positive(int), default=6)

    sub.add_parser("verify", help="run the acceptance suite")
    return p


COMMANDS = {
    "eigencurves": cmd_eigencurves,
    "branch-points": cmd_branch_points,
    "critical-points": cmd_critical_points,
    "trace-locus": cmd_trace_locus,
    "richardson-curves": cmd_richardson_curves,
    "segments": cmd_segments,
    "census": cmd_census,
    "lattice": cmd_lattice,
}


def main(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = open(a.output, "w", newline="") if a.output else sys.stdout
    try:
        if a.command == "verify":
            return cmd_verify(a, out)
        try:
            columns, rows = COMMANDS[a.command](a)
        except ValueError as e:
            # DomainError is a ValueError: bad parameters are a usage error
            sys.stderr.write(f"error: {e}\n")
            return 2
        except SpectrumError as e:
            sys.stderr.write(f"error: {e}\n")
            return 1
        _emit(columns, rows, a.format, out)
        return 0
    finally:
        if a.output:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
