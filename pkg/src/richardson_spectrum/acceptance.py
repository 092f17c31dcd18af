"""The acceptance suite: one function per reference result, each returning a
:class:`Criterion`.  Shared by the ``verify`` command and the test-suite."""
import time
from dataclasses import dataclass

import numpy as np

from .charfun import char_at, root_scale
from .identities import (defect_check, derivative_check, imaginary_part_check, level_at,
                         reciprocity_check, signature_check)
from .lattice import defective_multiplicity, multiplicity_by_enumeration, multiplicity_table
from .richardson import (SpectralType, classify_segments, eigencouplings, oscillation_census,
                         zettl_bound)
from .rootfind import DegeneratePoint, Mode
from .schrodinger import (Extremum, branch_catalog, critical_catalog, find_extrema,
                          lattice_maxima, levels, monodromy_swaps, sheet_participation,
                          trace_real_locus, trace_type_b, PI2_4)

PI2 = np.pi ** 2

# reference branch points with Re lambda >= 0, Im lambda > 0:
# (sheets, Re lambda, Im lambda, Re E, Im E)
BRANCH_POINTS = [
    ((1, 2), 0.0, 4.475309, 6.401903, 0.0),
    ((2, 3), 9.264139, 6.834853, 17.617719, 0.960866),
    ((3, 4), 0.0, 12.801544, 30.979714, 0.0),
    ((3, 4), 28.204239, 7.318111, 37.550337, 1.481781),
    ((4, 5), 16.798312, 15.527134, 52.144783, 1.436416),
    ((4, 5), 57.481587, 7.358543, 67.167957, 1.676906),
]

# reference minima of E_n at lambda != 0: (n, |lambda|, E)
MINIMA = [
    (3, 6.151546, 21.996039),
    (4, 23.271272, 41.909383),
    (5, 10.258305, 61.478860),
    (5, 52.084097, 71.536568),
    (6, 34.746014, 91.264186),
    (6, 91.259508, 111.019851),
]

# smallest reduced energy for each defective multiplicity: (E_red, N_d)
SMALLEST_BY_MULTIPLICITY = [(1, 1), (5, 2), (25, 3), (65, 4), (625, 5), (325, 6), (15625, 7),
                            (1105, 8), (4225, 9), (8125, 10)]

# oscillation counts N_0..N_8 at the listed energies
CENSUS = {
    1.0: [2] * 9,
    5.0: [0] + [2] * 8,
    11.0: [0, 4] + [2] * 7,
    PI2: [0, 3] + [2] * 7,
    5 * PI2 / 4: [0, 2] + [2] * 7,
}


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


_cache = {}


def _branch_points():
    if "bp" not in _cache:
        t0 = time.perf_counter()
        cat = branch_catalog(5, 70.0)
        _cache["bp"] = (cat, time.perf_counter() - t0)
    return _cache["bp"]


def _critical():
    if "cp" not in _cache:
        _cache["cp"] = critical_catalog(6)
    return _cache["cp"]


def _match_branch_points(cat):
    hits = []
    for sheets, lr, li, er, ei in BRANCH_POINTS:
        best = None
        for b in cat:
            if tuple(b.sheets) != sheets:
                continue
            err = max(abs(b.lam.real - lr), abs(b.lam.imag - li), abs(b.E.real - er), abs(b.E.imag - ei))
            if best is None or err < best[0]:
                best = (err, b)
        hits.append(best)
    return hits


def reference_branch_points():
    cat, elapsed = _branch_points()
    hits = _match_branch_points(cat)
    worst = max(h[0] if h else np.inf for h in hits)
    ok = worst <= 1e-5 and elapsed < 60
    return Criterion(1, "reference branch points", ok,
                     f"worst component error {worst:.2e} (tol 1e-5), {elapsed:.1f} s (budget 60 s)")


def _match_minima(cat):
    hits = []
    for n, lam, E in MINIMA:
        mins = [c for c in cat if c.sheet == n and c.kind == Extremum.MIN and c.lam > 0]
        err = min((max(abs(c.lam - lam), abs(c.E - E)), c) for c in mins)[0] if mins else np.inf
        c = min(mins, key=lambda c: abs(c.lam - lam)) if mins else None
        hits.append((err, c))
    return hits


def reference_minima():
    hits = _match_minima(_critical())
    worst = max(h[0] for h in hits)
    return Criterion(2, "reference minima", worst <= 1e-5,
                     f"worst component error {worst:.2e} (tol 1e-5)")


def lattice_exactness():
    found = find_extrema(6)
    worst, count = 0.0, 0
    for n, pts in found.items():
        exact = {round(c.lam / PI2_4): c for c in lattice_maxima(n)}
        for lam, E, kind in pts:
            if kind != Extremum.MAX:
                continue
            c = exact.get(round(lam / PI2_4))
            err = np.inf if c is None else max(abs(c.lam - lam), abs(c.E - E))
            worst = max(worst, err)
            count += 1
    expected = sum(range(1, 7))
    ok = worst <= 1e-10 and count == expected
    return Criterion(3, "maxima on the exact lattice", ok,
                     f"{count}/{expected} maxima, worst deviation {worst:.2e} (tol 1e-10)")


def multiplicity_table_check():
    rows = multiplicity_table(10)
    counts = multiplicity_by_enumeration(20001)
    bad = [e for e in range(1, 20002, 2) if counts[e] != defective_multiplicity(e)]
    ok = rows == SMALLEST_BY_MULTIPLICITY and not bad
    return Criterion(4, "smallest energies with given multiplicity", ok,
                     f"rows {'match' if rows == SMALLEST_BY_MULTIPLICITY else rows}; divisor formula vs enumeration "
                     f"disagrees at {len(bad)} odd values <= 20001")


def segments():
    segs = classify_segments("1+", 0.0, 25.0)
    types = [s.type.value for s in segs]
    bounds = [s.E_hi for s in segs[:-1]]
    want_types = ["R", "iR", "R", "C", "R"]
    want_bounds = [PI2 / 4, PI2, 5 * PI2 / 4, 21.996039]
    oscs = [s.osc for s in segs if s.type == SpectralType.R]
    ok = (types == want_types and len(bounds) == 4
          and max(abs(a - b) for a, b in zip(bounds, want_bounds)) <= 1e-5
          and oscs[:2] == [0, 1])
    desc = ", ".join(f"{s.type.value}({s.E_lo:.6f},{s.E_hi:.6f})" + (f" osc {s.osc}" if s.osc is not None else "")
                     for s in segs)
    return Criterion(5, "segments of lambda_1^+ on [0, 25]", ok, desc)


def census():
    bad = []
    for E, want in CENSUS.items():
        got = oscillation_census(E, 8)
        if got != want:
            bad.append((E, got))
    n1 = [oscillation_census(E, 1)[1] for E in (5.0, PI2, 11.0, 5 * PI2 / 4)]
    ok = not bad and n1 == [2, 3, 4, 2]
    return Criterion(6, "oscillation census", ok,
                     f"N_1 sequence {n1}" + (f"; mismatches {bad}" if bad else ""))


def zettl(samples=200, radius=400.0, seed=12345):
    rng = np.random.default_rng(seed)
    worst = None
    for E in rng.uniform(0.0, 60.0, samples):
        cs = eigencouplings(E, radius)
        k = len(cs.nonreal)
        if k > cs.zettl_bound and worst is None:
            worst = (E, k, cs.zettl_bound)
    sat = [len(eigencouplings(E, radius).nonreal) for E in (5.0, 5 * PI2 / 4 + 0.05)]
    ok = worst is None and sat == [2, 4] and [zettl_bound(5.0), zettl_bound(5 * PI2 / 4 + 0.05)] == [2, 4]
    return Criterion(7, "Zettl bound", ok,
                     f"{samples} energies, {'no violations' if worst is None else f'violation {worst}'}; "
                     f"non-real counts at E=5 and just above 5pi^2/4: {sat}")


def defects():
    cat, _ = _branch_points()
    worst = 0.0
    for err, b in _match_branch_points(cat):
        worst = max(worst, defect_check(DegeneratePoint(b.lam, b.E, Mode.SCHRODINGER_BP)).residual)
    worst2 = 0.0
    for err, c in _match_minima(_critical()):
        worst2 = max(worst2, defect_check(DegeneratePoint(c.lam, c.E, Mode.RICHARDSON_BP)).residual)
    ok = worst <= 1e-8 and worst2 <= 1e-8
    return Criterion(8, "defect orthogonality", ok,
                     f"max |<psi|psi>_R| {worst:.2e}, max |<phi|v|phi>_R| {worst2:.2e} (tol 1e-8)")


def _random_real_pairs(rng, count):
    crit = _critical()
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 5))
        lam = float(rng.uniform(-30.0, 30.0))
        if min(abs(lam - c.lam) for c in crit if c.sheet == n) <= 0.1:
            continue
        out.append((lam, float(levels(lam, n)[n - 1])))
    return out


def identities(seed=2024):
    rng = np.random.default_rng(seed)
    d_worst = r_worst = 0.0
    for lam, E in _random_real_pairs(rng, 100):
        d_worst = max(d_worst, derivative_check(lam, E).residual)
        r_worst = max(r_worst, reciprocity_check(lam, E).residual)
    i_worst = 0.0
    for _ in range(100):
        lam = complex(rng.uniform(-10, 10), rng.uniform(0.1, 3.0))
        n = int(rng.integers(1, 4))
        E = level_at(lam, n)
        i_worst = max(i_worst, imaginary_part_check(lam, E).residual)
    ok = d_worst <= 1e-6 and r_worst <= 1e-8 and i_worst <= 1e-8
    return Criterion(9, "identity suite", ok,
                     f"derivative {d_worst:.2e} (1e-6), reciprocity {r_worst:.2e} (1e-8), "
                     f"Im E identity {i_worst:.2e} (1e-8)")


def _quadrupling(locus):
    worst = 0.0
    for lam, E in locus.points:
        worst = max(worst, abs(complex(E).imag))
        for img in (lam, -lam, np.conj(lam), -np.conj(lam)):
            cv = char_at(img, E)
            worst = max(worst, abs(cv.D) / root_scale(cv, img, E))
    return worst


def real_loci():
    B = trace_type_b(1)
    ends = sorted(b[0].imag for b in B.branch_points)
    b_ok = len(ends) == 2 and abs(ends[0] + 4.475309) <= 1e-5 and abs(ends[1] - 4.475309) <= 1e-5
    C = trace_real_locus((PI2, 5 * PI2 / 4))
    sig = signature_check(C)
    quad = _quadrupling(C)
    ok = b_ok and C.closed and C.return_distance <= 1e-6 and quad <= 1e-8 and sig.passed
    return Criterion(10, "real loci", ok,
                     f"type B ends {ends}; C loop closed={C.closed} return {C.return_distance:.1e}, "
                     f"{len(C.points)} points, quadrupling {quad:.1e}, signature {sig.residual:.1e}")


def counting():
    cat = _critical()
    crit_counts = [sum(c.sheet == n for c in cat) for n in range(1, 7)]
    bp, _ = _branch_points()
    part = [sheet_participation(bp, n) for n in range(1, 4)]
    ok = crit_counts == [2 * n - 1 for n in range(1, 7)] and part == [4 * n - 2 for n in range(1, 4)]
    return Criterion(11, "counting claims", ok,
                     f"critical points per sheet {crit_counts}; branch-point participation {part}")


def monodromy():
    cat, _ = _branch_points()
    results = []
    for err, b in _match_branch_points(cat):
        swapped = monodromy_swaps(b.lam, b.E, max(b.sheets) + 1)[0]
        results.append(bool(swapped))
    return Criterion(12, "monodromy", all(results), f"swaps {results}")


ALL = [reference_branch_points, reference_minima, lattice_exactness, multiplicity_table_check,
       segments, census, zettl, defects, identities, real_loci, counting, monodromy]


def run_all(echo=None):
    out = []
    for fn in ALL:
        try:
            c = fn()
        except Exception as exc:  # a crash is a failed criterion, not an aborted run
            c = Criterion(ALL.index(fn) + 1, fn.__name__, False, f"raised {exc!r}")
        out.append(c)
        if echo:
            echo(c.line())
    return out
