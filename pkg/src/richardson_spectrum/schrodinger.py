"""Schroedinger side: levels E_n(lam) of -psi'' - lam sgn(x) psi = E psi.

Eigencurves for real coupling, the critical points of those curves (maxima on
an exact lattice, minima found numerically), complex-coupling branch points
where two levels collide, and the curves in the complex lam-plane along which
a level stays real.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .charfun import char_arrays, char_at, node_count
from .errors import LostTrack, MissingExtremum, NonConvergence, SymmetryViolation
from .lattice import site
from .rootfind import (DoubleRootSpec, Mode, closed_form_nodes, double_root,
                       real_roots_in_E)

PI2_4 = np.pi ** 2 / 4


@dataclass(frozen=True)
class EigenPair:
    lam: complex
    E: complex
    sheet: int
    osc: int = None


class Extremum(str, Enum):
    MAX = "Max"
    MIN = "Min"


@dataclass(frozen=True)
class CriticalPoint:
    lam: float
    E: float
    sheet: int
    kind: Extremum
    exact: bool = False


@dataclass(frozen=True)
class BranchPoint:
    lam: complex
    E: complex
    sheets: tuple


class LocusKind(str, Enum):
    A = "A"   # real axis
    B = "B"   # imaginary axis
    C = "C"   # off-axis curve


@dataclass
class RealLocus:
    kind: LocusKind
    sheets: set
    points: list = field(default_factory=list)   # (lam, E) with E real
    closed: bool = False
    end: str = ""
    return_distance: float = float("nan")
    crossings: list = field(default_factory=list)  # critical points met on the real axis
    branch_points: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# eigencurves

def levels(lam, n):
    """Lowest ``n`` real levels at real coupling ``lam``."""
    lam = float(lam)
    # E_1 > -|lam|; E_n <= min(n^2 pi^2/4 + |lam|, n^2 pi^2 - |lam|)
    hi = min(n * n * PI2_4 + abs(lam), 4 * n * n * PI2_4 - abs(lam)) + 1.0
    roots = real_roots_in_E(lam, -abs(lam) - 1.0, hi)
    if len(roots) < n:
        raise NonConvergence(f"found {len(roots)} < {n} levels at lambda={lam}")
    return np.array(roots[:n])


def _newton_levels(lam, E):
    E = E.astype(complex)
    for _ in range(20):
        D, _, DE = char_arrays(lam, E)[:3]
        step = (D / DE).real
        E = E - step
        if np.all(np.abs(step) <= 1e-14 * np.maximum(1.0, np.abs(E))):
            break
    return E.real


def level_table(n_max, lambda_grid):
    """Array ``T[k, n-1] = E_n(lambda_grid[k])`` built by continuation in lambda.

    Each step is predicted with the slope -D_lambda/D_E and corrected by
    Newton; a step whose levels do not carry node counts 0..n_max-1 in order
    is redone by a full bracketing scan.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    out = np.empty((len(grid), n_max))
    want = np.arange(n_max)
    E = levels(grid[0], n_max)
    out[0] = E
    for k in range(1, len(grid)):
        lam0, lam1 = grid[k - 1], grid[k]
        _, Dl, DE = char_arrays(lam0, E)[:3]
        pred = E + (-Dl / DE).real * (lam1 - lam0)
        Enew = _newton_levels(lam1, pred)
        ok = (np.all(np.isfinite(Enew)) and np.all(np.diff(Enew) > 0)
              and np.array_equal(closed_form_nodes(lam1, Enew), want)
              and np.all(np.abs(Enew - pred) < 0.25 * np.min(np.diff(np.r_[-np.inf, Enew]))))
        if not ok:
            Enew = levels(lam1, n_max)
        out[k] = E = Enew
    return out


def eigencurves(n_max, lambda_grid):
    """Lowest ``n_max`` real levels at each grid coupling, labelled by sheet.

    The labels follow ascending order, which on the real axis coincides with
    the node count plus one.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    grid = np.asarray(lambda_grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("lambda grid must be strictly increasing")
    table = level_table(n_max, grid)
    out = []
    for lam, row in zip(grid, table):
        nodes = closed_form_nodes(lam, row)
        for n, (E, m) in enumerate(zip(row, nodes), start=1):
            out.append(EigenPair(complex(lam), complex(E), n, int(m)))
    return out


# ---------------------------------------------------------------------------
# critical points

def lattice_maxima(n):
    """The n exact maxima of E_n, as CriticalPoints sorted by lambda."""
    pts = []
    for i in range(1, n + 1):
        s = site(i, n + 1 - i)
        pts.append(CriticalPoint(PI2_4 * s.lambda_red, PI2_4 * s.E_red, n, Extremum.MAX, True))
    return sorted(pts, key=lambda c: c.lam)


def _lambda_span(n):
    # outermost maximum of sheet n sits at reduced coupling 2 n (n-1)
    return PI2_4 * 2 * n * (n - 1) + 5.0


def _refine_critical(lam, E, n):
    lam_c, E_c = double_root(DoubleRootSpec(Mode.RICHARDSON_BP, lam, E))
    if abs(lam_c.imag) > 1e-8 * max(1, abs(lam_c)) or abs(E_c.imag) > 1e-8 * max(1, abs(E_c)):
        return None
    lam_c, E_c = lam_c.real, E_c.real
    if node_count(lam_c, E_c, sample=False) != n - 1:
        return None
    return lam_c, E_c


def find_extrema(n_max, spacing=0.25, table=None, grid=None):
    """Numerically located critical points of E_1..E_{n_max} for real lambda.

    Seeds are sign changes of the discrete slope of each eigencurve on a
    lambda >= 0 grid; each seed is refined by the (D, D_lambda) Newton
    iteration and mirrored to lambda < 0.  Returns ``{n: [(lam, E, kind)]}``.
    """
    if grid is None:
        grid = np.arange(0.0, _lambda_span(n_max) + spacing, spacing)
        table = level_table(n_max, grid)
    found = {}
    for n in range(1, n_max + 1):
        Ec = table[:, n - 1]
        span = _lambda_span(n)
        cut = np.searchsorted(grid, span) + 1
        Ec = Ec[:cut]
        pts = []
        # lambda = 0 is always critical by the lambda -> -lambda symmetry
        kind0 = Extremum.MAX if Ec[1] < Ec[0] else Extremum.MIN
        pts.append((0.0, float(levels(0.0, n)[n - 1]), kind0))
        dE = np.diff(Ec)
        for k in range(1, len(dE)):
            if dE[k - 1] > 0 and dE[k] <= 0:
                kind = Extremum.MAX
            elif dE[k - 1] < 0 and dE[k] >= 0:
                kind = Extremum.MIN
            else:
                continue
            if k <= 1:
                continue
            res = _refine_critical(grid[k], Ec[k], n)
            if res is None or res[0] <= 1e-8:
                continue
            if any(abs(res[0] - p[0]) < 1e-7 * max(1, res[0]) for p in pts):
                continue
            pts.append((res[0], res[1], kind))
        mirrored = [(-l, E, k) for l, E, k in pts if l > 0]
        found[n] = sorted(pts + mirrored, key=lambda p: p[0])
    return found


def critical_catalog(n_max, spacing=0.25):
    """All 2n-1 critical points of each eigencurve E_n, n <= n_max.

    Maxima carry the exact lattice values (after the numerical maximum has
    been matched to its lattice site); minima are the numerical double roots.
    Raises :class:`MissingExtremum` if a sheet does not show exactly n maxima
    and n-1 minima even after halving the seed spacing twice.
    """
    if not 1 <= n_max <= 10:
        raise ValueError("n_max must lie in 1..10")
    for attempt in range(3):
        h = spacing / 2 ** attempt
        found = find_extrema(n_max, h)
        bad = [n for n, pts in found.items()
               if sum(p[2] == Extremum.MAX for p in pts) != n
               or sum(p[2] == Extremum.MIN for p in pts) != n - 1]
        if not bad:
            break
    else:
        raise MissingExtremum(f"sheets {bad} do not have 2n-1 critical points")
    out = []
    for n in range(1, n_max + 1):
        exact = {round(c.lam / PI2_4): c for c in lattice_maxima(n)}
        for lam, E, kind in found[n]:
            if kind == Extremum.MAX:
                c = exact.get(round(lam / PI2_4))
                if c is None or abs(c.lam - lam) > 1e-8 * max(1, abs(lam)) or abs(c.E - E) > 1e-8 * E:
                    raise MissingExtremum(f"maximum ({lam}, {E}) on sheet {n} is off the lattice")
                out.append(c)
            else:
                out.append(CriticalPoint(float(lam), float(E), n, Extremum.MIN, False))
    return out


# ---------------------------------------------------------------------------
# branch points

def galerkin_matrices(size):
    """Sine-basis matrices (H0, M) with H(lam) = H0 - lam * M.

    Basis sin(n pi (x+1)/2), n = 1..size; H0 is diagonal with (n pi/2)^2 and
    M holds the matrix elements of sgn(x).
    """
    n = np.arange(1, size + 1)

    def g(p):
        p = np.asarray(p, dtype=float)
        out = np.zeros_like(p)
        nz = p != 0
        out[nz] = -2 * np.sin(p[nz] * np.pi / 2) / (p[nz] * np.pi)
        return out

    M = g(n[:, None] - n[None, :]) - g(n[:, None] + n[None, :])
    return np.diag((n * np.pi / 2) ** 2), M


def galerkin_levels(lam, size=40, count=None):
    """Approximate complex levels at complex ``lam`` (array-valued ``lam``
    allowed), sorted by real part."""
    H0, M = galerkin_matrices(size)
    lam = np.asarray(lam, dtype=complex)
    H = H0 - lam[..., None, None] * M
    ev = np.linalg.eigvals(H)
    ev = np.take_along_axis(ev, np.argsort(ev.real, axis=-1), axis=-1)
    return ev if count is None else ev[..., :count]


def _bp_seeds(radius, n_levels, h=1.0, size=36):
    xs = np.arange(0.0, radius + h, h)
    ys = np.arange(h / 2, radius + h, h)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    L = X + 1j * Y
    mask = np.abs(L) <= radius + 2 * h
    ev = galerkin_levels(L[mask], size, n_levels)
    d = np.abs(ev[:, :, None] - ev[:, None, :])
    d[:, np.arange(n_levels), np.arange(n_levels)] = np.inf
    flat = d.reshape(len(d), -1)
    idx = flat.argmin(axis=1)
    gap = np.full(L.shape, np.inf)
    gap[mask] = flat.min(axis=1)
    k = np.arange(len(d))
    Eseed = np.full(L.shape, np.nan, dtype=complex)
    Eseed[mask] = (ev[k, idx // n_levels] + ev[k, idx % n_levels]) / 2
    seeds = []
    for i in range(L.shape[0]):
        for j in range(L.shape[1]):
            if mask[i, j] and gap[i, j] <= gap[max(0, i - 1):i + 2, max(0, j - 1):j + 2].min():
                seeds.append((L[i, j], Eseed[i, j]))
    return seeds


def _track_levels(path, E0, max_halvings=30):
    """Continue the complex levels ``E0`` along the polyline ``path``.

    Steps are halved until Newton converges quickly and the corrected levels
    stay well separated relative to the correction.
    """
    E = np.array(E0, dtype=complex)
    for a, b in zip(path[:-1], path[1:]):
        t, dt = 0.0, 1.0
        halvings = 0
        while t < 1.0:
            dt = min(dt, 1.0 - t)
            lam0 = a + (b - a) * t
            lam1 = a + (b - a) * (t + dt)
            _, Dl, DE = char_arrays(lam0, E)[:3]
            pred = E - Dl / DE * (lam1 - lam0)
            Enew = pred.copy()
            converged = False
            for _ in range(8):
                D, _, DE1 = char_arrays(lam1, Enew)[:3]
                step = D / DE1
                Enew = Enew - step
                if np.all(np.abs(step) <= 1e-13 * np.maximum(1.0, np.abs(Enew))):
                    converged = True
                    break
            sep = np.abs(Enew[:, None] - Enew[None, :]) + np.diag(np.full(len(E), np.inf))
            moved = np.abs(Enew - pred)
            if converged and np.all(moved < 0.1 * sep.min(axis=1)) and np.all(np.isfinite(Enew)):
                E = Enew
                t += dt
                dt *= 1.5
                halvings = 0
            else:
                dt /= 2
                halvings += 1
                if halvings > max_halvings:
                    raise LostTrack(f"level tracking failed near lambda={lam0}")
    return E


def _approach_path(lam_bp, dist, tilt=0.03):
    """Slightly tilted ray from 0 towards lam_bp, stopping ``dist`` short.

    Branch cuts run radially outward, so the ray meets none of them; the tilt
    keeps it off other branch points that lie on the same ray."""
    r = abs(lam_bp)
    ts = np.linspace(0.0, 1.0 - dist / r, 64)
    return lam_bp * ts * np.exp(-1j * tilt * (1 - ts))


def label_branch_point(lam_bp, E_bp, n_track, dist=0.05):
    """Sheets (n, n+1) of the two levels that collide at lam_bp.

    Levels are continued from lam = 0, where E_n = n^2 pi^2 / 4, along an
    almost radial path to a point ``dist`` away from the branch point; the two
    levels nearest E_bp there are the colliding pair.  Returns the pair and
    the tracked levels at the end of the path.
    """
    E0 = np.arange(1, n_track + 1) ** 2 * PI2_4
    path = _approach_path(lam_bp, dist)
    E = _track_levels(path, E0)
    order = np.argsort(np.abs(E - E_bp))
    pair = tuple(sorted(int(k) + 1 for k in order[:2]))
    return pair, path[-1], E


def monodromy_swaps(lam_bp, E_bp, n_track, dist=0.05, npts=64):
    """Continue the colliding pair once around a small circle about lam_bp.

    Returns ``(swapped, start_levels, end_levels)``: the pair must exchange
    places for a square-root branch point.
    """
    pair, lam_start, E = label_branch_point(lam_bp, E_bp, n_track, dist)
    ab = np.array([E[pair[0] - 1], E[pair[1] - 1]])
    circle = lam_bp + (lam_start - lam_bp) * np.exp(1j * np.linspace(0, 2 * np.pi, npts + 1))
    circle[0] = lam_start
    circle[-1] = lam_start
    end = _track_levels(circle, ab)
    swapped = abs(end[0] - ab[1]) < 1e-8 * max(1, abs(ab[1])) and abs(end[1] - ab[0]) < 1e-8 * max(1, abs(ab[0]))
    return swapped, ab, end


def _mirror_images(lam, E):
    return [(lam, E), (-lam.conjugate(), E.conjugate()), (lam.conjugate(), E.conjugate()), (-lam, E)]


def branch_catalog(n_max, radius, grid_spacing=1.0):
    """Schroedinger branch points with |lam| <= radius joining sheets <= n_max.

    Seeds are local minima, over a grid in the first quadrant, of the smallest
    gap between approximate (Galerkin) levels; each seed is polished by the
    (D, D_E) Newton iteration.  Every point is labelled by continuation from
    lam = 0 and its mirror images under lam -> -lam and lam -> conj(lam) are
    confirmed by Newton before they are added.  Sorted by sheet pair, then
    |lam|, then arg.
    """
    n_track = n_max + 2
    quadrant = []
    for lam0, E0 in _bp_seeds(radius, n_track, grid_spacing):
        try:
            lam, E = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, lam0, E0))
        except (NonConvergence, Exception):
            continue
        if abs(lam) > radius or lam.imag <= 1e-9 or lam.real < -1e-9:
            continue
        if abs(lam.real) < 1e-9 * max(1, abs(lam)):
            lam = complex(0.0, lam.imag)
            E = complex(E.real, 0.0)
        if any(abs(lam - q[0]) < 1e-7 * max(1, abs(lam)) for q in quadrant):
            continue
        quadrant.append((lam, E))
    out = []
    for lam, E in quadrant:
        pair, _, _ = label_branch_point(lam, E, n_track)
        if pair[1] > n_max:
            continue
        seen = []
        for ml, mE in _mirror_images(lam, E):
            if any(abs(ml - s) < 1e-9 * max(1, abs(ml)) for s in seen):
                continue
            seen.append(ml)
            perturbed = (ml * (1 + 1e-6), mE * (1 + 1e-6))
            try:
                cl, cE = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, *perturbed))
            except NonConvergence as exc:
                raise SymmetryViolation(f"mirror image {ml} of {lam} did not converge") from exc
            if abs(cl - ml) > 1e-8 * max(1, abs(ml)) or abs(cE - mE) > 1e-8 * max(1, abs(mE)):
                raise SymmetryViolation(f"mirror image {ml} of {lam} converged to {cl}")
            out.append(BranchPoint(ml, mE, pair))
    out.sort(key=lambda b: (b.sheets, round(abs(b.lam), 6), round(np.angle(b.lam), 6)))
    return out


def sheet_participation(catalog, n):
    return sum(n in b.sheets for b in catalog)


# ---------------------------------------------------------------------------
# real loci

def _real_jacobian(lam, E):
    D, Dl, DE = char_arrays(lam, E)[:3]
    D, Dl, DE = complex(D), complex(Dl), complex(DE)
    F = np.array([D.real, D.imag])
    J = np.array([[Dl.real, -Dl.imag, DE.real],
                  [Dl.imag, Dl.real, DE.imag]])
    return F, J, DE


def _leave_axis(lam_c, E_c, h):
    """First point of the real locus at height ``h`` above a real critical
    point: solve Re D = Im D = 0 for (x, E) with Im lam = h fixed."""
    cv = char_at(lam_c, E_c)
    curv = -(cv.D_ll / cv.D_E).real
    x, E = lam_c, E_c - 0.5 * curv * h * h
    for _ in range(30):
        F, J, _ = _real_jacobian(complex(x, h), E)
        A = J[:, [0, 2]]
        step = np.linalg.solve(A, F)
        x, E = x - step[0], E - step[1]
        if np.abs(step).max() < 1e-14 * max(1, abs(E)):
            break
    F, _, _ = _real_jacobian(complex(x, h), E)
    if np.abs(F).max() > 1e-10:
        raise LostTrack(f"could not leave the real axis at ({lam_c}, {E_c})")
    return np.array([x, h, E])


def _correct(p_pred, t):
    p = p_pred.copy()
    for it in range(10):
        F, J, _ = _real_jacobian(complex(p[0], p[1]), p[2])
        G = np.r_[F, t @ (p - p_pred)]
        A = np.vstack([J, t])
        step = np.linalg.solve(A, G)
        p = p - step
        if np.abs(step).max() < 1e-13 * max(1.0, abs(p[2])):
            F, _, _ = _real_jacobian(complex(p[0], p[1]), p[2])
            if np.abs(F).max() <= 1e-11:
                return p, it + 1
    return None, 10


def _tangent(p, prev):
    _, J, _ = _real_jacobian(complex(p[0], p[1]), p[2])
    t = np.cross(J[0], J[1])
    t /= np.linalg.norm(t)
    return t if t @ prev >= 0 else -t


def trace_real_locus(start, sheet=None, h0=1e-3, s_min=1e-4, s_max=0.5,
                     store_spacing=0.05, max_steps=20000, direction=1):
    """Follow the set {(lam, E): D(lam, E) = 0, E real} away from a real
    critical point ``start`` (a CriticalPoint or an ``(lam, E)`` pair).

    Pseudo-arclength continuation in (Re lam, Im lam, E): the predictor moves
    along the kernel of the 2x3 real Jacobian and the corrector restores
    D = 0 orthogonally to it.  The first step leaves the real axis vertically
    (``direction`` +1 for the upper half plane).  The trace stops when it
    meets a branch point (a zero of D_E with real E), or when it comes back to
    the real axis at the start point.  A return to the real axis elsewhere is
    a critical point of another sheet; the trace passes through it
    vertically and carries on into the opposite half plane.
    """
    lam_c, E_c = (start.lam, start.E) if isinstance(start, CriticalPoint) else start
    lam_c, E_c = float(np.real(lam_c)), float(np.real(E_c))
    kind = LocusKind.B if abs(lam_c) < 1e-12 else LocusKind.C
    sheets = {sheet} if sheet else {node_count(lam_c, E_c, sample=False) + 1}
    locus = RealLocus(kind, set(sheets))
    locus.points.append((complex(lam_c, 0.0), E_c))
    locus.crossings.append((lam_c, E_c))
    origin = np.array([lam_c, 0.0, E_c])
    ysign = float(direction)
    p = _leave_axis(lam_c, E_c, ysign * h0)
    t = (p - origin) / np.linalg.norm(p - origin)
    locus.points.append((complex(p[0], p[1]), p[2]))
    s = min(s_max, 0.01)
    _, _, DE_prev = _real_jacobian(complex(p[0], p[1]), p[2])
    for _ in range(max_steps):
        t = _tangent(p, t)
        lam_speed = np.hypot(t[0], t[1])
        s_eff = min(s, store_spacing / max(lam_speed, 1e-12))
        q, iters = _correct(p + s_eff * t, t)
        if q is None or np.linalg.norm(q - p) > 3 * s_eff:
            s /= 2
            if s < s_min:
                raise LostTrack(f"corrector failed near lambda={complex(p[0], p[1])}, E={p[2]}")
            continue
        moved = np.hypot(q[0] - p[0], q[1] - p[1])
        if moved > store_spacing:
            # the corrector overshot the storage spacing; retake a shorter step
            s = 0.95 * s_eff * store_spacing / moved
            continue
        _, _, DE = _real_jacobian(complex(q[0], q[1]), q[2])
        # branch point: D_E turns through zero while E stays real
        if (DE * DE_prev.conjugate()).real < 0:
            try:
                bl, bE = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, complex(q[0], q[1]), q[2]))
            except NonConvergence:
                bl = None
            if bl is not None and abs(bl - complex(q[0], q[1])) < 4 * s_eff \
                    and abs(bE.imag) < 1e-8 * max(1, abs(bE)):
                locus.points.append((bl, bE.real))
                locus.branch_points.append((bl, bE))
                locus.end = "branch point"
                return locus
        # back on the real axis
        if q[1] * ysign <= 0:
            x0 = p[0] + (q[0] - p[0]) * p[1] / (p[1] - q[1])
            E0 = p[2] + (q[2] - p[2]) * p[1] / (p[1] - q[1])
            cl, cE = double_root(DoubleRootSpec(Mode.RICHARDSON_BP, x0, E0))
            cl, cE = cl.real, cE.real
            locus.points.append((complex(cl, 0.0), cE))
            dist = abs(cl - lam_c) + abs(cE - E_c)
            if dist < 1e-6 * max(1.0, abs(E_c)):
                locus.closed = True
                locus.end = "closed"
                locus.return_distance = dist
                return locus
            locus.crossings.append((cl, cE))
            locus.sheets.add(node_count(cl, cE, sample=False) + 1)
            ysign = -ysign
            p = _leave_axis(cl, cE, ysign * h0)
            t = np.array([0.0, ysign, 0.0])
            locus.points.append((complex(p[0], p[1]), p[2]))
            _, _, DE_prev = _real_jacobian(complex(p[0], p[1]), p[2])
            s = min(s_max, 0.01)
            continue
        p = q
        DE_prev = DE
        locus.points.append((complex(p[0], p[1]), p[2]))
        s = min(s_max, s * (1.5 if iters <= 3 else 1.0))
    raise LostTrack("maximum number of continuation steps reached")


def trace_type_b(sheet=1):
    """The imaginary-axis real locus through lam = 0 on ``sheet``, traced up
    and down until the branch points that terminate it."""
    E0 = float(levels(0.0, sheet)[sheet - 1])
    up = trace_real_locus((0.0, E0), sheet, direction=1)
    down = trace_real_locus((0.0, E0), sheet, direction=-1)
    pts = list(reversed(down.points[1:])) + up.points
    locus = RealLocus(LocusKind.B, up.sheets | down.sheets, pts, False, "branch points")
    locus.branch_points = down.branch_points + up.branch_points
    locus.crossings = up.crossings
    return locus
