"""Simple and double roots of the characteristic function.

Three tools live here: a bracketing scan for real levels E at real coupling,
an argument-principle search for complex couplings inside a rectangle, and a
2x2 Newton iteration for double roots (branch points and critical points).
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .charfun import ROOT_RTOL, char_arrays, char_at, char_value, root_scale
from .errors import BoundaryRoot, DegenerateJacobian, GridTooCoarse, NonConvergence


class Mode(str, Enum):
    """Which partial derivative joins D = 0 in the double-root system."""
    SCHRODINGER_BP = "SchrodingerBP"   # D = D_E = 0: two levels E collide
    RICHARDSON_BP = "RichardsonBP"     # D = D_lambda = 0: critical point of E(lambda)


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"empty rectangle {self}")

    @property
    def corners(self):
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    @property
    def size(self):
        return max(self.re_max - self.re_min, self.im_max - self.im_min)

    def contains(self, z, pad=0.0):
        return (self.re_min - pad <= z.real <= self.re_max + pad
                and self.im_min - pad <= z.imag <= self.im_max + pad)


@dataclass(frozen=True)
class DoubleRootSpec:
    mode: Mode
    seed_lambda: complex
    seed_E: complex


@dataclass(frozen=True)
class DegeneratePoint:
    """A double root of D together with the two sheets it joins (if known)."""
    lam: complex
    E: complex
    mode: Mode
    sheets: tuple = None


# ---------------------------------------------------------------------------
# real levels at real coupling

def _phase(E, lam):
    return np.sqrt(np.maximum(E + lam, 0.0) + 1.0) + np.sqrt(np.maximum(E - lam, 0.0) + 1.0)


def _e_grid(lam, E_lo, E_hi, per_pi=24):
    """Grid that is uniform in the accumulated wavenumber, so every level
    spacing receives about ``per_pi`` samples."""
    fine = np.linspace(E_lo, E_hi, 4096 + int(abs(E_hi - E_lo)))
    P = _phase(fine, lam)
    n = max(int((P[-1] - P[0]) / (np.pi / per_pi)) + 2, 64)
    return np.interp(np.linspace(P[0], P[-1], n), P, fine)


def _dedupe_sorted(roots, rel=1e-8):
    out = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > rel * max(1.0, abs(r)):
            out.append(r)
    return out


def closed_form_nodes(lam, E):
    """Vectorised interior node count at real roots (no sampling check)."""
    lam = np.asarray(lam, dtype=float)
    E = np.asarray(E, dtype=float)
    u = E + lam
    v = E - lam
    ku = np.sqrt(np.maximum(u, 0.0)) / np.pi
    kv = np.sqrt(np.maximum(v, 0.0)) / np.pi
    nu = np.where(u > 0, np.ceil(ku - 1e-9) - 1, 0)
    nv = np.where(v > 0, np.ceil(kv - 1e-9) - 1, 0)
    # psi(0) = 0 exactly when both sines vanish
    both = (u > 0) & (v > 0) & (np.abs(ku - np.round(ku)) < 1e-9) & (np.abs(kv - np.round(kv)) < 1e-9)
    return (nu + nv + both).astype(int)


def real_roots_in_E(lam, E_lo, E_hi, max_count=None, refine_cap=6):
    """All real roots of E -> D(lam, E) inside [E_lo, E_hi], ascending.

    The interval is scanned for sign changes on a grid that is uniform in
    wavenumber; each bracket is polished with Brent's method.  Adjacent roots
    must differ by exactly one interior node (Sturm oscillation), otherwise the
    offending gap is rescanned on a finer grid.
    """
    lam = float(lam)
    if not E_lo < E_hi:
        raise ValueError("E_lo must be below E_hi")

    def f(E):
        return char_value(lam, E).real

    def scan(a, b, per_pi):
        grid = _e_grid(lam, a, b, per_pi)
        vals = f(grid)
        roots = []
        for i in np.nonzero(vals == 0.0)[0]:
            roots.append(float(grid[i]))
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in idx:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15, maxiter=200))
        return roots

    roots = _dedupe_sorted(scan(E_lo, E_hi, 24))
    for level in range(refine_cap + 1):
        if len(roots) < 2:
            break
        nodes = closed_form_nodes(lam, np.array(roots))
        gaps = np.nonzero(np.diff(nodes) != 1)[0]
        if len(gaps) == 0:
            break
        if level == refine_cap:
            raise GridTooCoarse(f"node sequence {nodes.tolist()} at lambda={lam} not consecutive")
        extra = []
        for g in gaps:
            extra += scan(roots[g], roots[g + 1], 24 * 4 ** (level + 1))
        roots = _dedupe_sorted(roots + extra)
    if max_count is not None:
        roots = roots[:max_count]
    for r in roots:
        cv = char_at(lam, r)
        if abs(cv.D) > ROOT_RTOL * root_scale(cv, lam, r):
            raise NonConvergence(f"root {r} at lambda={lam} failed the residual test")
    return roots


# ---------------------------------------------------------------------------
# argument principle in the lambda plane at fixed E

_MAX_EDGE_POINTS = 1 << 16


def _edge(E, z0, z1, n0=64):
    """Sample D along the segment z0 -> z1, bisecting any interval whose arg
    increment reaches pi/4 or which is longer than half the Newton distance
    |D/D_lambda| at its ends (a nearby root can hide a full turn between two
    samples).  Returns (points, D values, total arg change)."""
    t = np.linspace(0.0, 1.0, n0 + 1)
    length = abs(z1 - z0)
    while True:
        z = z0 + (z1 - z0) * t
        D, Dl = char_arrays(z, E)[:2]
        if np.any(D == 0):
            raise BoundaryRoot(f"D vanishes on the edge {z0} -> {z1}")
        dphi = np.angle(D[1:] / D[:-1])
        reach = np.abs(D) / np.maximum(np.abs(Dl), 1e-300)
        h = np.diff(t) * length
        bad = (np.abs(dphi) >= np.pi / 4) | (h > 0.5 * np.minimum(reach[1:], reach[:-1]))
        if not bad.any():
            return z, D, float(np.sum(dphi))
        if len(t) + bad.sum() > _MAX_EDGE_POINTS:
            raise BoundaryRoot(f"cannot resolve the argument of D on {z0} -> {z1}")
        t = np.sort(np.concatenate([t, (t[:-1] + t[1:])[bad] / 2]))


def _clearance_ok(E, z, d, size):
    """A root within ~1e-6 * size of the sampled boundary makes |D|/|D_lambda|
    (its Newton distance) small there."""
    dl = char_arrays(z, E)[1]
    dist = np.abs(d) / np.maximum(np.abs(dl), 1e-300)
    return float(np.min(dist)) >= 1e-6 * size


def _contour(E, rect):
    c = rect.corners
    pieces = [_edge(E, c[k], c[(k + 1) % 4]) for k in range(4)]
    total = sum(p[2] for p in pieces)
    wind = total / (2 * np.pi)
    ok = all(_clearance_ok(E, p[0], p[1], rect.size) for p in pieces)
    return wind, pieces, ok


def winding_number(E, rect):
    """Number of lambda-roots of D(., E) enclosed by ``rect``."""
    wind, _, ok = _contour(E, rect)
    if not ok or abs(wind - round(wind)) > 1e-3:
        raise BoundaryRoot(f"boundary of {rect} is too close to a root (winding {wind:.6f})")
    return int(round(wind))


def _contour_mean(E, pieces):
    """(1/2 pi i) ∮ z D'/D dz by the trapezoid rule on the samples."""
    acc = 0.0
    for z, d, _ in pieces:
        dl = char_arrays(z, E)[1]
        g = z * dl / d
        acc += np.sum((g[1:] + g[:-1]) * np.diff(z)) / 2
    return acc / (2j * np.pi)


def _newton_lambda(E, lam, maxit=60):
    for _ in range(maxit):
        cv = char_at(lam, E)
        if cv.D_lambda == 0:
            break
        step = cv.D / cv.D_lambda
        lam -= step
        if abs(step) <= 1e-15 * max(1.0, abs(lam)):
            break
    return lam


def _split_fracs():
    # off-centre splits keep sub-rectangle edges off symmetry lines
    return (0.5 + 0.0123456789, 0.5 - 0.0313131313, 0.5 + 0.0771, 0.5 - 0.1113)


def _search(E, rect, wind, pieces, depth, out, max_depth):
    if wind == 0:
        return
    scale = max(1.0, abs(complex((rect.re_min + rect.re_max) / 2, (rect.im_min + rect.im_max) / 2)))
    if wind == 1:
        seed = _contour_mean(E, pieces)
        root = _newton_lambda(E, seed)
        cv = char_at(root, E)
        if rect.contains(root, pad=1e-9 * scale) and abs(cv.D) <= ROOT_RTOL * root_scale(cv, root, E):
            out.append((root, 1))
            return
    elif rect.size < 1e-5 * scale:
        # a cluster quadrisection cannot usefully separate: one multiple root
        root = complex((rect.re_min + rect.re_max) / 2, (rect.im_min + rect.im_max) / 2)
        for _ in range(60):
            cv = char_at(root, E)
            if cv.D_ll == 0:
                break
            step = cv.D_lambda / cv.D_ll
            root -= step
            if abs(step) < 1e-15 * scale:
                break
        out.append((root, wind))
        return
    if depth >= max_depth:
        raise NonConvergence(f"quadrisection exceeded depth {max_depth} in {rect}")
    for fx in _split_fracs():
        xm = rect.re_min + fx * (rect.re_max - rect.re_min)
        ym = rect.im_min + fx * (rect.im_max - rect.im_min)
        subs = [Rectangle(rect.re_min, xm, rect.im_min, ym), Rectangle(xm, rect.re_max, rect.im_min, ym),
                Rectangle(xm, rect.re_max, ym, rect.im_max), Rectangle(rect.re_min, xm, ym, rect.im_max)]
        try:
            results = [_contour(E, s) for s in subs]
        except BoundaryRoot:
            continue
        winds = [r[0] for r in results]
        if all(r[2] for r in results) and all(abs(w - round(w)) < 1e-3 for w in winds) \
                and sum(round(w) for w in winds) == wind:
            break
    else:
        raise BoundaryRoot(f"no clean split of {rect}")
    for s, (w, p, _) in zip(subs, results):
        _search(E, s, int(round(w)), p, depth + 1, out, max_depth)


def complex_roots_with_multiplicity(E, rect, max_depth=40):
    """Like :func:`complex_roots_in_rectangle` but returns ``(root, multiplicity)``."""
    E = complex(E)
    wind, pieces, ok = _contour(E, rect)
    if not ok or abs(wind - round(wind)) > 1e-3:
        raise BoundaryRoot(f"boundary of {rect} is too close to a root (winding {wind:.6f})")
    out = []
    _search(E, rect, int(round(wind)), pieces, 0, out, max_depth)
    merged = []
    for r, m in out:
        for k, (q, mq) in enumerate(merged):
            if abs(q - r) <= 1e-8 * max(1.0, abs(r)):
                break
        else:
            merged.append((r, m))
    merged.sort(key=lambda rm: (round(rm[0].real, 9), round(rm[0].imag, 9)))
    return merged


def complex_roots_in_rectangle(E, rect, max_depth=40):
    """Every lambda-root of D(., E) inside ``rect``.

    The enclosed root count comes from the winding of arg D along the
    boundary; rectangles holding several roots are quadrisected until each
    holds one, which is then polished by Newton's method in lambda.  Results
    are sorted by real then imaginary part.
    """
    return [r for r, _ in complex_roots_with_multiplicity(E, rect, max_depth)]


# ---------------------------------------------------------------------------
# double roots

def _system(mode, lam, E):
    D, Dl, DE, Dll, DlE, DEE = (complex(a) for a in char_arrays(lam, E))
    if mode == Mode.SCHRODINGER_BP:
        F = np.array([D, DE])
        J = np.array([[Dl, DE], [DlE, DEE]])
        s2 = max(1.0, abs(DlE) * abs(lam) + abs(DEE) * abs(E))
    else:
        F = np.array([D, Dl])
        J = np.array([[Dl, DE], [Dll, DlE]])
        s2 = max(1.0, abs(Dll) * abs(lam) + abs(DlE) * abs(E))
    s1 = max(1.0, abs(DE) * abs(E), abs(Dl) * abs(lam))
    return F, J, s1, s2


def double_root(spec, maxit=100, tol=1e-11):
    """Newton's method on (D, D_E) or (D, D_lambda) with the exact Jacobian.

    Returns ``(lam, E)``.  Raises :class:`NonConvergence` after ``maxit``
    iterations and :class:`DegenerateJacobian` when the Jacobian is singular.
    """
    mode = Mode(spec.mode)
    x = np.array([complex(spec.seed_lambda), complex(spec.seed_E)])
    for it in range(maxit):
        F, J, s1, s2 = _system(mode, x[0], x[1])
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        jscale = max(abs(J).max() ** 2, 1e-300)
        if abs(det) < 1e-14 * jscale:
            raise DegenerateJacobian(f"singular Jacobian at lambda={x[0]}, E={x[1]}")
        step = np.linalg.solve(J, F)
        x = x - step
        small = np.abs(step).max() <= 1e-14 * max(1.0, np.abs(x).max())
        if small:
            F, J, s1, s2 = _system(mode, x[0], x[1])
            if abs(F[0]) <= tol * s1 and abs(F[1]) <= tol * s2:
                return complex(x[0]), complex(x[1])
        if not np.all(np.isfinite(x)):
            break
    F, J, s1, s2 = _system(mode, x[0], x[1])
    if np.all(np.isfinite(x)) and abs(F[0]) <= tol * s1 and abs(F[1]) <= tol * s2:
        return complex(x[0]), complex(x[1])
    raise NonConvergence(f"double root did not converge from {spec}")


def nondegeneracy(mode, lam, E):
    """The quantities that must be non-zero at a generic double root: the other
    first partial and the second partial along the colliding variable."""
    cv = char_at(lam, E)
    if Mode(mode) == Mode.SCHRODINGER_BP:
        return abs(cv.D_lambda), abs(cv.D_EE)
    return abs(cv.D_E), abs(cv.D_ll)
