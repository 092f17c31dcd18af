"""Richardson side: couplings lam_n^(+/-)(E) at real energy E.

The couplings at fixed E are the lambda-roots of D(., E).  Below pi^2/4 they
are all real and come in +/- pairs, one pair for each oscillation count; that
region fixes the sheet labels.  Above it the labelled couplings are followed
in E, stepping around each square-root singularity (the critical values of
the Schroedinger eigencurves) on a small semicircle in the upper half E-plane.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .charfun import char_arrays, char_at, char_value, node_count
from .errors import DomainError, LostTrack, NonConvergence, DegenerateJacobian
from .rootfind import (DoubleRootSpec, Mode, Rectangle, complex_roots_with_multiplicity,
                       double_root)
from .schrodinger import critical_catalog

PI2_4 = np.pi ** 2 / 4
CLASS_TOL = 1e-7


class SpectralType(str, Enum):
    R = "R"
    iR = "iR"
    C = "C"


@dataclass(frozen=True, order=True)
class SheetLabel:
    n: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1 or self.sign not in (1, -1):
            raise DomainError(f"bad sheet label ({self.n}, {self.sign})")

    def __str__(self):
        return f"{self.n}{'+' if self.sign > 0 else '-'}"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if len(text) < 2 or text[-1] not in "+-" or not text[:-1].isdigit():
            raise DomainError(f"sheet label must look like '1+' or '3-', got {text!r}")
        return cls(int(text[:-1]), 1 if text[-1] == "+" else -1)


@dataclass(frozen=True)
class Coupling:
    lam: complex
    sheet: SheetLabel = None
    multiplicity: int = 1


@dataclass
class CouplingSet:
    E: float
    couplings: list
    zettl_bound: int

    @property
    def nonreal(self):
        return [c for c in self.couplings if classify(c.lam) != SpectralType.R]


@dataclass
class SpectralSegment:
    sheet: SheetLabel
    E_lo: float
    E_hi: float
    type: SpectralType
    osc: int = None
    # energies inside the segment where dlam/dE = 0 (images of Schroedinger branch points)
    critical_points: list = field(default_factory=list)
    # True when a boundary is a critical value from the Schroedinger catalog
    lo_cataloged: bool = True
    hi_cataloged: bool = True


def classify(lam, tol=CLASS_TOL):
    lam = complex(lam)
    t = tol * max(1.0, abs(lam))
    if abs(lam.imag) <= t:
        return SpectralType.R
    if abs(lam.real) <= t:
        return SpectralType.iR
    return SpectralType.C


def zettl_bound(E):
    """Twice the number of negative couplings n^2 pi^2/4 - E of the |w| problem."""
    E = float(E)
    if not np.isfinite(E):
        raise DomainError("E must be finite")
    m = 0
    while (m + 1) ** 2 * PI2_4 < E:
        m += 1
    return 2 * m


def census_radius(E, m_max, margin=5.0):
    """Radius holding every real coupling with at most m_max nodes.

    A level of the right half-interval problem bounds E_n(lam) <= n^2 pi^2 - |lam|,
    so a real coupling with m nodes lies within (m+1)^2 pi^2 - E of the origin.
    """
    return max((m_max + 1) ** 2 * np.pi ** 2 - E, 0.0) + margin


# ---------------------------------------------------------------------------
# real couplings

def _dl(lam, E):
    return char_arrays(lam, E)[1].real


def _D(lam, E):
    return char_value(lam, E).real


def real_couplings(E, radius, step=0.05, tol=1e-9):
    """Every real root of D(., E) with |lam| <= radius as ``(lam, multiplicity)``.

    D is even in lam, so roots are searched on [0, radius] and mirrored.
    Zeros of D_lambda split the axis into pieces on which D is monotone; each
    sign change on a piece is one simple root, and a zero of D_lambda where D
    also vanishes (to ``tol`` relative) is a double root, reported once.
    """
    E = float(E)
    if radius <= 0:
        raise DomainError("radius must be positive")
    grid = np.linspace(0.0, radius, int(np.ceil(radius / step)) + 1)
    D, Dl, DE = (a.real for a in char_arrays(grid, E)[:3])
    # stationary points of D: lam = 0 by symmetry, then sign changes of D_lambda
    stat = [0.0]
    for k in np.nonzero(np.sign(Dl[1:-1]) != np.sign(Dl[2:]))[0] + 1:
        a, b = grid[k], grid[k + 1]
        if Dl[k] == 0:
            stat.append(a)
        elif Dl[k + 1] != 0:
            stat.append(brentq(_dl, a, b, args=(E,), xtol=1e-15, rtol=1e-15))
    stat = np.array(stat)
    scale = np.maximum(1.0, np.abs(DE) * abs(E))
    pts = np.union1d(grid, stat)
    vals = _D(pts, E)
    is_stat = np.isin(pts, stat)
    sc = np.interp(pts, grid, scale)
    double = is_stat & (np.abs(vals) <= tol * sc)
    roots = []
    for p in pts[double]:
        roots.append((float(p), 2))
    for k in range(len(pts) - 1):
        if double[k] or double[k + 1]:
            continue
        a, b = vals[k], vals[k + 1]
        if a == 0 and not is_stat[k]:
            roots.append((float(pts[k]), 1))
        elif a * b < 0:
            roots.append((brentq(_D, pts[k], pts[k + 1], args=(E,), xtol=1e-15, rtol=1e-15), 1))
    out = []
    for lam, m in roots:
        if lam == 0.0:
            out.append((0.0, m))
        else:
            out.extend([(lam, m), (-lam, m)])
    return sorted(out)


def oscillation_census(E, m_max, radius=None):
    """``[N_0, ..., N_m_max]``: how many real couplings at E have m nodes.

    A double root (two real couplings merged at a square-root singularity)
    has a single eigenfunction and counts once.
    """
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    need = census_radius(E, m_max, margin=0.0)
    if radius is None:
        radius = census_radius(E, m_max)
    elif radius < need:
        raise DomainError(f"radius {radius} cannot hold every coupling with up to "
                          f"{m_max} nodes at E={E}; need at least {need:.6g}")
    counts = [0] * (m_max + 1)
    for lam, _ in real_couplings(E, radius):
        m = node_count(lam, E)
        if m <= m_max:
            counts[m] += 1
    return counts


# ---------------------------------------------------------------------------
# continuation in E

@lru_cache(maxsize=None)
def _critical_values(E_max):
    """Sorted distinct Schroedinger critical values up to E_max (rounded up)."""
    vals = []
    n = 1
    while True:
        if n > 10:
            raise DomainError(f"energies up to {E_max} need critical points beyond sheet 10")
        cat = critical_catalog(n)
        sheet_vals = [c.E for c in cat if c.sheet == n]
        vals.extend(sheet_vals)
        # E_n >= E_{n-1} pointwise, so once a whole sheet lies above E_max so do the rest
        if min(sheet_vals) > E_max:
            break
        n += 1
    vals = sorted(v for v in vals if v <= E_max)
    merged = []
    for v in vals:
        if not merged or v - merged[-1] > 1e-9 * max(1.0, v):
            merged.append(v)
    return tuple(merged)


def _newton(lam, E, maxit=12):
    for _ in range(maxit):
        D, Dl = (complex(a) for a in char_arrays(lam, E)[:2])
        if Dl == 0:
            return None
        dl = D / Dl
        lam = lam - dl
        if abs(dl) <= 1e-13 * max(1.0, abs(lam)):
            return lam
    return None


def _separation(lam, E):
    """Distance to the nearest other root from the quadratic model of D."""
    cv = char_at(lam, E)
    if cv.D_ll == 0:
        return np.inf
    return 2 * abs(cv.D_lambda / cv.D_ll)


def _slope(lam, E):
    cv = char_at(lam, E)
    return -cv.D_E / cv.D_lambda


class _Stuck(Exception):
    def __init__(self, lam, E):
        self.lam, self.E = lam, E


def _follow(lam, E_of, s_max, ds0, ds_max, record=None):
    """Continue a root of D along the path E_of(s), 0 <= s <= s_max."""
    s, ds = 0.0, ds0
    E = E_of(0.0)
    while s < s_max:
        ds = min(ds, s_max - s)
        E1 = E_of(s + ds)
        sep = _separation(lam, E)
        pred = lam + _slope(lam, E) * (E1 - E)
        new = _newton(pred, E1)
        ok = (new is not None and abs(new - pred) <= 0.1 * sep
              and abs(new - lam) <= 0.5 * sep)
        if not ok:
            ds /= 2
            if ds < 1e-10 * max(1.0, s_max):
                raise _Stuck(lam, E)
            continue
        lam, E, s = new, E1, s + ds
        if record is not None:
            record.append((lam, E))
        ds = min(1.5 * ds, ds_max)
    return lam


def _bypass_radii(sing):
    radii = []
    for k, e in enumerate(sing):
        gap = min([abs(e - sing[j]) for j in (k - 1, k + 1) if 0 <= j < len(sing)] + [1.0])
        radii.append(min(0.05, 0.25 * gap))
    return radii


def continue_coupling(lam0, E0, E1, extra_singular=(), record=None, step=0.05):
    """Carry a root lam0 of D(., E0) to E1 > E0 along real E.

    Every known singular energy in (E0, E1] is passed on an upper half-plane
    semicircle.  ``record`` collects ``(lam, E)`` along the path.
    """
    if E1 < E0:
        raise DomainError("continuation runs forward in E")
    sing = sorted(set(_critical_values(float(np.ceil(E1 + 1.0)))) | set(extra_singular))
    sing = [e for e in sing if E0 < e < E1 + 0.05]
    radii = _bypass_radii(sing)
    lam, E = complex(lam0), float(E0)
    for e, r in zip(sing, radii):
        lo = e - r
        if lo > E:
            lam = _follow(lam, lambda s, a=E: complex(a + s), lo - E, step, step, record)
        # semicircle e + r exp(i theta), theta from pi to 0
        lam = _follow(lam, lambda s, c=e, rr=r: c + rr * np.exp(1j * (np.pi - s)),
                      np.pi, np.pi / 32, np.pi / 16, record=None)
        E = e + r
        if E > E1:
            raise DomainError(f"endpoint {E1} lies within a bypass of the singular energy {e}")
        if record is not None:
            record.append((lam, complex(E)))
    if E1 > E:
        lam = _follow(lam, lambda s, a=E: complex(a + s), E1 - E, step, step, record)
    return lam


def start_coupling(sheet):
    """lam_n^(+/-) at E = 0, where every coupling is real."""
    if isinstance(sheet, str):
        sheet = SheetLabel.parse(sheet)
    m = sheet.n - 1
    for lam, _ in real_couplings(0.0, census_radius(0.0, m)):
        if lam > 0 and node_count(lam, 0.0) == m:
            return sheet.sign * lam
    raise NonConvergence(f"no positive real coupling with {m} nodes at E = 0")


def _locate_singularity(lam, E):
    try:
        lam_c, E_c = double_root(DoubleRootSpec(Mode.RICHARDSON_BP, lam, E))
    except (NonConvergence, DegenerateJacobian):
        return None
    if abs(E_c.imag) > 1e-8 * max(1.0, abs(E_c)):
        return None
    return E_c.real


def track_sheet(sheet, E_hi, E_start=0.0):
    """Samples ``(lam, E)`` of a labelled coupling for real E in [E_start, E_hi].

    Starts from the E = 0 value (continued down first if E_start < 0).  A
    singular energy missing from the catalog is located by the double-root
    iteration when tracking stalls, and tracking restarts with it bypassed.
    Returns ``(samples, extra)`` where ``extra`` lists uncataloged singular
    energies that were needed.
    """
    if isinstance(sheet, str):
        sheet = SheetLabel.parse(sheet)
    lam0 = complex(start_coupling(sheet))
    E0 = 0.0
    if E_start < 0:
        # nothing is singular below pi^2/4; walk down then start from there
        lam0 = _follow(lam0, lambda s: complex(-s), -E_start, 0.05, 0.05)
        E0 = float(E_start)
    extra = []
    for _ in range(8):
        rec = [(lam0, complex(E0))]
        try:
            continue_coupling(lam0, E0, E_hi, extra, rec)
            return rec, extra
        except _Stuck as st:
            E_c = _locate_singularity(st.lam, st.E)
            if E_c is None or any(abs(E_c - e) < 1e-9 for e in extra):
                raise LostTrack(f"{sheet} lost near E = {st.E}") from None
            extra.append(E_c)
    raise LostTrack(f"{sheet}: too many uncataloged singularities below E = {E_hi}")


def _interior_critical(samples, typ):
    """Energies inside a segment where dlam/dE changes sign (R or iR only)."""
    if typ == SpectralType.C or len(samples) < 3:
        return []
    out = []
    rot = 1.0 if typ == SpectralType.R else -1j
    sl = [(_slope(l, E) * rot).real for l, E in samples]
    for k in range(len(sl) - 1):
        if sl[k] * sl[k + 1] < 0:
            lam, E = samples[k]
            try:
                lam_c, E_c = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, lam, E))
            except (NonConvergence, DegenerateJacobian):
                continue
            if abs(E_c.imag) < 1e-8 and samples[0][1].real <= E_c.real <= samples[-1][1].real:
                out.append(E_c.real)
    return out


def classify_segments(sheet, E_lo, E_hi):
    """Spectral type of a labelled coupling along [E_lo, E_hi].

    Segment boundaries are the singular energies where the type changes;
    real segments carry the oscillation count of their eigenfunctions.
    """
    if isinstance(sheet, str):
        sheet = SheetLabel.parse(sheet)
    if not E_lo < E_hi:
        raise DomainError("need E_lo < E_hi")
    start = min(0.0, E_lo)
    samples, extra = track_sheet(sheet, E_hi, start)
    sing = sorted(set(_critical_values(float(np.ceil(E_hi + 1.0)))) | set(extra))
    sing = [e for e in sing if start < e < E_hi]
    edges = [start] + sing + [E_hi]
    segs = []
    for a, b in zip(edges[:-1], edges[1:]):
        inner = [(l, E.real) for l, E in samples
                 if abs(E.imag) == 0 and a < E.real < b]
        if not inner:
            continue
        kinds = {classify(l) for l, _ in inner}
        if len(kinds) != 1:
            raise LostTrack(f"{sheet}: mixed spectral types on ({a}, {b})")
        typ = kinds.pop()
        osc = None
        if typ == SpectralType.R:
            lam, E = inner[len(inner) // 2]
            osc = node_count(lam.real, E)
        crit = _interior_critical(inner, typ)
        if segs and segs[-1].type == typ and segs[-1].osc == osc:
            segs[-1].E_hi = b
            segs[-1].critical_points.extend(crit)
            segs[-1].hi_cataloged = b not in extra
        else:
            segs.append(SpectralSegment(sheet, a, b, typ, osc, crit,
                                        lo_cataloged=a not in extra, hi_cataloged=b not in extra))
    for s in segs:
        s.E_lo = max(s.E_lo, E_lo)
        s.E_hi = min(s.E_hi, E_hi)
    return [s for s in segs if s.E_lo < s.E_hi]


# ---------------------------------------------------------------------------
# all couplings at one energy

def _label(roots, E, radius):
    """Match roots to the labelled couplings continued from E = 0.

    Sheets are tried in order until their E = 0 coupling is too far out to
    reach the disc; a root that no continued sheet lands on keeps no label.
    """
    labels = {}
    n = 1
    while True:
        lam0 = complex(start_coupling(SheetLabel(n)))
        if abs(lam0) > radius + abs(E) + 50:
            return labels
        try:
            lam_E = track_sheet(SheetLabel(n), E, min(E, 0.0))[0][-1][0]
        except (LostTrack, DomainError):
            lam_E = None
        if lam_E is not None:
            for sign in (1, -1):
                for k, lam in enumerate(roots):
                    if abs(lam - sign * lam_E) <= 1e-6 * max(1.0, abs(lam)):
                        labels[k] = SheetLabel(n, sign)
        n += 1


def eigencouplings(E, radius, labels=False):
    """Every coupling with |lam| <= radius at real energy E.

    Roots come from the argument-principle search on a square slightly larger
    than the disc (so its edges avoid the axes) and are then cut to the disc.
    With ``labels=True`` each root is matched to a sheet continued from E = 0.
    """
    E = float(E)
    if radius <= 0:
        raise DomainError("radius must be positive")
    h = radius * 1.00123
    rect = Rectangle(-h, h * 1.00071, -h * 0.99913, h * 1.00037)
    found = [(r, m) for r, m in complex_roots_with_multiplicity(E, rect) if abs(r) <= radius]
    # snap axis roots exactly onto the axes so the symmetry checks are clean
    snapped = []
    for r, m in found:
        t = CLASS_TOL * max(1.0, abs(r))
        re = 0.0 if abs(r.real) <= t else r.real
        im = 0.0 if abs(r.imag) <= t else r.imag
        snapped.append((complex(re, im), m))
    lab = _label([r for r, _ in snapped], E, radius) if labels else {}
    cps = [Coupling(r, lab.get(k), m) for k, (r, m) in enumerate(snapped)]
    return CouplingSet(E, cps, zettl_bound(E))


def richardson_curves(E_grid, radius):
    """Real couplings with oscillation counts on an energy grid: rows
    ``(E, lam, osc)``."""
    rows = []
    for E in E_grid:
        for lam, _ in real_couplings(E, radius):
            rows.append((float(E), lam, node_count(lam, E, sample=False)))
    return rows
