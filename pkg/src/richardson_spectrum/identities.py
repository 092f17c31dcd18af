"""Numerical checks of the analytic identities linking the two spectra.

Each check returns an :class:`IdentityReport` (residual against tolerance) so
that results can be collected and printed by the command-line verifier.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .charfun import (_kernel_arrays, _weights, char_at, inner_products, kernel,
                      node_count)
from .errors import FredholmViolated, NearDegenerate
from .rootfind import Mode


@dataclass
class IdentityReport:
    name: str
    location: tuple
    residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def line(self):
        lam, E = self.location
        state = "PASS" if self.passed else "FAIL"
        return (f"{state} {self.name} at lambda={complex(lam):.9g}, E={complex(E):.9g}: "
                f"residual {self.residual:.3e} <= {self.tolerance:.1e}")


# ---------------------------------------------------------------------------
# derivative formulas

def _newton_E(lam, E, maxit=40):
    for _ in range(maxit):
        cv = char_at(lam, E)
        step = cv.D / cv.D_E
        E = E - step
        if abs(step) <= 1e-15 * max(1.0, abs(E)):
            break
    return E


def _newton_lam(lam, E, maxit=40):
    for _ in range(maxit):
        cv = char_at(lam, E)
        step = cv.D / cv.D_lambda
        lam = lam - step
        if abs(step) <= 1e-15 * max(1.0, abs(lam)):
            break
    return lam


def _central(f, x, h):
    # Richardson-extrapolated central difference, error O(h^4)
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def slope_by_products(lam, E):
    """dE/dlambda = <psi|v|psi>_R / <psi|psi>_R with weight v = -sgn(x)."""
    ip = inner_products(lam, E)
    if abs(ip["RR"]) < 1e-10 * ip["HH"]:
        raise NearDegenerate(f"<psi|psi>_R vanishes at ({lam}, {E})")
    return -ip["RvR"] / ip["RR"]


def derivative_check(lam, E, tol=1e-6):
    """Compare dE/dlambda from the inner products, from -D_lambda/D_E, and
    from a finite difference of the continued level."""
    lam, E = complex(lam), complex(E)
    formula = slope_by_products(lam, E)
    cv = char_at(lam, E)
    implicit = -cv.D_lambda / cv.D_E
    h = 1e-3 * max(1.0, abs(lam))
    fd = _central(lambda l: _newton_E(l, E + implicit * (l - lam)), lam, h)
    scale = max(1.0, abs(formula))
    res = max(abs(formula - implicit), abs(formula - fd), abs(implicit - fd)) / scale
    return IdentityReport("derivative", (lam, E), float(res), tol,
                          {"formula": formula, "implicit": implicit, "finite_difference": fd})


def reciprocity_check(lam, E, tol=1e-8):
    """E'(lambda) from the inner products times lambda'(E) from the coupling
    side (-D_E / D_lambda) should be 1.  A finite difference of the continued
    coupling is reported alongside."""
    lam, E = complex(lam), complex(E)
    dE = slope_by_products(lam, E)
    cv = char_at(lam, E)
    dlam = -cv.D_E / cv.D_lambda
    h = 1e-3 * max(1.0, abs(E))
    fd = _central(lambda e: _newton_lam(lam + dlam * (e - E), e), E, h)
    res = abs(dE * dlam - 1)
    return IdentityReport("reciprocity", (lam, E), float(res), tol,
                          {"dE_dlambda": dE, "dlambda_dE": dlam, "finite_difference": fd})


def imaginary_part_check(lam, E, tol=1e-8):
    """Im E = Im lambda <psi|v|psi>_H / <psi|psi>_H with v = -sgn(x)."""
    lam, E = complex(lam), complex(E)
    ip = inner_products(lam, E)
    pred = -lam.imag * ip["HvH"] / ip["HH"]
    res = abs(E.imag - pred) / max(1.0, abs(E))
    return IdentityReport("imaginary-part", (lam, E), float(res), tol, {"predicted": pred})


def level_at(lam, n):
    """E_n at complex lambda, continued from E_n(Re lambda) along a vertical path."""
    from .schrodinger import levels
    lam = complex(lam)
    x = lam.real
    E = complex(levels(x, n)[n - 1])
    steps = max(8, int(np.ceil(abs(lam.imag) / 0.05)))
    prev = complex(x)
    for k in range(1, steps + 1):
        cur = complex(x, lam.imag * k / steps)
        cv = char_at(prev, E)
        E = _newton_E(cur, E - cv.D_lambda / cv.D_E * (cur - prev))
        prev = cur
    return E


# ---------------------------------------------------------------------------
# degenerate points

def _defect(mode, lam, E):
    ip = inner_products(lam, E, check=False)
    key = "RR" if Mode(mode) == Mode.SCHRODINGER_BP else "RvR"
    return abs(ip[key]) / ip["HH"], ip


def defect_check(point, tol=1e-8):
    """The product that must vanish at a degenerate point: <psi|psi>_R at a
    branch point, <phi|v|phi>_R at a critical point (normalised by <psi|psi>_H)."""
    res, _ = _defect(point.mode, point.lam, point.E)
    name = "defect <psi|psi>_R" if Mode(point.mode) == Mode.SCHRODINGER_BP else "defect <phi|v|phi>_R"
    return IdentityReport(name, (point.lam, point.E), float(res), tol)


def _halves(lam, E, a, b, cL, cR, beta_L, beta_R, x):
    """psi-tilde at x from the closed-form half-interval pieces."""
    x = np.asarray(x, dtype=float)
    u, v = complex(E + lam), complex(E - lam)
    t, s = 1.0 + x, 1.0 - x
    KL = _kernel_arrays(v * t * t)
    KR = _kernel_arrays(u * s * s)
    # g(t, z) = t S(z t^2) solves -g'' = z g; its z-derivative t^3 S'(z t^2)
    # solves -y'' - z y = g
    left = cL * a * t ** 3 * KL[3] + beta_L * t * KL[1]
    right = cR * b * s ** 3 * KR[3] + beta_R * s * KR[1]
    return np.where(x <= 0, left, right)


def generalized_eigenfunction(point, xs=None, h=1e-4, tol=1e-5, defect_tol=1e-8):
    """Solve D psi~ = f with Dirichlet ends at a degenerate point.

    Operator: -d^2/dx^2 - lambda sgn(x) - E.  f = psi at a branch point and
    f = sgn(x) psi (that is -v psi) at a critical point.  Both ends vanish by
    construction; the free multiple of psi is fixed by making psi~ orthogonal
    to psi in the product that does not vanish there.  Returns
    ``(samples, report)`` where the report's residual is the largest
    second-difference residual relative to max |psi|.
    """
    mode = Mode(point.mode)
    lam, E = complex(point.lam), complex(point.E)
    defect, _ = _defect(mode, lam, E)
    if defect > defect_tol:
        raise FredholmViolated(f"solvability product {defect:.3e} does not vanish at ({lam}, {E})")
    a, b, ku, kv = _weights(lam, E)
    cR = 1.0
    cL = 1.0 if mode == Mode.SCHRODINGER_BP else -1.0
    # match value and slope at x = 0 for the homogeneous coefficients
    M = np.array([[kv.S, -ku.S], [kv.C, ku.C]])
    rhs = np.array([cR * b * ku.dS - cL * a * kv.dS,
                    -cR * b * ku.dC - cL * a * kv.dC])
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    mismatch = abs(M @ sol - rhs).max() / max(1.0, abs(rhs).max())
    if mismatch > 1e-6:
        raise FredholmViolated(f"matching equations inconsistent ({mismatch:.3e})")
    beta_L, beta_R = sol
    # admixture of psi = (a, b) in the homogeneous part
    nodes, weights = leggauss(64)
    xl, xr = (nodes - 1) / 2, (nodes + 1) / 2
    xq = np.concatenate([xl, xr])
    wq = np.concatenate([weights, weights]) / 2
    sg = np.sign(xq)
    psi_q = _halves(lam, E, a, b, 0, 0, a, b, xq)
    base = _halves(lam, E, a, b, cL, cR, beta_L, beta_R, xq)
    wt = sg if mode == Mode.SCHRODINGER_BP else np.ones_like(sg)
    mu = -np.sum(wq * wt * psi_q * base) / np.sum(wq * wt * psi_q * psi_q)
    beta_L, beta_R = beta_L + mu * a, beta_R + mu * b

    def tilde(x):
        return _halves(lam, E, a, b, cL, cR, beta_L, beta_R, x)

    if xs is None:
        xs = np.linspace(-0.995, 0.995, 399)
    xs = np.asarray(xs, dtype=float)
    ys = tilde(xs)
    interior = xs[(np.abs(xs) > 2 * h) & (np.abs(xs) < 1 - 2 * h)]
    y0, yp, ym = tilde(interior), tilde(interior + h), tilde(interior - h)
    psi_i = _halves(lam, E, a, b, 0, 0, a, b, interior)
    sgn = np.sign(interior)
    f = psi_i if mode == Mode.SCHRODINGER_BP else sgn * psi_i
    op = -(yp - 2 * y0 + ym) / h ** 2 - (lam * sgn + E) * y0
    xd = np.linspace(-1, 1, 2001)
    psi_max = np.abs(_halves(lam, E, a, b, 0, 0, a, b, xd)).max()
    res = float(np.abs(op - f).max() / psi_max)
    ends = abs(tilde(np.array([-1.0, 1.0]))).max() / psi_max
    name = "generalized eigenfunction"
    report = IdentityReport(name, (lam, E), res, tol, {"boundary": float(ends), "mu": complex(mu)})
    return list(zip(xs.tolist(), ys.tolist())), report


# ---------------------------------------------------------------------------
# real loci and the one-signed reference problem

def signature_check(locus, tol=1e-7):
    """Largest |<psi|v|psi>_H| / <psi|psi>_H over the stored points of a locus."""
    worst, where = 0.0, (np.nan, np.nan)
    for lam, E in locus.points:
        if abs(complex(lam).imag) == 0:
            continue
        ip = inner_products(lam, E, check=False)
        r = abs(ip["HvH"]) / ip["HH"]
        if r > worst:
            worst, where = r, (lam, E)
    return IdentityReport("signature", where, float(worst), tol, {"points": len(locus.points)})


def reference_char(lam, E):
    """D for the weight v = 1: 2 C(u) S(u) with u = E + lambda."""
    k = kernel(complex(E + lam))
    return 2 * k.C * k.S


def herglotz_reference(E_grid, n_max=5, tol=1e-10):
    """For the one-signed weight the couplings are n^2 pi^2/4 - E, decrease with
    slope -1 and never collide.  Residual is the worst deviation seen."""
    worst = 0.0
    collisions = 0
    for E in E_grid:
        E = float(E)
        exact = np.arange(1, n_max + 1) ** 2 * np.pi ** 2 / 4 - E
        lo, hi = exact[0] - 1.0, exact[-1] + 1.0
        grid = np.linspace(lo, hi, int((hi - lo) / 0.01) + 1)
        vals = np.array([reference_char(l, E).real for l in grid])
        roots = [brentq(lambda l: reference_char(l, E).real, grid[k], grid[k + 1], xtol=1e-15)
                 for k in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]]
        if len(roots) != n_max:
            worst = max(worst, 1.0)
            continue
        worst = max(worst, float(np.abs(np.array(roots) - exact).max()))
        for r in roots:
            h = 0.1
            slope = _central(lambda e: brentq(lambda l: reference_char(l, e).real,
                                              r - 0.5, r + 0.5, xtol=1e-15), E, h)
            worst = max(worst, abs(slope + 1))
            # a double root would make the lambda-derivative vanish with D
            d = (reference_char(r + 1e-6, E) - reference_char(r - 1e-6, E)) / 2e-6
            if abs(d) < 1e-3:
                collisions += 1
    res = worst if collisions == 0 else max(worst, 1.0)
    return IdentityReport("herglotz reference", (np.nan, np.nan), float(res), tol,
                          {"collisions": collisions})


def node_count_both_ways(lam, E, tol=1e-8):
    """Oscillation count of a real eigenpair, reached once as a level E_n(lam)
    and once as a real coupling at E.  Returns ``(schroedinger, richardson)``;
    both apply the same node count to the matched pair, so they must agree.
    """
    from .richardson import census_radius, real_couplings
    from .schrodinger import levels
    lam, E = float(lam), float(E)
    # E_n(lam) >= n^2 pi^2/4 - |lam| bounds the index of the level
    n = int(np.sqrt(max(E + abs(lam), 0.0) / (np.pi ** 2 / 4))) + 2
    Es = levels(lam, n)
    k = int(np.argmin(np.abs(Es - E)))
    if abs(Es[k] - E) > tol * max(1.0, abs(E)):
        raise ValueError(f"E={E} is not a level at lambda={lam}")
    lams = np.array([l for l, _ in real_couplings(E, abs(lam) + 10.0)])
    j = int(np.argmin(np.abs(lams - lam)))
    if abs(lams[j] - lam) > tol * max(1.0, abs(lam)):
        raise ValueError(f"lambda={lam} is not a real coupling at E={E}")
    return node_count(lam, Es[k]), node_count(lams[j], E)
