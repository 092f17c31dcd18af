"""
Levels, their extrema, and where they collide
=============================================

For real coupling the levels E_n(lambda) of

    -psi'' - lambda sgn(x) psi = E psi,   psi(-1) = psi(1) = 0

are real, even in lambda, and wiggle: sheet n has n maxima sitting on an
integer lattice and n - 1 minima in between.  Continued to complex lambda,
neighbouring sheets meet at square-root branch points.
"""
import numpy as np

from richardson_spectrum.schrodinger import (Extremum, branch_catalog, critical_catalog, levels,
                                             monodromy_swaps)

PI2_4 = np.pi ** 2 / 4

# at lambda = 0 the levels are those of the free box
print("E_n(0) / (pi^2/4):", np.round(levels(0.0, 5) / PI2_4, 12))

# a few points on the first four eigencurves
for lam in (0.0, 5.0, np.pi ** 2, 20.0):
    print(f"lambda = {lam:8.4f}  E_1..E_4 =", np.round(levels(lam, 4), 6))

# critical points: maxima come from the lattice formula, minima are numeric
for c in critical_catalog(4):
    tag = "lattice" if c.exact else "numeric"
    if c.lam >= 0:
        print(f"sheet {c.sheet}  {c.kind.value:3s}  lambda = {c.lam:10.6f}  E = {c.E:10.6f}  ({tag})")

# branch points in the first quadrant of the lambda-plane
cat = branch_catalog(5, 70.0)
print("\nbranch points with Re lambda >= 0, Im lambda > 0")
for b in cat:
    if b.lam.real >= -1e-9 and b.lam.imag > 0:
        print(f"  sheets {b.sheets}  lambda = {b.lam:.6f}  E = {b.E:.6f}")

# going once around a branch point exchanges the two colliding levels
b = next(b for b in cat if b.sheets == (1, 2) and b.lam.imag > 0)
swapped, start, end = monodromy_swaps(b.lam, b.E, 3)
print("\nloop around", np.round(b.lam, 6), "swaps the pair:", swapped)
print("  start", np.round(start, 6))
print("  end  ", np.round(end, 6))

# each sheet has 2n - 1 critical points
mins = [c for c in critical_catalog(6) if c.kind == Extremum.MIN]
print("\nminima per sheet:", [sum(c.sheet == n for c in mins) for n in range(1, 7)])
