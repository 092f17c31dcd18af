"""
Counting real couplings by their nodes
======================================

At fixed E, N_m is the number of real couplings whose eigenfunction has m
interior zeros.  Far from any critical value every N_m is 2, one coupling
of each sign.  Pairs disappear into the complex plane or get extra partners
as E crosses the critical values of the eigencurves.
"""
import numpy as np

from richardson_spectrum.richardson import census_radius, oscillation_census, real_couplings

PI2 = np.pi ** 2

energies = {"1": 1.0, "5": 5.0, "pi^2": PI2, "11": 11.0, "5 pi^2/4": 5 * PI2 / 4, "30": 30.0}
print(f"{'E':>9s}  N_0..N_8")
for name, E in energies.items():
    print(f"{name:>9s}  {oscillation_census(E, 8)}")

# N_1 as E sweeps past pi^2 and 5 pi^2/4
Es = np.linspace(9.0, 13.0, 9)
print("\nN_1 along E:", [oscillation_census(E, 1)[1] for E in Es])

# at E = 5 pi^2/4 two couplings merge at lambda = +-pi^2: one eigenfunction each
print("\ndouble roots at 5 pi^2/4:", [(round(l, 9), m) for l, m in real_couplings(5 * PI2 / 4, 30.0) if m == 2])

# real couplings with m nodes lie within (m+1)^2 pi^2 - E of the origin
print("radius needed for m <= 8 at E = 0:", round(census_radius(0.0, 8), 3))
