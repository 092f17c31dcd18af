"""
Couplings at fixed energy
=========================

Fix E and ask for which lambda the problem has a solution.  Below pi^2/4
every such coupling is real.  Above it a labelled coupling lambda_n^+(E)
alternates between real stretches, purely imaginary stretches and fully
complex stretches; the changes happen at the critical values of the
eigencurves E_n(lambda).
"""
import numpy as np

from richardson_spectrum.richardson import (classify, classify_segments, eigencouplings,
                                            zettl_bound)

PI2 = np.pi ** 2

for s in classify_segments("1+", 0.0, 60.0):
    extra = f" osc {s.osc}" if s.osc is not None else ""
    if s.critical_points:
        extra += "  turning at E = " + ", ".join(f"{e:.6f}" for e in s.critical_points)
    print(f"{s.type.value:2s} [{s.E_lo:9.6f}, {s.E_hi:9.6f}]{extra}")

# the mirror label behaves the same way with lambda -> -lambda
minus = classify_segments("1-", 0.0, 25.0)
print("\n1- types:", [s.type.value for s in minus])

# the number of non-real couplings never exceeds twice the number of
# negative couplings of the one-signed problem, n^2 pi^2/4 - E
print("\n   E   non-real  bound")
for E in (1.0, 5.0, 10.0, 12.0, 5 * PI2 / 4 + 0.05, 30.0):
    cs = eigencouplings(E, 150.0)
    print(f"{E:6.3f}  {len(cs.nonreal):5d}  {zettl_bound(E):5d}")

# the labelled couplings at one energy
cs = eigencouplings(5.0, 60.0, labels=True)
print("\nlabelled couplings at E = 5")
for c in cs.couplings:
    print(f"  {str(c.sheet):3s} {c.lam:.6f}  {classify(c.lam).value}")
