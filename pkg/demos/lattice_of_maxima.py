"""
The lattice of maxima
=====================

Every maximum of an eigencurve sits at lambda = (pi^2/4) 2(i+j-1)(j-i) and
E = (pi^2/4)(2i^2 + 2j^2 - 2i - 2j + 1).  Since (2i-1)^2 + (2j-1)^2 = 2 E_red,
the number of maxima sharing one energy is a sum-of-two-squares count, n1 - n3
over the divisors of E_red.
"""
from richardson_spectrum.lattice import (defective_multiplicity, multiplicity_by_enumeration,
                                         multiplicity_table, reduced_energy_matrix, sites_with_energy)

print(reduced_energy_matrix(6))

print("\nsmallest reduced energy for each multiplicity")
for E_red, N_d in multiplicity_table(10):
    print(f"  N_d = {N_d:2d}:  E_red = {E_red}")

print("\nsites at E_red = 8125:", sorted(sites_with_energy(8125)))

# the divisor formula against a direct count of lattice sites
counts = multiplicity_by_enumeration(20001)
bad = [E for E in range(1, 20002, 2) if counts[E] != defective_multiplicity(E)]
print("odd energies up to 20001 where the formula and the count differ:", len(bad))
