"""Integer arithmetic for the lattice of eigencurve maxima.

The maxima of E_n(lam) sit at lam = (pi^2/4) * 2 (i+j-1) (j-i) and
E = (pi^2/4) * (2 i^2 + 2 j^2 - 2 i - 2 j + 1) for positive integers i, j,
on sheet n = i + j - 1.  Dividing out pi^2/4 leaves integers, and coincident
maxima become a divisor-counting problem.
"""
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import DomainError, SearchExhausted


@dataclass(frozen=True)
class LatticeSite:
    i: int
    j: int
    lambda_red: int
    E_red: int
    n: int


def site(i, j):
    if i < 1 or j < 1:
        raise DomainError(f"lattice indices must be positive, got ({i}, {j})")
    return LatticeSite(i, j, 2 * (i + j - 1) * (j - i), 2 * i * i + 2 * j * j - 2 * i - 2 * j + 1, i + j - 1)


def reduced_energy_matrix(size):
    """Symmetric matrix of reduced energies for 1 <= i, j <= size."""
    k = np.arange(1, size + 1)
    return 2 * k[:, None] ** 2 + 2 * k[None, :] ** 2 - 2 * k[:, None] - 2 * k[None, :] + 1


def odd_divisor_classes(N):
    """(n1, n3): numbers of divisors of N congruent to 1 and 3 mod 4."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    n1 = n3 = 0
    for d in range(1, isqrt(N) + 1):
        if N % d:
            continue
        for q in {d, N // d}:
            if q % 4 == 1:
                n1 += 1
            elif q % 4 == 3:
                n3 += 1
    return n1, n3


def _check_odd(E_red):
    if E_red < 1 or E_red % 2 == 0:
        raise DomainError(f"reduced energy must be an odd positive integer, got {E_red}")


def defective_multiplicity(E_red):
    """Number of lattice sites (i, j), transposes distinct, with reduced
    energy ``E_red``, from the divisor formula n1 - n3."""
    _check_odd(E_red)
    n1, n3 = odd_divisor_classes(E_red)
    return n1 - n3


def sites_with_energy(E_red):
    """Brute-force list of sites with the given reduced energy.

    (2i-1)^2 + (2j-1)^2 = 2 E_red, so i is bounded by sqrt(2 E_red).
    """
    _check_odd(E_red)
    out = []
    top = (isqrt(2 * E_red) + 1) // 2 + 1
    for i in range(1, top + 1):
        rest = 2 * E_red - (2 * i - 1) ** 2
        if rest <= 0:
            break
        r = isqrt(rest)
        if r * r == rest and r % 2 == 1:
            out.append((i, (r + 1) // 2))
    return out


def multiplicity_by_enumeration(E_max):
    """Site counts for every reduced energy up to ``E_max`` by direct
    enumeration of the lattice; returns an integer array indexed by energy."""
    counts = np.zeros(E_max + 1, dtype=np.int64)
    top = isqrt(E_max) + 2
    E = reduced_energy_matrix(top)
    E = E[E <= E_max]
    np.add.at(counts, E, 1)
    return counts


def smallest_with_multiplicity(N_d, ceiling=10 ** 6):
    """Smallest odd reduced energy whose defective multiplicity is ``N_d``."""
    if N_d < 1:
        raise DomainError("multiplicity must be at least 1")
    for E_red in range(1, ceiling + 1, 2):
        if defective_multiplicity(E_red) == N_d:
            return E_red
    raise SearchExhausted(f"no reduced energy below {ceiling} has multiplicity {N_d}")


def classical_representation_count(N):
    """Integer pairs (a, b), signs and zeros included, with a^2 + b^2 = N."""
    n1, n3 = odd_divisor_classes(N)
    return 4 * (n1 - n3)


def multiplicity_table(max_multiplicity=10):
    """Rows ``(E_red, N_d)``: the smallest reduced energy for N_d = 1, 2, ..."""
    return [(smallest_with_multiplicity(k), k) for k in range(1, max_multiplicity + 1)]
