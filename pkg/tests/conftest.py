import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq


def shoot(lam, E):
    """psi(1) for psi(-1) = 0, psi'(-1) = 1, integrated numerically."""
    def rhs(x, y):
        return [y[1], -(E + lam * np.sign(x)) * y[0]]
    left = solve_ivp(rhs, (-1, 0), [0.0, 1.0], rtol=1e-12, atol=1e-14)
    right = solve_ivp(rhs, (0, 1), left.y[:, -1], rtol=1e-12, atol=1e-14)
    return right.y[0, -1]


def shooting_coupling(E, lo, hi):
    return brentq(lambda l: shoot(l, E), lo, hi, xtol=1e-13)


def fd_levels(lam, count, N=4000):
    """Lowest levels of the finite-difference Hamiltonian on a uniform grid."""
    h = 2.0 / N
    x = -1 + h * np.arange(1, N)
    diag = 2 / h ** 2 - lam * np.sign(x)
    off = -np.ones(N - 2) / h ** 2
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]


@pytest.fixture(scope="session")
def branch_points():
    from richardson_spectrum.schrodinger import branch_catalog
    return branch_catalog(5, 70.0)


@pytest.fixture(scope="session")
def criticals():
    from richardson_spectrum.schrodinger import critical_catalog
    return critical_catalog(6)
