import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from richardson_spectrum.charfun import (char_at, char_value, derivative_jump, eigenfunction,
                                         inner_products, is_eigenpair, kernel, kernel_series,
                                         node_count)
from richardson_spectrum.errors import NotAnEigenpair

PI2 = np.pi ** 2
finite = st.floats(-60, 60, allow_nan=False)
cplx = st.builds(complex, finite, st.floats(-20, 20, allow_nan=False))


def test_kernel_at_zero():
    k = kernel(0)
    assert (k.C, k.S, k.dC, k.dS) == (1, 1, -0.5, -1 / 6)


@given(st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)))
def test_kernel_matches_series(z):
    a = kernel(z)
    C, S = kernel_series(z)
    assert abs(a.C - C) <= 1e-12 * max(1, abs(C))
    assert abs(a.S - S) <= 1e-12 * max(1, abs(S))
    # derivatives against a central difference of the series
    h = 1e-5
    dC = (kernel_series(z + h)[0] - kernel_series(z - h)[0]) / (2 * h)
    dS = (kernel_series(z + h)[1] - kernel_series(z - h)[1]) / (2 * h)
    assert abs(a.dC - dC) <= 1e-8 and abs(a.dS - dS) <= 1e-8


@given(st.floats(0.3, 400))
def test_kernel_is_cos_and_sinc(z):
    k = np.sqrt(z)
    assert np.isclose(kernel(z).C, np.cos(k), atol=1e-13)
    assert np.isclose(kernel(z).S, np.sin(k) / k, atol=1e-13)


@given(cplx, cplx)
def test_even_and_real_symmetry(lam, E):
    d = char_value(lam, E)
    assert abs(char_value(-lam, E) - d) <= 1e-10 * max(1, abs(d))
    assert abs(char_value(np.conj(lam), np.conj(E)) - np.conj(d)) <= 1e-10 * max(1, abs(d))


@settings(max_examples=40)
@given(cplx, cplx)
def test_partials_match_finite_differences(lam, E):
    cv = char_at(lam, E)
    h = 1e-5 * max(1, abs(lam), abs(E))
    fd_l = (char_at(lam + h, E).D - char_at(lam - h, E).D) / (2 * h)
    fd_E = (char_at(lam, E + h).D - char_at(lam, E - h).D) / (2 * h)
    fd_lE = (char_at(lam, E + h).D_lambda - char_at(lam, E - h).D_lambda) / (2 * h)
    fd_ll = (char_at(lam + h, E).D_lambda - char_at(lam - h, E).D_lambda) / (2 * h)
    fd_EE = (char_at(lam, E + h).D_E - char_at(lam, E - h).D_E) / (2 * h)
    scale = max(1, abs(cv.D), abs(cv.D_lambda), abs(cv.D_E), abs(cv.D_ll), abs(cv.D_EE))
    for a, b in [(cv.D_lambda, fd_l), (cv.D_E, fd_E), (cv.D_lE, fd_lE), (cv.D_ll, fd_ll), (cv.D_EE, fd_EE)]:
        assert abs(a - b) <= 1e-5 * scale


def test_unperturbed_roots():
    for n in range(1, 6):
        assert is_eigenpair(0, n * n * PI2 / 4)
    assert not is_eigenpair(0, 3.0)


def test_lattice_point_is_double_root():
    cv = char_at(PI2, 5 * PI2 / 4)
    assert abs(cv.D) < 1e-13 and abs(cv.D_lambda) < 1e-13


def test_eigenfunction_rejects_non_root():
    with pytest.raises(NotAnEigenpair):
        eigenfunction(1.0, 3.0, [0.0])


def test_eigenfunction_boundary_and_matching():
    from richardson_spectrum.schrodinger import levels
    E = levels(1.0, 1)[0]
    s = eigenfunction(1.0, E, [-1.0, -1e-12, 1e-12, 1.0])
    assert abs(s[0].psi) < 1e-14 and abs(s[-1].psi) < 1e-14
    assert abs(s[1].psi - s[2].psi) < 1e-9
    assert abs(s[1].psi_prime - s[2].psi_prime) < 1e-8
    assert abs(derivative_jump(1.0, E)) < 1e-8


@pytest.mark.parametrize("lam,n", [(0.0, 1), (3.0, 2), (-7.5, 3), (20.0, 1)])
def test_inner_products_against_quadrature(lam, n):
    from richardson_spectrum.schrodinger import levels
    E = levels(lam, n)[n - 1]
    ip = inner_products(lam, E)

    def psi(x):
        return eigenfunction(lam, E, [x], check=False)[0].psi

    def cquad(f):
        re = quad(lambda x: f(x).real, -1, 1, points=[0], epsabs=1e-13)[0]
        im = quad(lambda x: f(x).imag, -1, 1, points=[0], epsabs=1e-13)[0]
        return complex(re, im)

    RR = cquad(lambda x: psi(x) ** 2)
    RvR = cquad(lambda x: np.sign(x) * psi(x) ** 2)
    HH = cquad(lambda x: abs(psi(x)) ** 2 + 0j).real
    scale = HH
    assert abs(ip["RR"] - RR) <= 1e-9 * scale
    assert abs(ip["RvR"] - RvR) <= 1e-9 * scale
    assert np.isclose(ip["HH"], HH, rtol=1e-9)
    # real coupling and level: psi is real up to a constant phase
    assert np.isclose(abs(ip["RR"]), HH, rtol=1e-9)


def test_hermitian_products_complex_point():
    lam, E = 4.4753086021932j, 6.401903274611
    from richardson_spectrum.rootfind import DoubleRootSpec, Mode, double_root
    lam, E = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, lam, E))
    ip = inner_products(lam, E)

    def f(x, w):
        p = eigenfunction(lam, E, [x], check=False)[0].psi
        return w(x) * abs(p) ** 2

    HH = quad(lambda x: f(x, lambda x: 1.0), -1, 1, points=[0], epsabs=1e-13)[0]
    HvH = quad(lambda x: f(x, np.sign), -1, 1, points=[0], epsabs=1e-13)[0]
    assert np.isclose(ip["HH"], HH, rtol=1e-9)
    assert abs(ip["HvH"] - HvH) < 1e-9 * HH


@pytest.mark.parametrize("lam,E,count", [(0, 9 * PI2 / 4, 2), (0, PI2, 1), (0, PI2 / 4, 0)])
def test_node_count_examples(lam, E, count):
    assert node_count(lam, E) == count


@settings(max_examples=30, deadline=None)
@given(st.floats(-40, 40), st.integers(1, 5))
def test_node_count_is_level_index(lam, n):
    from richardson_spectrum.schrodinger import levels
    E = levels(lam, n)[n - 1]
    assert node_count(lam, E) == n - 1
