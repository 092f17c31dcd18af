import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from richardson_spectrum.errors import BoundaryRoot, DegenerateJacobian, GridTooCoarse
from richardson_spectrum.rootfind import (DoubleRootSpec, Mode, Rectangle, closed_form_nodes,
                                          complex_roots_in_rectangle,
                                          complex_roots_with_multiplicity, double_root,
                                          nondegeneracy, real_roots_in_E, winding_number)
from conftest import fd_levels, shoot, shooting_coupling

PI2 = np.pi ** 2


def test_real_roots_unperturbed():
    roots = real_roots_in_E(0.0, 0.0, 30.0)
    assert np.allclose(roots, [PI2 / 4, PI2, 9 * PI2 / 4], rtol=1e-13)


def test_real_roots_at_lattice_coupling():
    roots = real_roots_in_E(PI2, 10.0, 14.0)
    assert np.allclose(roots, [5 * PI2 / 4], rtol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(-50, 50))
def test_real_roots_match_finite_difference_levels(lam):
    roots = real_roots_in_E(lam, -60.0, 100.0, max_count=4)
    ref = fd_levels(lam, 4)
    assert np.allclose(roots[:4], ref, rtol=1e-4, atol=1e-3)


def test_real_roots_consecutive_nodes():
    roots = real_roots_in_E(12.0, -20.0, 200.0)
    nodes = closed_form_nodes(12.0, np.array(roots))
    assert list(nodes) == list(range(len(roots)))


def test_grid_too_coarse_is_raised(monkeypatch):
    import richardson_spectrum.rootfind as rf
    # at lambda = 0 the levels are (n pi / 2)^2; the cell [5, 30] holds two of
    # them, so no sign change is seen and the node counts jump from 0 to 3
    monkeypatch.setattr(rf, "_e_grid", lambda lam, a, b, per_pi=24: np.array([1.0, 3.0, 5.0, 30.0, 45.0]))
    with pytest.raises(GridTooCoarse):
        real_roots_in_E(0.0, 1.0, 45.0, refine_cap=0)


def test_couplings_at_zero_energy_match_shooting():
    roots = complex_roots_in_rectangle(0.0, Rectangle(-8.013, 8.021, -3.017, 3.009))
    ref = shooting_coupling(0.0, 4.0, 7.0)
    assert len(roots) == 2
    assert np.allclose(sorted(r.real for r in roots), [-ref, ref], atol=1e-9)
    assert abs(ref - 5.593321) < 1e-6


def test_imaginary_pair_at_five():
    roots = complex_roots_in_rectangle(5.0, Rectangle(-6.013, 6.021, -6.017, 6.009))
    assert len(roots) == 2
    assert all(abs(r.real) < 1e-10 for r in roots)
    assert np.allclose(sorted(r.imag for r in roots), [-4.166657, 4.166657], atol=1e-6)


def test_complex_quartet():
    roots = complex_roots_in_rectangle(12.4, Rectangle(-11.013, 11.021, -3.017, 3.009))
    nonreal = [r for r in roots if abs(r.imag) > 1e-8]
    assert len(nonreal) == 4
    for r in nonreal:
        assert abs(abs(r.real) - 9.871408) < 1e-6 and abs(abs(r.imag) - 1.054254) < 1e-6


def test_winding_counts_roots():
    rect = Rectangle(-401.3, 402.1, -400.7, 400.2)
    assert winding_number(20.0, rect) == len(complex_roots_in_rectangle(20.0, rect))


def test_rectangle_through_root_is_refused():
    # the edge Re lambda = 0 passes through the double root lambda = 0 at E = pi^2/4
    with pytest.raises(BoundaryRoot):
        winding_number(PI2 / 4, Rectangle(0.0, 1.0, -0.5, 0.5))


def test_double_root_reported_with_multiplicity():
    roots = complex_roots_with_multiplicity(PI2, Rectangle(-1.013, 1.021, -1.017, 1.009))
    assert len(roots) == 1
    lam, m = roots[0]
    assert m == 2 and abs(lam) < 1e-6


def test_empty_rectangle_rejected():
    with pytest.raises(ValueError):
        Rectangle(1.0, 0.0, 0.0, 1.0)


@pytest.mark.parametrize("seed,expect", [
    ((4.4j, 6.3), (4.475309j, 6.401903)),
    ((9.2 + 6.8j, 17.6 + 1j), (9.264139 + 6.834853j, 17.617719 + 0.960866j)),
])
def test_branch_point_newton(seed, expect):
    lam, E = double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, *seed))
    assert abs(lam - expect[0]) < 1e-6 and abs(E - expect[1]) < 1e-6
    assert min(nondegeneracy(Mode.SCHRODINGER_BP, lam, E)) > 1e-3


def test_critical_point_newton():
    lam, E = double_root(DoubleRootSpec(Mode.RICHARDSON_BP, 6.0, 22.0))
    assert abs(lam - 6.151545504809788) < 1e-12 and abs(E - 21.996039479435144) < 1e-12
    lam, E = double_root(DoubleRootSpec(Mode.RICHARDSON_BP, 9.7, 12.2))
    assert abs(lam - PI2) < 1e-12 and abs(E - 5 * PI2 / 4) < 1e-12


def test_degenerate_jacobian():
    # D is even in lambda, so at lambda = 0 the lambda-column (D_l, D_El) of
    # the (D, D_E) Jacobian vanishes identically
    with pytest.raises(DegenerateJacobian):
        double_root(DoubleRootSpec(Mode.SCHRODINGER_BP, 0.0, 5.0))


def test_shooting_agrees_with_characteristic_roots():
    lam = 3.3
    for E in real_roots_in_E(lam, -5.0, 40.0):
        assert abs(shoot(lam, E)) < 1e-8
