import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from richardson_spectrum.charfun import eigenfunction, inner_products
from richardson_spectrum.errors import FredholmViolated, NearDegenerate
from richardson_spectrum.identities import (defect_check, derivative_check, generalized_eigenfunction,
                                            herglotz_reference, imaginary_part_check, level_at,
                                            node_count_both_ways, reciprocity_check, signature_check,
                                            slope_by_products)
from richardson_spectrum.rootfind import DegeneratePoint, Mode
from richardson_spectrum.schrodinger import Extremum, RealLocus, LocusKind, levels, trace_real_locus

from conftest import fd_levels

PI2 = np.pi ** 2
FIRST_BRANCH_POINT = (4.475309j, 6.401903)
FIRST_MINIMUM = (6.151546, 21.996039)


def _polish(criticals, branch_points, kind):
    if kind == "bp":
        return next(b for b in branch_points if abs(b.lam - FIRST_BRANCH_POINT[0]) < 1e-4)
    return next(c for c in criticals if abs(c.lam - FIRST_MINIMUM[0]) < 1e-4 and c.kind == Extremum.MIN)


def test_slope_vanishes_at_the_origin():
    assert abs(slope_by_products(0.0, PI2 / 4)) <= 1e-14


def test_slope_vanishes_at_a_lattice_maximum():
    assert abs(slope_by_products(PI2, 5 * PI2 / 4)) <= 1e-12


def test_derivative_at_one():
    E1 = levels(1.0, 1)[0]
    rep = derivative_check(1.0, E1)
    assert rep.passed and rep.residual <= 1e-6
    # the slope also agrees with the finite-difference Hamiltonian to its accuracy
    fd = (fd_levels(1.01, 1)[0] - fd_levels(0.99, 1)[0]) / 0.02
    assert abs(rep.details["formula"] - fd) <= 1e-3


@pytest.mark.parametrize("lam", [-12.0, 3.3, 20.0])
def test_reciprocity(lam):
    E = levels(lam, 2)[1]
    rep = reciprocity_check(lam, E)
    assert rep.passed
    # the finite-difference coupling slope confirms the implicit one
    assert abs(rep.details["finite_difference"] - rep.details["dlambda_dE"]) <= 1e-6 * abs(rep.details["dlambda_dE"])


def test_imaginary_part_identity():
    for lam, n in [(2.0 + 1.0j, 1), (-7.5 + 0.4j, 2), (3.0 + 2.5j, 3)]:
        E = level_at(lam, n)
        assert abs(E.imag) > 1e-3
        assert imaginary_part_check(lam, E).passed


def test_near_degenerate_is_reported(branch_points):
    b = _polish(None, branch_points, "bp")
    with pytest.raises(NearDegenerate):
        slope_by_products(b.lam, b.E)


def test_defect_at_table_points(criticals, branch_points):
    b = _polish(criticals, branch_points, "bp")
    c = _polish(criticals, branch_points, "cp")
    assert defect_check(DegeneratePoint(b.lam, b.E, Mode.SCHRODINGER_BP)).residual <= 1e-8
    assert defect_check(DegeneratePoint(c.lam, c.E, Mode.RICHARDSON_BP)).residual <= 1e-8


def test_defect_is_large_at_a_generic_pair():
    E1 = levels(1.0, 1)[0]
    ip = inner_products(1.0, E1)
    assert abs(ip["RR"]) > 0.1
    assert not defect_check(DegeneratePoint(1.0, E1, Mode.SCHRODINGER_BP)).passed


def _psi(lam, E, x):
    return np.array([p.psi for p in eigenfunction(lam, E, x, check=False)])


def _stencil_oracle(samples, lam, E, mode, psi):
    # independent second difference on the returned samples themselves
    xs = np.array([x for x, _ in samples])
    ys = np.array([y for _, y in samples])
    h = xs[1] - xs[0]
    inner = slice(1, -1)
    op = -(ys[2:] - 2 * ys[1:-1] + ys[:-2]) / h ** 2 - (lam * np.sign(xs[inner]) + E) * ys[inner]
    f = psi(xs[inner]) * (1 if mode == Mode.SCHRODINGER_BP else np.sign(xs[inner]))
    keep = np.abs(xs[inner]) > 2 * h
    return np.abs(op - f)[keep].max() / np.abs(psi(xs)).max()


@pytest.mark.parametrize("kind", ["bp", "cp"])
def test_generalized_eigenfunction(criticals, branch_points, kind):
    p = _polish(criticals, branch_points, kind)
    mode = Mode.SCHRODINGER_BP if kind == "bp" else Mode.RICHARDSON_BP
    lam, E = complex(p.lam), complex(p.E)
    xs = np.linspace(-1, 1, 4001)
    samples, rep = generalized_eigenfunction(DegeneratePoint(lam, E, mode), xs)
    assert rep.passed and rep.residual <= 1e-5
    assert rep.details["boundary"] <= 1e-8
    assert abs(samples[0][1]) <= 1e-8 and abs(samples[-1][1]) <= 1e-8
    psi = lambda x: _psi(lam, E, x)
    # coarser stencil on the output grid: truncation error ~ h^2 |psi''''| / 12
    assert _stencil_oracle(samples, lam, E, mode, psi) <= 1e-3


def test_admixture_is_fixed(criticals, branch_points):
    p = _polish(criticals, branch_points, "cp")
    lam, E = p.lam, p.E
    nodes, w = leggauss(80)
    x = np.concatenate([(nodes - 1) / 2, (nodes + 1) / 2])
    wq = np.concatenate([w, w]) / 2
    samples, _ = generalized_eigenfunction(DegeneratePoint(lam, E, Mode.RICHARDSON_BP), x)
    tilde = np.array([y for _, y in samples])
    psi = _psi(lam, E, x)
    assert abs(np.sum(wq * psi * tilde)) <= 1e-10 * np.sum(wq * np.abs(psi) ** 2)


def test_fredholm_violated_off_the_degenerate_set():
    E1 = levels(1.0, 1)[0]
    with pytest.raises(FredholmViolated):
        generalized_eigenfunction(DegeneratePoint(1.0, E1, Mode.SCHRODINGER_BP))


def test_signature_on_the_type_c_loop():
    loc = trace_real_locus((PI2, 5 * PI2 / 4))
    assert signature_check(loc).passed


def test_signature_on_the_imaginary_axis():
    E = level_at(2.0j, 1)
    assert abs(E.imag) <= 1e-10
    loc = RealLocus(LocusKind.B, {1}, [(2.0j, E.real)])
    assert signature_check(loc).residual <= 1e-7


def test_signature_is_trivial_on_the_real_axis():
    loc = RealLocus(LocusKind.A, {1}, [(complex(l), levels(l, 1)[0]) for l in (0.5, 3.0)])
    rep = signature_check(loc)
    assert rep.residual == 0.0


def test_herglotz_reference():
    rep = herglotz_reference(np.linspace(0.0, 50.0, 11))
    assert rep.passed and rep.details["collisions"] == 0


def test_node_count_is_the_same_both_ways():
    for lam in (-9.0, 0.7, 25.0):
        for E in levels(lam, 4):
            s, r = node_count_both_ways(lam, E)
            assert s == r


def test_report_line_states_the_outcome():
    rep = derivative_check(1.0, levels(1.0, 1)[0])
    assert rep.line().startswith("PASS derivative")
