import numpy as np
import pytest

from richardson_spectrum.charfun import char_at, node_count, root_scale
from richardson_spectrum.schrodinger import (PI2_4, Extremum, LocusKind, eigencurves, galerkin_levels,
                                             lattice_maxima, level_table, levels, monodromy_swaps,
                                             sheet_participation, trace_real_locus, trace_type_b,
                                             critical_catalog)

from conftest import fd_levels

PI2 = np.pi ** 2


def test_levels_at_zero_are_quarter_squares():
    E = levels(0.0, 6)
    assert np.allclose(E, np.arange(1, 7) ** 2 * PI2_4, rtol=0, atol=1e-10)


@pytest.mark.parametrize("lam", [-17.3, -2.0, 0.5, 9.0, 31.0])
def test_levels_match_finite_differences(lam):
    # second-order stencil: error ~ E^2 h^2 / 12, a few 1e-4 at the top level
    E = levels(lam, 4)
    ref = fd_levels(lam, 4)
    assert np.allclose(E, ref, rtol=2e-4)


def test_levels_match_galerkin():
    # the step in the weight limits the sine basis to algebraic convergence;
    # the error must shrink steadily as the basis grows
    E = levels(7.5, 4)
    errs = [np.max(np.abs(galerkin_levels(7.5, size=m, count=4) - E)) for m in (20, 40, 80, 160)]
    assert errs[-1] <= 1e-5
    assert all(a > 2 * b for a, b in zip(errs, errs[1:]))


def test_eigencurves_labels_and_symmetry():
    grid = np.linspace(-30, 30, 121)
    pairs = eigencurves(4, grid)
    assert len(pairs) == 4 * len(grid)
    assert all(p.osc == p.sheet - 1 for p in pairs)
    for p in pairs:
        cv = char_at(p.lam, p.E)
        assert abs(cv.D) <= 1e-9 * root_scale(cv, p.lam, p.E)
    T = level_table(4, grid)
    assert np.max(np.abs(T - T[::-1])) <= 1e-10


def test_eigencurve_example_values():
    E = levels(PI2, 2)
    assert abs(E[1] - 5 * PI2 / 4) <= 1e-10
    # a local maximum: lower on both sides
    assert levels(PI2 - 0.1, 2)[1] < E[1] and levels(PI2 + 0.1, 2)[1] < E[1]


def test_eigencurves_rejects_bad_input():
    with pytest.raises(ValueError):
        eigencurves(0, [0.0, 1.0])
    with pytest.raises(ValueError):
        eigencurves(2, [1.0, 0.0])


def test_critical_counts_and_kinds(criticals):
    for n in range(1, 7):
        pts = [c for c in criticals if c.sheet == n]
        assert sum(c.kind == Extremum.MAX for c in pts) == n
        assert sum(c.kind == Extremum.MIN for c in pts) == n - 1
        assert all(c.exact for c in pts if c.kind == Extremum.MAX)
        assert [c.lam for c in pts] == sorted(c.lam for c in pts)


def test_critical_points_are_double_roots(criticals):
    for c in criticals:
        cv = char_at(c.lam, c.E)
        s = root_scale(cv, c.lam, c.E)
        assert abs(cv.D) <= 1e-11 * s
        assert abs(cv.D_lambda) <= 1e-9 * max(1.0, abs(cv.D_E) * abs(c.E))


def test_sheet_one_has_a_single_critical_point(criticals):
    pts = [c for c in criticals if c.sheet == 1]
    assert len(pts) == 1
    assert pts[0].lam == 0 and abs(pts[0].E - PI2_4) <= 1e-12


def test_sheet_three_minima(criticals):
    mins = sorted((c.lam, c.E) for c in criticals if c.sheet == 3 and c.kind == Extremum.MIN)
    assert np.allclose([l for l, _ in mins], [-6.151546, 6.151546], atol=1e-5)
    assert np.allclose([E for _, E in mins], 21.996039, atol=1e-5)


def test_sheet_four_outer_maxima():
    outer = lattice_maxima(4)
    assert abs(outer[0].lam + 6 * PI2) <= 1e-12 and abs(outer[-1].lam - 6 * PI2) <= 1e-12
    assert abs(outer[-1].E - 25 * PI2 / 4) <= 1e-12


def test_critical_catalog_rejects_large_sheets():
    with pytest.raises(ValueError):
        critical_catalog(11)


def test_branch_catalog_quadruplet_closure(branch_points):
    lams = np.array([b.lam for b in branch_points])
    for b in branch_points:
        for img in (-b.lam, b.lam.conjugate(), -b.lam.conjugate()):
            assert np.min(np.abs(lams - img)) <= 1e-8 * max(1, abs(img))


def test_branch_catalog_residuals(branch_points):
    for b in branch_points:
        cv = char_at(b.lam, b.E)
        s = root_scale(cv, b.lam, b.E)
        assert abs(cv.D) <= 1e-11 * s
        assert abs(cv.D_E) <= 1e-9 * max(1.0, abs(cv.D_lambda) * abs(b.lam))
        assert b.sheets[1] == b.sheets[0] + 1


def test_branch_catalog_first_rows(branch_points):
    def near(lam, E):
        return min(max(abs(b.lam - lam), abs(b.E - E)) for b in branch_points)
    assert near(4.475309j, 6.401903) <= 1e-5
    assert near(9.264139 + 6.834853j, 17.617719 + 0.960866j) <= 1e-5


def test_participation_counts(branch_points):
    assert [sheet_participation(branch_points, n) for n in (1, 2, 3)] == [2, 6, 10]


def test_monodromy_swaps_the_first_pair(branch_points):
    b = next(b for b in branch_points if b.sheets == (1, 2) and b.lam.imag > 0)
    swapped, start, end = monodromy_swaps(b.lam, b.E, 3)
    assert swapped
    assert np.allclose(end, start[::-1], rtol=1e-8)


def test_type_b_locus_ends_at_branch_points():
    loc = trace_type_b(1)
    assert loc.kind == LocusKind.B
    ends = sorted(bl.imag for bl, _ in loc.branch_points)
    assert np.allclose(ends, [-4.475309, 4.475309], atol=1e-5)
    for lam, E in loc.points:
        assert abs(complex(lam).real) <= 1e-9
        assert abs(np.imag(E)) <= 1e-9 * max(1, abs(E))


def test_type_c_loop_through_sheets_two_and_three():
    loc = trace_real_locus((PI2, 5 * PI2 / 4))
    assert loc.kind == LocusKind.C and loc.closed
    assert loc.return_distance <= 1e-6
    assert loc.sheets == {2, 3}
    crossings = np.array(loc.crossings)
    assert np.min(np.hypot(crossings[:, 0] - 6.151546, crossings[:, 1] - 21.996039)) <= 1e-5
    # stored spacing in lambda stays at or below the figure resolution
    lams = np.array([complex(l) for l, _ in loc.points])
    assert np.max(np.abs(np.diff(lams))) <= 0.05 + 1e-9
    for lam, E in loc.points[::25]:
        for img in (-lam, np.conj(lam), -np.conj(lam)):
            cv = char_at(img, E)
            assert abs(cv.D) <= 1e-8 * root_scale(cv, img, E)


def test_node_count_on_the_axis_is_sheet_minus_one():
    for n, E in enumerate(levels(3.3, 5), start=1):
        assert node_count(3.3, E) == n - 1

