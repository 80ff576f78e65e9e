import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scroll_lab.exactcore import MultiPoly
from scroll_lab.numcore import (NumPoly, cluster_with_tolerance, normalize_projective,
                                numeric_nullspace, numeric_rank, projective_distance,
                                relative_residual, univariate_roots)
from scroll_lab.numcore.homotopy import random_combinations, solve_projective
from scroll_lab.numcore.intersect import intersect_plane_curves
from scroll_lab.numcore.poly import monomial_matrix
from scroll_lab.numcore.roots import reconstruct

X = [MultiPoly.var(i, 3) for i in range(3)]


def test_roots_of_known_polynomial():
    roots = sorted(r.real for r, _ in univariate_roots([2, -1, -13, -6]))  # (t-3)(t+2)(2t+1)
    assert np.allclose(roots, [-2, -0.5, 3], atol=1e-12)


def test_roots_peel_zero_and_trim_leading():
    got = [r for r, _ in univariate_roots([1e-20, 1, -1, 0])]
    assert len(got) == 2
    assert min(abs(r) for r in got) == 0 and min(abs(r - 1) for r in got) < 1e-14


def test_roots_match_numpy_on_random_polynomial(rng):
    c = rng.normal(size=15) + 1j * rng.normal(size=15)
    ours = np.array([r for r, _ in univariate_roots(c)])
    for r in np.roots(c):
        assert np.abs(ours - r).min() < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(2, 16))
def test_root_reconstruction_property(seed, degree):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    roots = np.array([r for r, _ in univariate_roots(c)])
    assert len(roots) == degree
    assert np.abs(reconstruct(c[0], roots) - c).max() < 1e-9 * np.abs(c).max()


def test_nullspace_of_rank_deficient_matrix(rng):
    M = (rng.normal(size=(9, 4)) + 1j * rng.normal(size=(9, 4))) @ rng.normal(size=(4, 7))
    N = numeric_nullspace(M, 1e-10)
    assert N.shape == (3, 7)
    assert np.abs(M @ N.T).max() < 1e-12 * np.abs(M).max()
    assert np.allclose(N @ N.conj().T, np.eye(3), atol=1e-12)
    assert numeric_rank(M, 1e-10) == 4


def test_projective_distance_and_clustering():
    u = np.array([1, 1j, 0])
    assert projective_distance(u, 3j * u) < 1e-15
    assert abs(projective_distance([1, 0, 0], [0, 1, 0]) - 1) < 1e-15
    pts = [u, u * (2 - 1j), [0, 0, 1], [1e-9, 0, 1]]
    cl = cluster_with_tolerance(pts, 1e-6)
    assert cl.count == 2 and cl.multiplicities == [2, 2]
    v = normalize_projective([0, -2j, 1])
    assert abs(np.linalg.norm(v) - 1) < 1e-15 and v[1].imag == 0 and v[1].real > 0


def test_clustering_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        cluster_with_tolerance([[1, 0]], 0)


def test_numpoly_matches_exact_evaluation(rng):
    p = X[0] ** 3 * 2 - X[0] * X[1] * X[2] + X[2] ** 3 * 5
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert abs(NumPoly.from_multipoly(p)(z) - p.evaluate(list(z))) < 1e-12
    q = NumPoly.from_multipoly(p)
    a, b = rng.normal(size=3), rng.normal(size=3)
    c = q.restrict_to_line(a, b)
    assert abs(np.polyval(c, 0.7) - q(a + 0.7 * b)) < 1e-12


def test_monomial_matrix_scaling_keeps_unit_rows(rng):
    P = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    P /= np.linalg.norm(P, axis=1)[:, None]
    M = monomial_matrix(P, 3)
    assert np.allclose(np.linalg.norm(M, axis=1), 1)


def test_intersect_conic_and_quartic_gives_bezout_count(rng):
    conic = NumPoly.from_multipoly(X[0] ** 2 + X[1] ** 2 - X[2] ** 2 * 2 + X[0] * X[2])
    quartic = NumPoly.from_multipoly(X[0] ** 4 + X[1] ** 4 + X[2] ** 4 - X[0] * X[1] * X[2] ** 2 * 3)
    pts = intersect_plane_curves(conic, quartic, rng)
    assert len(cluster_with_tolerance(pts, 1e-6)) == 8
    for p in pts:
        assert relative_residual(conic, p) < 1e-12 and relative_residual(quartic, p) < 1e-12


def test_homotopy_counts_all_bezout_solutions(rng):
    polys = [NumPoly.from_multipoly(f) for f in
             (X[0] ** 2 - X[1] * X[2] * 3 + X[2] ** 2, X[0] * X[1] + X[1] ** 2 - X[2] ** 2 * 2)]
    res = solve_projective(polys, rng)
    assert res.path_count == 4
    pts = res.points[res.converged]
    assert cluster_with_tolerance(pts, 1e-6).count == 4
    for p in pts:
        assert max(relative_residual(f, p) for f in polys) < 1e-10


def test_random_combinations_span(rng):
    polys = [NumPoly.from_multipoly(X[i] ** 2) for i in range(3)]
    combos = random_combinations(polys, 2, rng)
    assert len(combos) == 2 and all(c.degree == 2 for c in combos)
