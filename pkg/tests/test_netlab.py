from fractions import Fraction

import numpy as np
import pytest

from scroll_lab.exactcore import RationalMatrix
from scroll_lab.netlab import (DEGENERATE, GENERAL, NetInputError, NetOfQuadrics,
                               discriminant_quartic, gamma_plane_section_count, kernel_residual,
                               scorza_incidence, singular_point_map, trisecants_through_point)
from scroll_lab.numcore import projective_distance
from conftest import load_fixture


def _sym(rng, bound=3):
    U = rng.integers(-bound, bound + 1, size=(4, 4))
    return RationalMatrix.from_rows((np.triu(U) + np.triu(U, 1).T).tolist())


def test_diagonal_net_is_degenerate():
    net = NetOfQuadrics.from_json(load_fixture("diagonal_net.json"))
    discriminant_quartic(net)
    assert net.status == DEGENERATE and "reducible" in net.reason


def test_dependent_matrices_rejected():
    with pytest.raises(NetInputError):
        NetOfQuadrics.from_json(load_fixture("dependent_net.json"))


def test_non_symmetric_matrix_rejected():
    data = load_fixture("diagonal_net.json")
    data["A"][0][1] = "1"
    with pytest.raises(NetInputError):
        NetOfQuadrics.from_json(data)


def test_exact_vertex_of_a_known_cone(rng):
    A = RationalMatrix.from_rows([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    net = NetOfQuadrics(A, _sym(rng), _sym(rng))
    discriminant_quartic(net)
    k = singular_point_map(net, (1, 0, 0))
    assert all(isinstance(v, Fraction) for v in k)
    assert k[0] != 0 and k[1:] == (0, 0, 0)


def test_discriminant_congruence_covariance(example_net):
    S = RationalMatrix.from_rows([[1, 2, 0, -1], [0, 1, 3, 0], [2, 0, 1, 1], [0, -1, 0, 1]])
    moved = NetOfQuadrics(*[S.transpose() @ M @ S for M in example_net.matrices])
    f, g = example_net.quartic.form, discriminant_quartic(moved).form
    assert g == f * (S.det() ** 2)


def test_discriminant_substitution_covariance(example_net):
    T = [[1, 1, 0], [0, 2, -1], [3, 0, 1]]
    mats = example_net.matrices
    moved = NetOfQuadrics(*[mats[0].scale(T[0][j]) + mats[1].scale(T[1][j]) + mats[2].scale(T[2][j])
                            for j in range(3)])
    assert discriminant_quartic(moved).form == example_net.quartic.form.linear_change(T)


def test_example_net_is_general(example_net):
    assert example_net.status == GENERAL


def test_gamma_samples_are_kernels(gamma, example_net):
    assert len(gamma) == 120 and gamma.residuals.max() < 1e-9
    x = gamma.params[5]
    assert kernel_residual(example_net, x, gamma.points[5]) < 1e-12


def test_gamma_is_a_sextic(example_net):
    res = gamma_plane_section_count(example_net, seed=2)
    assert res.count == 6 and res.exact_degree == 6 and res.residual < 1e-8


def test_gamma_section_on_a_given_plane(example_net):
    res = gamma_plane_section_count(example_net, h=(1, -2, 3, 5), seed=4)
    assert res.count == 6
    for x, k in zip(res.params, res.points):
        assert kernel_residual(example_net, x, k) < 1e-9


def test_three_trisecants_through_a_point(gamma):
    res = trisecants_through_point(gamma, 0, seed=0)
    assert res.status == "ok" and res.node_count == 3 and len(res.lines) == 3
    for line in res.lines:
        assert len(line.contacts) == 3
        assert line.contact_residual < 1e-8 and line.plucker_residual < 1e-12
        assert min(projective_distance(k, res.base) for k in line.contacts) < 1e-8


def test_scorza_correspondence_is_symmetric(gamma):
    res = scorza_incidence(gamma, gamma.params[7], seed=1)
    assert len(res.residual_points) == 6
    assert res.symmetric and max(res.symmetry_distances) < 1e-6
