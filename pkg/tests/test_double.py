import numpy as np
import pytest

from scroll_lab.numcore import projective_distance, relative_residual
from scroll_lab.scrollab import (PreconditionError, build_line_map, construct_case_b,
                                 double_curve_partners, double_curve_plane_count)
from scroll_lab.scrollab.double import bilinear_residual


@pytest.fixture(scope="module")
def partners(generic_lm):
    return double_curve_partners(generic_lm, generic_lm.points[0], np.random.default_rng(2))


def test_six_partners_meeting_the_line(partners, generic_lm):
    assert len(partners) == 6 and not partners.tangency
    assert max(partners.meet_residuals) < 1e-10
    G = generic_lm.quadric.gram
    assert max(bilinear_residual(G, partners.x, y) for y in partners.partners) < 1e-10
    assert max(partners.diagonal_distances[:2]) < 1e-5


def test_partner_relation_is_symmetric(partners, generic_lm):
    x = partners.x
    for y in partners.partners[:3]:
        back = double_curve_partners(generic_lm, y, np.random.default_rng(3))
        assert min(projective_distance(x, z) for z in back.partners) < 1e-7


def test_meeting_points_are_singular_on_the_octic(partners, generic_octic):
    P = np.array(partners.points)
    assert relative_residual(generic_octic.poly, P).max() < 1e-7
    for g in generic_octic.poly.gradient():
        assert relative_residual(g, P).max() < 1e-6


def test_double_curve_meets_a_plane_eighteen_times(generic_lm):
    res = double_curve_plane_count(generic_lm, seed=5)
    assert res.section_nullity == 1
    assert res.count == 18 and res.ordered_pairs == 36
    assert res.residuals["bilinear"] < 1e-8 and res.residuals["plane"] < 1e-8


def test_case_b_rejected(quartic):
    Q = construct_case_b(quartic, 1)
    lm = build_line_map(Q, quartic, 10, 1)
    with pytest.raises(PreconditionError):
        double_curve_plane_count(lm)


def test_other_ruling_gives_same_double_curve_degree(generic_quadric, quartic):
    lm = build_line_map(generic_quadric, quartic, 120, 1, ruling_swap=True)
    assert lm.frame.ruling_swap
    assert double_curve_plane_count(lm, seed=6).count == 18
