import numpy as np
import pytest

from scroll_lab.curvelab import fermat_quartic
from scroll_lab.numcore import projective_distance
from scroll_lab.scrollab import (PLUCKER_GRAM, QuadricForm6, RankError, build_line_map,
                                 isotropic_frame, lines_through_point, random_bicanonical_quadric)
from scroll_lab.scrollab.frame import (intersect_lines, lines_meet_det, plucker_from_points,
                                       plucker_relation_residual, spanning_points)
from conftest import load_fixture


def _check_frame(Q, frame):
    T = frame.transform
    assert np.linalg.norm(T.T @ Q.gram @ T - PLUCKER_GRAM) < 1e-10
    assert np.allclose(frame.inverse @ T, np.eye(6), atol=1e-10)


def test_frame_of_plucker_form_itself():
    Q = QuadricForm6(PLUCKER_GRAM)
    frame = isotropic_frame(Q, 0)
    assert frame.residual < 1e-12
    _check_frame(Q, frame)


def test_identity_needs_complex_frame():
    Q = QuadricForm6(np.eye(6))
    frame = isotropic_frame(Q, 1)
    _check_frame(Q, frame)
    assert np.abs(frame.transform.imag).max() > 1e-3


def test_frame_of_random_symmetric_form(rng):
    A = rng.normal(size=(6, 6))
    Q = QuadricForm6(A + A.T)
    _check_frame(Q, isotropic_frame(Q, 2))


def test_rank_five_quadric_rejected():
    Q = QuadricForm6.from_json(load_fixture("rank5_quadric.json"))
    assert Q.rank == 5
    with pytest.raises(RankError):
        isotropic_frame(Q)


def test_swap_preserves_frame_and_flips_flag(generic_quadric):
    frame = isotropic_frame(generic_quadric, 0)
    other = frame.swapped()
    _check_frame(generic_quadric, other)
    assert other.ruling_swap and np.isclose(np.linalg.det(other.transform), -np.linalg.det(frame.transform))


def test_plucker_bilinear_detects_meeting_lines(rng):
    def bil(w1, w2):
        return abs(w1 @ PLUCKER_GRAM @ w2) / (np.linalg.norm(w1) * np.linalg.norm(w2))
    for _ in range(50):
        a1, b1, a2, b2 = (rng.normal(size=4) + 1j * rng.normal(size=4) for _ in range(4))
        p = a1 + 0.7 * b1
        w1, w2, w3 = plucker_from_points(a1, b1), plucker_from_points(a2, b2), plucker_from_points(p, b2)
        assert plucker_relation_residual(w1) < 1e-14
        assert bil(w1, w3) < 1e-13 and lines_meet_det(a1, b1, p, b2) < 1e-13
        assert bil(w1, w2) > 1e-6 and lines_meet_det(a1, b1, a2, b2) > 1e-6
        q = intersect_lines(a1, b1, p, b2)
        assert projective_distance(q, p) < 1e-10


def test_spanning_points_reproduce_line(rng):
    a, b = rng.normal(size=4) + 1j * rng.normal(size=4), rng.normal(size=4)
    w = plucker_from_points(a, b)
    s, t = spanning_points(w)
    assert projective_distance(plucker_from_points(s, t), w) < 1e-12
    assert abs(np.vdot(s, t)) < 1e-12


def test_fermat_line_map_gives_distinct_lines():
    f = fermat_quartic()
    Q = random_bicanonical_quadric(f, 3)
    lm = build_line_map(Q, f, 60, 3)
    assert len(lm) == 60
    assert lm.residuals["plucker_relation"] < 1e-10 and lm.residuals["on_quadric"] < 1e-9
    d = min(projective_distance(lm.plucker[i], lm.plucker[j]) for i in range(60) for j in range(i))
    assert d > 1e-6


def test_line_of_matches_line_map(generic_lm):
    w, _, _ = generic_lm.line_of(generic_lm.points[4])
    assert projective_distance(w, generic_lm.plucker[4]) < 1e-12


def test_point_on_line_recovers_parameter(generic_lm, rng):
    # a point of l_x lies on l_x and on finitely many other lines of the family
    a, b = generic_lm.line(7)
    q = a + 0.3 * b
    hits = lines_through_point(generic_lm.frame, q, generic_lm.quartic, rng)
    assert any(projective_distance(x, generic_lm.points[7]) < 1e-7 for x, _ in hits)


def test_ruling_convention_is_deterministic(generic_quadric, quartic):
    a = build_line_map(generic_quadric, quartic, 10, 4)
    b = build_line_map(generic_quadric, quartic, 10, 4)
    c = build_line_map(generic_quadric, quartic, 10, 4, ruling_swap=True)
    assert a.convention == "det-principal-root"
    assert np.array_equal(a.plucker, b.plucker)
    # the other ruling gives a genuinely different family of lines
    assert max(projective_distance(u, v) for u, v in zip(a.plucker, c.plucker)) > 1e-3
