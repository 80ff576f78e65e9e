import numpy as np
import pytest

from scroll_lab.curvelab import in_bicanonical_span
from scroll_lab.scrollab import (build_line_map, build_trisecant_scroll, construct_case_b,
                                 detect_veronese_containment, fit_scroll,
                                 multiplicity_along_curve, random_bicanonical_quadric,
                                 singular_curve_case_b)
from scroll_lab.scrollab.lines import oriented_frame, veronese_congruence_order


@pytest.fixture(scope="module")
def case_b(quartic):
    Q = construct_case_b(quartic, 1)
    return Q, build_line_map(Q, quartic, 60, 1)


def test_random_quadric_is_smooth_and_through_curve(generic_quadric, quartic):
    assert generic_quadric.rank == 6
    assert in_bicanonical_span(generic_quadric.exact, quartic)
    assert not detect_veronese_containment(generic_quadric.exact)


def test_random_quadric_is_seeded(quartic):
    a, b = random_bicanonical_quadric(quartic, 9), random_bicanonical_quadric(quartic, 9)
    assert a.exact == b.exact


def test_veronese_detection_needs_exact_input():
    with pytest.raises(TypeError):
        detect_veronese_containment(np.eye(6))


def test_case_b_quadric(case_b, quartic):
    Q, lm = case_b
    assert Q.rank == 6 and detect_veronese_containment(Q.exact)
    assert in_bicanonical_span(Q.exact, quartic)
    assert lm.convention == "veronese-order-1"
    assert veronese_congruence_order(lm.frame, 2) == 1
    other, _ = oriented_frame(Q, 1, ruling_swap=True)
    assert veronese_congruence_order(other, 2) == 3


def test_case_b_singular_curve_is_a_twisted_cubic(case_b):
    _, lm = case_b
    res = singular_curve_case_b(lm, n_lines=12, seed=1)
    assert res.tangency_skipped == 0
    assert all(c == [3, 3] for c in res.clusters_per_line)
    assert res.nullity == 3 and res.fit_residual < 1e-8
    assert res.bisecant_counts == [2] * 10
    assert res.plane_counts == [3, 3, 3]


@pytest.fixture(scope="module")
def trisecant_scroll(gamma):
    return build_trisecant_scroll(gamma, n_points=14, n_validation=2, seed=0)


def test_trisecant_scroll_lines(trisecant_scroll):
    ts = trisecant_scroll
    assert not ts.degenerate and ts.counts == [3] * 16
    assert len(ts.lines) == 42 and len(ts.validation) == 6


def test_trisecant_scroll_octic_has_triple_curve(trisecant_scroll, gamma):
    F = fit_scroll(trisecant_scroll.spanning(), 6, 0,
                   validation_lines=trisecant_scroll.spanning("validation"))
    assert F.nullity == 1 and F.validation_residual < 1e-9
    m = multiplicity_along_curve(F, gamma.points[-25:], 3)
    assert m.profile == 3
