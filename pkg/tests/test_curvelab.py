from fractions import Fraction

import numpy as np
import pytest

from scroll_lab.curvelab import (SINGULAR, SMOOTH, PlaneQuartic, QuarticInputError,
                                 check_smooth_quartic, fermat_quartic, gram_to_numpy,
                                 in_bicanonical_span, klein_quartic, points_on_line,
                                 pullback_residual, quadrics_through_bicanonical, random_quartic,
                                 sample_curve_points, veronese_lift, veronese_pullback)
from scroll_lab.exactcore import MultiPoly
from scroll_lab.scrollab import detect_veronese_containment

X = [MultiPoly.var(i, 3) for i in range(3)]
NODAL = X[2] ** 2 * (X[0] ** 2 - X[1] ** 2) + X[0] ** 4 + X[1] ** 4   # node at (0:0:1)


@pytest.mark.parametrize("f", [fermat_quartic(), klein_quartic(), random_quartic(7)],
                         ids=["fermat", "klein", "random"])
def test_smooth_quartics_are_certified(f):
    assert check_smooth_quartic(f).status == SMOOTH


def test_nodal_quartic_gets_exact_witness():
    cert = check_smooth_quartic(PlaneQuartic(NODAL))
    assert cert.status == SINGULAR and cert.exact_witness
    w = [Fraction(c) for c in cert.witness]
    assert all(NODAL.diff(i).evaluate(w) == 0 for i in range(3))
    assert w[0] == 0 and w[1] == 0 and w[2] != 0


def test_reducible_quartic_is_singular():
    f = (X[0] ** 2 + X[1] ** 2 - X[2] ** 2) * (X[0] ** 2 - X[1] * X[2] * 2 + X[2] ** 2 * 3)
    assert check_smooth_quartic(PlaneQuartic(f)).status == SINGULAR


def test_non_quartic_input_rejected():
    with pytest.raises(QuarticInputError):
        check_smooth_quartic(X[0] ** 3 + X[1] ** 3)


def test_json_round_trip(quartic):
    assert PlaneQuartic.from_json(quartic.to_json()).form == quartic.form


@pytest.mark.parametrize("f", [fermat_quartic(), klein_quartic()], ids=["fermat", "klein"])
def test_bicanonical_quadrics_have_dimension_seven(f):
    basis = quadrics_through_bicanonical(f)
    assert basis.dimension == 7 and basis.pullback_rank == 15
    assert len(basis.veronese) == 6
    for G in basis.veronese:
        assert veronese_pullback(G).is_zero()
        assert detect_veronese_containment(G)
    assert veronese_pullback(basis.special) == f.form
    assert not detect_veronese_containment(basis.special)
    assert all(in_bicanonical_span(G, f) for G in basis.forms)


def test_span_test_rejects_generic_quadric(rng):
    from scroll_lab.exactcore import RationalMatrix
    f = fermat_quartic()
    A = RationalMatrix(6, 6, [int(v) for v in rng.integers(-3, 4, size=36)])
    G = A + A.transpose()
    assert not in_bicanonical_span(G, f)


def test_samples_lie_on_curve_and_lift_to_quadrics(quartic):
    s = sample_curve_points(quartic, 40, 3)
    assert len(s) == 40 and s.residuals.max() < 1e-10
    d = [np.linalg.norm(np.cross(a, b)) for i, a in enumerate(s.points) for b in s.points[:i]]
    assert min(d) > 1e-8
    basis = quadrics_through_bicanonical(quartic)
    for G in basis.forms:
        assert pullback_residual(gram_to_numpy(G), quartic, s) < 1e-12


def test_sampling_is_seeded(quartic):
    a, b = sample_curve_points(quartic, 10, 5), sample_curve_points(quartic, 10, 5)
    assert np.array_equal(a.points, b.points)
    assert not np.allclose(a.points, sample_curve_points(quartic, 10, 6).points)


def test_four_points_per_line(quartic):
    pts = points_on_line(quartic, [1, 2, -1], [0, 1, 3])
    assert len(pts) == 4 and max(r for _, r in pts) < 1e-10


def test_veronese_lift_is_projective():
    p = np.array([1, 2j, -1])
    v = veronese_lift(p)
    w = veronese_lift(3 * p)
    assert abs(abs(np.vdot(v, w)) - 1) < 1e-14
    with pytest.raises(ValueError):
        veronese_lift([0, 0, 0])
