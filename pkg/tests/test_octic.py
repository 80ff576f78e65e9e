import numpy as np
import pytest

from scroll_lab.exactcore import MultiPoly
from scroll_lab.numcore import NumPoly, cluster_with_tolerance
from scroll_lab.scrollab import FitError, fit_scroll, multiplicity_along_curve


def test_generic_scroll_octic(generic_octic):
    assert generic_octic.nullity == 1 and generic_octic.degree == 8
    assert generic_octic.construction_residual < 1e-10
    assert generic_octic.validation_residual < 1e-10
    assert len(generic_octic.coefficients) == 165


def test_octic_meets_random_lines_in_eight_points(generic_octic, rng):
    for _ in range(5):
        a, b = rng.normal(size=4) + 1j * rng.normal(size=4), rng.normal(size=4) + 1j * rng.normal(size=4)
        roots = [a + t * b for t, _ in generic_octic.line_roots(a, b)]
        assert cluster_with_tolerance(roots, 1e-6).count == 8


def test_octic_vanishes_identically_on_scroll_lines(generic_octic, generic_lm):
    for i in (0, 61, 119):
        a, b = generic_lm.line(i)
        c = generic_octic.restrict(a, b)
        ref = np.abs(generic_octic.restrict(a + 0.1j, b - 0.2)).max()
        assert np.abs(c).max() < 1e-9 * ref


def test_quadric_lines_give_nullity_diagnostics():
    # one ruling of p0 p3 = p1 p2
    lines = [(np.array([1, 0, s, 0], dtype=complex), np.array([0, 1, 0, s], dtype=complex))
             for s in np.linspace(-2, 2, 60) + 0.1j]
    with pytest.raises(FitError) as err:
        fit_scroll(lines, 6, 0)
    assert err.value.nullity > 1
    assert err.value.diagnostics[2] == 1


def test_fit_requires_enough_lines(generic_lm):
    with pytest.raises(ValueError):
        fit_scroll(generic_lm.lines(range(10)))


def test_octic_json_has_grlex_monomials(generic_octic):
    d = generic_octic.to_json()
    assert d["monomials"][0] == "8,0,0,0" and d["monomials"][-1] == "0,0,0,8"
    assert len(d["coefficients"]) == 165 and d["nullity"] == 1


def test_multiplicity_profile_of_a_cube(rng):
    x = [MultiPoly.var(i, 4) for i in range(4)]
    F = NumPoly.from_multipoly(x[0] ** 3 * (x[1] + x[2] * 2) + x[0] ** 4)
    P = np.column_stack([np.zeros(8), rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3))])
    m = multiplicity_along_curve(F, P, 4)
    assert m.profile == 3 and not m.passed
    assert multiplicity_along_curve(F, P, 2).passed
    # profile is monotone: a failing order is never followed by a passing count
    assert all(m.table[k] < 1e-6 for k in range(3)) and m.table[3] > 1e-6


def test_generic_point_of_octic_is_simple(generic_octic, generic_lm):
    a, b = generic_lm.line(3)
    P = np.array([a + t * b for t in (0.3, -1.1 + 0.5j)])
    assert multiplicity_along_curve(generic_octic, P, 1).profile == 1
