from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scroll_lab.exactcore import (DegenerateInputError, MultiPoly, RationalMatrix, bareiss_det,
                                  exact_nullspace, matvec, monomials, poly_det,
                                  sylvester_resultant, upoly_gcd, upoly_squarefree)
from scroll_lab.selftest import euclid_resultant, fraction_det, random_form, specialize

X = [MultiPoly.var(i, 3) for i in range(3)]

# frozen from an independent computer-algebra run
DET_MATRIX = [[X[0] + X[1], X[2] * 2, X[0] - X[1]],
              [X[1], X[0] + X[2] * 3, -X[2]],
              [X[0] * 2 - X[2], X[1], X[1] + X[2]]]
DET_VALUE = {(0, 0, 3): 2, (0, 1, 2): -2, (0, 2, 1): 2, (0, 3, 0): -1, (1, 0, 2): 2,
             (1, 1, 1): 10, (1, 2, 0): 2, (2, 0, 1): -4, (2, 1, 0): 3, (3, 0, 0): -2}
RES_P = X[0] ** 2 * X[1] - X[0] * X[2] ** 2 * 3 + X[1] ** 3 + X[2] ** 3 * 2
RES_Q = X[0] ** 2 - X[1] * X[2] + X[0] * X[1] * 2
RES_VALUE = {(0, 0, 6): 4, (0, 1, 5): 3, (0, 2, 4): 4, (0, 3, 3): 6, (0, 4, 2): 7,
             (0, 5, 1): 2, (0, 6, 0): 5}


def as_dict(p):
    return {e: int(c) for e, c in p.terms.items()}


def test_monomial_order_is_graded_lex():
    assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert len(monomials(4, 8)) == 165


def test_arithmetic_and_derivative():
    p = (X[0] + X[1]) ** 2
    assert p == X[0] ** 2 + X[0] * X[1] * 2 + X[1] ** 2
    assert p.diff(0) == (X[0] + X[1]) * 2
    assert (p - p).is_zero()
    assert p.evaluate([Fraction(1, 2), Fraction(1, 3), 0]) == Fraction(25, 36)


def test_exact_divide():
    a, b = X[0] + X[1] * 2, X[2] - X[0]
    assert (a * b).exact_divide(b) == a
    with pytest.raises(ArithmeticError):
        (a * b + X[2]).exact_divide(b)


def test_json_round_trip():
    p = X[0] ** 3 * Fraction(2, 7) - X[1] * X[2] ** 2
    assert MultiPoly.from_json(3, p.to_json()) == p


def test_poly_det_frozen_value():
    assert as_dict(poly_det(DET_MATRIX)) == DET_VALUE
    assert bareiss_det(DET_MATRIX) == poly_det(DET_MATRIX)


def test_sylvester_resultant_frozen_value():
    assert as_dict(sylvester_resultant(RES_P, RES_Q, 0)) == RES_VALUE


def test_resultant_rejects_constant_in_variable():
    with pytest.raises(DegenerateInputError):
        sylvester_resultant(X[1], X[0], 0)


def test_euclid_oracle_on_known_pair():
    # t^3 - 2t + 1 and t^2 + t - 1 share a root
    assert euclid_resultant([1, -2, 0, 1], [-1, 1, 1]) == 0
    # resultant of (t - a) and (t - b) is a - b
    assert euclid_resultant([Fraction(-3), 1], [Fraction(-5), 1]) == -2


def test_rational_matrix_rank_det_nullspace():
    M = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert M.rank() == 2 and M.det() == 0
    N = exact_nullspace(M)
    assert len(N) == 1 and matvec(M, N[0]) == [0, 0, 0]


def test_upoly_gcd_and_squarefree():
    a = [Fraction(c) for c in (-2, 5, -4, 1)]      # (t-1)^2 (t-2)
    assert upoly_gcd(a, [Fraction(-1), Fraction(1)]) == [-1, 1]
    assert upoly_squarefree(a) == [2, -3, 1]


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=20)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31), st.lists(rationals, min_size=3, max_size=3))
def test_det_evaluation_property(seed, point):
    rng = np.random.default_rng(seed)
    M = [[random_form(rng, 3, 1) for _ in range(3)] for _ in range(3)]
    assert poly_det(M).evaluate(point) == fraction_det([[e.evaluate(point) for e in r] for r in M])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31), rationals, rationals)
def test_resultant_specialization_property(seed, a, b):
    rng = np.random.default_rng(seed)
    p, q = random_form(rng, 3, 2), random_form(rng, 3, 2)
    pa, qa = specialize(p, 0, {1: a, 2: b}), specialize(q, 0, {1: a, 2: b})
    if not pa[-1] or not qa[-1]:
        return
    R = sylvester_resultant(p, q, 0)
    assert R.evaluate([0, a, b]) == euclid_resultant(pa, qa)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_det_is_multiplicative_on_rational_matrices(seed):
    rng = np.random.default_rng(seed)
    A = RationalMatrix(3, 3, [int(v) for v in rng.integers(-4, 5, size=9)])
    B = RationalMatrix(3, 3, [int(v) for v in rng.integers(-4, 5, size=9)])
    assert (A @ B).det() == A.det() * B.det()
