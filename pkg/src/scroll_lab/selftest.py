"""Exact-vs-oracle checks behind ``scroll-lab self-test``.

Golden files hold frozen exact values; every other check compares two
independent computations.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exactcore import (MultiPoly, RationalMatrix, exact_nullspace, matvec, poly_det,
                        sylvester_resultant, upoly_divmod, upoly_trim)
from .numcore import numeric_nullspace, univariate_roots
from .numcore.roots import reconstruct

GOLDEN_FILE = "selftest.json"


def random_rational(rng, bound=20) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def random_form(rng, nvars, degree, bound=5) -> MultiPoly:
    from .exactcore import monomials
    return MultiPoly(nvars, {e: Fraction(int(rng.integers(-bound, bound + 1)))
                             for e in monomials(nvars, degree)})


def fraction_det(rows) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    A = [list(map(Fraction, r)) for r in rows]
    n, det = len(A), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            m = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= m * A[k][j]
    return det


def euclid_resultant(a, b) -> Fraction:
    """Resultant of univariate polynomials (constant term first) by remainders."""
    a = upoly_trim([Fraction(c) for c in a])
    b = upoly_trim([Fraction(c) for c in b])
    if not a or not b:
        return Fraction(0)
    m, n = len(a) - 1, len(b) - 1
    if n == 0:
        return b[0] ** m
    _, r = upoly_divmod(a, b)
    if not r:
        return Fraction(0)
    k = len(r) - 1
    sign = -1 if (m * n) % 2 else 1
    return sign * b[-1] ** (m - k) * euclid_resultant(b, r)


def specialize(p: MultiPoly, var: int, values: dict) -> list:
    """Univariate coefficients in x_var after substituting the other variables."""
    out = [Fraction(0)] * (p.degree_in(var) + 1)
    for e, c in p.items():
        term = Fraction(c)
        for i, k in enumerate(e):
            if i != var:
                term *= values[i] ** k
        out[e[var]] += term
    return out


def check_det_oracle(rng, points=20, n=3):
    M = [[random_form(rng, 3, 1) for _ in range(n)] for _ in range(n)]
    D = poly_det(M)
    for _ in range(points):
        x = [random_rational(rng) for _ in range(3)]
        if D.evaluate(x) != fraction_det([[e.evaluate(x) for e in row] for row in M]):
            return False, f"determinant differs at {x}"
    return True, f"{points} rational points, exact equality"


def check_resultant_oracle(rng, points=20):
    p, q = random_form(rng, 3, 3), random_form(rng, 3, 2)
    R = sylvester_resultant(p, q, 0)
    done = 0
    for _ in range(10 * points):
        vals = {1: random_rational(rng), 2: random_rational(rng)}
        pa, qa = specialize(p, 0, vals), specialize(q, 0, vals)
        if pa[-1] == 0 or qa[-1] == 0:      # degree drop: specialization does not commute
            continue
        if R.evaluate([Fraction(0), vals[1], vals[2]]) != euclid_resultant(pa, qa):
            return False, f"resultant differs at {vals}"
        done += 1
        if done == points:
            break
    return done == points, f"{done} rational points, exact equality"


def check_exact_nullspace(rng):
    A = RationalMatrix(3, 6, [int(v) for v in rng.integers(-5, 6, size=18)])
    B = RationalMatrix(6, 6, [int(v) for v in rng.integers(-5, 6, size=36)])
    M = A.transpose() @ A @ B          # rank at most 3
    N = exact_nullspace(M)
    ok = all(all(v == 0 for v in matvec(M, z)) for z in N) and len(N) == 6 - M.rank()
    return ok, f"nullity {len(N)}, rank {M.rank()}"


def check_numeric_nullspace(rng):
    U = rng.normal(size=(12, 5)) + 1j * rng.normal(size=(12, 5))
    V = rng.normal(size=(5, 8)) + 1j * rng.normal(size=(5, 8))
    M = U @ V
    N = numeric_nullspace(M, 1e-10)
    res = float(np.abs(M @ N.T).max() / np.abs(M).max()) if len(N) else np.inf
    orth = float(np.abs(N @ N.conj().T - np.eye(len(N))).max()) if len(N) else np.inf
    ok = len(N) == 3 and res < 1e-12 and orth < 1e-12
    return ok, f"nullity {len(N)}, residual {res:.1e}, orthonormality {orth:.1e}"


def check_roots(rng, degree=12):
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    roots = [r for r, _ in univariate_roots(c)]
    rec = reconstruct(c[0], np.array(roots))
    err = float(np.abs(rec - c).max() / np.abs(c).max())
    return len(roots) == degree and err < 1e-10, f"{len(roots)} roots, reconstruction {err:.1e}"


def _terms_equal(p: MultiPoly, terms: dict) -> bool:
    return p == MultiPoly.from_json(p.nvars, terms)


def golden_checks(golden: dict):
    from .curvelab import fermat_quartic, klein_quartic, quadrics_through_bicanonical
    from .netlab import NetOfQuadrics, discriminant_quartic
    out = []
    g = golden["determinant"]
    M = [[MultiPoly.from_json(g["nvars"], e) for e in row] for row in g["matrix"]]
    out.append(("golden determinant", _terms_equal(poly_det(M), g["det"]),
                "poly_det of the stored matrix"))
    g = golden["resultant"]
    p = MultiPoly.from_json(g["nvars"], g["p"])
    q = MultiPoly.from_json(g["nvars"], g["q"])
    out.append(("golden resultant", _terms_equal(sylvester_resultant(p, q, g["var"]), g["resultant"]),
                "sylvester_resultant of the stored pair"))
    g = golden["discriminant"]
    net = NetOfQuadrics.from_json(g["net"])
    f = discriminant_quartic(net)
    out.append(("golden discriminant", f is not None and _terms_equal(f.form, g["terms"]),
                "discriminant of the stored net"))
    g = golden["bicanonical_dimension"]
    dims = {"fermat": quadrics_through_bicanonical(fermat_quartic()).dimension,
            "klein": quadrics_through_bicanonical(klein_quartic()).dimension}
    out.append(("golden bicanonical dimension", dims == g, f"computed {dims}"))
    g = golden["roots"]
    roots = np.array([r for r, _ in univariate_roots(np.array(g["coefficients"], dtype=float))])
    want = np.array(g["roots"], dtype=float)
    err = float(max(np.abs(roots - w).min() for w in want)) if len(roots) == len(want) else np.inf
    out.append(("golden roots", err < 1e-10, f"max distance {err:.1e}"))
    return out


def run_self_test(golden_dir: Path, seed: int = 1):
    rng = np.random.default_rng(seed)
    rows = []

    def add(name, passed, detail):
        rows.append({"name": name, "passed": bool(passed), "detail": detail})

    for name, fn in [("determinant vs evaluation oracle", check_det_oracle),
                     ("resultant vs evaluation oracle", check_resultant_oracle),
                     ("exact nullspace consistency", check_exact_nullspace),
                     ("numeric nullspace consistency", check_numeric_nullspace),
                     ("root finder reconstruction", check_roots)]:
        try:
            add(name, *fn(rng))
        except Exception as exc:                      # a crash is a failed check
            add(name, False, f"{type(exc).__name__}: {exc}")
    try:
        golden = json.loads((Path(golden_dir) / GOLDEN_FILE).read_text())
        for name, passed, detail in golden_checks(golden):
            add(name, passed, detail)
    except Exception as exc:
        add("golden files", False, f"{type(exc).__name__}: {exc}")
    return rows
