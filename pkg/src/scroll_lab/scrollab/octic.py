"""Implicit equation of a ruled surface by monomial nullspace fitting."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..exactcore import monomials
from ..numcore import NumPoly, numeric_nullspace, relative_residual, univariate_roots
from ..numcore.poly import monomial_matrix, multinomial_weights

MULTIPLICITY_TOL = 1e-6


class FitError(RuntimeError):
    """Raised when the sampled lines do not determine a unique surface."""

    def __init__(self, message, nullity, diagnostics=None):
        super().__init__(message)
        self.nullity = nullity
        self.diagnostics = diagnostics or {}


@dataclass
class OcticSurface:
    coefficients: np.ndarray
    degree: int = 8
    nullity: int = 1
    construction_residual: float = 0.0
    validation_residual: float = 0.0
    sample_count: int = 0
    seed: int = 0
    tolerance: float = 1e-8
    irreducibility: str = "unchecked"
    _poly: Optional[NumPoly] = field(default=None, repr=False)

    @property
    def poly(self) -> NumPoly:
        if self._poly is None:
            self._poly = NumPoly.from_dense(4, self.degree, self.coefficients)
        return self._poly

    def __call__(self, Z):
        return self.poly(Z)

    def residual(self, Z):
        return relative_residual(self.poly, Z)

    def restrict(self, a, b):
        """Coefficients of t -> F(a + t b), highest power first."""
        return self.poly.restrict_to_line(a, b)

    def line_roots(self, a, b):
        return univariate_roots(self.restrict(a, b))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "monomials": [",".join(map(str, e)) for e in monomials(4, self.degree)],
            "coefficients": [[float(z.real), float(z.imag)] for z in self.coefficients],
            "normalization": "largest coefficient equal to 1",
            "nullity": self.nullity,
            "construction_residual": float(self.construction_residual),
            "validation_residual": float(self.validation_residual),
            "sample_count": self.sample_count,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "irreducibility": self.irreducibility,
        }


def points_on_lines(lines, per_line: int, rng):
    pts = []
    for a, b in lines:
        ts = rng.normal(size=per_line) + 1j * rng.normal(size=per_line)
        for t in ts:
            p = a + t * b
            pts.append(p / np.linalg.norm(p))
    return np.array(pts)


def fit_surface(points, degree: int, tol: float):
    """Nullspace of the scaled monomial matrix; rows are unscaled coefficient vectors."""
    M = monomial_matrix(points, degree, scaled=True)
    N = numeric_nullspace(M, tol)
    w = np.sqrt(multinomial_weights(4, degree))
    return N * w[None, :]


def _normalize(c):
    return c / c[int(np.argmax(np.abs(c)))]


def fit_scroll(lines, pts_per_line: int = 6, seed: int = 0, tol: float = 1e-8,
               validation_lines=None, validation_points: int = 100, degree: int = 8) -> OcticSurface:
    """Fit the degree-8 surface through the given lines (pairs of spanning points).

    Validation uses ``validation_points`` fresh points, on ``validation_lines``
    when given and otherwise on the fitting lines at fresh parameters.
    """
    lines = list(lines)
    if len(lines) < 40:
        raise ValueError("need at least 40 lines")
    if pts_per_line < 5:
        raise ValueError("need at least 5 points per line")
    rng = np.random.default_rng(seed)
    pts = points_on_lines(lines, pts_per_line, rng)
    N = fit_surface(pts, degree, tol)
    if len(N) == 0:
        raise FitError("nullity 0: no surface of this degree through the samples "
                       "(insufficient or inconsistent samples)", 0)
    if len(N) > 1:
        diag = {}
        for d in (2, 4):
            diag[d] = int(len(fit_surface(pts, d, tol)))
        raise FitError(f"nullity {len(N)} at degree {degree}: scroll degree is lower "
                       f"(nullity at degree 2: {diag[2]}, degree 4: {diag[4]})", len(N), diag)
    c = _normalize(N[0])
    F = NumPoly.from_dense(4, degree, c)
    built = float(relative_residual(F, pts).max())
    vlines = lines if validation_lines is None else list(validation_lines)
    per = max(1, -(-validation_points // len(vlines)))
    vpts = points_on_lines(vlines, per, rng)[:validation_points]
    val = float(relative_residual(F, vpts).max())
    return OcticSurface(c, degree, 1, built, val, len(pts), seed, tol, "unchecked", F)


# ----------------------------------------------------------------------------
# multiplicity along curves

@dataclass
class MultiplicityResult:
    order: int
    passed: bool
    table: Dict[int, float]          # order -> worst relative residual over samples and partials
    per_sample: List[Dict[int, float]]
    tolerance: float = MULTIPLICITY_TOL

    @property
    def profile(self) -> int:
        """1 + the largest k such that all orders 0..k pass."""
        m = 0
        for k in sorted(self.table):
            if self.table[k] < self.tolerance:
                m = k + 1
            else:
                break
        return m

    def to_json(self) -> dict:
        return {"order": self.order, "passed": self.passed, "tolerance": self.tolerance,
                "worst_residual_by_order": {str(k): float(v) for k, v in sorted(self.table.items())}}


def multiplicity_along_curve(F, samples, k: int, tol: float = MULTIPLICITY_TOL) -> MultiplicityResult:
    """Check that all partials of F of order <= k vanish at the samples.

    Each partial is measured relative to its own coefficient scale.
    """
    poly = F.poly if isinstance(F, OcticSurface) else F
    samples = np.asarray(samples, dtype=complex)
    per = [dict() for _ in samples]
    table = {}
    for order in range(k + 1):
        ders = [poly] if order == 0 else list(poly.derivatives_of_order(order).values())
        worst = np.zeros(len(samples))
        for d in ders:
            if not len(d.c):
                continue
            worst = np.maximum(worst, relative_residual(d, samples))
        for i, r in enumerate(worst):
            per[i][order] = float(r)
        table[order] = float(worst.max()) if len(worst) else 0.0
    passed = all(v < tol for v in table.values())
    return MultiplicityResult(k, passed, table, per, tol)
