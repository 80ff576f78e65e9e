"""Special scrolls: Veronese containment, the twisted-cubic case, trisecant scrolls."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy as np

from ..curvelab import PlaneQuartic, quadrics_through_bicanonical, veronese_pullback
from ..exactcore import RationalMatrix, monomials
from ..numcore import (NumPoly, cluster_with_tolerance, numeric_nullspace, relative_residual,
                       univariate_roots)
from ..numcore.intersect import intersect_plane_curves
from ..numcore.poly import monomial_matrix, multinomial_weights
from .double import double_curve_partners, plane_basis
from .frame import QuadricForm6
from .lines import LineMap

QUADRIC_EXPONENTS = monomials(4, 2)
CONIC_EXPONENTS = np.array(monomials(3, 2), dtype=np.int64)


class SeedError(RuntimeError):
    pass


def detect_veronese_containment(G) -> bool:
    """Exact test: the Veronese surface lies on G iff the pullback of G vanishes."""
    if isinstance(G, QuadricForm6):
        if G.exact is None:
            raise TypeError("exact containment test needs a rational Gram matrix")
        G = G.exact
    if not isinstance(G, RationalMatrix):
        raise TypeError("exact containment test needs a rational Gram matrix")
    return veronese_pullback(G).is_zero()


def _combination(forms, rng, bound):
    while True:
        coef = [Fraction(int(c)) for c in rng.integers(-bound, bound + 1, size=len(forms))]
        if coef[-1] != 0 and any(coef[:-1]):
            break
    G = forms[0].scale(coef[0])
    for c, F in zip(coef[1:], forms[1:]):
        G = G + F.scale(c)
    return G, coef


def _draw_rank6(forms, seed, bound, max_tries):
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        G, coef = _combination(forms, rng, bound)
        if G.rank() == 6:
            return QuadricForm6.from_rational(G), coef
    raise SeedError(f"no rank-6 combination in {max_tries} draws (seed {seed})")


def random_bicanonical_quadric(f: PlaneQuartic, seed: int, bound: int = 5,
                               max_tries: int = 50) -> QuadricForm6:
    """Seeded rational rank-6 quadric through v(C), with nonzero special coefficient."""
    basis = quadrics_through_bicanonical(f)
    forms = basis.veronese + [basis.special]
    return _draw_rank6(forms, seed, bound, max_tries)[0]


def construct_case_b(f: PlaneQuartic, seed: int, bound: int = 5, max_tries: int = 50) -> QuadricForm6:
    """Seeded rational rank-6 combination of the six Veronese-ideal quadrics."""
    forms = quadrics_through_bicanonical(f).veronese
    return _draw_rank6(forms, seed, bound, max_tries)[0]


# ----------------------------------------------------------------------------
# quadrics of P^3 through a sampled curve

def fit_quadrics(points, tol: float = 1e-8):
    """Unscaled coefficient rows of the quadrics through the points."""
    N = numeric_nullspace(monomial_matrix(np.asarray(points), 2), tol)
    return N * np.sqrt(multinomial_weights(4, 2))[None, :]


def quadric_matrix(c) -> np.ndarray:
    """Symmetric 4x4 matrix of the quadric with coefficient vector c."""
    M = np.zeros((4, 4), dtype=complex)
    for coeff, e in zip(c, QUADRIC_EXPONENTS):
        idx = [i for i in range(4) for _ in range(e[i])]
        i, j = idx
        if i == j:
            M[i, i] += coeff
        else:
            M[i, j] += coeff / 2
            M[j, i] += coeff / 2
    return M


def _conic(M) -> NumPoly:
    c = [M[0, 0], 2 * M[0, 1], 2 * M[0, 2], M[1, 1], 2 * M[1, 2], M[2, 2]]
    return NumPoly(CONIC_EXPONENTS, np.array(c), 3)


def common_points_on_line(mats, a, b, tol: float = 1e-6):
    """Distinct points of the line ab on every quadric (parameter t, p = a + t b)."""
    def restrict(M):
        return np.array([b @ M @ b, 2 * (a @ M @ b), a @ M @ a])
    rng = np.random.default_rng(0)
    w = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
    mix = sum(wi * M for wi, M in zip(w, mats))
    out = []
    for t, _ in univariate_roots(restrict(mix)):
        p = a + t * b
        p = p / np.linalg.norm(p)
        r = max(abs(p @ M @ p) / (np.abs(p) @ np.abs(M) @ np.abs(p)) for M in mats)
        if r < tol:
            out.append(p)
    return cluster_with_tolerance(out, 1e-6).representatives if out else []


def plane_count_of_quadric_curve(mats, h, rng, tol: float = 1e-8, tol_cluster: float = 1e-6):
    """Points of the curve cut by the quadrics on the plane h."""
    B = plane_basis(h)
    conics = [_conic(B @ M @ B.T) for M in mats]
    cands = []
    for u in intersect_plane_curves(conics[0], conics[1], rng):
        if all(float(relative_residual(c, u)) < tol for c in conics[2:]):
            cands.append(B.T @ u)
    return cluster_with_tolerance(cands, tol_cluster).count if cands else 0


@dataclass
class CubicCurveResult:
    samples: np.ndarray
    clusters_per_line: List[List[int]]
    quadrics: np.ndarray
    nullity: int
    fit_residual: float
    plane_counts: List[int]
    bisecant_counts: List[int]
    tangency_skipped: int = 0
    notes: List[str] = field(default_factory=list)


def singular_curve_case_b(lm: LineMap, n_lines: int = 30, seed: int = 0,
                          tol_nullspace: float = 1e-8, tol_cluster: float = 1e-6,
                          n_bisecant: int = 10, n_planes: int = 3) -> CubicCurveResult:
    """Sample the singular curve of a scroll whose quadric contains the Veronese.

    Each line meets the curve where its partners' meeting points collapse
    into clusters; the cluster points are fitted by quadrics of P^3.
    """
    rng = np.random.default_rng(seed)
    samples, per_line, skipped = [], [], 0
    for x in lm.points[:n_lines]:
        ps = double_curve_partners(lm, x, rng)
        if ps.tangency:
            skipped += 1
            continue
        cl = cluster_with_tolerance(ps.points, tol_cluster)
        per_line.append(sorted(cl.multiplicities))
        samples += list(cl.representatives)
    samples = np.array(samples)
    Q = fit_quadrics(samples, tol_nullspace)
    mats = [quadric_matrix(c) for c in Q]
    res = CubicCurveResult(samples, per_line, Q, len(Q), 0.0, [], [], skipped)
    if not len(Q):
        res.notes.append("no quadric through the singular samples")
        return res
    res.fit_residual = max(float(abs(p @ M @ p) / (np.abs(p) @ np.abs(M) @ np.abs(p)))
                           for p in samples for M in mats)
    for i in range(n_lines, n_lines + n_bisecant):
        a, b = lm.line(i % len(lm))
        res.bisecant_counts.append(len(common_points_on_line(mats, a, b)))
    for _ in range(n_planes):
        h = rng.normal(size=4) + 1j * rng.normal(size=4)
        res.plane_counts.append(plane_count_of_quadric_curve(mats, h, rng))
    return res


# ----------------------------------------------------------------------------
# the scroll of trisecant lines of Gamma

@dataclass
class TrisecantScroll:
    gamma: object
    lines: list                   # TrisecantLine
    base_indices: List[int]
    validation: list              # TrisecantLine from further base points
    degenerate: List[str]
    seed: int
    counts: List[int] = field(default_factory=list)   # lines found per base point

    def spanning(self, which="lines"):
        return [t.spanning for t in getattr(self, which)]


def build_trisecant_scroll(gamma, n_points: int = 20, n_validation: int = 4,
                           seed: int = 0) -> TrisecantScroll:
    """Trisecants through the first ``n_points`` samples of Gamma (three each)."""
    from ..netlab import trisecants_through_point
    lines, val, notes, used, counts = [], [], [], [], []
    for i in range(n_points + n_validation):
        r = trisecants_through_point(gamma, i, seed + i)
        counts.append(len(r.lines))
        if r.status != "ok":
            notes.append(f"sample {i}: {r.note}")
        if i < n_points:
            used.append(i)
            lines += r.lines
        else:
            val += r.lines
    return TrisecantScroll(gamma, lines, used, val, notes, seed, counts)
