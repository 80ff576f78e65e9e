"""The plane quartic C, its points, and its bicanonical model in P^5.

The bicanonical model is the image of C under the quadratic Veronese map
``x -> (x0^2, x0 x1, x0 x2, x1^2, x1 x2, x2^2)``; quadrics of P^5 are 6x6
symmetric Gram matrices ``G`` with ``q(z) = z^T G z``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .exactcore import (DegenerateInputError, MultiPoly, RationalMatrix, as_rational,
                        binary_form_to_upoly, exact_nullspace, monomials, random_rational_matrix,
                        sylvester_resultant, upoly_gcd, upoly_squarefree, upoly_trim)
from .numcore import NumPoly, normalize_projective, univariate_roots
from .numcore.cluster import projective_distance
from .numcore.poly import relative_residual

VERONESE_MONOMIALS = monomials(3, 2)
QUADRIC_MONOMIALS = monomials(6, 2)
QUARTIC_MONOMIALS = monomials(3, 4)

SMOOTH = "certified-smooth"
SINGULAR = "singular"
UNKNOWN = "unknown"


class QuarticInputError(ValueError):
    pass


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SmoothnessCertificate:
    status: str
    witness: Optional[tuple] = None
    exact_witness: bool = False
    attempts: int = 0
    detail: str = ""


@dataclass
class PlaneQuartic:
    form: MultiPoly
    certificate: Optional[SmoothnessCertificate] = None

    def __post_init__(self):
        f = self.form
        if f.nvars != 3 or f.total_degree() != 4 or not f.is_homogeneous():
            raise QuarticInputError("expected a homogeneous quartic form in 3 variables")

    @property
    def numeric(self) -> NumPoly:
        return NumPoly.from_multipoly(self.form)

    def is_smooth(self) -> bool:
        return self.certificate is not None and self.certificate.status == SMOOTH

    def to_json(self) -> dict:
        return {"variables": 3, "terms": self.form.to_json()}

    @classmethod
    def from_json(cls, data) -> "PlaneQuartic":
        if data.get("variables") != 3:
            raise QuarticInputError('quartic file must declare "variables": 3')
        return cls(MultiPoly.from_json(3, data["terms"]))

    @classmethod
    def load(cls, path) -> "PlaneQuartic":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def fermat_quartic() -> PlaneQuartic:
    x, y, z = (MultiPoly.var(i, 3) for i in range(3))
    return PlaneQuartic(x ** 4 + y ** 4 + z ** 4)


def klein_quartic() -> PlaneQuartic:
    x, y, z = (MultiPoly.var(i, 3) for i in range(3))
    return PlaneQuartic(x ** 3 * y + y ** 3 * z + z ** 3 * x)


def random_quartic(seed: int, bound: int = 3) -> PlaneQuartic:
    """Random integer quartic, redrawn until certified smooth."""
    rng = np.random.default_rng(seed)
    while True:
        coeffs = [Fraction(int(c)) for c in rng.integers(-bound, bound + 1, size=15)]
        f = MultiPoly.from_coefficient_vector(3, 4, coeffs)
        if f.total_degree() != 4:
            continue
        q = PlaneQuartic(f)
        q.certificate = check_smooth_quartic(q, seed=seed)
        if q.is_smooth():
            return q


# ----------------------------------------------------------------------------
# smoothness

def _univariate_on_line(p: MultiPoly, P, Q) -> List[Fraction]:
    """Exact coefficients (constant first) of t -> p(P + t Q)."""
    t = MultiPoly.var(0, 1)
    imgs = [MultiPoly.constant(1, as_rational(a)) + t * as_rational(b) for a, b in zip(P, Q)]
    g = p.substitute(imgs)
    d = g.total_degree()
    return upoly_trim([g.coeff((k,)) for k in range(max(d, 0) + 1)])


def _common_component_witness(partials, rng):
    """Common zero of the partials when they share a curve component."""
    for _ in range(10):
        P = [int(v) for v in rng.integers(-7, 8, size=3)]
        Q = [int(v) for v in rng.integers(-7, 8, size=3)]
        polys = [_univariate_on_line(g, P, Q) for g in partials if not g.is_zero()]
        if not polys:
            return (Fraction(1), Fraction(0), Fraction(0)), True
        h = polys[0]
        for g in polys[1:]:
            h = upoly_gcd(h, g)
        h = upoly_squarefree(h)
        if len(h) == 2:
            t = -h[0] / h[1]
            return tuple(as_rational(a) + t * as_rational(b) for a, b in zip(P, Q)), True
        if len(h) > 2:
            r = univariate_roots([complex(c) for c in h[::-1]])[0][0]
            return tuple(complex(a) + r * complex(b) for a, b in zip(P, Q)), False
    return None, False


def check_smooth_quartic(f: PlaneQuartic | MultiPoly, seed: int = 0,
                         attempts: int = 5) -> SmoothnessCertificate:
    """Decide exactly whether the three partials of f have a common zero.

    Two resultants eliminating the last coordinate (after a random rational
    change of coordinates) are binary forms; the partials share a projective
    zero only if those forms share a root.  A non-trivial gcd is either a true
    singular point (a witness is returned) or an artefact of the projection,
    in which case another coordinate change is tried.
    """
    form = f.form if isinstance(f, PlaneQuartic) else f
    if form.nvars != 3 or form.total_degree() != 4 or not form.is_homogeneous():
        raise QuarticInputError("expected a homogeneous quartic form in 3 variables")
    rng = np.random.default_rng(seed)
    orig_partials = [form.diff(i) for i in range(3)]
    for attempt in range(1, attempts + 1):
        S = random_rational_matrix(rng, 3)
        g = form.linear_change(S.to_rows())
        partials = [g.diff(i) for i in range(3)]
        if any(p.is_zero() for p in partials) or any(p.coeff((0, 0, 3)) == 0 for p in partials):
            w, exact = _common_component_witness(orig_partials, rng)
            if any(p.is_zero() for p in partials) and w is not None:
                return SmoothnessCertificate(SINGULAR, w, exact, attempt, "vanishing partial")
            continue
        try:
            r1 = sylvester_resultant(partials[0], partials[1], 2)
            r2 = sylvester_resultant(partials[0], partials[2], 2)
        except DegenerateInputError:
            continue
        if r1.is_zero() or r2.is_zero():
            w, exact = _common_component_witness(orig_partials, rng)
            return SmoothnessCertificate(SINGULAR, w, exact, attempt,
                                         "partials share a common component")
        u1, inf1 = binary_form_to_upoly(r1, 0, 1)
        u2, inf2 = binary_form_to_upoly(r2, 0, 1)
        h = upoly_squarefree(upoly_gcd(u1, u2))
        if len(h) <= 1 and not (inf1 and inf2):
            return SmoothnessCertificate(SMOOTH, None, False, attempt,
                                         "resultant gcd is constant")
        w = _singular_witness(form, S, partials, h, inf1 and inf2)
        if w is not None:
            point, exact = w
            return SmoothnessCertificate(SINGULAR, point, exact, attempt,
                                         "common zero of the partials")
    return SmoothnessCertificate(UNKNOWN, None, False, attempts,
                                 "resultant gcd stayed non-trivial without a witness")


def _singular_witness(form, S, partials, h, at_infinity):
    candidates = []
    if at_infinity:
        candidates.append((Fraction(1), Fraction(0)))
    if len(h) == 2:
        candidates.append((-h[0] / h[1], Fraction(1)))
    elif len(h) > 2:
        for r, _ in univariate_roots([complex(c) for c in h[::-1]]):
            candidates.append((r, 1.0))
    orig = [form.diff(i) for i in range(3)]
    Srows = S.to_rows()
    for a, b in candidates:
        exact = isinstance(a, Fraction)
        if exact:
            polys = [_univariate_on_line(p, (a, b, 0), (0, 0, 1)) for p in partials]
            gg = polys[0]
            for p in polys[1:]:
                gg = upoly_gcd(gg, p)
            gg = upoly_squarefree(gg)
            if len(gg) == 2:
                y = (a, b, -gg[0] / gg[1])
                x = tuple(sum((Srows[i][j] * y[j] for j in range(3)), Fraction(0)) for i in range(3))
                if all(p.evaluate(x) == 0 for p in orig):
                    return x, True
            continue
        num = [NumPoly.from_multipoly(p) for p in partials]
        base = np.array([a, b, 0], dtype=complex)
        for t, _ in univariate_roots(num[0].restrict_to_line(base, np.array([0, 0, 1.0]))):
            y = base + t * np.array([0, 0, 1.0])
            if max(relative_residual(p, y) for p in num) < 1e-8:
                x = np.array(Srows, dtype=float) @ y
                guess = _rational_guess(x, orig)
                if guess is not None:
                    return guess, True
                return tuple(complex(v) for v in x), False
    return None


def _rational_guess(x, partials):
    x = np.asarray(x, dtype=complex)
    x = x / x[np.argmax(np.abs(x))]
    if np.max(np.abs(x.imag)) > 1e-6:
        return None
    q = tuple(Fraction(float(v.real)).limit_denominator(1000) for v in x)
    if all(p.evaluate(q) == 0 for p in partials):
        return q
    return None


# ----------------------------------------------------------------------------
# sampling

@dataclass
class CurveSample:
    points: np.ndarray
    seed: int
    residuals: np.ndarray

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "points": [[[float(z.real), float(z.imag)] for z in p] for p in self.points],
            "residuals": [float(r) for r in self.residuals],
        }


def points_on_line(f: PlaneQuartic, P, Q):
    """The four points of C on the line P + tQ, with relative residuals."""
    F = f.numeric
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    roots = univariate_roots(F.restrict_to_line(P, Q))
    pts = [P + t * Q for t, _ in roots]
    return [(normalize_projective(p), float(relative_residual(F, p))) for p in pts]


def _polish_on_curve(F: NumPoly, p, direction, iters=4):
    # Newton along a fixed line direction keeps the point on the sampling line
    for _ in range(iters):
        val = F(p)
        der = F.jacobian_row(p) @ direction
        if der == 0:
            break
        p = p - (val / der) * direction
    return p


def sample_curve_points(f: PlaneQuartic, n: int, seed: int, residual_tol: float = 1e-10,
                        distinct_tol: float = 1e-8) -> CurveSample:
    """n points of C, one root per random rational line, round-robin over the four roots."""
    if n < 1:
        raise ValueError("need at least one sample point")
    rng = np.random.default_rng(seed)
    F = f.numeric
    pts, res = [], []
    failures = 0
    k = 0
    while len(pts) < n:
        P = rng.integers(-9, 10, size=3).astype(float)
        Q = rng.integers(-9, 10, size=3).astype(float)
        if np.linalg.norm(np.cross(P, Q)) == 0:
            continue
        roots = sorted(univariate_roots(F.restrict_to_line(P.astype(complex), Q.astype(complex))),
                       key=lambda rt: (round(rt[0].real, 9), round(rt[0].imag, 9)))
        if len(roots) != 4:
            failures += 1
            continue
        t = roots[k % 4][0]
        p = _polish_on_curve(F, P + t * Q, Q.astype(complex))
        p = normalize_projective(p)
        r = float(relative_residual(F, p))
        if r >= residual_tol or any(projective_distance(p, q) < distinct_tol for q in pts):
            failures += 1
            if failures > 20 + 5 * n:
                raise SamplingError("could not draw well-conditioned curve points")
            continue
        pts.append(p)
        res.append(r)
        k += 1
    return CurveSample(np.array(pts), seed, np.array(res))


# ----------------------------------------------------------------------------
# Veronese lift and quadrics through the bicanonical curve

def veronese_lift(p):
    """(x0^2, x0x1, x0x2, x1^2, x1x2, x2^2), projectively normalized."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (3,) or not np.any(p):
        raise ValueError("veronese_lift needs a nonzero point of P^2")
    v = np.array([p[0] * p[0], p[0] * p[1], p[0] * p[2], p[1] * p[1], p[1] * p[2], p[2] * p[2]])
    return normalize_projective(v)


def veronese_lift_raw(P):
    """Unnormalized lifts of a batch of points (k x 3) -> (k x 6)."""
    P = np.asarray(P, dtype=complex)
    return np.stack([P[:, 0] ** 2, P[:, 0] * P[:, 1], P[:, 0] * P[:, 2],
                     P[:, 1] ** 2, P[:, 1] * P[:, 2], P[:, 2] ** 2], axis=1)


def veronese_ideal_gram() -> List[RationalMatrix]:
    """The six 2x2 minors of the symmetric matrix of Veronese coordinates."""
    # symmetric matrix [[z0, z1, z2], [z1, z3, z4], [z2, z4, z5]]
    S = [[0, 1, 2], [1, 3, 4], [2, 4, 5]]
    out = []
    for (i, j), (k, l) in [((0, 1), (0, 1)), ((0, 1), (0, 2)), ((0, 1), (1, 2)),
                           ((0, 2), (0, 2)), ((0, 2), (1, 2)), ((1, 2), (1, 2))]:
        G = [[Fraction(0)] * 6 for _ in range(6)]
        # minor = S[i][k] S[j][l] - S[i][l] S[j][k]
        for sign, (a, b) in ((1, (S[i][k], S[j][l])), (-1, (S[i][l], S[j][k]))):
            if a == b:
                G[a][a] += sign
            else:
                G[a][b] += Fraction(sign, 2)
                G[b][a] += Fraction(sign, 2)
        out.append(RationalMatrix.from_rows(G))
    return out


def gram_to_coefficients(G: RationalMatrix) -> List[Fraction]:
    return [G[i, i] if i == j else 2 * G[i, j] for (i, j) in _quadric_index_pairs()]


def coefficients_to_gram(c: Sequence) -> RationalMatrix:
    G = [[Fraction(0)] * 6 for _ in range(6)]
    for (i, j), v in zip(_quadric_index_pairs(), c):
        v = as_rational(v)
        if i == j:
            G[i][i] = v
        else:
            G[i][j] = v / 2
            G[j][i] = v / 2
    return RationalMatrix.from_rows(G)


def _quadric_index_pairs():
    out = []
    for e in QUADRIC_MONOMIALS:
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        out.append((idx[0], idx[1]))
    return out


def pullback_matrix() -> RationalMatrix:
    """15 x 21 matrix of the Veronese pullback (quadric coefficients -> quartic)."""
    v = [MultiPoly(3, {e: Fraction(1)}) for e in VERONESE_MONOMIALS]
    cols = []
    for i, j in _quadric_index_pairs():
        cols.append((v[i] * v[j]).coefficient_vector(4))
    return RationalMatrix(15, 21, [cols[c][r] for r in range(15) for c in range(21)])


def veronese_pullback(G: RationalMatrix) -> MultiPoly:
    """The plane quartic q(v(x)) for a quadric with Gram matrix G."""
    v = [MultiPoly(3, {e: Fraction(1)}) for e in VERONESE_MONOMIALS]
    out = MultiPoly.zero(3)
    for i in range(6):
        for j in range(6):
            if G[i, j] != 0:
                out = out + v[i] * v[j] * G[i, j]
    return out


@dataclass
class QuadricBasis:
    forms: List[RationalMatrix]
    veronese_flags: List[bool]
    quartic: PlaneQuartic
    pullback_rank: int = 15
    notes: List[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.forms)

    @property
    def veronese(self) -> List[RationalMatrix]:
        return [G for G, flag in zip(self.forms, self.veronese_flags) if flag]

    @property
    def special(self) -> RationalMatrix:
        return next(G for G, flag in zip(self.forms, self.veronese_flags) if not flag)


def quadrics_through_bicanonical(f: PlaneQuartic) -> QuadricBasis:
    """Exact basis of the 7-dimensional space of quadrics through v(C).

    A quadric vanishes on v(C) iff its pullback is a rational multiple of f.
    The pullback kernel (the Veronese ideal, six quadrics) comes first in
    reduced-echelon form; the seventh element pulls back to f itself and is
    reduced against the first six on their free coordinates.
    """
    A = pullback_matrix()
    kernel = exact_nullspace(A)
    rank = 21 - len(kernel)
    target = f.form.coefficient_vector(4)
    aug = RationalMatrix(15, 22, [x for r in range(15) for x in A.row(r) + [target[r]]])
    R, pivots = aug.rref()
    if 21 in pivots:
        raise ValueError("f is not in the image of the pullback map")
    particular = [Fraction(0)] * 21
    for r, pc in enumerate(pivots):
        particular[pc] = R[r][21]
    free = [j for j in range(21) if j not in pivots]
    for j, vec in zip(free, kernel):
        c = particular[j]
        if c:
            particular = [a - c * b for a, b in zip(particular, vec)]
    forms = [coefficients_to_gram(v) for v in kernel] + [coefficients_to_gram(particular)]
    flags = [True] * len(kernel) + [False]
    return QuadricBasis(forms, flags, f, pullback_rank=rank)


def in_bicanonical_span(G: RationalMatrix, f: PlaneQuartic) -> bool:
    """Exact test that v(C) lies on the quadric G (pullback is a multiple of f)."""
    pb = veronese_pullback(G)
    if pb.is_zero():
        return True
    ratio = None
    ft = f.form.terms
    if set(pb.terms) - set(ft):
        return False
    for e, c in ft.items():
        r = pb.coeff(e) / c
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return True


def pullback_residual(G, f: PlaneQuartic, sample: CurveSample) -> float:
    """Max relative residual of q_G on lifted sample points (complex G allowed)."""
    G = np.asarray(G, dtype=complex)
    V = veronese_lift_raw(sample.points)
    vals = np.abs(np.einsum("ki,ij,kj->k", V, G, V))
    scale = np.einsum("ki,ij,kj->k", np.abs(V), np.abs(G), np.abs(V))
    return float(np.max(vals / np.maximum(scale, 1e-300)))


def gram_to_numpy(G: RationalMatrix) -> np.ndarray:
    return np.array([[float(G[i, j]) for j in range(G.cols)] for i in range(G.rows)], dtype=complex)
