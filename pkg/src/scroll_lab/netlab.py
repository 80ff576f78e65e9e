"""Nets of quadric surfaces in P^3.

A net is spanned by three symmetric 4x4 matrices A, B, C.  Its singular
members are parametrized by the discriminant quartic det(x0 A + x1 B + x2 C),
and their vertices trace a space sextic Gamma.  Through a general point of
Gamma pass three trisecant lines of Gamma.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .curvelab import SMOOTH, PlaneQuartic, check_smooth_quartic, sample_curve_points
from .exactcore import (MultiPoly, RationalMatrix, adjugate_column, as_rational,
                        binary_form_to_upoly, matrix_of_linear_forms, poly_det,
                        random_rational_matrix, sylvester_resultant, upoly_gcd,
                        upoly_squarefree)
from .numcore import (NumPoly, cluster_with_tolerance, numeric_nullspace, projective_distance,
                      relative_residual, univariate_roots)
from .numcore.intersect import intersect_plane_curves
from .numcore.poly import monomial_matrix, multinomial_weights

GENERAL = "general"
DEGENERATE = "degenerate"


class NetInputError(ValueError):
    pass


class CorankError(ValueError):
    """M(x) has rank <= 2, so the net is not general."""


class FitError(RuntimeError):
    pass


def _check_matrix(M: RationalMatrix, name: str):
    if M.rows != 4 or M.cols != 4:
        raise NetInputError(f"{name} must be 4x4")
    if not M.is_symmetric():
        raise NetInputError(f"{name} must be symmetric")


@dataclass
class NetOfQuadrics:
    A: RationalMatrix
    B: RationalMatrix
    C: RationalMatrix
    status: str = "unchecked"
    reason: str = ""
    quartic: Optional[PlaneQuartic] = field(default=None, repr=False)

    def __post_init__(self):
        for name, M in zip("ABC", self.matrices):
            _check_matrix(M, name)
        flat = RationalMatrix(3, 16, [x for M in self.matrices for row in M.to_rows() for x in row])
        if flat.rank() < 3:
            raise NetInputError("the three matrices are linearly dependent")
        self._numeric = np.array([[[float(M[i, j]) for j in range(4)] for i in range(4)]
                                  for M in self.matrices], dtype=complex)
        self._adj = None

    @property
    def matrices(self):
        return (self.A, self.B, self.C)

    def pencil(self, x):
        """Numeric M(x) = x0 A + x1 B + x2 C."""
        return np.tensordot(np.asarray(x, dtype=complex), self._numeric, axes=1)

    def exact_pencil(self, x) -> RationalMatrix:
        x = [as_rational(v) for v in x]
        out = self.A.scale(x[0]) + self.B.scale(x[1]) + self.C.scale(x[2])
        return out

    def linear_form_matrix(self):
        return matrix_of_linear_forms(self.matrices)

    def adjugate_columns(self) -> List[List[MultiPoly]]:
        """The four adjugate columns as exact cubic forms (cached)."""
        if self._adj is None:
            M = self.linear_form_matrix()
            self._adj = [adjugate_column(M, j) for j in range(4)]
        return self._adj

    def to_json(self) -> dict:
        return {k: M.to_json() for k, M in zip("ABC", self.matrices)}

    @classmethod
    def from_json(cls, data) -> "NetOfQuadrics":
        try:
            mats = [RationalMatrix.from_json(data[k]) for k in "ABC"]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise NetInputError(f"malformed net: {exc}") from exc
        return cls(*mats)

    @classmethod
    def load(cls, path) -> "NetOfQuadrics":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def random_net(seed: int, bound: int = 3) -> NetOfQuadrics:
    """Random integer symmetric net, redrawn until its discriminant is smooth."""
    rng = np.random.default_rng(seed)
    while True:
        mats = []
        for _ in range(3):
            U = rng.integers(-bound, bound + 1, size=(4, 4))
            S = np.triu(U) + np.triu(U, 1).T
            mats.append(RationalMatrix.from_rows(S.tolist()))
        try:
            net = NetOfQuadrics(*mats)
        except NetInputError:
            continue
        discriminant_quartic(net, seed)
        if net.status == GENERAL:
            return net


def discriminant_quartic(net: NetOfQuadrics, seed: int = 0) -> Optional[PlaneQuartic]:
    """det(x0 A + x1 B + x2 C), certified; degeneracy is recorded on the net."""
    det = poly_det(net.linear_form_matrix())
    if det.is_zero() or det.total_degree() != 4:
        net.status = DEGENERATE
        net.reason = "vanishing discriminant"
        net.quartic = None
        return None
    q = PlaneQuartic(det)
    q.certificate = check_smooth_quartic(q, seed=seed)
    net.quartic = q
    if q.certificate.status == SMOOTH:
        net.status = GENERAL
        net.reason = ""
    else:
        net.status = DEGENERATE
        net.reason = ("reducible discriminant" if _has_linear_factor(det, seed)
                      else f"discriminant is {q.certificate.status}")
    return q


def _has_linear_factor(f: MultiPoly, seed: int) -> bool:
    """Whether f has a linear factor.

    A linear factor l meets a random rational line in a rational point, which
    is a root of the restriction of f.  At a smooth point of that component
    the gradient of f is proportional to l, so the tangent line is tried as
    an exact divisor.
    """
    rng = np.random.default_rng(seed)
    for _ in range(3):
        P = [int(v) for v in rng.integers(-5, 6, size=3)]
        Q = [int(v) for v in rng.integers(-5, 6, size=3)]
        t = MultiPoly.var(0, 1)
        g = f.substitute([MultiPoly.constant(1, a) + t * b for a, b in zip(P, Q)])
        coeffs = [g.coeff((k,)) for k in range(5)]
        for r in _rational_roots(coeffs):
            pt = [Fraction(a) + r * b for a, b in zip(P, Q)]
            for l in _candidate_lines(pt, f):
                try:
                    f.exact_divide(l)
                    return True
                except ArithmeticError:
                    pass
    return False


def _rational_roots(coeffs):
    out = []
    c = [as_rational(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        return out
    for r, _ in univariate_roots([complex(v) for v in c[::-1]]):
        if abs(r.imag) < 1e-9:
            q = Fraction(r.real).limit_denominator(10000)
            if sum(v * q ** k for k, v in enumerate(c)) == 0:
                out.append(q)
    return out


def _candidate_lines(pt, f):
    # the tangent line to f at pt is the only linear factor through a smooth point
    grad = [f.diff(i).evaluate(pt) for i in range(3)]
    if any(grad):
        yield MultiPoly.linear_form(grad)


# ----------------------------------------------------------------------------
# the singular-point map x -> kappa(x)

def _numeric_adjugate(M):
    n = M.shape[0]
    adj = np.zeros_like(M)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * np.linalg.det(minor)
    return adj


def singular_point_map(net: NetOfQuadrics, x, check: bool = True):
    """Vertex of the singular quadric M(x): the largest adjugate column.

    Rational x gives an exact answer (a tuple of Fractions).
    """
    exact = all(isinstance(v, (int, Fraction)) for v in x)
    if net.quartic is None:
        discriminant_quartic(net)
    if net.quartic is None:
        raise CorankError("net has a vanishing discriminant")
    if exact:
        if net.quartic.form.evaluate([as_rational(v) for v in x]) != 0:
            raise ValueError("x is not on the discriminant")
        M = net.exact_pencil(x)
        rows = M.to_rows()
        mats = [[MultiPoly.constant(1, v) for v in row] for row in rows]
        for col in range(4):
            kappa = [p.evaluate([0]) if not p.is_zero() else Fraction(0)
                     for p in adjugate_column(mats, col)]
            if any(kappa):
                return tuple(kappa)
        raise CorankError("M(x) has rank at most 2")
    x = np.asarray(x, dtype=complex)
    if check:
        r = float(relative_residual(net.quartic.numeric, x))
        if r > 1e-10:
            raise ValueError(f"x is not on the discriminant (residual {r:.1e})")
    M = net.pencil(x)
    adj = _numeric_adjugate(M)
    norms = np.linalg.norm(adj, axis=0)
    scale = np.linalg.norm(M) ** 3
    if norms.max() <= 1e-8 * scale:
        raise CorankError("M(x) has rank at most 2")
    k = adj[:, int(np.argmax(norms))]
    return k / np.linalg.norm(k)


def kernel_residual(net: NetOfQuadrics, x, kappa) -> float:
    M = net.pencil(x)
    k = np.asarray(kappa, dtype=complex)
    return float(np.linalg.norm(M @ k) / (np.linalg.norm(M) * np.linalg.norm(k)))


@dataclass
class GammaCurve:
    owner: NetOfQuadrics
    params: np.ndarray       # (n, 3) points of C
    points: np.ndarray       # (n, 4) points of Gamma
    residuals: np.ndarray
    exact: List[bool]
    seed: int

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        def cx(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return {"seed": self.seed,
                "samples": [{"x": cx(x), "kappa": cx(k), "residual": float(r)}
                            for x, k, r in zip(self.params, self.points, self.residuals)]}


def gamma_samples(net: NetOfQuadrics, n: int, seed: int) -> GammaCurve:
    if net.quartic is None:
        discriminant_quartic(net, seed)
    if net.status != GENERAL:
        raise CorankError(f"net is {net.status}: {net.reason}")
    sample = sample_curve_points(net.quartic, n, seed)
    pts, res = [], []
    for x in sample.points:
        k = singular_point_map(net, x)
        r = kernel_residual(net, x, k)
        if r > 1e-9:
            raise CorankError(f"kernel residual {r:.1e} exceeds 1e-9")
        pts.append(k)
        res.append(r)
    return GammaCurve(net, sample.points, np.array(pts), np.array(res), [False] * n, seed)


# ----------------------------------------------------------------------------
# degree of Gamma

@dataclass
class GammaSectionResult:
    count: Optional[int]
    plane: tuple
    exact_degree: int
    points: List[np.ndarray]
    params: List[np.ndarray]
    retries: int
    residual: float
    note: str = ""


def _plane_cubic(net: NetOfQuadrics, h, col: int) -> MultiPoly:
    adj = net.adjugate_columns()[col]
    out = MultiPoly.zero(3)
    for hi, p in zip(h, adj):
        if hi:
            out = out + p * as_rational(hi)
    return out


def gamma_plane_section_count(net: NetOfQuadrics, h=None, seed: int = 0,
                              tol_cluster: float = 1e-6, max_retries: int = 5) -> GammaSectionResult:
    """Number of points of Gamma on the plane h . p = 0.

    Exact part: after a random rational change of plane coordinates, the
    resultants of f with h(adj_j) for two adjugate columns j are binary forms
    of degree 12; each has 6 roots where kappa_j = 0 and 6 where h(kappa) = 0,
    so their gcd carries exactly the plane section.  Its squarefree degree is
    the count.  Numeric part: the roots are lifted to Gamma and clustered.
    """
    rng = np.random.default_rng(seed)
    if net.quartic is None:
        discriminant_quartic(net, seed)
    if net.status != GENERAL:
        raise CorankError(f"net is {net.status}: {net.reason}")
    f = net.quartic.form
    given = h is not None
    for attempt in range(max_retries + 1):
        if h is None or attempt > 0 and not given:
            h = tuple(int(v) for v in rng.integers(-9, 10, size=4))
        S = random_rational_matrix(rng, 3).to_rows()
        fs = f.linear_change(S)
        gcd = None
        for col in (0, 1, 2, 3):
            c = _plane_cubic(net, h, col)
            if c.is_zero():
                continue
            cs = c.linear_change(S)
            if fs.degree_in(2) < 4 or cs.degree_in(2) < 3:
                continue
            u, inf = binary_form_to_upoly(sylvester_resultant(fs, cs, 2), 0, 1)
            gcd = (u, inf) if gcd is None else (upoly_gcd(gcd[0], u), min(gcd[1], inf))
            if gcd is not None and col >= 1 and len(gcd[0]) - 1 + gcd[1] <= 6:
                break
        if gcd is None:
            continue
        poly, inf = gcd
        degree = len(poly) - 1 + inf
        sq = upoly_squarefree(poly)
        if len(sq) != len(poly):
            if given:
                return GammaSectionResult(None, h, degree, [], [], attempt, np.inf,
                                          "plane not transverse")
            continue
        params, points = _lift_section(net, S, fs, sq, inf, h)
        hv = np.array([float(v) for v in h])
        res = max((abs(hv @ k) / (np.abs(hv) @ np.abs(k)) for k in points), default=0.0)
        cl = cluster_with_tolerance(points, tol_cluster)
        if cl.count != len(points):
            if given:
                return GammaSectionResult(cl.count, h, degree, points, params, attempt, res,
                                          "clustered section points")
            continue
        return GammaSectionResult(cl.count, h, degree, points, params, attempt, float(res))
    return GammaSectionResult(None, h, -1, [], [], max_retries, np.inf, "retries exhausted")


def _lift_section(net, S, fs, u, inf, h):
    """Points x of C over the roots of u whose vertex lies on the plane h."""
    Sn = np.array([[float(v) for v in row] for row in S])
    hv = np.array([float(v) for v in h], dtype=complex)
    F = NumPoly.from_multipoly(fs)
    roots = [r for r, _ in univariate_roots([complex(c) for c in u[::-1]])] if len(u) > 1 else []
    bases = [np.array([r, 1.0, 0.0], dtype=complex) for r in roots]
    bases += [np.array([1.0, 0.0, 0.0], dtype=complex)] * inf
    e2 = np.array([0, 0, 1.0], dtype=complex)
    params, points = [], []
    for base in bases:
        best = None
        for t, _ in univariate_roots(F.restrict_to_line(base, e2)):
            x = Sn @ (base + t * e2)
            x = x / np.linalg.norm(x)
            try:
                k = singular_point_map(net, x, check=False)
            except CorankError:
                continue
            score = abs(hv @ k) / (np.abs(hv) @ np.abs(k))
            if best is None or score < best[2]:
                best = (x, k, score)
        if best is not None:
            params.append(best[0])
            points.append(best[1])
    return params, points


# ----------------------------------------------------------------------------
# trisecant lines

@dataclass
class TrisecantLine:
    spanning: tuple                # (p, q) orthonormal points of P^3
    contacts: List[np.ndarray]     # three points of Gamma on the line
    contact_params: List[np.ndarray]
    plucker: np.ndarray
    contact_residual: float
    plucker_residual: float

    def to_json(self) -> dict:
        def cx(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return {"spanning": [cx(v) for v in self.spanning], "plucker": cx(self.plucker),
                "contacts": [cx(v) for v in self.contacts],
                "contact_params": [cx(v) for v in self.contact_params],
                "contact_residual": self.contact_residual, "plucker_residual": self.plucker_residual}


@dataclass
class TrisecantResult:
    base: np.ndarray
    base_param: np.ndarray
    lines: List[TrisecantLine]
    node_count: int
    quintic_nullity: int
    status: str = "ok"
    note: str = ""


def _dense_adjugate(net: NetOfQuadrics):
    """Adjugate columns as dense cubic coefficient arrays (col, entry, monomial)."""
    cache = getattr(net, "_dense_adj", None)
    if cache is None:
        cols = net.adjugate_columns()
        cache = np.array([[[complex(c) for c in p.coefficient_vector(3)] for p in col]
                          for col in cols])
        net._dense_adj = cache
    return cache


def points_of_gamma_on_line(net: NetOfQuadrics, a, b, rng, tol: float = 1e-8,
                            tol_cluster: float = 1e-6):
    """Points kappa(x) of Gamma on the line through a and b, with their x.

    Two planes through the line pull back to cubics mu(adj_j(x)); the
    intersection of the first with f contains every x with kappa(x) on the
    line, plus spurious roots where kappa_j(x) = 0, which fail the second
    plane.
    """
    mus = numeric_nullspace(np.array([a, b]), 1e-12)
    dense = _dense_adjugate(net)
    F = net.quartic.numeric
    out_x, out_k = [], []
    best = []
    for j in sorted(range(4), key=lambda c: -abs(a[c]))[:2]:
        cubic = NumPoly.from_dense(3, 3, mus[0] @ dense[j])
        for x in intersect_plane_curves(cubic, F, rng):
            try:
                k = singular_point_map(net, x, check=False)
            except CorankError:
                continue
            r = max(abs(m @ k) / (np.abs(m) @ np.abs(k)) for m in mus)
            if r < tol:
                out_x.append(x)
                out_k.append(k)
                best.append(r)
        if out_k:
            break
    cl = cluster_with_tolerance(out_k, tol_cluster)
    xs = [out_x[m[0]] for m in cl.members]
    ks = list(cl.representatives)
    return xs, ks, max(best, default=np.inf)


def trisecants_through_point(gamma: GammaCurve, index: int = 0, seed: int = 0,
                             tol_nullspace: float = 1e-8, tol_cluster: float = 1e-6,
                             tol_residual: float = 1e-8) -> TrisecantResult:
    """The three trisecants of Gamma through its sample point ``index``.

    Gamma projected from p is a plane quintic of arithmetic genus 6 and
    geometric genus 3, so it has three nodes; each node is the shadow of a
    line through p meeting Gamma twice more.
    """
    from .scrollab.frame import plucker_from_points, plucker_relation_residual
    net = gamma.owner
    rng = np.random.default_rng(seed)
    p = gamma.points[index]
    xp = gamma.params[index]
    N = numeric_nullspace(p[None, :], 1e-12)          # rows: projection with kernel p
    others = [k for i, k in enumerate(gamma.points) if projective_distance(k, p) > 1e-3]
    if len(others) < 40:
        raise ValueError("need at least 40 further Gamma samples")
    U = np.array(others) @ N.T
    U = U / np.linalg.norm(U, axis=1)[:, None]
    Z = numeric_nullspace(monomial_matrix(U, 5), tol_nullspace)
    if len(Z) != 1:
        raise FitError(f"projected quintic fit has nullity {len(Z)}")
    c = Z[0] * np.sqrt(multinomial_weights(3, 5))
    Q = NumPoly.from_dense(3, 5, c / c[int(np.argmax(np.abs(c)))])
    grads = Q.gradient()
    cands = []
    for z in intersect_plane_curves(grads[1], grads[2], rng):
        if max(float(relative_residual(g, z)) for g in [Q] + grads) < tol_residual:
            cands.append(z)
    nodes = cluster_with_tolerance(cands, tol_cluster)
    result = TrisecantResult(p, xp, [], nodes.count, 1)
    for n in nodes.representatives:
        q = N.conj().T @ n
        q = q - np.vdot(p, q) / np.vdot(p, p) * p
        q = q / np.linalg.norm(q)
        xs, ks, res = points_of_gamma_on_line(net, p, q, rng, tol_residual, tol_cluster)
        w = plucker_from_points(p, q)
        w = w / np.linalg.norm(w)
        line_res = max((_point_line_distance(p, q, k) for k in ks), default=np.inf)
        result.lines.append(TrisecantLine((p, q), ks, xs, w, line_res,
                                          float(plucker_relation_residual(w))))
    if nodes.count != 3:
        result.status = "degenerate"
        result.note = f"projected quintic has {nodes.count} nodes"
    elif any(len(t.contacts) != 3 for t in result.lines):
        result.status = "degenerate"
        result.note = "a line through a node does not meet Gamma three times"
    return result


def _point_line_distance(a, b, k):
    """Sine of the angle between k and the plane (complex 2-space) spanned by a, b."""
    Qm, _ = np.linalg.qr(np.column_stack([a, b]))
    k = k / np.linalg.norm(k)
    return float(np.linalg.norm(k - Qm @ (Qm.conj().T @ k)))


@dataclass
class ScorzaResult:
    x: np.ndarray
    base: np.ndarray
    residual_params: List[np.ndarray]
    residual_points: List[np.ndarray]
    symmetry_distances: List[float]
    symmetric: bool
    tolerance: float


def _residual_contacts(res: TrisecantResult, tol):
    params, pts = [], []
    for line in res.lines:
        for x, k in zip(line.contact_params, line.contacts):
            if projective_distance(k, res.base) > tol:
                params.append(x)
                pts.append(k)
    return params, pts


def gamma_curve_with_point(gamma: GammaCurve, x) -> GammaCurve:
    """A copy of the sample with x (a point of C) prepended."""
    k = singular_point_map(gamma.owner, x)
    r = kernel_residual(gamma.owner, x, k)
    return GammaCurve(gamma.owner, np.vstack([x, gamma.params]), np.vstack([k, gamma.points]),
                      np.concatenate([[r], gamma.residuals]), [False] + gamma.exact, gamma.seed)


def scorza_incidence(gamma: GammaCurve, x, seed: int = 0, tol: float = 1e-6,
                     check_symmetry: bool = True) -> ScorzaResult:
    """The six further contact points of the trisecants through kappa(x).

    Symmetry: for each residual point kappa(y), kappa(x) is among the
    residual contacts of the trisecants through kappa(y).
    """
    g = gamma_curve_with_point(gamma, np.asarray(x, dtype=complex))
    res = trisecants_through_point(g, 0, seed)
    params, pts = _residual_contacts(res, tol)
    dists = []
    if check_symmetry:
        for y in params:
            gy = gamma_curve_with_point(gamma, y)
            back = trisecants_through_point(gy, 0, seed)
            _, bpts = _residual_contacts(back, tol)
            dists.append(min((projective_distance(q, res.base) for q in bpts), default=1.0))
    symmetric = len(params) == 6 and all(d < tol for d in dists)
    return ScorzaResult(np.asarray(x), res.base, params, pts, dists, symmetric, tol)
