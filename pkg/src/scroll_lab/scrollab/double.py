"""Pairs of meeting lines: partners of a line and the double curve."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..curvelab import sample_curve_points, veronese_lift_raw
from ..numcore import (NumPoly, cluster_with_tolerance, numeric_nullspace, projective_distance,
                       relative_residual)
from ..numcore.homotopy import random_combinations, solve_projective
from ..numcore.intersect import intersect_plane_curves
from ..numcore.poly import monomial_matrix, multinomial_weights
from .frame import dual_plucker_matrix, intersect_lines, lines_meet_det, plucker_matrix
from .lines import CONIC_EXPONENTS, LineMap, lines_through_point

AT_X_TOL = 1e-5       # the double root at x is only resolved to about sqrt(eps)
SEPARATION_TOL = 1e-3


class PreconditionError(ValueError):
    pass


def require_generic(lm):
    if not isinstance(lm, LineMap):
        raise PreconditionError("double-curve counting needs a line map built from a quadric; "
                                "a trisecant scroll has a triple curve instead")
    from .lines import contains_veronese_numeric
    if contains_veronese_numeric(lm.quadric):
        raise PreconditionError("the quadric contains the Veronese surface (case b)")


def bilinear_residual(G, x, y):
    """|b_G(v(x), v(y))| relative to the absolute scale of the terms."""
    vx = veronese_lift_raw(np.asarray(x)[None])[0]
    vy = veronese_lift_raw(np.asarray(y)[None])[0]
    return float(abs(vx @ G @ vy) / (np.abs(vx) @ np.abs(G) @ np.abs(vy)))


def partner_conic(G, x) -> NumPoly:
    """The conic y -> b_G(v(x), v(y))."""
    vx = veronese_lift_raw(np.asarray(x)[None])[0]
    return NumPoly(CONIC_EXPONENTS, G @ vx, 3)


@dataclass
class PartnerSet:
    x: np.ndarray
    partners: List[np.ndarray]
    points: List[np.ndarray]           # o = l_x meet l_y
    meet_residuals: List[float]
    tangency: bool
    diagonal_distances: List[float]
    note: str = ""

    def __len__(self):
        return len(self.partners)


def double_curve_partners(lm: LineMap, x, rng=None) -> PartnerSet:
    """The six y != x on C with l_y meeting l_x, and the meeting points.

    The conic b_G(v(x), v(y)) = 0 meets C in eight points; x itself is a double
    root.  If x does not appear exactly twice, or a partner approaches x or
    another partner, the result is flagged as tangency.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    x = np.asarray(x, dtype=complex)
    G = lm.quadric.gram
    P = intersect_plane_curves(partner_conic(G, x), lm.quartic.numeric, rng)
    d = np.array([projective_distance(p, x) for p in P])
    order = np.argsort(d, kind="stable")
    near = int(np.sum(d < AT_X_TOL))
    ys = P[order[2:]]
    tangency = near != 2 or d[order[2]] < SEPARATION_TOL
    note = "" if not tangency else f"{near} roots at x, next distance {d[order[2]]:.1e}"
    if not tangency:
        for i in range(len(ys)):
            for j in range(i):
                if projective_distance(ys[i], ys[j]) < SEPARATION_TOL:
                    tangency = True
                    note = "two partners coincide"
    _, ax, bx = lm.line_of(x)
    pts, meets = [], []
    for y in ys:
        _, ay, by = lm.line_of(y)
        meets.append(lines_meet_det(ax, bx, ay, by))
        pts.append(intersect_lines(ax, bx, ay, by))
    return PartnerSet(x, list(ys), pts, meets, bool(tangency), [float(v) for v in d[order[:3]]], note)


# ----------------------------------------------------------------------------
# degree of the double curve

def plane_basis(h):
    """Rows spanning the plane h . p = 0, orthonormal; coordinates u = conj(B) @ p."""
    return numeric_nullspace(np.asarray(h, dtype=complex)[None, :], 1e-12)


def section_points(lm: LineMap, X, h):
    """Points l_x meet H for the parameters X (rows)."""
    W = lm.frame.to_plucker(veronese_lift_raw(X))
    W = W / np.linalg.norm(W, axis=1)[:, None]
    P = np.einsum("kij,j->ki", plucker_matrix(W), h)
    return P / np.linalg.norm(P, axis=1)[:, None]


def _pair_equations(lm: LineMap, h, X, Y):
    """f(x), f(y), b_G(x, y), and the condition that l_x meet H on l_y."""
    F = lm.quartic.numeric
    V = veronese_lift_raw(np.array([X, Y]))
    wx, wy = lm.frame.to_plucker(V)
    P = plucker_matrix(wx) @ h
    return np.concatenate([[F(X), F(Y), V[0] @ lm.quadric.gram @ V[1]],
                           dual_plucker_matrix(wy) @ P])


def refine_pair(lm: LineMap, h, x, y, iters: int = 12, tol: float = 1e-15):
    """Gauss-Newton polish of a pair (x, y) whose lines meet on the plane h.

    Each point is kept in the affine chart of its largest coordinate; the
    Jacobian is taken by forward differences, which still converges fast on
    this zero-residual system.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    kx, ky = int(np.argmax(np.abs(x))), int(np.argmax(np.abs(y)))
    x, y = x / x[kx], y / y[ky]
    fx, fy = [i for i in range(3) if i != kx], [i for i in range(3) if i != ky]

    def unpack(z):
        X, Y = x.copy(), y.copy()
        X[fx], Y[fy] = z[:2], z[2:]
        return X, Y

    z = np.concatenate([x[fx], y[fy]])
    for _ in range(iters):
        r = _pair_equations(lm, h, *unpack(z))
        J = np.empty((len(r), 4), dtype=complex)
        for k in range(4):
            step = 1e-7 * max(1.0, abs(z[k]))
            dz = np.zeros(4, dtype=complex)
            dz[k] = step
            J[:, k] = (_pair_equations(lm, h, *unpack(z + dz)) - r) / step
        delta = np.linalg.lstsq(J, -r, rcond=None)[0]
        z = z + delta
        if np.linalg.norm(delta) < tol * max(1.0, np.linalg.norm(z)):
            break
    X, Y = unpack(z)
    return X / np.linalg.norm(X), Y / np.linalg.norm(Y)


@dataclass
class PlaneCountResult:
    count: Optional[int]
    plane: np.ndarray
    nodes: List[np.ndarray]                  # in P^3
    pairs: List[tuple]                       # unordered (x, y)
    ordered_pairs: int
    section_nullity: int
    residuals: dict = field(default_factory=dict)
    anomalies: List[str] = field(default_factory=list)
    tolerance: float = 1e-6
    method: str = "plane-section nodes + incidence lift"


def double_curve_plane_count(lm: LineMap, h=None, seed: int = 0, samples: int = 100,
                             tol_cluster: float = 1e-6, tol_nullspace: float = 1e-8,
                             tol_residual: float = 1e-8) -> PlaneCountResult:
    """Number of points of the double curve on a plane H.

    The section R n H is the image of C under x -> l_x n H, a plane octic.
    Its nodes are found as common zeros of the partials; each node is lifted
    to the pair (x, y) of curve points whose lines pass through it, which is
    a solution of f(x) = f(y) = b_G(x, y) = H(o(x, y)) = 0.  Verified ordered
    pairs are clustered and the swap is quotiented out.
    """
    require_generic(lm)
    rng = np.random.default_rng(seed)
    if h is None:
        h = rng.normal(size=4) + 1j * rng.normal(size=4)
    h = np.asarray(h, dtype=complex)
    B = plane_basis(h)
    sample = sample_curve_points(lm.quartic, samples, int(rng.integers(2 ** 31)))
    U = section_points(lm, sample.points, h) @ B.conj().T
    N = numeric_nullspace(monomial_matrix(U, 8), tol_nullspace)
    result = PlaneCountResult(None, h, [], [], 0, len(N), tolerance=tol_cluster)
    if len(N) != 1:
        result.anomalies.append(f"plane section fit has nullity {len(N)}")
        return result
    c = N[0] * np.sqrt(multinomial_weights(3, 8))
    S = NumPoly.from_dense(3, 8, c / c[int(np.argmax(np.abs(c)))])
    grads = S.gradient()
    hom = solve_projective(random_combinations(grads, 2, rng), rng)
    cands = []
    for z in hom.points[hom.converged]:
        z = z / np.linalg.norm(z)
        if max(float(relative_residual(g, z)) for g in grads) < tol_residual:
            cands.append(z)
    nodes = cluster_with_tolerance(cands, tol_cluster)
    result.residuals["homotopy_paths"] = hom.path_count
    ordered = []
    worst_b = worst_h = 0.0
    for u in nodes.representatives:
        q = B.T @ u
        q = q / np.linalg.norm(q)
        xs = lines_through_point(lm.frame, q, lm.quartic, rng, tol=1e-6)
        if len(xs) != 2:
            result.anomalies.append(f"{len(xs)} lines through a section node")
            continue
        (x, _), (y, _) = xs
        x, y = refine_pair(lm, h, x, y)
        _, ax, bx = lm.line_of(x)
        _, ay, by = lm.line_of(y)
        o = intersect_lines(ax, bx, ay, by)
        rb = bilinear_residual(lm.quadric.gram, x, y)
        rh = float(abs(h @ o) / (np.abs(h) @ np.abs(o)))
        if rb > tol_residual or rh > tol_residual:
            result.anomalies.append(f"pair fails verification (b {rb:.1e}, H {rh:.1e})")
            continue
        worst_b, worst_h = max(worst_b, rb), max(worst_h, rh)
        ordered += [(x, y, o), (y, x, o)]
        result.nodes.append(o)
    # the symmetric tensor xy^T + yx^T is a swap-invariant key for the pair
    keys = [(np.outer(x, y) + np.outer(y, x)).ravel() for x, y, _ in ordered]
    cl = cluster_with_tolerance(keys, tol_cluster)
    for members in cl.members:
        x, y, _ = ordered[members[0]]
        result.pairs.append((x, y))
    result.ordered_pairs = len(ordered)
    result.count = cl.count
    result.residuals.update({"bilinear": worst_b, "plane": worst_h,
                             "section_fit": float(relative_residual(S, U).max())})
    return result
