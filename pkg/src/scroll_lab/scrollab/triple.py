"""Triple points of the scroll: points where three lines of the family meet.

Two independent routes are run.  The sweep follows a real closed loop of
curve points, tracks the six partner meeting points of each line and refines
every near-collision of two of them by complex Newton iteration on the
triple-incidence system.  The homotopy route solves for the common zeros of
three random combinations of the second partials of the fitted surface.
Every candidate is confirmed by counting the lines through it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..curvelab import veronese_lift_raw
from ..numcore import cluster_with_tolerance, projective_distance, relative_residual, univariate_roots
from ..numcore.homotopy import random_combinations, solve_projective
from .double import double_curve_partners, require_generic
from .frame import intersect_lines
from .lines import LineMap, lines_through_point
from .octic import OcticSurface, multiplicity_along_curve

WINDOW_TOL = 0.3


def veronese_jacobian(p):
    """d v(p) / d p as a 6 x 3 matrix."""
    x0, x1, x2 = p
    return np.array([[2 * x0, 0, 0], [x1, x0, 0], [x2, 0, x0],
                     [0, 2 * x1, 0], [0, x2, x1], [0, 0, 2 * x2]], dtype=complex)


def _chart(p):
    p = p / np.linalg.norm(p)
    # columns orthonormal to p (Hermitian), a local affine chart p + N c
    Q, _ = np.linalg.qr(np.column_stack([p, np.eye(3)]).astype(complex))
    return p, Q[:, 1:3]


# b(v(y), v(z)) vanishes to order two along the diagonal of C x C, so every
# pair equation is divided by det[y, z, e]^2; this removes the spurious
# components x = y, x = z, y = z of the incidence system.
_DIAG_E = np.array([0.3141 + 0.2718j, -0.5772 + 0.1618j, 0.6931 - 0.4142j])


def _pair_equation(G, p, q):
    vp = veronese_lift_raw(p[None])[0]
    vq = veronese_lift_raw(q[None])[0]
    bval = vp @ G @ vq
    db_p = (G @ vq) @ veronese_jacobian(p)
    db_q = (G @ vp) @ veronese_jacobian(q)
    D = np.linalg.det(np.array([p, q, _DIAG_E]))
    dD_p = np.cross(q, _DIAG_E)
    dD_q = np.cross(_DIAG_E, p)
    val = bval / D ** 2
    return val, (db_p * D - 2 * bval * dD_p) / D ** 3, (db_q * D - 2 * bval * dD_q) / D ** 3


def _triple_residual(lm, charts, c):
    F = lm.quartic.numeric
    G = lm.quadric.gram
    P = [charts[k][0] + charts[k][1] @ c[2 * k:2 * k + 2] for k in range(3)]
    r = np.zeros(6, dtype=complex)
    J = np.zeros((6, 6), dtype=complex)
    for k in range(3):
        r[k] = F(P[k])
        J[k, 2 * k:2 * k + 2] = F.jacobian_row(P[k]) @ charts[k][1]
    for row, (i, j) in enumerate(((0, 1), (0, 2), (1, 2)), start=3):
        val, gi, gj = _pair_equation(G, P[i], P[j])
        r[row] = val
        J[row, 2 * i:2 * i + 2] = gi @ charts[i][1]
        J[row, 2 * j:2 * j + 2] = gj @ charts[j][1]
    return P, r, J


def newton_triple(lm: LineMap, x, y, z, tol: float = 1e-13, max_steps: int = 120):
    """Solve the deflated incidence system f = 0, b / det^2 = 0 from a near-solution.

    A Newton homotopy R(c) = s(t) R(c0) with s running from 1 to 0 along a
    complex arc carries the start triple to a solution; each step is
    corrected by Newton and halved on failure.
    """
    charts = [_chart(np.asarray(p, dtype=complex)) for p in (x, y, z)]
    c = np.zeros(6, dtype=complex)
    _, r0, J = _triple_residual(lm, charts, c)

    def s_of(t):
        return (1 - t) * np.exp(0.7j * t)

    t, h = 0.0, 0.05
    steps = 0
    while t < 1.0:
        steps += 1
        if steps > max_steps:
            return None
        h = min(h, 1.0 - t)
        trial = c.copy()
        ok = False
        for it in range(4):
            _, r, J = _triple_residual(lm, charts, trial)
            try:
                dc = np.linalg.solve(J, r - s_of(t + h) * r0)
            except np.linalg.LinAlgError:
                break
            trial = trial - dc
            if not np.all(np.isfinite(trial)):
                break
            if it == 0 and np.linalg.norm(dc) > 0.1:
                break
            if np.linalg.norm(dc) < 1e-10 * max(1.0, np.linalg.norm(trial)):
                ok = True
                break
        if ok and np.linalg.norm(trial) < 10:
            c, t = trial, t + h
            h *= 1.5
        else:
            h *= 0.5
            if h < 1e-6:
                return None
    for _ in range(8):
        _, r, J = _triple_residual(lm, charts, c)
        try:
            dc = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return None
        c = c - dc
        if np.linalg.norm(dc) < tol:
            break
    P, r, _ = _triple_residual(lm, charts, c)
    if not np.all(np.isfinite(r)) or np.abs(r).max() > 1e-9:
        return None
    return [p / np.linalg.norm(p) for p in P]


def classify_triple(lm: LineMap, P, tol: float = 1e-6):
    """'concurrent' with the common point, 'coplanar', or 'diagonal'."""
    x, y, z = P
    if min(projective_distance(x, y), projective_distance(x, z), projective_distance(y, z)) < 1e-4:
        return "diagonal", None
    _, ax, bx = lm.line_of(x)
    _, ay, by = lm.line_of(y)
    _, az, bz = lm.line_of(z)
    o1 = intersect_lines(ax, bx, ay, by)
    o2 = intersect_lines(ax, bx, az, bz)
    if projective_distance(o1, o2) < tol:
        return "concurrent", o1
    return "coplanar", None


# ----------------------------------------------------------------------------
# the sweep

def _loop_points(f, m, rng):
    """Four branches of C over a real pencil of lines, tracked continuously."""
    F = f.numeric
    P0 = rng.normal(size=3)
    Q1, Q2 = rng.normal(size=3), rng.normal(size=3)
    branches = np.zeros((m, 4, 3), dtype=complex)
    prev = None
    for k in range(m):
        th = np.pi * k / m
        Q = np.cos(th) * Q1 + np.sin(th) * Q2
        roots = [r for r, _ in univariate_roots(F.restrict_to_line(P0.astype(complex), Q.astype(complex)))]
        pts = np.array([(P0 + t * Q) / np.linalg.norm(P0 + t * Q) for t in roots])
        if prev is not None:
            cost = np.array([[projective_distance(a, b) for b in pts] for a in prev])
            _, perm = linear_sum_assignment(cost)
            pts = pts[perm]
        branches[k] = pts
        prev = pts
    return branches


def _track_partner(lm, x, y, iters=6):
    """Newton for f(y) = b(x, y) = 0 from a nearby y."""
    F = lm.quartic.numeric
    G = lm.quadric.gram
    vx = veronese_lift_raw(x[None])[0]
    p, N = _chart(y)
    c = np.zeros(2, dtype=complex)
    for _ in range(iters):
        q = p + N @ c
        vq = veronese_lift_raw(q[None])[0]
        r = np.array([F(q), vx @ G @ vq])
        J = np.array([F.jacobian_row(q) @ N, (G @ vx) @ veronese_jacobian(q) @ N])
        try:
            dc = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return None
        c = c - dc
        if np.linalg.norm(dc) < 1e-14:
            break
    if np.linalg.norm(c) > 0.2:
        return None
    q = p + N @ c
    return q / np.linalg.norm(q)


@dataclass
class Window:
    branch: int
    index: int
    pair: tuple
    distance: float
    status: str = "pending"
    point: Optional[np.ndarray] = None


@dataclass
class TripleCluster:
    point: np.ndarray
    hits: int
    sources: List[str]
    lines_through: int
    line_residual: float
    second_order_residual: Optional[float] = None


@dataclass
class TripleScanResult:
    count: int
    clusters: List[TripleCluster]
    sweep_count: int
    homotopy_count: Optional[int]
    windows: List[Window]
    unresolved: List[Window]
    near_coincident: List[tuple]
    tracking_restarts: int
    resolution: int
    tolerance: float
    notes: List[str] = field(default_factory=list)


def _sweep(lm: LineMap, resolution: int, rng, tol_cluster):
    m = max(8, resolution // 4)
    branches = _loop_points(lm.quartic, m, rng)
    restarts = 0
    O = np.zeros((4, m, 6, 4), dtype=complex)
    Y = np.zeros((4, m, 6, 3), dtype=complex)
    for b in range(4):
        prev = None
        for k in range(m):
            x = branches[k, b]
            ys = None
            if prev is not None:
                ys = [_track_partner(lm, x, y) for y in prev]
                ok = all(y is not None for y in ys)
                if ok:
                    arr = np.array(ys)
                    dmin = min(projective_distance(arr[i], arr[j]) for i in range(6) for j in range(i))
                    ok = dmin > 1e-3 and min(projective_distance(y, x) for y in arr) > 1e-3
                if not ok:
                    ys = None
            if ys is None:
                ps = double_curve_partners(lm, x, rng)
                restarts += prev is not None
                arr = np.array(ps.partners)
                if prev is not None:
                    cost = np.array([[projective_distance(a, c) for c in arr] for a in prev])
                    _, perm = linear_sum_assignment(cost)
                    arr = arr[perm]
                ys = list(arr)
            _, ax, bx = lm.line_of(x)
            for i, y in enumerate(ys):
                _, ay, by = lm.line_of(y)
                O[b, k, i] = intersect_lines(ax, bx, ay, by)
                Y[b, k, i] = y
            prev = np.array(ys)
    windows = []
    for b in range(4):
        for i in range(6):
            for j in range(i):
                d = np.array([projective_distance(O[b, k, i], O[b, k, j]) for k in range(m)])
                for k in range(m):
                    lo = d[k - 1] if k > 0 else np.inf
                    hi = d[k + 1] if k + 1 < m else np.inf
                    if d[k] <= lo and d[k] <= hi and d[k] < WINDOW_TOL:
                        windows.append(Window(b, k, (j, i), float(d[k])))
    found = []
    for w in windows:
        x = branches[w.index, w.branch]
        y = Y[w.branch, w.index, w.pair[0]]
        z = Y[w.branch, w.index, w.pair[1]]
        P = newton_triple(lm, x, y, z)
        if P is None:
            w.status = "unresolved"
            continue
        kind, o = classify_triple(lm, P)
        w.status = kind
        if o is not None:
            w.point = o
            found.append(o)
    return found, windows, restarts


def _homotopy(F: OcticSurface, rng, tol_residual):
    sec = list(F.poly.derivatives_of_order(2).values())
    res = solve_projective(random_combinations(sec, 3, rng), rng)
    out = []
    for z in res.points[res.converged]:
        z = z / np.linalg.norm(z)
        if max(float(relative_residual(g, z)) for g in sec) < tol_residual:
            out.append(z)
    return out, res.path_count


def triple_locus_scan(lm: LineMap, F: OcticSurface, resolution: int = 2000, seed: int = 0,
                      tol_cluster: float = 1e-6, tol_residual: float = 1e-8,
                      use_homotopy: bool = True) -> TripleScanResult:
    require_generic(lm)
    rng = np.random.default_rng(seed)
    sweep_pts, windows, restarts = _sweep(lm, resolution, rng, tol_cluster)
    hom_pts = []
    notes = []
    if use_homotopy:
        hom_pts, paths = _homotopy(F, rng, tol_residual)
        notes.append(f"homotopy on second partials: {paths} paths")
    tagged = [(p, "sweep") for p in sweep_pts] + [(p, "homotopy") for p in hom_pts]
    cl = cluster_with_tolerance([p for p, _ in tagged], tol_cluster)
    clusters = []
    sweep_clusters = hom_clusters = 0
    for rep, members in zip(cl.representatives, cl.members):
        sources = sorted({tagged[i][1] for i in members})
        xs = lines_through_point(lm.frame, rep, lm.quartic, rng)
        lres = max((r for _, r in xs), default=np.inf)
        if len(xs) < 3:
            notes.append(f"candidate with only {len(xs)} lines through it discarded")
            continue
        mult = multiplicity_along_curve(F, [rep], 2)
        clusters.append(TripleCluster(rep, len(members), sources, len(xs), float(lres),
                                      mult.table[2]))
        sweep_clusters += "sweep" in sources
        hom_clusters += "homotopy" in sources
    near = []
    for i in range(len(clusters)):
        for j in range(i):
            d = projective_distance(clusters[i].point, clusters[j].point)
            if d < 1e3 * tol_cluster:
                near.append((j, i, d))
    unresolved = [w for w in windows if w.status == "unresolved"]
    return TripleScanResult(len(clusters), clusters, sweep_clusters,
                            hom_clusters if use_homotopy else None, windows, unresolved, near,
                            restarts, resolution, tol_cluster, notes)
