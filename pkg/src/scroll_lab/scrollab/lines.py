"""The line map x -> l_x from points of the quartic to lines of P^3."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..curvelab import PlaneQuartic, CurveSample, sample_curve_points, veronese_lift_raw
from ..exactcore import monomials
from ..numcore import NumPoly, relative_residual, projective_distance
from ..numcore.intersect import intersect_plane_curves
from .frame import (PLUCKER_GRAM, FrameError, IsotropicFrame, QuadricForm6,
                    dual_plucker_matrix, isotropic_frame, plucker_from_points,
                    plucker_relation_residual, spanning_points)

CONIC_EXPONENTS = np.array(monomials(3, 2), dtype=np.int64)


@dataclass
class LineMap:
    frame: IsotropicFrame
    quadric: QuadricForm6
    quartic: PlaneQuartic
    points: np.ndarray        # (n, 3) points of C
    plucker: np.ndarray       # (n, 6) unit Pluecker vectors
    spanning: np.ndarray      # (n, 2, 4) orthonormal spanning pairs
    seed: int
    residuals: dict = field(default_factory=dict)
    convention: str = ""

    def __len__(self):
        return len(self.points)

    def line(self, i):
        return self.spanning[i, 0], self.spanning[i, 1]

    def lines(self, idx=None):
        idx = range(len(self)) if idx is None else idx
        return [self.line(i) for i in idx]

    def line_of(self, x):
        """Pluecker vector and spanning pair of l_x for any point x of P^2."""
        w = self.frame.to_plucker(veronese_lift_raw(np.asarray(x)[None]))[0]
        w = w / np.linalg.norm(w)
        a, b = spanning_points(w)
        return w, a, b

    def to_json(self) -> dict:
        def cx(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return {
            "seed": self.seed,
            "ruling_swap": self.frame.ruling_swap,
            "convention": self.convention,
            "lines": [{"x": cx(x), "plucker": cx(w), "spanning": [cx(s[0]), cx(s[1])]}
                      for x, w, s in zip(self.points, self.plucker, self.spanning)],
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }


def point_conditions(frame: IsotropicFrame, q):
    """Four conics in x whose common zeros are the x with q on l_x.

    The point q lies on the line w iff the dual Pluecker matrix of w kills q;
    composing with the frame and the Veronese lift gives conditions that are
    quadratic in x.
    """
    q = np.asarray(q, dtype=complex)
    D = np.array([dual_plucker_matrix(e) @ q for e in np.eye(6, dtype=complex)])  # (6, 4)
    rows = D.T @ frame.inverse   # each row: coefficients on the lifted monomials
    return [NumPoly(CONIC_EXPONENTS, r, 3) for r in rows]


def lines_through_point(frame: IsotropicFrame, q, quartic: Optional[PlaneQuartic] = None,
                        rng=None, tol: float = 1e-8):
    """Parameters x (on C when ``quartic`` is given, else in all of P^2) with q on l_x."""
    rng = np.random.default_rng(0) if rng is None else rng
    conics = point_conditions(frame, q)
    W = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    mixed = [NumPoly(CONIC_EXPONENTS, sum(W[i, k] * conics[k].c for k in range(4)), 3)
             for i in range(4)]
    if quartic is not None:
        cands = intersect_plane_curves(mixed[0], quartic.numeric, rng)
        checks = mixed[1:]
    else:
        cands = intersect_plane_curves(mixed[0], mixed[1], rng)
        checks = mixed[2:]
    out = []
    for x in cands:
        vals = [float(relative_residual(c, x)) for c in checks]
        if max(vals) < tol:
            if all(projective_distance(x, y) > 1e-6 for y, _ in out):
                out.append((x, max(vals)))
    return out


def veronese_congruence_order(frame: IsotropicFrame, seed: int = 0) -> int:
    """Number of lines l_p, p in P^2, through a general point of P^3.

    Only meaningful when the whole Veronese surface lies on the quadric; the
    lines then form a congruence of order 1 (bisecants of a twisted cubic) or
    of order 3 (the dual family).
    """
    rng = np.random.default_rng(seed)
    q = rng.normal(size=4) + 1j * rng.normal(size=4)
    return len(lines_through_point(frame, q, None, rng, tol=1e-7))


def contains_veronese_numeric(Q: QuadricForm6, seed: int = 0, tol: float = 1e-12) -> bool:
    if Q.exact is not None:
        from ..curvelab import veronese_pullback
        return veronese_pullback(Q.exact).is_zero()
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    V = veronese_lift_raw(P)
    G = Q.gram
    vals = np.abs(np.einsum("ki,ij,kj->k", V, G, V))
    scale = np.einsum("ki,ij,kj->k", np.abs(V), np.abs(G), np.abs(V))
    return bool(np.all(vals < tol * scale))


def oriented_frame(Q: QuadricForm6, seed: int = 0, ruling_swap: bool = False):
    """Isotropic frame with the ruling fixed by a global convention.

    If the quadric contains the Veronese surface, the default ruling is the
    one in which the lifted plane is the order-1 congruence.  Otherwise the
    default has det T equal to the principal square root of det S / det G.
    The swap flag selects the other ruling.
    """
    frame = isotropic_frame(Q, seed)
    if contains_veronese_numeric(Q, seed):
        order = veronese_congruence_order(frame, seed)
        if order not in (1, 3):
            raise FrameError(f"Veronese congruence of unexpected order {order}")
        flip = order != 1
        convention = "veronese-order-1"
    else:
        target = np.sqrt(np.linalg.det(PLUCKER_GRAM) / np.linalg.det(Q.gram))
        d = np.linalg.det(frame.transform)
        flip = abs(d - target) > abs(d + target)
        convention = "det-principal-root"
    if flip != ruling_swap:
        frame = frame.swapped()
    frame.ruling_swap = ruling_swap
    return frame, convention


def build_line_map(Q: QuadricForm6, f: PlaneQuartic, n: int, seed: int,
                   ruling_swap: bool = False, sample: Optional[CurveSample] = None,
                   frame: Optional[IsotropicFrame] = None) -> LineMap:
    if sample is None:
        sample = sample_curve_points(f, n, seed)
    if frame is None:
        frame, convention = oriented_frame(Q, seed, ruling_swap)
    else:
        convention = "given"
    Z = veronese_lift_raw(sample.points)
    W = frame.to_plucker(Z)
    W = W / np.linalg.norm(W, axis=1)[:, None]
    plk = plucker_relation_residual(W)
    G = Q.gram
    onq = np.abs(np.einsum("ki,ij,kj->k", Z, G, Z)) / np.einsum(
        "ki,ij,kj->k", np.abs(Z), np.abs(G), np.abs(Z))
    if plk.max() > 1e-10:
        raise FrameError(f"Pluecker relation residual {plk.max():.2e} exceeds 1e-10")
    if onq.max() > 1e-9:
        raise FrameError(f"lifted points leave the quadric (residual {onq.max():.2e})")
    spans = np.array([spanning_points(w) for w in W])
    rec = max(projective_distance(plucker_from_points(a, b), w) for (a, b), w in zip(spans, W))
    if rec > 1e-9:
        raise FrameError(f"spanning pairs do not reproduce Pluecker vectors ({rec:.2e})")
    res = {"plucker_relation": float(plk.max()), "on_quadric": float(onq.max()),
           "reconstruction": float(rec), "frame": frame.residual}
    return LineMap(frame, Q, f, sample.points, W, spans, seed, res, convention)
