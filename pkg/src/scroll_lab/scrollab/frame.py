"""Quadrics of P^5 and their identification with the Pluecker quadric."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exactcore import RationalMatrix, as_rational
from ..numcore import numeric_nullspace, numeric_rank

# coordinate order of Pluecker vectors
PLUCKER_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Gram matrix of p01 p23 - p02 p13 + p03 p12
PLUCKER_GRAM = np.zeros((6, 6))
PLUCKER_GRAM[0, 5] = PLUCKER_GRAM[5, 0] = 0.5
PLUCKER_GRAM[1, 4] = PLUCKER_GRAM[4, 1] = -0.5
PLUCKER_GRAM[2, 3] = PLUCKER_GRAM[3, 2] = 0.5

# swapping p01 and p23 preserves the form with determinant -1: it exchanges
# the two families of planes on the quadric, i.e. points and planes of P^3
RULING_SWAP = np.eye(6)
RULING_SWAP[[0, 5]] = RULING_SWAP[[5, 0]]


class RankError(ValueError):
    pass


class FrameError(RuntimeError):
    pass


@dataclass
class QuadricForm6:
    """A quadric of P^5 by its symmetric Gram matrix (q(z) = z^T G z)."""

    gram: np.ndarray
    exact: Optional[RationalMatrix] = None
    rank: int = -1

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=complex)
        if g.shape != (6, 6) or not np.allclose(g, g.T, rtol=0, atol=0):
            raise ValueError("Gram matrix must be a symmetric 6x6 matrix")
        self.gram = g
        if self.rank < 0:
            self.rank = self.exact.rank() if self.exact is not None else numeric_rank(g, 1e-10)

    @classmethod
    def from_rational(cls, G: RationalMatrix) -> "QuadricForm6":
        if not G.is_symmetric() or G.rows != 6:
            raise ValueError("expected a symmetric 6x6 rational matrix")
        num = np.array([[float(G[i, j]) for j in range(6)] for i in range(6)], dtype=complex)
        return cls(num, G)

    @classmethod
    def from_json(cls, data) -> "QuadricForm6":
        rows = data["gram"] if isinstance(data, dict) else data
        if all(isinstance(x, (str, int)) for row in rows for x in row):
            return cls.from_rational(RationalMatrix.from_json(rows))
        g = np.array([[complex(*x) if isinstance(x, list) else complex(as_rational(x))
                       if isinstance(x, str) else complex(x) for x in row] for row in rows])
        return cls(g)

    @classmethod
    def load(cls, path) -> "QuadricForm6":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        if self.exact is not None:
            return {"gram": self.exact.to_json()}
        return {"gram": [[[float(z.real), float(z.imag)] for z in row] for row in self.gram]}

    def bilinear(self, u, v):
        return np.asarray(u) @ self.gram @ np.asarray(v)

    def value(self, z):
        return self.bilinear(z, z)


@dataclass
class IsotropicFrame:
    """T with T^T G T equal to the Pluecker Gram matrix."""

    transform: np.ndarray
    inverse: np.ndarray
    residual: float
    ruling_swap: bool = False

    def to_plucker(self, Z):
        """Pluecker vectors of points of the quadric (rows of Z)."""
        return np.asarray(Z) @ self.inverse.T

    def swapped(self) -> "IsotropicFrame":
        T = self.transform @ RULING_SWAP
        return IsotropicFrame(T, RULING_SWAP @ self.inverse, self.residual, not self.ruling_swap)


def _isotropic_in(G, W, rng):
    """An isotropic vector of the form G restricted to the column span of W."""
    k = W.shape[1]
    for _ in range(20):
        c1 = rng.normal(size=k) + 1j * rng.normal(size=k)
        c2 = rng.normal(size=k) + 1j * rng.normal(size=k)
        e1, e2 = W @ c1, W @ c2
        a, b, c = e1 @ G @ e1, e1 @ G @ e2, e2 @ G @ e2
        if abs(c) < 1e-12 * (abs(a) + abs(b) + 1):
            continue
        disc = np.sqrt(b * b - a * c)
        roots = [(-b + disc) / c, (-b - disc) / c]
        t = min(roots, key=abs)
        u = e1 + t * e2
        return u / np.linalg.norm(u)
    raise FrameError("no isotropic direction found")


def isotropic_frame(Q: QuadricForm6, seed: int = 0, ruling_swap: bool = False) -> IsotropicFrame:
    """Hyperbolic-pair peeling of a smooth quadric down to Pluecker normal form."""
    if Q.rank < 6:
        raise RankError(f"quadric has rank {Q.rank} < 6")
    G = Q.gram
    rng = np.random.default_rng(seed)
    W = np.eye(6, dtype=complex)
    pairs = []
    for _ in range(3):
        u = _isotropic_in(G, W, rng)
        Gu = W.T @ (G @ u)
        v = W @ Gu.conj()
        v = v - (v @ G @ v) / (2 * (u @ G @ v)) * u
        beta = u @ G @ v
        s = np.sqrt(2 * beta)
        u, v = u / s, v / s
        pairs.append((u, v))
        if W.shape[1] > 2:
            cons = np.array([u @ G @ W, v @ G @ W])
            W = W @ numeric_nullspace(cons, 1e-12).T
    (u1, v1), (u2, v2), (u3, v3) = pairs
    T = np.column_stack([u1, u3, u2, v2, -v3, v1])
    if ruling_swap:
        T = T @ RULING_SWAP
    residual = float(np.linalg.norm(T.T @ G @ T - PLUCKER_GRAM) / np.linalg.norm(PLUCKER_GRAM))
    if residual > 1e-9:
        raise FrameError(f"isotropic frame residual {residual:.2e} exceeds 1e-9")
    return IsotropicFrame(T, np.linalg.inv(T), residual, ruling_swap)


# ----------------------------------------------------------------------------
# line geometry in P^3

def plucker_relation(w):
    """p01 p23 - p02 p13 + p03 p12 (works on batches)."""
    w = np.asarray(w)
    return w[..., 0] * w[..., 5] - w[..., 1] * w[..., 4] + w[..., 2] * w[..., 3]


def plucker_relation_residual(w):
    w = np.asarray(w)
    scale = (np.abs(w[..., 0] * w[..., 5]) + np.abs(w[..., 1] * w[..., 4])
             + np.abs(w[..., 2] * w[..., 3]))
    scale = np.maximum(scale, np.sum(np.abs(w) ** 2, axis=-1) * 1e-300)
    return np.abs(plucker_relation(w)) / np.maximum(scale, 1e-300)


def plucker_from_points(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return np.stack([a[..., i] * b[..., j] - a[..., j] * b[..., i] for i, j in PLUCKER_INDEX], axis=-1)


def plucker_matrix(w):
    """Antisymmetric 4x4 matrix a b^T - b a^T of the line."""
    L = np.zeros(np.shape(w)[:-1] + (4, 4), dtype=complex)
    for k, (i, j) in enumerate(PLUCKER_INDEX):
        L[..., i, j] = w[..., k]
        L[..., j, i] = -w[..., k]
    return L


def dual_plucker_matrix(w):
    """Antisymmetric matrix whose action sends a point e to the plane <line, e>."""
    p01, p02, p03, p12, p13, p23 = (w[..., k] for k in range(6))
    Ld = np.zeros(np.shape(w)[:-1] + (4, 4), dtype=complex)
    entries = {(0, 1): p23, (0, 2): -p13, (0, 3): p12, (1, 2): p03, (1, 3): -p02, (2, 3): p01}
    for (i, j), val in entries.items():
        Ld[..., i, j] = val
        Ld[..., j, i] = -val
    return Ld


def spanning_points(w):
    """Two orthonormal points spanning the line with Pluecker vector w."""
    L = plucker_matrix(np.asarray(w, dtype=complex))
    cols = L.T  # rows are the columns of L, each a point of the line
    k = int(np.argmax(np.linalg.norm(cols, axis=1)))
    a = cols[k] / np.linalg.norm(cols[k])
    rest = cols - np.outer(cols @ a.conj(), a)
    j = int(np.argmax(np.linalg.norm(rest, axis=1)))
    b = rest[j] / np.linalg.norm(rest[j])
    return a, b


def lines_meet_det(a1, b1, a2, b2):
    """Normalized 4x4 determinant of the spanning points (zero iff the lines meet)."""
    M = np.array([a1, b1, a2, b2])
    return abs(np.linalg.det(M)) / np.prod(np.linalg.norm(M, axis=1))


def intersect_lines(a1, b1, a2, b2):
    """Common point of two meeting lines via the kernel of [a1 b1 -a2 -b2]."""
    from ..numcore import null_vector
    M = np.column_stack([a1, b1, -a2, -b2])
    c = null_vector(M)
    p = c[0] * a1 + c[1] * b1
    return p / np.linalg.norm(p)
