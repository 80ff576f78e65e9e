"""Projective normalization, distances and greedy tolerance clustering."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

DEFAULT_TOL = 1e-6


def normalize_projective(v, eps: float = 1e-12):
    """Unit Euclidean norm with the first non-negligible entry real positive."""
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0 or not np.all(np.isfinite(v)):
        raise ValueError("cannot normalize a zero or non-finite vector")
    v = v / nrm
    k = int(np.argmax(np.abs(v) > eps))
    phase = v[k] / abs(v[k])
    return v / phase


def projective_distance(u, v) -> float:
    """Sine of the angle between the complex lines spanned by u and v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # norm of the rejection avoids the cancellation in sqrt(1 - cos^2)
    return float(min(1.0, np.linalg.norm(v - np.vdot(u, v) * u)))


@dataclass
class ClusterSet:
    representatives: List[np.ndarray] = field(default_factory=list)
    multiplicities: List[int] = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    members: List[List[int]] = field(default_factory=list)

    def __len__(self):
        return len(self.representatives)

    @property
    def count(self) -> int:
        return len(self.representatives)


def cluster_with_tolerance(points, tol: float = DEFAULT_TOL) -> ClusterSet:
    """Greedy leader clustering under projective distance, in input order.

    Each point joins the first representative within ``tol``; otherwise it
    founds a new cluster.  Representatives are the founding points, so
    re-clustering them returns them unchanged.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    out = ClusterSet(tolerance=tol)
    for idx, p in enumerate(points):
        p = np.asarray(p, dtype=complex)
        for k, rep in enumerate(out.representatives):
            if projective_distance(p, rep) <= tol:
                out.multiplicities[k] += 1
                out.members[k].append(idx)
                break
        else:
            out.representatives.append(p)
            out.multiplicities.append(1)
            out.members.append([idx])
    return out
