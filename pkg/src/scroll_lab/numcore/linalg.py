"""Rank-revealing nullspaces via column-pivoted Householder QR."""
from __future__ import annotations

import numpy as np
from scipy.linalg import qr

DEFAULT_TOL = 1e-8


def _pivoted_qr_of_adjoint(M):
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    # the columns of M^H are the rows of M; pivoting ranks them by norm
    Q, R, _ = qr(M.conj().T, pivoting=True, mode="full")
    d = np.abs(np.diag(R)) if R.size else np.zeros(0)
    return Q, d


def numeric_rank(M, tol: float = DEFAULT_TOL) -> int:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return 0
    _, d = _pivoted_qr_of_adjoint(M)
    if d.size == 0 or d[0] == 0:
        return 0
    return int(np.sum(d > tol * d[0]))


def numeric_nullspace(M, tol: float = DEFAULT_TOL):
    """Orthonormal basis (rows) of the numerical right nullspace of ``M``.

    A pivot of R counts toward the rank when it exceeds ``tol`` times the
    largest pivot; the trailing columns of Q then span the nullspace.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    n = M.shape[1]
    if M.shape[0] == 0 or not np.any(M):
        return np.eye(n, dtype=complex)
    Q, d = _pivoted_qr_of_adjoint(M)
    rank = int(np.sum(d > tol * d[0]))
    return Q[:, rank:].T.copy()


def null_vector(M):
    """The direction least annihilated by ``M`` (last column of the pivoted Q).

    For a matrix of numerical corank one this is its kernel vector.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    Q, _ = _pivoted_qr_of_adjoint(M)
    return Q[:, -1]


def relative_residual_norm(M, v) -> float:
    M = np.asarray(M, dtype=complex)
    nm = np.linalg.norm(M)
    if nm == 0:
        return 0.0
    return float(np.linalg.norm(M @ v) / (nm * np.linalg.norm(v)))
