"""Simultaneous (Aberth-Ehrlich) root finding for univariate polynomials."""
from __future__ import annotations

import numpy as np

from ..exactcore import DegenerateInputError

MAX_ITER = 200


class ConvergenceError(RuntimeError):
    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = residuals


def backward_residuals(coeffs, roots):
    """|p(r)| / sum |c_i| |r|^i for coefficients given highest degree first."""
    c = np.asarray(coeffs, dtype=complex)
    r = np.asarray(roots, dtype=complex)
    num = np.abs(np.polyval(c, r))
    den = np.polyval(np.abs(c), np.abs(r))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, num / den, num)
    return out


def _trim(coeffs):
    c = np.asarray(coeffs, dtype=complex).ravel()
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        raise DegenerateInputError("zero polynomial has no roots to find")
    k = 0
    while k < c.size and abs(c[k]) <= 1e-14 * scale:
        k += 1
    return c[k:]


def univariate_roots(coeffs, max_iter: int = MAX_ITER, tol: float = 1e-15):
    """All complex roots of a polynomial, with relative backward residuals.

    ``coeffs`` are ordered highest degree first (``numpy.polyval`` order).
    Leading coefficients below 1e-14 of the largest magnitude are dropped.
    Returns a list of ``(root, residual)`` pairs.
    """
    c = _trim(coeffs)
    n = c.size - 1
    if n < 1:
        raise DegenerateInputError("polynomial of degree 0 has no roots")
    # exact zero roots are peeled off so the iteration sees c[-1] != 0
    nzero = 0
    while c.size > 1 and c[-1] == 0:
        c = c[:-1]
        nzero += 1
    roots = np.zeros(0, dtype=complex)
    if c.size > 1:
        roots = _aberth(c / c[0], max_iter, tol)
    roots = np.concatenate([roots, np.zeros(nzero, dtype=complex)])
    full = _trim(coeffs)
    res = backward_residuals(full, roots)
    return [(complex(r), float(e)) for r, e in zip(roots, res)]


def _aberth(c, max_iter, tol):
    n = c.size - 1
    if n == 1:
        return np.array([-c[1] / c[0]])
    dc = np.polyder(c)
    # circle radius from the coefficient magnitudes (geometric mean of the roots)
    radius = abs(c[-1] / c[0]) ** (1.0 / n)
    if not np.isfinite(radius) or radius == 0.0:
        radius = 1.0
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles) * (1.0 + 0.01 * np.cos(3.1 * np.arange(n)))
    absc = np.abs(c)
    best = z.copy()
    best_err = np.inf
    for _ in range(max_iter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        ratio = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), p)
        denom = 1.0 - ratio * s
        denom = np.where(denom == 0, 1.0, denom)
        step = ratio / denom
        z = z - step
        err = np.abs(np.polyval(c, z)) / np.maximum(np.polyval(absc, np.abs(z)), 1e-300)
        if err.max() < best_err:
            best_err = err.max()
            best = z.copy()
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))) or err.max() < 1e-16:
            return z
    if best_err < 1e-10:
        return best
    raise ConvergenceError("Aberth iteration did not converge", best=best,
                           residuals=backward_residuals(c, best))


def reconstruct(leading, roots):
    """Coefficients of leading * prod(x - r), highest degree first."""
    return leading * np.poly(np.asarray(roots, dtype=complex))
