"""Intersection of two plane curves by a numerical Sylvester resultant.

After a random unitary change of coordinates the resultant in the last
variable is a polynomial of degree ``deg p * deg q`` in the chart coordinate.
It is sampled on the unit circle, interpolated with an FFT, solved with the
Aberth iteration, and every root is back-substituted and Newton-polished.
"""
from __future__ import annotations

import numpy as np

from .poly import NumPoly
from .roots import univariate_roots


def random_unitary(rng, n: int):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _sylvester_numeric(a, b):
    # a, b: coefficient arrays, highest degree first
    m = len(a) - 1
    n = len(b) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i:i + m + 1] = a
    for i in range(m):
        S[n + i, i:i + n + 1] = b
    return S


def _newton_pair(p, q, x, iters=8):
    """Polish a common zero of two ternary forms on the affine patch u . x = 1."""
    x = np.asarray(x, dtype=complex)
    u = x.conj() / np.vdot(x, x)
    for _ in range(iters):
        F = np.array([p(x), q(x), u @ x - 1.0])
        J = np.array([p.jacobian_row(x), q.jacobian_row(x), u])
        try:
            dx = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        x = x - dx
        if np.linalg.norm(dx) < 1e-15 * np.linalg.norm(x):
            break
    return x


def intersect_plane_curves(p: NumPoly, q: NumPoly, rng, polish=True):
    """All deg(p)*deg(q) intersection points of two ternary forms.

    Returns an array of homogeneous points (k x 3), k = deg p * deg q counted
    with multiplicity.
    """
    dp, dq = p.degree, q.degree
    U = random_unitary(rng, 3)
    e2 = U[:, 2]
    N = dp * dq + 1
    size = 1
    while size < N:
        size *= 2
    s_vals = np.exp(2j * np.pi * np.arange(size) / size)
    vals = np.empty(size, dtype=complex)
    for k, s in enumerate(s_vals):
        base = U[:, 0] + s * U[:, 1]
        a = p.restrict_to_line(base, e2)
        b = q.restrict_to_line(base, e2)
        vals[k] = np.linalg.det(_sylvester_numeric(a, b))
    coeffs = np.fft.fft(vals) / size   # coeffs[k] multiplies s^k
    coeffs = coeffs[:dp * dq + 1][::-1]
    roots = [r for r, _ in univariate_roots(coeffs)]
    pts = []
    for s in roots:
        base = U[:, 0] + s * U[:, 1]
        ta = [r for r, _ in univariate_roots(p.restrict_to_line(base, e2))]
        tb = [r for r, _ in univariate_roots(q.restrict_to_line(base, e2))]
        best = min(((abs(x - y), x, y) for x in ta for y in tb), key=lambda z: z[0])
        t = 0.5 * (best[1] + best[2])
        x = base + t * e2
        if polish:
            x = _newton_pair(p, q, x)
        pts.append(x / np.linalg.norm(x))
    return np.array(pts)
