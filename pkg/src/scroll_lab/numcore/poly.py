"""Vectorized evaluation of polynomials with complex coefficients."""
from __future__ import annotations

from math import factorial

import numpy as np

from ..exactcore import MultiPoly, monomials


class NumPoly:
    """Polynomial as an exponent table ``E`` (m x n) and coefficients ``c`` (m,)."""

    __slots__ = ("nvars", "E", "c", "_grad")

    def __init__(self, E, c, nvars=None):
        E = np.asarray(E, dtype=np.int64)
        c = np.asarray(c, dtype=complex)
        if E.ndim != 2:
            E = E.reshape(len(c), -1)
        self.E = E
        self.c = c
        self.nvars = E.shape[1] if nvars is None else nvars
        self._grad = None

    @classmethod
    def from_multipoly(cls, p: MultiPoly) -> "NumPoly":
        items = p.items()
        if not items:
            return cls(np.zeros((0, p.nvars), dtype=np.int64), np.zeros(0), p.nvars)
        E = np.array([e for e, _ in items], dtype=np.int64)
        c = np.array([complex(v) for _, v in items])
        return cls(E, c, p.nvars)

    @classmethod
    def from_dense(cls, nvars: int, degree: int, coeffs) -> "NumPoly":
        E = np.array(monomials(nvars, degree), dtype=np.int64)
        return cls(E, np.asarray(coeffs, dtype=complex), nvars)

    @property
    def degree(self) -> int:
        return int(self.E.sum(axis=1).max()) if len(self.c) else -1

    def monomial_values(self, Z):
        Z = np.asarray(Z, dtype=complex)
        return np.prod(Z[..., None, :] ** self.E, axis=-1)

    def __call__(self, Z):
        """Evaluate at one point (n,) or a batch (..., n)."""
        if not len(self.c):
            return np.zeros(np.asarray(Z).shape[:-1], dtype=complex)
        return self.monomial_values(Z) @ self.c

    def abs_scale(self, Z):
        """sum |c_a| |z^a|, the natural scale for relative residuals."""
        if not len(self.c):
            return np.ones(np.asarray(Z).shape[:-1])
        return np.abs(self.monomial_values(Z)) @ np.abs(self.c)

    def diff(self, i: int) -> "NumPoly":
        mask = self.E[:, i] > 0
        E = self.E[mask].copy()
        c = self.c[mask] * E[:, i]
        E[:, i] -= 1
        return NumPoly(E, c, self.nvars)

    def gradient(self):
        if self._grad is None:
            self._grad = [self.diff(i) for i in range(self.nvars)]
        return self._grad

    def jacobian_row(self, Z):
        return np.stack([g(Z) for g in self.gradient()], axis=-1)

    def derivatives_of_order(self, k: int):
        """All distinct partials of total order k, keyed by exponent multi-index."""
        out = {}
        for alpha in monomials(self.nvars, k):
            q = self
            for i, a in enumerate(alpha):
                for _ in range(a):
                    q = q.diff(i)
            out[alpha] = q
        return out

    def restrict_to_line(self, a, b):
        """Coefficients (highest first) of t -> p(a + t b) for homogeneous p.

        Uses the binomial expansion of each monomial; exact for any degree.
        """
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        d = self.degree
        out = np.zeros(d + 1, dtype=complex)
        for e, c in zip(self.E, self.c):
            # product over variables of (a_i + t b_i)^{e_i}
            poly = np.array([1.0 + 0j])
            for i, k in enumerate(e):
                if k:
                    poly = np.convolve(poly, _binomial_power(a[i], b[i], k))
            out[d + 1 - len(poly):] += c * poly
        return out


def _binomial_power(a, b, k):
    # (a + t b)^k, highest power of t first
    return np.array([factorial(k) // (factorial(j) * factorial(k - j)) * b ** j * a ** (k - j)
                     for j in range(k, -1, -1)], dtype=complex)


def relative_residual(p: NumPoly, Z):
    """|p(z)| / sum |c_a||z^a|, zero-safe, for one point or a batch."""
    num = np.abs(p(Z))
    den = p.abs_scale(Z)
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), num)


def monomial_matrix(points, degree: int, scaled: bool = True):
    """Rows of degree-d monomials at ``points`` (k x n) in grlex order.

    With ``scaled`` the columns carry sqrt(multinomial) weights so a unit
    vector maps to a unit row; this keeps implicitization well conditioned.
    """
    P = np.asarray(points, dtype=complex)
    n = P.shape[1]
    E = np.array(monomials(n, degree), dtype=np.int64)
    M = np.prod(P[:, None, :] ** E[None, :, :], axis=-1)
    if scaled:
        M = M * np.sqrt(multinomial_weights(n, degree))[None, :]
    return M


def multinomial_weights(n: int, degree: int):
    w = []
    for e in monomials(n, degree):
        m = factorial(degree)
        for k in e:
            m //= factorial(k)
        w.append(float(m))
    return np.array(w)
