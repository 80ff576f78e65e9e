"""Total-degree homotopy continuation for square homogeneous systems.

The system lives in P^n: ``n`` homogeneous equations in ``n + 1`` variables,
made square by a random affine patch ``a . z = 1``.  Paths start at the roots
of ``z_i^{d_i} - z_0^{d_i}`` and are tracked with an RK4 predictor and a
Newton corrector, all paths advancing together.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..exactcore import monomials
from .poly import NumPoly


class MonomialTable:
    """Evaluates every monomial of one degree at a batch of points."""

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.E = np.array(monomials(nvars, degree), dtype=np.int64)

    def __call__(self, Z):
        # Z: (P, n).  powers[p, j, k] = Z[p, j]**k
        P = Z.shape[0]
        powers = np.ones((P, self.nvars, self.degree + 1), dtype=complex)
        for k in range(1, self.degree + 1):
            powers[:, :, k] = powers[:, :, k - 1] * Z
        out = np.ones((P, len(self.E)), dtype=complex)
        for j in range(self.nvars):
            out *= powers[:, j, self.E[:, j]]
        return out


class DenseSystem:
    """Homogeneous polynomials stored densely per degree for batch evaluation."""

    def __init__(self, polys: Sequence[NumPoly]):
        self.nvars = polys[0].nvars
        self.n = len(polys)
        self.degrees = [p.degree for p in polys]
        self.groups = {}
        for i, p in enumerate(polys):
            d = p.degree
            if not np.all(p.E.sum(axis=1) == d):
                raise ValueError("homotopy targets must be homogeneous")
            self.groups.setdefault(d, []).append(i)
        self.tables = {}
        self.coef = {}
        self.dcoef = {}
        for d, idx in self.groups.items():
            tab = MonomialTable(self.nvars, d)
            self.tables[d] = tab
            if d > 0:
                self.tables.setdefault(d - 1, MonomialTable(self.nvars, d - 1))
            pos = {tuple(e): k for k, e in enumerate(tab.E)}
            C = np.zeros((len(idx), len(tab.E)), dtype=complex)
            for r, i in enumerate(idx):
                for e, c in zip(polys[i].E, polys[i].c):
                    C[r, pos[tuple(e)]] += c
            self.coef[d] = C
            if d > 0:
                low = MonomialTable(self.nvars, d - 1)
                lpos = {tuple(e): k for k, e in enumerate(low.E)}
                D = np.zeros((len(idx), self.nvars, len(low.E)), dtype=complex)
                for k, e in enumerate(tab.E):
                    for j in range(self.nvars):
                        if e[j]:
                            f = list(e)
                            f[j] -= 1
                            D[:, j, lpos[tuple(f)]] += C[:, k] * e[j]
                self.dcoef[d] = D

    def evaluate(self, Z, jacobian=True):
        P = Z.shape[0]
        F = np.zeros((P, self.n), dtype=complex)
        J = np.zeros((P, self.n, self.nvars), dtype=complex) if jacobian else None
        cache = {}
        for d, idx in self.groups.items():
            if d not in cache:
                cache[d] = self.tables[d](Z)
            F[:, idx] = cache[d] @ self.coef[d].T
            if jacobian and d > 0:
                if d - 1 not in cache:
                    cache[d - 1] = self.tables[d - 1](Z)
                J[:, idx, :] = np.einsum("pm,ijm->pij", cache[d - 1], self.dcoef[d])
        return F, J

    def abs_scale(self, Z):
        P = Z.shape[0]
        S = np.zeros((P, self.n))
        for d, idx in self.groups.items():
            S[:, idx] = np.abs(self.tables[d](Z)) @ np.abs(self.coef[d]).T
        return S


@dataclass
class HomotopyResult:
    points: np.ndarray          # (P, n+1) endpoints on the patch
    converged: np.ndarray       # bool (P,)
    residuals: np.ndarray       # max relative residual per endpoint
    condition: np.ndarray       # 1-norm condition estimate of the patched Jacobian
    steps: np.ndarray
    path_count: int

    def regular(self, max_residual=1e-9, max_condition=1e10):
        ok = self.converged & (self.residuals < max_residual) & (self.condition < max_condition)
        return self.points[ok]


def _start_system(degrees, Z):
    P, N = Z.shape
    n = N - 1
    G = np.zeros((P, n), dtype=complex)
    JG = np.zeros((P, n, N), dtype=complex)
    for i, d in enumerate(degrees):
        G[:, i] = Z[:, i + 1] ** d - Z[:, 0] ** d
        JG[:, i, i + 1] = d * Z[:, i + 1] ** (d - 1)
        JG[:, i, 0] = -d * Z[:, 0] ** (d - 1)
    return G, JG


def solve_projective(polys: Sequence[NumPoly], rng, *, hmax=0.05, hmin=1e-9,
                     max_steps=4000, corrector_tol=1e-10) -> HomotopyResult:
    """Track all total-degree start paths to the targets ``polys``."""
    system = DenseSystem(polys)
    n = system.n
    N = system.nvars
    if N != n + 1:
        raise ValueError("need n homogeneous equations in n+1 variables")
    degrees = system.degrees
    gamma = np.exp(2j * np.pi * rng.random())
    a = rng.normal(size=N) + 1j * rng.normal(size=N)
    a /= np.linalg.norm(a)

    grids = np.meshgrid(*[np.arange(d) for d in degrees], indexing="ij")
    ks = np.stack([g.ravel() for g in grids], axis=1) if n else np.zeros((1, 0))
    P = ks.shape[0]
    Z = np.ones((P, N), dtype=complex)
    for i, d in enumerate(degrees):
        Z[:, i + 1] = np.exp(2j * np.pi * ks[:, i] / d)
    Z = Z / (Z @ a)[:, None]

    def H_and_J(Zb, tb):
        F, JF = system.evaluate(Zb)
        G, JG = _start_system(degrees, Zb)
        s = (1 - tb)[:, None]
        Hv = s * gamma * G + tb[:, None] * F
        Jv = s[:, :, None] * gamma * JG + tb[:, None, None] * JF
        Ht = F - gamma * G
        Hfull = np.concatenate([Hv, (Zb @ a - 1)[:, None]], axis=1)
        Jfull = np.concatenate([Jv, np.broadcast_to(a, (Zb.shape[0], 1, N))], axis=1)
        Htfull = np.concatenate([Ht, np.zeros((Zb.shape[0], 1))], axis=1)
        return Hfull, Jfull, Htfull

    def velocity(Zb, tb):
        _, Jb, Htb = H_and_J(Zb, tb)
        try:
            return -np.linalg.solve(Jb, Htb[..., None])[..., 0]
        except np.linalg.LinAlgError:
            out = np.zeros_like(Zb)
            for k in range(Zb.shape[0]):
                out[k] = -np.linalg.lstsq(Jb[k], Htb[k], rcond=None)[0]
            return out

    t = np.zeros(P)
    h = np.full(P, 0.01)
    steps = np.zeros(P, dtype=int)
    active = np.ones(P, dtype=bool)
    failed = np.zeros(P, dtype=bool)

    while active.any():
        idx = np.nonzero(active)[0]
        Zb = Z[idx]
        tb = t[idx]
        hb = np.minimum(h[idx], 1.0 - tb)
        with np.errstate(all="ignore"):
            k1 = velocity(Zb, tb)
            k2 = velocity(Zb + 0.5 * hb[:, None] * k1, tb + 0.5 * hb)
            k3 = velocity(Zb + 0.5 * hb[:, None] * k2, tb + 0.5 * hb)
            k4 = velocity(Zb + hb[:, None] * k3, tb + hb)
            Zp = Zb + hb[:, None] / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            tn = tb + hb
            ok = np.all(np.isfinite(Zp), axis=1)
            first = None
            last = None
            for it in range(3):
                Hc, Jc, _ = H_and_J(Zp, tn)
                try:
                    dz = np.linalg.solve(Jc, Hc[..., None])[..., 0]
                except np.linalg.LinAlgError:
                    dz = np.full_like(Zp, np.nan)
                    for k in range(Zp.shape[0]):
                        try:
                            dz[k] = np.linalg.solve(Jc[k], Hc[k])
                        except np.linalg.LinAlgError:
                            pass
                Zp = Zp - dz
                nd = np.linalg.norm(dz, axis=1) / np.maximum(1.0, np.linalg.norm(Zp, axis=1))
                if first is None:
                    first = nd
                last = nd
            ok &= np.isfinite(last) & (last < corrector_tol) & (first < 1e-2)
        steps[idx] += 1
        # accept
        acc = idx[ok]
        Z[acc] = Zp[ok]
        t[acc] = tn[ok]
        h[acc] = np.minimum(h[acc] * 1.6, hmax)
        rej = idx[~ok]
        h[rej] *= 0.5
        done = acc[t[acc] >= 1.0 - 1e-15]
        active[done] = False
        dead = idx[(h[idx] < hmin) | (steps[idx] >= max_steps)]
        dead = dead[active[dead]]
        failed[dead] = True
        active[dead] = False

    # Newton polish on the target system
    ones = np.ones(P)
    with np.errstate(all="ignore"):
        for _ in range(6):
            Hc, Jc, _ = H_and_J(Z, ones)
            for k in range(P):
                try:
                    Z[k] = Z[k] - np.linalg.solve(Jc[k], Hc[k])
                except np.linalg.LinAlgError:
                    pass
        F, _ = system.evaluate(Z, jacobian=False)
        scale = system.abs_scale(Z)
        res = np.max(np.abs(F) / np.maximum(scale, 1e-300), axis=1)
        _, Jc, _ = H_and_J(Z, ones)
        cond = np.array([np.linalg.cond(Jc[k], 1) if np.all(np.isfinite(Jc[k])) else np.inf
                         for k in range(P)])
    res = np.where(np.isfinite(res), res, np.inf)
    return HomotopyResult(points=Z, converged=~failed & np.all(np.isfinite(Z), axis=1),
                          residuals=res, condition=cond, steps=steps, path_count=P)


def random_combinations(polys: Sequence[NumPoly], k: int, rng) -> List[NumPoly]:
    """k random complex combinations of homogeneous polynomials of one degree."""
    d = polys[0].degree
    n = polys[0].nvars
    E = np.array(monomials(n, d), dtype=np.int64)
    pos = {tuple(e): i for i, e in enumerate(E)}
    dense = np.zeros((len(polys), len(E)), dtype=complex)
    for r, p in enumerate(polys):
        for e, c in zip(p.E, p.c):
            dense[r, pos[tuple(e)]] += c
    W = rng.normal(size=(k, len(polys))) + 1j * rng.normal(size=(k, len(polys)))
    return [NumPoly(E, W[i] @ dense, n) for i in range(k)]
