"""Exact arithmetic over the rationals: sparse polynomials, matrices, resultants.

Coefficients are :class:`fractions.Fraction` for exact work.  ``MultiPoly``
also accepts Python ``complex`` coefficients so the same container can carry
numeric forms; exactness is then the caller's business.

Monomials are ordered graded-lexicographically with ``x0 > x1 > ... > x{n-1}``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]


class DimensionError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


# ----------------------------------------------------------------------------
# rationals

def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_to_str(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_zero(c) -> bool:
    return c == 0


# ----------------------------------------------------------------------------
# monomial bookkeeping

@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> Tuple[Exponent, ...]:
    """All exponent vectors of total ``degree`` in grlex order (x0 largest)."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def grlex_key(e: Exponent):
    return (sum(e), e)


def exponent_to_str(e: Exponent) -> str:
    return ",".join(str(k) for k in e)


def str_to_exponent(s: str) -> Exponent:
    return tuple(int(k) for k in s.split(","))


# ----------------------------------------------------------------------------
# sparse multivariate polynomials

class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = int(nvars)
        clean: Dict[Exponent, object] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != self.nvars:
                    raise DimensionError(f"exponent {e} does not have length {self.nvars}")
                if not _is_zero(c):
                    clean[e] = c
        self._terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    # -- basic queries --------------------------------------------------
    @property
    def terms(self) -> Dict[Exponent, object]:
        return dict(self._terms)

    def items(self):
        """Terms sorted in descending grlex order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self._terms.values())

    def coeff(self, e: Exponent):
        return self._terms.get(tuple(e), 0)

    def leading(self) -> Tuple[Exponent, object]:
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DimensionError("variable counts differ")
            return other
        if isinstance(other, Number):
            return MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return MultiPoly(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: Dict[Exponent, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.nvars, Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mon = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    # -- calculus and substitution -------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        t = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return MultiPoly(self.nvars, t)

    def evaluate(self, point: Sequence):
        """Evaluate at a point; exact when both sides are exact."""
        if len(point) != self.nvars:
            raise DimensionError("point has wrong length")
        total = 0
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        m = images[0].nvars
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        out = MultiPoly.zero(m)
        for e, c in self._terms.items():
            term = MultiPoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def linear_change(self, S: Sequence[Sequence]) -> "MultiPoly":
        """Return p(S x): variable i becomes sum_j S[i][j] x_j."""
        n = self.nvars
        imgs = [MultiPoly.linear_form([S[i][j] for j in range(n)]) for i in range(n)]
        return self.substitute(imgs)

    def coefficients_in(self, i: int) -> Dict[int, "MultiPoly"]:
        """Split as sum_k c_k * x_i^k with c_k free of x_i."""
        out: Dict[int, Dict[Exponent, object]] = {}
        for e, c in self._terms.items():
            f = list(e)
            k = f[i]
            f[i] = 0
            out.setdefault(k, {})[tuple(f)] = c
        return {k: MultiPoly(self.nvars, t) for k, t in out.items()}

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self._terms.items()})

    # -- division --------------------------------------------------------
    def exact_divide(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient q with self == q * other; raises if the division leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = other.leading()
        rem = dict(self._terms)
        quot: Dict[Exponent, object] = {}
        other_terms = list(other._terms.items())
        while rem:
            e = max(rem, key=grlex_key)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, lead_e))
            if min(qe) < 0:
                raise ArithmeticError("polynomial division is not exact")
            qc = c / lead_c
            quot[qe] = quot.get(qe, 0) + qc
            for oe, oc in other_terms:
                te = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(te, 0) - qc * oc
                if _is_zero(v):
                    rem.pop(te, None)
                else:
                    rem[te] = v
        return MultiPoly(self.nvars, quot)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, (int, Fraction)):
                return rational_to_str(Fraction(c))
            c = complex(c)
            return [c.real, c.imag]

        return {exponent_to_str(e): enc(c) for e, c in self.items()}

    @classmethod
    def from_json(cls, nvars: int, data: Mapping[str, object]) -> "MultiPoly":
        terms = {}
        for k, v in data.items():
            if isinstance(v, list):
                terms[str_to_exponent(k)] = complex(v[0], v[1])
            else:
                terms[str_to_exponent(k)] = as_rational(v)
        return cls(nvars, terms)

    def coefficient_vector(self, degree: int | None = None) -> list:
        """Dense coefficients over ``monomials(nvars, degree)`` (homogeneous forms)."""
        d = self.total_degree() if degree is None else degree
        return [self._terms.get(e, 0) for e in monomials(self.nvars, d)]

    @classmethod
    def from_coefficient_vector(cls, nvars: int, degree: int, vec: Sequence) -> "MultiPoly":
        return cls(nvars, dict(zip(monomials(nvars, degree), vec)))


# ----------------------------------------------------------------------------
# determinants and resultants

def poly_det(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials by cofactor expansion.

    Minors are memoized on (first row, column subset), so a 6x6 matrix costs
    at most 6 * 2^6 small products.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError("polyDet needs a square matrix")
    if n == 0:
        raise DimensionError("empty matrix")
    nv = M[0][0].nvars
    if any(e.nvars != nv for row in M for e in row):
        raise DimensionError("entries must share variableCount")
    memo: Dict[Tuple[int, Tuple[int, ...]], MultiPoly] = {}

    def minor(r: int, cols: Tuple[int, ...]) -> MultiPoly:
        if r == n:
            return MultiPoly.constant(nv, Fraction(1))
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = MultiPoly.zero(nv)
        for k, c in enumerate(cols):
            entry = M[r][c]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:k] + cols[k + 1:])
            term = entry * sub
            acc = acc + (term if k % 2 == 0 else -term)
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def bareiss_det(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free (Bareiss) determinant of a polynomial matrix."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError("square matrix required")
    A = [list(row) for row in M]
    nv = A[0][0].nvars
    sign = 1
    prev = MultiPoly.constant(nv, Fraction(1))
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(nv)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * piv - A[i][k] * A[k][j]
                A[i][j] = num.exact_divide(prev)
            A[i][k] = MultiPoly.zero(nv)
        prev = piv
    det = A[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: int) -> List[List[MultiPoly]]:
    cp = p.coefficients_in(var)
    cq = q.coefficients_in(var)
    m = max(cp)
    n = max(cq)
    nv = p.nvars
    zero = MultiPoly.zero(nv)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in cp.items():
            row[i + (m - k)] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in cq.items():
            row[i + (n - k)] = c
        rows.append(row)
    return rows


def sylvester_resultant(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Resultant of p and q with respect to variable ``var``."""
    if p.is_zero() or q.is_zero():
        raise DegenerateInputError("resultant of a zero polynomial")
    if p.nvars != q.nvars:
        raise DimensionError("variable counts differ")
    if p.degree_in(var) < 1 or q.degree_in(var) < 1:
        raise DegenerateInputError("both polynomials need positive degree in the eliminated variable")
    return bareiss_det(sylvester_matrix(p, q, var))


# ----------------------------------------------------------------------------
# dense rational matrices

class RationalMatrix:
    """Row-major dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = tuple(as_rational(e) for e in entries)
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> List[List[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * other[k, j] for k in range(self.cols)), Fraction(0)))
        return RationalMatrix(self.rows, other.cols, out)

    def __add__(self, other):
        return RationalMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def to_json(self) -> List[List[str]]:
        return [[rational_to_str(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, rows) -> "RationalMatrix":
        return cls.from_rows([[as_rational(x) for x in row] for row in rows])

    def rref(self) -> Tuple[List[List[Fraction]], List[int]]:
        A = self.to_rows()
        pivots = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if A[i][c] != 0), None)
            if p is None:
                continue
            A[r], A[p] = A[p], A[r]
            inv = 1 / A[r][c]
            A[r] = [x * inv for x in A[r]]
            for i in range(self.rows):
                if i != r and A[i][c] != 0:
                    f = A[i][c]
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return A, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionError("square matrix required")
        A = self.to_rows()
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if A[i][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                A[c], A[p] = A[p], A[c]
                det = -det
            det *= A[c][c]
            inv = 1 / A[c][c]
            for i in range(c + 1, n):
                if A[i][c] != 0:
                    f = A[i][c] * inv
                    A[i] = [a - f * b for a, b in zip(A[i], A[c])]
        return det


def exact_nullspace(M: RationalMatrix) -> List[List[Fraction]]:
    """Right nullspace basis in reduced-echelon normal form.

    One vector per free column ``j``: it has a 1 at ``j``, zeros at the other
    free columns, and the negated RREF entries at the pivot columns.
    """
    R, pivots = M.rref()
    free = [j for j in range(M.cols) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * M.cols
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][j]
        basis.append(v)
    return basis


def matvec(M: RationalMatrix, v: Sequence) -> List[Fraction]:
    return [sum((M[i, j] * v[j] for j in range(M.cols)), Fraction(0)) for i in range(M.rows)]


# ----------------------------------------------------------------------------
# univariate polynomials over Q (coefficient lists, constant term first)

def upoly_trim(a: Sequence[Fraction]) -> List[Fraction]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_divmod(a, b):
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lb
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_gcd(a, b) -> List[Fraction]:
    """Monic gcd (the zero polynomial's gcd with a is a, made monic)."""
    a = upoly_trim(a)
    b = upoly_trim(b)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def upoly_diff(a) -> List[Fraction]:
    return upoly_trim([k * c for k, c in enumerate(a)][1:])


def upoly_squarefree(a) -> List[Fraction]:
    a = upoly_trim(a)
    if len(a) <= 2:
        return a
    g = upoly_gcd(a, upoly_diff(a))
    q, r = upoly_divmod(a, g)
    return q


def binary_form_to_upoly(p: MultiPoly, i: int, j: int) -> Tuple[List[Fraction], int]:
    """Dehomogenize a form in variables (x_i, x_j) at x_j = 1.

    Returns coefficients in t = x_i / x_j and the multiplicity of the root at
    x_j = 0 (i.e. the degree lost by dehomogenizing).
    """
    d = p.total_degree()
    coeffs = [Fraction(0)] * (d + 1)
    for e, c in p.terms.items():
        if any(k for idx, k in enumerate(e) if idx not in (i, j)):
            raise ValueError("not a binary form in the requested variables")
        coeffs[e[i]] += c
    coeffs = upoly_trim(coeffs)
    return coeffs, d - (len(coeffs) - 1)


def random_rational_matrix(rng, n: int, bound: int = 5) -> RationalMatrix:
    """Random invertible n x n integer matrix drawn from ``rng``."""
    while True:
        M = RationalMatrix(n, n, [int(v) for v in rng.integers(-bound, bound + 1, size=n * n)])
        if M.det() != 0:
            return M


def symmetric_from_rows(rows) -> RationalMatrix:
    M = RationalMatrix.from_rows(rows)
    if not M.is_symmetric():
        raise ValueError("matrix is not symmetric")
    return M


def matrix_of_linear_forms(mats: Sequence[RationalMatrix]) -> List[List[MultiPoly]]:
    """The matrix sum_k x_k * mats[k] with polynomial entries."""
    n = mats[0].rows
    k = len(mats)
    return [[MultiPoly.linear_form([mats[t][i, j] for t in range(k)]) for j in range(n)]
            for i in range(n)]


def adjugate_column(M: Sequence[Sequence[MultiPoly]], col: int) -> List[MultiPoly]:
    """Column ``col`` of the adjugate: entry i is the (col, i) cofactor."""
    n = len(M)
    out = []
    for i in range(n):
        rows = [r for r in range(n) if r != col]
        cols = [c for c in range(n) if c != i]
        sub = [[M[r][c] for c in cols] for r in rows]
        cof = poly_det(sub)
        out.append(cof if (i + col) % 2 == 0 else -cof)
    return out

