"""Exact dense linear algebra over a prime field GF(p).

Matrices hold small integer entries in [0, p) inside numpy int64 arrays;
all arithmetic is done mod p, so there are no tolerances anywhere.
Gaussian elimination picks the first non-zero pivot in column order,
which keeps echelon forms, kernels and cokernels deterministic.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

DEFAULT_PRIME = 2


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FieldElem:
    """A scalar in GF(p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int = DEFAULT_PRIME):
        if not is_prime(modulus):
            raise DimensionMismatchError(f"modulus {modulus} is not prime")
        self.value = value % modulus
        self.modulus = modulus

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.value == other.value
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"FieldElem({self.value}, mod {self.modulus})"


class Matrix:
    """Dense matrix over GF(p).  Treat instances as immutable."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int = DEFAULT_PRIME, shape=None):
        if not is_prime(p):
            raise DimensionMismatchError(f"modulus {p} is not prime")
        if shape is not None:
            a = np.asarray(entries, dtype=np.int64).reshape(shape)
        else:
            a = np.asarray(entries, dtype=np.int64)
            if a.ndim != 2:
                raise DimensionMismatchError("matrix entries must form a 2-d grid")
        self.a = a % p
        self.p = p

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(int(self.a[i, j]), self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self.a.T, self.p)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.a.tolist()}, p={self.p})"

    def tolist(self):
        return self.a.tolist()


def _check_same_field(*ms: Matrix):
    p = ms[0].p
    if any(m.p != p for m in ms):
        raise DimensionMismatchError("matrices live over different prime fields")
    return p


def _rref(a: np.ndarray, p: int):
    """Reduced row echelon form mod p.  Returns (R, pivot_columns)."""
    r = a.copy() % p
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        inv = pow(int(r[row, col]), p - 2, p)
        r[row] = (r[row] * inv) % p
        factor = r[:, col].copy()
        factor[row] = 0
        r = (r - np.outer(factor, r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m: Matrix) -> int:
    """Row-echelon rank over GF(p)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _rref(m.a, m.p)
    return len(pivots)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of ker(m); m @ result == 0 exactly."""
    n = m.cols
    if n == 0:
        return Matrix.zeros(0, 0, m.p)
    if m.rows == 0:
        return Matrix.identity(n, m.p)
    r, pivots = _rref(m.a, m.p)
    free = [c for c in range(n) if c not in pivots]
    k = np.zeros((n, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        k[fc, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-int(r[i, fc])) % m.p
    return Matrix(k, m.p)


def cokernel_projection(m: Matrix):
    """Quotient map onto coker(m) = target / im(m).

    Returns (Q, q) where Q is a full-row-rank q x rows matrix with
    Q @ m == 0 and q = rows - rank(m); ker(Q) = im(m) by dimension count.
    """
    q_matrix = kernel_basis(m.transpose()).transpose()
    return q_matrix, q_matrix.rows


def matmul(a: Matrix, b: Matrix) -> Matrix:
    p = _check_same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return Matrix((a.a @ b.a) % p, p)


def hstack(*ms: Matrix) -> Matrix:
    p = _check_same_field(*ms)
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise DimensionMismatchError("hstack needs equal row counts")
    return Matrix(np.hstack([m.a for m in ms]), p)


def vstack(*ms: Matrix) -> Matrix:
    p = _check_same_field(*ms)
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise DimensionMismatchError("vstack needs equal column counts")
    return Matrix(np.vstack([m.a for m in ms]), p)
