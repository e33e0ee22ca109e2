"""Exact linear algebra over the prime field Z/pZ.

Vectors are 1-D numpy int64 arrays and matrices are square 2-D arrays, always
stored reduced to [0, p).  The modulus travels as an explicit function
argument rather than living inside an element type; mixing moduli is a caller
error and hot loops stay plain numpy this way.  All matrices act on row
vectors from the right: v -> v @ A.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotUnipotentError, SingularSystemError

__all__ = [
    "is_prime",
    "fpvector",
    "fpmatrix",
    "identity",
    "vec_act",
    "mat_mul",
    "mat_pow",
    "rank",
    "solve_row_system",
    "solve_row_system_many",
    "nilpotency_degree",
    "binom_mod",
    "binomial_expansion_check",
]


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (desk-scale moduli only)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def fpvector(coords, p: int) -> np.ndarray:
    """Canonical length-d vector over F_p, entries reduced to [0, p)."""
    v = np.asarray(coords, dtype=np.int64) % p
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def fpmatrix(rows, p: int) -> np.ndarray:
    """Canonical square matrix over F_p, entries reduced to [0, p)."""
    A = np.asarray(rows, dtype=np.int64) % p
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.int64)


def vec_act(v: np.ndarray, A: np.ndarray, p: int) -> np.ndarray:
    """Image of the row vector v under A, reduced mod p."""
    v = np.asarray(v, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64)
    if v.shape[-1] != A.shape[0]:
        raise ValueError(f"dimension mismatch: vector {v.shape} vs matrix {A.shape}")
    return (v @ A) % p


def mat_mul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return (A @ B) % p


def mat_pow(A: np.ndarray, x: int, p: int) -> np.ndarray:
    """A**x mod p by square-and-multiply; A**0 is the identity."""
    if x < 0:
        raise ValueError("exponent must be nonnegative")
    result = identity(len(A))
    base = np.asarray(A, dtype=np.int64) % p
    while x:
        if x & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        x >>= 1
    return result


def rank(A: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination (no pivoting tricks, exact)."""
    M = (np.asarray(A, dtype=np.int64) % p).copy()
    if M.ndim != 2:
        raise ValueError("rank expects a 2-D array")
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols):
        hits = np.flatnonzero(M[r:, c])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        below = M[r + 1 :, c]
        if below.size:
            M[r + 1 :] = (M[r + 1 :] - np.outer(below, M[r])) % p
        r += 1
        if r == nrows:
            break
    return r


def solve_row_system(B: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray:
    """Solve x @ B = rhs for the row vector x over F_p.

    Free variables are set to zero; raises SingularSystemError when the
    system is inconsistent.
    """
    B = np.asarray(B, dtype=np.int64) % p
    rhs = np.asarray(rhs, dtype=np.int64) % p
    # x @ B = rhs  <=>  B.T @ x.T = rhs.T
    M = np.concatenate([B.T, rhs.reshape(-1, 1)], axis=1).copy()
    nrows, n = M.shape[0], B.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        hits = np.flatnonzero(M[r:, c])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        others = np.flatnonzero(M[:, c])
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if M[i, -1] % p:
            raise SingularSystemError("row system has no solution over F_p")
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = M[row, -1]
    return x


def solve_row_system_many(B: np.ndarray, W: np.ndarray, p: int) -> np.ndarray:
    """Solve X @ B = W rowwise for an invertible square B over F_p.

    Gauss-Jordan on [B.T | W.T] with every right-hand side eliminated at
    once; raises SingularSystemError when B is singular.
    """
    B = np.asarray(B, dtype=np.int64) % p
    W = np.asarray(W, dtype=np.int64) % p
    d = B.shape[0]
    M = np.concatenate([B.T, W.T], axis=1).copy()
    for c in range(d):
        hits = np.flatnonzero(M[c:, c])
        if hits.size == 0:
            raise SingularSystemError("matrix is singular mod p")
        piv = c + int(hits[0])
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
        M[c] = (M[c] * pow(int(M[c, c]), p - 2, p)) % p
        col = M[:, c].copy()
        col[c] = 0
        M = (M - np.outer(col, M[c])) % p
    return M[:, d:].T


def nilpotency_degree(A: np.ndarray, p: int) -> int:
    """Least k >= 1 with (A - I)^k = 0.

    Raises NotUnipotentError when (A - I)^d is nonzero, i.e. the matrix has an
    eigenvalue other than 1 and the unipotence precondition was violated.
    """
    A = np.asarray(A, dtype=np.int64) % p
    d = len(A)
    N = (A - identity(d)) % p
    P = N
    for k in range(1, d + 1):
        if not P.any():
            return k
        P = (P @ N) % p
    raise NotUnipotentError(f"(A - I)^{d} != 0, matrix is not unipotent")


def binom_mod(x: int, i: int, p: int) -> int:
    """Binomial coefficient C(x, i) as the degree-i polynomial
    x(x-1)...(x-i+1)/i! evaluated over F_p.

    Requires 0 <= i < p so that i! is invertible; x is read modulo p.
    """
    if not 0 <= i < p:
        raise ValueError(f"binomial degree must satisfy 0 <= i < p, got i={i}, p={p}")
    x %= p
    num = 1
    for j in range(i):
        num = num * ((x - j) % p) % p
    return num * pow(math.factorial(i) % p, p - 2, p) % p


def binomial_expansion_check(A: np.ndarray, x: int, k: int, p: int) -> bool:
    """Whether A^x equals sum_{i<k} C(x,i) (A-I)^i over F_p.

    Holds for every unipotent A of nilpotency degree k and every x >= 0;
    exposed as a self-check rather than an optimization.
    """
    A = np.asarray(A, dtype=np.int64) % p
    d = len(A)
    N = (A - identity(d)) % p
    total = np.zeros((d, d), dtype=np.int64)
    term = identity(d)
    for i in range(k):
        total = (total + binom_mod(x, i, p) * term) % p
        term = (term @ N) % p
    return bool(np.array_equal(mat_pow(A, x, p), total))
