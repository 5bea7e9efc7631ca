"""Exact linear algebra over the prime field GF(p).

Vectors and matrices are numpy int64 arrays with entries reduced into
[0, p).  Every function reduces its output mod p, so callers may pass
unreduced integer data.  Matrices act on column vectors.
"""

from __future__ import annotations

import numpy as np

from .errors import DegreeOverflow, DimMismatch, ZeroInverse


def asvec(v, p: int) -> np.ndarray:
    a = np.asarray(v, dtype=np.int64) % p
    if a.ndim != 1:
        raise DimMismatch(f"expected a vector, got shape {a.shape}")
    return a


def asmat(m, p: int) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise DimMismatch(f"expected a matrix, got shape {a.shape}")
    return a


def inv(a: int, p: int) -> int:
    """Multiplicative inverse in GF(p)."""
    a = int(a) % p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def zeros(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def unit(n: int, j: int) -> np.ndarray:
    e = zeros(n)
    e[j] = 1
    return e


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Rows are processed top-down and the pivot is the first nonzero entry
    found scanning down the current column, which keeps the output
    deterministic.
    """
    a = asmat(m, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = None
        for i in range(r, rows):
            if a[i, c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv(int(a[r, c]), p)) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


def det(m, p: int) -> int:
    """Determinant mod p by fraction-free elimination."""
    a = asmat(m, p).copy()
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimMismatch("determinant needs a square matrix")
    d = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if a[i, c] != 0:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            a[[c, pr]] = a[[pr, c]]
            d = (-d) % p
        piv = int(a[c, c])
        d = (d * piv) % p
        ipiv = inv(piv, p)
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i] = (a[i] - a[i, c] * ipiv * a[c]) % p
    return d


def kernel(m, p: int) -> list[np.ndarray]:
    """Basis of the right null space {v : Mv = 0}, in reduced echelon form."""
    a = asmat(m, p)
    rows, cols = a.shape
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r[i, f]) % p
        basis.append(v)
    if not basis:
        return []
    stacked, _ = rref(np.stack(basis), p)
    return [stacked[i].copy() for i in range(stacked.shape[0]) if stacked[i].any()]


def solve(m, b, p: int) -> np.ndarray | None:
    """Some x with Mx = b, or None.  Free variables are set to 0."""
    a = asmat(m, p)
    rhs = asvec(b, p)
    rows, cols = a.shape
    if rhs.shape[0] != rows:
        raise DimMismatch("solve: shape mismatch")
    aug, pivots = rref(np.hstack([a, rhs[:, None]]), p)
    if cols in pivots:
        return None
    x = zeros(cols)
    for i, c in enumerate(pivots):
        x[c] = aug[i, cols]
    return x


def mat_inv(m, p: int) -> np.ndarray | None:
    """Matrix inverse mod p, or None when singular."""
    a = asmat(m, p)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimMismatch("inverse needs a square matrix")
    aug, pivots = rref(np.hstack([a, eye(n)]), p)
    if pivots != list(range(n)):
        return None
    return aug[:, n:].copy()


def mat_pow(m, k: int, p: int) -> np.ndarray:
    a = asmat(m, p)
    out = eye(a.shape[0])
    for _ in range(k):
        out = (out @ a) % p
    return out


def all_vectors(n: int, p: int) -> np.ndarray:
    """All p**n vectors of GF(p)^n as rows; row index equals vec_index."""
    idx = np.arange(p**n, dtype=np.int64)
    pows = p ** np.arange(n, dtype=np.int64)
    return (idx[:, None] // pows[None, :]) % p


def vec_index(x, p: int) -> np.ndarray | int:
    """Index of a vector (or batch of row vectors) in the all_vectors order."""
    a = np.asarray(x, dtype=np.int64) % p
    pows = p ** np.arange(a.shape[-1], dtype=np.int64)
    return a @ pows


class PolyVec:
    """Vector-valued polynomial in one formal variable over GF(p).

    Coefficients are stored densely as the rows of a [deg+1, n] array with
    trailing zero coefficient vectors trimmed away.
    """

    def __init__(self, coeffs, p: int):
        a = np.asarray(coeffs, dtype=np.int64) % p
        if a.ndim != 2:
            raise DimMismatch("PolyVec wants a [deg+1, n] coefficient array")
        if a.shape[0] == 0:
            a = np.zeros((1, a.shape[1]), dtype=np.int64)
        last = 0
        for d in range(a.shape[0]):
            if a[d].any():
                last = d
        self.coeffs = a[: last + 1].copy()
        self.p = p

    @classmethod
    def constant(cls, v, p: int) -> "PolyVec":
        return cls(asvec(v, p)[None, :], p)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def coeff(self, d: int) -> np.ndarray:
        if d > self.degree:
            return zeros(self.n)
        return self.coeffs[d].copy()

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def eval_at(self, k: int) -> np.ndarray:
        out = zeros(self.n)
        kk = 1
        for d in range(self.degree + 1):
            out = (out + kk * self.coeffs[d]) % self.p
            kk = (kk * k) % self.p
        return out


def polyvec_apply(ops, v: PolyVec, max_degree: int) -> PolyVec:
    """Apply a composition of degree-<=1 matrix operators to a PolyVec.

    Each operator is a pair (m0, m1) standing for the matrix m0 + k*m1.
    The list is composed left-to-right as written, so ops[-1] acts first.
    Raises DegreeOverflow if a nonzero coefficient beyond max_degree shows
    up, which signals misuse: all supported expansions stay below p.
    """
    p = v.p
    cur = v.coeffs
    for m0, m1 in reversed(list(ops)):
        a0 = asmat(m0, p)
        a1 = asmat(m1, p)
        deg = cur.shape[0] - 1
        out = np.zeros((deg + 2, cur.shape[1]), dtype=np.int64)
        for d in range(deg + 1):
            out[d] = (out[d] + a0 @ cur[d]) % p
            out[d + 1] = (out[d + 1] + a1 @ cur[d]) % p
        cur = PolyVec(out, p).coeffs
        if cur.shape[0] - 1 > max_degree:
            raise DegreeOverflow(
                f"degree {cur.shape[0] - 1} exceeds cap {max_degree}"
            )
    return PolyVec(cur, p)
