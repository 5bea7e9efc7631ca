"""Hom-Lie algebras over GF(p): domain types and axiom verifiers.

A Hom-Lie algebra is a vector space with an alternating bracket and a
twist map alpha satisfying the alpha-twisted Jacobi identity; it is
multiplicative when alpha preserves the bracket and quadratic when it
carries a compatible invariant form.  All multilinear axioms are checked
on basis tuples, which suffices by linearity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gfp
from .errors import DimMismatch
from .report import Report


class HomLieAlgebra:
    """Structure-constant model of (g, [.,.], alpha).

    The tensor c satisfies [e_i, e_j] = sum_k c[i,j,k] e_k.  Construction
    via from_upper enforces c[i,i,.] = 0 and c[j,i,.] = -c[i,j,.], so the
    alternating and antisymmetry axioms hold by construction; parsing
    untrusted tensors goes through the plain constructor and relies on
    verify_hom_lie instead.
    """

    def __init__(self, p: int, c, alpha, basis_names=None):
        self.p = int(p)
        self.c = np.asarray(c, dtype=np.int64) % p
        self.alpha = gfp.asmat(alpha, p)
        n = self.c.shape[0]
        if self.c.shape != (n, n, n) or self.alpha.shape != (n, n):
            raise DimMismatch("structure tensor and twist shapes disagree")
        self.n = n
        self.basis_names = list(basis_names) if basis_names else [f"e{i+1}" for i in range(n)]
        self._alpha_pows: list[np.ndarray] = [gfp.eye(n)]

    @classmethod
    def from_upper(cls, p: int, n: int, brackets: dict, alpha=None, basis_names=None):
        """Build from {(i, j): vector} with i < j; lower half is derived by sign."""
        c = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), v in brackets.items():
            if not 0 <= i < j < n:
                raise DimMismatch(f"bracket index ({i},{j}) must satisfy 0 <= i < j < {n}")
            vec = gfp.asvec(v, p)
            c[i, j] = vec
            c[j, i] = (-vec) % p
        if alpha is None:
            alpha = gfp.eye(n)
        return cls(p, c, alpha, basis_names)

    def alpha_pow(self, k: int) -> np.ndarray:
        while len(self._alpha_pows) <= k:
            self._alpha_pows.append((self._alpha_pows[-1] @ self.alpha) % self.p)
        return self._alpha_pows[k]

    def bracket(self, x, y) -> np.ndarray:
        x = gfp.asvec(x, self.p)
        y = gfp.asvec(y, self.p)
        if x.shape[0] != self.n or y.shape[0] != self.n:
            raise DimMismatch("bracket arguments must have the algebra dimension")
        return np.einsum("a,b,abk->k", x, y, self.c) % self.p

    def ad(self, x) -> np.ndarray:
        """Matrix of ad(x) = [x, .], acting on column vectors."""
        x = gfp.asvec(x, self.p)
        return np.einsum("a,abk->kb", x, self.c) % self.p

    def ad_batch(self, xs) -> np.ndarray:
        """Batched adjoint maps in [batch, in, out] layout.

        Composition of maps in this layout is plain matmul with the inner
        factor on the left, which is what the batched tower code uses.
        """
        xs = np.asarray(xs, dtype=np.int64) % self.p
        return np.einsum("ma,abk->mbk", xs, self.c) % self.p

    def apply_alpha(self, x, k: int = 1) -> np.ndarray:
        return (self.alpha_pow(k) @ gfp.asvec(x, self.p)) % self.p

    def is_involutive(self) -> bool:
        return np.array_equal(self.alpha_pow(2), gfp.eye(self.n))


@dataclass
class BilinearForm:
    gram: np.ndarray
    p: int

    def __init__(self, gram, p: int):
        self.p = int(p)
        self.gram = gfp.asmat(gram, p)

    def eval(self, x, y) -> int:
        x = gfp.asvec(x, self.p)
        y = gfp.asvec(y, self.p)
        return int(x @ self.gram @ y % self.p)

    def eval_batch(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64) % self.p
        ys = np.asarray(ys, dtype=np.int64) % self.p
        return np.einsum("mi,ij,mj->m", xs, self.gram, ys) % self.p

    def is_symmetric(self) -> bool:
        return np.array_equal(self.gram, self.gram.T % self.p)

    def is_nondegenerate(self) -> bool:
        return gfp.det(self.gram, self.p) != 0


@dataclass
class Derivation:
    """Linear map with a twist degree: a candidate alpha^k-derivation."""

    mat: np.ndarray
    k: int = 1
    p: int = 0

    def __init__(self, mat, p: int, k: int = 1):
        self.p = int(p)
        self.mat = gfp.asmat(mat, p)
        self.k = int(k)

    def __call__(self, x) -> np.ndarray:
        return (self.mat @ gfp.asvec(x, self.p)) % self.p


@dataclass
class Subspace:
    basis: np.ndarray  # rows in reduced echelon form
    p: int

    @classmethod
    def from_vectors(cls, vectors, n: int, p: int) -> "Subspace":
        vecs = [gfp.asvec(v, p) for v in vectors]
        if not vecs:
            return cls(np.zeros((0, n), dtype=np.int64), p)
        r, _ = gfp.rref(np.stack(vecs), p)
        keep = [i for i in range(r.shape[0]) if r[i].any()]
        return cls(r[keep].copy(), p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def reduce(self, v) -> np.ndarray:
        """Residue of v after eliminating the subspace's pivot coordinates."""
        v = gfp.asvec(v, self.p).copy()
        for row in self.basis:
            c = int(np.argmax(row != 0)) if row.any() else None
            if c is not None and v[c] != 0:
                v = (v - v[c] * row) % self.p
        return v

    def vectors(self):
        return [self.basis[i].copy() for i in range(self.dim)]


def verify_hom_lie(A: HomLieAlgebra) -> Report:
    """Check alternating, antisymmetry, Hom-Jacobi and multiplicativity.

    An empty failure set means A is a multiplicative Hom-Lie algebra.
    """
    p, n, c = A.p, A.n, A.c
    rep = Report(p=p, dim=n)
    for i in range(n):
        rep.record("alternating", not c[i, i].any(), (i, i), lhs=c[i, i], rhs=0)
    anti = (c + c.transpose(1, 0, 2)) % p
    for i, j in zip(*np.nonzero(anti.any(axis=2))):
        if i < j:
            rep.record("antisymmetry", False, (int(i), int(j)), lhs=c[i, j], rhs=(-c[j, i]) % p)
    rep.check("antisymmetry").passed += n * (n - 1) // 2 - rep.check("antisymmetry").failed

    ada = np.einsum("ai,abk->ibk", A.alpha, c) % p  # ad(alpha(e_i)) in [i, in, out] layout
    t1 = np.einsum("ibm,jkb->ijkm", ada, c) % p  # [alpha(e_i), [e_j, e_k]]
    jac = (t1 + t1.transpose(1, 2, 0, 3) + t1.transpose(2, 0, 1, 3)) % p
    bad = np.nonzero(jac.any(axis=3))
    rep.check("hom_jacobi").passed = n**3 - len(bad[0])
    for i, j, k in zip(*bad):
        rep.record(
            "hom_jacobi", False, (int(i), int(j), int(k)),
            lhs=jac[i, j, k], rhs=np.zeros(n, dtype=np.int64),
        )

    lhs = np.einsum("mk,ijk->ijm", A.alpha, c) % p
    rhs = np.einsum("ai,bj,abm->ijm", A.alpha, A.alpha, c) % p
    bad = np.nonzero(((lhs - rhs) % p).any(axis=2))
    rep.check("multiplicativity").passed = n**2 - len(bad[0])
    for i, j in zip(*bad):
        rep.record("multiplicativity", False, (int(i), int(j)), lhs=lhs[i, j], rhs=rhs[i, j])
    return rep


def verify_quadratic(A: HomLieAlgebra, B: BilinearForm) -> Report:
    """Symmetry, nondegeneracy, invariance and twist self-adjointness of B."""
    p, n, c, g = A.p, A.n, A.c, B.gram
    rep = Report(p=p, dim=n)
    rep.record("symmetric", B.is_symmetric(), (), lhs=g, rhs=g.T % p)
    rep.record("nondegenerate", B.is_nondegenerate(), (), lhs=gfp.det(g, p), rhs="nonzero")

    lhs = np.einsum("ijm,mk->ijk", c, g) % p  # B([e_i,e_j], e_k)
    rhs = np.einsum("im,jkm->ijk", g, c) % p  # B(e_i, [e_j,e_k])
    bad = np.nonzero((lhs - rhs) % p)
    rep.check("invariance").passed = n**3 - len(bad[0])
    for i, j, k in zip(*bad):
        rep.record(
            "invariance", False, (int(i), int(j), int(k)),
            lhs=int(lhs[i, j, k]), rhs=int(rhs[i, j, k]),
        )

    lhs = (A.alpha.T @ g) % p  # B(alpha(e_i), e_j)
    rhs = (g @ A.alpha) % p  # B(e_i, alpha(e_j))
    bad = np.nonzero((lhs - rhs) % p)
    rep.check("twist_self_adjoint").passed = n**2 - len(bad[0])
    for i, j in zip(*bad):
        rep.record(
            "twist_self_adjoint", False, (int(i), int(j)),
            lhs=int(lhs[i, j]), rhs=int(rhs[i, j]),
        )
    return rep


def verify_derivation(A: HomLieAlgebra, D: Derivation) -> Report:
    """alpha^k-derivation axioms: twist-commutation plus the Leibniz rule."""
    p, n = A.p, A.n
    rep = Report(p=p, dim=n, degree=D.k)
    comm = (D.mat @ A.alpha - A.alpha @ D.mat) % p
    rep.record("twist_commute", not comm.any(), (), lhs=(D.mat @ A.alpha) % p, rhs=(A.alpha @ D.mat) % p)
    ak = A.alpha_pow(D.k)
    lhs = np.einsum("kb,ijb->ijk", D.mat, A.c) % p  # D([e_i, e_j])
    adk = np.einsum("ai,abk->ibk", ak, A.c) % p  # ad(alpha^k(e_i))
    dm = np.einsum("ai,abk->ibk", D.mat, A.c) % p  # ad(D(e_i))
    # [D(e_i), alpha^k(e_j)] = -[alpha^k(e_j), D(e_i)]
    t1 = (-np.einsum("jbk,bi->ijk", adk, D.mat)) % p
    t2 = np.einsum("ibk,bj->ijk", adk, D.mat) % p  # [alpha^k(e_i), D(e_j)]
    bad = np.nonzero(((lhs - t1 - t2) % p).any(axis=2))
    rep.check("leibniz").passed = n**2 - len(bad[0])
    for i, j in zip(*bad):
        rep.record(
            "leibniz", False, (int(i), int(j)),
            lhs=lhs[i, j], rhs=(t1[i, j] + t2[i, j]) % p,
        )
    return rep


def is_derivation(A: HomLieAlgebra, D: Derivation) -> bool:
    return verify_derivation(A, D).ok


def center(A: HomLieAlgebra) -> Subspace:
    """{x : [x, y] = 0 for all y}, via the kernel of the stacked adjoints."""
    stacked = A.c.transpose(1, 2, 0).reshape(A.n * A.n, A.n)
    return Subspace.from_vectors(gfp.kernel(stacked, A.p), A.n, A.p)


def centralizer_of_image(A: HomLieAlgebra, M) -> Subspace:
    """{x : [x, M e_j] = 0 for all j} for a linear map M."""
    m = gfp.asmat(M, A.p)
    rows = np.einsum("abk,bj->jka", A.c, m).reshape(A.n * A.n, A.n) % A.p
    return Subspace.from_vectors(gfp.kernel(rows, A.p), A.n, A.p)


def orth(B: BilinearForm, S: Subspace) -> Subspace:
    """Orthogonal complement {x : B(x, s) = 0 for all s in S}."""
    n = B.gram.shape[0]
    if S.dim == 0:
        return Subspace(gfp.eye(n), B.p)
    rows = (S.basis @ B.gram.T) % B.p
    return Subspace.from_vectors(gfp.kernel(rows, B.p), n, B.p)


def is_ideal(A: HomLieAlgebra, S: Subspace) -> bool:
    """alpha(S) <= S and [S, g] <= S."""
    for s in S.vectors():
        if not S.contains(A.apply_alpha(s)):
            return False
        for j in range(A.n):
            if not S.contains(A.bracket(s, gfp.unit(A.n, j))):
                return False
    return True


def is_nondegenerate_ideal(A: HomLieAlgebra, B: BilinearForm, S: Subspace) -> bool:
    """Ideal whose restricted form has full rank; S = 0 counts vacuously."""
    if not is_ideal(A, S):
        return False
    if S.dim == 0:
        return True
    restricted = (S.basis @ B.gram @ S.basis.T) % A.p
    return gfp.rank(restricted, A.p) == S.dim


def d_invariant(B: BilinearForm, D: Derivation, p: int) -> bool:
    """D-invariance of B: B(x, D(x)) = 0 in char 2, skewness otherwise.

    In char 2 the quadratic condition is equivalent to a zero diagonal of
    G*D plus symmetry of the polarized form, so a basis-level matrix test
    is exact.
    """
    g, d = B.gram, D.mat
    m = (d.T @ g) % p
    if p == 2:
        return not np.diagonal(m).any() and np.array_equal(m, m.T % p)
    return not ((m + g @ d) % p).any()
