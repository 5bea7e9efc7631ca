"""Double extensions of quadratic Hom-Lie algebras and their converse.

The one-dimensional double extension enlarges a quadratic algebra V to
L = span{e*} + V + span{e} using a derivation line and a central line,
with the bracket twisted by the form.  In the canonical frame e* sits at
index 0, the V basis at 1..n, and e at index n+1.  The reduction
operation recovers all construction data from such an L, and a further
variant extends V by a whole involutive algebra instead of a line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gfp
from .algebra import (
    BilinearForm,
    Derivation,
    HomLieAlgebra,
    Subspace,
    center,
    centralizer_of_image,
    is_ideal,
    orth,
    verify_derivation,
    verify_hom_lie,
)
from .errors import (
    DegenerateFrame,
    FrameMismatch,
    NotCentral,
    NotPIdeal,
    PreconditionFailed,
)
from .report import Report
from .restricted import (
    PStructure,
    PPropertyWitness,
    check_p_property,
    compute_eta_batch,
    eval_p,
    is_restricted_derivation,
)
from .rng import DEFAULT_SEED, SplitMix64


@dataclass
class DoubleExtensionData:
    D: Derivation
    x0: np.ndarray
    lam: int
    lam0: int

    def __init__(self, D: Derivation, x0, lam: int, lam0: int):
        self.D = D
        self.x0 = gfp.asvec(x0, D.p)
        self.lam = int(lam) % D.p
        self.lam0 = int(lam0) % D.p


@dataclass
class PExtensionData:
    xi: int
    a0: np.ndarray
    m: int
    l: int
    u0: np.ndarray
    P_basis: np.ndarray

    def __init__(self, xi: int, a0, m: int, l: int, u0, P_basis, p: int):
        self.xi = int(xi) % p
        self.a0 = gfp.asvec(a0, p)
        self.m = int(m) % p
        self.l = int(l) % p
        self.u0 = gfp.asvec(u0, p)
        self.P_basis = gfp.asvec(P_basis, p)


def check_extension_data(V: HomLieAlgebra, B_V: BilinearForm, d: DoubleExtensionData) -> Report:
    """Hypotheses of the one-dimensional double extension theorem.

    The three defining identities differ by signs between characteristic
    2 and odd characteristic; both variants also need V involutive, D a
    twist-compatible derivation and the form D-invariant.
    """
    from .algebra import d_invariant

    p = V.p
    rep = Report(p=p, dim=V.n)
    rep.record("involutive_V", V.is_involutive(), (), lhs=V.alpha_pow(2), rhs="id")
    rep.merge(verify_derivation(V, d.D))
    rep.record("d_invariant", d_invariant(B_V, d.D, p), ())
    dm, x0 = d.D.mat, d.x0
    dx0 = d.D(x0)
    eq1 = (d.lam * dm + V.ad(x0) - dm) % p
    rep.record("lambda_D_plus_ad_x0", not eq1.any(), (), lhs=(d.lam * dm + V.ad(x0)) % p, rhs=dm)
    if p == 2:
        eq2 = (V.apply_alpha(dx0) - dx0) % p
        eq3 = (V.alpha @ dm @ dm + dm @ dm @ V.alpha - V.ad(dx0)) % p
    else:
        eq2 = (V.apply_alpha(dx0) + dx0) % p
        eq3 = (V.alpha @ dm @ dm - dm @ dm @ V.alpha - V.ad(dx0)) % p
    rep.record("alpha_D_x0", not eq2.any(), (), lhs=V.apply_alpha(dx0), rhs=dx0)
    rep.record("alpha_D_squared", not eq3.any(), (), lhs=eq3, rhs=0)
    return rep


def double_extend(
    V: HomLieAlgebra,
    B_V: BilinearForm,
    d: DoubleExtensionData,
    b_star_star: int = 0,
    check: bool = True,
) -> tuple[HomLieAlgebra, BilinearForm]:
    """Build (L, B_L) in the canonical frame (e*, V-basis, e).

    B(e*, e*) is forced to 0 in odd characteristic; in characteristic 2
    the theorems leave it as data, so it is an input with default 0.
    """
    p, n = V.p, V.n
    if check:
        rep = check_extension_data(V, B_V, d)
        if not rep.ok:
            raise PreconditionFailed("double extension data rejected", rep)
    if p > 2 and b_star_star % p != 0:
        raise PreconditionFailed("B(e*,e*) must vanish for p > 2")
    N = n + 2
    c = np.zeros((N, N, N), dtype=np.int64)
    dm = d.D.mat
    gv = B_V.gram
    for i in range(n):
        for j in range(n):
            c[1 + i, 1 + j, 1:1 + n] = V.c[i, j]
            c[1 + i, 1 + j, N - 1] = (dm[:, i] @ gv @ gfp.unit(n, j)) % p
    for j in range(n):
        c[0, 1 + j, 1:1 + n] = dm[:, j]
        c[1 + j, 0] = (-c[0, 1 + j]) % p
    alpha = np.zeros((N, N), dtype=np.int64)
    alpha[0, 0] = d.lam
    alpha[1:1 + n, 0] = d.x0
    alpha[N - 1, 0] = d.lam0
    alpha[1:1 + n, 1:1 + n] = V.alpha
    alpha[N - 1, 1:1 + n] = (d.x0 @ gv) % p
    alpha[N - 1, N - 1] = d.lam
    gram = np.zeros((N, N), dtype=np.int64)
    gram[1:1 + n, 1:1 + n] = gv
    gram[0, N - 1] = gram[N - 1, 0] = 1
    gram[0, 0] = b_star_star % p
    names = ["e*"] + list(V.basis_names) + ["e"]
    L = HomLieAlgebra(p, c, alpha, names)
    return L, BilinearForm(gram, p)


def is_involutive_twist(V: HomLieAlgebra, B_V: BilinearForm, d: DoubleExtensionData) -> bool:
    """Criterion for the extended twist to square to the identity."""
    p = V.p
    if not V.is_involutive():
        return False
    if (d.lam * d.lam) % p != 1:
        return False
    ax0 = V.apply_alpha(d.x0)
    b00 = B_V.eval(d.x0, d.x0)
    if p == 2:
        return np.array_equal(ax0, (d.lam * d.x0) % p) and b00 == 0
    ok_x0 = np.array_equal(ax0, (-d.lam * d.x0) % p)
    return ok_x0 and d.lam0 == (-gfp.inv(2, p) * b00) % p


def eval_P(V: HomLieAlgebra, B_V: BilinearForm, D: Derivation, pe: PExtensionData, v) -> int:
    return int(eval_P_batch(V, B_V, D, pe, gfp.asvec(v, V.p)[None, :])[0])


def eval_P_batch(V: HomLieAlgebra, B_V: BilinearForm, D: Derivation, pe: PExtensionData, vs) -> np.ndarray:
    """The quadratic/p-semilinear map P induced by the basis values.

    char 2: P(sum l_j e_j) = sum l_j^2 P_basis[j] + sum_{i<j} l_i l_j B(D e_i, e_j).
    char > 2: ascending-index fold of P(u+v) = P(u) + P(v) + sum_i eta_i(u, v).
    """
    p, n = V.p, V.n
    vs = np.asarray(vs, dtype=np.int64) % p
    if p == 2:
        m = (D.mat.T @ B_V.gram) % p
        cross = np.triu(m, 1)
        sq = (vs * vs) % p
        return (sq @ pe.P_basis + np.einsum("mi,ij,mj->m", vs, cross, vs)) % p
    mcount = vs.shape[0]
    acc_vec = np.zeros((mcount, n), dtype=np.int64)
    acc_val = np.zeros(mcount, dtype=np.int64)
    for j in range(n):
        lam = vs[:, j]
        if not lam.any():
            continue
        parts = np.zeros((mcount, n), dtype=np.int64)
        parts[:, j] = lam
        part_val = (np.power(lam, p) % p) * pe.P_basis[j] % p
        etas = compute_eta_batch(V, B_V, D, acc_vec, parts).sum(axis=1) % p
        acc_val = (acc_val + part_val + etas) % p
        acc_vec[:, j] = lam
    return acc_val


def check_P_conditions(
    V: HomLieAlgebra,
    B_V: BilinearForm,
    D: Derivation,
    pe: PExtensionData,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
) -> Report:
    """Sampled check of the defining equations of P for either characteristic."""
    p, n = V.p, V.n
    rep = Report(p=p, dim=n, seed=seed, samples=samples)
    rng = SplitMix64(seed)
    us = np.stack([rng.vec(n, p) for _ in range(samples)])
    ws = np.stack([rng.vec(n, p) for _ in range(samples)])
    pu = eval_P_batch(V, B_V, D, pe, us)
    pw = eval_P_batch(V, B_V, D, pe, ws)
    psum = eval_P_batch(V, B_V, D, pe, (us + ws) % p)
    if p == 2:
        cross = B_V.eval_batch((us @ D.mat.T) % p, ws)
    else:
        cross = compute_eta_batch(V, B_V, D, us, ws).sum(axis=1) % p
    bad = np.nonzero((psum - pu - pw - cross) % p)[0]
    rep.check("P_additivity").passed = samples - len(bad)
    for i in bad:
        rep.record("P_additivity", False, (tuple(int(x) for x in us[i]), tuple(int(x) for x in ws[i])),
                   lhs=int(psum[i]), rhs=int((pu[i] + pw[i] + cross[i]) % p))
    for k in range(p):
        scaled = eval_P_batch(V, B_V, D, pe, (k * us) % p)
        want = (pow(k, p, p) * pu) % p
        bad = np.nonzero((scaled - want) % p)[0]
        rep.check("P_homogeneity").passed += samples - len(bad)
        for i in bad:
            rep.record("P_homogeneity", False, (k, tuple(int(x) for x in us[i])),
                       lhs=int(scaled[i]), rhs=int(want[i]))
    return rep


def check_p_extension_data(
    V: HomLieAlgebra,
    B_V: BilinearForm,
    P_V: PStructure,
    d: DoubleExtensionData,
    pe: PExtensionData,
    samples: int = 100,
    seed: int = DEFAULT_SEED,
) -> Report:
    """Hypotheses of the p-structure extension theorem (both characteristics)."""
    p = V.p
    rep = Report(p=p, dim=V.n, seed=seed)
    rep.record("lambda_is_one", d.lam % p == 1, (), lhs=d.lam, rhs=1)
    rep.record(
        "p_property",
        check_p_property(V, d.D, PPropertyWitness(pe.xi, pe.a0, p)),
        (), lhs=(pe.xi, tuple(int(x) for x in pe.a0)),
    )
    rep.record(
        "restricted_derivation",
        is_restricted_derivation(V, P_V, d.D, samples=samples, seed=seed),
        (),
    )
    rep.record("D_u0_zero", not d.D(pe.u0).any(), (), lhs=d.D(pe.u0), rhs=0)
    if p == 2:
        zone = centralizer_of_image(V, V.alpha)
        rep.record("u0_centralizes_alpha_image", zone.contains(pe.u0), (), lhs=pe.u0)
    else:
        rep.record("u0_central", center(V).contains(pe.u0), (), lhs=pe.u0)
    rep.merge(check_P_conditions(V, B_V, d.D, pe, samples=samples, seed=seed))
    return rep


def extend_pstructure(
    L: HomLieAlgebra,
    V: HomLieAlgebra,
    B_V: BilinearForm,
    P_V: PStructure,
    d: DoubleExtensionData,
    pe: PExtensionData,
    check: bool = True,
    samples: int = 100,
    seed: int = DEFAULT_SEED,
) -> PStructure:
    """Extend the p-structure of V across the double extension L.

    Basis images in the canonical frame: v_j picks up P_basis[j] e, the
    derivation line maps to a0 + l e + xi e*, the central line to
    m e + u0.
    """
    p, n = V.p, V.n
    if L.n != n + 2:
        raise FrameMismatch("L must be the double extension of V")
    if check:
        rep = check_p_extension_data(V, B_V, P_V, d, pe, samples=samples, seed=seed)
        if not rep.ok:
            raise PreconditionFailed("p-structure extension data rejected", rep)
    imgs = np.zeros((n + 2, n + 2), dtype=np.int64)
    imgs[0, 0] = pe.xi
    imgs[0, 1:1 + n] = pe.a0
    imgs[0, n + 1] = pe.l
    for j in range(n):
        imgs[1 + j, 1:1 + n] = P_V.images[j]
        imgs[1 + j, n + 1] = pe.P_basis[j]
    imgs[n + 1, 1:1 + n] = pe.u0
    imgs[n + 1, n + 1] = pe.m
    return PStructure(L, imgs)


@dataclass
class ExtFrame:
    """Canonical-frame view of a double extension, with optional p-data."""

    V: HomLieAlgebra
    B_V: BilinearForm
    D: Derivation
    x0: np.ndarray
    lam: int
    lam0: int
    beta: int  # B(e*, e*)
    P_V: PStructure | None = None
    pe: PExtensionData | None = None

    @property
    def n(self) -> int:
        return self.V.n

    def emb(self, v) -> np.ndarray:
        out = gfp.zeros(self.n + 2)
        out[1:1 + self.n] = gfp.asvec(v, self.V.p)
        return out

    def proj_V(self, w) -> np.ndarray:
        return gfp.asvec(w, self.V.p)[1:1 + self.n].copy()

    def e_star(self) -> np.ndarray:
        return gfp.unit(self.n + 2, 0)

    def e(self) -> np.ndarray:
        return gfp.unit(self.n + 2, self.n + 1)


def split_frame(L: HomLieAlgebra, B_L: BilinearForm, P_L: PStructure | None = None) -> ExtFrame:
    """Read the construction data back off a canonically framed L."""
    p = L.p
    n = L.n - 2
    if n < 0:
        raise FrameMismatch("dimension too small for a double extension frame")
    g = B_L.gram
    if g[0, n + 1] % p != 1 or g[n + 1, n + 1] % p != 0:
        raise FrameMismatch("form does not pair e* with e hyperbolically")
    if g[0, 1:1 + n].any() or g[n + 1, 1:1 + n].any():
        raise FrameMismatch("V block is not orthogonal to the frame lines")
    if L.c[n + 1].any():
        raise FrameMismatch("e is not central")
    if L.c[0, 1:1 + n, 0].any() or L.c[0, 1:1 + n, n + 1].any():
        raise FrameMismatch("[e*, V] does not lie in V")
    if L.alpha[0, 1:].any() or L.alpha[1:1 + n, n + 1].any():
        raise FrameMismatch("twist does not preserve the frame filtration")
    if L.alpha[n + 1, n + 1] != L.alpha[0, 0]:
        raise FrameMismatch("twist eigenvalues on e and e* disagree")
    cv = L.c[1:1 + n, 1:1 + n, 1:1 + n].copy()
    V = HomLieAlgebra(p, cv, L.alpha[1:1 + n, 1:1 + n], L.basis_names[1:1 + n])
    B_V = BilinearForm(g[1:1 + n, 1:1 + n], p)
    D = Derivation(L.c[0, 1:1 + n, 1:1 + n].T, p, k=1)
    frame = ExtFrame(
        V=V, B_V=B_V, D=D,
        x0=L.alpha[1:1 + n, 0].copy(),
        lam=int(L.alpha[0, 0]),
        lam0=int(L.alpha[n + 1, 0]),
        beta=int(g[0, 0]),
    )
    if P_L is not None:
        imgs = P_L.images
        if imgs[1:1 + n, 0].any():
            raise FrameMismatch("p-images of V leave the coisotropic flag")
        if imgs[n + 1, 0] != 0:
            raise FrameMismatch("p-image of e leaves the coisotropic flag")
        frame.P_V = PStructure(V, imgs[1:1 + n, 1:1 + n])
        frame.pe = PExtensionData(
            xi=int(imgs[0, 0]),
            a0=imgs[0, 1:1 + n],
            m=int(imgs[n + 1, n + 1]),
            l=int(imgs[0, n + 1]),
            u0=imgs[n + 1, 1:1 + n],
            P_basis=imgs[1:1 + n, n + 1],
            p=p,
        )
    return frame


@dataclass
class ReduceResult:
    V: HomLieAlgebra
    B_V: BilinearForm
    d: DoubleExtensionData
    P_V: PStructure
    pe: PExtensionData
    beta: int
    e_star: np.ndarray
    v_basis: np.ndarray  # rows: the chosen basis of V inside L
    e: np.ndarray


def reduce(L: HomLieAlgebra, B_L: BilinearForm, P_L: PStructure, e) -> ReduceResult:
    """Recover (V, B_V, D, x0, lambda, lambda0) and the p-data from L.

    e must be a nonzero isotropic central twist-eigenvector whose
    orthogonal complement is a p-ideal.  The partner e* solves
    B(., e) = 1 with free variables zero (normalized to B(e*, e*) = 0
    in odd characteristic, kept as-is in characteristic 2), and V is the
    orthogonal complement of the hyperbolic plane, in echelon form.
    """
    p, N = L.p, L.n
    n = N - 2
    e = gfp.asvec(e, p)
    if not e.any():
        raise NotCentral("e must be nonzero")
    if not center(L).contains(e):
        raise NotCentral("e is not central")
    if B_L.eval(e, e) != 0:
        raise DegenerateFrame("B(e, e) must vanish")
    alpha_e = L.apply_alpha(e)
    line = Subspace.from_vectors([e], N, p)
    if not line.contains(alpha_e):
        raise NotCentral("the twist does not preserve the chosen central line")
    lam = 0
    pivot = int(np.argmax(e != 0))
    lam = int(alpha_e[pivot]) * gfp.inv(int(e[pivot]), p) % p

    e_perp = orth(B_L, line)
    if not is_ideal(L, e_perp):
        raise NotPIdeal("the orthogonal complement of e is not an ideal")
    for w in e_perp.vectors():
        if not e_perp.contains(eval_p(P_L, w)):
            raise NotPIdeal("the orthogonal complement of e is not closed under [p]")

    row = (B_L.gram @ e) % p
    e_star = gfp.solve(row[None, :], np.array([1]), p)
    if e_star is None:
        raise DegenerateFrame("no vector pairs with e (form degenerate)")
    if p > 2:
        bss = B_L.eval(e_star, e_star)
        e_star = (e_star - gfp.inv(2, p) * bss * e) % p
    beta = B_L.eval(e_star, e_star)

    plane = Subspace.from_vectors([e, e_star], N, p)
    v_space = orth(B_L, plane)
    if v_space.dim != n:
        raise DegenerateFrame("hyperbolic plane does not split off")
    v_rows = v_space.basis

    trans = np.vstack([e_star[None, :], v_rows, e[None, :]])
    tinv = gfp.mat_inv(trans.T, p)
    if tinv is None:
        raise DegenerateFrame("frame vectors are not a basis")

    def coords(w):
        cc = (tinv @ gfp.asvec(w, p)) % p
        return int(cc[0]), cc[1:1 + n].copy(), int(cc[n + 1])

    a, v, b = coords(L.apply_alpha(e_star))
    if a != lam:
        raise FrameMismatch("twist action on e* is inconsistent with its action on e")
    x0, lam0 = v, b

    alpha_v = np.zeros((n, n), dtype=np.int64)
    d_mat = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        a, v, b = coords(L.apply_alpha(v_rows[j]))
        if a != 0:
            raise FrameMismatch("twist does not preserve the complement of the plane")
        alpha_v[:, j] = v
        a, v, b = coords(L.bracket(e_star, v_rows[j]))
        if a != 0 or b != 0:
            raise FrameMismatch("[e*, V] has components outside V")
        d_mat[:, j] = v

    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            a, v, b = coords(L.bracket(v_rows[i], v_rows[j]))
            if a != 0:
                raise FrameMismatch("[V, V] leaves the coisotropic flag")
            if v.any():
                upper[(i, j)] = v
    names = []
    for j in range(n):
        row = v_rows[j]
        if row.sum() == 1 and (row <= 1).all():
            names.append(L.basis_names[int(np.argmax(row))])
        else:
            names.append(f"v{j + 1}")
    V = HomLieAlgebra.from_upper(p, n, upper, alpha_v, names)
    B_V = BilinearForm((v_rows @ B_L.gram @ v_rows.T) % p, p)

    s_imgs = np.zeros((n, n), dtype=np.int64)
    p_basis = gfp.zeros(n)
    for j in range(n):
        a, v, b = coords(eval_p(P_L, v_rows[j]))
        if a != 0:
            raise NotPIdeal("a p-image of V leaves the coisotropic flag")
        s_imgs[j] = v
        p_basis[j] = b
    a, u0, m = coords(eval_p(P_L, e))
    if a != 0:
        raise NotPIdeal("the p-image of e leaves the coisotropic flag")
    xi, a0, l = coords(eval_p(P_L, e_star))

    d = DoubleExtensionData(Derivation(d_mat, p, k=1), x0, lam, lam0)
    pe = PExtensionData(xi, a0, m, l, u0, p_basis, p)
    return ReduceResult(
        V=V, B_V=B_V, d=d, P_V=PStructure(V, s_imgs), pe=pe,
        beta=beta, e_star=e_star, v_basis=v_rows, e=e,
    )


@dataclass
class AlgebraExtensionData:
    A: HomLieAlgebra
    phi: list[np.ndarray]  # phi[b] acts on V
    sigma: BilinearForm

    def phi_of(self, avec) -> np.ndarray:
        avec = gfp.asvec(avec, self.A.p)
        out = np.zeros_like(self.phi[0])
        for b in range(self.A.n):
            out = (out + int(avec[b]) * self.phi[b]) % self.A.p
        return out


def psi_eval(B_V: BilinearForm, x: AlgebraExtensionData, u, v) -> np.ndarray:
    """psi(u, v) in dual coordinates: component b is B(phi(e_b) u, v)."""
    p = B_V.p
    u = gfp.asvec(u, p)
    v = gfp.asvec(v, p)
    return np.array([int(((m @ u) @ B_V.gram @ v) % p) for m in x.phi], dtype=np.int64)


def _alternating_wrt(B: BilinearForm, m, p: int) -> bool:
    # B(m(x), x) = 0 for all x; for p > 2 this is skewness, in char 2 the
    # polarized form must be symmetric with zero diagonal.
    mt = (gfp.asmat(m, p).T @ B.gram) % p
    if p == 2:
        return not np.diagonal(mt).any() and np.array_equal(mt, mt.T % p)
    return not ((mt + B.gram @ gfp.asmat(m, p)) % p).any()


def check_algebra_extension_data(V: HomLieAlgebra, B_V: BilinearForm, x: AlgebraExtensionData) -> Report:
    """Representation, compatibility and form hypotheses for extend_by_algebra."""
    p = V.p
    A = x.A
    rep = Report(p=p, dimV=V.n, dimA=A.n)
    rep.record("involutive_V", V.is_involutive(), ())
    rep.record("involutive_A", A.is_involutive(), ())
    arep = verify_hom_lie(A)
    rep.record("A_hom_lie", arep.ok, (), lhs=len(arep.failing()))
    for b in range(A.n):
        rep.record("phi_alternating", _alternating_wrt(B_V, x.phi[b], p), (b,))
        lhs = (x.phi_of(A.alpha[:, b]) @ V.alpha) % p
        rhs = (V.alpha @ x.phi[b]) % p
        rep.record("rep_axiom_1", np.array_equal(lhs, rhs), (b,), lhs=lhs, rhs=rhs)
        lhs = (x.phi_of(A.alpha[:, b])) % p
        rhs = (V.alpha @ x.phi[b] @ V.alpha) % p
        rep.record("phi_twist_conjugation", np.array_equal(lhs, rhs), (b,), lhs=lhs, rhs=rhs)
    for b in range(A.n):
        for cdx in range(A.n):
            lhs = (x.phi_of(A.c[b, cdx]) @ V.alpha) % p
            rhs = (
                x.phi_of(A.alpha[:, b]) @ x.phi[cdx]
                + x.phi_of(A.alpha[:, cdx]) @ x.phi[b]
            ) % p
            rep.record("rep_axiom_2", np.array_equal(lhs, rhs), (b, cdx), lhs=lhs, rhs=rhs)
    # bracket compatibility on V basis pairs
    for b in range(A.n):
        ph = x.phi[b]
        pha = (ph @ V.alpha) % p
        for i in range(V.n):
            for j in range(V.n):
                lhs = (V.alpha @ ph @ V.c[i, j]) % p
                rhs = (V.bracket(pha[:, i], gfp.unit(V.n, j)) + V.bracket(gfp.unit(V.n, i), pha[:, j])) % p
                rep.record("phi_bracket_compat", np.array_equal(lhs, rhs), (b, i, j), lhs=lhs, rhs=rhs)
    srep = Report()
    srep.record("sigma_symmetric", x.sigma.is_symmetric(), ())
    srep.record("sigma_nondegenerate", x.sigma.is_nondegenerate(), ())
    g = x.sigma.gram
    inv_lhs = np.einsum("ijm,mk->ijk", A.c, g) % p
    inv_rhs = np.einsum("im,jkm->ijk", g, A.c) % p
    srep.record("sigma_invariant", not ((inv_lhs - inv_rhs) % p).any(), ())
    srep.record(
        "sigma_twist_self_adjoint",
        np.array_equal((A.alpha.T @ g) % p, (g @ A.alpha) % p),
        (),
    )
    rep.merge(srep)
    return rep


def extend_by_algebra(
    V: HomLieAlgebra,
    B_V: BilinearForm,
    x: AlgebraExtensionData,
    check: bool = True,
) -> tuple[HomLieAlgebra, BilinearForm]:
    """Double extension of V by an involutive algebra A on A* + V + A.

    The characteristic fixes the signs: in char 2 all four mixed terms
    are positive, in odd characteristic the bracket uses
    -f o ad(a') + f' o ad(a) and phi(a)(x') - phi(a')(x).
    """
    p, n = V.p, V.n
    mdim = x.A.n
    if check:
        rep = check_algebra_extension_data(V, B_V, x)
        if not rep.ok:
            raise PreconditionFailed("algebra extension data rejected", rep)
    N = mdim + n + mdim
    fofs, vofs, aofs = 0, mdim, mdim + n
    sign = 1 if p == 2 else -1
    c = np.zeros((N, N, N), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c[vofs + i, vofs + j, vofs:vofs + n] = V.c[i, j]
            c[vofs + i, vofs + j, fofs:fofs + mdim] = psi_eval(
                B_V, x, gfp.unit(n, i), gfp.unit(n, j)
            )
    for b in range(mdim):
        for cdx in range(mdim):
            # [f_b, a_c] = sign * f_b o ad_A(a_c); component d is c_A[c, d, b]
            c[fofs + b, aofs + cdx, fofs:fofs + mdim] = (sign * x.A.c[cdx, :, b]) % p
            c[aofs + cdx, fofs + b] = (-c[fofs + b, aofs + cdx]) % p
    for i in range(n):
        for cdx in range(mdim):
            c[vofs + i, aofs + cdx, vofs:vofs + n] = (sign * x.phi[cdx][:, i]) % p
            c[aofs + cdx, vofs + i] = (-c[vofs + i, aofs + cdx]) % p
    for b in range(mdim):
        for cdx in range(mdim):
            c[aofs + b, aofs + cdx, aofs:aofs + mdim] = x.A.c[b, cdx]
    alpha = np.zeros((N, N), dtype=np.int64)
    alpha[fofs:fofs + mdim, fofs:fofs + mdim] = x.A.alpha.T
    alpha[vofs:vofs + n, vofs:vofs + n] = V.alpha
    alpha[aofs:aofs + mdim, aofs:aofs + mdim] = x.A.alpha
    gram = np.zeros((N, N), dtype=np.int64)
    gram[vofs:vofs + n, vofs:vofs + n] = B_V.gram
    for b in range(mdim):
        gram[fofs + b, aofs + b] = 1
        gram[aofs + b, fofs + b] = 1
    gram[aofs:aofs + mdim, aofs:aofs + mdim] = x.sigma.gram
    names = (
        [f"{nm}*" for nm in x.A.basis_names]
        + list(V.basis_names)
        + list(x.A.basis_names)
    )
    L = HomLieAlgebra(p, c, alpha, names)
    return L, BilinearForm(gram, p)
