"""Algebra bundle file format: canonical JSON, exact integers only.

A bundle stores one algebra with optional form, p-map images, named
derivations, a candidate twist involution and double-extension data.
Emission is canonical (fixed key order, brackets sorted lexicographically
by (i, j, k), two-space indent, trailing newline), so parse followed by
emit is the identity on canonical files and emit is idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .algebra import BilinearForm, Derivation, HomLieAlgebra
from .doubleext import DoubleExtensionData, PExtensionData
from .errors import ParseError
from .restricted import PStructure
from .twist import TwistData

FORMAT_VERSION = "1"


@dataclass
class AlgebraBundle:
    p: int
    dim: int
    basis: list[str]
    brackets: list[tuple[int, int, int, int]]  # (i, j, k, coeff) with i < j
    alpha: np.ndarray
    form: np.ndarray | None = None
    pmap: np.ndarray | None = None
    derivations: dict[str, Derivation] = field(default_factory=dict)
    twist: np.ndarray | None = None
    extension: dict | None = None

    def algebra(self) -> HomLieAlgebra:
        upper = {}
        for i, j, k, coeff in self.brackets:
            upper.setdefault((i, j), gfp.zeros(self.dim))
            upper[(i, j)][k] = coeff
        return HomLieAlgebra.from_upper(self.p, self.dim, upper, self.alpha, self.basis)

    def bilinear_form(self) -> BilinearForm | None:
        return None if self.form is None else BilinearForm(self.form, self.p)

    def pstructure(self, algebra: HomLieAlgebra | None = None) -> PStructure | None:
        if self.pmap is None:
            return None
        return PStructure(algebra or self.algebra(), self.pmap)

    def twist_data(self) -> TwistData | None:
        return None if self.twist is None else TwistData(self.twist, self.p)

    def extension_data(self) -> tuple[str, DoubleExtensionData, PExtensionData] | None:
        if self.extension is None:
            return None
        ext = self.extension
        name = ext["derivation"]
        if name not in self.derivations:
            raise ParseError(f"extension refers to unknown derivation {name!r}")
        d = DoubleExtensionData(self.derivations[name], ext["x0"], ext["lambda"], ext["lambda0"])
        pe = PExtensionData(ext["xi"], ext["a0"], ext["m"], ext["l"], ext["u0"], ext["P_basis"], self.p)
        return name, d, pe


def from_parts(
    A: HomLieAlgebra,
    form: BilinearForm | None = None,
    pmap: PStructure | None = None,
    derivations: dict[str, Derivation] | None = None,
    twist: TwistData | None = None,
    extension: dict | None = None,
) -> AlgebraBundle:
    """Assemble a bundle; the tensor must already be antisymmetric."""
    entries = []
    for i in range(A.n):
        for j in range(i + 1, A.n):
            if ((A.c[i, j] + A.c[j, i]) % A.p).any() or A.c[i, i].any():
                raise ParseError("structure tensor is not alternating/antisymmetric")
            for k in range(A.n):
                if A.c[i, j, k]:
                    entries.append((i, j, k, int(A.c[i, j, k])))
    return AlgebraBundle(
        p=A.p,
        dim=A.n,
        basis=list(A.basis_names),
        brackets=sorted(entries),
        alpha=A.alpha.copy(),
        form=None if form is None else form.gram.copy(),
        pmap=None if pmap is None else pmap.images.copy(),
        derivations=dict(derivations or {}),
        twist=None if twist is None else twist.alpha.copy(),
        extension=extension,
    )


def extension_dict(name: str, d: DoubleExtensionData, pe: PExtensionData) -> dict:
    return {
        "derivation": name,
        "x0": [int(v) for v in d.x0],
        "lambda": int(d.lam),
        "lambda0": int(d.lam0),
        "xi": int(pe.xi),
        "a0": [int(v) for v in pe.a0],
        "m": int(pe.m),
        "l": int(pe.l),
        "u0": [int(v) for v in pe.u0],
        "P_basis": [int(v) for v in pe.P_basis],
    }


def _intmat(m) -> list[list[int]]:
    return [[int(v) for v in row] for row in np.asarray(m)]


def emit(b: AlgebraBundle) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "p": int(b.p),
        "dim": int(b.dim),
        "basis": list(b.basis),
        "brackets": [
            {"i": i, "j": j, "k": k, "coeff": c} for (i, j, k, c) in sorted(b.brackets)
        ],
        "alpha": _intmat(b.alpha),
        "form": None if b.form is None else _intmat(b.form),
        "pmap": None if b.pmap is None else _intmat(b.pmap),
        "derivations": {
            name: {"matrix": _intmat(d.mat), "degree": int(d.k)}
            for name, d in sorted(b.derivations.items())
        },
        "twist": None if b.twist is None else _intmat(b.twist),
        "extension": b.extension,
    }
    return json.dumps(doc, indent=2) + "\n"


def _expect(cond, msg):
    if not cond:
        raise ParseError(msg)


def _check_entries(name, arr, p):
    a = np.asarray(arr)
    _expect(
        np.issubdtype(a.dtype, np.integer) and (a >= 0).all() and (a < p).all(),
        f"{name} entries must be integers in [0, {p})",
    )


def parse(text: str) -> AlgebraBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        _expect(doc.get("version") == FORMAT_VERSION, "unsupported format version")
        p = int(doc["p"])
        _expect(p >= 2 and all(p % q for q in range(2, p)), "p must be prime")
        dim = int(doc["dim"])
        _expect(dim >= 1, "dim must be positive")
        basis = list(doc["basis"])
        _expect(len(basis) == dim, "basis names must match dim")
        brackets = []
        for ent in doc["brackets"]:
            i, j, k, c = int(ent["i"]), int(ent["j"]), int(ent["k"]), int(ent["coeff"])
            _expect(0 <= i < j < dim, f"bracket ({i},{j}) must satisfy 0 <= i < j < dim")
            _expect(0 <= k < dim, "bracket target out of range")
            _expect(0 < c < p, "bracket coefficient out of range")
            brackets.append((i, j, k, c))
        _expect(len(set((i, j, k) for i, j, k, _ in brackets)) == len(brackets),
                "duplicate bracket entry")
        alpha = np.asarray(doc["alpha"], dtype=np.int64)
        _expect(alpha.shape == (dim, dim), "alpha must be dim x dim")
        _check_entries("alpha", alpha, p)
        form = doc.get("form")
        if form is not None:
            form = np.asarray(form, dtype=np.int64)
            _expect(form.shape == (dim, dim), "form must be dim x dim")
            _check_entries("form", form, p)
        pmap = doc.get("pmap")
        if pmap is not None:
            pmap = np.asarray(pmap, dtype=np.int64)
            _expect(pmap.shape == (dim, dim), "pmap must be one image row per basis vector")
            _check_entries("pmap", pmap, p)
        derivs = {}
        for name, spec in doc.get("derivations", {}).items():
            mat = np.asarray(spec["matrix"], dtype=np.int64)
            _expect(mat.shape == (dim, dim), f"derivation {name} must be dim x dim")
            _check_entries(f"derivation {name}", mat, p)
            derivs[name] = Derivation(mat, p, int(spec.get("degree", 1)))
        twist = doc.get("twist")
        if twist is not None:
            twist = np.asarray(twist, dtype=np.int64)
            _expect(twist.shape == (dim, dim), "twist must be dim x dim")
            _check_entries("twist", twist, p)
        ext = doc.get("extension")
        if ext is not None:
            for key in ("derivation", "x0", "lambda", "lambda0", "xi", "a0", "m", "l", "u0", "P_basis"):
                _expect(key in ext, f"extension missing field {key!r}")
            for key in ("x0", "a0", "u0", "P_basis"):
                vec = np.asarray(ext[key], dtype=np.int64)
                _expect(vec.shape == (dim,), f"extension {key} must have length dim")
                _check_entries(f"extension {key}", vec, p)
            ext = {
                "derivation": str(ext["derivation"]),
                "x0": [int(v) for v in ext["x0"]],
                "lambda": int(ext["lambda"]) % p,
                "lambda0": int(ext["lambda0"]) % p,
                "xi": int(ext["xi"]) % p,
                "a0": [int(v) for v in ext["a0"]],
                "m": int(ext["m"]) % p,
                "l": int(ext["l"]) % p,
                "u0": [int(v) for v in ext["u0"]],
                "P_basis": [int(v) for v in ext["P_basis"]],
            }
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed bundle: {exc}") from exc
    return AlgebraBundle(
        p=p, dim=dim, basis=basis, brackets=sorted(brackets), alpha=alpha,
        form=form, pmap=pmap, derivations=derivs, twist=twist, extension=ext,
    )
