"""Hopf doublets and triplets built from pairings, with the Drinfeld double construction.

A pairing between colors (g, h) is a matrix ``P[i, j] = <b_i, c_j>`` with
``b_i`` running over the basis of ``H_g`` and ``c_j`` over ``H_h``.
The triplet pairings are always stored in the cyclic orientation
(alpha, beta), (beta, kappa), (kappa, alpha).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError, StructuralError
from .hopf import (
    HopfAlgebra,
    algebra_from_json,
    algebra_to_json,
    builtin_algebra,
    group_algebra,
    h8,
    validate_hopf,
    variant_algebra,
)
from .report import ValidationReport, default_tol
from .tensor import Tensor, einsum, outer

COLORS = ("alpha", "beta", "kappa")
CYCLIC_PAIRS = (("alpha", "beta"), ("beta", "kappa"), ("kappa", "alpha"))


@dataclass(frozen=True, eq=False)
class Pairing:
    first: str
    second: str
    matrix: Tensor

    def __post_init__(self):
        if self.first not in COLORS or self.second not in COLORS:
            raise StructuralError(f"unknown colors ({self.first}, {self.second})")
        if self.matrix.rank != 2:
            raise StructuralError("pairing matrix must have rank 2")

    @classmethod
    def from_dense(cls, first: str, second: str, array) -> Pairing:
        if isinstance(array, Tensor):
            return cls(first, second, array.with_name(f"<{first},{second}>"))
        return cls(first, second, Tensor.from_dense(np.asarray(array, dtype=complex), f"<{first},{second}>"))

    def transposed(self) -> Pairing:
        return Pairing(self.second, self.first, self.matrix.transpose([1, 0]))


def _check_shape(P: Tensor, A: HopfAlgebra, B: HopfAlgebra, label: str) -> None:
    if P.shape != (A.dim, B.dim):
        raise StructuralError(f"{label}: pairing shape {P.shape} does not match dims ({A.dim}, {B.dim})")


@dataclass(frozen=True, eq=False)
class HopfDoublet:
    alpha: HopfAlgebra
    beta: HopfAlgebra
    pairing: Pairing

    def __post_init__(self):
        _check_shape(self.pairing.matrix, self.alpha, self.beta, "doublet")

    @property
    def P(self) -> Tensor:
        return self.pairing.matrix

    @classmethod
    def make(cls, alpha: HopfAlgebra, beta: HopfAlgebra, matrix) -> HopfDoublet:
        if not isinstance(matrix, Tensor):
            matrix = Tensor.from_dense(np.asarray(matrix, dtype=complex))
        return cls(alpha, beta, Pairing("alpha", "beta", matrix))

    def __repr__(self) -> str:
        return f"<HopfDoublet ({self.alpha.name}, {self.beta.name})>"


@dataclass(frozen=True, eq=False)
class HopfTriplet:
    alpha: HopfAlgebra
    beta: HopfAlgebra
    kappa: HopfAlgebra
    p_ab: Pairing
    p_bk: Pairing
    p_ka: Pairing
    name: str = "triplet"

    def __post_init__(self):
        for (g, h), p in zip(CYCLIC_PAIRS, (self.p_ab, self.p_bk, self.p_ka)):
            _check_shape(p.matrix, self.algebra(g), self.algebra(h), f"<{g},{h}>")

    @classmethod
    def make(cls, alpha, beta, kappa, p_ab, p_bk, p_ka, name: str = "triplet") -> HopfTriplet:
        mats = []
        for (g, h), p in zip(CYCLIC_PAIRS, (p_ab, p_bk, p_ka)):
            mats.append(p if isinstance(p, Pairing) else Pairing.from_dense(g, h, p))
        return cls(alpha, beta, kappa, *mats, name=name)

    def algebra(self, color: str) -> HopfAlgebra:
        return {"alpha": self.alpha, "beta": self.beta, "kappa": self.kappa}[color]

    def pairing(self, first: str, second: str) -> Pairing:
        table = {pair: p for pair, p in zip(CYCLIC_PAIRS, (self.p_ab, self.p_bk, self.p_ka))}
        if (first, second) not in table:
            raise StructuralError(f"({first}, {second}) is not a cyclic color pair")
        return table[(first, second)]

    def doublet(self, first: str, second: str) -> HopfDoublet:
        p = self.pairing(first, second)
        return HopfDoublet(self.algebra(first), self.algebra(second), Pairing("alpha", "beta", p.matrix))

    def doublets(self) -> list[HopfDoublet]:
        return [self.doublet(g, h) for g, h in CYCLIC_PAIRS]

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for alg in (self.alpha, self.beta, self.kappa):
            h.update(alg.fingerprint.encode())
        for p in (self.p_ab, self.p_bk, self.p_ka):
            h.update(np.ascontiguousarray(p.matrix.coords).tobytes())
            h.update(np.round(np.ascontiguousarray(p.matrix.values), 12).tobytes())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"<HopfTriplet {self.name}>"


def _doublet_residuals(A: HopfAlgebra, B: HopfAlgebra, P: Tensor) -> dict[str, float]:
    return {
        # <a a', b> = <a, b_(1)> <a', b_(2)>
        "product": einsum("ipk,kj->ipj", A.M, P).distance(einsum("jxy,ix,py->ipj", B.Delta, P, P)),
        "unit": einsum("i,ij->j", A.eta, P).distance(B.eps),
        # <a, b' b> = <a_(1), b> <a_(2), b'>
        "coproduct": einsum("qjk,ik->ijq", B.M, P).distance(einsum("ixy,xj,yq->ijq", A.Delta, P, P)),
        "counit": einsum("ij,j->i", P, B.eta).distance(A.eps),
        "antipode": einsum("ik,kj->ij", A.S, P).distance(einsum("ik,jk->ij", P, B.S)),
    }


def validate_doublet(D: HopfDoublet, tol: float | None = None, check_algebras: bool = False) -> ValidationReport:
    """Check that the pairing induces a Hopf map ``H_alpha -> H_beta^{*,cop}``."""
    tol = default_tol() if tol is None else tol
    rep = ValidationReport(f"doublet ({D.alpha.name}, {D.beta.name})", tol)
    if check_algebras:
        rep.extend(validate_hopf(D.alpha, tol), "alpha.")
        rep.extend(validate_hopf(D.beta, tol), "beta.")
    residuals = _doublet_residuals(D.alpha, D.beta, D.P)
    for name, r in residuals.items():
        rep.add(name, r)
    if max(residuals.values()) >= tol and D.alpha.dim == D.beta.dim:
        flipped = _doublet_residuals(D.alpha, D.beta, D.P.transpose([1, 0]))
        if max(flipped.values()) < tol:
            rep.notes.append("the transposed pairing matrix passes: rows should index the second argument")
    return rep


def _identity_c(t: HopfTriplet, sign: int) -> tuple[Tensor, Tensor]:
    """Both sides of the triangle identity (sign +1) or its antipode form (-1)."""
    A, B, K = t.alpha, t.beta, t.kappa
    Pab, Pbk, Pka = t.p_ab.matrix, t.p_bk.matrix, t.p_ka.matrix
    if sign > 0:
        lhs = einsum(
            "aux,byv,kzw,uv,yw,zx->abk", A.Delta, B.Delta, K.Delta, Pab, Pbk, Pka
        )
    else:
        # antipode on both alpha legs and on the beta leg facing kappa
        lhs = einsum(
            "aux,byv,kzw,up,pv,yq,qw,xr,zr->abk",
            A.Delta, B.Delta, K.Delta, A.S, Pab, B.S, Pbk, A.S, Pka,
        )
    rhs = einsum("ap,bq,kr,pqr->abk", A.S, B.S, K.S, lhs)
    return lhs, rhs


def triangle_identity_residual(t: HopfTriplet, sign: int = 1) -> float:
    lhs, rhs = _identity_c(t, sign)
    return lhs.distance(rhs)


def double_map_residuals(t: HopfTriplet) -> dict[str, float]:
    """Residuals of the maps D(H_g^op, H_h^cop) -> H_k^* being Hopf maps.

    The map sends ``a (x) b`` to ``k -> <k_(1), a> <b, k_(2)>``. This is the
    defining triplet condition; the triangle identity is equivalent to it.
    """
    out = {}
    for (g, h), k in zip(CYCLIC_PAIRS, ("kappa", "alpha", "beta")):
        A, B, K = t.algebra(g), t.algebra(h), t.algebra(k)
        double = drinfeld_double(
            HopfDoublet.make(variant_algebra(A, "op"), variant_algebra(B, "cop"), t.pairing(g, h).matrix)
        )
        Q = einsum("kuv,ua,bv->abk", K.Delta, t.pairing(k, g).matrix, t.pairing(h, k).matrix)
        Q = Q.reshape((A.dim * B.dim, K.dim))
        out[f"D({g},{h}) -> {k}^*"] = max(
            einsum("xyz,zk->xyk", double.M, Q).distance(einsum("kuv,xu,yv->xyk", K.Delta, Q, Q)),
            einsum("x,xk->k", double.eta, Q).distance(K.eps),
            einsum("klm,xm->xkl", K.M, Q).distance(einsum("xuv,uk,vl->xkl", double.Delta, Q, Q)),
            einsum("xk,k->x", Q, K.eta).distance(double.eps),
        )
    return out


def validate_triplet(
    t: HopfTriplet,
    tol: float | None = None,
    check_d: bool = True,
    check_algebras: bool = False,
    check_double_maps: bool = False,
) -> ValidationReport:
    """Three cyclic doublets plus the triangle identity.

    ``check_d`` adds the antipode form of the identity; ``check_double_maps``
    adds the defining Hopf-map conditions as an independent cross-check.
    """
    tol = default_tol() if tol is None else tol
    rep = ValidationReport(f"triplet {t.name}", tol)
    if check_algebras:
        for c in COLORS:
            rep.extend(validate_hopf(t.algebra(c), tol), f"{c}.")
    for g, h in CYCLIC_PAIRS:
        sub = validate_doublet(t.doublet(g, h), tol)
        rep.extend(sub, f"<{g},{h}>.")
    rep.add("triangle identity", triangle_identity_residual(t, 1))
    if check_d:
        rep.add("triangle identity (antipode form)", triangle_identity_residual(t, -1))
    if check_double_maps:
        for name, r in double_map_residuals(t).items():
            rep.add(name, r)
    return rep


@dataclass(frozen=True)
class TUV:
    """Two-in two-out tensors with axes (in_beta, in_alpha, out_beta, out_alpha)."""

    T: Tensor
    T_inv: Tensor
    U: Tensor
    V: Tensor


def _compose(*maps: Tensor) -> Tensor:
    """Apply 2-in/2-out maps left to right."""
    out = maps[0]
    for m in maps[1:]:
        out = einsum("abxy,xycd->abcd", out, m)
    return out


def _local(Sb: Tensor | None, Sa: Tensor | None, nb: int, na: int) -> Tensor:
    """Tensor product of single-leg maps as a 2-in/2-out tensor."""
    return outer(Sb if Sb is not None else Tensor.identity(nb), Sa if Sa is not None else Tensor.identity(na)).transpose(
        [0, 2, 1, 3]
    )


def tuv_tensors(D: HopfDoublet) -> TUV:
    A, B, P = D.alpha, D.beta, D.P
    na, nb = A.dim, B.dim
    # T(b (x) a) = <a_(1), b_(2)> b_(1) (x) a_(2)
    T = einsum("bcx,ayd,yx->bacd", B.Delta, A.Delta, P)
    T_inv = einsum("bcx,ayd,yz,zx->bacd", B.Delta, A.Delta, A.S, P)
    both = _local(B.S, A.S, nb, na)
    V = _compose(both, T, _local(B.S, None, nb, na))
    U = _compose(_local(B.S, None, nb, na), T_inv, both, T, _local(None, A.S, nb, na))
    return TUV(T, T_inv, U, V)


def tuv_residuals(D: HopfDoublet) -> dict[str, float]:
    A, B = D.alpha, D.beta
    na, nb = A.dim, B.dim
    t = tuv_tensors(D)
    both = _local(B.S, A.S, nb, na)
    first = _compose(t.V, t.U).distance(_compose(t.T, _local(None, A.S, nb, na)))
    left = _compose(t.T, both, t.T_inv, both)
    right = _compose(both, t.T_inv, both, t.T)
    return {"U after V": first, "T/T_inv exchange": left.distance(right)}


def drinfeld_double(D: HopfDoublet, name: str | None = None) -> HopfAlgebra:
    """Twisted tensor product on basis ``a_i (x) b_j`` (flat index ``i*dim_beta + j``)."""
    A, B = D.alpha, D.beta
    na, nb = A.dim, B.dim
    n = na * nb
    U = tuv_tensors(D).U
    M = einsum("pqyx,ixa,yjb->ipqjab", U, A.M, B.M).reshape((n, n, n))
    Delta = einsum("kac,lbd->klabcd", A.Delta, B.Delta).reshape((n, n, n))
    eta = outer(A.eta, B.eta).reshape((n,))
    eps = outer(A.eps, B.eps).reshape((n,))
    S = einsum("bx,ay,xyqp->abpq", B.S, A.S, U).reshape((n, n))
    basis = tuple(f"{a}|{b}" for a in A.basis for b in B.basis)
    return HopfAlgebra(name or f"D({A.name},{B.name})", basis, M, eta, Delta, eps, S)


def standard_doublet(H: HopfAlgebra) -> HopfDoublet:
    """``(H, (H^*)^op)`` with the evaluation pairing."""
    return HopfDoublet.make(H, variant_algebra(H, "dual,op"), Tensor.identity(H.dim))


def tautological_triplet(D: HopfDoublet) -> HopfTriplet:
    """Kappa is the dual of the double of the reversed doublet."""
    A, B, P = D.alpha, D.beta, D.P
    na, nb = A.dim, B.dim
    reversed_doublet = HopfDoublet.make(variant_algebra(A, "op"), variant_algebra(B, "cop"), P)
    K = variant_algebra(drinfeld_double(reversed_doublet), "dual")
    # <b_j, delta_(i, j')> = eta_alpha[i] [j = j']
    p_bk = einsum("i,jk->jik", A.eta, Tensor.identity(nb)).reshape((nb, na * nb))
    # <delta_(i, j), a_i'> = [i = i'] eta_beta[j]
    p_ka = einsum("ik,j->ijk", Tensor.identity(na), B.eta).reshape((na * nb, na))
    return HopfTriplet.make(A, B, K, P, p_bk, p_ka, name=f"tautological({A.name},{B.name})")


def quasi_triangular_triplet(H: HopfAlgebra, R, name: str | None = None) -> HopfTriplet:
    R = R if isinstance(R, Tensor) else Tensor.from_dense(np.asarray(R, dtype=complex))
    n = H.dim
    if R.shape != (n, n):
        raise StructuralError(f"R must have shape ({n}, {n})")
    ident = Tensor.identity(n)
    return HopfTriplet.make(
        variant_algebra(H, "cop,dual,cop"),
        variant_algebra(H, "cop"),
        variant_algebra(H, "dual"),
        ident,
        ident,
        R.transpose([1, 0]),
        name=name or f"quasi-triangular({H.name})",
    )


def cyclic_r_matrix(N: int) -> np.ndarray:
    k = np.arange(N)
    return np.exp(2j * np.pi * np.outer(k, k) / N) / N


def cyclic_triplet(N: int) -> HopfTriplet:
    return quasi_triangular_triplet(group_algebra(N), cyclic_r_matrix(N), name=f"cyclic:{N}")


def from_double_morphism(H: HopfAlgebra, K: HopfAlgebra, phi1, phi2, name: str | None = None) -> HopfTriplet:
    """Triplet ``(H^{*,cop,op}, H^cop, K^*)`` from the two halves of a map D(H) -> K.

    ``phi2[k, i]`` is the coefficient of ``k_k`` in the image of ``h_i``;
    ``phi1[k, j]`` that of the image of the j-th dual basis element.
    """
    phi1 = np.asarray(phi1.to_dense() if isinstance(phi1, Tensor) else phi1, dtype=complex)
    phi2 = np.asarray(phi2.to_dense() if isinstance(phi2, Tensor) else phi2, dtype=complex)
    if phi1.shape != (K.dim, H.dim) or phi2.shape != (K.dim, H.dim):
        raise StructuralError(f"phi1 and phi2 must have shape ({K.dim}, {H.dim})")
    return HopfTriplet.make(
        variant_algebra(H, "dual,cop,op"),
        variant_algebra(H, "cop"),
        variant_algebra(K, "dual"),
        np.eye(H.dim),
        phi2.T,
        phi1,
        name=name or f"morphism({H.name},{K.name})",
    )


def tautological_doublet(H: HopfAlgebra) -> HopfDoublet:
    """``(H^{*,cop}, H)`` with the canonical pairing; its double is D(H)."""
    return HopfDoublet.make(variant_algebra(H, "dual,cop"), H, np.eye(H.dim))


def double_embeddings(H: HopfAlgebra) -> tuple[HopfAlgebra, np.ndarray, np.ndarray]:
    """D(H) with the inclusions of ``H^{*,cop}`` (phi1) and ``H`` (phi2) as coefficient matrices."""
    D = tautological_doublet(H)
    K = drinfeld_double(D, name=f"D({H.name})")
    one_a, one_b = D.alpha.eta.to_dense(), D.beta.eta.to_dense()
    basis = np.eye(H.dim)
    phi1 = np.stack([np.kron(e, one_b) for e in basis], axis=1)
    phi2 = np.stack([np.kron(one_a, e) for e in basis], axis=1)
    return K, phi1, phi2


_R2 = np.sqrt(2)
_I = 1j
H8_PAIRING_MATRICES = {
    0: [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, -1, 1, _I, -_I, -_I, _I],
        [1, -1, -1, 1, _I, -_I, -_I, _I],
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, _I, _I, 1, -1 - _I, 0, 0, -1 - _I],
        [1, -_I, -_I, 1, 0, -1 + _I, -1 + _I, 0],
        [1, -_I, -_I, 1, 0, -1 + _I, -1 + _I, 0],
        [1, _I, _I, 1, -1 - _I, 0, 0, -1 - _I],
    ],
    1: [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, -1, 1, _I, -_I, -_I, _I],
        [1, -1, -1, 1, -_I, _I, _I, -_I],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, -_I, _I, -1, -_R2, 0, 0, _R2],
        [1, _I, -_I, -1, 0, _I * _R2, -_I * _R2, 0],
        [1, _I, -_I, -1, 0, -_I * _R2, _I * _R2, 0],
        [1, -_I, _I, -1, _R2, 0, 0, -_R2],
    ],
    2: [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, -1, 1, _I, -_I, -_I, _I],
        [1, -1, -1, 1, -_I, _I, _I, -_I],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, -_I, _I, -1, _R2, 0, 0, -_R2],
        [1, _I, -_I, -1, 0, -_I * _R2, _I * _R2, 0],
        [1, _I, -_I, -1, 0, _I * _R2, -_I * _R2, 0],
        [1, -_I, _I, -1, -_R2, 0, 0, _R2],
    ],
    3: [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, -1, 1, -_I, _I, _I, -_I],
        [1, -1, -1, 1, _I, -_I, -_I, _I],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, _I, -_I, -1, -_R2, 0, 0, _R2],
        [1, -_I, _I, -1, 0, -_I * _R2, _I * _R2, 0],
        [1, -_I, _I, -1, 0, _I * _R2, -_I * _R2, 0],
        [1, _I, -_I, -1, _R2, 0, 0, -_R2],
    ],
}
H8_TRIPLETS = {"A": (1, 1, 1), "B": (1, 2, 3), "C": (0, 1, 1)}


def h8_pairing(i: int, first: str = "alpha", second: str = "beta") -> Pairing:
    if i not in H8_PAIRING_MATRICES:
        raise ValueError(f"H8 pairings are numbered 0..3, got {i}")
    return Pairing.from_dense(first, second, H8_PAIRING_MATRICES[i])


def h8_doublet(i: int) -> HopfDoublet:
    H = h8()
    return HopfDoublet(H, H, h8_pairing(i))


def h8_triplet(which: str) -> HopfTriplet:
    if which not in H8_TRIPLETS:
        raise ValueError(f"H8 triplets are A, B, C; got {which!r}")
    H = h8()
    mats = [H8_PAIRING_MATRICES[i] for i in H8_TRIPLETS[which]]
    return HopfTriplet.make(H, H, H, *mats, name=f"h8:{which}")


BUILTIN_TRIPLETS = {
    "cyclic:N": "quasi-triangular triplet of C[Z/N] with R = (1/N) sum exp(2 pi i kl/N) [k](x)[l]",
    "h8:A": "H8 with pairings (M1, M1, M1)",
    "h8:B": "H8 with pairings (M1, M2, M3)",
    "h8:C": "H8 with pairings (M0, M1, M1)",
    "tautological:ALG": "tautological triplet of the standard doublet of a builtin algebra",
}
BUILTIN_DOUBLETS = {
    "standard:ALG": "standard doublet (H, (H^*)^op) of a builtin algebra",
    "h8:M0..h8:M3": "(H8, H8) with one of the four listed pairings",
}


def builtin_triplet(name: str) -> HopfTriplet:
    head, _, rest = name.partition(":")
    try:
        if head == "cyclic":
            return cyclic_triplet(int(rest))
        if head == "h8":
            return h8_triplet(rest)
        if head == "tautological":
            t = tautological_triplet(standard_doublet(builtin_algebra(rest)))
            return HopfTriplet(t.alpha, t.beta, t.kappa, t.p_ab, t.p_bk, t.p_ka, name=name)
    except ValueError as exc:
        raise ParseError(str(exc), "builtin") from None
    raise ParseError(f"unknown builtin triplet {name!r}", "builtin")


def builtin_doublet(name: str) -> HopfDoublet:
    head, _, rest = name.partition(":")
    if head == "standard":
        return standard_doublet(builtin_algebra(rest))
    if head == "h8" and rest in ("M0", "M1", "M2", "M3"):
        return h8_doublet(int(rest[1]))
    raise ParseError(f"unknown builtin doublet {name!r}", "builtin")


def _matrix_to_json(t: Tensor) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in t.to_dense()]


def _matrix_from_json(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ParseError("expected a dense matrix of [re, im] pairs", where)
    width = len(obj[0])
    out = np.zeros((len(obj), width), dtype=complex)
    for i, row in enumerate(obj):
        if len(row) != width:
            raise ParseError("ragged matrix row", f"{where}[{i}]")
        for j, v in enumerate(row):
            if isinstance(v, (int, float)):
                out[i, j] = v
            elif isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
                out[i, j] = complex(*v)
            else:
                raise ParseError("entry must be a number or [re, im]", f"{where}[{i}][{j}]")
    return out


def _algebra_ref(obj, where: str) -> HopfAlgebra:
    if isinstance(obj, str):
        if not obj.startswith("builtin:"):
            raise ParseError("algebra reference must be an object or 'builtin:NAME'", where)
        try:
            return builtin_algebra(obj[len("builtin:"):])
        except ParseError as exc:
            raise ParseError(str(exc), where) from None
    return algebra_from_json(obj, where)


def _wrap_structural(fn, where: str):
    try:
        return fn()
    except StructuralError as exc:
        raise ParseError(str(exc), where) from None


def triplet_from_json(obj: dict, where: str = "triplet") -> HopfTriplet:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", where)
    algs, mats = [], []
    for key in COLORS:
        if key not in obj:
            raise ParseError(f"missing field {key!r}", where)
        algs.append(_algebra_ref(obj[key], f"{where}.{key}"))
    for key in ("pair_ab", "pair_bk", "pair_ka"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", where)
        mats.append(_matrix_from_json(obj[key], f"{where}.{key}"))
    name = str(obj.get("name", where))
    return _wrap_structural(lambda: HopfTriplet.make(*algs, *mats, name=name), where)


def triplet_to_json(t: HopfTriplet) -> dict:
    return {
        "name": t.name,
        "alpha": algebra_to_json(t.alpha),
        "beta": algebra_to_json(t.beta),
        "kappa": algebra_to_json(t.kappa),
        "pair_ab": _matrix_to_json(t.p_ab.matrix),
        "pair_bk": _matrix_to_json(t.p_bk.matrix),
        "pair_ka": _matrix_to_json(t.p_ka.matrix),
    }


def doublet_from_json(obj: dict, where: str = "doublet") -> HopfDoublet:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", where)
    for key in ("alpha", "beta", "pair"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", where)
    A = _algebra_ref(obj["alpha"], f"{where}.alpha")
    B = _algebra_ref(obj["beta"], f"{where}.beta")
    P = _matrix_from_json(obj["pair"], f"{where}.pair")
    return _wrap_structural(lambda: HopfDoublet.make(A, B, P), where)


def doublet_to_json(D: HopfDoublet) -> dict:
    return {"alpha": algebra_to_json(D.alpha), "beta": algebra_to_json(D.beta), "pair": _matrix_to_json(D.P)}


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    except OSError as exc:
        raise ParseError(str(exc), path) from None


def load_triplet(ref: str) -> HopfTriplet:
    if ref.startswith("builtin:"):
        return builtin_triplet(ref[len("builtin:"):])
    return triplet_from_json(_read_json(ref), ref)


def load_doublet(ref: str) -> HopfDoublet:
    if ref.startswith("builtin:"):
        return builtin_doublet(ref[len("builtin:"):])
    return doublet_from_json(_read_json(ref), ref)
