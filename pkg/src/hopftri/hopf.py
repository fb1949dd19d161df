"""Finite-dimensional Hopf algebras given by structure constants.

Index conventions (basis ``e_0 .. e_{n-1}``)::

    M[i, j, k]      coefficient of e_k in e_i * e_j
    eta[k]          coefficient of e_k in the unit
    Delta[k, i, j]  coefficient of e_i (x) e_j in Delta(e_k)
    eps[k]          counit of e_k
    S[k, l]         coefficient of e_l in S(e_k)
"""

from __future__ import annotations

import hashlib
import itertools
import json
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError, StructuralError
from .report import ValidationReport, default_tol
from .tensor import Tensor, einsum, outer


@dataclass(frozen=True, eq=False)
class HopfAlgebra:
    name: str
    basis: tuple[str, ...]
    M: Tensor
    eta: Tensor
    Delta: Tensor
    eps: Tensor
    S: Tensor

    def __post_init__(self):
        n = len(self.basis)
        if n == 0:
            raise StructuralError("a Hopf algebra needs a nonempty basis")
        expected = {
            "M": (n, n, n),
            "eta": (n,),
            "Delta": (n, n, n),
            "eps": (n,),
            "S": (n, n),
        }
        for field, shape in expected.items():
            got = getattr(self, field).shape
            if got != shape:
                raise StructuralError(f"{self.name}: {field} has shape {got}, expected {shape}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_arrays(cls, name, basis, M, eta, Delta, eps, S) -> HopfAlgebra:
        return cls(
            name,
            tuple(basis),
            Tensor.from_dense(M, "M"),
            Tensor.from_dense(eta, "eta"),
            Tensor.from_dense(Delta, "Delta"),
            Tensor.from_dense(eps, "eps"),
            Tensor.from_dense(S, "S"),
        )

    def renamed(self, name: str) -> HopfAlgebra:
        return HopfAlgebra(name, self.basis, self.M, self.eta, self.Delta, self.eps, self.S)

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256(repr(self.basis).encode())
        for t in (self.M, self.eta, self.Delta, self.eps, self.S):
            h.update(repr(t.shape).encode())
            h.update(np.ascontiguousarray(t.coords).tobytes())
            h.update(np.round(np.ascontiguousarray(t.values), 12).tobytes())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"<HopfAlgebra {self.name} dim={self.dim}>"


def validate_hopf(H: HopfAlgebra, tol: float | None = None) -> ValidationReport:
    """Check every Hopf algebra axiom and the involutory condition."""
    tol = default_tol() if tol is None else tol
    M, eta, D, eps, S = H.M, H.eta, H.Delta, H.eps, H.S
    ident = Tensor.identity(H.dim)
    rep = ValidationReport(f"Hopf algebra {H.name} (dim {H.dim})", tol)

    rep.add("associativity", einsum("ijx,xkl->ijkl", M, M).distance(einsum("jkx,ixl->ijkl", M, M)))
    rep.add(
        "unit",
        max(einsum("x,xjk->jk", eta, M).distance(ident), einsum("x,jxk->jk", eta, M).distance(ident)),
    )
    rep.add(
        "coassociativity",
        einsum("kxc,xab->kabc", D, D).distance(einsum("kax,xbc->kabc", D, D)),
    )
    rep.add(
        "counit",
        max(einsum("kxj,x->kj", D, eps).distance(ident), einsum("kjx,x->kj", D, eps).distance(ident)),
    )
    rep.add(
        "bialgebra",
        max(
            einsum("abx,xij->abij", M, D).distance(einsum("apq,brs,pri,qsj->abij", D, D, M, M)),
            einsum("abx,x->ab", M, eps).distance(outer(eps, eps)),
            einsum("x,xij->ij", eta, D).distance(outer(eta, eta)),
            abs(einsum("x,x->", eta, eps).item() - 1),
        ),
    )
    unit_counit = outer(eps, eta)
    rep.add(
        "antipode",
        max(
            einsum("kab,ac,cbl->kl", D, S, M).distance(unit_counit),
            einsum("kab,bc,acl->kl", D, S, M).distance(unit_counit),
        ),
    )
    rep.add("involutory", einsum("kx,xl->kl", S, S).distance(ident))
    return rep


@dataclass(frozen=True)
class DerivedFunctionals:
    trace: Tensor
    cotrace: Tensor
    cotrace_other_leg: Tensor
    eps_of_cotrace: complex

    @property
    def legs_agree(self) -> bool:
        return self.cotrace.allclose(self.cotrace_other_leg)

    @property
    def integral(self) -> Tensor:
        return self.trace

    @property
    def cointegral(self) -> Tensor | None:
        """``C / eps(C)``, or None when eps(C) vanishes."""
        if abs(self.eps_of_cotrace) < 1e-12:
            return None
        return self.cotrace.scaled(1 / self.eps_of_cotrace)


def trace_cotrace(H: HopfAlgebra) -> DerivedFunctionals:
    cotrace = einsum("jja->a", H.Delta)
    return DerivedFunctionals(
        trace=einsum("ajj->a", H.M),
        cotrace=cotrace,
        cotrace_other_leg=einsum("jaj->a", H.Delta),
        eps_of_cotrace=einsum("a,a->", cotrace, H.eps).item(),
    )


def iterated_coproduct(H: HopfAlgebra, x: Tensor, m: int) -> Tensor:
    """Apply the (m-1)-fold coproduct to the vector ``x``; m=0 applies eps."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return einsum("a,a->", x, H.eps)
    out = x
    for k in range(1, m):
        head = "".join(chr(ord("a") + i) for i in range(k - 1))
        out = einsum(f"{head}x,xyz->{head}yz", out, H.Delta)
    return out


def curve_tensor(H: HopfAlgebra, m: int, cotrace: Tensor | None = None) -> Tensor:
    """Cotrace fed into the iterated coproduct: a tensor with ``m`` outputs."""
    if cotrace is None:
        cotrace = trace_cotrace(H).cotrace
    return iterated_coproduct(H, cotrace, m)


def _dual(H: HopfAlgebra) -> HopfAlgebra:
    return HopfAlgebra(
        f"{H.name}^*",
        tuple(f"d({b})" for b in H.basis),
        H.Delta.transpose([1, 2, 0]),
        H.eps,
        H.M.transpose([2, 0, 1]),
        H.eta,
        H.S.transpose([1, 0]),
    )


def variant_algebra(H: HopfAlgebra, kind: str) -> HopfAlgebra:
    """Dual, opposite or co-opposite algebra.

    ``kind`` may chain several variants with commas, applied left to right,
    e.g. ``"cop,dual"`` is the dual of the co-opposite.
    """
    for k in (s.strip() for s in kind.split(",")):
        if k == "dual":
            H = _dual(H)
        elif k == "op":
            H = HopfAlgebra(f"{H.name}^op", H.basis, H.M.transpose([1, 0, 2]), H.eta, H.Delta, H.eps, H.S)
        elif k == "cop":
            H = HopfAlgebra(f"{H.name}^cop", H.basis, H.M, H.eta, H.Delta.transpose([0, 2, 1]), H.eps, H.S)
        else:
            raise ValueError(f"unknown variant {k!r}")
    return H


def _check_group(table: np.ndarray) -> tuple[int, np.ndarray]:
    n = table.shape[0]
    if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
        raise StructuralError("multiplication table must be n x n with entries in range(n)")
    identities = [e for e in range(n) if (table[e] == np.arange(n)).all() and (table[:, e] == np.arange(n)).all()]
    if not identities:
        raise StructuralError("multiplication table has no identity")
    e = identities[0]
    inverse = np.full(n, -1)
    for g in range(n):
        hits = np.nonzero((table[g] == e) & (table[:, g] == e))[0]
        if not len(hits):
            raise StructuralError(f"element {g} has no inverse")
        inverse[g] = hits[0]
    if not (table[table, :] == table[:, table]).all():
        raise StructuralError("multiplication table is not associative")
    return e, inverse


def group_algebra(table: int | Sequence[Sequence[int]], labels: Sequence[str] | None = None, name: str | None = None):
    """Group algebra C[G] from a multiplication table or a cyclic order N.

    ``table[i][j]`` is the index of ``g_i g_j``.
    """
    if isinstance(table, (int, np.integer)):
        n = int(table)
        if n < 1:
            raise StructuralError("cyclic order must be positive")
        idx = np.arange(n)
        table = (idx[:, None] + idx[None, :]) % n
        labels = labels or [f"g{k}" for k in range(n)]
        name = name or f"C[Z/{n}]"
    table = np.asarray(table, dtype=np.int64)
    e, inverse = _check_group(table)
    n = table.shape[0]
    labels = tuple(labels or [f"g{k}" for k in range(n)])
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    diag = np.arange(n)
    ones = np.ones(n)
    return HopfAlgebra(
        name or f"C[G{n}]",
        labels,
        Tensor((n, n, n), np.stack([i.ravel(), j.ravel(), table.ravel()], axis=1), np.ones(n * n), "M"),
        Tensor((n,), [[e]], [1.0], "eta"),
        Tensor((n, n, n), np.stack([diag, diag, diag], axis=1), ones, "Delta"),
        Tensor((n,), diag[:, None], ones, "eps"),
        Tensor((n, n), np.stack([diag, inverse], axis=1), ones, "S"),
    )


def klein_four() -> HopfAlgebra:
    table = [[a ^ b for b in range(4)] for a in range(4)]
    return group_algebra(table, labels=["1", "a", "b", "ab"], name="C[Z/2xZ/2]")


H8_BASIS = ("1", "x", "y", "xy", "z", "xz", "yz", "xyz")


def _h8_index(a: int, b: int, c: int) -> int:
    return (a % 2) + 2 * (b % 2) + 4 * c


def _h8_product() -> np.ndarray:
    M = np.zeros((8, 8, 8), dtype=complex)
    for (a, b, c), (a2, b2, c2) in itertools.product(itertools.product(range(2), repeat=3), repeat=2):
        i, j = _h8_index(a, b, c), _h8_index(a2, b2, c2)
        # z x^a' y^b' = x^b' y^a' z
        p, q = (b2, a2) if c else (a2, b2)
        if c + c2 < 2:
            M[i, j, _h8_index(a + p, b + q, c + c2)] += 1
        else:
            # z^2 = (1 + x + y - xy) / 2
            for da, db, coef in ((0, 0, 0.5), (1, 0, 0.5), (0, 1, 0.5), (1, 1, -0.5)):
                M[i, j, _h8_index(a + p + da, b + q + db, 0)] += coef
    return M


def h8() -> HopfAlgebra:
    """The eight-dimensional Kac-Paljutkin algebra on the monomial basis."""
    M = _h8_product()
    n = 8
    x, y, z = _h8_index(1, 0, 0), _h8_index(0, 1, 0), _h8_index(0, 0, 1)

    def mul(u, v):
        return np.einsum("i,j,ijk->k", u, v, M)

    def mul2(X, Y):
        return np.einsum("pq,rs,pri,qsj->ij", X, Y, M, M)

    e = np.eye(n)
    delta_gen = {x: np.outer(e[x], e[x]), y: np.outer(e[y], e[y])}
    yz = _h8_index(0, 1, 1)
    xz = _h8_index(1, 0, 1)
    delta_gen[z] = 0.5 * (np.outer(e[z], e[z]) + np.outer(e[yz], e[z]) + np.outer(e[z], e[xz]) - np.outer(e[yz], e[xz]))
    Delta = np.zeros((n, n, n), dtype=complex)
    S = np.zeros((n, n), dtype=complex)
    for a, b, c in itertools.product(range(2), repeat=3):
        k = _h8_index(a, b, c)
        d = np.outer(e[0], e[0])
        s = e[0]
        # S is an anti-homomorphism fixing the generators: S(x^a y^b z^c) = z^c y^b x^a
        for gen, power in ((x, a), (y, b), (z, c)):
            for _ in range(power):
                d = mul2(d, delta_gen[gen])
                s = mul(e[gen], s)
        Delta[k] = d
        S[k] = s
    return HopfAlgebra.from_arrays("H8", H8_BASIS, M, e[0], Delta, np.ones(n), S)


def trivial_algebra() -> HopfAlgebra:
    return group_algebra(1, labels=["1"], name="C")


def builtin_algebra(name: str) -> HopfAlgebra:
    """Resolve ``h8``, ``klein4``, ``trivial``, ``cyclic:N`` (optionally with
    ``:dual``, ``:op``, ``:cop`` suffixes, e.g. ``h8:cop``)."""
    head, *rest = name.split(":")
    if head == "cyclic":
        if not rest or not rest[0].isdigit():
            raise ParseError(f"cyclic algebra needs an order, got {name!r}", "builtin")
        H = group_algebra(int(rest[0]))
        rest = rest[1:]
    elif head == "h8":
        H = h8()
    elif head == "klein4":
        H = klein_four()
    elif head == "trivial":
        H = trivial_algebra()
    else:
        raise ParseError(f"unknown builtin algebra {name!r}", "builtin")
    for kind in rest:
        if kind not in ("dual", "op", "cop"):
            raise ParseError(f"unknown variant {kind!r} in {name!r}", "builtin")
        H = variant_algebra(H, kind)
    return H


BUILTIN_ALGEBRAS = {
    "trivial": "one-dimensional algebra C",
    "cyclic:N": "group algebra of Z/N",
    "klein4": "group algebra of Z/2 x Z/2",
    "h8": "8-dim Kac-Paljutkin algebra, neither commutative nor cocommutative",
}


def _sparse_rows(t: Tensor) -> list[list]:
    return [[*map(int, c), float(v.real), float(v.imag)] for c, v in zip(t.coords, t.values)]


def algebra_to_json(H: HopfAlgebra) -> dict:
    return {
        "name": H.name,
        "dim": H.dim,
        "basis": list(H.basis),
        "mul": _sparse_rows(H.M),
        "unit": _sparse_rows(H.eta),
        "comul": _sparse_rows(H.Delta),
        "counit": _sparse_rows(H.eps),
        "antipode": _sparse_rows(H.S),
    }


def algebra_from_json(obj: dict, where: str = "algebra") -> HopfAlgebra:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", where)
    try:
        n = obj["dim"]
    except KeyError:
        raise ParseError("missing field 'dim'", where) from None
    if not isinstance(n, int) or n < 1:
        raise ParseError("'dim' must be a positive integer", f"{where}.dim")
    basis = obj.get("basis", [f"e{k}" for k in range(n)])
    if len(basis) != n:
        raise ParseError(f"{len(basis)} basis labels for dim {n}", f"{where}.basis")
    rank = {"mul": 3, "unit": 1, "comul": 3, "counit": 1, "antipode": 2}
    tensors = {}
    for key, r in rank.items():
        rows = obj.get(key, [])
        coords, values = [], []
        for pos, row in enumerate(rows):
            loc = f"{where}.{key}[{pos}]"
            if not isinstance(row, list) or len(row) != r + 2:
                raise ParseError(f"expected {r} indices followed by re, im", loc)
            idx, (re, im) = row[:r], row[r:]
            if not all(isinstance(i, int) and 0 <= i < n for i in idx):
                raise ParseError(f"indices must be integers in [0, {n})", loc)
            if not all(isinstance(v, (int, float)) for v in (re, im)):
                raise ParseError("re and im must be numbers", loc)
            coords.append(idx)
            values.append(complex(re, im))
        tensors[key] = Tensor((n,) * r, np.array(coords, dtype=np.int64).reshape(-1, r), values, key)
    return HopfAlgebra(
        str(obj.get("name", "user")),
        tuple(map(str, basis)),
        tensors["mul"],
        tensors["unit"],
        tensors["comul"],
        tensors["counit"],
        tensors["antipode"],
    )


def load_algebra(ref: str | dict) -> HopfAlgebra:
    """Load from ``builtin:NAME``, a JSON file path, or an already-parsed object."""
    if isinstance(ref, dict):
        return algebra_from_json(ref)
    if ref.startswith("builtin:"):
        return builtin_algebra(ref[len("builtin:"):])
    try:
        with open(ref, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{ref}:{exc.lineno}:{exc.colno}") from None
    except OSError as exc:
        raise ParseError(str(exc), ref) from None
    return algebra_from_json(obj, ref)
