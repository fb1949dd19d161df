"""Trisection brackets and their normalized invariant, plus the Kuperberg invariant of Heegaard data."""

from __future__ import annotations

import cmath
import math
import threading
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import NotAdmissibleError, StructuralError
from .hopf import HopfAlgebra, curve_tensor, trace_cotrace
from .pairing import CYCLIC_PAIRS, HopfDoublet, HopfTriplet
from .tensor import Tensor, TensorNetwork, einsum, evaluate, plan_contraction
from .topology import TrisectionDatum, builtin_diagram, require_valid

ZERO_TOL = 1e-10
REAL_TOL = 1e-9

_ORDERED = {frozenset(p): p for p in CYCLIC_PAIRS}


def _ordered_pair(c1: str, c2: str) -> tuple[str, str]:
    try:
        return _ORDERED[frozenset((c1, c2))]
    except KeyError:
        raise StructuralError(f"intersection between curves of the same color {c1}") from None


_curve_cache: dict[tuple[str, int], Tensor] = {}


def _default_curve(H: HopfAlgebra, m: int) -> Tensor:
    key = (H.fingerprint, m)
    t = _curve_cache.get(key)
    if t is None:
        t = _curve_cache.setdefault(key, curve_tensor(H, m))
    return t


def bracket_network(
    algebras: Mapping[str, HopfAlgebra],
    pairing: callable,
    d: TrisectionDatum,
    cotraces: Mapping[str, Tensor] | None = None,
) -> TensorNetwork:
    """One curve tensor per curve, one pairing node per intersection label.

    ``pairing(first, second)`` returns the matrix for an ordered color pair.
    A negative label puts the antipode of the first color on its leg.
    """
    cotraces = dict(cotraces or {})
    nodes: list[Tensor] = []
    where: dict[int, list[tuple[str, int, int]]] = {}
    cache: dict[tuple[str, int], Tensor] = {}
    for color in d.color_names:
        H = algebras[color]
        C = cotraces.get(color)
        for curve in d.curves(color):
            key = (color, len(curve))
            if key not in cache:
                cache[key] = _default_curve(H, len(curve)) if C is None else curve_tensor(H, len(curve), C)
            node = len(nodes)
            nodes.append(cache[key])
            for port, label in enumerate(curve):
                where.setdefault(label, []).append((color, node, port))
    edges = []
    for label in range(1, d.N + 1):
        (c1, n1, p1), (c2, n2, p2) = where[label]
        first, second = _ordered_pair(c1, c2)
        if c1 != first:
            (n1, p1), (n2, p2) = (n2, p2), (n1, p1)
        P = pairing(first, second)
        if d.signs[label - 1] < 0:
            P = einsum("ik,kj->ij", algebras[first].S, P)
        node = len(nodes)
        nodes.append(P)
        edges.append(((n1, p1), (node, 0)))
        edges.append(((n2, p2), (node, 1)))
    return TensorNetwork(nodes, edges)


def _triplet_network(t: HopfTriplet, d: TrisectionDatum, cotraces=None) -> TensorNetwork:
    if d.colors != 3:
        raise StructuralError("a trisection bracket needs a three-color datum")
    algebras = {"alpha": t.alpha, "beta": t.beta, "kappa": t.kappa}
    return bracket_network(algebras, lambda g, h: t.pairing(g, h).matrix, d, cotraces)


def bracket(t: HopfTriplet, d: TrisectionDatum, cotraces: Mapping[str, Tensor] | None = None) -> complex:
    """Raw trisection bracket. ``cotraces`` optionally replaces C per color."""
    require_valid(d)
    return evaluate(_triplet_network(t, d, cotraces)).item()


_st_cache: dict[str, complex] = {}
_st_lock = threading.Lock()


def stabilizer_bracket(t: HopfTriplet) -> complex:
    """Bracket of the standard genus-3 diagram of S^4, cached per triplet content."""
    key = t.fingerprint
    value = _st_cache.get(key)
    if value is None:
        value = bracket(t, builtin_diagram("T_st"))
        with _st_lock:
            _st_cache.setdefault(key, value)
    return value


def normalization_root(st: complex, policy: str = "real") -> tuple[complex, bool]:
    """Cube root of the stabilizer bracket; returns (xi, convention_dependent)."""
    if abs(st) < ZERO_TOL:
        raise NotAdmissibleError(f"stabilizer bracket {st} vanishes")
    if policy == "real":
        if abs(st.imag) / abs(st) >= REAL_TOL or st.real <= 0:
            raise NotAdmissibleError(
                f"stabilizer bracket {st} is not real and positive; use the principal root policy"
            )
        return complex(st.real ** (1 / 3)), False
    if policy == "principal":
        r, phi = cmath.polar(st)
        return cmath.rect(r ** (1 / 3), phi / 3), True
    raise ValueError(f"unknown root policy {policy!r}")


@dataclass
class InvariantResult:
    bracket: complex
    stabilizer_bracket: complex
    xi: complex
    tau: complex
    genus: int
    admissible: bool
    root_policy: str = "real"
    convention_dependent: bool = False
    triplet: str = ""
    diagram: str = ""
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def c(z: complex) -> list[float]:
            return [z.real, z.imag]

        return {
            "triplet": self.triplet,
            "diagram": self.diagram,
            "genus": self.genus,
            "bracket": c(self.bracket),
            "stabilizer_bracket": c(self.stabilizer_bracket),
            "xi": c(self.xi),
            "tau": c(self.tau),
            "admissible": self.admissible,
            "root_policy": self.root_policy,
            "convention_dependent": self.convention_dependent,
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_json(cls, obj: dict) -> InvariantResult:
        def c(pair) -> complex:
            return complex(pair[0], pair[1])

        return cls(
            bracket=c(obj["bracket"]),
            stabilizer_bracket=c(obj["stabilizer_bracket"]),
            xi=c(obj["xi"]),
            tau=c(obj["tau"]),
            genus=obj["genus"],
            admissible=obj["admissible"],
            root_policy=obj["root_policy"],
            convention_dependent=obj["convention_dependent"],
            triplet=obj["triplet"],
            diagram=obj["diagram"],
            diagnostics=dict(obj["diagnostics"]),
        )


def trisection_invariant(t: HopfTriplet, d: TrisectionDatum, root_policy: str = "real") -> InvariantResult:
    require_valid(d)
    st = stabilizer_bracket(t)
    xi, dependent = normalization_root(st, root_policy)
    net = _triplet_network(t, d)
    plan = plan_contraction(net)
    b = evaluate(net, plan).item()
    return InvariantResult(
        bracket=b,
        stabilizer_bracket=st,
        xi=xi,
        tau=b * xi ** (-d.genus),
        genus=d.genus,
        admissible=True,
        root_policy=root_policy,
        convention_dependent=dependent,
        triplet=t.name,
        diagram=d.name,
        diagnostics={
            "nodes": len(net.nodes),
            "steps": len(plan.steps),
            "peak_rank": plan.peak_rank,
            "peak_size": plan.peak_size,
        },
    )


def invariant(t: HopfTriplet, d: TrisectionDatum, root_policy: str = "real") -> complex:
    return trisection_invariant(t, d, root_policy).tau


def heegaard_bracket(D: HopfDoublet, d: TrisectionDatum) -> complex:
    if d.colors != 2:
        raise StructuralError("the Kuperberg bracket needs a two-color (Heegaard) datum")
    require_valid(d)
    algebras = {"alpha": D.alpha, "beta": D.beta}
    return evaluate(bracket_network(algebras, lambda g, h: D.P, d)).item()


def kuperberg_invariant(D: HopfDoublet, d: TrisectionDatum) -> complex:
    """Heegaard bracket normalized by the genus-1 splitting of S^3."""
    st = heegaard_bracket(D, builtin_diagram("S3_heegaard"))
    if abs(st) < ZERO_TOL:
        raise NotAdmissibleError(f"S^3 bracket {st} vanishes")
    return heegaard_bracket(D, d) * st ** (-d.genus)


TABLE1_MANIFOLDS = ("S4", "S2xS2", "CP2", "S1xS3", "S2xT2")


def table1_expected(manifold: str, N: int) -> complex:
    """Closed forms of the cyclic-triplet invariant."""
    if manifold == "S4":
        return 1 + 0j
    if manifold == "S2xS2":
        return complex((3 + (-1) ** N) / (2 * N))
    if manifold == "CP2":
        return sum(cmath.exp(2j * math.pi * k * k / N) for k in range(1, N + 1)) / N
    if manifold == "S1xS3":
        return complex(N)
    if manifold == "S2xT2":
        return complex(N * (3 + (-1) ** N) / 2)
    raise ValueError(f"unknown manifold {manifold!r}; choose from {TABLE1_MANIFOLDS}")


def euler_signature_formula(tau_cp2: complex, tau_cp2bar: complex, chi: int, sigma: int) -> complex:
    """Value predicted for a manifold from its Euler characteristic and signature."""
    if tau_cp2 == 0 or tau_cp2bar == 0:
        raise ValueError("both inputs must be nonzero")
    return (tau_cp2 * tau_cp2bar) ** (-1 + chi / 2) * (tau_cp2 / tau_cp2bar) ** (sigma / 2)


def cotrace_of(H: HopfAlgebra) -> Tensor:
    return trace_cotrace(H).cotrace


_R8 = 2 * math.sqrt(2)
TABLE2_MANIFOLDS = ("S4", "CP2", "S1xS3", "S2xS2", "S2twS2")
TABLE2_EXPECTED = {
    "A": (1, complex(-1, 1) / _R8, 8, 0.25, 0.25),
    "B": (1, complex(1, 1) / _R8, 8, 0.25, 0.25),
    "C": (1, 0, 2 ** (8 / 3), 2 ** (-2 / 3), 0),
}
_DIAGRAM_OF = {"S4": "S4_g0"}


@dataclass(frozen=True)
class TableRow:
    triplet: str
    manifold: str
    computed: complex
    expected: complex

    @property
    def deviation(self) -> float:
        return abs(self.computed - self.expected)


def table1_rows(nmax: int = 8, manifolds: tuple[str, ...] = ("S4", "CP2", "S1xS3", "S2xS2")) -> list[TableRow]:
    from .pairing import cyclic_triplet

    rows = []
    for N in range(2, nmax + 1):
        t = cyclic_triplet(N)
        for m in manifolds:
            d = builtin_diagram(_DIAGRAM_OF.get(m, m))
            rows.append(TableRow(f"cyclic:{N}", m, invariant(t, d), table1_expected(m, N)))
    return rows


def table2_rows() -> list[TableRow]:
    from .pairing import h8_triplet

    rows = []
    for which, expected in TABLE2_EXPECTED.items():
        t = h8_triplet(which)
        for m, e in zip(TABLE2_MANIFOLDS, expected):
            d = builtin_diagram(_DIAGRAM_OF.get(m, m))
            rows.append(TableRow(f"h8:{which}", m, invariant(t, d), complex(e)))
    return rows
