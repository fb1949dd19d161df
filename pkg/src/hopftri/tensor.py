"""Sparse complex tensors and tensor-network contraction.

Tensors are stored in coordinate form (one row of indices per nonzero entry)
and kept canonical: duplicates summed, entries below ``SPARSITY_FLOOR``
dropped, rows sorted by flat index. Pairwise contraction reshapes both
operands to matrices and multiplies them with scipy.sparse, switching to a
dense product when both operands are dense enough.

Networks are immutable. A contraction plan is a list of pairwise merges in
"linear" form: each step names two positions in the current node list, the
pair is removed and the fused node is appended at the end.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import StructuralError

SPARSITY_FLOOR = 1e-14
DENSE_FRACTION = 0.25
_DENSE_LIMIT = 1 << 22
# below this many entries per operand, scipy's setup costs more than a dense matmul
_SMALL = 1 << 12

Port = tuple[int, int]


def _flat(coords: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if not shape:
        return np.zeros(len(coords), dtype=np.int64)
    return np.ravel_multi_index(tuple(coords.T), shape).astype(np.int64)


def _unflat(flat: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if not shape:
        return np.zeros((len(flat), 0), dtype=np.int64)
    return np.stack(np.unravel_index(flat, shape), axis=1).astype(np.int64)


class Tensor:
    """Immutable sparse complex tensor."""

    __slots__ = ("shape", "coords", "values", "name")

    def __init__(
        self,
        shape: Sequence[int],
        coords: np.ndarray | Sequence[Sequence[int]] = (),
        values: np.ndarray | Sequence[complex] = (),
        name: str | None = None,
    ):
        shape = tuple(int(s) for s in shape)
        if any(s <= 0 for s in shape):
            raise StructuralError(f"axis extents must be positive, got {shape}")
        values = np.asarray(values, dtype=complex).reshape(-1)
        if shape:
            coords = np.asarray(coords, dtype=np.int64).reshape(-1, len(shape))
        else:
            coords = np.zeros((len(values), 0), dtype=np.int64)
        if len(coords) != len(values):
            raise StructuralError("coords and values differ in length")
        if len(coords) and ((coords < 0).any() or (coords >= np.array(shape)).any()):
            raise StructuralError(f"index out of bounds for shape {shape}")
        flat = _flat(coords, shape)
        uniq, inverse = np.unique(flat, return_inverse=True)
        summed = np.bincount(inverse, weights=values.real, minlength=len(uniq)) + 1j * np.bincount(
            inverse, weights=values.imag, minlength=len(uniq)
        )
        keep = np.abs(summed) >= SPARSITY_FLOOR
        uniq, summed = uniq[keep], summed[keep]
        coords = _unflat(uniq, shape)
        coords.setflags(write=False)
        summed.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "values", summed)
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("Tensor is immutable")

    @classmethod
    def from_dense(cls, array: np.ndarray, name: str | None = None) -> Tensor:
        array = np.asarray(array, dtype=complex)
        if array.ndim == 0:
            return cls((), np.zeros((1, 0), dtype=np.int64), [array.item()], name)
        idx = np.argwhere(np.abs(array) >= SPARSITY_FLOOR)
        return cls(array.shape, idx, array[tuple(idx.T)], name)

    @classmethod
    def from_entries(
        cls, shape: Sequence[int], entries: Mapping[tuple[int, ...], complex], name: str | None = None
    ) -> Tensor:
        keys = list(entries)
        return cls(shape, np.array(keys, dtype=np.int64).reshape(-1, len(shape)), [entries[k] for k in keys], name)

    @classmethod
    def scalar(cls, value: complex) -> Tensor:
        return cls((), np.zeros((1, 0), dtype=np.int64), [value])

    @classmethod
    def identity(cls, n: int) -> Tensor:
        idx = np.arange(n)
        return cls((n, n), np.stack([idx, idx], axis=1), np.ones(n))

    @property
    def rank(self) -> int:
        return len(self.shape)

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    @property
    def density(self) -> float:
        return self.nnz / self.size

    @property
    def entries(self) -> dict[tuple[int, ...], complex]:
        return {tuple(int(i) for i in c): complex(v) for c, v in zip(self.coords, self.values)}

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        if not self.rank:
            return np.array(self.item())
        if self.nnz:
            out[tuple(self.coords.T)] = self.values
        return out

    def item(self) -> complex:
        if self.rank:
            raise StructuralError(f"tensor of rank {self.rank} is not a scalar")
        return complex(self.values[0]) if self.nnz else 0j

    def __getitem__(self, index: int | tuple[int, ...]) -> complex:
        index = (index,) if isinstance(index, (int, np.integer)) else tuple(index)
        if len(index) != self.rank:
            raise IndexError("full multi-index required")
        pos = np.searchsorted(_flat(self.coords, self.shape), _flat(np.array([index]), self.shape)[0])
        if pos < self.nnz and tuple(self.coords[pos]) == index:
            return complex(self.values[pos])
        return 0j

    def transpose(self, perm: Sequence[int]) -> Tensor:
        perm = list(perm)
        if sorted(perm) != list(range(self.rank)):
            raise StructuralError(f"invalid axis permutation {perm}")
        return Tensor([self.shape[p] for p in perm], self.coords[:, perm], self.values, self.name)

    def reshape(self, shape: Sequence[int]) -> Tensor:
        """Row-major reshape, as in numpy."""
        shape = tuple(int(s) for s in shape)
        if math.prod(shape) != self.size:
            raise StructuralError(f"cannot reshape {self.shape} to {shape}")
        return Tensor(shape, _unflat(_flat(self.coords, self.shape), shape), self.values, self.name)

    def scaled(self, factor: complex) -> Tensor:
        return Tensor(self.shape, self.coords, self.values * factor, self.name)

    def with_name(self, name: str | None) -> Tensor:
        return Tensor(self.shape, self.coords, self.values, name)

    def __add__(self, other: Tensor) -> Tensor:
        if not isinstance(other, Tensor):
            return NotImplemented
        if other.shape != self.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        return Tensor(
            self.shape, np.concatenate([self.coords, other.coords]), np.concatenate([self.values, other.values])
        )

    def __neg__(self) -> Tensor:
        return self.scaled(-1)

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.nnz else 0.0

    def distance(self, other: Tensor) -> float:
        """Max-norm of the entrywise difference."""
        return (self - other).max_abs()

    def allclose(self, other: Tensor, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        scale = max(self.max_abs(), other.max_abs())
        return self.shape == other.shape and self.distance(other) <= atol + rtol * scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Tensor{label} shape={self.shape} nnz={self.nnz}>"


def trace_axes(t: Tensor, p: int, q: int) -> Tensor:
    """Sum over the diagonal of axes ``p`` and ``q``."""
    if p == q or not (0 <= p < t.rank and 0 <= q < t.rank):
        raise StructuralError(f"bad trace axes {p}, {q}")
    if t.shape[p] != t.shape[q]:
        raise StructuralError(f"cannot trace axes of extent {t.shape[p]} and {t.shape[q]}")
    keep = [i for i in range(t.rank) if i not in (p, q)]
    mask = t.coords[:, p] == t.coords[:, q]
    return Tensor([t.shape[i] for i in keep], t.coords[mask][:, keep], t.values[mask])


def tensordot(a: Tensor, b: Tensor, a_axes: Sequence[int], b_axes: Sequence[int]) -> Tensor:
    """Contract ``a_axes`` of ``a`` with ``b_axes`` of ``b``.

    Result axes are the free axes of ``a`` in order, then those of ``b``.
    """
    a_axes, b_axes = list(a_axes), list(b_axes)
    if len(a_axes) != len(b_axes):
        raise StructuralError("axis lists differ in length")
    for x, y in zip(a_axes, b_axes):
        if a.shape[x] != b.shape[y]:
            raise StructuralError(f"extent mismatch on shared edge: {a.shape[x]} vs {b.shape[y]}")
    free_a = [i for i in range(a.rank) if i not in a_axes]
    free_b = [i for i in range(b.rank) if i not in b_axes]
    shape_a = tuple(a.shape[i] for i in free_a)
    shape_b = tuple(b.shape[i] for i in free_b)
    shared = tuple(a.shape[i] for i in a_axes)
    out_shape = shape_a + shape_b
    if not a.nnz or not b.nnz:
        return Tensor(out_shape)
    n_rows, n_mid, n_cols = math.prod(shape_a), math.prod(shared), math.prod(shape_b)
    ra, ca = _flat(a.coords[:, free_a], shape_a), _flat(a.coords[:, a_axes], shared)
    rb, cb = _flat(b.coords[:, b_axes], shared), _flat(b.coords[:, free_b], shape_b)
    biggest = max(n_rows * n_mid, n_mid * n_cols, n_rows * n_cols)
    dense = biggest <= _SMALL or (
        a.nnz > DENSE_FRACTION * n_rows * n_mid
        and b.nnz > DENSE_FRACTION * n_mid * n_cols
        and biggest <= _DENSE_LIMIT
    )
    if dense:
        left = np.zeros((n_rows, n_mid), dtype=complex)
        left[ra, ca] = a.values
        right = np.zeros((n_mid, n_cols), dtype=complex)
        right[rb, cb] = b.values
        prod = left @ right
        rows, cols = np.nonzero(np.abs(prod) >= SPARSITY_FLOOR)
        data = prod[rows, cols]
    else:
        left = sp.csr_matrix((a.values, (ra, ca)), shape=(n_rows, n_mid))
        right = sp.csr_matrix((b.values, (rb, cb)), shape=(n_mid, n_cols))
        prod = (left @ right).tocoo()
        rows, cols, data = prod.row, prod.col, prod.data
    coords = np.concatenate([_unflat(np.asarray(rows), shape_a), _unflat(np.asarray(cols), shape_b)], axis=1)
    return Tensor(out_shape, coords, data)


def outer(a: Tensor, b: Tensor) -> Tensor:
    return tensordot(a, b, [], [])


class TensorNetwork:
    """Immutable port-wired collection of tensors.

    Every port ``(node, axis)`` appears exactly once, either in an edge or in
    ``open_ports``. When ``open_ports`` is omitted the unpaired ports are taken
    in ascending order.
    """

    __slots__ = ("nodes", "edges", "open_ports")

    def __init__(
        self,
        nodes: Iterable[Tensor],
        edges: Iterable[tuple[Port, Port]] = (),
        open_ports: Iterable[Port] | None = None,
    ):
        nodes = tuple(nodes)
        edges = tuple((tuple(map(int, p)), tuple(map(int, q))) for p, q in edges)
        all_ports = {(n, k) for n, t in enumerate(nodes) for k in range(t.rank)}
        seen: set[Port] = set()

        def claim(port: Port) -> None:
            if port not in all_ports:
                raise StructuralError(f"port {port} does not exist")
            if port in seen:
                raise StructuralError(f"port {port} used more than once")
            seen.add(port)

        for p, q in edges:
            claim(p)
            claim(q)
            if nodes[p[0]].shape[p[1]] != nodes[q[0]].shape[q[1]]:
                raise StructuralError(
                    f"edge {p}-{q} joins extents {nodes[p[0]].shape[p[1]]} and {nodes[q[0]].shape[q[1]]}"
                )
        if open_ports is None:
            open_ports = sorted(all_ports - seen)
        else:
            open_ports = [tuple(map(int, p)) for p in open_ports]
            for p in open_ports:
                claim(p)
            if seen != all_ports:
                raise StructuralError(f"unassigned ports {sorted(all_ports - seen)}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "open_ports", tuple(open_ports))

    def __setattr__(self, key, value):
        raise AttributeError("TensorNetwork is immutable")

    def __repr__(self) -> str:
        return f"<TensorNetwork nodes={len(self.nodes)} edges={len(self.edges)} open={len(self.open_ports)}>"

    @property
    def is_closed(self) -> bool:
        return not self.open_ports

    def scaled_node(self, node: int, factor: complex) -> TensorNetwork:
        nodes = list(self.nodes)
        nodes[node] = nodes[node].scaled(factor)
        return TensorNetwork(nodes, self.edges, self.open_ports)


def _trace_self_loops(t: Tensor, loops: list[tuple[int, int]]) -> tuple[Tensor, list[int]]:
    """Trace the given axis pairs; return the tensor and surviving original axes."""
    kept = list(range(t.rank))
    for p, q in loops:
        t = trace_axes(t, kept.index(p), kept.index(q))
        kept = [k for k in kept if k not in (p, q)]
    return t, kept


def contract_pair(network: TensorNetwork, a: int, b: int) -> TensorNetwork:
    """Fuse nodes ``a`` and ``b``, contracting every edge between them.

    The fused node is appended last; its ports are ``a``'s free ports in order,
    then ``b``'s. Self-loops on either node are traced as part of the fusion.
    """
    n = len(network.nodes)
    if a == b:
        raise StructuralError("cannot contract a node with itself")
    if not (0 <= a < n and 0 <= b < n):
        raise StructuralError(f"node index out of range: ({a}, {b}) with {n} nodes")
    shared, loops_a, loops_b, rest = [], [], [], []
    for p, q in network.edges:
        ends = {p[0], q[0]}
        if ends == {a, b}:
            shared.append((p[1], q[1]) if p[0] == a else (q[1], p[1]))
        elif ends == {a}:
            loops_a.append((p[1], q[1]))
        elif ends == {b}:
            loops_b.append((p[1], q[1]))
        else:
            rest.append((p, q))
    ta, kept_a = _trace_self_loops(network.nodes[a], loops_a)
    tb, kept_b = _trace_self_loops(network.nodes[b], loops_b)
    fused = tensordot(ta, tb, [kept_a.index(x) for x, _ in shared], [kept_b.index(y) for _, y in shared])
    shared_a = {x for x, _ in shared}
    shared_b = {y for _, y in shared}
    free = [(a, k) for k in kept_a if k not in shared_a] + [(b, k) for k in kept_b if k not in shared_b]
    new_id = n - 2
    remap: dict[Port, Port] = {port: (new_id, pos) for pos, port in enumerate(free)}
    others = [k for k in range(n) if k not in (a, b)]
    index_of = {k: i for i, k in enumerate(others)}

    def move(port: Port) -> Port:
        return remap[port] if port[0] in (a, b) else (index_of[port[0]], port[1])

    nodes = [network.nodes[k] for k in others] + [fused]
    edges = [(move(p), move(q)) for p, q in rest]
    return TensorNetwork(nodes, edges, [move(p) for p in network.open_ports])


@dataclass(frozen=True)
class ContractionPlan:
    steps: tuple[tuple[int, int], ...]
    peak_rank: int = 0
    peak_size: int = 1

    @classmethod
    def from_steps(cls, network: TensorNetwork, steps: Iterable[tuple[int, int]]) -> ContractionPlan:
        steps = tuple((int(i), int(j)) for i, j in steps)
        peak_rank, peak_size = _simulate(network, steps)
        return cls(steps, peak_rank, peak_size)


def _port_lists(network: TensorNetwork) -> list[list[tuple[int, int]]]:
    """Per node, the list of (edge id or -1, extent) for ports not in self-loops."""
    ports: list[dict[int, tuple[int, int]]] = [{} for _ in network.nodes]
    for eid, (p, q) in enumerate(network.edges):
        if p[0] == q[0]:
            continue
        ports[p[0]][p[1]] = (eid, network.nodes[p[0]].shape[p[1]])
        ports[q[0]][q[1]] = (eid, network.nodes[q[0]].shape[q[1]])
    for p in network.open_ports:
        ports[p[0]][p[1]] = (-1, network.nodes[p[0]].shape[p[1]])
    return [[d[k] for k in sorted(d)] for d in ports]


def _fuse_ports(x: list[tuple[int, int]], y: list[tuple[int, int]]) -> list[tuple[int, int]]:
    shared = {e for e, _ in x if e >= 0} & {e for e, _ in y if e >= 0}
    return [p for p in x if p[0] not in shared] + [p for p in y if p[0] not in shared]


def _simulate(network: TensorNetwork, steps: Sequence[tuple[int, int]]) -> tuple[int, int]:
    nodes = _port_lists(network)
    peak_rank = max((len(p) for p in nodes), default=0)
    peak_size = max((math.prod(e for _, e in p) for p in nodes), default=1)
    for i, j in steps:
        if i == j or not (0 <= i < len(nodes) and 0 <= j < len(nodes)):
            raise StructuralError(f"plan step ({i}, {j}) references a missing node")
        fused = _fuse_ports(nodes[i], nodes[j])
        nodes = [p for k, p in enumerate(nodes) if k not in (i, j)] + [fused]
        peak_rank = max(peak_rank, len(fused))
        peak_size = max(peak_size, math.prod(e for _, e in fused))
    return peak_rank, peak_size


def plan_contraction(network: TensorNetwork) -> ContractionPlan:
    """Greedy plan: always merge the pair leaving the fewest free ports.

    Ties go to the lexicographically smallest pair of current positions.
    """
    nodes = _port_lists(network)
    steps = []
    while len(nodes) > 1:
        best = None
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                key = (len(_fuse_ports(nodes[i], nodes[j])), i, j)
                if best is None or key < best:
                    best = key
        _, i, j = best
        fused = _fuse_ports(nodes[i], nodes[j])
        nodes = [p for k, p in enumerate(nodes) if k not in (i, j)] + [fused]
        steps.append((i, j))
    return ContractionPlan.from_steps(network, steps)


def random_plan(network: TensorNetwork, rng: np.random.Generator) -> ContractionPlan:
    """A uniformly random valid plan (for testing plan independence)."""
    steps = []
    for count in range(len(network.nodes), 1, -1):
        i, j = rng.choice(count, size=2, replace=False)
        steps.append((int(i), int(j)))
    return ContractionPlan.from_steps(network, steps)


def evaluate(network: TensorNetwork, plan: ContractionPlan | None = None) -> Tensor:
    """Contract the whole network; result axes follow ``open_ports``."""
    if not network.nodes:
        return Tensor.scalar(1.0)
    if plan is None:
        plan = plan_contraction(network)
    net = network
    for i, j in plan.steps:
        if i == j or not (0 <= i < len(net.nodes) and 0 <= j < len(net.nodes)):
            raise StructuralError(f"plan step ({i}, {j}) references a missing node")
        net = contract_pair(net, i, j)
    if len(net.nodes) != 1:
        raise StructuralError(f"plan leaves {len(net.nodes)} nodes uncontracted")
    result, kept = _trace_self_loops(net.nodes[0], [(p[1], q[1]) for p, q in net.edges])
    return result.transpose([kept.index(p[1]) for p in net.open_ports])


def einsum_network(subscripts: str, *operands: Tensor) -> TensorNetwork:
    """Build a network from einsum notation.

    Every index letter must occur exactly twice across the operands (an edge)
    or once in an operand and once in the output (an open port). The output
    is mandatory: ``"ij,jk->ik"``.
    """
    if "->" not in subscripts:
        raise StructuralError("explicit output required in einsum subscripts")
    lhs, out = (s.strip() for s in subscripts.split("->"))
    terms = [s.strip() for s in lhs.split(",")] if lhs else []
    if len(terms) != len(operands):
        raise StructuralError(f"{len(terms)} subscript terms for {len(operands)} operands")
    where: dict[str, list[Port]] = {}
    for n, (term, t) in enumerate(zip(terms, operands)):
        if len(term) != t.rank:
            raise StructuralError(f"term {term!r} does not match rank {t.rank}")
        for k, ch in enumerate(term):
            where.setdefault(ch, []).append((n, k))
    if len(set(out)) != len(out):
        raise StructuralError(f"repeated output index in {out!r}")
    edges, open_ports = [], []
    for ch in out:
        if len(where.get(ch, [])) != 1:
            raise StructuralError(f"output index {ch!r} must occur once among operands")
        open_ports.append(where[ch][0])
    for ch, ports in where.items():
        if ch in out:
            continue
        if len(ports) != 2:
            raise StructuralError(f"index {ch!r} occurs {len(ports)} times")
        edges.append((ports[0], ports[1]))
    return TensorNetwork(operands, edges, open_ports)


def einsum(subscripts: str, *operands: Tensor) -> Tensor:
    """Sparse einsum restricted to pairwise index contractions."""
    return evaluate(einsum_network(subscripts, *operands))
