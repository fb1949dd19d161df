import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopftri.errors import StructuralError
from hopftri.tensor import (
    ContractionPlan,
    Tensor,
    TensorNetwork,
    einsum,
    einsum_network,
    evaluate,
    outer,
    plan_contraction,
    random_plan,
    tensordot,
    trace_axes,
)


def rand_tensor(rng, shape, density=0.5):
    vals = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    vals[rng.random(shape) > density] = 0
    return vals


class TestTensor:
    def test_canonical_form_sums_duplicates_and_drops_zeros(self):
        t = Tensor((2, 2), [[0, 1], [0, 1], [1, 1], [1, 0]], [1, 2, 1e-16, -3])
        assert t.entries == {(0, 1): 3, (1, 0): -3}
        assert t.nnz == 2

    def test_dense_round_trip(self):
        a = rand_tensor(np.random.default_rng(0), (3, 4, 2))
        np.testing.assert_array_equal(Tensor.from_dense(a).to_dense(), a)

    def test_scalar(self):
        s = Tensor.scalar(2 - 1j)
        assert s.rank == 0 and s.item() == 2 - 1j
        assert Tensor.from_dense(np.array(0j)).item() == 0

    def test_equality_and_immutability(self):
        a = Tensor.identity(3)
        assert a == Tensor.from_dense(np.eye(3))
        assert a != Tensor.identity(2)
        with pytest.raises(AttributeError):
            a.shape = (1,)

    def test_bad_input(self):
        with pytest.raises(StructuralError):
            Tensor((2, 0))
        with pytest.raises(StructuralError):
            Tensor((2,), [[2]], [1])
        with pytest.raises(StructuralError):
            Tensor((2,), [[0], [1]], [1])

    def test_transpose_reshape_arithmetic(self):
        a = rand_tensor(np.random.default_rng(1), (2, 3, 4))
        t = Tensor.from_dense(a)
        np.testing.assert_allclose(t.transpose([2, 0, 1]).to_dense(), a.transpose(2, 0, 1))
        np.testing.assert_allclose(t.reshape((6, 4)).to_dense(), a.reshape(6, 4))
        np.testing.assert_allclose((t + t.scaled(2) - t).to_dense(), 2 * a)
        assert t.distance(t.scaled(1 + 1e-13)) < 1e-11
        assert (t - t).nnz == 0

    def test_density(self):
        assert Tensor.identity(4).density == pytest.approx(0.25)


class TestContraction:
    @pytest.mark.parametrize("density", [0.05, 0.9])
    def test_tensordot_matches_numpy(self, density):
        rng = np.random.default_rng(2)
        a, b = rand_tensor(rng, (3, 4, 5), density), rand_tensor(rng, (5, 2, 4), density)
        got = tensordot(Tensor.from_dense(a), Tensor.from_dense(b), [1, 2], [2, 0]).to_dense()
        np.testing.assert_allclose(got, np.tensordot(a, b, axes=([1, 2], [2, 0])), atol=1e-12)

    def test_outer_and_trace(self):
        rng = np.random.default_rng(3)
        a, b = rand_tensor(rng, (3,)), rand_tensor(rng, (2, 3))
        o = outer(Tensor.from_dense(a), Tensor.from_dense(b))
        np.testing.assert_allclose(o.to_dense(), np.multiply.outer(a, b))
        np.testing.assert_allclose(trace_axes(o, 0, 2).to_dense(), np.einsum("aba->b", o.to_dense()))

    @pytest.mark.parametrize(
        "subscripts,shapes",
        [
            ("ij,jk->ik", [(3, 4), (4, 2)]),
            ("ijk,kl,lj->i", [(2, 3, 4), (4, 5), (5, 3)]),
            ("ab,bc,ca->", [(3, 3), (3, 3), (3, 3)]),
            ("iij->j", [(3, 3, 2)]),
            ("ab,cd->dacb", [(2, 3), (4, 5)]),
        ],
    )
    def test_einsum_matches_numpy(self, subscripts, shapes):
        rng = np.random.default_rng(4)
        arrays = [rand_tensor(rng, s) for s in shapes]
        got = einsum(subscripts, *map(Tensor.from_dense, arrays))
        np.testing.assert_allclose(got.to_dense(), np.einsum(subscripts, *arrays), atol=1e-12)

    def test_einsum_rejects_bad_subscripts(self):
        a = Tensor.identity(2)
        with pytest.raises(StructuralError):
            einsum("ij,jk", a, a)
        with pytest.raises(StructuralError):
            einsum("ij,jj->i", a, a)
        with pytest.raises(StructuralError):
            einsum("ijk->i", a)

    def test_network_wiring_errors(self):
        a = Tensor.identity(2)
        with pytest.raises(StructuralError):
            TensorNetwork([a, a], [((0, 0), (1, 0)), ((0, 0), (1, 1))])
        with pytest.raises(StructuralError):
            TensorNetwork([a, Tensor.identity(3)], [((0, 0), (1, 0))])
        with pytest.raises(StructuralError):
            TensorNetwork([a], [((0, 2), (0, 1))])

    def test_empty_network_is_one(self):
        assert evaluate(TensorNetwork([])).item() == 1

    def test_disconnected_network_multiplies(self):
        v = Tensor.from_dense(np.array([1.0, 2.0]))
        net = TensorNetwork([v, v, Tensor.identity(2).scaled(3)], [((0, 0), (2, 0)), ((1, 0), (2, 1))])
        assert evaluate(net).item() == pytest.approx(15)

    def test_greedy_plan_statistics(self):
        a = Tensor.from_dense(np.ones((2, 3)))
        b = Tensor.from_dense(np.ones((3, 4)))
        net = einsum_network("ij,jk->ik", a, b)
        plan = plan_contraction(net)
        assert plan.steps == ((0, 1),)
        assert plan.peak_rank == 2 and plan.peak_size == 12

    def test_bad_plan_rejected(self):
        net = einsum_network("ij,jk->ik", Tensor.identity(2), Tensor.identity(2))
        with pytest.raises(StructuralError):
            ContractionPlan.from_steps(net, [(0, 0)])
        with pytest.raises(StructuralError):
            evaluate(net, ContractionPlan(()))


@st.composite
def random_networks(draw):
    """Closed networks with 2-6 nodes, extents 1-3, random wiring including self-loops."""
    n_nodes = draw(st.integers(2, 6))
    n_edges = draw(st.integers(1, 7))
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    ports_of = [[] for _ in range(n_nodes)]
    extents = [[] for _ in range(n_nodes)]
    edges = []
    for _ in range(n_edges):
        a, b = rng.integers(n_nodes, size=2)
        ext = int(rng.integers(1, 4))
        pa = (a, len(ports_of[a]))
        ports_of[a].append(pa)
        extents[a].append(ext)
        pb = (b, len(ports_of[b]))
        ports_of[b].append(pb)
        extents[b].append(ext)
        edges.append((pa, pb))
    nodes = [Tensor.from_dense(rand_tensor(rng, tuple(e), 0.6)) if e else Tensor.scalar(rng.normal())
             for e in extents]
    return TensorNetwork(nodes, edges), seed


def dense_reference(net):
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    label = {}
    for p, q in net.edges:
        label[p] = label[q] = next(letters)
    terms = ["".join(label[(n, k)] for k in range(t.rank)) for n, t in enumerate(net.nodes)]
    return np.einsum(",".join(terms) + "->", *[t.to_dense() for t in net.nodes])


@settings(max_examples=100, deadline=None)
@given(random_networks())
def test_plan_independence(case):
    net, seed = case
    rng = np.random.default_rng(seed + 1)
    ref = dense_reference(net)
    values = [evaluate(net).item()] + [evaluate(net, random_plan(net, rng)).item() for _ in range(3)]
    for v in values:
        assert abs(v - ref) <= 1e-9 * max(1.0, abs(ref))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.integers(0, 2**31 - 1))
def test_transpose_inverse(shape, seed):
    t = Tensor.from_dense(rand_tensor(np.random.default_rng(seed), tuple(shape)))
    perm = np.random.default_rng(seed).permutation(len(shape))
    assert t.transpose(perm).transpose(np.argsort(perm)) == t
