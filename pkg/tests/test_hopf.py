import itertools
import json

import numpy as np
import pytest

from hopftri.errors import ParseError, StructuralError
from hopftri.hopf import (
    H8_BASIS,
    HopfAlgebra,
    algebra_from_json,
    algebra_to_json,
    builtin_algebra,
    curve_tensor,
    group_algebra,
    h8,
    iterated_coproduct,
    klein_four,
    load_algebra,
    trace_cotrace,
    validate_hopf,
    variant_algebra,
)
from hopftri.tensor import Tensor

BUILTINS = ["trivial", "klein4", "h8", *(f"cyclic:{n}" for n in range(1, 9))]
VARIANTS = ["dual", "op", "cop", "dual,op", "cop,dual,cop", "dual,cop,op"]


def dense(H):
    return {k: getattr(H, k).to_dense() for k in ("M", "eta", "Delta", "eps", "S")}


def h8_vec(*terms):
    v = np.zeros(8, dtype=complex)
    for coef, label in terms:
        v[H8_BASIS.index(label)] += coef
    return v


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_validate(name):
    rep = validate_hopf(builtin_algebra(name))
    assert rep.passed, str(rep)
    assert rep["involutory"].residual < 1e-12


@pytest.mark.parametrize("name", ["cyclic:3", "klein4", "h8"])
@pytest.mark.parametrize("kind", VARIANTS)
def test_variants_validate(name, kind):
    assert validate_hopf(variant_algebra(builtin_algebra(name), kind)).passed


def test_group_algebra_brute_force():
    n = 5
    H = dense(group_algebra(n))
    for i, j in itertools.product(range(n), repeat=2):
        expected = np.zeros(n)
        expected[(i + j) % n] = 1
        np.testing.assert_array_equal(H["M"][i, j], expected)
        np.testing.assert_array_equal(H["Delta"][i], np.diag(np.eye(n)[i]))
    np.testing.assert_array_equal(H["S"], np.eye(n)[[(-k) % n for k in range(n)]])
    assert validate_hopf(group_algebra(n)).max_residual == 0


def test_wrong_antipode_fails():
    G = group_algebra(4)
    bad = HopfAlgebra(G.name, G.basis, G.M, G.eta, G.Delta, G.eps, Tensor.identity(4))
    rep = validate_hopf(bad)
    assert not rep.passed
    assert not rep["antipode"].passed


def test_small_groups():
    assert builtin_algebra("cyclic:1").dim == 1
    assert validate_hopf(builtin_algebra("trivial")).passed
    assert builtin_algebra("cyclic:2").S == Tensor.identity(2)
    K = klein_four()
    assert K.dim == 4 and K.S == Tensor.identity(4)


def test_non_group_table_rejected():
    with pytest.raises(StructuralError):
        group_algebra([[0, 1], [0, 1]])
    with pytest.raises(StructuralError):
        group_algebra(0)


def test_shape_mismatch_rejected():
    G = group_algebra(2)
    with pytest.raises(StructuralError):
        HopfAlgebra("bad", G.basis, G.M, G.eta, G.Delta, G.eps, Tensor.identity(3))


class TestH8:
    def test_relations(self):
        H = dense(h8())
        idx = H8_BASIS.index
        z = idx("z")
        expected = h8_vec((0.5, "1"), (0.5, "x"), (0.5, "y"), (-0.5, "xy"))
        np.testing.assert_allclose(H["M"][z, z], expected)
        # z x = y z and z y = x z
        np.testing.assert_allclose(H["M"][z, idx("x")], h8_vec((1, "yz")))
        np.testing.assert_allclose(H["M"][z, idx("y")], h8_vec((1, "xz")))
        np.testing.assert_allclose(H["M"][idx("x"), idx("x")], h8_vec((1, "1")))

    def test_antipode_values(self):
        S = h8().S.to_dense()
        np.testing.assert_allclose(S[H8_BASIS.index("xz")], h8_vec((1, "yz")))
        np.testing.assert_allclose(S[H8_BASIS.index("yz")], h8_vec((1, "xz")))

    def test_validates_tightly(self):
        assert validate_hopf(h8()).max_residual < 1e-12

    def test_neither_commutative_nor_cocommutative(self):
        H = h8()
        assert variant_algebra(H, "op").M != H.M
        assert variant_algebra(H, "cop").Delta != H.Delta

    def test_counit_of_cotrace(self):
        assert trace_cotrace(h8()).eps_of_cotrace == pytest.approx(8)


class TestTraceCotrace:
    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_group_values(self, n):
        f = trace_cotrace(group_algebra(n))
        np.testing.assert_allclose(f.cotrace.to_dense(), np.ones(n))
        np.testing.assert_allclose(f.trace.to_dense(), n * np.eye(n)[0])
        assert f.legs_agree

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_dual_group_counit(self, n):
        assert trace_cotrace(variant_algebra(group_algebra(n), "dual")).eps_of_cotrace == pytest.approx(n)

    @pytest.mark.parametrize("name", BUILTINS)
    def test_integral_equations(self, name):
        H = dense(builtin_algebra(name))
        f = trace_cotrace(builtin_algebra(name))
        T, C = f.trace.to_dense(), f.cotrace.to_dense()
        eta, eps = H["eta"], H["eps"]
        # (id x T) Delta = (T x id) Delta = T(.) 1
        left = np.einsum("kij,j->ki", H["Delta"], T)
        right = np.einsum("kij,i->kj", H["Delta"], T)
        np.testing.assert_allclose(left, np.outer(T, eta), atol=1e-12)
        np.testing.assert_allclose(right, np.outer(T, eta), atol=1e-12)
        # h C = C h = eps(h) C
        np.testing.assert_allclose(np.einsum("hck,c->hk", H["M"], C), np.outer(eps, C), atol=1e-12)
        np.testing.assert_allclose(np.einsum("chk,c->hk", H["M"], C), np.outer(eps, C), atol=1e-12)
        np.testing.assert_allclose(H["S"].T @ C, C, atol=1e-12)
        assert f.legs_agree

    def test_cointegral_normalized(self):
        f = trace_cotrace(h8())
        c = f.cointegral.to_dense()
        assert c @ h8().eps.to_dense() == pytest.approx(1)


class TestCurveTensor:
    def test_low_orders(self):
        G = group_algebra(3)
        assert curve_tensor(G, 0).item() == pytest.approx(3)
        assert curve_tensor(G, 1) == trace_cotrace(G).cotrace
        assert curve_tensor(group_algebra(2), 3).nnz == 2

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            iterated_coproduct(h8(), trace_cotrace(h8()).cotrace, -1)

    @pytest.mark.parametrize("name", ["h8", "klein4", "cyclic:3", "h8:dual", "cyclic:4:dual"])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_cyclic_symmetry(self, name, m):
        t = curve_tensor(builtin_algebra(name), m)
        assert t.transpose([*range(1, m), 0]).distance(t) < 1e-12

    def test_matches_dense_iteration(self):
        H = h8()
        D = H.Delta.to_dense()
        c = trace_cotrace(H).cotrace.to_dense()
        ref = np.einsum("x,xab->ab", c, D)
        ref = np.einsum("xc,xab->cab", ref, D).transpose(1, 2, 0)
        # Delta applied to the last leg agrees with coassociativity on the first
        np.testing.assert_allclose(curve_tensor(H, 3).to_dense(), ref, atol=1e-12)


class TestVariants:
    @pytest.mark.parametrize("name", ["h8", "cyclic:5", "klein4"])
    def test_double_dual(self, name):
        H = builtin_algebra(name)
        back = variant_algebra(H, "dual,dual")
        assert (back.M, back.eta, back.Delta, back.eps, back.S) == (H.M, H.eta, H.Delta, H.eps, H.S)

    def test_group_is_commutative(self):
        G = group_algebra(6)
        assert variant_algebra(G, "op").M == G.M

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            variant_algebra(h8(), "flip")


class TestBuiltinsAndJson:
    def test_unknown_builtins(self):
        for bad in ("cyclic", "cyclic:x", "nope", "h8:flip"):
            with pytest.raises(ParseError):
                builtin_algebra(bad)

    @pytest.mark.parametrize("name", ["h8", "cyclic:4:dual", "klein4"])
    def test_json_round_trip(self, name, tmp_path):
        H = builtin_algebra(name)
        path = tmp_path / "alg.json"
        path.write_text(json.dumps(algebra_to_json(H)))
        back = load_algebra(str(path))
        assert back.fingerprint == H.fingerprint
        assert load_algebra(algebra_to_json(H)).fingerprint == H.fingerprint

    def test_json_errors_carry_location(self, tmp_path):
        with pytest.raises(ParseError, match="dim"):
            algebra_from_json({"basis": []})
        with pytest.raises(ParseError, match=r"mul\[0\]"):
            algebra_from_json({"dim": 2, "mul": [[0, 0, 5, 1.0, 0.0]]})
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        with pytest.raises(ParseError, match="broken.json:1"):
            load_algebra(str(path))
        with pytest.raises(ParseError):
            load_algebra(str(tmp_path / "missing.json"))
