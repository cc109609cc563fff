import pytest
from hypothesis import given, strategies as st

from hopfsep.clifford import CliffordAlgebra, CliffordParams, sigma_map
from hopfsep.enhopf import EnAlgebra
from hopfsep.linalg import (
    Element,
    LinearMap,
    Opposite,
    Tensor,
    apply,
    compose,
    identity,
    map_tensor,
    split_key,
    tensor,
    zero_map,
)
from hopfsep.scalar import QQ_FIELD, SymbolicField

A = CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(1), 1))
H = EnAlgebra(1, A.field)


def test_tensor_examples():
    t = tensor(A.one(), H.one())
    assert t.coeffs == {(0, 0): A.field.one}
    t = tensor(A.G(), H.g())
    assert len(t) == 1 and t.coeff((1, 1)) == 1
    AA = CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(2), 2))
    HH = EnAlgebra(2, AA.field)
    assert len(tensor(AA.X(1) + AA.X(2), HH.g())) == 2


def test_tensor_registry_flattening():
    T = Tensor(Tensor(A, H), H)
    assert T == Tensor(A, H, H)
    assert T.dim == A.dim * H.dim * H.dim
    assert T.label((3, 1, 2)) == "G.X1 ⊗ g ⊗ x1"
    assert T.parse_label("G.X1 ⊗ g ⊗ x1") == (3, 1, 2)
    assert split_key((3, 1, 2), A) == (3, (1, 2))


def test_tensor_product_is_componentwise():
    T = Tensor(A, H)
    x = tensor(A.X(1), H.g())
    y = tensor(A.G(), H.x(1))
    assert x * y == tensor(A.X(1) * A.G(), H.g() * H.x(1))


def test_opposite_reverses():
    op = Opposite(H)
    x = op.element(1)
    y = op.element(2)
    assert (x * y).coeffs == (H.x(1) * H.g()).coeffs


def test_maps_examples():
    e = A.X(1).scale(A.field.param("gamma_1")) + A.G()
    assert identity(A)(e) == e
    assert not zero_map(A, A)(e)
    s = sigma_map(A)
    f = map_tensor(s, identity(H))
    for a in A.basis():
        for h in H.basis():
            assert f(tensor(A.element(a), H.element(h))) == tensor(s(A.element(a)), H.element(h))


def test_registry_mismatch():
    with pytest.raises(ValueError):
        A.one() + H.one()
    with pytest.raises(ValueError):
        sigma_map(A)(H.one())
    with pytest.raises(ValueError):
        compose(sigma_map(A), identity(H))


def test_compose_associates():
    s = sigma_map(A)
    d = LinearMap(A, A, lambda k: A.element(k) * A.X(1), "right X1")
    e = A.G() + A.X(1) * 3
    assert compose(compose(s, d), s)(e) == compose(s, compose(d, s))(e)
    assert apply(compose(s, d), e) == s(d(e))


def test_json_and_terms():
    e = A.X(1) * 2 - A.G()
    assert e.to_json() == [{"basis": "G", "coeff": "-1"}, {"basis": "X1", "coeff": "2"}]
    assert not Element(A, {1: A.field.zero})


RA = CliffordAlgebra(CliffordParams(QQ_FIELD, 2, 3, {1: 2, 2: -1}, {1: 5, 2: 1}, {(1, 2): 7}))
coeffs = st.integers(-5, 5)
elements = st.dictionaries(st.sampled_from(RA.basis()), coeffs, max_size=4).map(lambda d: Element(RA, {k: QQ_FIELD.convert(v) for k, v in d.items()}))


@given(elements, elements, coeffs)
def test_linearity(x, y, c):
    f = LinearMap(RA, RA, lambda k: RA.element(k) * RA.X(1) - RA.G() * RA.element(k), "ad")
    assert f(x + y.scale(QQ_FIELD.convert(c))) == f(x) + f(y).scale(QQ_FIELD.convert(c))
