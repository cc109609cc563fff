import random

import pytest

from hopfsep.casimir import build_casimir_rth, rth_params
from hopfsep.clifford import CliffordAlgebra, CliffordParams, canonical_coaction
from hopfsep.cowreath import (
    Cowreath,
    apply_slice,
    mul_slice,
    VerificationReport,
    check_casimir_general,
    check_casimir_reduced,
    check_casimir_rt,
    check_cowreath_axioms,
    corrupt_psi,
    delta_H,
    eps_H,
    merge_seed_reports,
    psi,
    rt_table,
)
from hopfsep.linalg import Element, LinearMap, Tensor, tensor
from hopfsep.scalar import QQ_FIELD, SymbolicField

from corpus import build_corpus


def generic(n):
    return CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(n), n))


CW1 = Cowreath(generic(1))


def test_psi_examples():
    cw = CW1
    A, H = cw.A, cw.H
    unit = tensor(A.one(), cw.Hop.one())
    assert psi(cw, H.one(), unit) == Element(cw.ApH, {(0, 0, 0): A.field.one})
    out = psi(cw, H.g(), Element(cw.Ap, {(1, 0): A.field.one}))
    assert out == Element(cw.ApH, {(1, 0, 0): A.field.one})


def test_delta_and_eps_examples():
    cw = CW1
    H = cw.H
    assert delta_H(cw, H.g()) == Element(cw.ApHH, {(0, 0, 1, 1): cw.field.one})
    assert not eps_H(cw, H.x(1))
    assert eps_H(cw, H.g()) == cw.Ap.one()


def test_odot_unit():
    cw = CW1
    rng = random.Random(3)
    unit = cw.unit_map
    for _ in range(5):
        imgs = {h: Element(cw.ApH, {(rng.randrange(4), rng.randrange(4), rng.randrange(4)): cw.field.one * rng.randint(1, 4)}) for h in cw.H.basis()}
        f = LinearMap(cw.H, cw.ApH, lambda h: imgs[h], "f")
        for h in cw.H.basis():
            assert cw.odot(unit, f).on_basis(h) == f.on_basis(h)
            assert cw.odot(f, unit).on_basis(h) == f.on_basis(h)


@pytest.mark.parametrize("n", [1, 2])
def test_cowreath_axioms(n):
    rep = check_cowreath_axioms(CW1 if n == 1 else Cowreath(generic(2)))
    assert rep.passed, rep.summary()
    assert len(rep.conditions) == 7


def test_corrupted_psi_is_caught():
    cw = Cowreath(generic(1), psi_override=corrupt_psi((1, 1, 0)))
    rep = check_cowreath_axioms(cw)
    bad = rep.get("transfer-multiplicative")
    assert not bad.passed and bad.witnesses
    assert bad.witnesses[0]["difference"]


def test_general_conditions_examples():
    F = SymbolicField.for_n(1)
    A = CliffordAlgebra(rth_params(F, 1))
    rep = check_casimir_general(Cowreath(A), build_casimir_rth(A))
    assert rep.passed, rep.summary()

    Ag = generic(1)
    eps_table = rt_table(Ag, lambda h, h2: Ag.one() if h >> 1 == 0 == h2 >> 1 else Ag.zero())
    rep = check_casimir_general(Cowreath(Ag), eps_table)
    assert rep.get("B3").passed
    assert not rep.get("B2").passed

    zero = rt_table(Ag, lambda h, h2: Ag.zero())
    assert not check_casimir_general(Cowreath(Ag), zero).get("B3").passed


def test_rt_and_reduced_examples():
    F = SymbolicField.for_n(1)
    A = CliffordAlgebra(rth_params(F, 1))
    cw = Cowreath(A)
    table = build_casimir_rth(A)
    assert check_casimir_rt(cw, table).passed
    assert check_casimir_reduced(cw, table).passed
    two = rt_table(A, lambda h, h2: table.ba(h, h2).scale(A.field.convert(2)) if (h, h2) == (0, 0) else table.ba(h, h2))
    assert not check_casimir_rt(cw, two).get("B3S").passed
    assert not check_casimir_reduced(cw, two).get("B3S1").passed


def test_layers_agree_on_corpus():
    corpus = build_corpus()
    assert len(corpus) >= 20
    for name, table in corpus:
        cw = Cowreath(table.A)
        rt = check_casimir_rt(cw, table)
        red = check_casimir_reduced(cw, table)
        assert rt.passed == red.passed, name
        assert rt.passed_ids(["B1S", "B2S", "B3S"]) == red.passed_ids(["B1S1", "B2S1", "B3S1"]), name


def test_report_witness_cap_and_merge():
    rep = VerificationReport("t")
    with rep.condition("c", "i") as c:
        for i in range(9):
            c.check({"i": i}, 1)
    cond = rep.get("c")
    assert cond.failures == 9 and len(cond.witnesses) == 5
    assert cond.witnesses[0]["instance"] == {"i": 0}
    merged = merge_seed_reports("m", [(1, rep), (2, rep)])
    assert merged.status == "fail"
    ok = VerificationReport("ok")
    with ok.condition("c", "i") as c:
        c.check({"i": 0}, 0)
    assert merge_seed_reports("m", [(1, ok), (2, ok), (3, ok)]).status == "probabilistic-pass"
    assert ok.to_json(timings=False)["conditions"][0].keys() >= {"id", "status", "instances"}


# quantifier soundness: conditions checked on bases must agree with the
# same identities evaluated at random non-basis arguments

def _rand_element(reg, rng, field):
    return Element(reg, {k: field.convert(rng.randint(-3, 3)) for k in rng.sample(reg.basis(), 3)})


def _ba_linear(table, x, y):
    A = table.A
    out = A.zero()
    for h, c in x.coeffs.items():
        for h2, d in y.coeffs.items():
            out = out + table.ba(h, h2).scale(c * d)
    return out


def _b4s_at(table, x, y):
    H = table.H
    one = H.one()
    return _ba_linear(table, x, one) * _ba_linear(table, one, y) == _ba_linear(table, x, y)


def _transfer_at(cw, h, a, b):
    lhs = cw.psi(tensor(h, a * b))
    left = cw.psi(tensor(h, a))
    ApHAp = Tensor(cw.Ap, cw.H, cw.Ap)
    e = Element(ApHAp, {k + kb: v * w for k, v in left.coeffs.items() for kb, w in b.coeffs.items()})
    e = apply_slice(e, 2, cw.psi, Tensor(cw.Ap, cw.Ap, cw.H))
    return lhs == mul_slice(e, 0, cw.Ap, cw.ApH)


def test_quantifier_soundness_spot_checks():
    rng = random.Random(11)
    for name, table in build_corpus()[:14]:
        cw = Cowreath(table.A)
        basis_verdict = check_casimir_rt(cw, table).get("B4S").passed
        F = table.A.field
        spots = [_b4s_at(table, _rand_element(cw.H, rng, F), _rand_element(cw.H, rng, F)) for _ in range(4)]
        if basis_verdict:
            assert all(spots), name
        else:
            assert not all(spots), name
    good = Cowreath(CliffordAlgebra(CliffordParams(QQ_FIELD, 1, 2, {1: 3}, {1: -1}, {})))
    bad = Cowreath(good.A, psi_override=corrupt_psi((1, 1, 0)))
    F = QQ_FIELD
    for cw, expect in ((good, True), (bad, False)):
        results = []
        for _ in range(4):
            h = _rand_element(cw.H, rng, F)
            a = _rand_element(cw.Ap, rng, F) + Element(cw.Ap, {(1, 0): F.one})
            b = _rand_element(cw.Ap, rng, F) + Element(cw.Ap, {(1, 0): F.one})
            results.append(_transfer_at(cw, h + cw.H.g(), a, b))
        assert all(results) if expect else not all(results)
