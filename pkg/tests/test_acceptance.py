"""End-to-end acceptance checks; each test prints one verdict line in the summary."""

import itertools

from acceptance_log import criterion
from corpus import build_corpus

from hopfsep.casimir import (
    EtaAssignment,
    FamilyTag,
    build_casimir_rt,
    build_casimir_rth,
    classify,
    rth_params,
)
from hopfsep.cli import RunConfig, lemma_sweep, verify
from hopfsep.clifford import (
    CliffordAlgebra,
    CliffordParams,
    antiderivative,
    canonical_tuple,
    d_composite,
)
from hopfsep.cowreath import (
    SEPARABLE_REDUCED,
    SEPARABLE_RT,
    Cowreath,
    check_casimir_general,
    check_casimir_reduced,
    check_casimir_rt,
    check_clifford_conditions,
    check_comodule_axioms,
    check_cowreath_axioms,
    check_en_conditions,
    check_hopf_axioms,
)
from hopfsep.enhopf import EnAlgebra
from hopfsep.scalar import QQ_FIELD, SymbolicField, alpha, beta, eta, gamma, random_assignment, standard_names, substitute
from hopfsep.setcombin import elements_of, submasks

from oracles import composed_derivation

CL_RT = ["B0cl", "B1cl", "B2cl", "B3cl", "B4cl", "B5cl"]
CL_RTH = CL_RT + ["B6cl"]


def _all_subsets(n):
    return list(submasks(((1 << n) - 1) << 1))


def test_criterion_1_sweedler_case():
    with criterion(1, "Sweedler case n=1: rt suite and t0,{1} = eta G + X", 5):
        F = SymbolicField.for_n(1)
        A = CliffordAlgebra(CliffordParams.alpha_family(F, 1))
        al, be, ga = A.params.alpha, A.params.beta[1], A.params.gamma[1]
        assert be == ga * ga / (4 * al)
        tb = build_casimir_rt(A)
        rep = check_clifford_conditions(A, tb.t, tb)
        assert rep.passed, rep.summary()
        assert check_en_conditions(A, canonical_tuple(A), tb.t, tb).passed
        cw = Cowreath(A)
        assert check_casimir_rt(cw, tb).passed_ids(SEPARABLE_RT)
        assert check_casimir_reduced(cw, tb).passed_ids(SEPARABLE_REDUCED)
        eta1 = -ga / (2 * al)
        assert tb.t[(0, 2)] == A.G().scale(eta1) + A.X(1)
        assert 2 * al * eta1 + ga == 0
        assert 2 * be + eta1 * ga == 0

        # with eta_{1} and beta left free, the only defects are exactly those two constraints
        G = CliffordAlgebra(CliffordParams.generic(F, 1))
        e = F.param(eta([1]))
        free = build_casimir_rt(G, EtaAssignment(F, 1, {2: e}), strict=False)
        rep = check_clifford_conditions(G, free.t, free)
        defects = set()
        for cid in rep.failed():
            for w in rep.get(cid).witnesses:
                for term in w["difference"]:
                    defects.add(F.parse(term["coeff"]))
        a, b, g = F.param(alpha()), F.param(beta(1)), F.param(gamma(1))
        assert defects == {2 * a * e + g, 2 * b + e * g}
        solved = {eta([1]): -g / (2 * a), beta(1): g * g / (4 * a)}
        assert all(substitute(d, solved) == 0 for d in defects)


def test_criterion_2_rt_classification():
    with criterion(2, "rt classification n=1..3 symbolic: ZeroFamily (random eta) and AlphaFamily pass B0cl-B5cl", 180):
        for n in (1, 2, 3):
            F = SymbolicField.for_n(n)
            zero = CliffordAlgebra(CliffordParams.zero(F, n))
            vals = random_assignment(standard_names(n), seed=n)
            rand_eta = EtaAssignment(F, n, {m: vals[eta(m)] for m in _all_subsets(n) if m})
            for e in (rand_eta, EtaAssignment.symbolic(F, n)):
                tb = build_casimir_rt(zero, e, mu=F.param("mu"))
                assert tb.family is FamilyTag.ZERO
                rep = check_clifford_conditions(zero, tb.t, tb)
                assert [c.id for c in rep.conditions] == CL_RT
                assert rep.passed, rep.summary()
            alg = CliffordAlgebra(CliffordParams.alpha_family(F, n))
            tb = build_casimir_rt(alg)
            assert tb.family is FamilyTag.ALPHA
            rep = check_clifford_conditions(alg, tb.t, tb)
            assert rep.passed, rep.summary()
            assert check_en_conditions(alg, canonical_tuple(alg), tb.t, tb).passed


def test_criterion_3_rth_classification():
    with criterion(3, "rth classification: symbolic n<=3, probabilistic-pass n=4,5 over 3 seeds", 600):
        for n in (1, 2, 3):
            F = SymbolicField.for_n(n)
            A = CliffordAlgebra(rth_params(F, n))
            tb = build_casimir_rth(A)
            rep = check_clifford_conditions(A, tb.t, tb, rth=True)
            assert [c.id for c in rep.conditions][:7] == CL_RTH
            assert rep.passed, rep.summary()
            assert check_en_conditions(A, canonical_tuple(A), tb.t, tb, rth=True).passed
        for n in (4, 5):
            cfg = RunConfig(n=n, family="alpha", mode="rth", suites=["casimir-rth"], timestamp=False).validate()
            assert cfg.strategy == "random" and len(cfg.seeds) >= 3
            report = verify(cfg)
            assert report["status"] == "probabilistic-pass", report["status"]
            ids = {c["id"] for r in report["suites"][0]["reports"] for c in r["conditions"]}
            assert set(CL_RTH) <= ids


def test_criterion_4_negative_controls():
    with criterion(4, "negative controls: perturbed beta, NotRT, ZeroFamily rth", 60):
        F = SymbolicField.for_n(2)
        p = CliffordParams.alpha_family(F, 2)
        A = CliffordAlgebra(p.replace(beta(1), p.beta[1] + 1))
        tb = build_casimir_rt(A, strict=False)
        rep = check_clifford_conditions(A, tb.t, tb)
        assert rep.failed() == ["B5cl"]
        w = rep.get("B5cl").witnesses[0]
        assert w["instance"]["Q"] == "{1}" and w["instance"]["i"] == 1
        assert w["difference"]

        F1 = SymbolicField.for_n(1)
        assert classify(CliffordParams(F1, 1, 0, {}, {1: 1}, {})) is FamilyTag.NOT_RT

        zero = CliffordAlgebra(CliffordParams.zero(F1, 1))
        try:
            build_casimir_rth(zero)
        except ValueError as exc:
            assert "zero family" in str(exc)
        else:
            raise AssertionError("ZeroFamily accepted for rth")
        try:
            RunConfig(n=1, family="zero", mode="rth").validate()
        except ValueError:
            pass
        else:
            raise AssertionError("config accepted ZeroFamily + rth")


def test_criterion_5_layer_consistency():
    with criterion(5, "layer consistency on >= 20 tables at n=1", 120):
        corpus = build_corpus()
        assert len(corpus) >= 20
        n_rt = n_rth = 0
        for name, tb in corpus:
            cw = Cowreath(tb.A)
            rt = check_casimir_rt(cw, tb)
            red = check_casimir_reduced(cw, tb)
            sep_rt = rt.passed_ids(SEPARABLE_RT)
            assert sep_rt == red.passed_ids(SEPARABLE_REDUCED), name
            assert rt.passed == red.passed, name
            if sep_rt:
                gen = check_casimir_general(cw, tb)
                assert gen.passed_ids(["B1", "B2", "B3"]), (name, gen.failed())
                n_rt += 1
                if rt.passed:
                    assert gen.passed, (name, gen.failed())
                    n_rth += 1
        # both tiers are exercised, and so are failing tables
        assert n_rth >= 2 and n_rt > n_rth and n_rt < len(corpus)


def test_criterion_6_combinatorics():
    with criterion(6, "matching sign sums and counts on {0..9}, position identities on {1..8}", 60):
        rep = lemma_sweep(8)
        assert rep.passed, rep.summary()
        for cid in ("s-count-drop-one", "s-count-singleton-sum", "s-count-complement",
                    "s-count-disjoint-sum", "s-count-remove-subset", "s-count-append-max",
                    "matching-count", "matching-sign-sum"):
            c = rep.get(cid)
            assert c.failures == 0 and c.instances > 0
        # every even subset of {0..9}
        assert rep.get("matching-count").instances == 2 ** 9
        # every chain F' in F in P in {1..8}
        assert rep.get("s-count-remove-subset").instances == 2 * 4 ** 8


def test_criterion_7_structure_axioms():
    with criterion(7, "Hopf axioms, Clifford associativity, comodule axioms for n<=3", 120):
        for n in (1, 2, 3):
            assert check_hopf_axioms(EnAlgebra(n, QQ_FIELD)).passed
            assert check_hopf_axioms(EnAlgebra(n, SymbolicField.for_n(n))).passed
            A = CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(n), n))
            B = A.basis()
            for r, s, t in itertools.product(B, repeat=3):
                x, y, z = A.element(r), A.element(s), A.element(t)
                assert (x * y) * z == x * (y * z), (r, s, t)
            rep = check_comodule_axioms(A)
            assert rep.passed, rep.summary()
            assert rep.get("coaction-implementations-agree").instances == A.dim


def test_criterion_8_cowreath_axioms():
    with criterion(8, "cowreath axioms for n<=2 symbolic", 120):
        for n in (1, 2):
            A = CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(n), n))
            rep = check_cowreath_axioms(Cowreath(A))
            assert len(rep.conditions) == 7
            assert rep.passed, rep.summary()


def test_criterion_9_derivation_calculus():
    with criterion(9, "closed-form d_P, antiderivatives and kernels for n<=4", 60):
        for n in (1, 2, 3, 4):
            A = CliffordAlgebra(CliffordParams.generic(SymbolicField.for_n(n, with_eta=False), n))
            one = A.field.one
            for pm in _all_subsets(n):
                for r in A.basis():
                    e = A.element(r, one * 3)
                    assert d_composite(A, pm, e) == composed_derivation(A, elements_of(pm), e)
                    res = antiderivative(A, e, pm)
                    if r & pm:
                        assert res is None
                        continue
                    part, kernel = res
                    assert d_composite(A, pm, part) == e
                    km = {q.mask for q in kernel}
                    assert km == {q for q in A.basis() if q & pm != pm}
                    assert all(not d_composite(A, pm, A.element(q)) for q in km)
                    assert all(d_composite(A, pm, A.element(q)) for q in A.basis() if q not in km)
