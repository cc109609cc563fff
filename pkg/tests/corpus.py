"""Candidate Casimir tables at n = 1, valid and perturbed."""

import random

from hopfsep.casimir import (
    EtaAssignment,
    build_casimir_rt,
    build_casimir_rth,
    rth_params,
    table_from_t,
)
from hopfsep.clifford import CliffordAlgebra, CliffordParams
from hopfsep.cowreath import CasimirTable, rt_table
from hopfsep.scalar import QQ_FIELD, SymbolicField


def _field():
    return SymbolicField.for_n(1)


def _perturb_t(table, key, delta):
    t = dict(table.t)
    t[key] = t[key] + delta
    return table_from_t(table.A, t, "perturbed t")


def _perturb_entry(table, h, h2, delta):
    base = table.ba

    def fn(x, y):
        e = base(x, y)
        return e + delta if (x, y) == (h, h2) else e

    return rt_table(table.A, fn, "perturbed entry")


def build_corpus():
    """List of (name, table, expected_valid) where validity is of the rth kind
    (None when only the rt tier is expected to pass)."""
    out = []
    F = _field()
    A_rth = CliffordAlgebra(rth_params(F, 1))
    rth = build_casimir_rth(A_rth)
    out.append(("rth symbolic", rth))
    A_alpha = CliffordAlgebra(CliffordParams.alpha_family(F, 1))
    out.append(("rt alpha, free mu", build_casimir_rt(A_alpha)))
    out.append(("rt alpha, mu=1", build_casimir_rt(A_alpha, mu=1)))
    A_zero = CliffordAlgebra(CliffordParams.zero(F, 1))
    out.append(("rt zero, free eta", build_casimir_rt(A_zero)))
    out.append(("rt zero, eta=3, mu=2", build_casimir_rt(A_zero, EtaAssignment(F, 1, {2: 3}), mu=2)))
    Q = CliffordAlgebra(rth_params(QQ_FIELD, 1, mu=3, gamma={1: 5}))
    out.append(("rth rational", build_casimir_rth(Q, 3)))

    X1, G, one = A_rth.X(1), A_rth.G(), A_rth.one()
    out.append(("t0{1} + X1", _perturb_t(rth, (0, 2), X1)))
    out.append(("t1{} + 1", _perturb_t(rth, (1, 0), one)))
    out.append(("t1{1} doubled", _perturb_t(rth, (1, 2), rth.t[(1, 2)])))
    out.append(("t0{} doubled", _perturb_t(rth, (0, 0), one)))
    out.append(("entry x1|1 + G", _perturb_entry(rth, 2, 0, G)))
    out.append(("entry g|g + 1", _perturb_entry(rth, 1, 1, one)))
    out.append(("entry g.x1|x1 + X1", _perturb_entry(rth, 3, 2, X1)))
    out.append(("entry 1|1 + G", _perturb_entry(rth, 0, 0, G)))

    Ag = CliffordAlgebra(CliffordParams.generic(F, 1))
    out.append(("eps table, generic", rt_table(Ag, lambda h, h2: Ag.one() if h >> 1 == 0 == h2 >> 1 else Ag.zero(), "eps")))
    out.append(("zero table", rt_table(Ag, lambda h, h2: Ag.zero(), "zero")))
    out.append(("formula on NotRT params", build_casimir_rt(Ag, strict=False)))

    rng = random.Random(20)
    basis = A_rth.basis()
    for i in range(9):
        if i % 2:
            key = (rng.randint(0, 1), rng.choice([0, 2]))
            out.append((f"random t-perturbation {i}", _perturb_t(rth, key, A_rth.element(rng.choice(basis), rng.randint(1, 5)))))
        else:
            h, h2 = rng.randrange(4), rng.randrange(4)
            out.append((f"random entry perturbation {i}", _perturb_entry(rth, h, h2, A_rth.element(rng.choice(basis), -rng.randint(1, 5)))))
    return out
