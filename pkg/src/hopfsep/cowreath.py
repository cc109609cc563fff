"""Cowreath structure on (A (x) E(n)^op, E(n), psi) and the condition checkers.

Everything that ``verifies`` something returns a :class:`VerificationReport`:
one :class:`Condition` per identity, each counting instantiations and
failures and keeping a few witnesses.

Condition ids follow the usual names of the separability conditions:
B1..B4 for the general Casimir morphism, B1S..B4S for right-trivial ones,
B1S1..B4S1 for their reduced form, B0E..B6S for a generic E(n)-tuple and
B0cl..B6cl for the Clifford specialization.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager

from .clifford import (
    CliffordAlgebra,
    ComoduleTuple,
    canonical_coaction,
    canonical_tuple,
    coaction_by_generators,
    d_composite,
    main_involution,
)
from .enhopf import EnAlgebra
from .linalg import Element, LinearMap, Registry, Tensor, tensor_key
from .setcombin import SubsetIndex, elements_of, parity_sign, s_count_mask, submasks

MAX_WITNESSES = 5


# ---------------------------------------------------------------- reports


def _fmt_value(v):
    if isinstance(v, Element):
        return v.to_json()
    if isinstance(v, int):
        return str(v)
    try:
        return v.field.fmt(v)
    except AttributeError:
        from .scalar import QQ_FIELD

        return QQ_FIELD.fmt(v)


class Condition:
    """Outcome of one identity over all of its instantiations."""

    def __init__(self, cid: str, quantifier: str):
        self.id = cid
        self.quantifier = quantifier
        self.instances = 0
        self.failures = 0
        self.witnesses: list[dict] = []
        self.seconds = 0.0
        self.probabilistic = False
        self.seeds: list[int] = []
        self.note = ""

    def check(self, instance: dict, lhs, rhs=None) -> bool:
        diff = lhs if rhs is None else lhs - rhs
        self.instances += 1
        if not diff:
            return True
        self.fail(instance, diff)
        return False

    def fail(self, instance: dict, diff=None):
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"instance": instance, "difference": _fmt_value(diff) if diff is not None else None})

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        return "probabilistic-pass" if self.probabilistic else "pass"

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "id": self.id,
            "quantifier": self.quantifier,
            "status": self.status,
            "instances": self.instances,
            "failures": self.failures,
            "witnesses": self.witnesses,
        }
        if self.seeds:
            out["seeds"] = self.seeds
        if self.note:
            out["note"] = self.note
        if timings:
            out["seconds"] = round(self.seconds, 4)
        return out


class VerificationReport:
    def __init__(self, title: str = ""):
        self.title = title
        self.conditions: list[Condition] = []
        self.seeds: list[int] = []

    @contextmanager
    def condition(self, cid: str, quantifier: str):
        c = Condition(cid, quantifier)
        self.conditions.append(c)
        t0 = time.perf_counter()
        try:
            yield c
        finally:
            c.seconds += time.perf_counter() - t0

    def get(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def __contains__(self, cid: str) -> bool:
        return any(c.id == cid for c in self.conditions)

    def passed_ids(self, ids) -> bool:
        return all(self.get(i).passed for i in ids)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def status(self) -> str:
        if not self.passed:
            return "fail"
        if any(c.probabilistic for c in self.conditions):
            return "probabilistic-pass"
        return "pass"

    def failed(self) -> list[str]:
        return [c.id for c in self.conditions if not c.passed]

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.conditions.extend(other.conditions)
        return self

    def to_json(self, timings: bool = True) -> dict:
        out = {"title": self.title, "status": self.status}
        if self.seeds:
            out["seeds"] = self.seeds
        out["conditions"] = [c.to_json(timings) for c in self.conditions]
        return out

    def summary(self) -> str:
        lines = [f"{self.title}: {self.status}"]
        for c in self.conditions:
            lines.append(f"  {c.id:<24} {c.status:<18} {c.instances:>7} instances, {c.failures} failures")
        return "\n".join(lines)


def merge_seed_reports(title: str, reports: list[tuple[int, VerificationReport]]) -> VerificationReport:
    """Combine per-seed runs of the same checker into one probabilistic report."""
    out = VerificationReport(title)
    out.seeds = [s for s, _ in reports]
    by_id: dict[str, Condition] = {}
    for seed, rep in reports:
        for c in rep.conditions:
            m = by_id.get(c.id)
            if m is None:
                m = Condition(c.id, c.quantifier)
                m.probabilistic = True
                m.note = c.note
                by_id[c.id] = m
                out.conditions.append(m)
            m.instances += c.instances
            m.failures += c.failures
            m.seconds += c.seconds
            m.seeds.append(seed)
            for w in c.witnesses:
                if len(m.witnesses) < MAX_WITNESSES:
                    m.witnesses.append({"seed": seed, **w})
    return out


def subset_str(mask: int) -> str:
    return str(SubsetIndex.from_mask(mask))


# ---------------------------------------------------------------- tensor plumbing


def apply_slice(e: Element, start: int, f: LinearMap, reg: Registry) -> Element:
    """Apply ``f`` to the tensor factors starting at ``start``."""
    width = len(f.domain.factors)
    cod = f.codomain
    out: dict = {}
    for key, c in e.coeffs.items():
        sub = key[start:start + width] if width > 1 else key[start]
        head, tail = key[:start], key[start + width:]
        for k2, v in f.on_basis(sub).coeffs.items():
            nk = head + tensor_key(cod, k2) + tail
            t = c * v
            out[nk] = out[nk] + t if nk in out else t
    return Element(reg, out)


def mul_slice(e: Element, start: int, alg: Registry, reg: Registry) -> Element:
    """Multiply two adjacent copies of ``alg`` found at ``start``."""
    w = len(alg.factors)
    out: dict = {}
    for key, c in e.coeffs.items():
        a = key[start:start + w] if w > 1 else key[start]
        b = key[start + w:start + 2 * w] if w > 1 else key[start + 1]
        head, tail = key[:start], key[start + 2 * w:]
        for k2, v in alg.mul_basis(a, b).items():
            nk = head + tensor_key(alg, k2) + tail
            t = c * v
            out[nk] = out[nk] + t if nk in out else t
    return Element(reg, out)


def _prod(H: EnAlgebra, *keys) -> dict:
    """Product of basis elements of H as a dict."""
    cur = {keys[0]: 1}
    for k in keys[1:]:
        new = {}
        for a, c in cur.items():
            for b, v in H.mul_basis(a, k).items():
                new[b] = new.get(b, 0) + c * v
        cur = {a: c for a, c in new.items() if c}
    return cur


# ---------------------------------------------------------------- the cowreath


class Cowreath:
    """(A', H, psi) with A' = A (x) H^op and H = E(n), A a Clifford algebra."""

    def __init__(self, A: CliffordAlgebra, psi_override=None):
        self.A = A
        self.H = A.hopf
        self.Hop = self.H.op
        self.field = A.field
        self.rho = canonical_coaction(A)
        self.Ap = Tensor(A, self.Hop)
        self.ApH = Tensor(self.Ap, self.H)
        self.ApHH = Tensor(self.Ap, self.H, self.H)
        self.ApAp = Tensor(self.Ap, self.Ap)
        self.psi_domain = Tensor(self.H, self.Ap)
        action = psi_override(self) if psi_override else self._psi_basis
        self.psi = LinearMap(self.psi_domain, self.ApH, action, "ψ")
        self.delta = LinearMap(self.H, self.ApHH, self._delta_basis, "δ")
        self.eps = LinearMap(self.H, self.Ap, self._eps_basis, "ε")
        self.unit_map = LinearMap(self.H, self.ApH, lambda k: Element(self.ApH, {(0, 0, k): self.field.one}), "u⊗Id")

    def _psi_basis(self, key):
        h, a, l = key
        H = self.H
        out: dict = {}
        for (a0, a1), c in self.rho.on_basis(a).coeffs.items():
            for (l1, l2), s in H.comul_basis(l).items():
                for k, v in _prod(H, l2, h, a1).items():
                    nk = (a0, l1, k)
                    t = c * (s * v)
                    out[nk] = out[nk] + t if nk in out else t
        return Element(self.ApH, out)

    def _delta_basis(self, h):
        one = self.field.one
        return Element(self.ApHH, {(0, 0) + kk: one * s for kk, s in self.H.comul_basis(h).items()})

    def _eps_basis(self, h):
        return Element(self.Ap, {(0, 0): self.field.one} if self.H.counit_basis(h) else {})

    def psi_apply(self, h: Element, ap: Element) -> Element:
        from .linalg import tensor

        return self.psi(tensor(h, ap))

    def odot(self, g: LinearMap, f: LinearMap) -> LinearMap:
        """g (.) f = (m (x) Id)(Id (x) g) f for f: U -> A'(x)V and g: V -> A'(x)W."""
        out_reg = g.codomain
        mid = Tensor(self.Ap, g.codomain)

        def act(k):
            e = f.on_basis(k)
            e = apply_slice(e, 2, g, mid)
            return mul_slice(e, 0, self.Ap, out_reg)

        return LinearMap(f.domain, out_reg, act, f"{g.name}⊙{f.name}")


def psi(cw: Cowreath, h: Element, ap: Element) -> Element:
    return cw.psi_apply(h, ap)


def delta_H(cw: Cowreath, h: Element) -> Element:
    return cw.delta(h)


def eps_H(cw: Cowreath, h: Element) -> Element:
    return cw.eps(h)


def odot(cw: Cowreath, g: LinearMap, f: LinearMap) -> LinearMap:
    return cw.odot(g, f)


def _ap_keys(cw: Cowreath):
    return cw.Ap.basis()


def check_cowreath_axioms(cw: Cowreath, ap_keys=None) -> VerificationReport:
    """The two transfer axioms for psi and the five cowreath equalities.

    ``ap_keys`` restricts the A' arguments of the multiplicativity axiom; by
    default the full basis of A' is used.
    """
    rep = VerificationReport("cowreath axioms")
    H, Ap = cw.H, cw.Ap
    one = cw.field.one
    ap_all = list(ap_keys) if ap_keys is not None else _ap_keys(cw)
    ApHAp = Tensor(Ap, H, Ap)

    with rep.condition("transfer-multiplicative", "h in H, a', b' in A' (basis)") as c:
        for h in H.basis():
            for a in ap_all:
                left_psi = cw.psi.on_basis((h,) + a)
                for b in ap_all:
                    ab = Ap.mul_basis(a, b)
                    lhs = cw.psi(Element(cw.psi_domain, {(h,) + k: v * one for k, v in ab.items()}))
                    e = Element(ApHAp, {k + b: v for k, v in left_psi.coeffs.items()})
                    e = apply_slice(e, 2, cw.psi, Tensor(Ap, Ap, H))
                    rhs = mul_slice(e, 0, Ap, cw.ApH)
                    c.check({"h": H.label(h), "a'": Ap.label(a), "b'": Ap.label(b)}, lhs, rhs)

    with rep.condition("transfer-unit", "h in H") as c:
        for h in H.basis():
            c.check({"h": H.label(h)}, cw.psi.on_basis((h, 0, 0)), Element(cw.ApH, {(0, 0, h): one}))

    ApHH = cw.ApHH
    with rep.condition("delta-morphism", "h in H, a' in A' (basis)") as c:
        for h in H.basis():
            dh = cw.delta.on_basis(h)
            for a in _ap_keys(cw):
                e = Element(Tensor(Ap, H, H, Ap), {k + a: v for k, v in dh.coeffs.items()})
                e = apply_slice(e, 3, cw.psi, Tensor(Ap, H, Ap, H))
                e = apply_slice(e, 2, cw.psi, Tensor(Ap, Ap, H, H))
                lhs = mul_slice(e, 0, Ap, ApHH)
                e = apply_slice(cw.psi.on_basis((h,) + a), 2, cw.delta, Tensor(Ap, Ap, H, H))
                rhs = mul_slice(e, 0, Ap, ApHH)
                c.check({"h": H.label(h), "a'": Ap.label(a)}, lhs, rhs)

    ApHHH = Tensor(Ap, H, H, H)
    with rep.condition("coassociativity", "h in H") as c:
        for h in H.basis():
            dh = cw.delta.on_basis(h)
            e = apply_slice(dh, 2, cw.delta, Tensor(Ap, Ap, H, H, H))
            lhs = mul_slice(e, 0, Ap, ApHHH)
            e = apply_slice(dh, 3, cw.delta, Tensor(Ap, H, Ap, H, H))
            e = apply_slice(e, 2, cw.psi, Tensor(Ap, Ap, H, H, H))
            rhs = mul_slice(e, 0, Ap, ApHHH)
            c.check({"h": H.label(h)}, lhs, rhs)

    with rep.condition("counit-morphism", "h in H, a' in A' (basis)") as c:
        for h in H.basis():
            for a in _ap_keys(cw):
                e = apply_slice(cw.psi.on_basis((h,) + a), 2, cw.eps, cw.ApAp)
                lhs = mul_slice(e, 0, Ap, Ap)
                ev = cw.eps.on_basis(h)
                e = Element(cw.ApAp, {k + a: v for k, v in ev.coeffs.items()})
                rhs = mul_slice(e, 0, Ap, Ap)
                c.check({"h": H.label(h), "a'": Ap.label(a)}, lhs, rhs)

    with rep.condition("left-counit", "h in H") as c:
        for h in H.basis():
            e = apply_slice(cw.delta.on_basis(h), 2, cw.eps, Tensor(Ap, Ap, H))
            lhs = mul_slice(e, 0, Ap, cw.ApH)
            c.check({"h": H.label(h)}, lhs, cw.unit_map.on_basis(h))

    with rep.condition("right-counit", "h in H") as c:
        for h in H.basis():
            e = apply_slice(cw.delta.on_basis(h), 3, cw.eps, Tensor(Ap, H, Ap))
            e = apply_slice(e, 2, cw.psi, Tensor(Ap, Ap, H))
            lhs = mul_slice(e, 0, Ap, cw.ApH)
            c.check({"h": H.label(h)}, lhs, cw.unit_map.on_basis(h))
    return rep


def corrupt_psi(target_key, factor=-1):
    """psi_override that scales one basis image of psi (negative control)."""

    def make(cw: Cowreath):
        def act(key):
            e = cw._psi_basis(key)
            return e.scale(factor) if key == target_key else e

        return act

    return make


# ---------------------------------------------------------------- structure axioms


def check_hopf_axioms(H: EnAlgebra) -> VerificationReport:
    rep = VerificationReport(f"Hopf axioms of E({H.n})")
    one = H.field.one
    B = H.basis()
    HHH = Tensor(H, H, H)
    comul = H.comul_map()
    S = H.antipode_map()

    def el(k):
        return H.element(k)

    with rep.condition("associativity", "a, b, c in E(n) (basis)") as c:
        for a in B:
            for b in B:
                ab = el(a) * el(b)
                for d in B:
                    c.check({"a": H.label(a), "b": H.label(b), "c": H.label(d)}, ab * el(d), el(a) * (el(b) * el(d)))
    with rep.condition("unit", "a in E(n)") as c:
        for a in B:
            c.check({"a": H.label(a)}, H.one() * el(a), el(a))
            c.check({"a": H.label(a)}, el(a) * H.one(), el(a))
    with rep.condition("coassociativity", "h in E(n)") as c:
        for h in B:
            d = comul.on_basis(h)
            lhs = apply_slice(d, 0, comul, HHH)
            rhs = apply_slice(d, 1, comul, HHH)
            c.check({"h": H.label(h)}, lhs, rhs)
    with rep.condition("counit", "h in E(n)") as c:
        for h in B:
            d = comul.on_basis(h)
            left = Element(H, {})
            right = Element(H, {})
            for (x, y), v in d.coeffs.items():
                if H.counit_basis(x):
                    left = left + H.element(y, v)
                if H.counit_basis(y):
                    right = right + H.element(x, v)
            c.check({"h": H.label(h), "side": "left"}, left, el(h))
            c.check({"h": H.label(h), "side": "right"}, right, el(h))
    with rep.condition("bialgebra", "a, b in E(n) (basis)") as c:
        for a in B:
            for b in B:
                lhs = comul(el(a) * el(b))
                rhs = comul.on_basis(a) * comul.on_basis(b)
                c.check({"a": H.label(a), "b": H.label(b)}, lhs, rhs)
    with rep.condition("counit-multiplicative", "a, b in E(n) (basis)") as c:
        for a in B:
            for b in B:
                lhs = sum((v for k, v in (el(a) * el(b)).coeffs.items() if H.counit_basis(k)), H.field.zero)
                c.check({"a": H.label(a), "b": H.label(b)}, lhs - H.counit_basis(a) * H.counit_basis(b) * one)
    with rep.condition("antipode", "h in E(n)") as c:
        for h in B:
            d = comul.on_basis(h)
            left = Element(H, {})
            right = Element(H, {})
            for (x, y), v in d.coeffs.items():
                left = left + (S.on_basis(x) * el(y)).scale(v)
                right = right + (el(x) * S.on_basis(y)).scale(v)
            unit = H.one().scale(one * H.counit_basis(h))
            c.check({"h": H.label(h), "side": "S*id"}, left, unit)
            c.check({"h": H.label(h), "side": "id*S"}, right, unit)
    return rep


def check_tuple_axioms(A: Registry, tup: ComoduleTuple, n: int) -> VerificationReport:
    rep = VerificationReport("comodule tuple axioms")
    B = A.basis()
    phi = tup.phi
    el = A.element
    with rep.condition("phi-involutive", "a in A") as c:
        for a in B:
            c.check({"a": A.label(a)}, phi(phi.on_basis(a)), el(a))
    with rep.condition("phi-multiplicative", "a, b in A") as c:
        for a in B:
            for b in B:
                c.check({"a": A.label(a), "b": A.label(b)}, phi(el(a) * el(b)), phi.on_basis(a) * phi.on_basis(b))
    with rep.condition("d-square-zero", "i, a in A") as c:
        for i in range(1, n + 1):
            for a in B:
                c.check({"i": i, "a": A.label(a)}, tup.d[i](tup.d[i].on_basis(a)))
    with rep.condition("phi-d-anticommute", "i, a in A") as c:
        for i in range(1, n + 1):
            for a in B:
                c.check({"i": i, "a": A.label(a)}, phi(tup.d[i].on_basis(a)) + tup.d[i](phi.on_basis(a)))
    with rep.condition("d-anticommute", "i < j, a in A") as c:
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for a in B:
                    c.check({"i": i, "j": j, "a": A.label(a)}, tup.d[i](tup.d[j].on_basis(a)) + tup.d[j](tup.d[i].on_basis(a)))
    with rep.condition("d-skew-derivation", "i, a, b in A") as c:
        for i in range(1, n + 1):
            d = tup.d[i]
            for a in B:
                for b in B:
                    lhs = d(el(a) * el(b))
                    rhs = d.on_basis(a) * el(b) + phi.on_basis(a) * d.on_basis(b)
                    c.check({"i": i, "a": A.label(a), "b": A.label(b)}, lhs, rhs)
    return rep


def check_comodule_axioms(A: CliffordAlgebra) -> VerificationReport:
    """Canonical coaction: both implementations, comodule and algebra axioms, tuple axioms."""
    rep = VerificationReport(f"canonical coaction, n={A.n}")
    H = A.hopf
    rho = canonical_coaction(A)
    rho_gen = coaction_by_generators(A)
    B = A.basis()
    AH = rho.codomain
    AHH = Tensor(A, H, H)
    comul = H.comul_map()
    with rep.condition("coaction-implementations-agree", "a in A (basis)") as c:
        for a in B:
            c.check({"a": A.label(a)}, rho.on_basis(a), rho_gen.on_basis(a))
    with rep.condition("coaction-coassociative", "a in A (basis)") as c:
        for a in B:
            r = rho.on_basis(a)
            c.check({"a": A.label(a)}, apply_slice(r, 0, rho, AHH), apply_slice(r, 1, comul, AHH))
    with rep.condition("coaction-counital", "a in A (basis)") as c:
        for a in B:
            back = Element(A, {})
            for (x, y), v in rho.on_basis(a).coeffs.items():
                if H.counit_basis(y):
                    back = back + A.element(x, v)
            c.check({"a": A.label(a)}, back, A.element(a))
    with rep.condition("coaction-multiplicative", "a, b in A (basis)") as c:
        for a in B:
            for b in B:
                c.check({"a": A.label(a), "b": A.label(b)}, rho(A.element(a) * A.element(b)), rho.on_basis(a) * rho.on_basis(b))
    with rep.condition("coaction-unital", "unit") as c:
        c.check({}, rho.on_basis(0), AH.one())
    rep.extend(check_tuple_axioms(A, canonical_tuple(A), A.n))
    return rep


# ---------------------------------------------------------------- Casimir tables


class CasimirTable:
    """B: H (x) H -> A (x) H^op on basis pairs, filled lazily and memoized.

    ``entry_fn(h, h2)`` returns an element of A (x) H^op, or of A when the
    table is right-trivial (``rt`` true), in which case the H^op part is 1.
    """

    def __init__(self, A: CliffordAlgebra, entry_fn, rt: bool, label: str = ""):
        self.A = A
        self.H = A.hopf
        self.n = A.n
        self.rt = rt
        self.Ap = Tensor(A, self.H.op)
        self._fn = entry_fn
        self._memo: dict = {}
        self._memo_a: dict = {}
        self.label = label

    def ba(self, h: int, h2: int) -> Element:
        """B^A(h (x) h2) for a right-trivial table."""
        if not self.rt:
            raise ValueError("B^A is only defined on right-trivial tables")
        hit = self._memo_a.get((h, h2))
        if hit is None:
            hit = self._fn(h, h2)
            self._memo_a[(h, h2)] = hit
        return hit

    def entry(self, h: int, h2: int) -> Element:
        hit = self._memo.get((h, h2))
        if hit is None:
            if self.rt:
                a = self.ba(h, h2)
                hit = Element(self.Ap, {(k, 0): v for k, v in a.coeffs.items()})
            else:
                hit = self._fn(h, h2)
            self._memo[(h, h2)] = hit
        return hit

    def keys(self):
        B = self.H.basis()
        return [(h, k) for h in B for k in B]

    def key_label(self, h: int, h2: int) -> str:
        return f"{self.H.label(h)}|{self.H.label(h2)}"

    def to_json(self) -> dict:
        out = {}
        for h, h2 in self.keys():
            e = self.ba(h, h2) if self.rt else self.entry(h, h2)
            out[self.key_label(h, h2)] = e.to_json()
        return out


def rt_table(A: CliffordAlgebra, fn, label="") -> CasimirTable:
    return CasimirTable(A, fn, True, label)


def _rho2(cw: Cowreath, a: int) -> Element:
    r = cw.rho.on_basis(a)
    return apply_slice(r, 0, cw.rho, Tensor(cw.A, cw.H, cw.H))


def check_casimir_general(cw: Cowreath, B: CasimirTable) -> VerificationReport:
    """The four conditions on a general B: H (x) H -> A (x) H^op."""
    rep = VerificationReport("general Casimir conditions")
    A, H = cw.A, cw.H
    one = cw.field.one
    AH = Tensor(A, H)
    AHH = Tensor(A, H, H)
    HB = H.basis()
    comul = H.comul_map()
    HHH = Tensor(H, H, H)
    delta2 = {g: apply_slice(comul.on_basis(g), 0, comul, HHH) for g in HB}

    with rep.condition("B1", "a in A, g, h, h' in H (basis)") as c:
        for a in A.basis():
            r2 = _rho2(cw, a)
            for g in HB:
                for h in HB:
                    for h2 in HB:
                        out: dict = {}
                        for (a0, a1, a2), ca in r2.coeffs.items():
                            for (g1, g2, g3), cg in delta2[g].coeffs.items():
                                xs = _prod(H, g2, h, a1)
                                ys = _prod(H, g3, h2, a2)
                                for x, sx in xs.items():
                                    for y, sy in ys.items():
                                        coef = ca * cg * (sx * sy)
                                        for (ba, bl), cb in B.entry(x, y).coeffs.items():
                                            for ka, va in A.mul_basis(a0, ba).items():
                                                for kh, vh in H.mul_basis(bl, g1).items():
                                                    k = (ka, kh)
                                                    t = coef * cb * (va * vh)
                                                    out[k] = out[k] + t if k in out else t
                        lhs = Element(AH, out)
                        out = {}
                        for (ba, bl), cb in B.entry(h, h2).coeffs.items():
                            for ka, va in A.mul_basis(ba, a).items():
                                for kh, vh in H.mul_basis(g, bl).items():
                                    k = (ka, kh)
                                    t = cb * (va * vh)
                                    out[k] = out[k] + t if k in out else t
                        rhs = Element(AH, out)
                        c.check({"a": A.label(a), "g": H.label(g), "h": H.label(h), "h'": H.label(h2)}, lhs, rhs)

    with rep.condition("B2", "h, h' in H (basis)") as c:
        for h in HB:
            for h2 in HB:
                out: dict = {}
                for (x1, x2), s in H.comul_basis(h).items():
                    for (ba, bl), cb in B.entry(x2, h2).coeffs.items():
                        for (a0, a1), cr in cw.rho.on_basis(ba).coeffs.items():
                            for (l1, l2), sl in H.comul_basis(bl).items():
                                for k3, v in _prod(H, l2, x1, a1).items():
                                    k = (a0, l1, k3)
                                    t = cb * cr * (s * sl * v)
                                    out[k] = out[k] + t if k in out else t
                lhs = Element(AHH, out)
                out = {}
                for (y1, y2), s in H.comul_basis(h2).items():
                    for (ba, bl), cb in B.entry(h, y1).coeffs.items():
                        k = (ba, bl, y2)
                        t = cb * s
                        out[k] = out[k] + t if k in out else t
                rhs = Element(AHH, out)
                c.check({"h": H.label(h), "h'": H.label(h2)}, lhs, rhs)

    with rep.condition("B3", "h in H (basis)") as c:
        for h in HB:
            lhs = cw.Ap.zero()
            for (x1, x2), s in H.comul_basis(h).items():
                lhs = lhs + B.entry(x1, x2).scale(one * s)
            c.check({"h": H.label(h)}, lhs, cw.eps.on_basis(h))

    with rep.condition("B4", "h, h', h'' in H (basis)") as c:
        for h in HB:
            for h2 in HB:
                for h3 in HB:
                    lhs = cw.Ap.zero()
                    for (y1, y2), s in H.comul_basis(h2).items():
                        lhs = lhs + (B.entry(h, y1) * B.entry(y2, h3)).scale(one * s)
                    rhs = B.entry(h, h3).scale(one * H.counit_basis(h2))
                    c.check({"h": H.label(h), "h'": H.label(h2), "h''": H.label(h3)}, lhs, rhs)
    return rep


def check_casimir_rt(cw: Cowreath, B: CasimirTable) -> VerificationReport:
    """Right-trivial conditions B1S..B4S on B^A."""
    rep = VerificationReport("right-trivial conditions")
    A, H = cw.A, cw.H
    one = cw.field.one
    BA = B.ba
    HB = H.basis()

    with rep.condition("B1S", "a in A, h, h' in H (basis)") as c:
        for a in A.basis():
            r2 = _rho2(cw, a)
            for h in HB:
                for h2 in HB:
                    lhs = A.zero()
                    for (a0, a1, a2), ca in r2.coeffs.items():
                        inner = A.zero()
                        for x, sx in H.mul_basis(h, a1).items():
                            for y, sy in H.mul_basis(h2, a2).items():
                                inner = inner + BA(x, y).scale(one * (sx * sy))
                        lhs = lhs + (A.element(a0, ca) * inner)
                    rhs = BA(h, h2) * A.element(a)
                    c.check({"a": A.label(a), "h": H.label(h), "h'": H.label(h2)}, lhs, rhs)
    _check_b2s(rep, cw, B, "B2S")
    with rep.condition("B3S", "h, h', h'' in H (basis); normalization") as c:
        c.check({"normalization": "B^A(1|1)"}, BA(0, 0), A.one())
        for h in HB:
            for h2 in HB:
                for h3 in HB:
                    lhs = A.zero()
                    for (x1, x2), s in H.comul_basis(h).items():
                        for y, sy in H.mul_basis(x1, h2).items():
                            for z, sz in H.mul_basis(x2, h3).items():
                                lhs = lhs + BA(y, z).scale(one * (s * sy * sz))
                    rhs = BA(h2, h3).scale(one * H.counit_basis(h))
                    c.check({"h": H.label(h), "h'": H.label(h2), "h''": H.label(h3)}, lhs, rhs)
    with rep.condition("B4S", "h, h' in H (basis)") as c:
        for h in HB:
            for h2 in HB:
                c.check({"h": H.label(h), "h'": H.label(h2)}, BA(h, 0) * BA(0, h2), BA(h, h2))
    return rep


def _check_b2s(rep, cw: Cowreath, B: CasimirTable, cid: str):
    A, H = cw.A, cw.H
    AH = Tensor(A, H)
    with rep.condition(cid, "h in H (basis)") as c:
        for h in H.basis():
            lhs = cw.rho(B.ba(0, h))
            out: dict = {}
            for (x1, x2), s in H.comul_basis(h).items():
                for k, v in B.ba(0, x1).coeffs.items():
                    kk = (k, x2)
                    t = v * s
                    out[kk] = out[kk] + t if kk in out else t
            c.check({"h": H.label(h)}, lhs, Element(AH, out))


def check_casimir_reduced(cw: Cowreath, B: CasimirTable) -> VerificationReport:
    """Reduced right-trivial conditions B1S1..B4S1."""
    rep = VerificationReport("reduced right-trivial conditions")
    A, H = cw.A, cw.H
    one = cw.field.one
    BA = B.ba
    HB = H.basis()

    with rep.condition("B1S1", "a in A, h in H (basis)") as c:
        for a in A.basis():
            r2 = _rho2(cw, a)
            for h in HB:
                lhs = A.zero()
                for (a0, a1, a2), ca in r2.coeffs.items():
                    s1, k1 = H.antipode_basis(a1)
                    inner = A.zero()
                    for y, sy in _prod(H, k1, h, a2).items():
                        inner = inner + BA(0, y).scale(one * (s1 * sy))
                    lhs = lhs + A.element(a0, ca) * inner
                c.check({"a": A.label(a), "h": H.label(h)}, lhs, BA(0, h) * A.element(a))
    _check_b2s(rep, cw, B, "B2S1")
    with rep.condition("B3S1", "h, h' in H (basis); normalization") as c:
        c.check({"normalization": "B^A(1|1)"}, BA(0, 0), A.one())
        for h in HB:
            s1, k1 = H.antipode_basis(h)
            for h2 in HB:
                rhs = A.zero()
                for y, sy in H.mul_basis(k1, h2).items():
                    rhs = rhs + BA(0, y).scale(one * (s1 * sy))
                c.check({"h": H.label(h), "h'": H.label(h2)}, BA(h, h2), rhs)
    with rep.condition("B4S1", "h, h' in H (basis)") as c:
        for h in HB:
            for h2 in HB:
                rhs = A.zero()
                for y, sy in H.mul_basis(h, h2).items():
                    rhs = rhs + BA(0, y).scale(one * sy)
                c.check({"h": H.label(h), "h'": H.label(h2)}, BA(0, h) * BA(0, h2), rhs)
    return rep


SEPARABLE_RT = ("B1S", "B2S", "B3S")
SEPARABLE_REDUCED = ("B1S1", "B2S1", "B3S1")


# ---------------------------------------------------------------- E(n) and Clifford layers


def t_key(k: int, q: int) -> int:
    """Basis key of g^k x_Q for Q a mask on bits 1..n."""
    return (k & 1) | q


def _t_label(k, q):
    return {"k": k, "Q": subset_str(q)}


def _pullback(H: EnAlgebra, A, t: dict, h: int, h2: int) -> Element:
    s, k1 = H.antipode_basis(h)
    out = A.zero()
    for y, sy in H.mul_basis(k1, h2).items():
        out = out + t[(y & 1, y >> 1 << 1)].scale(A.field.one * (s * sy))
    return out


def _common_conditions(rep, A, H, t, table, phi, dset, n, suffix):
    one = A.field.one
    full = ((1 << n) - 1) << 1
    Qs = list(submasks(full))
    ks = (0, 1)
    with rep.condition("B0" + suffix, "t_{0,∅}") as c:
        c.check({"k": 0, "Q": "{}"}, t[(0, 0)], A.one())
    if table is not None:
        with rep.condition("B1" + suffix, "j, k, P, Q") as c:
            for h in H.basis():
                for h2 in H.basis():
                    c.check({"entry": table.key_label(h, h2)}, table.ba(h, h2), _pullback(H, A, t, h, h2))
    with rep.condition("B2" + suffix, "k, Q") as c:
        for k in ks:
            for q in Qs:
                e = t[(k, q)]
                c.check(_t_label(k, q), phi(e), e.scale(one * parity_sign(k + q.bit_count())))
    with rep.condition("B3" + suffix, "k, Q, P") as c:
        for k in ks:
            for q in Qs:
                e = t[(k, q)]
                for p in Qs:
                    lhs = dset(p, e)
                    if p & q == p:
                        size = p.bit_count()
                        sg = parity_sign(s_count_mask(p, q) + size * (size + 2 * k + 1) // 2)
                        rhs = t[(k, q ^ p)].scale(one * sg)
                    else:
                        rhs = A.zero()
                    c.check({**_t_label(k, q), "P": subset_str(p)}, lhs, rhs)
    return Qs


def _rth_conditions(rep, A, H, t, n, suffix, extra_sample, seed):
    one = A.field.one
    full = ((1 << n) - 1) << 1
    Qs = list(submasks(full))
    with rep.condition("B6" + ("S" if suffix == "E" else suffix), "P") as c:
        t1 = t[(1, 0)]
        c.check({"square": "t_{1,∅}^2"}, t1 * t1, A.one())
        for p in Qs:
            rhs = (t[(0, p)] * t1).scale(one * parity_sign(p.bit_count()))
            c.check({"P": subset_str(p)}, t[(1, p)], rhs)
    # the reduced multiplicativity condition on every (or a sample of) pair of entries
    pairs = [(j, p, k, q) for j in (0, 1) for p in Qs for k in (0, 1) for q in Qs]
    note = "all pairs"
    if extra_sample is not None and len(pairs) > extra_sample:
        small = [x for x in pairs if x[3].bit_count() <= 1]
        large = [x for x in pairs if x[3].bit_count() > 1]
        rng = random.Random(f"b4s1:{seed}")
        pairs = small + sorted(rng.sample(large, min(extra_sample, len(large))))
        note = f"all pairs with |Q| <= 1 plus {min(extra_sample, len(large))} sampled pairs with |Q| >= 2"
    with rep.condition("B4S1-direct", "j, P, k, Q") as c:
        c.note = note
        for j, p, k, q in pairs:
            lhs = t[(j, p)] * t[(k, q)]
            prod = H.mul_basis(t_key(j, p), t_key(k, q))
            rhs = A.zero()
            for y, sy in prod.items():
                rhs = rhs + t[(y & 1, y >> 1 << 1)].scale(one * sy)
            c.check({"j": j, "P": subset_str(p), "k": k, "Q": subset_str(q)}, lhs, rhs)


def check_en_conditions(A, tup: ComoduleTuple, t: dict, table: CasimirTable | None = None,
                        rth: bool = False, extra_sample: int | None = None, seed: int = 0) -> VerificationReport:
    """Conditions for a generic E(n)-comodule algebra given by (phi, d_1..d_n).

    ``t`` maps (k, Q-mask) to t_{k,Q} = B^A(1 (x) g^k x_Q).
    """
    H = A.hopf
    n = H.n
    rep = VerificationReport("E(n) conditions")
    one = A.field.one
    phi = tup.phi
    Qs = _common_conditions(rep, A, H, t, table, phi, tup.d_set, n, "E")
    full = ((1 << n) - 1) << 1

    def phi_pow(e, m):
        return phi(e) if m & 1 else e

    with rep.condition("B4E", "k, Q, a in A (basis)") as c:
        for k in (0, 1):
            for q in Qs:
                tq = t[(k, q)]
                comp = full ^ q
                for a in A.basis():
                    ae = A.element(a)
                    lhs = tq * ae
                    rhs = phi_pow(ae, q.bit_count()) * tq
                    if k == 1:
                        for p in submasks(comp):
                            if not p:
                                continue
                            size = p.bit_count()
                            dp = tup.d_set(p, phi_pow(ae, size + q.bit_count()))
                            if not dp:
                                continue
                            sg = parity_sign(size * (size + 3) // 2 + s_count_mask(p, p | q))
                            rhs = rhs + (dp * t[(k, p | q)]).scale(one * (sg * 2 ** size))
                    c.check({**_t_label(k, q), "a": A.label(a)}, lhs, rhs)
    if rth:
        _rth_conditions(rep, A, H, t, n, "E", extra_sample, seed)
    return rep


def check_clifford_conditions(A: CliffordAlgebra, t: dict, table: CasimirTable | None = None,
                              rth: bool = False, extra_sample: int | None = None, seed: int = 0) -> VerificationReport:
    """The Clifford form of the conditions, with the canonical tuple."""
    H = A.hopf
    n = A.n
    rep = VerificationReport("Clifford conditions")
    one = A.field.one
    Qs = _common_conditions(rep, A, H, t, table, lambda e: main_involution(A, e),
                            lambda p, e: d_composite(A, p, e), n, "cl")
    G = A.G()
    with rep.condition("B4cl", "k, Q") as c:
        for k in (0, 1):
            for q in Qs:
                tq = t[(k, q)]
                c.check(_t_label(k, q), tq * G, (G * tq).scale(one * parity_sign(q.bit_count())))
    with rep.condition("B5cl", "k, Q, i") as c:
        for k in (0, 1):
            for q in Qs:
                tq = t[(k, q)]
                for i in range(1, n + 1):
                    Xi = A.X(i)
                    rhs = (Xi * tq).scale(one * parity_sign(q.bit_count()))
                    bit = 1 << i
                    if k == 1 and not q & bit:
                        rhs = rhs + t[(1, q | bit)].scale(one * (2 * parity_sign(s_count_mask(q, q | bit))))
                    c.check({**_t_label(k, q), "i": i}, tq * Xi, rhs)
    if rth:
        _rth_conditions(rep, A, H, t, n, "cl", extra_sample, seed)
    return rep
