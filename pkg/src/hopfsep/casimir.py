"""Right-trivial Casimir elements for Clifford algebras over E(n).

t_{k,Q} denotes B^A(1 (x) g^k x_Q).  The k = 0 family is a signed subset sum
weighted by free scalars eta_S; the k = 1 family is a sum over perfect
matchings weighted by products of lambda's.  Tables on the full basis of
H (x) H are obtained by pulling back along the antipode.
"""

from __future__ import annotations

import enum

from .clifford import CliffordAlgebra, CliffordParams
from .cowreath import CasimirTable, _pullback
from .linalg import Element
from .scalar import ParamName, eta as eta_name, mu as mu_name
from .setcombin import enumerate_matchings, matching_sign, parity_sign, s_count_mask, submasks


class FamilyTag(enum.Enum):
    ZERO = "ZeroFamily"
    ALPHA = "AlphaFamily"
    NOT_RT = "NotRT"


def classify(p: CliffordParams) -> FamilyTag:
    """Which family of right-trivially coseparable algebras the parameters fall in."""
    values = [v for _, v in p.items()]
    if not any(values):
        return FamilyTag.ZERO
    al = p.alpha
    if not al:
        return FamilyTag.NOT_RT
    for i in range(1, p.n + 1):
        if p.beta[i] != p.gamma[i] * p.gamma[i] / (4 * al):
            return FamilyTag.NOT_RT
        for j in range(i + 1, p.n + 1):
            if p.lam[(i, j)] != p.gamma[i] * p.gamma[j] / (2 * al):
                return FamilyTag.NOT_RT
    return FamilyTag.ALPHA


class EtaAssignment:
    """The scalars eta_S (S a subset of {1..n}, as a mask on bits 1..n).

    eta of the empty set is 1.  With ``derive_odd`` set (the alpha family),
    only even subsets are stored and odd ones follow from the recursion
    eta_T = sum_i (-1)^{S({i},T)+1} eta_{T minus i} gamma_i / (2 alpha).
    Missing stored values default to 0.
    """

    def __init__(self, field, n: int, values: dict | None = None, derive_odd: CliffordParams | None = None):
        self.field = field
        self.n = n
        self.derive_odd = derive_odd
        self.values = {}
        for m, v in (values or {}).items():
            if m & 1 or m >> (n + 1):
                raise ValueError(f"eta index {m} is not a subset of 1..{n}")
            if derive_odd is not None and m.bit_count() % 2:
                raise ValueError("odd eta values are derived in the alpha family")
            if m:
                self.values[m] = field.convert(v)
        self._memo: dict = {}

    @classmethod
    def symbolic(cls, field, n: int, derive_odd: CliffordParams | None = None) -> "EtaAssignment":
        vals = {}
        for m in submasks(((1 << n) - 1) << 1):
            if m and (derive_odd is None or m.bit_count() % 2 == 0):
                vals[m] = field.param(eta_name(m))
        return cls(field, n, vals, derive_odd)

    def __call__(self, m: int):
        if m == 0:
            return self.field.one
        hit = self._memo.get(m)
        if hit is not None:
            return hit
        if self.derive_odd is not None and m.bit_count() % 2:
            p = self.derive_odd
            total = self.field.zero
            rest = m
            while rest:
                low = rest & -rest
                i = low.bit_length() - 1
                sg = parity_sign(s_count_mask(low, m) + 1)
                total = total + self(m ^ low) * p.gamma[i] * sg
                rest ^= low
            hit = total / (2 * p.alpha)
        else:
            hit = self.values.get(m, self.field.zero)
        self._memo[m] = hit
        return hit

    def to_json(self) -> dict:
        return {str(eta_name(m)): self.field.fmt(v) for m, v in sorted(self.values.items())}


def build_t0(A: CliffordAlgebra, q: int, eta: EtaAssignment) -> Element:
    """Sum over R in Q u {0} with |R| = |Q| mod 2 of (-1)^{S(Q-R,Q)} eta_{Q-R} X_R."""
    if q & 1:
        raise ValueError("Q must be a subset of 1..n")
    out = {}
    parity = q.bit_count() & 1
    for r in submasks(q | 1):
        if r.bit_count() & 1 != parity:
            continue
        rest = q & ~r
        c = eta(rest)
        if c:
            out[r] = c if s_count_mask(rest, q) % 2 == 0 else -c
    return Element(A, out)


class _MatchingSums:
    """Memoized sum of sgn(P) * Lambda(P) over perfect matchings P of a set."""

    def __init__(self, p: CliffordParams):
        self.p = p
        self.memo: dict = {}

    def __call__(self, u: int):
        hit = self.memo.get(u)
        if hit is not None:
            return hit
        p = self.p
        total = p.field.zero
        for m in enumerate_matchings(u):
            term = p.field.one * matching_sign(m)
            for a, b in m.blocks:
                term = term * p.l(a, b)
                if not term:
                    break
            total = total + term
        self.memo[u] = total
        return total


def _matching_sums(A: CliffordAlgebra) -> _MatchingSums:
    ms = getattr(A, "_matching_sums", None)
    if ms is None:
        ms = _MatchingSums(A.params)
        A._matching_sums = ms
    return ms


def build_t1(A: CliffordAlgebra, q: int, mu) -> Element:
    """The matching-sum formula for t_{1,Q}."""
    if q & 1:
        raise ValueError("Q must be a subset of 1..n")
    ms = _matching_sums(A)
    qbar = q | 1
    m = qbar.bit_count()
    pref = A.field.convert(mu) / (2 ** (m // 2))
    out = {}
    for r in submasks(qbar):
        size = r.bit_count()
        if (m - size) % 2:
            continue
        total = ms(qbar ^ r)
        if not total:
            continue
        sg = parity_sign(s_count_mask(r, qbar) + (m - size) // 2)
        out[r] = pref * total * (sg * 2 ** (size // 2))
    return Element(A, out)


def build_t1_recursive(A: CliffordAlgebra, q: int, mu) -> Element:
    """t_{1,Q} from t_{1,empty} = mu G by adjoining the largest index repeatedly."""
    t = A.G().scale(A.field.convert(mu))
    cur = 0
    for i in sorted(j for j in range(1, A.n + 1) if q >> j & 1):
        Xi = A.X(i)
        sg = parity_sign(cur.bit_count() + 1)
        t = (t * Xi + (Xi * t).scale(A.field.one * sg)) / 2
        cur |= 1 << i
    return t


def t0_closed_form(A: CliffordAlgebra, q: int) -> Element:
    """Closed form of B^A(1 (x) x_Q) for the h-separable alpha family."""
    p = A.params
    al = p.alpha
    out = {}
    for r in submasks(q):
        rest = q ^ r
        diff = rest.bit_count()
        prod = A.field.one
        for i in range(1, A.n + 1):
            if rest >> i & 1:
                prod = prod * p.gamma[i]
        if not prod:
            continue
        base = s_count_mask(rest, q)
        if diff % 2 == 0:
            c = prod / (2 ** diff * al ** (diff // 2))
            out[r] = c if (base + diff // 2) % 2 == 0 else -c
        else:
            c = prod / (2 ** diff * al ** ((diff + 1) // 2))
            out[r | 1] = c if (base + (diff + 1) // 2) % 2 == 0 else -c
    return Element(A, out)


def rth_eta(A: CliffordAlgebra) -> EtaAssignment:
    """Even eta values singled out by h-separability: prod gamma times (-1/(4 alpha))^{|T|/2}."""
    p = A.params
    vals = {}
    for m in submasks(((1 << A.n) - 1) << 1):
        size = m.bit_count()
        if m and size % 2 == 0:
            prod = A.field.one
            for i in range(1, A.n + 1):
                if m >> i & 1:
                    prod = prod * p.gamma[i]
            vals[m] = prod * parity_sign(size // 2) / ((4 * p.alpha) ** (size // 2))
    return EtaAssignment(A.field, A.n, vals, derive_odd=p)


def all_subsets(n: int) -> list[int]:
    return list(submasks(((1 << n) - 1) << 1))


def t_values(A: CliffordAlgebra, eta: EtaAssignment, mu) -> dict:
    return {(k, q): (build_t0(A, q, eta) if k == 0 else build_t1(A, q, mu)) for k in (0, 1) for q in all_subsets(A.n)}


def table_from_t(A: CliffordAlgebra, t: dict, label: str = "") -> CasimirTable:
    """Right-trivial table determined by its (1, g^k x_Q) entries via the antipode pullback."""
    H = A.hopf
    table = CasimirTable(A, lambda h, h2: _pullback(H, A, t, h, h2), rt=True, label=label)
    table.t = t
    return table


def build_casimir_rt(A: CliffordAlgebra, eta: EtaAssignment | None = None, mu=None, strict: bool = True) -> CasimirTable:
    """Candidate right-trivial Casimir table from the t_{0,Q} and t_{1,Q} formulas.

    With ``strict`` the parameters must belong to one of the two families.
    Default eta: free symbols (symbolic field) restricted as the family
    requires, or zeros over the rationals.  Default mu: the parameter mu.
    """
    p = A.params
    tag = classify(p)
    if strict and tag is FamilyTag.NOT_RT:
        raise ValueError("parameters are not in a right-trivially coseparable family (NotRT)")
    derive = p if tag is not FamilyTag.ZERO and p.alpha else None
    if eta is None:
        if getattr(A.field, "symbolic", False):
            eta = EtaAssignment.symbolic(A.field, A.n, derive)
        else:
            eta = EtaAssignment(A.field, A.n, {}, derive)
    if mu is None:
        mu = A.field.param(mu_name()) if getattr(A.field, "symbolic", False) else A.field.one
    t = t_values(A, eta, mu)
    table = table_from_t(A, t, f"rt {tag.value}")
    table.family = tag
    table.eta = eta
    table.mu = A.field.convert(mu)
    return table


def build_casimir_rth(A: CliffordAlgebra, mu=None) -> CasimirTable:
    """h-separable table; requires the alpha family with mu^2 alpha = 1."""
    p = A.params
    tag = classify(p)
    if tag is FamilyTag.ZERO:
        raise ValueError("the zero family has no h-separable Casimir element: (t_{1,∅})^2 = mu^2 * 0 cannot be 1")
    if tag is not FamilyTag.ALPHA:
        raise ValueError("h-separability needs the alpha family (NotRT parameters given)")
    if mu is None:
        mu = A.field.param(mu_name())
    mu = A.field.convert(mu)
    if mu * mu * p.alpha != 1:
        raise ValueError("h-separability needs mu^2 alpha = 1; substitute alpha -> mu^-2")
    G = A.G()
    t = {}
    for q in all_subsets(A.n):
        t0 = t0_closed_form(A, q)
        t[(0, q)] = t0
        t[(1, q)] = (G * t0).scale(mu)
    table = table_from_t(A, t, "rth")
    table.family = tag
    table.mu = mu
    table.eta = rth_eta(A)
    return table


def rth_params(field, n: int, mu=None, gamma: dict | None = None) -> CliffordParams:
    """Alpha-family parameters with alpha = mu^-2."""
    m = field.param(mu_name()) if mu is None else field.convert(mu)
    return CliffordParams.alpha_family(field, n, alpha=m ** -2, gamma=gamma)


__all__ = [
    "FamilyTag", "classify", "EtaAssignment", "build_t0", "build_t1", "build_t1_recursive",
    "t0_closed_form", "rth_eta", "t_values", "table_from_t", "build_casimir_rt",
    "build_casimir_rth", "rth_params", "all_subsets", "ParamName",
]
