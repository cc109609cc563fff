"""Parametric Clifford algebras Cl(alpha, beta_i, gamma_i, lambda_ij).

Generators G = X_0 and X_1..X_n with

    G^2 = alpha,  X_i^2 = beta_i,  G X_i + X_i G = gamma_i,
    X_i X_j + X_j X_i = lambda_ij.

Basis elements X_R (R a subset of {0..n}, increasing order, G first) are
bitmasks, as in :mod:`hopfsep.enhopf`.  Products are computed by absorbing
one generator at a time on the right.
"""

from __future__ import annotations

from dataclasses import dataclass

from .enhopf import EnAlgebra, basis_label, parse_basis_label
from .linalg import Element, LinearMap, Registry, Tensor, tensor
from .scalar import ParamName, alpha as a_name, beta as b_name, gamma as g_name, lam as l_name
from .setcombin import SubsetIndex, elements_of, parity_sign, s_count_mask, sort_key, submasks


class CliffordParams:
    """Defining scalars of a Clifford algebra on n generators besides G."""

    def __init__(self, field, n: int, alpha, beta: dict, gamma: dict, lam: dict):
        if n < 1:
            raise ValueError("need n >= 1")
        self.field = field
        self.n = n
        self.alpha = field.convert(alpha)
        self.beta = {i: field.convert(beta.get(i, 0)) for i in range(1, n + 1)}
        self.gamma = {i: field.convert(gamma.get(i, 0)) for i in range(1, n + 1)}
        self.lam = {}
        for (i, j), v in lam.items():
            if i == j:
                raise ValueError("lambda needs distinct indices; use beta for squares")
            self.lam[(min(i, j), max(i, j))] = field.convert(v)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                self.lam.setdefault((i, j), field.zero)

    @classmethod
    def generic(cls, field, n: int) -> "CliffordParams":
        """Every defining scalar is its own free parameter."""
        p = field.param
        return cls(
            field, n, p(a_name()),
            {i: p(b_name(i)) for i in range(1, n + 1)},
            {i: p(g_name(i)) for i in range(1, n + 1)},
            {(i, j): p(l_name(i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)},
        )

    @classmethod
    def zero(cls, field, n: int) -> "CliffordParams":
        return cls(field, n, 0, {}, {}, {})

    @classmethod
    def alpha_family(cls, field, n: int, alpha=None, gamma: dict | None = None) -> "CliffordParams":
        """alpha != 0 free, beta_i = gamma_i^2/(4 alpha), lambda_ij = gamma_i gamma_j/(2 alpha)."""
        al = field.param(a_name()) if alpha is None else field.convert(alpha)
        if not al:
            raise ValueError("the alpha family needs alpha != 0")
        if gamma is None:
            gm = {i: field.param(g_name(i)) for i in range(1, n + 1)}
        else:
            gm = {i: field.convert(gamma.get(i, 0)) for i in range(1, n + 1)}
        beta = {i: gm[i] * gm[i] / (4 * al) for i in gm}
        lam = {(i, j): gm[i] * gm[j] / (2 * al) for i in gm for j in gm if i < j}
        return cls(field, n, al, beta, gm, lam)

    def b(self, i: int):
        """beta_i with beta_0 = alpha."""
        return self.alpha if i == 0 else self.beta[i]

    def l(self, i: int, j: int):
        """lambda_ij with lambda_0i = gamma_i, lambda_ii = 2 beta_i, symmetric."""
        if i == j:
            return 2 * self.b(i)
        if i > j:
            i, j = j, i
        if i == 0:
            return self.gamma[j]
        return self.lam[(i, j)]

    def replace(self, name: ParamName, value) -> "CliffordParams":
        """Copy with one defining scalar changed."""
        beta, gamma, lam = dict(self.beta), dict(self.gamma), dict(self.lam)
        al = self.alpha
        if name.kind == "alpha":
            al = value
        elif name.kind == "beta":
            beta[name.indices[0]] = value
        elif name.kind == "gamma":
            gamma[name.indices[0]] = value
        elif name.kind == "lambda":
            lam[name.indices] = value
        else:
            raise ValueError(f"{name} is not a defining scalar")
        return CliffordParams(self.field, self.n, al, beta, gamma, lam)

    def items(self) -> list[tuple[ParamName, object]]:
        out = [(a_name(), self.alpha)]
        out += [(b_name(i), v) for i, v in self.beta.items()]
        out += [(g_name(i), v) for i, v in self.gamma.items()]
        out += [(l_name(*ij), v) for ij, v in sorted(self.lam.items())]
        return out

    def to_json(self) -> dict:
        return {str(k): self.field.fmt(v) for k, v in self.items()}


class CliffordAlgebra(Registry):
    def __init__(self, params: CliffordParams):
        self.params = params
        self.n = params.n
        self.field = params.field
        self.unit_key = 0
        self._basis = sorted(range(1 << (self.n + 1)), key=sort_key)
        self._gen_memo: dict = {}
        self._mul: dict = {}
        self.hopf = EnAlgebra(self.n, self.field)
        self._coaction = None

    def __repr__(self):
        return f"Cl[n={self.n}]"

    def basis(self):
        return self._basis

    def sort_key(self, key):
        return sort_key(key)

    def label(self, key):
        return basis_label(key, "X", "G")

    def parse_label(self, text):
        return parse_basis_label(text, "X", "G", self.n)

    def gen(self, i: int) -> Element:
        """X_i, with X_0 = G."""
        if not 0 <= i <= self.n:
            raise ValueError(f"generator index {i} outside 0..{self.n}")
        return self.element(1 << i)

    def G(self) -> Element:
        return self.gen(0)

    def X(self, i: int) -> Element:
        return self.gen(i)

    def times_generator(self, p: int, j: int) -> dict:
        """X_P X_j in normal form.

        Moving X_j left past the elements of P above j produces one
        lambda-term per crossed element, and a beta_j term (or the merged
        monomial) at the end.
        """
        key = (p, j)
        hit = self._gen_memo.get(key)
        if hit is not None:
            return hit
        prm = self.params
        out: dict = {}
        above = elements_of(p >> (j + 1) << (j + 1))
        k = len(above)
        for t, i in enumerate(above):
            c = prm.l(i, j)
            if c:
                # elements of P above i: k - t - 1
                out[p ^ (1 << i)] = c if (k - t - 1) % 2 == 0 else -c
        sign = parity_sign(k)
        if p >> j & 1:
            c = prm.b(j)
            if c:
                q = p ^ (1 << j)
                v = c if sign > 0 else -c
                out[q] = out[q] + v if q in out else v
        else:
            q = p | (1 << j)
            out[q] = sign
        out = {q: v for q, v in out.items() if v}
        self._gen_memo[key] = out
        return out

    def mul_basis(self, r: int, s: int) -> dict:
        key = (r, s)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        if s == 0:
            out = {r: 1}
        else:
            top = s.bit_length() - 1
            prev = self.mul_basis(r, s ^ (1 << top))
            out = {}
            for p, c in prev.items():
                for q, v in self.times_generator(p, top).items():
                    t = c * v
                    out[q] = out[q] + t if q in out else t
            out = {q: v for q, v in out.items() if v}
        self._mul[key] = out
        return out


def cl_mul(a: Element, b: Element) -> Element:
    return a * b


# ---------------------------------------------------------------- maps


def main_involution(A: CliffordAlgebra, a: Element) -> Element:
    """sigma(X_R) = (-1)^{|R|} X_R."""
    return Element(A, {r: (-c if r.bit_count() & 1 else c) for r, c in a.coeffs.items()})


def d_single(A: CliffordAlgebra, i: int, a: Element) -> Element:
    """d_i(X_R) = (-1)^{S({i},R)+1} X_{R minus i} when i is in R, else 0."""
    if not 1 <= i <= A.n:
        raise ValueError(f"derivation index {i} outside 1..{A.n}")
    bit = 1 << i
    out = {}
    for r, c in a.coeffs.items():
        if r & bit:
            s = s_count_mask(bit, r) + 1
            out[r ^ bit] = -c if s & 1 else c
    return Element(A, out)


def d_composite(A: CliffordAlgebra, P, a: Element) -> Element:
    """d_P = d_{i_1} o ... o d_{i_s} for P = {i_1 < ... < i_s}, in closed form."""
    pm = P.mask if isinstance(P, SubsetIndex) else int(P)
    if pm & 1:
        raise ValueError("derivation sets live in {1..n}")
    size = pm.bit_count()
    tri = size * (size + 1) // 2
    out = {}
    for r, c in a.coeffs.items():
        if r & pm == pm:
            s = s_count_mask(pm, r) + tri
            out[r ^ pm] = -c if s & 1 else c
    return Element(A, out)


def antiderivative(A: CliffordAlgebra, a: Element, P):
    """Solutions b of d_P(b) = a.

    Returns None when there is none, else (particular, kernel_basis) where
    kernel_basis lists the subsets Q with X_Q spanning ker d_P.
    """
    pm = P.mask if isinstance(P, SubsetIndex) else int(P)
    if pm & 1:
        raise ValueError("derivation sets live in {1..n}")
    if any(r & pm for r in a.coeffs):
        return None
    size = pm.bit_count()
    xp = A.element(pm)
    part = A.zero()
    for r, c in a.coeffs.items():
        e = size * (size + 1) // 2 + r.bit_count() * size
        term = A.element(r, -c if e & 1 else c) * xp
        part = part + term
    kernel = [SubsetIndex.from_mask(q) for q in A.basis() if q & pm != pm]
    return part, kernel


def sigma_map(A: CliffordAlgebra) -> LinearMap:
    return LinearMap(A, A, lambda k: main_involution(A, A.element(k)), "σ")


def d_map(A: CliffordAlgebra, i: int) -> LinearMap:
    return LinearMap(A, A, lambda k: d_single(A, i, A.element(k)), f"d{i}")


@dataclass
class ComoduleTuple:
    """An algebra map phi and maps d_1..d_n on A (keys of ``d`` are 1..n)."""

    phi: LinearMap
    d: dict

    def d_set(self, pm: int, a: Element) -> Element:
        """d_P(a) by composing the maps, largest index applied first."""
        for i in reversed(elements_of(pm)):
            a = self.d[i](a)
        return a


def canonical_tuple(A: CliffordAlgebra) -> ComoduleTuple:
    return ComoduleTuple(sigma_map(A), {i: d_map(A, i) for i in range(1, A.n + 1)})


def coaction_from_tuple(A: Registry, H: EnAlgebra, tup: ComoduleTuple, closed_form_d=None) -> LinearMap:
    """rho(a) = sum over j, P of (-1)^{|P|(|P|+1)/2} phi^j(d_P(a)) (x) (x_P + (-1)^{|P|+j} g x_P)/2.

    ``closed_form_d(pm, a)`` may replace the composed d_P.
    """
    cod = Tensor(A, H)
    field = A.field
    half = field.one / 2
    n = H.n
    full = ((1 << n) - 1) << 1
    dset = closed_form_d or tup.d_set

    def act(key):
        a = A.element(key)
        out = cod.zero()
        for pm in submasks(full):
            dp = dset(pm, a)
            if not dp:
                continue
            size = pm.bit_count()
            base = parity_sign(size * (size + 1) // 2)
            for j in (0, 1):
                v = tup.phi(dp) if j else dp
                common = half * base
                sg = parity_sign(size + j)
                hv = Element(H, {pm: common, pm | 1: common * sg})
                out = out + tensor(v, hv)
        return out

    return LinearMap(A, cod, act, "ρ")


def coaction_by_generators(A: CliffordAlgebra) -> LinearMap:
    """rho extended multiplicatively from rho(G) = G(x)g and rho(X_i) = X_i(x)g + 1(x)x_i."""
    H = A.hopf
    cod = Tensor(A, H)
    one = A.field.one
    gens = {0: Element(cod, {(1, 1): one})}
    for i in range(1, A.n + 1):
        gens[i] = Element(cod, {(1 << i, 1): one, (0, 1 << i): one})

    def act(key):
        out = cod.one()
        for i in elements_of(key):
            out = out * gens[i]
        return out

    return LinearMap(A, cod, act, "ρ-gen")


def canonical_coaction(A: CliffordAlgebra) -> LinearMap:
    """The canonical coaction, evaluated with the closed-form d_P."""
    if A._coaction is None:
        tup = canonical_tuple(A)
        A._coaction = coaction_from_tuple(
            A, A.hopf, tup, closed_form_d=lambda pm, a: d_composite(A, pm, a)
        )
    return A._coaction
