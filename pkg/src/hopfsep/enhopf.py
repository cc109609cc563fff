"""The Hopf algebra E(n).

Generated by g, x_1..x_n with g^2 = 1, x_i^2 = 0, g x_i = -x_i g and
x_i x_j = -x_j x_i.  Basis elements g^j x_P are encoded as bitmasks: bit 0
carries j and bit i (i >= 1) says i is in P.  This is the same encoding as
the Clifford basis X_R with X_0 = G, so E(n) lines up with Cl(1, 0, 0, 0).
"""

from __future__ import annotations

from .linalg import Element, LinearMap, Opposite, Registry, Tensor
from .setcombin import elements_of, parity_sign, s_count_mask, sort_key, submasks


def wedge_sign(p: int, q: int) -> int:
    """Sign of x_P x_Q = +-x_{P u Q} for disjoint P, Q (masks without bit 0)."""
    inv = 0
    while q:
        low = q & -q
        inv += (p & ~((low << 1) - 1)).bit_count()
        q ^= low
    return parity_sign(inv)


def basis_label(key: int, gen: str, unit: str) -> str:
    parts = [unit] if key & 1 else []
    parts += [f"{gen}{i}" for i in elements_of(key >> 1 << 1)]
    return ".".join(parts) if parts else "1"


def parse_basis_label(text: str, gen: str, unit: str, n: int) -> int:
    text = text.strip()
    if text == "1":
        return 0
    key = 0
    parts = text.split(".")
    for pos, tok in enumerate(parts):
        if tok == unit and pos == 0:
            key |= 1
        elif tok.startswith(gen) and tok[len(gen):].isdigit():
            i = int(tok[len(gen):])
            if not 1 <= i <= n or key >> i & 1 or key >> (i + 1):
                raise ValueError(f"bad or unsorted index in basis label {text!r}")
            key |= 1 << i
        else:
            raise ValueError(f"cannot parse basis label {text!r}")
    return key


class EnAlgebra(Registry):
    """E(n) over a coefficient field."""

    def __init__(self, n: int, field):
        if n < 1:
            raise ValueError("E(n) needs n >= 1")
        self.n = n
        self.field = field
        self.unit_key = 0
        self._basis = sorted(range(1 << (n + 1)), key=sort_key)
        self._mul: dict = {}
        self.op = Opposite(self)

    def __repr__(self):
        return f"E({self.n})"

    def basis(self):
        return self._basis

    def sort_key(self, key):
        return sort_key(key)

    def label(self, key):
        return basis_label(key, "x", "g")

    def parse_label(self, text):
        return parse_basis_label(text, "x", "g", self.n)

    @staticmethod
    def key(j: int, P=()) -> int:
        """Basis key of g^j x_P for P an iterable of indices >= 1."""
        m = j & 1
        for i in P:
            m |= 1 << i
        return m

    def mul_basis(self, a, b):
        hit = self._mul.get((a, b))
        if hit is not None:
            return hit
        p, q = a >> 1 << 1, b >> 1 << 1
        if p & q:
            out = {}
        else:
            sign = wedge_sign(p, q)
            if b & 1 and (p.bit_count() & 1):
                sign = -sign
            out = {((a ^ b) & 1) | p | q: sign}
        self._mul[(a, b)] = out
        return out

    # generators
    def g(self) -> Element:
        return self.element(1)

    def x(self, i: int) -> Element:
        if not 1 <= i <= self.n:
            raise ValueError(f"x_{i} outside 1..{self.n}")
        return self.element(1 << i)

    # structure maps
    def comul_basis(self, key) -> dict:
        """Coproduct of a basis element as a dict over pairs of keys."""
        j = key & 1
        p = key >> 1 << 1
        out = {}
        for f in submasks(p):
            jj = (f.bit_count() + j) & 1
            out[(j | f, jj | (p ^ f))] = parity_sign(s_count_mask(f, p))
        return out

    def counit_basis(self, key) -> int:
        return 1 if key >> 1 == 0 else 0

    def antipode_basis(self, key) -> tuple[int, int]:
        """(sign, key) with S(g^j x_P) = sign * g^{j+|P|} x_P."""
        j = key & 1
        size = (key >> 1).bit_count()
        return parity_sign(j * size), ((j + size) & 1) | (key >> 1 << 1)

    def comul_map(self) -> LinearMap:
        tt = Tensor(self, self)
        return LinearMap(self, tt, lambda k: Element(tt, self.comul_basis(k)), "Δ")

    def antipode_map(self) -> LinearMap:
        def act(k):
            s, kk = self.antipode_basis(k)
            return Element(self, {kk: self.field.one * s})

        return LinearMap(self, self, act, "S")


def en_mul(a: Element, b: Element) -> Element:
    return a * b


def en_op_mul(a: Element, b: Element) -> Element:
    """Product in the opposite algebra: b * a computed in E(n)."""
    return b * a


def en_comul(e: Element) -> Element:
    h = e.reg
    tt = Tensor(h, h)
    out: dict = {}
    for k, c in e.coeffs.items():
        for kk, s in h.comul_basis(k).items():
            t = c * s
            out[kk] = out[kk] + t if kk in out else t
    return Element(tt, out)


def en_counit(e: Element):
    h = e.reg
    total = h.field.zero
    for k, c in e.coeffs.items():
        if h.counit_basis(k):
            total = total + c
    return total


def en_antipode(e: Element) -> Element:
    h = e.reg
    out = {}
    for k, c in e.coeffs.items():
        s, kk = h.antipode_basis(k)
        out[kk] = out[kk] + c * s if kk in out else c * s
    return Element(h, out)
