"""Sparse free modules over a coefficient field, tensor products and linear maps.

A registry describes a basis (and, for algebras, the product of basis
vectors).  Tensor registries flatten nested tensors, so the basis keys of
``Tensor(Tensor(A, B), C)`` are plain triples ``(a, b, c)``.
"""

from __future__ import annotations

from typing import Callable, Iterable


class Registry:
    """Base class for basis registries.

    Subclasses provide ``field``, ``basis()``, ``label(key)``,
    ``sort_key(key)`` and, when the registry is an algebra, ``mul_basis`` and
    ``unit_key``.
    """

    field = None
    unit_key = None

    @property
    def factors(self) -> tuple:
        return (self,)

    @property
    def dim(self) -> int:
        return len(self.basis())

    def basis(self) -> list:
        raise NotImplementedError

    def label(self, key) -> str:
        return str(key)

    def sort_key(self, key):
        return key

    def parse_label(self, text: str):
        raise NotImplementedError

    def mul_basis(self, k1, k2) -> dict:
        raise TypeError(f"{self!r} carries no multiplication")

    def element(self, key, coeff=None) -> "Element":
        return Element(self, {key: self.field.one if coeff is None else self.field.convert(coeff)})

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {self.unit_key: self.field.one})


class Opposite(Registry):
    """Same basis as ``base``, product in reversed order."""

    def __init__(self, base: Registry):
        self.base = base
        self.field = base.field
        self.unit_key = base.unit_key

    def basis(self):
        return self.base.basis()

    def label(self, key):
        return self.base.label(key)

    def sort_key(self, key):
        return self.base.sort_key(key)

    def parse_label(self, text):
        return self.base.parse_label(text)

    def mul_basis(self, k1, k2):
        return self.base.mul_basis(k2, k1)

    def __eq__(self, other):
        return isinstance(other, Opposite) and other.base == self.base

    def __hash__(self):
        return hash(("op", id(self.base)))

    def __repr__(self):
        return f"Opposite({self.base!r})"


class Tensor(Registry):
    """Tensor product of registries with componentwise multiplication."""

    def __init__(self, *regs: Registry):
        flat: list[Registry] = []
        for r in regs:
            flat.extend(r.factors)
        if len(flat) < 2:
            raise ValueError("a tensor registry needs at least two factors")
        self._factors = tuple(flat)
        self.field = flat[0].field
        for r in flat[1:]:
            if r.field is not self.field:
                raise ValueError("tensor factors over different fields")
        self._memo: dict = {}
        self._basis = None

    @property
    def factors(self):
        return self._factors

    @property
    def unit_key(self):
        return tuple(r.unit_key for r in self._factors)

    def basis(self):
        if self._basis is None:
            keys = [()]
            for r in self._factors:
                keys = [k + (b,) for k in keys for b in r.basis()]
            self._basis = keys
        return self._basis

    @property
    def dim(self):
        d = 1
        for r in self._factors:
            d *= r.dim
        return d

    def label(self, key):
        return " ⊗ ".join(r.label(k) for r, k in zip(self._factors, key))

    def sort_key(self, key):
        return tuple(r.sort_key(k) for r, k in zip(self._factors, key))

    def parse_label(self, text):
        parts = [p.strip() for p in text.split("⊗")]
        if len(parts) != len(self._factors):
            raise ValueError(f"expected {len(self._factors)} tensor factors in {text!r}")
        return tuple(r.parse_label(p) for r, p in zip(self._factors, parts))

    def mul_basis(self, k1, k2):
        key = (k1, k2)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = {(): 1}
        for r, a, b in zip(self._factors, k1, k2):
            prod = r.mul_basis(a, b)
            new = {}
            for kk, c in out.items():
                for k, v in prod.items():
                    new[kk + (k,)] = c * v
            out = new
            if not out:
                break
        self._memo[key] = out
        return out

    def __eq__(self, other):
        return isinstance(other, Tensor) and other._factors == self._factors

    def __hash__(self):
        return hash(self._factors)

    def __repr__(self):
        return "Tensor(" + ", ".join(map(repr, self._factors)) + ")"


def _same(r1: Registry, r2: Registry) -> bool:
    return r1 is r2 or r1 == r2


class Element:
    """Finite linear combination of basis keys of a registry."""

    __slots__ = ("reg", "coeffs")

    def __init__(self, reg: Registry, coeffs: dict | None = None):
        self.reg = reg
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def _raw(cls, reg, coeffs):
        e = cls.__new__(cls)
        e.reg = reg
        e.coeffs = coeffs
        return e

    def _check(self, other: "Element"):
        if not _same(self.reg, other.reg):
            raise ValueError(f"registry mismatch: {self.reg!r} vs {other.reg!r}")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return Element._raw(self.reg, out)

    def __neg__(self):
        return Element._raw(self.reg, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Element":
        if not c:
            return Element._raw(self.reg, {})
        return Element._raw(self.reg, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        mb = self.reg.mul_basis
        out: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                c = c1 * c2
                for k, v in mb(k1, k2).items():
                    t = c * v
                    if k in out:
                        out[k] = out[k] + t
                    else:
                        out[k] = t
        return Element(self.reg, out)

    def __rmul__(self, c):
        return self.scale(c)

    def __truediv__(self, c):
        return Element(self.reg, {k: v / c for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return _same(self.reg, other.reg) and self.coeffs == other.coeffs

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, key):
        return self.coeffs.get(key, self.reg.field.zero)

    def terms(self) -> list:
        """(key, coefficient) pairs in canonical basis order."""
        sk = self.reg.sort_key
        return sorted(self.coeffs.items(), key=lambda kv: sk(kv[0]))

    def to_json(self) -> list[dict]:
        fmt = self.reg.field.fmt
        return [{"basis": self.reg.label(k), "coeff": fmt(c)} for k, c in self.terms()]

    def __str__(self):
        if not self.coeffs:
            return "0"
        fmt = self.reg.field.fmt
        parts = []
        for k, c in self.terms():
            parts.append(f"({fmt(c)})*{self.reg.label(k)}")
        return " + ".join(parts)

    __repr__ = __str__


def linear_combination(reg: Registry, pairs: Iterable) -> Element:
    """Sum of coeff*basis over (key, coeff) pairs, merging repeated keys."""
    out: dict = {}
    for k, c in pairs:
        if k in out:
            out[k] = out[k] + c
        else:
            out[k] = c
    return Element(reg, out)


def tensor_key(reg: Registry, key) -> tuple:
    return key if isinstance(reg, Tensor) else (key,)


def tensor(e1: Element, e2: Element, *more: Element) -> Element:
    if more:
        return tensor(tensor(e1, e2), *more)
    reg = Tensor(e1.reg, e2.reg)
    out = {}
    for k1, c1 in e1.coeffs.items():
        t1 = tensor_key(e1.reg, k1)
        for k2, c2 in e2.coeffs.items():
            out[t1 + tensor_key(e2.reg, k2)] = c1 * c2
    return Element(reg, out)


def split_key(key: tuple, left: Registry):
    """Split a flat tensor key into the part belonging to ``left`` and the rest."""
    n = len(left.factors)
    a = key[:n] if n > 1 else key[0]
    return a, key[n:]


def _unwrap(reg: Registry, rest: tuple):
    return rest if isinstance(reg, Tensor) else rest[0]


class LinearMap:
    """Linear map given by its action on basis keys; basis images are memoized."""

    def __init__(self, domain: Registry, codomain: Registry, action: Callable, name: str = ""):
        self.domain = domain
        self.codomain = codomain
        self._action = action
        self._memo: dict = {}
        self.name = name

    def on_basis(self, key) -> Element:
        hit = self._memo.get(key)
        if hit is None:
            hit = self._action(key)
            if not isinstance(hit, Element):
                hit = Element(self.codomain, hit)
            elif not _same(hit.reg, self.codomain):
                raise ValueError(f"map {self.name or '?'} produced an element outside its codomain")
            self._memo[key] = hit
        return hit

    def __call__(self, e: Element) -> Element:
        if not _same(e.reg, self.domain):
            raise ValueError(f"registry mismatch applying {self.name or 'map'}")
        out: dict = {}
        for k, c in e.coeffs.items():
            for k2, v in self.on_basis(k).coeffs.items():
                t = c * v
                if k2 in out:
                    out[k2] = out[k2] + t
                else:
                    out[k2] = t
        return Element(self.codomain, out)

    def __repr__(self):
        return f"LinearMap({self.name or '?'})"


def apply(f: LinearMap, e: Element) -> Element:
    return f(e)


def identity(reg: Registry) -> LinearMap:
    return LinearMap(reg, reg, lambda k: reg.element(k), "id")


def zero_map(domain: Registry, codomain: Registry) -> LinearMap:
    return LinearMap(domain, codomain, lambda k: codomain.zero(), "0")


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """f after g."""
    if not _same(g.codomain, f.domain):
        raise ValueError("registry mismatch in composition")
    return LinearMap(g.domain, f.codomain, lambda k: f(g.on_basis(k)), f"{f.name}∘{g.name}")


def map_tensor(f: LinearMap, g: LinearMap) -> LinearMap:
    dom = Tensor(f.domain, g.domain)
    cod = Tensor(f.codomain, g.codomain)

    def act(key):
        a, rest = split_key(key, f.domain)
        return tensor(f.on_basis(a), g.on_basis(_unwrap(g.domain, rest)))

    return LinearMap(dom, cod, act, f"{f.name}⊗{g.name}")
