"""Exact coefficient fields.

Two fields are provided and the algebra code is written against either:

* :class:`SymbolicField` - rational functions in named parameters, backed by
  sympy's sparse polynomial ring over QQ.  Fractions are kept reduced, with a
  monic denominator.  Denominators are almost always monomials (powers of
  alpha or mu), so that case avoids a polynomial gcd.
* :class:`RationalField` - plain exact rationals (gmpy2 ``mpq``), used after
  random specialization of the parameters.

Both expose ``zero``, ``one``, ``convert``, ``fmt`` and ``parse``.
"""

from __future__ import annotations

import ast
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq
from sympy import QQ
from sympy.polys.rings import PolyRing

from .setcombin import SubsetIndex, elements_of, mask_of

_KIND_ORDER = {"alpha": 0, "beta": 1, "gamma": 2, "lambda": 3, "eta": 4, "mu": 5}


@dataclass(frozen=True)
class ParamName:
    """Name of a free parameter.

    ``kind`` is one of alpha, beta, gamma, lambda, eta, mu.  ``indices`` holds
    the generator index for beta/gamma, the pair (i, j) with i < j for lambda
    and the sorted subset for eta.
    """

    kind: str
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        k, idx = self.kind, tuple(self.indices)
        if k not in _KIND_ORDER:
            raise ValueError(f"unknown parameter kind {k!r}")
        if k in ("alpha", "mu") and idx:
            raise ValueError(f"{k} takes no indices")
        if k in ("beta", "gamma") and (len(idx) != 1 or idx[0] < 1):
            raise ValueError(f"{k} needs one positive index")
        if k == "lambda":
            if len(idx) != 2 or idx[0] == idx[1] or min(idx) < 1:
                raise ValueError("lambda needs two distinct positive indices")
            idx = tuple(sorted(idx))
        if k == "eta":
            if not idx:
                raise ValueError("eta of the empty set is the constant 1, not a parameter")
            if min(idx) < 1:
                raise ValueError("eta indices must be positive")
            idx = tuple(sorted(set(idx)))
        object.__setattr__(self, "indices", idx)

    @property
    def sort_key(self):
        return (_KIND_ORDER[self.kind], len(self.indices), self.indices)

    def __str__(self) -> str:
        if not self.indices:
            return self.kind
        return self.kind + "_" + "_".join(map(str, self.indices))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @classmethod
    def parse(cls, text: str) -> "ParamName":
        m = re.fullmatch(r"(alpha|beta|gamma|lambda|eta|mu)((?:_\d+)*)", text.strip())
        if not m:
            raise ValueError(f"not a parameter name: {text!r}")
        idx = tuple(int(t) for t in m.group(2).split("_")[1:])
        return cls(m.group(1), idx)


def alpha() -> ParamName:
    return ParamName("alpha")


def mu() -> ParamName:
    return ParamName("mu")


def beta(i: int) -> ParamName:
    return ParamName("beta", (i,))


def gamma(i: int) -> ParamName:
    return ParamName("gamma", (i,))


def lam(i: int, j: int) -> ParamName:
    return ParamName("lambda", (i, j))


def eta(subset) -> ParamName:
    if isinstance(subset, int):
        subset = elements_of(subset)
    return ParamName("eta", tuple(subset))


def standard_names(n: int, with_eta: bool = True) -> list[ParamName]:
    """Every parameter that can occur for n generators, in canonical order."""
    names = [alpha()]
    names += [beta(i) for i in range(1, n + 1)]
    names += [gamma(i) for i in range(1, n + 1)]
    names += [lam(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if with_eta:
        names += [eta(elements_of(m << 1)) for m in range(1, 1 << n)]
    names.append(mu())
    return sorted(names)


# ---------------------------------------------------------------- symbolic


class Scalar:
    """Reduced fraction num/den of polynomials in a SymbolicField."""

    __slots__ = ("num", "den", "field")

    def __init__(self, field: "SymbolicField", num, den=None, reduce: bool = True):
        self.field = field
        if den is None:
            self.num, self.den = num, field._one_poly
        elif reduce:
            self.num, self.den = field._reduce(num, den)
        else:
            self.num, self.den = num, den

    # coercion
    def _lift(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError("scalars from different fields")
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq()):
            return self.field.convert(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        one = self.field._one_poly
        if self.den is one and o.den is one:
            return Scalar(self.field, self.num + o.num)
        if self.den == o.den:
            return Scalar(self.field, self.num + o.num, self.den)
        return Scalar(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, -self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if type(other) is int:
            if other == 1:
                return self
            if other == -1:
                return -self
            if other == 0:
                return self.field.zero
            return Scalar(self.field, self.num.mul_ground(other), self.den, reduce=False)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        one = self.field._one_poly
        if self.den is one and o.den is one:
            return Scalar(self.field, self.num * o.num)
        return Scalar(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inversion of zero")
        return Scalar(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        if self.den is self.field._one_poly:
            return Scalar(self.field, self.num**k)
        return Scalar(self.field, self.num**k, self.den**k, reduce=False)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def __str__(self):
        return self.field.fmt(self)

    def __repr__(self):
        return f"Scalar({self.field.fmt(self)})"


class SymbolicField:
    """Field of rational functions over QQ in a fixed, ordered set of parameters."""

    symbolic = True

    def __init__(self, names: Iterable[ParamName]):
        self.names = sorted(set(names))
        if not self.names:
            # sympy rings need at least one generator
            self.names = [alpha()]
        self.ring = PolyRing([str(nm) for nm in self.names], QQ)
        self._index = {nm: i for i, nm in enumerate(self.names)}
        self._one_poly = self.ring.one
        self.zero = Scalar(self, self.ring.zero)
        self.one = Scalar(self, self._one_poly)
        self._gens = {nm: Scalar(self, g) for nm, g in zip(self.names, self.ring.gens)}

    @classmethod
    def for_n(cls, n: int, with_eta: bool = True) -> "SymbolicField":
        return cls(standard_names(n, with_eta))

    def __contains__(self, name: ParamName) -> bool:
        return name in self._index

    def param(self, name: ParamName | str) -> Scalar:
        if isinstance(name, str):
            name = ParamName.parse(name)
        try:
            return self._gens[name]
        except KeyError:
            raise KeyError(f"parameter {name} is not declared in this field") from None

    def convert(self, x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            if x == 1:
                return self.one
            if x == 0:
                return self.zero
        return Scalar(self, self.ring.ground_new(QQ.convert(x) if not isinstance(x, int) else x))

    def _reduce(self, num, den):
        if not den:
            raise ZeroDivisionError("zero denominator")
        one = self._one_poly
        if not num:
            return num, one
        if den.is_ground:
            c = den.LC
            if c != 1:
                num = num.quo_ground(c)
            return num, one
        if len(den) == 1:
            # monomial denominator: strip the common monomial factor
            (dm, dc), = den.items()
            common = list(dm)
            for m in num.itermonoms():
                common = [min(a, b) for a, b in zip(common, m)]
                if not any(common):
                    break
            common = tuple(common)
            if any(common):
                num = num.quo_term((common, QQ.one))
                dm = tuple(a - b for a, b in zip(dm, common))
            if dc != 1:
                num = num.quo_ground(dc)
            if not any(dm):
                return num, one
            return num, self.ring({dm: QQ.one})
        num, den = num.cancel(den)
        c = den.LC
        if c != 1:
            num, den = num.quo_ground(c), den.quo_ground(c)
        if den.is_ground:
            return num, one
        return num, den

    def fmt(self, x: Scalar) -> str:
        num = str(x.num)
        if x.den is self._one_poly or x.den == self._one_poly:
            return num
        den = str(x.den)
        if re.search(r"[-+* ]", num.lstrip("-")):
            num = f"({num})"
        if re.search(r"[-+* ]", den):
            den = f"({den})"
        return f"{num}/{den}"

    def parse(self, text: str) -> Scalar:
        return parse_expression(text, self.param, self.convert)

    def is_zero(self, x) -> bool:
        return not x

    def variables(self, x: Scalar) -> set[ParamName]:
        used = set()
        for poly in (x.num, x.den):
            for m in poly.itermonoms():
                used.update(self.names[i] for i, e in enumerate(m) if e)
        return used


def _eval_poly(poly, names, values: Mapping[ParamName, object], one, convert):
    """Evaluate a ring element with every variable bound in ``values``."""
    total = None
    powers: dict = {}
    for monom, coeff in poly.terms():
        term = convert(Fraction(int(coeff.numerator), int(coeff.denominator)))
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = values[names[i]] ** e
                term = term * powers[key]
        total = term if total is None else total + term
    return convert(0) if total is None else total


def substitute(a: Scalar, bindings: Mapping[ParamName, Scalar], target: SymbolicField | None = None) -> Scalar:
    """Simultaneously replace parameters by scalars, then re-canonicalize.

    Unbound parameters are mapped to themselves in ``target`` (default: the
    field of ``a``).  Raises ZeroDivisionError when a binding sends the
    denominator to zero.
    """
    target = target or a.field
    values = {}
    for nm in a.field.names:
        if nm in bindings:
            values[nm] = target.convert(bindings[nm])
        elif nm in target:
            values[nm] = target.param(nm)
    num = _eval_poly(a.num, a.field.names, values, target.one, target.convert)
    den = _eval_poly(a.den, a.field.names, values, target.one, target.convert)
    if not den:
        raise ZeroDivisionError("binding sends a denominator to zero")
    return num / den


# ---------------------------------------------------------------- rationals


class RationalField:
    """Exact rationals; elements are gmpy2 mpq values."""

    symbolic = False
    zero = mpq(0)
    one = mpq(1)

    def convert(self, x):
        if isinstance(x, Scalar):
            raise TypeError("cannot convert a symbolic scalar without an assignment")
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        return mpq(x)

    def fmt(self, x) -> str:
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def is_zero(self, x) -> bool:
        return not x

    def parse(self, text: str, values: Mapping[ParamName, object] | None = None):
        values = values or {}

        def lookup(name):
            nm = ParamName.parse(name) if isinstance(name, str) else name
            if nm not in values:
                raise KeyError(f"parameter {nm} has no value in rational mode")
            return self.convert(values[nm])

        return parse_expression(text, lookup, self.convert)


QQ_FIELD = RationalField()


def random_assignment(names: Iterable[ParamName], seed: int, attempt: int = 0) -> dict[ParamName, mpq]:
    """Distinct nonzero rationals for every name, deterministic in (seed, attempt)."""
    rng = random.Random(f"hopfsep:{seed}:{attempt}")
    out: dict[ParamName, mpq] = {}
    used = set()
    for nm in sorted(set(names)):
        while True:
            v = mpq(rng.choice([-1, 1]) * rng.randint(1, 97), rng.randint(1, 13))
            if v not in used:
                break
        used.add(v)
        out[nm] = v
    return out


def evaluate(a: Scalar, values: Mapping[ParamName, object]):
    """Evaluate a symbolic scalar at rational values; ZeroDivisionError on a pole."""
    vals = {nm: QQ_FIELD.convert(values[nm]) for nm in a.field.variables(a)}
    names = a.field.names
    full = {nm: vals.get(nm, mpq(0)) for nm in names}
    num = _eval_poly(a.num, names, full, QQ_FIELD.one, QQ_FIELD.convert)
    den = _eval_poly(a.den, names, full, QQ_FIELD.one, QQ_FIELD.convert)
    if not den:
        raise ZeroDivisionError("assignment hits a zero of the denominator")
    return num / den


MAX_RESAMPLES = 32


def specialize_random(a: Scalar, seed: int):
    """Value of ``a`` at a pseudo-random assignment determined by ``seed``.

    Resamples when the assignment is a pole; gives up after MAX_RESAMPLES.
    """
    for attempt in range(MAX_RESAMPLES):
        values = random_assignment(a.field.names, seed, attempt)
        try:
            return evaluate(a, values)
        except ZeroDivisionError:
            continue
    raise RuntimeError(f"no valid assignment found after {MAX_RESAMPLES} resamples")


# ---------------------------------------------------------------- parsing

_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def parse_expression(text: str, lookup: Callable[[str], object], convert: Callable[[int], object]):
    """Parse ``+ - * / ^``, integers, parentheses and parameter names.

    The unicode forms of minus and the middle dot are accepted.  Powers need
    an integer exponent.
    """
    src = text.replace("−", "-").replace("·", "*").replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return convert(node.value)
        if isinstance(node, ast.Name):
            return lookup(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int):
                    raise ValueError("exponents must be integer literals")
                base = ev(node.left)
                k = sign * exp.value
                if k < 0:
                    return convert(1) / (base ** (-k))
                return base**k if k else convert(1)
            lhs, rhs = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return lhs + rhs
            if isinstance(node.op, ast.Sub):
                return lhs - rhs
            if isinstance(node.op, ast.Mult):
                return lhs * rhs
            if not rhs:
                raise ValueError(f"division by zero in {text!r}")
            return lhs / rhs
        raise ValueError(f"unsupported syntax in expression {text!r}")

    try:
        return ev(tree)
    except KeyError as exc:
        raise ValueError(str(exc.args[0]) if exc.args else str(exc)) from None


__all__ = [
    "ParamName", "Scalar", "SymbolicField", "RationalField", "QQ_FIELD",
    "alpha", "beta", "gamma", "lam", "eta", "mu", "standard_names",
    "substitute", "evaluate", "specialize_random", "random_assignment",
    "parse_expression", "SubsetIndex", "mask_of",
]
