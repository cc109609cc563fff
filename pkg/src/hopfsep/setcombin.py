"""Subsets of {0, ..., n}, the position-sign counter and perfect matchings.

Subsets are handled internally as integer bitmasks (bit ``i`` set means
``i`` belongs to the set).  :class:`SubsetIndex` wraps a mask together with
its sorted element tuple for the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

N_MAX = 16


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if not 0 <= e <= N_MAX:
            raise ValueError(f"subset element {e} outside [0, {N_MAX}]")
        m |= 1 << e
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def sort_key(mask: int) -> tuple:
    return (popcount(mask), elements_of(mask))


@dataclass(frozen=True)
class SubsetIndex:
    """A finite subset of {0, ..., N_MAX} kept in sorted form."""

    elements: tuple[int, ...]
    mask: int

    @classmethod
    def of(cls, elements: Iterable[int] = ()) -> "SubsetIndex":
        els = tuple(elements)
        if any(b <= a for a, b in zip(els, els[1:])):
            els_sorted = tuple(sorted(set(els)))
            if len(els_sorted) != len(els):
                raise ValueError(f"duplicate elements in {els}")
            els = els_sorted
        return cls(els, mask_of(els))

    @classmethod
    def from_mask(cls, mask: int) -> "SubsetIndex":
        if mask < 0 or mask >> (N_MAX + 1):
            raise ValueError(f"mask {mask} outside the supported range")
        return cls(elements_of(mask), mask)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1) if i >= 0 else False

    def issubset(self, other: "SubsetIndex") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other):
        return SubsetIndex.from_mask(self.mask | other.mask)

    def __and__(self, other):
        return SubsetIndex.from_mask(self.mask & other.mask)

    def __sub__(self, other):
        return SubsetIndex.from_mask(self.mask & ~other.mask)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def _as_mask(s) -> int:
    if isinstance(s, SubsetIndex):
        return s.mask
    if isinstance(s, int):
        return s
    return mask_of(s)


def s_count_mask(f: int, p: int) -> int:
    """Position-sign counter on bitmasks; ``f`` must be a submask of ``p``."""
    if f & ~p:
        raise ValueError("first argument is not a subset of the second")
    total = 0
    r = 0
    while f:
        low = f & -f
        # number of elements of p strictly below this element of f
        total += (p & (low - 1)).bit_count()
        r += 1
        f ^= low
    # sum of 1-based positions minus r(r+1)/2 equals the below-counts minus r(r-1)/2
    return total - r * (r - 1) // 2


def s_count(F, P) -> int:
    """Sum of the 1-based positions in ``P`` of the elements of ``F``, minus r(r+1)/2.

    ``F`` and ``P`` may be SubsetIndex values, masks or iterables of ints.
    Raises ValueError when ``F`` is not contained in ``P``.
    """
    return s_count_mask(_as_mask(F), _as_mask(P))


def parity_sign(k: int) -> int:
    return -1 if k & 1 else 1


def double_factorial_odd(m: int) -> int:
    """(m-1)!! for even m >= 0, the number of perfect matchings of an m-set."""
    out = 1
    for k in range(m - 1, 0, -2):
        out *= k
    return out


@dataclass(frozen=True)
class PerfectMatching:
    """Blocks are sorted pairs, ordered by their larger element."""

    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        last = -1
        for a, b in self.blocks:
            if not a < b:
                raise ValueError(f"block ({a},{b}) not sorted")
            if a in seen or b in seen:
                raise ValueError("blocks overlap")
            if b <= last:
                raise ValueError("blocks not ordered by larger element")
            seen.update((a, b))
            last = b

    @property
    def support(self) -> SubsetIndex:
        return SubsetIndex.of(e for blk in self.blocks for e in blk)

    def one_line(self) -> tuple[int, ...]:
        return tuple(e for blk in self.blocks for e in blk)

    def __str__(self) -> str:
        if not self.blocks:
            return "(empty)"
        return "|".join("{%d,%d}" % blk for blk in self.blocks)


def _matchings_mask(mask: int) -> list[tuple[tuple[int, int], ...]]:
    if mask == 0:
        return [()]
    top = mask.bit_length() - 1
    rest = mask ^ (1 << top)
    out = []
    for i in elements_of(rest):
        for sub in _matchings_mask(rest ^ (1 << i)):
            out.append(sub + ((i, top),))
    return out


def enumerate_matchings(S) -> list[PerfectMatching]:
    """Perfect matchings of ``S``, anchored at max(S) with partners increasing.

    Odd sets have no perfect matchings and give an empty list; the empty set
    gives the single empty matching.
    """
    mask = _as_mask(S)
    if popcount(mask) % 2:
        return []
    return [PerfectMatching(b) for b in _matchings_mask(mask)]


def inversion_sign(seq) -> int:
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return parity_sign(inv)


def matching_sign(m: PerfectMatching) -> int:
    """Sign of the matching, computed two ways that must agree.

    One way is the permutation sign of the concatenated blocks, the other is
    the product of the signs attached to each block relative to the tail of
    the matching starting at that block.
    """
    by_perm = inversion_sign(m.one_line())
    exponent = 0
    tail = 0
    for a, b in reversed(m.blocks):
        tail |= (1 << a) | (1 << b)
        exponent += s_count_mask((1 << a) | (1 << b), tail)
    by_counter = parity_sign(exponent)
    if by_perm != by_counter:
        raise AssertionError(f"sign mismatch for matching {m}")
    return by_perm
