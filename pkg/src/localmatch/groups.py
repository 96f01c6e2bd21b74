"""Finite abelian groups written as products Z_{d1} x ... x Z_{dk}.

Elements are tuples of residues.  The canonical element order is the
lexicographic order on those tuples, which coincides with the mixed-radix
index used internally (first factor most significant).  Subsets are stored
in that order, so every downstream tie-break is deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ResourceError, StructuralError

GroupElement = tuple[int, ...]

DEFAULT_MAX_ORDER = 512


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(int(d) for d in self.moduli)
        if not mods:
            raise StructuralError("a group needs at least one cyclic factor")
        if any(d < 2 for d in mods):
            raise StructuralError(f"every modulus must be >= 2, got {mods}")
        object.__setattr__(self, "moduli", mods)

    @classmethod
    def cyclic(cls, n: int) -> FiniteAbelianGroup:
        return cls((n,))

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def is_cyclic_factor(self) -> bool:
        return len(self.moduli) == 1

    @property
    def zero(self) -> GroupElement:
        return (0,) * len(self.moduli)

    def __str__(self) -> str:
        return "x".join(f"Z{d}" for d in self.moduli)

    @cached_property
    def elements(self) -> tuple[GroupElement, ...]:
        out: list[GroupElement] = [()]
        for d in self.moduli:
            out = [e + (r,) for e in out for r in range(d)]
        return tuple(out)

    @cached_property
    def _index(self) -> dict[GroupElement, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        idx = self._index
        els = self.elements
        return tuple(
            tuple(idx[self._add(x, y)] for y in els) for x in els
        )

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        idx = self._index
        return tuple(idx[self.neg(x)] for x in self.elements)

    def index(self, x: GroupElement) -> int:
        self.check(x)
        return self._index[x]

    def check(self, x: GroupElement) -> None:
        if len(x) != len(self.moduli):
            raise StructuralError(f"element {x} has {len(x)} coordinates, group {self} has {self.rank}")
        if any(not 0 <= c < d for c, d in zip(x, self.moduli)):
            raise StructuralError(f"element {x} is not reduced for {self}")

    def element(self, coords: int | Sequence[int]) -> GroupElement:
        """Reduce raw coordinates (or a bare int for cyclic groups) to an element."""
        if isinstance(coords, int):
            coords = (coords,)
        if len(coords) != len(self.moduli):
            raise StructuralError(f"{tuple(coords)} has {len(coords)} coordinates, group {self} has {self.rank}")
        return tuple(c % d for c, d in zip(coords, self.moduli))

    def _add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.moduli))

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self.check(x)
        self.check(y)
        return self._add(x, y)

    def neg(self, x: GroupElement) -> GroupElement:
        return tuple((-a) % d for a, d in zip(x, self.moduli))

    def subset(self, elements: Iterable) -> GroupSubset:
        els = []
        for e in elements:
            e = tuple(e) if not isinstance(e, int) else (e,)
            self.check(e)
            els.append(e)
        return GroupSubset(self, tuple(sorted(set(els))))

    def subset_from_indices(self, indices: Iterable[int]) -> GroupSubset:
        els = self.elements
        return GroupSubset(self, tuple(els[i] for i in sorted(set(indices))))

    def whole(self) -> GroupSubset:
        return GroupSubset(self, self.elements)


@dataclass(frozen=True, eq=False)
class GroupSubset:
    """A finite subset of a group, canonically ordered and duplicate-free."""

    group: FiniteAbelianGroup
    elements: tuple[GroupElement, ...]
    _indices: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        idx = tuple(self.group.index(e) for e in self.elements)
        if list(idx) != sorted(set(idx)):
            raise StructuralError("subset elements must be sorted and distinct")
        object.__setattr__(self, "_indices", idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupSubset):
            return NotImplemented
        return self.group == other.group and self._indices == other._indices

    def __hash__(self) -> int:
        return hash((self.group, self._indices))

    @property
    def indices(self) -> tuple[int, ...]:
        return self._indices

    @cached_property
    def index_set(self) -> frozenset[int]:
        return frozenset(self._indices)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x) in self.elements

    def issubset(self, other: GroupSubset) -> bool:
        _same_group(self, other)
        return self.index_set <= other.index_set

    def to_list(self) -> list:
        """JSON-friendly form: bare ints for cyclic groups, lists otherwise."""
        if self.group.is_cyclic_factor:
            return [e[0] for e in self.elements]
        return [list(e) for e in self.elements]

    def __str__(self) -> str:
        if self.group.is_cyclic_factor:
            return "{" + ",".join(str(e[0]) for e in self.elements) + "}"
        return "{" + ",".join("(" + ",".join(map(str, e)) + ")" for e in self.elements) + "}"


class Subgroup(GroupSubset):
    """A subset verified to contain 0 and be closed under + and negation."""

    @classmethod
    def from_subset(cls, s: GroupSubset) -> Subgroup:
        g = s.group
        idx = s.index_set
        table = g.add_table
        if 0 not in idx or any(table[a][b] not in idx for a in idx for b in idx):
            raise DomainError(f"{s} is not a subgroup of {g}")
        if any(g.neg_table[a] not in idx for a in idx):
            raise DomainError(f"{s} is not closed under negation")
        return cls(g, s.elements)


def _same_group(*subsets: GroupSubset) -> FiniteAbelianGroup:
    g = subsets[0].group
    for s in subsets[1:]:
        if s.group != g:
            raise StructuralError(f"subsets live in different groups ({g} vs {s.group})")
    return g


def add(group: FiniteAbelianGroup, x: GroupElement, y: GroupElement) -> GroupElement:
    return group.add(x, y)


def sumset(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    g = _same_group(a, b)
    if not len(a) or not len(b):
        raise DomainError("sumset of an empty subset")
    table = g.add_table
    return g.subset_from_indices({table[i][j] for i in a.indices for j in b.indices})


def translate(s: GroupSubset, x: GroupElement) -> GroupSubset:
    g = s.group
    row = g.add_table[g.index(x)]
    return g.subset_from_indices(row[i] for i in s.indices)


def _closure_with(group: FiniteAbelianGroup, base: frozenset[int], gen: int) -> frozenset[int]:
    table = group.add_table
    multiples = {0}
    cur = gen
    while cur not in multiples:
        multiples.add(cur)
        cur = table[cur][gen]
    return frozenset(table[h][m] for h in base for m in multiples)


def subgroups(group: FiniteAbelianGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (order, elements).

    Generate-and-close: each subgroup H spawns H + <g> for every g outside H,
    so every finitely generated subgroup is reached from {0}.
    """
    if group.order > max_order:
        raise ResourceError(f"group order {group.order} exceeds subgroup enumeration bound {max_order}", max_order)
    start = frozenset({0})
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for g in range(group.order):
                if g in h:
                    continue
                k = _closure_with(group, h, g)
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        frontier = nxt
    subs = [Subgroup.from_subset(group.subset_from_indices(h)) for h in seen]
    subs.sort(key=lambda s: (len(s), s.indices))
    return subs


def is_generator(group: FiniteAbelianGroup, g: GroupElement | int) -> bool:
    if not group.is_cyclic_factor:
        raise DomainError(f"is_generator needs a cyclic group, got {group}")
    x = g if isinstance(g, int) else g[0]
    return gcd(x % group.order, group.order) == 1


def generators(group: FiniteAbelianGroup) -> GroupSubset:
    return group.subset(e for e in group.elements if is_generator(group, e))


_GROUP_RE = re.compile(r"Z(\d+)")


def parse_group(text: str) -> FiniteAbelianGroup:
    """Parse ``Z4`` or ``Z2xZ4``; errors carry the character position."""
    s = text.strip()
    moduli = []
    pos = 0
    while True:
        m = _GROUP_RE.match(s, pos)
        if not m:
            raise ValueError(f"group {text!r}: expected 'Z<n>' at position {pos}")
        moduli.append(int(m.group(1)))
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] not in "xX":
            raise ValueError(f"group {text!r}: expected 'x' at position {pos}")
        pos += 1
    try:
        return FiniteAbelianGroup(tuple(moduli))
    except StructuralError as e:
        raise ValueError(f"group {text!r}: {e}") from None


def parse_subset(group: FiniteAbelianGroup, text: str) -> GroupSubset:
    """Parse ``{0,2}``, ``0,2`` (cyclic only) or ``{(0,1),(1,0)}``."""
    s = text.strip()
    if s.startswith("{"):
        if not s.endswith("}"):
            raise ValueError(f"subset {text!r}: missing '}}' at position {len(s)}")
        s = s[1:-1]
    s = s.strip()
    if not s:
        return GroupSubset(group, ())
    elements = []
    if "(" in s:
        leftover = re.sub(r"\([^()]*\)", "", s)
        if leftover.replace(",", "").strip():
            bad = next(i for i, ch in enumerate(leftover) if ch not in ", ")
            raise ValueError(f"subset {text!r}: unexpected {leftover[bad]!r} outside tuples")
        for m in re.finditer(r"\(([^()]*)\)", s):
            try:
                elements.append(tuple(int(c) for c in m.group(1).split(",")))
            except ValueError:
                raise ValueError(f"subset {text!r}: bad tuple at position {m.start()}") from None
    else:
        if not group.is_cyclic_factor:
            raise ValueError(f"subset {text!r}: bare integers need a cyclic group, use tuples for {group}")
        pos = 0
        for tok in s.split(","):
            try:
                elements.append((int(tok),))
            except ValueError:
                raise ValueError(f"subset {text!r}: expected integer at position {pos}") from None
            pos += len(tok) + 1
    for e in elements:
        if len(e) == group.rank and any(not 0 <= c < d for c, d in zip(e, group.moduli)):
            raise ValueError(f"subset {text!r}: coordinate out of range in {e} for {group}")
    try:
        return group.subset(group.element(e) for e in elements)
    except StructuralError as e:
        raise ValueError(f"subset {text!r}: {e}") from None


def product_forms(max_order: int, min_order: int = 2) -> list[FiniteAbelianGroup]:
    """All groups Z_{d1} x ... x Z_{dk} with d1 <= ... <= dk and order in range."""
    out = []

    def rec(prefix: tuple[int, ...], lo: int, acc: int):
        if prefix and acc >= min_order:
            out.append(FiniteAbelianGroup(prefix))
        for d in range(lo, max_order // acc + 1):
            rec(prefix + (d,), d, acc * d)

    rec((), 2, 1)
    out.sort(key=lambda g: (g.order, g.moduli))
    return out
