"""Matchings, C-matchings, Kneser stabilizers and local matchability in groups.

A matching from A to B is a bijection f with a + f(a) outside A; a C-matching
replaces the forbidden set A by a superset C.  Existence is a bipartite
matching problem on the edges {(a, b) : a + b not in C}; when no perfect
matching exists the alternating-path cut yields a Hall witness S with
|B \\ U| < |S|, where U = {b : s + b in C for every s in S}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Hashable, Sequence

from .errors import DomainError, ResourceError
from .groups import (
    DEFAULT_MAX_ORDER,
    FiniteAbelianGroup,
    GroupElement,
    GroupSubset,
    Subgroup,
    _same_group,
    subgroups,
    sumset,
)
from .report import VerdictReport, verdict_of


# -- bipartite kernel -------------------------------------------------------

def max_bipartite_matching(left: Sequence[Hashable], adj: dict) -> dict:
    """Augmenting-path maximum matching, deterministic in the given orders.

    At every step a free neighbour is preferred over rerouting an existing
    partner; neighbours are tried in ``adj`` order.
    """
    match_r: dict = {}

    def augment(u, seen: set) -> bool:
        for v in adj[u]:
            if v not in seen and v not in match_r:
                seen.add(v)
                match_r[v] = u
                return True
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                if augment(match_r[v], seen):
                    match_r[v] = u
                    return True
        return False

    for u in left:
        augment(u, set())
    return {u: v for v, u in match_r.items()}


def alternating_reach(root, adj: dict, match_l: dict) -> tuple[list, list]:
    """Left and right vertices reachable from an unmatched ``root`` by alternating paths."""
    match_r = {v: u for u, v in match_l.items()}
    lefts, rights = [root], []
    seen_l, seen_r = {root}, set()
    i = 0
    while i < len(lefts):
        for v in adj[lefts[i]]:
            if v in seen_r:
                continue
            seen_r.add(v)
            rights.append(v)
            u = match_r.get(v)
            if u is not None and u not in seen_l:
                seen_l.add(u)
                lefts.append(u)
        i += 1
    return lefts, rights


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class MatchingMap:
    """A bijection A -> B with every sum a + f(a) outside ``forbidden``."""

    pairs: tuple[tuple[GroupElement, GroupElement], ...]
    domain: GroupSubset
    codomain: GroupSubset
    forbidden: GroupSubset

    def as_dict(self) -> dict[GroupElement, GroupElement]:
        return dict(self.pairs)

    def verify(self) -> bool:
        g = self.domain.group
        firsts = sorted(a for a, _ in self.pairs)
        seconds = sorted(b for _, b in self.pairs)
        if firsts != list(self.domain.elements) or seconds != list(self.codomain.elements):
            return False
        return all(g.add(a, b) not in self.forbidden for a, b in self.pairs)

    def to_json(self) -> list:
        cyc = self.domain.group.is_cyclic_factor
        conv = (lambda e: e[0]) if cyc else list
        return [[conv(a), conv(b)] for a, b in self.pairs]


@dataclass(frozen=True)
class HallWitness:
    """S inside A whose common-partner set U is too large for any matching."""

    S: GroupSubset
    U: GroupSubset
    domain: GroupSubset
    codomain: GroupSubset
    forbidden: GroupSubset

    def verify(self) -> bool:
        g = self.domain.group
        if not len(self.S) or not self.S.issubset(self.domain):
            return False
        expected = [b for b in self.codomain if all(g.add(s, b) in self.forbidden for s in self.S)]
        if list(self.U.elements) != expected:
            return False
        return len(self.codomain) - len(self.U) < len(self.S)

    def to_json(self) -> dict:
        return {"S": self.S.to_list(), "U": self.U.to_list()}


def _check_pair(a: GroupSubset, b: GroupSubset) -> FiniteAbelianGroup:
    g = _same_group(a, b)
    if len(a) != len(b):
        raise DomainError(f"|A|={len(a)} differs from |B|={len(b)}")
    if not len(a):
        raise DomainError("A and B must be non-empty")
    return g


def find_c_matching(a: GroupSubset, b: GroupSubset, c: GroupSubset) -> MatchingMap | HallWitness:
    g = _check_pair(a, b)
    _same_group(a, c)
    if not a.issubset(c):
        raise DomainError(f"A={a} is not contained in C={c}")
    table = g.add_table
    cset = c.index_set
    adj = {u: [v for v in b.indices if table[u][v] not in cset] for u in a.indices}
    m = max_bipartite_matching(a.indices, adj)
    els = g.elements
    if len(m) == len(a):
        pairs = tuple((els[u], els[m[u]]) for u in a.indices)
        out: MatchingMap | HallWitness = MatchingMap(pairs, a, b, c)
    else:
        root = next(u for u in a.indices if u not in m)
        lefts, _ = alternating_reach(root, adj, m)
        s = g.subset_from_indices(lefts)
        u_set = g.subset_from_indices(v for v in b.indices if all(table[x][v] in cset for x in lefts))
        out = HallWitness(s, u_set, a, b, c)
    if not out.verify():
        raise RuntimeError(f"internal error: unsound certificate for A={a}, B={b}, C={c}")
    return out


def find_matching(a: GroupSubset, b: GroupSubset) -> MatchingMap | HallWitness:
    """Matching from A to B, or a Hall witness proving none exists."""
    return find_c_matching(a, b, a)


def matching_exists(a: GroupSubset, b: GroupSubset) -> bool:
    return isinstance(find_matching(a, b), MatchingMap)


# -- Kneser -----------------------------------------------------------------

def kneser_stabilizer(c: GroupSubset) -> Subgroup:
    """The period subgroup {g : g + C = C}.

    Any period maps the first element c0 into C, so only g in C - c0 are tried.
    """
    if not len(c):
        raise DomainError("stabilizer of an empty set")
    g = c.group
    table = g.add_table
    cset = c.index_set
    neg0 = g.neg_table[c.indices[0]]
    periods = []
    for x in c.indices:
        cand = table[x][neg0]
        if all(table[y][cand] in cset for y in c.indices):
            periods.append(cand)
    return Subgroup(g, tuple(g.elements[i] for i in sorted(periods)))


@dataclass(frozen=True)
class KneserRecord:
    C: GroupSubset
    H: Subgroup
    lhs: int
    rhs: int
    holds: bool

    def to_json(self) -> dict:
        return {"C": self.C.to_list(), "H": self.H.to_list(), "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def verify_kneser(a: GroupSubset, b: GroupSubset) -> KneserRecord:
    c = sumset(a, b)
    h = kneser_stabilizer(c)
    lhs, rhs = len(c), len(a) + len(b) - len(h)
    return KneserRecord(c, h, lhs, rhs, lhs >= rhs)


# -- local matchability -----------------------------------------------------

@lru_cache(maxsize=64)
def _proper_subgroups(group: FiniteAbelianGroup, max_order: int) -> tuple[Subgroup, ...]:
    return tuple(h for h in subgroups(group, max_order) if len(h) < group.order)


@dataclass(frozen=True)
class LocalEntry:
    """One triggered subgroup H: H meets B and some coset a + H sits inside A."""

    H: Subgroup
    HB: GroupSubset
    coset_rep: GroupElement
    passed: bool
    assignment: tuple[tuple[GroupElement, GroupElement], ...] = ()  # (b, a_b)
    blocked: GroupSubset | None = None  # T in H∩B with fewer than |T| usable partners
    partners: GroupSubset | None = None

    def to_json(self) -> dict:
        g = self.H.group
        conv = (lambda e: e[0]) if g.is_cyclic_factor else list
        out = {"H": self.H.to_list(), "HB": self.HB.to_list(), "coset_rep": conv(self.coset_rep), "passed": self.passed}
        if self.passed:
            out["assignment"] = [[conv(b), conv(a)] for b, a in self.assignment]
        else:
            out["blocked"] = self.blocked.to_list()
            out["partners"] = self.partners.to_list()
        return out


@dataclass(frozen=True)
class LocalResult:
    holds: bool
    entries: tuple[LocalEntry, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "triggered": [e.to_json() for e in self.entries]}


def is_locally_matched(a: GroupSubset, b: GroupSubset, max_order: int = DEFAULT_MAX_ORDER) -> LocalResult:
    """Check every proper subgroup H with H∩B nonempty and a + H ⊆ A for some a in A.

    Such an H passes when H∩B can be injectively assigned partners a_b in A with
    a_b + b outside A, i.e. the bipartite graph saturates H∩B.
    """
    g = _check_pair(a, b)
    table = g.add_table
    aset = a.index_set
    entries = []
    for h in _proper_subgroups(g, max_order):
        hb = [x for x in b.indices if x in h.index_set]
        if not hb:
            continue
        rep = next((x for x in a.indices if all(table[x][y] in aset for y in h.indices)), None)
        if rep is None:
            continue
        adj = {v: [u for u in a.indices if table[u][v] not in aset] for v in hb}
        m = max_bipartite_matching(hb, adj)
        els = g.elements
        hb_sub = g.subset_from_indices(hb)
        if len(m) == len(hb):
            entries.append(LocalEntry(h, hb_sub, els[rep], True, tuple((els[v], els[m[v]]) for v in hb)))
        else:
            root = next(v for v in hb if v not in m)
            lefts, rights = alternating_reach(root, adj, m)
            entries.append(
                LocalEntry(h, hb_sub, els[rep], False, (), g.subset_from_indices(lefts), g.subset_from_indices(rights))
            )
    return LocalResult(all(e.passed for e in entries), tuple(entries))


# -- matching property ------------------------------------------------------

def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def has_matching_property(group: FiniteAbelianGroup) -> bool:
    """Finite case of the classification: only cyclic groups of prime order qualify."""
    return _is_prime(group.order)


def counterexample_pair(group: FiniteAbelianGroup, max_order: int = DEFAULT_MAX_ORDER) -> tuple[GroupSubset, GroupSubset]:
    """A = H and B = (H \\ {0}) ∪ {g} for the first nontrivial proper H and first g outside H.

    Every b in H \\ {0} sends all of A back into H, so only g is usable and no
    matching exists once |H| >= 2.
    """
    if has_matching_property(group):
        raise DomainError(f"{group} has the matching property; no counterexample exists")
    h = next(s for s in _proper_subgroups(group, max_order) if len(s) > 1)
    gen = next(e for e in group.elements if e not in h)
    b = group.subset([e for e in h if e != group.zero] + [gen])
    return GroupSubset(group, h.elements), b


# -- sweep ------------------------------------------------------------------

def _pairs(group: FiniteAbelianGroup, max_size: int):
    nonzero = group.elements[1:]
    for k in range(1, max_size + 1):
        for a in combinations(group.elements, k):
            for b in combinations(nonzero, k):
                yield GroupSubset(group, a), GroupSubset(group, b)


def count_pairs(group: FiniteAbelianGroup, max_size: int) -> int:
    n = group.order
    return sum(comb(n, k) * comb(n - 1, k) for k in range(1, max_size + 1))


def exhaustive_matchability(
    group: FiniteAbelianGroup,
    max_size: int,
    max_order: int = DEFAULT_MAX_ORDER,
    max_pairs: int = 2_000_000,
    detail: bool = False,
) -> VerdictReport:
    """Sweep every (A, B) with |A| = |B| <= max_size and 0 not in B.

    For each pair records whether a matching exists, whether A is locally
    matched to B, and whether the two agree.
    """
    if group.order > max_order:
        raise ResourceError(f"group order {group.order} exceeds bound {max_order}", max_order)
    total = count_pairs(group, max_size)
    if total > max_pairs:
        raise ResourceError(f"{total} pairs exceed sweep budget {max_pairs}", max_pairs)
    matched = 0
    failures, disagreements, instances = [], [], []
    for a, b in _pairs(group, max_size):
        res = find_matching(a, b)
        ok = isinstance(res, MatchingMap)
        local = is_locally_matched(a, b, max_order).holds
        matched += ok
        if not ok:
            failures.append({"A": a.to_list(), "B": b.to_list(), "witness": res.to_json()})
        if ok != local:
            disagreements.append({"A": a.to_list(), "B": b.to_list(), "matched": ok, "local": local})
        if detail:
            instances.append({"A": a.to_list(), "B": b.to_list(), "matched": ok, "local": local, "agree": ok == local})
    cert = {
        "pairs": total,
        "matched": matched,
        "unmatched": total - matched,
        "failures": failures,
        "disagreements": disagreements,
        "has_matching_property": has_matching_property(group),
    }
    if detail:
        cert["instances"] = instances
    return VerdictReport(
        command="group sweep",
        instance={"group": str(group), "max_size": max_size},
        verdict=verdict_of(not disagreements, "assert"),
        certificate=cert,
    )
