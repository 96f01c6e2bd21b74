"""Brute-force reference implementations.

These share only element arithmetic and span membership with the engines in
``matching`` and ``linear``; every decision is made by literal enumeration of
the defining quantifiers.  They are factorially slow by design and refuse to
run past their budgets.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

from . import gfp
from .config import DEFAULT, Budgets
from .errors import ResourceError
from .field import FieldExt, Subspace, divisors
from .groups import FiniteAbelianGroup, GroupSubset


# -- groups -----------------------------------------------------------------

def brute_matching(a: GroupSubset, b: GroupSubset, c: GroupSubset | None = None, budgets: Budgets = DEFAULT) -> bool:
    """Try every bijection A -> B."""
    c = a if c is None else c
    if len(a) > budgets.max_matching_size:
        raise ResourceError(f"|A|={len(a)} exceeds brute-force bound {budgets.max_matching_size}", budgets.max_matching_size)
    g = a.group
    cset = set(c.elements)
    return any(
        all(g.add(x, y) not in cset for x, y in zip(a.elements, perm))
        for perm in permutations(b.elements)
    )


def brute_subgroups(group: FiniteAbelianGroup, max_order: int = 16) -> list[frozenset]:
    """Every subset containing 0 that is closed under addition (finite, so a subgroup)."""
    if group.order > max_order:
        raise ResourceError(f"group order {group.order} exceeds brute subgroup bound {max_order}", max_order)
    zero = group.zero
    rest = [e for e in group.elements if e != zero]
    out = []
    for bits in product((0, 1), repeat=len(rest)):
        s = {zero} | {e for e, keep in zip(rest, bits) if keep}
        if all(group.add(x, y) in s for x in s for y in s):
            out.append(frozenset(s))
    return out


def brute_group_stabilizer(c: GroupSubset) -> frozenset:
    g = c.group
    cs = set(c.elements)
    return frozenset(x for x in g.elements if {g.add(y, x) for y in cs} == cs)


def brute_local_matched(a: GroupSubset, b: GroupSubset, max_order: int = 16) -> bool:
    """Literal local matchability: injective f from H∩B into A with f(b) + b outside A."""
    g = a.group
    aset = set(a.elements)
    for h in brute_subgroups(g, max_order):
        if len(h) == g.order:
            continue
        hb = [x for x in b.elements if x in h]
        if not hb:
            continue
        if not any(all(g.add(x, y) in aset for y in h) for x in a.elements):
            continue
        if not any(
            all(g.add(x, y) not in aset for x, y in zip(img, hb))
            for img in permutations(a.elements, len(hb))
        ):
            return False
    return True


# -- fields -----------------------------------------------------------------

def _check_field_budget(ext: FieldExt, budgets: Budgets) -> None:
    if ext.q > budgets.max_oracle_field_size:
        raise ResourceError(f"field size {ext.q} exceeds oracle bound {budgets.max_oracle_field_size}", budgets.max_oracle_field_size)


def ordered_bases(v: Subspace) -> list[tuple]:
    """Every ordered basis of v, by picking vectors outside the span so far."""
    ext = v.ext
    members = [x for x in v.vectors() if any(x)]
    out = []

    def rec(chosen: list, rows):
        if len(chosen) == v.dim:
            out.append(tuple(chosen))
            return
        for x in members:
            if not gfp.in_span(x, rows, ext.p):
                rec(chosen + [x], gfp.rref(rows + (x,), ext.p))

    rec([], ())
    return out


def is_matched_basis_pair(a_basis, b_basis, a: Subspace, b: Subspace) -> bool:
    """Literal definition: a_i y in A implies y in span(b_basis minus b_i), for every y in B."""
    ext = a.ext
    hyper = [Subspace.span(ext, [y for j, y in enumerate(b_basis) if j != i]) for i in range(len(b_basis))]
    for y in b.vectors():
        for i, x in enumerate(a_basis):
            if ext.mul(x, y) in a and y not in hyper[i]:
                return False
    return True


def _check_basis_budget(a: Subspace, budgets: Budgets) -> None:
    _check_field_budget(a.ext, budgets)
    if a.dim > budgets.max_oracle_basis_dim:
        raise ResourceError(f"dimension {a.dim} exceeds oracle bound {budgets.max_oracle_basis_dim}", budgets.max_oracle_basis_dim)


def brute_basis_matchable(a_basis, a: Subspace, b: Subspace, budgets: Budgets = DEFAULT) -> bool:
    _check_basis_budget(b, budgets)
    a_basis = [a.ext.vec(x) for x in a_basis]
    return any(is_matched_basis_pair(a_basis, bb, a, b) for bb in ordered_bases(b))


def brute_matched_basis(a: Subspace, b: Subspace, budgets: Budgets = DEFAULT) -> bool:
    """A is matched to B: every ordered basis of A matches some ordered basis of B."""
    _check_basis_budget(a, budgets)
    b_bases = ordered_bases(b)
    return all(
        any(is_matched_basis_pair(ab, bb, a, b) for bb in b_bases)
        for ab in ordered_bases(a)
    )


def brute_field_stabilizer(c: Subspace, budgets: Budgets = DEFAULT) -> Subspace:
    """{x in L : x C ⊆ C} as the kernel of x -> (x c_j mod C)_j; checked to be a subfield."""
    ext = c.ext
    _check_field_budget(ext, budgets)
    n, p = ext.n, ext.p
    rows = []
    for e in Subspace.whole(ext).basis:
        img = []
        for cb in c.basis:
            img.extend(gfp.reduce(ext.mul(e, cb), c.basis, p))
        rows.append(img)
    width = len(rows[0]) if rows and rows[0] else 0
    if not width:
        return Subspace.whole(ext)
    kernel = gfp.left_nullspace(rows, n, width, p)
    h = Subspace(ext, kernel)
    if ext.one not in h or any(ext.mul(x, y) not in h for x in h.basis for y in h.basis):
        raise RuntimeError("stabilizer is not a subfield")
    return h


def brute_stabilizer(c, budgets: Budgets = DEFAULT):
    """Elementwise stabilizer of a group subset (frozenset) or a subspace (Subspace)."""
    if isinstance(c, GroupSubset):
        return brute_group_stabilizer(c)
    return brute_field_stabilizer(c, budgets)


def element_degree(ext: FieldExt, x) -> int:
    """dim GF(p)[x], spanned by 1, x, x^2, ..."""
    x = ext.vec(x)
    powers = [ext.one]
    for _ in range(ext.n - 1):
        powers.append(ext.mul(powers[-1], x))
    return gfp.rank(powers, ext.p)


def brute_is_primitive(v: Subspace) -> bool:
    ext = v.ext
    return all(element_degree(ext, x) == ext.n for x in v.vectors() if any(x))


def brute_mKL(ext: FieldExt, budgets: Budgets = DEFAULT) -> int:
    """Largest dimension of a subspace whose nonzero elements all generate L."""
    _check_field_budget(ext, budgets)
    for k in range(ext.n, 0, -1):
        for rows in gfp.echelon_forms(ext.n, k, ext.p):
            if brute_is_primitive(Subspace(ext, rows)):
                return k
    return 0


def brute_subfield(ext: FieldExt, d: int) -> Subspace:
    """GF(p^d) as the set of x with x^(p^d) = x, by enumeration."""
    return Subspace.span(ext, [x for x in ext.elements() if ext.pow(x, ext.p**d) == x])


def _all_subspaces_of(v: Subspace, k: int) -> list[Subspace]:
    seen = {}
    members = [x for x in v.vectors() if any(x)]
    for combo in combinations(members, k):
        s = Subspace.span(v.ext, combo)
        if s.dim == k:
            seen[s.basis] = s
    return [seen[key] for key in sorted(seen)]


def brute_A_matched(a_til: Subspace, b_til: Subspace, a: Subspace) -> bool:
    ext = a.ext
    b_bases = ordered_bases(b_til)
    return all(
        any(all(ext.mul(x, y) not in a for x, y in zip(ab, bb)) for bb in b_bases)
        for ab in ordered_bases(a_til)
    )


def brute_local_matched_linear(a: Subspace, b: Subspace, budgets: Budgets = DEFAULT) -> bool:
    """Literal linear local matchability over every proper subfield."""
    ext = a.ext
    _check_basis_budget(a, budgets)
    for d in divisors(ext.n):
        if d == ext.n:
            continue
        h = brute_subfield(ext, d)
        hb = Subspace.span(ext, [y for y in b.vectors() if y in h])
        if not hb.dim:
            continue
        h_elems = list(h.vectors())
        if not any(all(ext.mul(x, y) in a for y in h_elems) for x in a.vectors() if any(x)):
            continue
        if not any(brute_A_matched(t, hb, a) for t in _all_subspaces_of(a, hb.dim)):
            return False
    return True
