"""Matched bases and subspaces in GF(p^n)/GF(p).

A basis (a_i) of A is matched to a basis (b_i) of B when every b in B with
a_i b in A lies in the hyperplane spanned by the other b_j.  Writing
V_i = a_i^-1 A ∩ B, such a (b_i) exists iff dim ⋂_{i∈J} V_i <= n - |J| for all
J; it is built as the dual basis of a free transversal of (V_i^perp).

Quantifiers over "every basis of A" run over linearly independent sets of
projective points: a^-1 A does not change when a is scaled, and the criterion
only sees the unordered set {a_i}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import gfp
from .config import DEFAULT, Budgets
from .errors import DomainError, ResourceError
from .field import (
    FieldExt,
    Subspace,
    _same_ext,
    complement,
    divisors,
    format_elem,
    generated_subfield,
    intersect,
    intersect_all,
    orthogonal,
    annihilator,
    DualFunctional,
    proper_subfields,
    scale,
    scale_inv,
    subspaces,
    subspaces_of,
)
from .gfp import Rows, Vec
from .report import VerdictReport, verdict_of


def _subsets(k: int):
    """Nonempty subsets of range(k) by size, then lexicographically."""
    for r in range(1, k + 1):
        yield from combinations(range(k), r)


def _check_basis(a_basis: Sequence, a: Subspace) -> list[Vec]:
    ext = a.ext
    vecs = [ext.vec(x) for x in a_basis]
    if len(vecs) != a.dim or gfp.rank(vecs, ext.p) != a.dim:
        raise DomainError(f"{len(vecs)} vectors of rank {gfp.rank(vecs, ext.p) if vecs else 0} do not form a basis of a {a.dim}-dimensional space")
    if any(v not in a for v in vecs):
        raise DomainError("basis vector outside A")
    return vecs


def _budget_points(v: Subspace, budgets: Budgets, what: str) -> None:
    if v.ext.q > budgets.max_field_size or v.dim > budgets.max_space_dim:
        raise ResourceError(
            f"{what}: field size {v.ext.q} / dimension {v.dim} exceeds budget "
            f"({budgets.max_field_size}, {budgets.max_space_dim})",
            budgets.max_field_size,
        )


def quotient_spaces(a_vectors: Sequence[Vec], a: Subspace, b: Subspace) -> list[Subspace]:
    """V_i = a_i^-1 A ∩ B for each a_i."""
    return [intersect(scale_inv(x, a), b) for x in a_vectors]


# -- dimension criterion for bases -----------------------------------------


def basis_matchable(a_basis: Sequence, a: Subspace, b: Subspace) -> tuple[bool, tuple[int, ...] | None]:
    """(True, None) if the basis can be matched to a basis of B, else (False, J) with 1-based J."""
    _same_ext(a, b)
    if a.dim != b.dim or not a.dim:
        raise DomainError(f"dim A = {a.dim} and dim B = {b.dim} must be equal and positive")
    vecs = _check_basis(a_basis, a)
    n = a.dim
    vs = quotient_spaces(vecs, a, b)
    for j in _subsets(n):
        if intersect_all([vs[i] for i in j], b).dim > n - len(j):
            return False, tuple(i + 1 for i in j)
    return True, None


# -- free transversals ------------------------------------------------------


def _transversal_rows(families: Sequence[Rows], n: int, p: int) -> list[Vec] | None:
    """Backtracking over projective points in canonical order.

    The remaining search only depends on the depth and the span of what has
    been chosen, so failed (depth, span) states are memoized.
    """
    pts = [gfp.projective_points(f, n, p) for f in families]
    dead: set[tuple[int, Rows]] = set()
    chosen: list[Vec] = []

    def rec(i: int, cur: Rows) -> bool:
        if i == len(families):
            return True
        if (i, cur) in dead:
            return False
        if any(gfp.is_subspace(families[j], cur, p) for j in range(i, len(families))):
            dead.add((i, cur))
            return False
        for x in pts[i]:
            if gfp.in_span(x, cur, p):
                continue
            chosen.append(x)
            if rec(i + 1, gfp.rref(cur + (x,), p)):
                return True
            chosen.pop()
        dead.add((i, cur))
        return False

    return list(chosen) if rec(0, ()) else None


def rado_violation(families: Sequence[Rows], p: int) -> tuple[int, ...] | None:
    """First J (by size, then lexicographic; 1-based) with dim(sum E_i) < |J|, or None."""
    for j in _subsets(len(families)):
        if gfp.rank([r for i in j for r in families[i]], p) < len(j):
            return tuple(i + 1 for i in j)
    return None


@dataclass(frozen=True)
class TransversalCertificate:
    family: tuple[Subspace, ...]
    transversal: tuple[Vec, ...] | None = None
    violation: tuple[int, ...] | None = None

    @property
    def exists(self) -> bool:
        return self.transversal is not None

    def verify(self) -> bool:
        if (self.transversal is None) == (self.violation is None):
            return False
        if self.transversal is not None:
            if len(self.transversal) != len(self.family):
                return False
            if not self.family:
                return True
            p = self.family[0].ext.p
            return all(x in e for x, e in zip(self.transversal, self.family)) and gfp.rank(self.transversal, p) == len(self.family)
        p = self.family[0].ext.p
        rows = [r for i in self.violation for r in self.family[i - 1].basis]
        return gfp.rank(rows, p) < len(self.violation)

    def to_json(self) -> dict:
        if self.transversal is not None:
            return {"transversal": [list(x) for x in self.transversal]}
        return {"violation": list(self.violation)}


def free_transversal(family: Sequence[Subspace]) -> TransversalCertificate:
    """Independent x_i in E_i, or a set J with dim(sum_{i in J} E_i) < |J|."""
    family = tuple(family)
    if not family:
        return TransversalCertificate((), ())
    ext = _same_ext(*family)
    rows = [e.basis for e in family]
    xs = _transversal_rows(rows, ext.n, ext.p)
    if xs is not None:
        cert = TransversalCertificate(family, tuple(xs))
    else:
        j = rado_violation(rows, ext.p)
        if j is None:
            raise RuntimeError("internal error: no transversal found yet the dimension condition holds")
        cert = TransversalCertificate(family, violation=j)
    if not cert.verify():
        raise RuntimeError("internal error: unsound transversal certificate")
    return cert


class PreconditionError(DomainError):
    def __init__(self, message: str, J: tuple[int, ...]):
        super().__init__(message)
        self.J = J


def intersection_violation(family: Sequence[Subspace], within: Subspace) -> tuple[int, ...] | None:
    """First J (1-based) with dim ⋂_{i∈J} E_i > dim E - |J|."""
    n = within.dim
    for j in _subsets(len(family)):
        if intersect_all([family[i] for i in j], within).dim > n - len(j):
            return tuple(i + 1 for i in j)
    return None


def extend_family(family: Sequence[Subspace], within: Subspace) -> list[Subspace]:
    """Enlarge each E_i to Ẽ_i with dim ⋂_{i∈J} Ẽ_i = n - |J| for every J.

    Take a free transversal (phi_i) of the orthogonals E_i^perp in E^*, then
    Ẽ_i = ker phi_i.
    """
    family = list(family)
    if not family:
        return []
    ext = _same_ext(within, *family)
    if any(not e <= within for e in family):
        raise DomainError("family member not contained in the ambient space")
    bad = intersection_violation(family, within)
    if bad is not None:
        raise PreconditionError(f"dim of the intersection over J={set(bad)} exceeds n-|J|", bad)
    n = within.dim
    duals = [gfp.rref([f.coords for f in orthogonal(e, within)], ext.p) for e in family]
    phis = _transversal_rows(duals, n, ext.p)
    if phis is None:
        raise RuntimeError("internal error: dual family has no free transversal")
    return [annihilator([DualFunctional(phi)], within) for phi in phis]


# -- matched bases ----------------------------------------------------------


@dataclass(frozen=True)
class BasisMatching:
    a_basis: tuple[Vec, ...]
    b_basis: tuple[Vec, ...]
    A: Subspace
    B: Subspace

    def verify(self) -> bool:
        """a_i^-1 A ∩ B ⊆ span(b_basis minus b_i) for every i, by linear algebra."""
        ext = self.A.ext
        n = self.A.dim
        if len(self.b_basis) != n or gfp.rank(self.b_basis, ext.p) != n or any(b not in self.B for b in self.b_basis):
            return False
        for i, v in enumerate(quotient_spaces(self.a_basis, self.A, self.B)):
            hyper = Subspace.span(ext, [b for j, b in enumerate(self.b_basis) if j != i])
            if not v <= hyper:
                return False
        return True

    def to_json(self) -> dict:
        ext = self.A.ext
        return {
            "a_basis": [format_elem(ext, x) for x in self.a_basis],
            "b_basis": [format_elem(ext, x) for x in self.b_basis],
        }


@dataclass(frozen=True)
class BasisViolation:
    J: tuple[int, ...]

    def to_json(self) -> dict:
        return {"violating_J": list(self.J)}


def find_matched_basis(a_basis: Sequence, a: Subspace, b: Subspace) -> BasisMatching | BasisViolation:
    ok, j = basis_matchable(a_basis, a, b)
    if not ok:
        return BasisViolation(j)
    ext = a.ext
    vecs = _check_basis(a_basis, a)
    n = b.dim
    vs = quotient_spaces(vecs, a, b)
    duals = [gfp.rref([f.coords for f in orthogonal(v, b)], ext.p) for v in vs]
    phis = _transversal_rows(duals, n, ext.p)
    if phis is None:
        raise RuntimeError("internal error: criterion holds but no dual transversal exists")
    inv = gfp.solve_inverse(phis, ext.p)
    # column j of Phi^-1 holds the B-coordinates of b_j, so phi_i(b_j) = delta_ij
    b_vecs = tuple(b.combine([inv[r][col] for r in range(n)]) for col in range(n))
    out = BasisMatching(tuple(vecs), b_vecs, a, b)
    if not out.verify():
        raise RuntimeError("internal error: constructed basis fails the matched-basis condition")
    return out


def independent_point_sets(v: Subspace, sizes: Sequence[int] | None = None):
    """Linearly independent sets of projective points of v (bases of subspaces, up to scaling)."""
    pts = v.points()
    p = v.ext.p
    sizes = range(1, v.dim + 1) if sizes is None else sizes
    for k in sizes:
        for combo in combinations(pts, k):
            if gfp.rank(combo, p) == k:
                yield combo


@dataclass(frozen=True)
class SpaceMatchResult:
    holds: bool
    failing: tuple[Vec, ...] | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self, ext: FieldExt) -> dict:
        out: dict = {"holds": self.holds, "checked": self.checked}
        if self.failing is not None:
            out["failing_S"] = [format_elem(ext, x) for x in self.failing]
        return out


def space_matched(a: Subspace, b: Subspace, budgets: Budgets = DEFAULT) -> SpaceMatchResult:
    """Is every basis of A matchable to a basis of B?

    Depth-first over independent point sets S of A carrying ⋂_{a∈S}(a^-1 A ∩ B);
    once that intersection is {0} no extension of S can fail.
    """
    ext = _same_ext(a, b)
    if a.dim != b.dim or not a.dim:
        raise DomainError(f"dim A = {a.dim} and dim B = {b.dim} must be equal and positive")
    _budget_points(a, budgets, "space_matched")
    n = a.dim
    p = ext.p
    pts = a.points()
    quot = {x: intersect(scale_inv(x, a), b) for x in pts}
    checked = 0
    failing = None

    def rec(start: int, chosen: list[Vec], span_rows: Rows, inter: Subspace) -> bool:
        nonlocal checked, failing
        for idx in range(start, len(pts)):
            x = pts[idx]
            if gfp.in_span(x, span_rows, p):
                continue
            new_inter = intersect(inter, quot[x])
            checked += 1
            chosen.append(x)
            if new_inter.dim > n - len(chosen):
                failing = tuple(chosen)
                return False
            if new_inter.dim and len(chosen) < n:
                if not rec(idx + 1, chosen, gfp.rref(span_rows + (x,), p), new_inter):
                    return False
            chosen.pop()
        return True

    ok = rec(0, [], (), b)
    return SpaceMatchResult(ok, failing, checked)


# -- A-matched subspaces ----------------------------------------------------


def _complement_transversal(points: Sequence[Vec], avoid: Sequence[Subspace], p: int) -> list[Vec] | None:
    """Independent b_1..b_m (projective points) with b_i outside avoid[i]."""
    dead: set[tuple[int, Rows]] = set()
    chosen: list[Vec] = []

    def rec(i: int, cur: Rows) -> bool:
        if i == len(avoid):
            return True
        if (i, cur) in dead:
            return False
        for x in points:
            if x in avoid[i] or gfp.in_span(x, cur, p):
                continue
            chosen.append(x)
            if rec(i + 1, gfp.rref(cur + (x,), p)):
                return True
            chosen.pop()
        dead.add((i, cur))
        return False

    return list(chosen) if rec(0, ()) else None


@dataclass(frozen=True)
class AMatchResult:
    holds: bool
    failing_basis: tuple[Vec, ...] | None = None
    bases_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def is_A_matched(a_til: Subspace, b_til: Subspace, a: Subspace, budgets: Budgets = DEFAULT) -> AMatchResult:
    """Does every basis (a_i) of Ã admit a basis (b_i) of B̃ with a_i b_i outside A?

    Decided per basis (up to scaling and order): the dual-transversal criterion
    dim ⋂_{i∈J}(a_i^-1 A ∩ B̃) <= m - |J| is sufficient; when it fails the
    weaker condition b_i ∉ a_i^-1 A is searched for directly.
    """
    ext = _same_ext(a_til, b_til, a)
    if not a_til <= a:
        raise DomainError("Ã is not contained in A")
    if a_til.dim != b_til.dim:
        raise DomainError(f"dim Ã = {a_til.dim} differs from dim B̃ = {b_til.dim}")
    m = a_til.dim
    if not m:
        return AMatchResult(True)
    _budget_points(a_til, budgets, "is_A_matched")
    b_pts = b_til.points()
    checked = 0
    for basis in independent_point_sets(a_til, [m]):
        checked += 1
        avoid = [intersect(scale_inv(x, a), b_til) for x in basis]
        if all(intersect_all([avoid[i] for i in j], b_til).dim <= m - len(j) for j in _subsets(m)):
            continue
        if _complement_transversal(b_pts, avoid, ext.p) is None:
            return AMatchResult(False, tuple(basis), checked)
    return AMatchResult(True, None, checked)


def compute_Ab(a: Subspace, b) -> Subspace:
    """A_b = {x in A : x b in A} = A ∩ b^-1 A."""
    return intersect(a, scale_inv(b, a))


# -- local matchability -----------------------------------------------------


@dataclass(frozen=True)
class LinearLocalEntry:
    degree: int  # H = GF(p^degree)
    HB: Subspace
    coset_rep: Vec
    criterion: bool
    passed: bool
    witness: Subspace | None = None
    method: str = ""

    def to_json(self) -> dict:
        ext = self.HB.ext
        out = {
            "subfield_degree": self.degree,
            "HB": [format_elem(ext, x) for x in self.HB.basis],
            "coset_rep": format_elem(ext, self.coset_rep),
            "criterion": self.criterion,
            "passed": self.passed,
            "method": self.method,
        }
        if self.witness is not None:
            out["A_tilde"] = [format_elem(ext, x) for x in self.witness.basis]
        return out


@dataclass(frozen=True)
class LinearLocalResult:
    holds: bool
    entries: tuple[LinearLocalEntry, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "triggered": [e.to_json() for e in self.entries]}


def family_criterion(family: Sequence[Subspace], a: Subspace) -> bool:
    """dim ⋂_{i∈J} A_{b_i} <= n - |J| for every J."""
    return intersection_violation(family, a) is None


def construct_a_tilde(a: Subspace, hb: Subspace) -> Subspace:
    """Complement in A of ⋂ Ẽ_i, where (Ẽ_i) extends the family (A_{b_i}) over HB's echelon basis."""
    family = [compute_Ab(a, b) for b in hb.basis]
    tilde = extend_family(family, a)
    core = intersect_all(tilde, a)
    return complement(core, a)


def is_locally_matched_linear(a: Subspace, b: Subspace, budgets: Budgets = DEFAULT) -> LinearLocalResult:
    """Check every proper subfield H with H∩B ≠ {0} and aH ⊆ A for some a in A.

    Such an H passes when some Ã ⊆ A is A-matched to H∩B.  The candidate Ã
    from the extension construction is tried first; if the criterion fails or
    the candidate does not verify, every Ã of the right dimension is searched.
    """
    ext = _same_ext(a, b)
    if a.dim != b.dim or not a.dim:
        raise DomainError(f"dim A = {a.dim} and dim B = {b.dim} must be equal and positive")
    _budget_points(a, budgets, "is_locally_matched_linear")
    entries = []
    for d, h in proper_subfields(ext):
        hb = intersect(h, b)
        if not hb.dim:
            continue
        rep = next((x for x in a.points() if scale(x, h) <= a), None)
        if rep is None:
            continue
        m = hb.dim
        family = [compute_Ab(a, y) for y in hb.basis]
        crit = family_criterion(family, a)
        witness, method = None, ""
        if crit:
            cand = construct_a_tilde(a, hb)
            if cand.dim == m and is_A_matched(cand, hb, a, budgets).holds:
                witness, method = cand, "construction"
        if witness is None:
            count = gfp.subspace_count(a.dim, m, ext.p)
            if count > budgets.max_subspace_search:
                raise ResourceError(f"{count} candidate subspaces exceed search budget {budgets.max_subspace_search}", budgets.max_subspace_search)
            for cand in subspaces_of(a, m):
                if is_A_matched(cand, hb, a, budgets).holds:
                    witness, method = cand, "search"
                    break
        entries.append(LinearLocalEntry(d, hb, rep, crit, witness is not None, witness, method or "none"))
    return LinearLocalResult(all(e.passed for e in entries), tuple(entries))


def local_counterexample(ext: FieldExt, d: int | None = None) -> tuple[Subspace, Subspace]:
    """A = H for a proper subfield H ≠ GF(p), B = W ⊕ <x> with W the canonical complement of GF(p) in H.

    x is t when t lies outside H, else the first point outside H.  Then
    dim B = dim A, 1 ∉ B, and H∩B ⊇ W ≠ {0}.
    """
    from .field import subfield

    if d is None:
        cands = [dd for dd in divisors(ext.n) if 1 < dd < ext.n]
        if not cands:
            raise DomainError(f"{ext} has no intermediate field strictly between GF(p) and L")
        d = cands[0]
    h = subfield(ext, d)
    k = subfield(ext, 1)
    w = complement(k, h)
    # any x outside H keeps 1 out of W ⊕ <x>: 1 = w + cx would put x in H
    x = ext.gen if ext.gen not in h else next(pt for pt in Subspace.whole(ext).points() if pt not in h)
    return h, Subspace.span(ext, w.basis + (x,))


# -- primitive subspaces and n(K,L), m(K,L) ---------------------------------


def is_primitive(b: Subspace, budgets: Budgets = DEFAULT) -> bool:
    """GF(p)(x) = L for every nonzero x in B (checked on projective points)."""
    _budget_points(b, budgets, "is_primitive")
    ext = b.ext
    return all(generated_subfield(ext, x) == ext.n for x in b.points())


@dataclass(frozen=True)
class MNReport:
    ext: FieldExt
    n: int
    nKL: int
    mKL: int
    primitive_witness: Subspace
    identity_holds: bool

    def to_json(self) -> dict:
        return {
            "field": str(self.ext),
            "modulus": list(self.ext.modulus),
            "n": self.n,
            "nKL": self.nKL,
            "mKL": self.mKL,
            "primitive_witness": [format_elem(self.ext, x) for x in self.primitive_witness.basis],
            "identity_holds": self.identity_holds,
        }


def compute_mn(ext: FieldExt, budgets: Budgets = DEFAULT) -> MNReport:
    """n(K,L) = largest proper divisor of n; m(K,L) by exhaustive depth-first search.

    The search grows V one projective point at a time, keeping V ∩ F = {0} for
    every proper subfield F, and visits each intermediate subspace once.
    """
    if ext.n < 2:
        raise DomainError("n(K,L) needs a proper extension (n >= 2)")
    if ext.q > budgets.max_field_size:
        raise ResourceError(f"field size {ext.q} exceeds budget {budgets.max_field_size}", budgets.max_field_size)
    p, n = ext.p, ext.n
    nkl = max(d for d in divisors(n) if d < n)
    forbidden = [h.basis for _, h in proper_subfields(ext)]
    pts = Subspace.whole(ext).points()
    cap = n - nkl
    best: list[Rows] = [()]
    seen: set[Rows] = set()

    def avoids(rows: Rows) -> bool:
        return all(gfp.rank(rows + f, p) == len(rows) + len(f) for f in forbidden)

    def rec(rows: Rows) -> bool:
        if len(rows) > len(best[0]):
            best[0] = rows
            if len(rows) == cap:
                return True
        for x in pts:
            if gfp.in_span(x, rows, p):
                continue
            nxt = gfp.rref(rows + (x,), p)
            if nxt in seen:
                continue
            seen.add(nxt)
            if avoids(nxt) and rec(nxt):
                return True
        return False

    rec(())
    witness = Subspace(ext, best[0])
    mkl = witness.dim
    if not is_primitive(witness, budgets):
        raise RuntimeError("internal error: m(K,L) witness is not primitive")
    return MNReport(ext, n, nkl, mkl, witness, nkl + mkl == n)


def primitive_sweep(ext: FieldExt, dim_budget: int, budgets: Budgets = DEFAULT) -> VerdictReport:
    """Every equal-dimension pair (A, B) with B primitive, dim <= dim_budget, is matched.

    For prime n this also checks 1 ∉ B ⟺ B primitive, so the sweep covers the
    linear matching property of prime-degree extensions.
    """
    if ext.n < 2:
        raise DomainError("needs a proper extension (n >= 2)")
    if ext.q > budgets.max_field_size or dim_budget > budgets.max_space_dim:
        raise ResourceError(f"{ext} with dim budget {dim_budget} exceeds configured budget", budgets.max_field_size)
    total = sum(gfp.subspace_count(ext.n, k, ext.p) for k in range(1, min(dim_budget, ext.n) + 1))
    if total > budgets.max_subspace_search:
        raise ResourceError(f"{total} subspaces exceed search budget {budgets.max_subspace_search}", budgets.max_subspace_search)
    prime_degree = all(ext.n % d for d in range(2, ext.n))
    counts, failures, prim_mismatch = [], [], []
    for k in range(1, min(dim_budget, ext.n) + 1):
        subs = list(subspaces(ext, k))
        prims = [s for s in subs if is_primitive(s, budgets)]
        if prime_degree:
            prim_mismatch += [s.to_str() for s in subs if (ext.one not in s) != (s in prims)]
        pairs = 0
        for bb in prims:
            for aa in subs:
                pairs += 1
                res = space_matched(aa, bb, budgets)
                if not res.holds:
                    failures.append({"A": aa.to_str(), "B": bb.to_str(), "failing_S": [format_elem(ext, x) for x in res.failing]})
        counts.append({"dim": k, "subspaces": len(subs), "primitive": len(prims), "pairs": pairs})
    ok = not failures and not prim_mismatch
    return VerdictReport(
        command="field thm41",
        instance={"field": str(ext), "modulus": list(ext.modulus), "dim_budget": dim_budget},
        verdict=verdict_of(ok, "assert"),
        certificate={"counts": counts, "failures": failures, "prime_degree": prime_degree, "primitive_mismatch": prim_mismatch},
    )
