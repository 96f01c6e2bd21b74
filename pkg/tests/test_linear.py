import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localmatch.config import Budgets
from localmatch.errors import DomainError, ResourceError
from localmatch.field import (
    Subspace,
    intersect,
    intersect_all,
    parse_elem,
    parse_field,
    parse_subspace,
    random_subspace,
    scale_inv,
    span,
    subfield,
    subspace_sum,
    subspaces,
)
from localmatch.linear import (
    BasisMatching,
    BasisViolation,
    PreconditionError,
    basis_matchable,
    compute_Ab,
    compute_mn,
    extend_family,
    find_matched_basis,
    free_transversal,
    is_A_matched,
    is_locally_matched_linear,
    is_primitive,
    local_counterexample,
    space_matched,
    primitive_sweep,
)
from localmatch.oracle import (
    brute_A_matched,
    brute_basis_matchable,
    brute_is_primitive,
    brute_local_matched_linear,
    brute_matched_basis,
    is_matched_basis_pair,
)

GF4 = parse_field("GF(2^2)")
GF8 = parse_field("GF(2^3)")
GF16 = parse_field("GF(2^4)")
GF9 = parse_field("GF(3^2)")


def S(ext, text):
    return parse_subspace(ext, text)


def E(ext, text):
    return parse_elem(ext, text)


W = "t^2+t"  # generator of GF(4) inside GF(16) for t^4+t+1


def test_basis_criterion_examples():
    assert basis_matchable([GF4.one], S(GF4, "<1>"), S(GF4, "<t>")) == (True, None)
    assert basis_matchable([GF4.one], S(GF4, "<1>"), S(GF4, "<1>")) == (False, (1,))
    gf4 = subfield(GF16, 2)
    assert basis_matchable([GF16.one, E(GF16, W)], gf4, gf4) == (False, (1,))


def test_matched_basis_construction():
    res = find_matched_basis([GF4.one], S(GF4, "<1>"), S(GF4, "<t>"))
    assert isinstance(res, BasisMatching) and res.to_json()["b_basis"] == ["t"]
    res = find_matched_basis([E(GF9, "2")], S(GF9, "<1>"), S(GF9, "<t>"))
    assert isinstance(res, BasisMatching) and res.b_basis[0] in S(GF9, "<t>")
    assert GF9.mul(E(GF9, "2"), res.b_basis[0]) not in S(GF9, "<1>")
    res = find_matched_basis([GF4.one], S(GF4, "<1>"), S(GF4, "<1>"))
    assert isinstance(res, BasisViolation) and res.J == (1,)


def test_basis_outside_a_rejected():
    with pytest.raises(DomainError):
        basis_matchable([E(GF4, "t")], S(GF4, "<1>"), S(GF4, "<t>"))


def test_transversal_examples():
    e1, e2 = S(GF4, "<1>"), S(GF4, "<t>")
    assert free_transversal([e1, e2]).transversal == (GF4.one, E(GF4, "t"))
    cert = free_transversal([e1, e1])
    assert not cert.exists and cert.violation == (1, 2)
    cert = free_transversal([Subspace.whole(GF4), e1])
    assert cert.transversal == (E(GF4, "t"), GF4.one)


def _exact_dims(family, within):
    n = within.dim
    return all(
        intersect_all([family[i] for i in j], within).dim == n - len(j)
        for r in range(1, len(family) + 1)
        for j in combinations(range(len(family)), r)
    )


@pytest.mark.parametrize(
    "ext, fam",
    [
        (GF4, ["<1>", "<t>"]),
        (GF4, ["", ""]),
        (GF8, ["<1>", "<t>", "<t^2>"]),
    ],
)
def test_extension_examples(ext, fam):
    family = [S(ext, f) for f in fam]
    whole = Subspace.whole(ext)
    out = extend_family(family, whole)
    assert all(e <= t for e, t in zip(family, out))
    assert _exact_dims(out, whole)
    if fam == ["<1>", "<t>"]:
        assert out == family


def test_extension_precondition():
    with pytest.raises(PreconditionError) as info:
        extend_family([S(GF4, "<1>"), S(GF4, "<1>")], Subspace.whole(GF4))
    assert info.value.J == (1, 2)


def test_space_matched_examples():
    assert space_matched(S(GF4, "<1>"), S(GF4, "<t>")).holds
    gf4 = subfield(GF16, 2)
    res = space_matched(gf4, gf4)
    assert not res.holds and len(res.failing) == 1 and res.failing[0] in gf4
    # x^-1 A ∩ B is all of B, too big to miss a hyperplane
    assert intersect(scale_inv(res.failing[0], gf4), gf4) == gf4
    assert space_matched(S(GF4, "<t>"), S(GF4, "<t>")).holds


def test_a_matched_examples():
    z = Subspace.zero(GF4)
    assert is_A_matched(z, z, S(GF4, "<t>")).holds
    w = S(GF4, "<t>")
    assert is_A_matched(w, w, w).holds
    gf4 = subfield(GF16, 2)
    om = S(GF16, f"<{W}>")
    assert not is_A_matched(om, om, gf4).holds


def test_compute_ab_examples():
    a = S(GF4, "<t>")
    assert compute_Ab(a, GF4.one) == a
    assert compute_Ab(a, E(GF4, "t")).dim == 0
    gf4 = subfield(GF16, 2)
    assert compute_Ab(gf4, E(GF16, W)) == gf4


def test_local_examples():
    w = S(GF4, "<t>")
    assert is_locally_matched_linear(w, w).holds
    gf4 = subfield(GF16, 2)
    cx = span(GF16, [W, "t"])
    res = is_locally_matched_linear(gf4, cx)
    assert not res.holds and res.entries[0].degree == 2
    a = span(GF16, ["1", W, "t"])
    b = span(GF16, [W, "t", "t^3"])
    res = is_locally_matched_linear(a, b)
    assert res.holds
    assert res.entries[0].witness == S(GF16, "<t>")
    assert local_counterexample(GF16) == (gf4, cx)


def test_primitivity_examples():
    assert is_primitive(S(GF4, "<t>"))
    assert not is_primitive(S(GF16, "<1, t>"))
    comp = S(GF16, "<t^2, t^3>")
    assert subspace_sum(comp, subfield(GF16, 2)).dim == 4 and is_primitive(comp)


@pytest.mark.parametrize(
    "p, n, nkl, mkl",
    [(2, 2, 1, 1), (2, 3, 1, 2), (2, 4, 2, 2), (3, 2, 1, 1)],
)
def test_compute_mn(p, n, nkl, mkl):
    from localmatch.field import FieldExt

    rep = compute_mn(FieldExt(p, n))
    assert (rep.nKL, rep.mKL, rep.identity_holds) == (nkl, mkl, True)
    assert is_primitive(rep.primitive_witness) and rep.primitive_witness.dim == mkl


def test_mn_needs_extension():
    with pytest.raises(DomainError):
        compute_mn(parse_field("GF(2)"))


@pytest.mark.parametrize("spec, dim", [("GF(2^2)", 1), ("GF(3^2)", 1), ("GF(2^3)", 2)])
def test_primitive_sweep(spec, dim):
    assert primitive_sweep(parse_field(spec), dim).verdict == "holds"


def test_primitive_sweep_budget():
    with pytest.raises(ResourceError):
        primitive_sweep(parse_field("GF(2^12)"), 2)
    with pytest.raises(ResourceError):
        primitive_sweep(GF16, 3, Budgets(max_space_dim=2))


SMALL = [GF4, GF8, GF16, GF9]


@st.composite
def equal_pairs(draw, max_dim=2):
    ext = draw(st.sampled_from(SMALL))
    rng = random.Random(draw(st.integers(0, 10**6)))
    k = draw(st.integers(1, min(max_dim, ext.n)))
    return ext, random_subspace(ext, rng, dim=k), random_subspace(ext, rng, dim=k)


@given(equal_pairs())
def test_matched_bases_pass_literal_check(data):
    ext, a, b = data
    res = find_matched_basis(list(a.basis), a, b)
    assert isinstance(res, BasisMatching) == brute_basis_matchable(list(a.basis), a, b)
    if isinstance(res, BasisMatching):
        assert is_matched_basis_pair(res.a_basis, res.b_basis, a, b)


@given(equal_pairs())
def test_space_matched_against_brute(data):
    ext, a, b = data
    assert space_matched(a, b).holds == brute_matched_basis(a, b)


@given(equal_pairs())
def test_local_equals_matched_without_one(data):
    ext, a, b = data
    if ext.one in b:
        return
    local = is_locally_matched_linear(a, b).holds
    assert local == space_matched(a, b).holds == brute_local_matched_linear(a, b)


@given(equal_pairs())
def test_a_matched_against_brute(data):
    ext, a, b = data
    for k in range(1, a.dim + 1):
        for at in subspaces(ext, k):
            if at <= a:
                bt = b if b.dim == k else Subspace(ext, b.basis[:k])
                assert is_A_matched(at, bt, a).holds == brute_A_matched(at, bt, a)


@given(equal_pairs(max_dim=1))
def test_primitive_against_brute(data):
    ext, a, b = data
    assert is_primitive(b) == brute_is_primitive(b)


@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_rado_equivalence_on_random_families(ext, seed):
    rng = random.Random(seed)
    fam = [random_subspace(ext, rng, min_dim=0) for _ in range(rng.randint(1, 4))]
    cert = free_transversal(fam)
    assert cert.verify()
    rado = all(
        Subspace.span(ext, [x for i in j for x in fam[i].basis]).dim >= len(j)
        for r in range(1, len(fam) + 1)
        for j in combinations(range(len(fam)), r)
    )
    assert cert.exists == rado
