import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localmatch.errors import DomainError
from localmatch.field import (
    FieldExt,
    Subspace,
    annihilator,
    complement,
    default_modulus,
    format_elem,
    generated_subfield,
    intersect,
    orthogonal,
    parse_elem,
    parse_field,
    parse_subspace,
    product_span,
    random_subspace,
    scale,
    scale_inv,
    stabilizer_subfield,
    subfield,
    subspace_sum,
    subspaces,
    verify_linear_kneser,
)
from localmatch.oracle import brute_field_stabilizer, brute_subfield

GF4 = parse_field("GF(4)")
GF8 = parse_field("GF(2^3)")
GF16 = parse_field("GF(2^4)")
GF9 = parse_field("GF(3^2)")


def S(ext, text):
    return parse_subspace(ext, text)


def E(ext, text):
    return parse_elem(ext, text)


@pytest.mark.parametrize(
    "p, n, mod",
    [(2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (2, 4, (1, 1, 0, 0, 1)), (3, 2, (1, 0, 1))],
)
def test_default_modulus(p, n, mod):
    assert default_modulus(p, n) == mod


def test_gf4_arithmetic():
    w = E(GF4, "t")
    assert GF4.mul(w, w) == E(GF4, "t+1")
    assert GF4.inv(w) == E(GF4, "t+1")
    assert GF4.mul(w, GF4.one) == w


def test_zero_has_no_inverse():
    with pytest.raises(DomainError):
        GF4.inv(GF4.zero)


@pytest.mark.parametrize("mod", [(1, 0, 1), (1, 1, 0, 0, 0), (0, 1, 1)])
def test_reducible_modulus_rejected(mod):
    with pytest.raises(DomainError):
        FieldExt(2, len(mod) - 1, mod)


@pytest.mark.parametrize("text", ["GF(6)", "GF(2^0)", "GF(q)", "GF(2^2"])
def test_parse_field_rejects(text):
    with pytest.raises(ValueError):
        parse_field(text)


def test_parse_field_with_modulus():
    ext = parse_field("GF(16)", "1,0,0,1,1")
    assert ext.modulus == (1, 0, 0, 1, 1)


def test_parse_elem_round_trip():
    for x in GF9.elements():
        assert parse_elem(GF9, format_elem(GF9, x)) == x


def test_parse_elem_error_has_position():
    with pytest.raises(ValueError, match="position"):
        parse_elem(GF16, "t^2+?")


def test_subspace_examples():
    assert subspace_sum(S(GF4, "<1>"), S(GF4, "<t>")).dim == 2
    assert intersect(subfield(GF16, 2), S(GF16, "<t>")).dim == 0
    assert product_span(S(GF4, "<t>"), S(GF4, "<t>")) == S(GF4, "<t+1>")
    gf4 = subfield(GF16, 2)
    assert product_span(gf4, gf4) == gf4
    assert scale_inv(E(GF4, "t"), S(GF4, "<t>")) == S(GF4, "<1>")
    with pytest.raises(DomainError):
        scale_inv(GF4.zero, S(GF4, "<1>"))


def test_subfields():
    assert subfield(GF16, 2) == S(GF16, "<1, t^2+t>")
    assert subfield(GF16, 1) == S(GF16, "<1>")
    assert subfield(GF16, 4) == Subspace.whole(GF16)
    for ext in (GF8, GF16, GF9):
        for d in (1, ext.n):
            assert subfield(ext, d) == brute_subfield(ext, d)
    assert subfield(GF16, 2) == brute_subfield(GF16, 2)


def test_generated_subfield():
    assert generated_subfield(GF4, GF4.one) == 1
    assert generated_subfield(GF4, E(GF4, "t")) == 2
    assert generated_subfield(GF16, E(GF16, "t^2+t")) == 2


def test_stabilizer_examples():
    assert stabilizer_subfield(S(GF4, "<t>")) == S(GF4, "<1>")
    gf4 = subfield(GF16, 2)
    assert stabilizer_subfield(gf4) == gf4
    assert stabilizer_subfield(Subspace.whole(GF16)) == Subspace.whole(GF16)


def test_linear_kneser_examples():
    gf4 = subfield(GF16, 2)
    rec = verify_linear_kneser(gf4, gf4)
    assert (rec.lhs, rec.rhs, rec.holds) == (2, 2, True)
    rec = verify_linear_kneser(S(GF8, "<1, t>"), S(GF8, "<1, t>"))
    # the product span is all of GF(8), which stabilizes itself
    assert rec.lhs == 3 and rec.H == Subspace.whole(GF8) and rec.holds


def test_dual_examples():
    b = S(GF16, "<1, t>")
    assert orthogonal(b, b) == []
    assert len(orthogonal(Subspace.zero(GF16), b)) == 2
    first = S(GF16, "<1>")
    fs = orthogonal(first, b)
    assert len(fs) == 1 and fs[0](b, GF16.one) == 0
    assert annihilator(fs, b) == first
    with pytest.raises(DomainError):
        orthogonal(S(GF16, "<t^2>"), b)


FIELDS = [GF4, GF8, GF16, GF9, parse_field("GF(3^3)"), parse_field("GF(5^2)")]


@st.composite
def field_spaces(draw, count=2, min_dim=0):
    ext = draw(st.sampled_from(FIELDS))
    rng = random.Random(draw(st.integers(0, 10**6)))
    return ext, [random_subspace(ext, rng, min_dim=min_dim) for _ in range(count)]


@given(field_spaces())
def test_inclusion_exclusion(data):
    ext, (v, w) = data
    assert subspace_sum(v, w).dim + intersect(v, w).dim == v.dim + w.dim


@given(field_spaces(count=1))
def test_rref_canonical(data):
    ext, (v,) = data
    assert Subspace.span(ext, list(reversed(list(v.vectors())))) == v


@given(field_spaces(min_dim=1), st.integers(0, 10**6))
def test_product_span_independent_of_basis(data, seed):
    ext, (v, w) = data
    rng = random.Random(seed)
    alt = [ext.scale(rng.randrange(1, ext.p), x) for x in w.basis]
    rng.shuffle(alt)
    alt = [ext.add(x, alt[0]) if i else x for i, x in enumerate(alt)]
    assert Subspace.span(ext, alt) == w
    products = [ext.mul(x, y) for x in v.vectors() for y in alt]
    assert Subspace.span(ext, products) == product_span(v, w)


@given(field_spaces(min_dim=1), st.integers(0, 10**6))
def test_scalar_invariance_of_stabilizer(data, seed):
    ext, (v, _) = data
    a = random.Random(seed).choice([x for x in ext.elements() if any(x)])
    assert stabilizer_subfield(scale(a, v)) == stabilizer_subfield(v)


@given(field_spaces(min_dim=1))
def test_stabilizer_against_definition(data):
    ext, (v, _) = data
    assert stabilizer_subfield(v) == brute_field_stabilizer(v)


@given(field_spaces())
def test_orthogonal_dimension(data):
    ext, (c, b) = data
    c = intersect(c, b)
    assert len(orthogonal(c, b)) == b.dim - c.dim
    assert annihilator(orthogonal(c, b), b) == c


@given(field_spaces())
def test_complement_is_direct(data):
    ext, (v, w) = data
    whole = subspace_sum(v, w)
    comp = complement(v, whole)
    assert intersect(comp, v).dim == 0 and subspace_sum(comp, v) == whole


@given(field_spaces(min_dim=1))
def test_linear_kneser_holds(data):
    ext, (a, b) = data
    assert verify_linear_kneser(a, b).holds


def test_subspace_enumeration_counts():
    assert sum(1 for _ in subspaces(GF16, 2)) == 35
    assert sum(1 for _ in subspaces(GF9, 1)) == 4
