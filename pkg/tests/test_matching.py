import pytest
from hypothesis import given
from hypothesis import strategies as st

from localmatch.errors import DomainError
from localmatch.groups import FiniteAbelianGroup, product_forms
from localmatch.matching import (
    HallWitness,
    MatchingMap,
    counterexample_pair,
    exhaustive_matchability,
    find_c_matching,
    find_matching,
    has_matching_property,
    is_locally_matched,
    kneser_stabilizer,
    verify_kneser,
)
from localmatch.oracle import brute_group_stabilizer, brute_local_matched, brute_matching


def Z(n):
    return FiniteAbelianGroup.cyclic(n)


def sub(g, xs):
    return g.subset([g.element(x) for x in xs])


def test_prime_pair_matches():
    g = Z(5)
    res = find_matching(sub(g, [1, 2]), sub(g, [1, 2]))
    assert isinstance(res, MatchingMap) and res.verify()
    assert res.to_json() == [[1, 2], [2, 1]]


def test_hall_witness_in_z4():
    g = Z(4)
    res = find_matching(sub(g, [0, 2]), sub(g, [1, 2]))
    assert isinstance(res, HallWitness) and res.verify()
    assert res.to_json() == {"S": [0, 2], "U": [2]}


def test_generator_targets_in_z6():
    g = Z(6)
    res = find_matching(sub(g, [0, 3]), sub(g, [1, 5]))
    assert res.to_json() == [[0, 1], [3, 5]]


def test_c_matching_examples():
    g = Z(6)
    blocked = find_c_matching(sub(g, [0]), sub(g, [1]), sub(g, [0, 1]))
    assert isinstance(blocked, HallWitness) and blocked.to_json() == {"S": [0], "U": [1]}
    ok = find_c_matching(sub(g, [0]), sub(g, [2]), sub(g, [0, 1]))
    assert ok.to_json() == [[0, 2]]


def test_size_mismatch_rejected():
    g = Z(5)
    with pytest.raises(DomainError):
        find_matching(sub(g, [1]), sub(g, [1, 2]))


def test_c_must_contain_a():
    g = Z(5)
    with pytest.raises(DomainError):
        find_c_matching(sub(g, [1, 2]), sub(g, [1, 2]), sub(g, [1]))


@pytest.mark.parametrize("n, c, h", [(6, [0, 3], [0, 3]), (4, [0, 1], [0]), (4, [0, 1, 2, 3], [0, 1, 2, 3])])
def test_stabilizer_examples(n, c, h):
    assert kneser_stabilizer(sub(Z(n), c)).to_list() == h


def test_kneser_examples():
    rec = verify_kneser(sub(Z(6), [0, 3]), sub(Z(6), [0, 3]))
    assert (rec.lhs, rec.rhs, rec.holds) == (2, 2, True)
    rec = verify_kneser(sub(Z(5), [0, 1]), sub(Z(5), [0, 1]))
    assert rec.C.to_list() == [0, 1, 2] and rec.H.to_list() == [0] and rec.holds


@pytest.mark.parametrize("mods, expected", [((7,), True), ((6,), False), ((2, 2), False), ((2,), True)])
def test_matching_property(mods, expected):
    assert has_matching_property(FiniteAbelianGroup(mods)) is expected


@pytest.mark.parametrize(
    "mods, a, b",
    [
        ((4,), [0, 2], [1, 2]),
        ((2, 2), [[0, 0], [0, 1]], [[0, 1], [1, 0]]),
        ((9,), [0, 3, 6], [1, 3, 6]),
    ],
)
def test_counterexamples(mods, a, b):
    ca, cb = counterexample_pair(FiniteAbelianGroup(mods))
    assert ca.to_list() == a and cb.to_list() == b
    assert not brute_matching(ca, cb)


def test_no_counterexample_for_prime_order():
    with pytest.raises(DomainError):
        counterexample_pair(Z(7))


def test_local_examples():
    assert is_locally_matched(sub(Z(5), [1, 2]), sub(Z(5), [3, 4])).holds
    res = is_locally_matched(sub(Z(4), [0, 2]), sub(Z(4), [1, 2]))
    assert not res.holds and res.entries[0].H.to_list() == [0, 2]
    res = is_locally_matched(sub(Z(6), [0, 3]), sub(Z(6), [1, 5]))
    assert res.holds and not res.entries


@pytest.mark.parametrize("n", [2, 4, 5])
def test_sweep_agrees(n):
    rep = exhaustive_matchability(Z(n), 2)
    assert rep.verdict == "holds"
    assert rep.certificate["has_matching_property"] == (n in (2, 5))


def test_z2_sweep_hand_count():
    rep = exhaustive_matchability(Z(2), 1, detail=True)
    rows = rep.certificate["instances"]
    assert [(r["A"], r["matched"]) for r in rows] == [([0], True), ([1], True)]


GROUPS = [g for g in product_forms(12) if g.order >= 3]


@st.composite
def pairs(draw):
    g = draw(st.sampled_from(GROUPS))
    k = draw(st.integers(1, min(3, g.order - 1)))
    a = draw(st.lists(st.sampled_from(g.elements), min_size=k, max_size=k, unique=True))
    b = draw(st.lists(st.sampled_from(g.elements[1:]), min_size=k, max_size=k, unique=True))
    return g.subset(a), g.subset(b)


@given(pairs())
def test_certificates_are_sound_and_agree_with_brute(ab):
    a, b = ab
    res = find_matching(a, b)
    assert res.verify()
    assert isinstance(res, MatchingMap) == brute_matching(a, b)


@given(pairs())
def test_local_matchability_characterizes_matchings(ab):
    a, b = ab
    local = is_locally_matched(a, b).holds
    assert local == isinstance(find_matching(a, b), MatchingMap)
    if a.group.order <= 9:
        assert local == brute_local_matched(a, b)


@given(pairs())
def test_kneser_and_stabilizer(ab):
    a, b = ab
    rec = verify_kneser(a, b)
    assert rec.holds
    assert frozenset(rec.H.elements) == brute_group_stabilizer(rec.C)
