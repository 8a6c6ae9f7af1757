import pytest
from hypothesis import given, settings, strategies as st

from cxgroups.groups import (GroupHom, NotSubgroup, NotWellDefined, Perm, PermGroup, all_subgroups,
                             conjugate_subgroup, is_normal, left_cosets)
from oracles import compose, naive_closure, subgroups_by_subsets

perms = st.integers(2, 6).flatmap(lambda n: st.permutations(range(n)).map(Perm))


def same_degree_perms(k):
    return st.integers(2, 6).flatmap(lambda n: st.tuples(*[st.permutations(range(n)).map(Perm)] * k))


@given(same_degree_perms(3))
def test_multiplication_is_associative_composition(ps):
    p, q, r = ps
    assert (p * q) * r == p * (q * r)
    assert tuple(p * q) == compose(p, q)


@given(perms)
def test_inverse_and_order(p):
    assert (p * p.inverse()).is_identity()
    assert (p ** p.order()).is_identity()
    assert all(not (p ** k).is_identity() for k in range(1, p.order()))


@given(same_degree_perms(2))
@settings(max_examples=50)
def test_closure_matches_naive(ps):
    n = len(ps[0])
    g = PermGroup(n, ps)
    assert g.element_set == naive_closure([tuple(p) for p in ps], n)


def test_symmetric_orders():
    assert [PermGroup.symmetric(n).order() for n in range(1, 6)] == [1, 2, 6, 24, 120]


@pytest.mark.parametrize("group, count", [(PermGroup.symmetric(3), 6),
                                          (PermGroup(4, [Perm((1, 2, 3, 0)), Perm((3, 2, 1, 0))]), 10)])
def test_subgroup_count_against_subset_search(group, count):
    found = {h.element_set for h in all_subgroups(group)}
    brute = set(subgroups_by_subsets([tuple(x) for x in group.elements]))
    assert {frozenset(tuple(x) for x in h) for h in found} == brute
    assert len(found) == count


def test_left_cosets_partition():
    s4 = PermGroup.symmetric(4)
    h = s4.subgroup([Perm.from_cycles(4, (0, 1, 2))])
    cos = left_cosets(s4, h)
    assert len(cos) == 8
    union = set()
    for rep, members in cos:
        assert rep == min(members)
        assert members == frozenset(rep * x for x in h.elements)
        union |= members
    assert union == s4.element_set


def test_normality_and_conjugates():
    s3 = PermGroup.symmetric(3)
    a3 = s3.subgroup([Perm.from_cycles(3, (0, 1, 2))])
    t = s3.subgroup([Perm.from_cycles(3, (0, 1))])
    assert is_normal(s3, a3)
    assert not is_normal(s3, t)
    assert conjugate_subgroup(t, Perm.from_cycles(3, (0, 1, 2))) != t


def test_from_elements_rejects_non_subgroup():
    with pytest.raises(NotSubgroup):
        PermGroup.from_elements(3, [Perm((0, 1, 2)), Perm((1, 0, 2)), Perm((0, 2, 1))])


def test_hom_from_pairs_checks_well_definedness():
    c4 = PermGroup.cyclic(4)
    c2 = PermGroup.cyclic(2)
    f = GroupHom.from_pairs(c4, c2, [(c4.generators[0], c2.generators[0])])
    assert f.kernel().order() == 2 and f.is_surjective() and not f.is_injective()
    c3 = PermGroup.cyclic(3)
    with pytest.raises(NotWellDefined):
        GroupHom.from_pairs(c4, c3, [(c4.generators[0], c3.generators[0])])


def test_hom_composition_and_inverse():
    s3 = PermGroup.symmetric(3)
    x = Perm.from_cycles(3, (0, 1))
    f = GroupHom.conjugation(s3, s3, x)
    assert f.then(f) == GroupHom.identity(s3)
    assert f.inverse() == f
    assert f.is_isomorphism()


def test_group_json_roundtrip():
    g = PermGroup.symmetric(4)
    assert PermGroup.from_json(g.to_json()) == g
