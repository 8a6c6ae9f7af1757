import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from cxgroups import fixtures as F
from cxgroups.actions import (ActionError, InversionError, Quotient, automorphism_group, covolume, g_sub_h,
                              inversion_free_subgroups, orbit_map, validate_action)
from cxgroups.complexes import is_isomorphism_direct, validate_cog, validate_morphism
from cxgroups.groups import Perm, PermGroup
from oracles import covolume_by_counting, scwol_automorphism_count, subgroups_by_subsets
import cases

SMALL = ["segment", "triangle", "path2", "tripod", "flag", "hexagon"]


@pytest.mark.parametrize("name", SMALL)
def test_aut_order_matches_brute_force(name):
    s = F.SCWOLS[name]()
    expected = scwol_automorphism_count(list(s.vertices), dict(s.edges), dict(s.compositions))
    assert automorphism_group(s).group.order() == expected


def test_known_aut_orders():
    assert automorphism_group(F.tripod()).group.order() == 6
    assert automorphism_group(F.flag()).group.order() == 1
    assert automorphism_group(F.hexagon()).group.order() == 6


def test_inversion_reported_with_witness():
    act = automorphism_group(F.segment())
    rep = validate_action(act)
    assert not rep.ok
    assert rep.errors[0]["kind"] == "inversion"
    assert rep.errors[0]["edge"] in ("a1", "a2")
    with pytest.raises(InversionError) as exc:
        Quotient(act)
    assert exc.value.witness["kind"] == "inversion"


def _has_inversion(act, g):
    s = act.scwol
    return any(act.act(g, s.i(a)) == s.i(a) and act.act(g, a) != a for a in s.edges)


@pytest.mark.parametrize("name", ["tripod", "path2", "sd_segment", "hexagon", "triangle"])
def test_inversion_free_subgroups_brute_force(name):
    act = cases.aut(name) if name.startswith("sd_") else automorphism_group(F.SCWOLS[name]())
    elems = [tuple(g) for g in act.group.elements]
    expected = {frozenset(sub) for sub in subgroups_by_subsets(elems)
                if not any(_has_inversion(act, Perm(g)) for g in sub)}
    got = {frozenset(tuple(g) for g in h.elements) for h in inversion_free_subgroups(act)}
    assert got == expected


def test_flip_quotient():
    q = Quotient(F.flip())
    assert len(q.scwol.vertices) == 3 and len(q.scwol.edges) == 2
    cog = q.induced_cog()
    assert sorted(cog.order(v) for v in q.scwol.vertices) == [1, 1, 2]
    assert covolume(F.flip()) == Fraction(5, 2)


@pytest.mark.parametrize("name,h", cases.all_pairs()[:60])
def test_covolume_by_orbit_stabilizer(name, h):
    act = cases.aut(name)
    assert covolume(act, h) == covolume_by_counting(len(act.scwol.vertices), h.order())


def test_covolume_rejects_foreign_subgroup():
    act = F.flip()
    with pytest.raises(ActionError):
        covolume(act, PermGroup.cyclic(5))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(pair=st.sampled_from(cases.all_pairs()), seed=st.integers(0, 10 ** 6))
def test_random_choices_give_valid_isomorphic_complexes(pair, seed):
    name, h = pair
    q = Quotient(cases.aut(name).restrict(h))
    rng = random.Random(seed)
    c1, c2 = q.random_choices(rng), q.random_choices(rng)
    assert q.check_choices(c1).ok
    cog = q.induced_cog(c1)
    assert validate_cog(cog).ok
    assert validate_morphism(q.canonical_morphism(cog, c1)).ok
    m = q.change_of_choices(c1, c2)
    assert validate_morphism(m).ok and is_isomorphism_direct(m)


def test_bad_choices_reported():
    q = Quotient(cases.aut("tripod").restrict(max(cases.subgroups("tripod"), key=lambda h: h.order())))
    c = q.default_choices()
    a, wrong = next((a, g) for a in q.scwol.edges for g in q.act.group.elements
                    if g not in q.valid_h(a, c.lifts))
    c.h[a] = wrong
    rep = q.check_choices(c)
    assert not rep.ok and rep.errors[0] == {**rep.errors[0], "kind": "h", "edge": a}
    with pytest.raises(ActionError):
        q.induced_cog(c)


@pytest.mark.parametrize("name", ["tripod", "sd_triangle", "octahedron"])
def test_g_sub_h_is_largest_group_with_same_orbits(name):
    act = cases.aut(name)
    for h in cases.subgroups(name):
        gh = g_sub_h(act, h)
        assert h.is_subgroup_of(gh)
        assert orbit_map(act, gh) == orbit_map(act, h)
        for g in act.group.elements:
            if g not in gh:
                bigger = PermGroup(act.group.degree, list(gh.generators) + [g])
                assert orbit_map(act, bigger) != orbit_map(act, h)
