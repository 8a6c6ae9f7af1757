"""Actions and complexes shared by several test modules."""
from functools import lru_cache

from cxgroups import fixtures as F
from cxgroups.actions import ScwolAction, automorphism_group, inversion_free_subgroups
from cxgroups.scwol import barycentric_subdivision

SCWOL_NAMES = ["tripod", "path2", "flag", "octahedron", "sd_triangle", "sd_segment", "sd_hexagon"]


@lru_cache(maxsize=None)
def scwol(name):
    if name.startswith("sd_"):
        return barycentric_subdivision(F.SCWOLS[name[3:]]())
    return F.SCWOLS[name]()


@lru_cache(maxsize=None)
def aut(name) -> ScwolAction:
    return automorphism_group(scwol(name))


@lru_cache(maxsize=None)
def subgroups(name):
    return tuple(inversion_free_subgroups(aut(name)))


def all_pairs():
    return [(n, h) for n in SCWOL_NAMES for h in subgroups(n)]


def constant_complex(s, group):
    """Every local group equal to ``group``, identity homomorphisms, trivial twists."""
    from cxgroups.complexes import ComplexOfGroups
    from cxgroups.groups import GroupHom
    return ComplexOfGroups(s, {v: group for v in s.vertices}, {a: GroupHom.identity(group) for a in s.edges})


def non_developable():
    """Triangle of groups whose vertex groups force the three edge involutions
    to coincide in pi_1 although two of them are distinct at vertex 1."""
    from cxgroups.complexes import ComplexOfGroups
    from cxgroups.groups import GroupHom, Perm, PermGroup
    from cxgroups.scwol import simplicial_complex
    s = simplicial_complex([["1", "2", "3"]])
    z2 = PermGroup.cyclic(2)
    x = z2.generators[0]
    klein = PermGroup(4, [Perm.from_cycles(4, (0, 1)), Perm.from_cycles(4, (2, 3))])
    groups = {"1.2.3": PermGroup.trivial(1), "1.2": z2, "1.3": z2, "2.3": z2, "1": klein, "2": z2, "3": z2}
    homs = {}
    for a, (i, t) in s.edges.items():
        if i == "1.2.3":
            homs[a] = GroupHom.trivial(groups[i], groups[t])
        elif t == "1":
            homs[a] = GroupHom.from_pairs(z2, klein, [(x, klein.generators[0 if i == "1.2" else 1])])
        else:
            homs[a] = GroupHom.identity(z2)
    return ComplexOfGroups(s, groups, homs)


def _dihedral(m):
    from cxgroups.groups import Perm, PermGroup
    if m == 2:
        r1, r2 = Perm.from_cycles(4, (0, 1)), Perm.from_cycles(4, (2, 3))
        return PermGroup(4, [r1, r2]), r1, r2
    r1 = Perm((-i) % m for i in range(m))
    r2 = Perm((1 - i) % m for i in range(m))
    return PermGroup(m, [r1, r2]), r1, r2


def coxeter_triangle(m12, m13, m23):
    """Triangle of groups for the Coxeter group with the given angle orders."""
    from cxgroups.complexes import ComplexOfGroups
    from cxgroups.groups import GroupHom, PermGroup
    from cxgroups.scwol import simplicial_complex
    s = simplicial_complex([["1", "2", "3"]])
    z2 = PermGroup.cyclic(2)
    x = z2.generators[0]
    # generator k of the Coxeter group sits on the edge opposite vertex k
    edge_of = {"2.3": 1, "1.3": 2, "1.2": 3}
    dih = {"3": (_dihedral(m12), (1, 2)), "2": (_dihedral(m13), (1, 3)), "1": (_dihedral(m23), (2, 3))}
    groups = {"1.2.3": PermGroup.trivial(1), "1.2": z2, "1.3": z2, "2.3": z2}
    groups.update({v: d[0][0] for v, d in dih.items()})
    homs = {}
    for a, (i, t) in s.edges.items():
        if i == "1.2.3":
            homs[a] = GroupHom.trivial(groups[i], groups[t])
        else:
            (G, r1, r2), (p, _) = dih[t]
            homs[a] = GroupHom.from_pairs(z2, G, [(x, r1 if edge_of[i] == p else r2)])
    return ComplexOfGroups(s, groups, homs)
