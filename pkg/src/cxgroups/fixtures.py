"""Small named scwols, actions and complexes of groups used by tests, the
acceptance suite and the CLI (``--fixture NAME``)."""
from __future__ import annotations

from functools import lru_cache

from .actions import ScwolAction
from .complexes import ComplexOfGroups, MorphismToGroup
from .groups import GroupHom, Perm, PermGroup
from .scwol import Scwol, scwol_from_complex, simplicial_complex


def segment() -> Scwol:
    """One edge cell ``e`` with faces ``v1`` and ``v2``."""
    return Scwol(["e", "v1", "v2"], {"a1": ("e", "v1"), "a2": ("e", "v2")}, {})


def triangle() -> Scwol:
    return simplicial_complex([["0", "1", "2"]])


def tetrahedron() -> Scwol:
    return simplicial_complex([["0", "1", "2", "3"]])


def path2() -> Scwol:
    return scwol_from_complex({"p01": ["p0", "p1"], "p12": ["p1", "p2"]})


def tripod() -> Scwol:
    faces = {f"s{k}": ["c", f"l{k}"] for k in range(3)}
    return scwol_from_complex(faces)


def hexagon() -> Scwol:
    """Boundary of a triangle: six cells, six incidences."""
    return scwol_from_complex({"01": ["0", "1"], "12": ["1", "2"], "02": ["0", "2"]})


def flag() -> Scwol:
    """Three cells in a chain ``top > mid > bot``; no nontrivial symmetry."""
    return scwol_from_complex({"top": ["mid", "bot"], "mid": ["bot"]})


def octahedron() -> Scwol:
    """Boundary of the octahedron with vertices ``+x -x +y -y +z -z``."""
    tris = []
    for sx in "+-":
        for sy in "+-":
            for sz in "+-":
                tris.append([sx + "x", sy + "y", sz + "z"])
    return simplicial_complex(tris)


def point_z2() -> ComplexOfGroups:
    """One vertex carrying Z/2."""
    y = Scwol(["*"], {}, {})
    return ComplexOfGroups(y, {"*": PermGroup.cyclic(2)}, {})


def d3_segment() -> ComplexOfGroups:
    """Z/2 at each end of a segment, trivial in the middle; pi_1 is infinite dihedral."""
    y = segment()
    g1 = PermGroup(3, [Perm.from_cycles(3, (0, 1))])
    g2 = PermGroup(3, [Perm.from_cycles(3, (1, 2))])
    ge = PermGroup.trivial(3)
    return ComplexOfGroups(y, {"v1": g1, "v2": g2, "e": ge},
                           {"a1": GroupHom.inclusion(ge, g1), "a2": GroupHom.inclusion(ge, g2)})


def d3_segment_to_s3() -> MorphismToGroup:
    """Inclusions of the local groups of :func:`d3_segment` into S_3."""
    cog = d3_segment()
    s3 = PermGroup.symmetric(3)
    local = {v: GroupHom.inclusion(g, s3) for v, g in cog.local_groups.items()}
    return MorphismToGroup(cog, s3, local, {a: s3.identity for a in cog.scwol.edges})


def _swap_action(s: Scwol, pairs: list[tuple[str, str]]) -> ScwolAction:
    img = {c: c for c in s.cells}
    for x, y in pairs:
        img[x], img[y] = y, x
    return ScwolAction(s, PermGroup.cyclic(2), [img])


def flip() -> ScwolAction:
    """Z/2 reversing the path p0 - p1 - p2."""
    s = path2()
    pairs = [("p0", "p2"), ("p01", "p12")]
    for a in s.edges:
        i, t = s.i(a), s.t(a)
        sw = {"p0": "p2", "p2": "p0", "p01": "p12", "p12": "p01"}
        b = next(e for e in s.edges if s.i(e) == sw.get(i, i) and s.t(e) == sw.get(t, t))
        if a < b:
            pairs.append((a, b))
    return _swap_action(s, pairs)


@lru_cache(maxsize=None)
def _aut(name: str):
    from .actions import automorphism_group
    return automorphism_group(SCWOLS[name]())


def aut(name: str) -> ScwolAction:
    """Full automorphism group of a named scwol acting on its cells."""
    return _aut(name)


def tripod_s3() -> ScwolAction:
    return aut("tripod")


def tri_s3() -> ScwolAction:
    return aut("triangle")


def antipodal(act: ScwolAction) -> Perm:
    """The central element of Aut(octahedron) exchanging opposite vertices."""
    s = act.scwol
    swap = {"+x": "-x", "-x": "+x", "+y": "-y", "-y": "+y", "+z": "-z", "-z": "+z"}
    for g in act.group.elements:
        if all(act.act(g, v) == swap[v] for v in s.vertices if v in swap):
            return g
    raise LookupError("no antipodal map")


SCWOLS = {
    "segment": segment,
    "triangle": triangle,
    "tetrahedron": tetrahedron,
    "path2": path2,
    "tripod": tripod,
    "hexagon": hexagon,
    "flag": flag,
    "octahedron": octahedron,
}

ACTIONS = {
    "flip": flip,
    "tripod_s3": tripod_s3,
    "tri_s3": tri_s3,
}

COMPLEXES = {
    "point_z2": point_z2,
    "d3_segment": d3_segment,
}
