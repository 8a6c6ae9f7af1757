"""JSON formats.

Permutations are lists of images of ``0..n-1``.  A group is
``{"degree": n, "generators": [perm, ...]}``.  Nested objects may be given
inline or as a path relative to the containing file.

* scwol: ``{"vertices": [...], "edges": [{"id", "i", "t"}], "compositions": [{"a", "b", "ab"}]}``
* complex: ``{"scwol", "local_groups": {v: group}, "edge_homs": {a: [image of each generator of G_i(a)]},
  "twists": [{"a", "b", "g": perm}]}``
* action: ``{"scwol", "group", "images": [{cell: cell} per generator]}``
* subgroup of Aut(X): ``{"generators": [{cell: cell}, ...]}`` (empty list for the trivial group)
* morphism of complexes: ``{"source", "target", "vertex_map", "edge_map", "local_maps": {v: images},
  "edge_elements": {a: perm}}``
* morphism to a group: ``{"source", "group", "local_maps", "edge_elements"}``
"""
from __future__ import annotations

import json
from pathlib import Path

from .actions import ChoiceData, ScwolAction
from .complexes import CogMorphism, ComplexOfGroups, MorphismToGroup
from .groups import GroupHom, Perm, PermGroup
from .scwol import Scwol, ScwolMorphism


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path) -> tuple[dict, Path]:
    p = Path(path)
    return json.loads(p.read_text()), p.parent


def _resolve(value, base: Path):
    if isinstance(value, str):
        data, _ = load_json(base / value)
        return data, (base / value).parent
    return value, base


def perm(data) -> Perm:
    return Perm(int(x) for x in data)


# ------------------------------------------------------------------ groups

def group_to_json(g: PermGroup) -> dict:
    return g.to_json()


def group_from_json(data) -> PermGroup:
    return PermGroup(int(data["degree"]), [perm(x) for x in data.get("generators", [])])


# --------------------------------------------------------------- complexes

def complex_to_json(c: ComplexOfGroups) -> dict:
    s = c.scwol
    return {
        "scwol": s.to_json(),
        "local_groups": {v: group_to_json(c.local_groups[v]) for v in s.vertices},
        "edge_homs": {a: [list(c.edge_homs[a](x)) for x in c.local_groups[s.i(a)].generators] for a in s.edges},
        "twists": [{"a": a, "b": b, "g": list(c.twist(a, b))} for (a, b) in s.compositions
                   if not c.twist(a, b).is_identity()],
    }


def complex_from_json(data, base: Path = Path(".")) -> ComplexOfGroups:
    sdata, _ = _resolve(data["scwol"], base)
    s = Scwol.from_json(sdata)
    groups = {v: group_from_json(g) for v, g in data["local_groups"].items()}
    homs = {}
    for a in s.edges:
        src, tgt = groups[s.i(a)], groups[s.t(a)]
        images = [perm(x) for x in data["edge_homs"][a]]
        homs[a] = GroupHom.from_pairs(src, tgt, list(zip(src.generators, images)))
    twists = {(t["a"], t["b"]): perm(t["g"]) for t in data.get("twists", [])}
    return ComplexOfGroups(s, groups, homs, twists)


# ----------------------------------------------------------------- actions

def action_to_json(act: ScwolAction) -> dict:
    return {"scwol": act.scwol.to_json(), "group": group_to_json(act.group), "images": act.images_json()}


def action_from_json(data, base: Path = Path(".")) -> ScwolAction:
    sdata, _ = _resolve(data["scwol"], base)
    s = Scwol.from_json(sdata)
    return ScwolAction(s, group_from_json(data["group"]), data["images"])


def subgroup_from_json(aut: ScwolAction, data) -> PermGroup:
    """A subgroup of the cell-permutation group ``aut.group`` from cell maps."""
    gens = [Perm(aut.index[m[c]] for c in aut.cells) for m in data.get("generators", [])]
    return PermGroup(len(aut.cells), gens)


def subgroup_to_json(aut: ScwolAction, h: PermGroup) -> dict:
    return {"order": h.order(),
            "generators": [{c: aut.cells[g[k]] for k, c in enumerate(aut.cells)} for g in h.generators]}


def choices_from_json(data) -> ChoiceData:
    return ChoiceData(dict(data["lifts"]), {a: perm(g) for a, g in data["h"].items()})


# --------------------------------------------------------------- morphisms

def morphism_to_json(m) -> dict:
    s = m.source.scwol
    out = {"source": complex_to_json(m.source),
           "local_maps": {v: [list(m.local_maps[v](x)) for x in m.source.local_groups[v].generators]
                          for v in s.vertices},
           "edge_elements": {a: list(g) for a, g in sorted(m.edge_elements.items())}}
    if isinstance(m, MorphismToGroup):
        out["group"] = group_to_json(m.group)
    else:
        out["target"] = complex_to_json(m.target)
        out["vertex_map"] = dict(m.l.vertex_map)
        out["edge_map"] = dict(m.l.edge_map)
    return out


def morphism_from_json(data, base: Path = Path(".")):
    sdata, sbase = _resolve(data["source"], base)
    src = complex_from_json(sdata, sbase)
    s = src.scwol
    elems = {a: perm(g) for a, g in data["edge_elements"].items()}
    if "group" in data:
        G = group_from_json(data["group"])
        local = {v: GroupHom.from_pairs(src.local_groups[v], G,
                                        list(zip(src.local_groups[v].generators, map(perm, data["local_maps"][v]))))
                 for v in s.vertices}
        return MorphismToGroup(src, G, local, elems)
    tdata, tbase = _resolve(data["target"], base)
    tgt = complex_from_json(tdata, tbase)
    l = ScwolMorphism(s, tgt.scwol, data["vertex_map"], data["edge_map"])
    local = {}
    for v in s.vertices:
        G, G2 = src.local_groups[v], tgt.local_groups[l.vertex_map[v]]
        local[v] = GroupHom.from_pairs(G, G2, list(zip(G.generators, map(perm, data["local_maps"][v]))))
    return CogMorphism(src, tgt, l, local, elems)


def detect_kind(data: dict) -> str:
    if "local_maps" in data:
        return "morphism"
    if "local_groups" in data:
        return "complex"
    if "images" in data:
        return "action"
    if "vertices" in data:
        return "scwol"
    raise ValueError("unrecognized file: expected a scwol, complex, action or morphism")
