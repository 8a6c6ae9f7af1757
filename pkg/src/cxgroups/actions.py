"""Group actions on scwols, quotients, choice data and induced complexes of
groups, covolumes, automorphism groups and the subgroup G_H.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .complexes import CogMorphism, ComplexOfGroups, MorphismToGroup
from .groups import GroupHom, NotWellDefined, Perm, PermGroup, all_subgroups
from .scwol import Scwol, ScwolMorphism, ValidationReport, check_morphism


class ActionError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InversionError(ActionError):
    pass


class ScwolAction:
    """An action of ``group`` on ``scwol`` given by one cell permutation per
    generator.  The action need not be faithful.

    ``images[k]`` maps cell ids to cell ids for ``group.generators[k]``.
    """

    def __init__(self, scwol: Scwol, group: PermGroup, images: Iterable[Mapping[str, str]]):
        self.scwol = scwol
        self.group = group
        self.cells = scwol.cells
        self.index = {c: k for k, c in enumerate(self.cells)}
        n = len(self.cells)
        perms = []
        for img in images:
            try:
                perms.append(Perm(self.index[img[c]] for c in self.cells))
            except KeyError as exc:
                raise ActionError(f"generator image misses or names an unknown cell: {exc}") from None
        if len(perms) != len(group.generators):
            raise ActionError("need one cell permutation per group generator")
        for p in perms:
            if sorted(p) != list(range(n)):
                raise ActionError("generator image is not a permutation of the cells")
        self.cell_group = PermGroup(n, perms)
        try:
            self.rep = GroupHom.from_pairs(group, self.cell_group, zip(group.generators, perms))
        except NotWellDefined as exc:
            raise ActionError(f"generator images do not define an action: {exc}") from None

    @classmethod
    def from_cell_group(cls, scwol: Scwol, cell_group: PermGroup) -> "ScwolAction":
        """Tautological action of a group of cell permutations."""
        cells = scwol.cells
        images = [{c: cells[p[k]] for k, c in enumerate(cells)} for p in cell_group.generators]
        return cls(scwol, cell_group, images)

    @classmethod
    def trivial(cls, scwol: Scwol) -> "ScwolAction":
        return cls(scwol, PermGroup.trivial(1), [])

    def act(self, g: Perm, cell: str) -> str:
        return self.cells[self.rep(g)[self.index[cell]]]

    def cell_perm(self, g: Perm) -> Perm:
        return self.rep(g)

    def restrict(self, sub: PermGroup) -> "ScwolAction":
        images = [{c: self.act(g, c) for c in self.cells} for g in sub.generators]
        return ScwolAction(self.scwol, sub, images)

    def orbit(self, cell: str, group: PermGroup | None = None) -> list[str]:
        group = group or self.group
        return sorted({self.act(g, cell) for g in group.elements})

    def stabilizer(self, cell: str, group: PermGroup | None = None) -> PermGroup:
        group = group or self.group
        return PermGroup.from_elements(group.degree, [g for g in group.elements if self.act(g, cell) == cell])

    def images_json(self) -> list[dict]:
        return [{c: self.act(g, c) for c in self.cells} for g in self.group.generators]


def validate_action(act: ScwolAction) -> ValidationReport:
    """Generators act by automorphisms, and no element maps i(a) to t(a) or acts as an inversion."""
    rep = ValidationReport()
    s = act.scwol
    for k, g in enumerate(act.group.generators):
        m = ScwolMorphism(s, s, {v: act.act(g, v) for v in s.vertices}, {a: act.act(g, a) for a in s.edges})
        flags = check_morphism(m)
        if not flags.valid or not m.is_bijective():
            rep.add("automorphism", f"generator {k} does not act by a scwol automorphism", generator=k)
    if not rep.ok:
        return rep
    for g in act.group.elements:
        for a in s.edges:
            ia = act.act(g, s.i(a))
            if ia == s.t(a):
                rep.add("condition_1", f"g.i({a}) = t({a})", element=list(g), edge=a)
            if ia == s.i(a) and act.act(g, a) != a:
                rep.add("inversion", f"g fixes i({a}) = {s.i(a)} but moves {a} (inversion); "
                        "consider acting on the barycentric subdivision", element=list(g), edge=a)
    return rep


def require_valid(act: ScwolAction) -> None:
    rep = validate_action(act)
    if not rep.ok:
        first = rep.errors[0]
        cls = InversionError if first["kind"] in ("inversion", "condition_1") else ActionError
        raise cls(first["message"], witness=first)


# ---------------------------------------------------------- quotients

def orbit_map(act: ScwolAction, group: PermGroup | None = None) -> dict[str, str]:
    """Cell -> canonical orbit id (the least member of its orbit)."""
    group = group or act.group
    out: dict[str, str] = {}
    for c in act.cells:
        if c in out:
            continue
        orb = act.orbit(c, group)
        for x in orb:
            out[x] = orb[0]
    return out


def quotient_scwol(act: ScwolAction, group: PermGroup | None = None) -> tuple[Scwol, ScwolMorphism]:
    s = act.scwol
    om = orbit_map(act, group)
    vs = sorted({om[v] for v in s.vertices})
    es = {}
    for a in s.edges:
        es[om[a]] = (om[s.i(a)], om[s.t(a)])
    comp: dict[tuple[str, str], str] = {}
    for (a, b), ab in s.compositions.items():
        key = (om[a], om[b])
        if key in comp and comp[key] != om[ab]:
            raise ActionError(f"composition of orbits {key} is not well defined")
        comp[key] = om[ab]
    y = Scwol(vs, es, comp)
    p = ScwolMorphism(s, y, {v: om[v] for v in s.vertices}, {a: om[a] for a in s.edges})
    return y, p


@dataclass
class ChoiceData:
    """Lifts ``lift[s]`` of quotient vertices and elements ``h[a]`` with
    ``h_a . t(abar) = lift[t(a)]`` where ``abar`` lifts ``a`` from ``lift[i(a)]``."""

    lifts: dict[str, str]
    h: dict[str, Perm]

    def to_json(self) -> dict:
        return {"lifts": dict(sorted(self.lifts.items())),
                "h": {a: list(g) for a, g in sorted(self.h.items())}}


class Quotient:
    """Quotient of an action with the data needed to build complexes of groups."""

    def __init__(self, act: ScwolAction):
        require_valid(act)
        self.act = act
        self.scwol, self.projection = quotient_scwol(act)
        self.orbits = orbit_map(act)

    def edge_lift(self, a: str, lifts: Mapping[str, str]) -> str:
        """The unique lift of ``a`` whose initial vertex is ``lifts[i(a)]``."""
        s, y = self.act.scwol, self.scwol
        start = lifts[y.i(a)]
        cands = [e for e in s.edges_from(start) if self.orbits[e] == a]
        if len(cands) != 1:
            raise ActionError(f"edge {a} has {len(cands)} lifts at {start}")
        return cands[0]

    def lift(self, alpha: str, choices: ChoiceData) -> str:
        """The lift of a vertex or edge of the quotient under ``choices``."""
        if alpha in choices.lifts:
            return choices.lifts[alpha]
        return self.edge_lift(alpha, choices.lifts)

    def valid_h(self, a: str, lifts: Mapping[str, str]) -> list[Perm]:
        s, y = self.act.scwol, self.scwol
        tgt = lifts[y.t(a)]
        src = s.t(self.edge_lift(a, lifts))
        return [g for g in self.act.group.bfs_elements if self.act.act(g, src) == tgt]

    def default_choices(self) -> ChoiceData:
        lifts = {v: v for v in self.scwol.vertices}  # orbit ids are least members
        h = {a: self.valid_h(a, lifts)[0] for a in self.scwol.edges}
        return ChoiceData(lifts, h)

    def random_choices(self, rng: random.Random) -> ChoiceData:
        lifts = {}
        for v in self.scwol.vertices:
            orb = [x for x in self.act.scwol.vertices if self.orbits[x] == v]
            lifts[v] = rng.choice(orb)
        h = {a: rng.choice(self.valid_h(a, lifts)) for a in self.scwol.edges}
        return ChoiceData(lifts, h)

    def check_choices(self, c: ChoiceData) -> ValidationReport:
        rep = ValidationReport()
        for v in self.scwol.vertices:
            if self.orbits.get(c.lifts.get(v)) != v:
                rep.add("lift", f"lift of {v} is not in its orbit", vertex=v)
        if not rep.ok:
            return rep
        for a in self.scwol.edges:
            src = self.act.scwol.t(self.edge_lift(a, c.lifts))
            if self.act.act(c.h[a], src) != c.lifts[self.scwol.t(a)]:
                rep.add("h", f"h_{a} does not carry t(abar) to the lift of t({a})", edge=a)
        return rep

    def induced_cog(self, c: ChoiceData | None = None) -> ComplexOfGroups:
        c = c or self.default_choices()
        rep = self.check_choices(c)
        if not rep.ok:
            raise ActionError(str(rep))
        y = self.scwol
        groups = {v: self.act.stabilizer(c.lifts[v]) for v in y.vertices}
        homs = {}
        for a in y.edges:
            h = c.h[a]
            homs[a] = GroupHom.conjugation(groups[y.i(a)], groups[y.t(a)], h)
        twists = {}
        for (a, b), ab in y.compositions.items():
            twists[(a, b)] = c.h[a] * c.h[b] * c.h[ab].inverse()
        return ComplexOfGroups(y, groups, homs, twists)

    def canonical_morphism(self, cog: ComplexOfGroups, c: ChoiceData) -> MorphismToGroup:
        """phi_1: inclusions of the local groups and ``phi(a) = h_a``."""
        G = self.act.group
        return MorphismToGroup(cog, G, {v: GroupHom.inclusion(cog.local_groups[v], G) for v in cog.scwol.vertices},
                               dict(c.h))

    def change_of_choices(self, c1: ChoiceData, c2: ChoiceData) -> CogMorphism:
        """Isomorphism G(Y)_{c1} -> G(Y)_{c2}: ``phi_s = Ad(k_s)`` and
        ``phi(a) = k_t(a) h_a k_i(a)^-1 h'_a^-1`` with ``k_s . lift1 = lift2``."""
        y = self.scwol
        src, tgt = self.induced_cog(c1), self.induced_cog(c2)
        k = {}
        for v in y.vertices:
            k[v] = next(g for g in self.act.group.bfs_elements if self.act.act(g, c1.lifts[v]) == c2.lifts[v])
        local = {v: GroupHom.conjugation(src.local_groups[v], tgt.local_groups[v], k[v]) for v in y.vertices}
        elems = {a: k[y.t(a)] * c1.h[a] * k[y.i(a)].inverse() * c2.h[a].inverse() for a in y.edges}
        return CogMorphism(src, tgt, ScwolMorphism.identity(y), local, elems)


def default_choices(act: ScwolAction) -> ChoiceData:
    return Quotient(act).default_choices()


def induced_cog(act: ScwolAction, choices: ChoiceData | None = None) -> ComplexOfGroups:
    return Quotient(act).induced_cog(choices)


def induced_morphism(q: Quotient, q2: Quotient, L: ScwolMorphism, Lam: GroupHom,
                     c: ChoiceData, c2: ChoiceData, k: Mapping[str, Perm] | None = None) -> CogMorphism:
    """The morphism ``lambda_{C,C',N}`` induced by a ``Lam``-equivariant ``L: X -> X'``.

    ``lambda_s = Ad(k_s) Lam`` and ``lambda(a) = k_t(a) Lam(h_a) k_i(a)^-1 h'_l(a)^-1``.
    When ``k`` is omitted, each ``k_s`` is the first element (BFS order) of
    the target group with ``k_s . L(lift_s) = lift'_l(s)``.
    """
    y, y2 = q.scwol, q2.scwol
    G2 = q2.act.group
    lv = {v: q2.orbits[L.vertex_map[c.lifts[v]]] for v in y.vertices}
    le = {a: q2.orbits[L.edge_map[a_x]] for a in y.edges for a_x in [q.edge_lift(a, c.lifts)]}
    l = ScwolMorphism(y, y2, lv, le)
    if k is None:
        k = {}
        for v in y.vertices:
            target = c2.lifts[lv[v]]
            x = L.vertex_map[c.lifts[v]]
            k[v] = next((g for g in G2.bfs_elements if q2.act.act(g, x) == target), None)
            if k[v] is None:
                raise ActionError(f"no element of the target group carries L(lift {v}) to the lift of l({v})")
    else:
        k = {v: Perm(g) for v, g in k.items()}
        for v in y.vertices:
            if q2.act.act(k[v], L.vertex_map[c.lifts[v]]) != c2.lifts[lv[v]]:
                raise ActionError(f"k_{v} does not carry L(lift {v}) to the lift of l({v})")
    src, tgt = q.induced_cog(c), q2.induced_cog(c2)
    local = {}
    for v in y.vertices:
        kv = k[v]
        kvi = kv.inverse()
        local[v] = GroupHom.from_pairs(src.local_groups[v], tgt.local_groups[lv[v]],
                                       [(x, kv * Lam(x) * kvi) for x in src.local_groups[v].generators])
    elems = {a: k[y.t(a)] * Lam(c.h[a]) * k[y.i(a)].inverse() * c2.h[le[a]].inverse() for a in y.edges}
    m = CogMorphism(src, tgt, l, local, elems)
    m.k = k  # type: ignore[attr-defined]
    return m


# ------------------------------------------------------------ covolume

def covolume(act: ScwolAction, subgroup: PermGroup | None = None) -> Fraction:
    """Sum over vertex orbits of ``1/|stabilizer|``, exactly."""
    sub = subgroup or act.group
    if not sub.is_subgroup_of(act.group):
        raise ActionError("not a subgroup of the acting group")
    om = orbit_map(act, sub)
    total = Fraction(0)
    for v in sorted({om[v] for v in act.scwol.vertices}):
        total += Fraction(1, act.stabilizer(v, sub).order())
    return total


def g_sub_h(act: ScwolAction, h: PermGroup) -> PermGroup:
    """``G_H = {g : g.x in H.x for every cell x}``."""
    require_valid(act.restrict(h))
    om = orbit_map(act, h)
    elems = [g for g in act.group.elements
             if all(om[act.act(g, x)] == om[x] for x in act.cells)]
    gh = PermGroup.from_elements(act.group.degree, elems)
    if not h.is_subgroup_of(gh):
        raise ActionError("G_H does not contain H")
    return gh


# ---------------------------------------------------- automorphisms

def _vertex_invariant(s: Scwol, v: str) -> tuple:
    ins = sorted(len(s.edges_to(s.i(a))) for a in s.edges_to(v))
    outs = sorted(len(s.edges_from(s.t(a))) for a in s.edges_from(v))
    return (len(s.edges_to(v)), len(s.edges_from(v)), tuple(ins), tuple(outs))


def _scwol_isomorphisms(a: Scwol, b: Scwol, first_only: bool = False) -> Iterator[tuple[dict, dict]]:
    """All isomorphisms ``a -> b`` as ``(vertex_map, edge_map)``, by backtracking."""
    if (len(a.vertices), len(a.edges), len(a.compositions)) != (len(b.vertices), len(b.edges), len(b.compositions)):
        return
    inv_a = {v: _vertex_invariant(a, v) for v in a.vertices}
    inv_b = {v: _vertex_invariant(b, v) for v in b.vertices}
    if sorted(inv_a.values()) != sorted(inv_b.values()):
        return
    # order vertices so that each one is adjacent to an earlier one when possible
    order: list[str] = []
    seen: set[str] = set()
    nbrs = {v: sorted({a.t(e) for e in a.edges_from(v)} | {a.i(e) for e in a.edges_to(v)}) for v in a.vertices}
    for root in sorted(a.vertices, key=lambda v: (-len(nbrs[v]), v)):
        if root in seen:
            continue
        stack = [root]
        seen.add(root)
        while stack:
            x = stack.pop(0)
            order.append(x)
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)

    def count(s, x, y):
        return sum(1 for e in s.edges_from(x) if s.t(e) == y)

    def rec(k, vmap, used):
        if k == len(order):
            yield from _edge_maps(a, b, vmap)
            return
        x = order[k]
        for y in b.vertices:
            if y in used or inv_b[y] != inv_a[x]:
                continue
            ok = True
            for x2, y2 in vmap.items():
                if count(a, x, x2) != count(b, y, y2) or count(a, x2, x) != count(b, y2, y):
                    ok = False
                    break
            if not ok:
                continue
            vmap[x] = y
            used.add(y)
            yield from rec(k + 1, vmap, used)
            del vmap[x]
            used.discard(y)

    for vm, em in rec(0, {}, set()):
        yield vm, em
        if first_only:
            return


def _edge_maps(a: Scwol, b: Scwol, vmap: dict) -> Iterator[tuple[dict, dict]]:
    from itertools import permutations, product
    groups: dict[tuple[str, str], list[str]] = {}
    for e, (x, y) in a.edges.items():
        groups.setdefault((x, y), []).append(e)
    options = []
    keys = sorted(groups)
    for key in keys:
        x, y = key
        tgt = [e for e in b.edges_from(vmap[x]) if b.t(e) == vmap[y]]
        src = groups[key]
        if len(tgt) != len(src):
            return
        options.append([dict(zip(src, p)) for p in permutations(tgt)])
    for choice in product(*options):
        em = {}
        for d in choice:
            em.update(d)
        if all(b.compositions.get((em[x], em[y])) == em[xy] for (x, y), xy in a.compositions.items()):
            yield dict(vmap), em


def automorphism_group(s: Scwol, cap: int = 20000) -> ScwolAction:
    """Aut(s) as a group of permutations of the cells, with its action."""
    cells = s.cells
    idx = {c: k for k, c in enumerate(cells)}
    perms = []
    for vm, em in _scwol_isomorphisms(s, s):
        full = {**vm, **em}
        perms.append(Perm(idx[full[c]] for c in cells))
        if len(perms) > cap:
            from .groups import CapExceeded
            raise CapExceeded(cap)
    group = PermGroup.from_elements(len(cells), perms)
    if group.order() != len(perms):
        raise ActionError("automorphism search is inconsistent")
    return ScwolAction.from_cell_group(s, group)


def inversion_free_subgroups(act: ScwolAction) -> list[PermGroup]:
    """Subgroups of the acting group that act without inversions."""
    return [h for h in all_subgroups(act.group) if validate_action(act.restrict(h)).ok]


def maximal_inversion_free_subgroups(act: ScwolAction) -> list[PermGroup]:
    subs = inversion_free_subgroups(act)
    return [h for h in subs if not any(h != k and h.is_subgroup_of(k) for k in subs)]
