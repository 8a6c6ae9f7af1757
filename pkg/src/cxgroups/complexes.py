"""Complexes of groups over scwols, their morphisms, homotopies, composition
and the covering predicate.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .groups import GroupHom, Perm, PermGroup
from .scwol import Scwol, ScwolMorphism, ValidationReport, chains, check_morphism, connectivity


class ComplexOfGroups:
    """Local groups ``G_s``, injective edge homomorphisms ``psi_a: G_i(a) -> G_t(a)``
    and twisting elements ``g_ab`` in ``G_t(a)``.

    Missing twists default to the identity (a simple complex of groups).
    """

    def __init__(self, scwol: Scwol, local_groups: Mapping[str, PermGroup],
                 edge_homs: Mapping[str, GroupHom], twists: Mapping[tuple[str, str], Perm] | None = None):
        self.scwol = scwol
        self.local_groups = dict(local_groups)
        self.edge_homs = dict(edge_homs)
        self.twists = {k: Perm(v) for k, v in (twists or {}).items()}

    def twist(self, a: str, b: str) -> Perm:
        g = self.twists.get((a, b))
        if g is None:
            return self.local_groups[self.scwol.t(a)].identity
        return g

    def with_twist(self, a: str, b: str, g: Perm) -> "ComplexOfGroups":
        tw = dict(self.twists)
        tw[(a, b)] = Perm(g)
        return ComplexOfGroups(self.scwol, self.local_groups, self.edge_homs, tw)

    def order(self, v: str) -> int:
        return self.local_groups[v].order()

    @classmethod
    def trivial(cls, scwol: Scwol) -> "ComplexOfGroups":
        groups = {v: PermGroup.trivial(1) for v in scwol.vertices}
        homs = {a: GroupHom.identity(groups[scwol.i(a)]) for a in scwol.edges}
        return cls(scwol, groups, homs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexOfGroups):
            return NotImplemented
        if self.scwol != other.scwol:
            return False
        s = self.scwol
        return (all(self.local_groups[v] == other.local_groups[v] for v in s.vertices)
                and all(self.edge_homs[a].table == other.edge_homs[a].table for a in s.edges)
                and all(self.twist(a, b) == other.twist(a, b) for (a, b) in s.compositions))

    def __repr__(self) -> str:
        orders = {v: self.order(v) for v in self.scwol.vertices}
        return f"ComplexOfGroups({self.scwol!r}, orders={orders})"


def validate_cog(c: ComplexOfGroups) -> ValidationReport:
    rep = ValidationReport()
    s = c.scwol
    for v in s.vertices:
        if v not in c.local_groups:
            rep.add("group", f"no local group at {v}", vertex=v)
    for a in s.edges:
        psi = c.edge_homs.get(a)
        if psi is None:
            rep.add("hom", f"no homomorphism for edge {a}", edge=a)
            continue
        if psi.source != c.local_groups[s.i(a)] or not set(psi.table.values()) <= c.local_groups[s.t(a)].element_set:
            rep.add("hom", f"psi_{a} does not map G_{s.i(a)} into G_{s.t(a)}", edge=a)
        elif not psi.is_injective():
            rep.add("injective", f"psi_{a} is not injective", edge=a)
    if not rep.ok:
        return rep
    for (a, b), ab in s.compositions.items():
        g = c.twist(a, b)
        if g not in c.local_groups[s.t(a)]:
            rep.add("twist", f"g_({a},{b}) is not in G_{s.t(a)}", pair=[a, b])
            continue
        gi = g.inverse()
        for x in c.local_groups[s.i(b)].generators:
            if g * c.edge_homs[ab](x) * gi != c.edge_homs[a](c.edge_homs[b](x)):
                rep.add("axiom_i", f"Ad(g_ab) psi_ab != psi_a psi_b for ({a},{b})",
                        pair=[a, b], element=list(x))
                break
    if not rep.ok:
        return rep
    for a, b, cc in chains(s, 3):
        lhs = c.edge_homs[a](c.twist(b, cc)) * c.twist(a, s.compose(b, cc))
        rhs = c.twist(a, b) * c.twist(s.compose(a, b), cc)
        if lhs != rhs:
            rep.add("axiom_ii", f"cocycle condition fails for ({a},{b},{cc})", triple=[a, b, cc])
    return rep


# -------------------------------------------------------------- morphisms

class CogMorphism:
    """A morphism ``phi = (phi_s, phi(a))`` of complexes of groups over ``l``."""

    def __init__(self, source: ComplexOfGroups, target: ComplexOfGroups, l: ScwolMorphism,
                 local_maps: Mapping[str, GroupHom], edge_elements: Mapping[str, Perm]):
        self.source = source
        self.target = target
        self.l = l
        self.local_maps = dict(local_maps)
        self.edge_elements = {a: Perm(g) for a, g in edge_elements.items()}

    def phi(self, a: str) -> Perm:
        return self.edge_elements[a]

    @classmethod
    def identity(cls, c: ComplexOfGroups) -> "CogMorphism":
        s = c.scwol
        return cls(c, c, ScwolMorphism.identity(s), {v: GroupHom.identity(c.local_groups[v]) for v in s.vertices},
                   {a: c.local_groups[s.t(a)].identity for a in s.edges})

    def with_edge_element(self, a: str, g: Perm) -> "CogMorphism":
        ee = dict(self.edge_elements)
        ee[a] = Perm(g)
        return CogMorphism(self.source, self.target, self.l, self.local_maps, ee)

    def with_local_map(self, v: str, hom: GroupHom) -> "CogMorphism":
        lm = dict(self.local_maps)
        lm[v] = hom
        return CogMorphism(self.source, self.target, self.l, lm, self.edge_elements)

    def __repr__(self) -> str:
        return f"CogMorphism({self.source!r} -> {self.target!r})"


class MorphismToGroup:
    """A morphism from a complex of groups to a group ``G``: homomorphisms
    ``phi_s: G_s -> G`` and elements ``phi(a)`` of ``G``."""

    def __init__(self, source: ComplexOfGroups, group: PermGroup,
                 local_maps: Mapping[str, GroupHom], edge_elements: Mapping[str, Perm]):
        self.source = source
        self.group = group
        self.local_maps = dict(local_maps)
        self.edge_elements = {a: Perm(g) for a, g in edge_elements.items()}

    def phi(self, a: str) -> Perm:
        return self.edge_elements[a]

    def is_injective_on_local_groups(self) -> bool:
        return all(h.is_injective() for h in self.local_maps.values())

    def then(self, hom: GroupHom) -> "MorphismToGroup":
        """``hom o self`` for a group homomorphism out of ``self.group``."""
        return MorphismToGroup(self.source, hom.target,
                               {v: f.then(hom) for v, f in self.local_maps.items()},
                               {a: hom(g) for a, g in self.edge_elements.items()})

    def __repr__(self) -> str:
        return f"MorphismToGroup({self.source!r} -> {self.group!r})"


def _target_psi(m, a):
    if isinstance(m, MorphismToGroup):
        return lambda g: g
    return m.target.edge_homs[m.l.edge_map[a]]


def _target_twist(m, a, b):
    if isinstance(m, MorphismToGroup):
        return m.group.identity
    return m.target.twist(m.l.edge_map[a], m.l.edge_map[b])


def _target_group(m, v) -> PermGroup:
    if isinstance(m, MorphismToGroup):
        return m.group
    return m.target.local_groups[m.l.vertex_map[v]]


def _target_terminal_group(m, a) -> PermGroup:
    if isinstance(m, MorphismToGroup):
        return m.group
    return m.target.local_groups[m.target.scwol.t(m.l.edge_map[a])]


def validate_morphism(m) -> ValidationReport:
    """Check axioms (i) and (ii) of a morphism (to a complex of groups or a group)."""
    rep = ValidationReport()
    src = m.source
    s = src.scwol
    if isinstance(m, CogMorphism):
        flags = check_morphism(m.l)
        if not flags.valid:
            rep.add("scwol", "underlying map is not a morphism of scwols", errors=list(flags.errors))
            return rep
    for v in s.vertices:
        f = m.local_maps.get(v)
        if f is None:
            rep.add("local", f"no local map at {v}", vertex=v)
        elif f.source != src.local_groups[v] or not set(f.table.values()) <= _target_group(m, v).element_set:
            rep.add("local", f"phi_{v} does not map G_{v} into the right group", vertex=v)
    for a in s.edges:
        if a not in m.edge_elements:
            rep.add("edge", f"no element phi({a})", edge=a)
        elif m.phi(a) not in _target_terminal_group(m, a):
            rep.add("edge", f"phi({a}) is not in the target group at t(l({a}))", edge=a)
    if not rep.ok:
        return rep
    for a in s.edges:
        pa = m.phi(a)
        pai = pa.inverse()
        psi_t = _target_psi(m, a)
        fi, ft = m.local_maps[s.i(a)], m.local_maps[s.t(a)]
        for x in src.local_groups[s.i(a)].generators:
            if pa * psi_t(fi(x)) * pai != ft(src.edge_homs[a](x)):
                rep.add("axiom_i", f"Ad(phi({a})) psi' phi_i != phi_t psi for edge {a}", edge=a, element=list(x))
                break
    for (a, b), ab in s.compositions.items():
        ft = m.local_maps[s.t(a)]
        lhs = ft(src.twist(a, b)) * m.phi(ab)
        rhs = m.phi(a) * _target_psi(m, a)(m.phi(b)) * _target_twist(m, a, b)
        if lhs != rhs:
            rep.add("axiom_ii", f"axiom (ii) fails for ({a},{b})", pair=[a, b])
    return rep


def compose(m2, m1):
    """``m2 o m1``.

    ``m1`` is a :class:`CogMorphism`; ``m2`` is a :class:`CogMorphism` or a
    :class:`MorphismToGroup` out of ``m1.target``.  A :class:`MorphismToGroup`
    followed by a :class:`GroupHom` is handled by passing the hom as ``m2``.
    """
    if isinstance(m2, GroupHom) and isinstance(m1, MorphismToGroup):
        return m1.then(m2)
    if not isinstance(m1, CogMorphism):
        raise TypeError("the first morphism must be a morphism of complexes of groups")
    s = m1.source.scwol
    local = {v: m1.local_maps[v].then(m2.local_maps[m1.l.vertex_map[v]]) for v in s.vertices}
    elems = {}
    for a in s.edges:
        la = m1.l.edge_map[a]
        elems[a] = m2.local_maps[m1.l.vertex_map[s.t(a)]](m1.phi(a)) * m2.phi(la)
    if isinstance(m2, MorphismToGroup):
        return MorphismToGroup(m1.source, m2.group, local, elems)
    return CogMorphism(m1.source, m2.target, m1.l.then(m2.l), local, elems)


def morphisms_equal(m1, m2) -> bool:
    if isinstance(m1, CogMorphism) != isinstance(m2, CogMorphism):
        return False
    if isinstance(m1, CogMorphism) and m1.l != m2.l:
        return False
    return (all(m1.local_maps[v].table == m2.local_maps[v].table for v in m1.source.scwol.vertices)
            and m1.edge_elements == m2.edge_elements)


def check_homotopy(phi: MorphismToGroup, phi2: MorphismToGroup, k: Mapping[str, Perm]) -> bool:
    """Whether ``k`` is a homotopy from ``phi`` to ``phi2``:
    ``phi2_s = Ad(k_s) phi_s`` and ``phi2(a) = k_t(a) phi(a) k_i(a)^-1``."""
    s = phi.source.scwol
    for v in s.vertices:
        kv = Perm(k[v])
        kvi = kv.inverse()
        for x in phi.source.local_groups[v].generators:
            if phi2.local_maps[v](x) != kv * phi.local_maps[v](x) * kvi:
                return False
    for a in s.edges:
        if phi2.phi(a) != Perm(k[s.t(a)]) * phi.phi(a) * Perm(k[s.i(a)]).inverse():
            return False
    return True


def inverse_isomorphism(m: CogMorphism) -> CogMorphism:
    """Inverse of an isomorphism: ``psi_s' = phi_s^-1`` and
    ``psi(a') = phi_t(a)^-1(phi(a))^-1`` where ``a = l^-1(a')``."""
    linv = m.l.inverse()
    s2 = m.target.scwol
    local = {}
    for v2 in s2.vertices:
        local[v2] = m.local_maps[linv.vertex_map[v2]].inverse()
    elems = {}
    for a2 in s2.edges:
        a = linv.edge_map[a2]
        elems[a2] = m.local_maps[m.source.scwol.t(a)].inverse()(m.phi(a)).inverse()
    return CogMorphism(m.target, m.source, linv, local, elems)


def is_isomorphism_direct(m: CogMorphism) -> bool:
    return m.l.is_bijective() and all(f.is_isomorphism() for f in m.local_maps.values())


# -------------------------------------------------------------- coverings

class CoveringReport:
    def __init__(self):
        self.covering = False
        self.sheets: Fraction | None = None
        self.injective: dict[str, bool] = {}
        self.vertex_clause: dict[str, bool] = {}
        self.witnesses: list[dict] = []
        self.sheets_by_vertex: dict[str, Fraction] = {}
        self.sheets_by_edge: dict[str, Fraction] = {}

    def __bool__(self):
        return self.covering

    def to_json(self) -> dict:
        return {
            "covering": self.covering,
            "sheets": None if self.sheets is None else str(self.sheets),
            "injective": self.injective,
            "vertex_clause": self.vertex_clause,
            "witnesses": self.witnesses,
        }


def coset_map(m: CogMorphism, a2: str, sigma: str):
    """The map of the covering condition at ``(a', sigma)``.

    Returns ``(domain, images, well_defined)`` where ``domain`` lists pairs
    ``(a, coset)`` and ``images`` the target coset of each.  Cosets are
    frozensets of elements.
    """
    src, tgt = m.source, m.target
    s = src.scwol
    v2 = m.l.vertex_map[sigma]
    G2 = tgt.local_groups[v2]
    sub2 = set(tgt.edge_homs[a2].table.values())
    G = src.local_groups[sigma]
    f = m.local_maps[sigma]

    def target_coset(x):
        return frozenset(x * y for y in sub2)

    domain, images = [], []
    ok = True
    for a in s.edges_to(sigma):
        if m.l.edge_map[a] != a2:
            continue
        sub = set(src.edge_homs[a].table.values())
        pa = m.phi(a)
        seen = set()
        for g in G.elements:
            if g in seen:
                continue
            coset = frozenset(g * y for y in sub)
            seen |= coset
            imgs = {target_coset(f(x) * pa) for x in coset}
            if len(imgs) != 1:
                ok = False
            domain.append((a, coset))
            images.append(next(iter(imgs)))
    return domain, images, ok, {target_coset(x) for x in G2.elements}


def is_covering(m: CogMorphism) -> CoveringReport:
    rep = CoveringReport()
    src, tgt = m.source, m.target
    s, s2 = src.scwol, tgt.scwol
    flags = check_morphism(m.l)
    if not flags.nondegenerate:
        rep.witnesses.append({"kind": "degenerate", "message": "underlying scwol morphism is degenerate"})
    if not connectivity(s2)["connected"]:
        rep.witnesses.append({"kind": "disconnected", "message": "target scwol is not connected"})
    for v in s.vertices:
        rep.injective[v] = m.local_maps[v].is_injective()
        if not rep.injective[v]:
            rep.witnesses.append({"kind": "injective", "vertex": v,
                                  "message": f"phi_{v} is not injective"})
    for v in s.vertices:
        clause = True
        for a2 in s2.edges_to(m.l.vertex_map[v]):
            domain, images, ok, codomain = coset_map(m, a2, v)
            if not ok:
                clause = False
                rep.witnesses.append({"kind": "not_well_defined", "vertex": v, "edge": a2,
                                      "message": f"coset map at ({a2},{v}) is not well defined"})
            elif len(set(images)) != len(images) or set(images) != codomain:
                clause = False
                rep.witnesses.append({"kind": "not_bijective", "vertex": v, "edge": a2,
                                      "message": f"coset map at ({a2},{v}) is not bijective",
                                      "domain_size": len(domain), "codomain_size": len(codomain),
                                      "image_size": len(set(images))})
        rep.vertex_clause[v] = clause
    cov = flags.nondegenerate and connectivity(s2)["connected"] and all(rep.injective.values()) \
        and all(rep.vertex_clause.values())
    # sheet counts, both formulas
    for v2 in s2.vertices:
        n2 = tgt.order(v2)
        rep.sheets_by_vertex[v2] = sum((Fraction(n2, src.order(v)) for v in s.vertices
                                        if m.l.vertex_map[v] == v2), Fraction(0))
    for a2 in s2.edges:
        n2 = tgt.order(s2.i(a2))
        rep.sheets_by_edge[a2] = sum((Fraction(n2, src.order(s.i(a))) for a in s.edges
                                      if m.l.edge_map[a] == a2), Fraction(0))
    values = set(rep.sheets_by_vertex.values()) | set(rep.sheets_by_edge.values())
    if cov:
        if len(values) != 1:
            cov = False
            rep.witnesses.append({"kind": "sheets", "message": "sheet counts disagree",
                                  "values": sorted(str(x) for x in values)})
        else:
            rep.sheets = values.pop()
    rep.covering = cov
    return rep


def surjects_on_vertices(m: CogMorphism) -> bool:
    return set(m.l.vertex_map.values()) == set(m.target.scwol.vertices)
