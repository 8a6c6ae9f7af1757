"""Developments D(Y, phi), their group actions, universal covers in the finite
case, local developments and stars, the kernel N_T and developability.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .actions import ChoiceData, Quotient, ScwolAction
from .complexes import CogMorphism, ComplexOfGroups, MorphismToGroup, validate_morphism
from .fp_groups import (BudgetExceeded, CosetTable, DEFAULT_BUDGET, Presentation, PresentationHom,
                        element_symbol, edge_symbol, pi1_presentation, todd_coxeter)
from .groups import GroupHom, Perm, PermGroup, all_subgroups, is_normal, left_cosets
from .scwol import Scwol, ScwolMorphism, bfs_spanning_tree, chains, check_morphism


class DevelopmentError(ValueError):
    pass


def cell_id(alpha: str, j: int) -> str:
    return f"{alpha}@{j}"


class Development:
    """The development of ``cog`` with respect to ``phi: G(Y) -> G``.

    Vertex ``"s@j"`` is ``([g_j], s)`` where ``g_j`` is the j-th least coset
    representative of ``G / phi_s(G_s)``; edge ``"a@j"`` is ``([g_j], a)`` with
    cosets of ``phi_i(a)(G_i(a))``.
    """

    def __init__(self, cog: ComplexOfGroups, phi: MorphismToGroup):
        self.cog = cog
        self.phi = phi
        self.group = G = phi.group
        y = cog.scwol
        self.reps: dict[str, list[Perm]] = {}
        self.lookup: dict[str, dict[Perm, int]] = {}
        for v in y.vertices:
            image = set(phi.local_maps[v].table.values())
            cos = left_cosets(G, image)
            self.reps[v] = [r for r, _ in cos]
            self.lookup[v] = {x: j for j, (_, members) in enumerate(cos) for x in members}
        for a in y.edges:
            self.reps[a] = self.reps[y.i(a)]
            self.lookup[a] = self.lookup[y.i(a)]
        vs = [cell_id(v, j) for v in y.vertices for j in range(len(self.reps[v]))]
        es = {}
        for a in y.edges:
            pai = phi.phi(a).inverse()
            for j, g in enumerate(self.reps[a]):
                es[cell_id(a, j)] = (cell_id(y.i(a), j), cell_id(y.t(a), self.lookup[y.t(a)][g * pai]))
        comp = {}
        for (a, b), ab in y.compositions.items():
            pbi = phi.phi(b).inverse()
            for j, h in enumerate(self.reps[b]):
                ja = self.lookup[y.t(b)][h * pbi]
                comp[(cell_id(a, ja), cell_id(b, j))] = cell_id(ab, j)
        self.scwol = Scwol(vs, es, comp)
        self.info = {cell_id(x, j): (x, j) for x in list(y.vertices) + list(y.edges) for j in range(len(self.reps[x]))}
        self.phi_injective = phi.is_injective_on_local_groups()
        self._action = None

    def cell(self, g: Perm, alpha: str) -> str:
        """Id of ``([g], alpha)``."""
        return cell_id(alpha, self.lookup[alpha][Perm(g)])

    def rep(self, cell: str) -> tuple[Perm, str]:
        alpha, j = self.info[cell]
        return self.reps[alpha][j], alpha

    def base_cell(self, alpha: str) -> str:
        return self.cell(self.group.identity, alpha)

    @property
    def action(self) -> ScwolAction:
        """The left-multiplication action of the group on the development."""
        if self._action is None:
            cells = self.scwol.cells
            images = []
            for h in self.group.generators:
                img = {}
                for c in cells:
                    g, alpha = self.rep(c)
                    img[c] = self.cell(h * g, alpha)
                images.append(img)
            self._action = ScwolAction(self.scwol, self.group, images)
        return self._action

    def projection(self) -> ScwolMorphism:
        y = self.cog.scwol
        return ScwolMorphism(self.scwol, y, {v: self.info[v][0] for v in self.scwol.vertices},
                             {a: self.info[a][0] for a in self.scwol.edges})

    def __repr__(self) -> str:
        return f"Development({self.scwol!r}, |G|={self.group.order()})"


def develop(cog: ComplexOfGroups, phi: MorphismToGroup) -> Development:
    return Development(cog, phi)


def recover_cog(dev: Development) -> tuple[ComplexOfGroups, CogMorphism]:
    """Complex of groups of the action on the development, canonical choices.

    The lift of ``s`` is ``([1], s)`` and ``h_a = phi(a)``.  The result is
    relabelled onto the original scwol; the returned morphism from the input
    complex is given by the local maps ``phi_s`` and trivial edge elements,
    and is checked to be an isomorphism.
    """
    if not dev.phi_injective:
        raise DevelopmentError("phi is not injective on the local groups")
    q = Quotient(dev.action)
    y = dev.cog.scwol
    lifts = {dev.base_cell(v): dev.base_cell(v) for v in y.vertices}
    if set(lifts) != set(q.scwol.vertices):
        raise DevelopmentError("quotient of the development does not match the base scwol")
    h = {dev.base_cell(a): dev.phi.phi(a) for a in y.edges}
    choices = ChoiceData(lifts, h)
    rec = q.induced_cog(choices)
    vname = {dev.base_cell(v): v for v in y.vertices}
    ename = {dev.base_cell(a): a for a in y.edges}
    if q.scwol.relabel(vname, ename) != y:
        raise DevelopmentError("quotient scwol differs from the base scwol")
    rec = ComplexOfGroups(y, {vname[v]: g for v, g in rec.local_groups.items()},
                          {ename[a]: f for a, f in rec.edge_homs.items()},
                          {(ename[a], ename[b]): g for (a, b), g in rec.twists.items()})
    local = {v: dev.phi.local_maps[v].corestrict(rec.local_groups[v]) for v in y.vertices}
    iso = CogMorphism(dev.cog, rec, ScwolMorphism.identity(y), local,
                      {a: rec.local_groups[y.t(a)].identity for a in y.edges})
    rep = validate_morphism(iso)
    if not rep.ok or not all(f.is_isomorphism() for f in local.values()):
        raise DevelopmentError(f"recovered complex is not identified with the input: {rep}")
    return rec, iso


def phi1_map(q: Quotient, choices: ChoiceData, dev: Development) -> ScwolMorphism:
    """``([g], alpha) -> g . lift(alpha)`` from ``D(Y, phi_1)`` to ``X``."""
    x = q.act.scwol
    vm, em = {}, {}
    for c in dev.scwol.cells:
        g, alpha = dev.rep(c)
        img = q.act.act(g, q.lift(alpha, choices))
        (vm if dev.scwol.is_vertex(c) else em)[c] = img
    return ScwolMorphism(dev.scwol, x, vm, em)


def is_equivariant(m: ScwolMorphism, act1: ScwolAction, act2: ScwolAction, hom: GroupHom | None = None) -> bool:
    """``m(g.x) == hom(g).m(x)`` for generators ``g`` and every cell ``x``."""
    for g in act1.group.generators:
        g2 = hom(g) if hom is not None else g
        for c in act1.cells:
            if m(act1.act(g, c)) != act2.act(g2, m(c)):
                return False
    return True


def is_isomorphism_of_scwols(m: ScwolMorphism) -> bool:
    return check_morphism(m).valid and m.is_bijective()


# -------------------------------------------------------- fundamental group

class FundamentalGroup:
    """pi_1(G(Y), T) realized by its regular permutation representation."""

    def __init__(self, cog: ComplexOfGroups, tree, presentation: Presentation, table: CosetTable):
        self.cog = cog
        self.tree = tuple(sorted(tree))
        self.presentation = presentation
        self.table = table
        self.group = table.permutation_group()
        self._cache: dict[str, Perm] = {}

    def order(self) -> int:
        return self.table.index

    def symbol(self, s: str) -> Perm:
        if s not in self._cache:
            self._cache[s] = self.table.symbol_perm(s)
        return self._cache[s]

    def word(self, w) -> Perm:
        result = self.group.identity
        for s, e in w:
            g = self.symbol(s)
            result = result * (g if e > 0 else g.inverse())
        return result

    def element(self, v: str, g: Perm) -> Perm:
        """Image of a local element under iota_T."""
        k = self.cog.local_groups[v].elements.index(Perm(g))
        return self.group.identity if k == 0 else self.symbol(element_symbol(v, k))

    def edge(self, a: str) -> Perm:
        return self.symbol(edge_symbol(a))

    def iota(self) -> MorphismToGroup:
        cog = self.cog
        local = {}
        for v in cog.scwol.vertices:
            G = cog.local_groups[v]
            local[v] = GroupHom.from_pairs(G, self.group, [(x, self.element(v, x)) for x in G.generators])
        return MorphismToGroup(cog, self.group, local, {a: self.edge(a) for a in cog.scwol.edges})

    def symbol_pairs(self) -> list[tuple[str, Perm]]:
        """Every universal symbol with its image; these generate the group."""
        return [(s, self.symbol(s)) for s in self.presentation.symbols]


@dataclass
class PartialBall:
    scwol: Scwol
    radius: int
    center: str
    note: str
    partial: bool = True

    def to_json(self) -> dict:
        return {"partial": True, "radius": self.radius, "center": self.center, "note": self.note,
                "scwol": self.scwol.to_json()}


@dataclass
class UniversalCover:
    finite: bool
    tree: tuple
    indices: dict = field(default_factory=dict)
    pi1: FundamentalGroup | None = None
    iota: MorphismToGroup | None = None
    development: Development | None = None
    ball: PartialBall | None = None
    reason: str = ""

    @property
    def scwol(self):
        return self.development.scwol if self.finite else self.ball.scwol


def fundamental_group(cog: ComplexOfGroups, tree=None, budget: int = DEFAULT_BUDGET) -> FundamentalGroup:
    """Regular representation of pi_1(G(Y), T); raises :class:`BudgetExceeded`."""
    tree = tuple(sorted(tree)) if tree is not None else bfs_spanning_tree(cog.scwol)
    p = pi1_presentation(cog, tree)
    table = todd_coxeter(p, (), budget)
    return FundamentalGroup(cog, tree, p, table)


def universal_cover(cog: ComplexOfGroups, tree=None, budget: int = DEFAULT_BUDGET,
                    base: str | None = None, radius: int = 4) -> UniversalCover:
    y = cog.scwol
    tree = tuple(sorted(tree)) if tree is not None else bfs_spanning_tree(y)
    p = pi1_presentation(cog, tree)
    indices = {}
    for v in y.vertices:
        G = cog.local_groups[v]
        words = []
        for x in G.generators:
            k = G.elements.index(x)
            if k:
                words.append(((element_symbol(v, k), 1),))
        try:
            indices[v] = todd_coxeter(p, words, budget).index
        except BudgetExceeded:
            indices[v] = None
    if all(i is not None for i in indices.values()):
        try:
            table = todd_coxeter(p, (), budget)
        except BudgetExceeded:
            table = None
        if table is not None:
            pi1 = FundamentalGroup(cog, tree, p, table)
            iota = pi1.iota()
            return UniversalCover(True, tree, indices, pi1, iota, Development(cog, iota))
    base = base if base is not None else y.vertices[0]
    ball = partial_ball(cog, base, radius)
    return UniversalCover(False, tree, indices, ball=ball,
                          reason=f"coset enumeration exceeded {budget} rows")


def partial_ball(cog: ComplexOfGroups, base: str, radius: int = 4) -> PartialBall:
    """A ball around ``([1], base)`` built from local data only.

    Without composable pairs the universal cover is a tree and the ball of the
    requested radius is exact.  Otherwise only the edges at the centre are
    produced (radius 1).
    """
    y = cog.scwol
    if y.compositions:
        radius = 1
        note = "edges incident to the centre only"
    else:
        note = "exact ball in the Bass-Serre tree"

    def name(v, w):
        return f"{v}@[{','.join(s + ('' if e > 0 else '^-1') for s, e in w)}]"

    def elem(v, g):
        k = cog.local_groups[v].elements.index(g)
        return () if k == 0 else ((element_symbol(v, k), 1),)

    center = name(base, ())
    vertices = {center}
    edges: dict[str, tuple[str, str]] = {}
    queue = deque([(base, (), None, 0)])
    while queue:
        v, w, came, dist = queue.popleft()
        if dist >= radius:
            continue
        here = name(v, w)
        for a in y.edges_from(v):
            if came == ("down_from", a):
                continue
            w2 = w + ((edge_symbol(a), -1),)
            there = name(y.t(a), w2)
            edges[f"{a}@[{here}]"] = (here, there)
            vertices.add(there)
            queue.append((y.t(a), w2, ("up_to", a), dist + 1))
        for a in y.edges_to(v):
            sub = set(cog.edge_homs[a].table.values())
            for rep, _ in left_cosets(cog.local_groups[v], sub):
                if came == ("up_to", a) and rep.is_identity():
                    continue
                w2 = w + elem(v, rep) + ((edge_symbol(a), 1),)
                there = name(y.i(a), w2)
                edges[f"{a}@[{there}]"] = (there, here)
                vertices.add(there)
                queue.append((y.i(a), w2, ("down_from", a), dist + 1))
    return PartialBall(Scwol(vertices, edges, {}), radius, center, note)


# ------------------------------------------------------------- stars

@dataclass(frozen=True)
class Star:
    vertex: str
    chains: tuple

    def __len__(self):
        return len(self.chains)


def chain_flag(s: Scwol, c: tuple) -> tuple:
    if len(c) == 1 and s.is_vertex(c[0]):
        return c
    return (s.t(c[0]),) + tuple(s.i(a) for a in c)


def star(s: Scwol, vertex: str) -> Star:
    """All chains (as in :func:`chains`, including the vertex) whose flag contains ``vertex``."""
    out = [(vertex,)]
    k = 1
    while True:
        cs = chains(s, k)
        if not cs:
            break
        out.extend(c for c in cs if vertex in chain_flag(s, c))
        k += 1
    return Star(vertex, tuple(out))


def upper_chains(y: Scwol, v: str) -> list[tuple]:
    """Chains ``(b1..bm)`` with ``t(b1) == v`` (m >= 0)."""
    out = [()]
    frontier = [(b,) for b in y.edges_to(v)]
    while frontier:
        out.extend(frontier)
        frontier = [c + (b,) for c in frontier for b in y.edges_to(y.i(c[-1]))]
    return out


def lower_chains(y: Scwol, v: str) -> list[tuple]:
    """Chains ``(a1..ak)`` with ``i(ak) == v`` (k >= 0)."""
    out = [()]
    frontier = [(a,) for a in y.edges_from(v)]
    while frontier:
        out.extend(frontier)
        frontier = [(a,) + c for c in frontier for a in y.edges_from(y.t(c[0]))]
    return out


def composite(y: Scwol, c: tuple) -> str:
    x = c[0]
    for b in c[1:]:
        x = y.compose(x, b)
    return x


def local_development(cog: ComplexOfGroups, v: str) -> list[tuple]:
    """Simplices of the star of the local development at ``v``.

    Each simplex is ``(lower, upper, coset)``: a lower chain ending at ``v``,
    an upper chain starting at ``v`` and, for nonempty ``upper`` with
    composite ``B``, a left coset of ``psi_B(G_i(B))`` in ``G_v``.
    """
    y = cog.scwol
    G = cog.local_groups[v]
    out = []
    for up in upper_chains(y, v):
        if up:
            B = composite(y, up)
            cos = [members for _, members in left_cosets(G, set(cog.edge_homs[B].table.values()))]
        else:
            cos = [frozenset(G.elements)]
        for low in lower_chains(y, v):
            for c in cos:
                out.append((low, up, c))
    return out


def local_star_bijection(m: CogMorphism, v: str) -> dict:
    """The map of local stars induced by ``m`` at ``v``.

    ``(lower, upper, [k]) -> (l(lower), l(upper), [m_v(k) m(B)])``; reports
    whether it is well defined, ``m_v``-equivariant and bijective.
    """
    src, tgt = m.source, m.target
    y = src.scwol
    v2 = m.l.vertex_map[v]
    G = src.local_groups[v]
    f = m.local_maps[v]
    dom = local_development(src, v)
    cod = local_development(tgt, v2)
    cod_index = {}
    for low, up, c in cod:
        for x in c:
            cod_index[(low, up, x)] = (low, up, c)
    images = []
    well_defined = True
    for low, up, c in dom:
        low2 = tuple(m.l.edge_map[a] for a in low)
        up2 = tuple(m.l.edge_map[b] for b in up)
        B = composite(y, up) if up else None
        mB = m.phi(B) if up else tgt.local_groups[v2].identity
        imgs = {cod_index.get((low2, up2, f(k) * mB)) for k in c}
        if len(imgs) != 1 or None in imgs:
            well_defined = False
        images.append(next(iter(imgs)))
    bijective = well_defined and len(set(images)) == len(images) and set(images) == set(cod)
    equivariant = True
    if well_defined:
        table = dict(zip(dom, images))
        dom_index = {}
        for low, up, c in dom:
            for x in c:
                dom_index[(low, up, x)] = (low, up, c)
        for g in G.generators:
            for low, up, c in dom:
                x = next(iter(c))
                moved = dom_index[(low, up, g * x)]
                img = table[(low, up, c)]
                y0 = next(iter(img[2]))
                expect = cod_index[(img[0], img[1], f(g) * y0)]
                if table[moved] != expect:
                    equivariant = False
    return {"vertex": v, "well_defined": well_defined, "equivariant": equivariant, "bijective": bijective,
            "ok": well_defined and equivariant and bijective, "domain": len(dom), "codomain": len(cod)}


# ------------------------------------------------------------ kernel N_T

def kernel_NT(cog: ComplexOfGroups, tree=None, budget: int = DEFAULT_BUDGET, cover: UniversalCover | None = None) -> dict:
    """N_T computed directly and as the maximal invariant normal vertex subgroup."""
    cover = cover or universal_cover(cog, tree, budget)
    if not cover.finite:
        raise DevelopmentError("kernel_NT needs a finite universal cover")
    pi1 = cover.pi1
    P = pi1.group
    act = cover.development.action
    direct = act.rep.kernel()
    y = cog.scwol
    images = {v: PermGroup.from_elements(P.degree, set(cover.iota.local_maps[v].table.values())) for v in y.vertices}
    common = set(P.elements)
    for v in y.vertices:
        common &= images[v].element_set
    inter = PermGroup.from_elements(P.degree, common)
    cands = []
    for n in all_subgroups(inter):
        ok = all(is_normal(images[v], n) for v in y.vertices)
        if ok:
            for a in y.edges:
                x = pi1.edge(a)
                if {x * g * x.inverse() for g in n.elements} != set(n.elements):
                    ok = False
                    break
        if ok:
            cands.append(n)
    maximal = [n for n in cands if all(c.is_subgroup_of(n) for c in cands)]
    if len(maximal) != 1:
        raise DevelopmentError("no unique maximal invariant normal vertex subgroup")
    return {"direct": direct, "search": maximal[0], "agree": direct == maximal[0],
            "trivial": direct.order() == 1, "pi1_order": P.order()}


# ---------------------------------------------------------- developability

@dataclass
class Developability:
    answer: str
    witness: MorphismToGroup | None = None
    note: str = ""


def morphism_from_pi1_hom(cog: ComplexOfGroups, p: Presentation, hom: PresentationHom) -> MorphismToGroup:
    """The morphism to a group defined by a homomorphism out of pi_1(G(Y), T)."""
    local = {}
    for v in cog.scwol.vertices:
        G = cog.local_groups[v]
        pairs = []
        for x in G.generators:
            k = G.elements.index(x)
            pairs.append((x, hom.evaluate(((element_symbol(v, k), 1),)) if k else hom.target.identity))
        local[v] = GroupHom.from_pairs(G, hom.target, pairs)
    elems = {a: hom.evaluate(((edge_symbol(a), 1),)) for a in cog.scwol.edges}
    return MorphismToGroup(cog, hom.target, local, elems)


def is_developable(cog: ComplexOfGroups, search_cap: int = 4, budget: int = 20000, tree=None) -> Developability:
    """Search for a morphism to a finite group that is injective on local groups.

    First the regular representation of a finite pi_1 (when the coset
    enumeration finishes within ``budget``), then every homomorphism of the
    pi_1 presentation into symmetric groups of degree up to ``search_cap``.
    Never answers No.
    """
    if search_cap <= 0:
        return Developability("Unknown", note="search cap is 0")
    tree = tuple(sorted(tree)) if tree is not None else bfs_spanning_tree(cog.scwol)
    try:
        pi1 = fundamental_group(cog, tree, budget)
        iota = pi1.iota()
        if iota.is_injective_on_local_groups():
            return Developability("Yes", iota, "regular representation of a finite fundamental group")
        return Developability("Unknown", note="finite fundamental group is not injective on local groups")
    except BudgetExceeded:
        pass
    p = pi1_presentation(cog, tree)
    from .groups import PermGroup as _PG
    for n in range(1, search_cap + 1):
        S = _PG.symmetric(n)
        elems = S.elements
        for imgs in product(elems, repeat=len(p.generators)):
            images = dict(zip(p.generators, imgs))
            ok = True
            for r in p.relators:
                g = Perm.identity(n)
                for s, e in r:
                    x = images[s]
                    g = g * (x if e > 0 else x.inverse())
                if not g.is_identity():
                    ok = False
                    break
            if not ok:
                continue
            hom = PresentationHom(p, images, S)
            phi = morphism_from_pi1_hom(cog, p, hom)
            if phi.is_injective_on_local_groups():
                return Developability("Yes", phi, f"homomorphism into S_{n}")
    return Developability("Unknown", note=f"no witness in symmetric groups of degree <= {search_cap}")
