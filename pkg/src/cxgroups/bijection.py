"""Overgroups of a fixed group acting on a finite simply connected scwol,
coverings of complexes of groups, and the conjugacy solver."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .actions import (ActionError, ChoiceData, Quotient, ScwolAction, covolume, g_sub_h, induced_morphism,
                      validate_action)
from .complexes import CogMorphism, is_covering, validate_morphism
from .developments import DevelopmentError, UniversalCover, kernel_NT, universal_cover
from .fp_groups import DEFAULT_BUDGET
from .functoriality import InducedPair, LambdaT, RefusedError, induced_maps, lambda_T, reconstruct_morphism
from .groups import GroupHom, Perm, PermGroup, all_subgroups
from .scwol import ScwolMorphism, bfs_spanning_tree


class NotFree(ActionError):
    pass


class NotInGH(ActionError):
    pass


def _cell_perm(aut: ScwolAction, m: ScwolMorphism) -> Perm:
    return Perm(aut.index[m(c)] for c in aut.cells)


class OvergroupContext:
    """Fixed data: ``X``, its automorphism group acting on cells, a subgroup
    ``gamma``, choices for ``gamma``, a basepoint and a maximal tree."""

    def __init__(self, aut: ScwolAction, gamma: PermGroup, choices: ChoiceData | None = None,
                 base: str | None = None, budget: int = DEFAULT_BUDGET):
        if aut.cell_group != aut.group:
            raise ActionError("the ambient group must act on cells tautologically")
        if not gamma.is_subgroup_of(aut.group):
            raise ActionError("gamma is not a group of automorphisms of X")
        self.aut = aut
        self.scwol = aut.scwol
        self.gamma = gamma
        self.budget = budget
        self.act = aut.restrict(gamma)
        self.quotient = Quotient(self.act)
        self.choices = choices or self.quotient.default_choices()
        self.cog = self.quotient.induced_cog(self.choices)
        y = self.quotient.scwol
        self.base = base if base is not None else y.vertices[0]
        self.tree = bfs_spanning_tree(y, self.base)
        self.cover = universal_cover(self.cog, self.tree, budget)
        self.lt: LambdaT = lambda_T(self.quotient, self.choices, self.cover, self.base, budget)

    def base_lift(self) -> str:
        return self.choices.lifts[self.base]


@dataclass
class CoveringClass:
    lam: CogMorphism
    overgroup: PermGroup
    quotient: Quotient
    choices: ChoiceData
    k: dict
    cover: UniversalCover
    pair: InducedPair
    faithful: bool
    sheets: Fraction
    checks: dict = field(default_factory=dict)


def map_a(ctx: OvergroupContext, overgroup: PermGroup, rng: random.Random | None = None,
          normalize: bool = True) -> CoveringClass:
    """The covering induced by ``gamma <= overgroup`` with ``L = Id``.

    With ``normalize`` the lift of ``l(s0)`` is the lift of ``s0`` and
    ``k`` is built from a section ``s`` of ``l`` with ``s(l(s0)) = s0`` as
    ``k'_s = k'_{s(l(s))} k_{s(l(s))}^-1 k_s``, so ``k'_{s0} = 1``.
    ``rng`` randomizes every remaining choice.
    """
    if not ctx.gamma.is_subgroup_of(overgroup):
        raise ActionError("not an overgroup of gamma")
    act2 = ctx.aut.restrict(overgroup)
    rep = validate_action(act2)
    if not rep.ok:
        raise ActionError(f"overgroup does not act without inversions: {rep}", witness=rep.errors[0])
    q, q2 = ctx.quotient, Quotient(act2)
    y, y2 = q.scwol, q2.scwol
    c = ctx.choices
    G2 = overgroup
    l = {v: q2.orbits[c.lifts[v]] for v in y.vertices}
    base2 = l[ctx.base]
    lifts = {}
    for v2 in y2.vertices:
        orb = [x for x in ctx.scwol.vertices if q2.orbits[x] == v2]
        lifts[v2] = rng.choice(orb) if rng else v2
    if normalize:
        lifts[base2] = c.lifts[ctx.base]
    h = {}
    for a in y2.edges:
        cands = q2.valid_h(a, lifts)
        h[a] = rng.choice(cands) if rng else cands[0]
    c2 = ChoiceData(lifts, h)

    def carriers(v):
        target = lifts[l[v]]
        return [g for g in G2.bfs_elements if act2.act(g, c.lifts[v]) == target]

    k0 = {v: (rng.choice(carriers(v)) if rng else carriers(v)[0]) for v in y.vertices}
    if normalize:
        section = {}
        for v in y.vertices:
            section.setdefault(l[v], v)
        section[base2] = ctx.base
        kk = {}
        for v2, v in section.items():
            kk[v2] = G2.identity if v == ctx.base else (rng.choice(carriers(v)) if rng else carriers(v)[0])
        k = {v: kk[l[v]] * k0[section[l[v]]].inverse() * k0[v] for v in y.vertices}
    else:
        k = k0
    incl = GroupHom.inclusion(ctx.gamma, G2)
    lam = induced_morphism(q, q2, ScwolMorphism.identity(ctx.scwol), incl, c, c2, k)
    cov = is_covering(lam)
    if not cov.covering:
        raise DevelopmentError("induced morphism is not a covering")
    cover2 = universal_cover(lam.target, bfs_spanning_tree(y2, base2), ctx.budget)
    pair = induced_maps(lam, ctx.cover, cover2, ctx.base, ctx.budget)
    nt = kernel_NT(lam.target, cover=cover2)
    checks = {"covering": True, "morphism": validate_morphism(lam).ok, "k_base_trivial": k[ctx.base].is_identity(),
              **{f"pair_{key}": val for key, val in pair.checks.items()}}
    return CoveringClass(lam, overgroup, q2, c2, k, cover2, pair, nt["trivial"], cov.sheets, checks)


def map_b(ctx: OvergroupContext, cc: CoveringClass) -> PermGroup:
    """``L^-1 pi_1' L`` with ``L = L^lambda o L~_T^-1: X -> D(Y', T')``, as cell permutations of X."""
    if not cc.faithful:
        raise RefusedError("target complex is not faithful: N_T is nontrivial")
    M = ctx.lt.L.inverse().then(cc.pair.L)
    Minv = M.inverse()
    act2 = cc.cover.development.action
    gens = []
    for g in cc.cover.pi1.group.generators:
        gens.append(Perm(ctx.aut.index[Minv(act2.act(g, M(x)))] for x in ctx.aut.cells))
    b = PermGroup(len(ctx.aut.cells), gens)
    if not b.is_subgroup_of(ctx.aut.group):
        raise DevelopmentError("conjugated group is not a group of automorphisms")
    if not ctx.gamma.is_subgroup_of(b):
        raise DevelopmentError("b does not contain gamma")
    if not validate_action(ctx.aut.restrict(b)).ok:
        raise DevelopmentError("b has inversions")
    return b


def isomorphic_coverings(ctx: OvergroupContext, cc1: CoveringClass, cc2: CoveringClass) -> dict:
    """Equality of overgroups (primary) and an explicit isomorphism making
    ``L^{lambda''} o L^{lambda1} = L^{lambda2}`` (secondary)."""
    primary = map_b(ctx, cc1) == map_b(ctx, cc2)
    secondary = _triangle(ctx, cc1, cc2)
    return {"primary": primary, "secondary": secondary is not None, "agree": primary == (secondary is not None),
            "isomorphism": secondary}


def _triangle(ctx: OvergroupContext, cc1: CoveringClass, cc2: CoveringClass):
    d1, d2 = cc1.cover.development, cc2.cover.development
    Lpp = cc1.pair.L.inverse().then(cc2.pair.L)
    if not (Lpp.is_bijective() and Lpp == Lpp):
        return None
    from .scwol import check_morphism
    if not check_morphism(Lpp).valid:
        return None
    a1, a2 = d1.action, d2.action
    pi2 = cc2.cover.pi1.group
    by_perm = {a2.cell_perm(g): g for g in pi2.elements}
    pairs = []
    for g in cc1.cover.pi1.group.generators:
        want = Perm(a2.index[Lpp(a1.act(g, Lpp.inverse()(x)))] for x in a2.cells)
        if want not in by_perm:
            return None
        pairs.append((g, by_perm[want]))
    try:
        Lam = GroupHom.from_pairs(cc1.cover.pi1.group, pi2, pairs)
    except Exception:
        return None
    if not Lam.is_isomorphism():
        return None
    base1 = cc1.lam.l.vertex_map[ctx.base]
    lam = reconstruct_morphism(Lpp, Lam, cc1.cover, cc2.cover, base1, ctx.budget)
    from .complexes import is_isomorphism_direct
    if not is_isomorphism_direct(lam):
        return None
    ip = induced_maps(lam, cc1.cover, cc2.cover, base1, ctx.budget)
    if cc1.pair.L.then(ip.L) != cc2.pair.L:
        return None
    return lam


def enumerate_overgroups(ctx: OvergroupContext) -> list[PermGroup]:
    out = []
    for h in all_subgroups(ctx.aut.group):
        if ctx.gamma.is_subgroup_of(h) and validate_action(ctx.aut.restrict(h)).ok:
            out.append(h)
    return sorted(out, key=lambda h: (h.order(), sorted(h.elements)))


def bijection_audit(ctx: OvergroupContext, pairwise: bool = True) -> dict:
    overs = enumerate_overgroups(ctx)
    gamma_vol = covolume(ctx.aut, ctx.gamma)
    items, classes = [], []
    for h in overs:
        cc = map_a(ctx, h)
        b = map_b(ctx, cc)
        index = h.order() // ctx.gamma.order()
        ratio = gamma_vol / covolume(ctx.aut, h)
        items.append({"order": h.order(), "index": index, "sheets": str(cc.sheets), "covolume_ratio": str(ratio),
                      "roundtrip_ok": b == h, "consistent": cc.sheets == index == ratio,
                      "faithful": cc.faithful, "checks_ok": all(cc.checks.values())})
        classes.append(cc)
    distinct = True
    if pairwise:
        for x in range(len(classes)):
            for y in range(x + 1, len(classes)):
                r = isomorphic_coverings(ctx, classes[x], classes[y])
                if r["primary"] or r["secondary"]:
                    distinct = False
    ok = all(it["roundtrip_ok"] and it["consistent"] and it["checks_ok"] for it in items) and distinct
    return {"overgroups": len(overs), "items": items, "pairwise_distinct": distinct,
            "sheets": sorted(int(Fraction(it["sheets"])) for it in items), "ok": ok}


# ---------------------------------------------------------------- conjugacy

@dataclass
class ConjugacyResult:
    g: Perm
    checks: dict
    phi_prime: CogMorphism
    note: str = ""

    def to_json(self) -> dict:
        return {"g": list(self.g), "g_cycles": repr(self.g), "checks": dict(sorted(self.checks.items())),
                "note": self.note}


def check_free(aut: ScwolAction, gamma: PermGroup) -> None:
    for g in gamma.elements:
        if g.is_identity():
            continue
        for x in aut.cells:
            if aut.act(g, x) == x:
                raise NotFree(f"{g!r} fixes {x}", witness={"element": list(g), "cell": x})


def _lift_phi_prime(phi: CogMorphism, cog_a, lam_target) -> dict | None:
    """Elements ``g_b`` of the H-local groups in the cosets ``[phi(b)]`` that
    satisfy the cocycle condition ``g_{ab} = g_a psi_{f(a)}(g_b) g_{f(a), f(b)}``."""
    yb = phi.source.scwol
    f = phi.l
    ga = cog_a
    gp = lam_target
    cands = {}
    for b in yb.edges:
        a = f.edge_map[b]
        t = f.vertex_map[yb.t(b)]
        sub = set(gp.edge_homs[a].table.values())
        x = phi.phi(b)
        cands[b] = [g for g in ga.local_groups[t].elements if (x.inverse() * g) in sub]
        if not cands[b]:
            return None
    order = sorted(yb.edges, key=lambda b: (len(cands[b]), b))
    pos = {b: n for n, b in enumerate(order)}
    constraints = {b: [] for b in yb.edges}
    for (x, y), xy in yb.compositions.items():
        last = max((x, y, xy), key=lambda e: pos[e])
        constraints[last].append((x, y, xy))
    chosen: dict = {}

    def ok(x, y, xy):
        fx, fy = f.edge_map[x], f.edge_map[y]
        return chosen[xy] == chosen[x] * ga.edge_homs[fx](chosen[y]) * ga.twist(fx, fy)

    def rec(n):
        if n == len(order):
            return True
        b = order[n]
        for g in cands[b]:
            chosen[b] = g
            if all(ok(*c) for c in constraints[b]) and rec(n + 1):
                return True
        del chosen[b]
        return False

    return dict(chosen) if rec(0) else None


def conjugacy_solve(aut: ScwolAction, H: PermGroup, gamma: PermGroup, budget: int = DEFAULT_BUDGET) -> ConjugacyResult:
    """An element ``g`` of ``G_H`` with ``g gamma g^-1 <= H``, built from coverings."""
    if aut.cell_group != aut.group:
        raise ActionError("the ambient group must act on cells tautologically")
    rep = validate_action(aut.restrict(H))
    if not rep.ok:
        raise ActionError(f"H does not act without inversions: {rep}")
    GH = g_sub_h(aut, H)
    if not gamma.is_subgroup_of(GH):
        raise NotInGH("gamma is not contained in G_H")
    check_free(aut, gamma)
    qH, qG, qB = Quotient(aut.restrict(H)), Quotient(aut.restrict(GH)), Quotient(aut.restrict(gamma))
    if qH.scwol != qG.scwol:
        raise DevelopmentError("H and G_H have different quotients")
    lifts = {v: v for v in qH.scwol.vertices}
    C = ChoiceData(lifts, {a: qH.valid_h(a, lifts)[0] for a in qH.scwol.edges})
    cog_a = qH.induced_cog(C)
    ident = ScwolMorphism.identity(aut.scwol)
    lam = induced_morphism(qH, qG, ident, GroupHom.inclusion(H, GH), C, C)
    CB = qB.default_choices()
    phi = induced_morphism(qB, qG, ident, GroupHom.inclusion(gamma, GH), CB, C)
    gb = _lift_phi_prime(phi, cog_a, lam.target)
    if gb is None:
        raise DevelopmentError("no coset representatives satisfy the cocycle condition")
    cog_b = phi.source
    yb = cog_b.scwol
    local = {v: GroupHom.from_pairs(cog_b.local_groups[v], cog_a.local_groups[phi.l.vertex_map[v]], [])
             for v in yb.vertices}
    phi2 = CogMorphism(cog_b, cog_a, phi.l, local, gb)
    base_b = yb.vertices[0]
    base_a = phi.l.vertex_map[base_b]
    cover_b = universal_cover(cog_b, bfs_spanning_tree(yb, base_b), budget)
    cover_a = universal_cover(cog_a, bfs_spanning_tree(qH.scwol, base_a), budget)
    lt_b = lambda_T(qB, CB, cover_b, base_b, budget)
    lt_a = lambda_T(qH, C, cover_a, base_a, budget)
    ip = induced_maps(phi2, cover_b, cover_a, base_b, budget)
    gmap = lt_b.L.inverse().then(ip.L).then(lt_a.L)
    g = _cell_perm(aut, gmap)
    gi = g.inverse()
    checks = {"lambda_covering": is_covering(lam).covering, "phi_covering": is_covering(phi).covering,
              "phi_prime_morphism": validate_morphism(phi2).ok, "phi_prime_covering": is_covering(phi2).covering,
              "g_automorphism": g in aut.group,
              "conjugates_into_H": all(g * x * gi in H for x in gamma.generators),
              "in_G_H": g in GH and all(qH.orbits[gmap(x)] == qH.orbits[x] for x in aut.cells)}
    note = "" if gamma.order() > 1 else "gamma is trivial, so the conclusion holds for every g"
    return ConjugacyResult(g, checks, phi2, note)


def conjugacy_oracle(aut: ScwolAction, H: PermGroup, gamma: PermGroup) -> Perm | None:
    """Exhaustive search over ``G_H``."""
    GH = g_sub_h(aut, H)
    if not gamma.is_subgroup_of(GH):
        raise NotInGH("gamma is not contained in G_H")
    hs = H.element_set
    for g in GH.elements:
        gi = g.inverse()
        if all(g * x * gi in hs for x in gamma.generators):
            return g
    return None
