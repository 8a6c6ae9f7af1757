"""Maps induced on fundamental groups and universal covers.

Everything here needs finite universal covers: fundamental groups are held
as their regular permutation representations, so equality of elements is
equality of permutations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .actions import ChoiceData, Quotient, induced_morphism
from .complexes import (CogMorphism, ComplexOfGroups, compose, inverse_isomorphism, is_covering,
                        is_isomorphism_direct, validate_morphism)
from .developments import DevelopmentError, UniversalCover, is_equivariant, universal_cover
from .fp_groups import DEFAULT_BUDGET, Word, edge_symbol, element_symbol, element_word, free_reduce, inverse_word
from .groups import GroupHom, Perm
from .scwol import PLUS, ScwolMorphism, bfs_spanning_tree, check_morphism, simple_connectivity, tree_paths


class RefusedError(ValueError):
    """An operation whose hypotheses could not be certified."""


class BasepointConditionFailed(ValueError):
    pass


class HypothesisError(ValueError):
    pass


@dataclass
class TreeData:
    tree: tuple
    base: str
    paths: dict
    h: dict | None = None

    def word(self, v: str) -> Word:
        return path_word(self.paths[v])


def path_word(path) -> Word:
    return tuple((edge_symbol(e.base), e.sign) for e in path)


def tree_data(cog: ComplexOfGroups, tree=None, base: str | None = None, h_edges=None) -> TreeData:
    """Tree paths from ``base``; with ``h_edges`` also ``h_s = h_e1 ... h_en``."""
    y = cog.scwol
    base = base if base is not None else y.vertices[0]
    tree = tuple(sorted(tree)) if tree is not None else bfs_spanning_tree(y, base)
    paths = tree_paths(y, tree, base)
    h = None
    if h_edges is not None:
        h = {}
        for v, p in paths.items():
            g = None
            for e in p:
                x = h_edges[e.base] if e.sign == PLUS else h_edges[e.base].inverse()
                g = x if g is None else g * x
            h[v] = g
    return TreeData(tree, base, paths, h)


def symbol_meaning(cog: ComplexOfGroups) -> dict:
    """Universal symbol -> ("g", vertex, element) or ("e", edge)."""
    out = {}
    for v in cog.scwol.vertices:
        for k, x in enumerate(cog.local_groups[v].elements):
            if k:
                out[element_symbol(v, k)] = ("g", v, x)
    for a in cog.scwol.edges:
        out[edge_symbol(a)] = ("e", a)
    return out


@dataclass(frozen=True)
class Pi1Element:
    """A word with its concrete image; equality is decided on the image."""

    word: Word
    image: Perm

    def __eq__(self, other):
        return isinstance(other, Pi1Element) and self.image == other.image

    def __hash__(self):
        return hash(self.image)


class Kappa:
    """Rewriting between pi_1(G(Y), T) and the loop group pi_1(G(Y), s0)."""

    def __init__(self, cog: ComplexOfGroups, td: TreeData):
        self.cog = cog
        self.td = td
        self.meaning = symbol_meaning(cog)

    def symbol(self, s: str) -> Word:
        m = self.meaning[s]
        y = self.cog.scwol
        if m[0] == "g":
            p = self.td.word(m[1])
            return free_reduce(p + ((s, 1),) + inverse_word(p))
        a = m[1]
        return free_reduce(self.td.word(y.t(a)) + ((s, 1),) + inverse_word(self.td.word(y.i(a))))

    def forward(self, w) -> Word:
        out: tuple = ()
        for s, e in w:
            piece = self.symbol(s)
            out += piece if e > 0 else inverse_word(piece)
        return free_reduce(out)

    @staticmethod
    def backward(w) -> Word:
        """A loop word read in pi_1(G(Y), T), where tree edges are trivial."""
        return tuple(w)


def kappa_T(cog: ComplexOfGroups, td: TreeData) -> Kappa:
    return Kappa(cog, td)


def _require_finite(*covers: UniversalCover) -> None:
    for c in covers:
        if not c.finite:
            raise RefusedError("needs a finite universal cover")


# ------------------------------------------------------------- Lambda_T

@dataclass
class LambdaT:
    hom: GroupHom
    L: ScwolMorphism
    td: TreeData
    checks: dict


def lambda_T(q: Quotient, choices: ChoiceData, cover: UniversalCover, base: str | None = None,
             budget: int = DEFAULT_BUDGET) -> LambdaT:
    """``Lambda_T: pi_1(G(Y), T) -> G`` and ``L~_T: D(Y, T) -> X`` for an action on a simply connected X."""
    _require_finite(cover)
    sc = simple_connectivity(q.act.scwol, budget)
    if sc["answer"] != "Yes":
        raise RefusedError(f"simple connectivity of X is {sc['answer']}: {sc['reason']}")
    cog = cover.pi1.cog
    y = cog.scwol
    G = q.act.group
    td = tree_data(cog, cover.tree, base, choices.h)
    h = {v: (td.h[v] if td.h[v] is not None else G.identity) for v in y.vertices}
    meaning = symbol_meaning(cog)
    pairs = []
    for s, img in cover.pi1.symbol_pairs():
        m = meaning[s]
        if m[0] == "g":
            val = h[m[1]] * m[2] * h[m[1]].inverse()
        else:
            a = m[1]
            val = h[y.t(a)] * choices.h[a] * h[y.i(a)].inverse()
        pairs.append((img, val))
    hom = GroupHom.from_pairs(cover.pi1.group, G, pairs)
    dev = cover.development
    vm, em = {}, {}
    for c in dev.scwol.cells:
        g, alpha = dev.rep(c)
        ia = alpha if y.is_vertex(alpha) else y.i(alpha)
        img = q.act.act(hom(g) * h[ia], q.lift(alpha, choices))
        (vm if dev.scwol.is_vertex(c) else em)[c] = img
    L = ScwolMorphism(dev.scwol, q.act.scwol, vm, em)
    checks = {"hom_isomorphism": hom.is_isomorphism(),
              "L_isomorphism": check_morphism(L).valid and L.is_bijective(),
              "L_equivariant": is_equivariant(L, dev.action, q.act, hom)}
    if not all(checks.values()):
        raise DevelopmentError(f"Lambda_T checks failed: {checks}")
    return LambdaT(hom, L, td, checks)


# ------------------------------------------------------ induced pair

@dataclass
class InducedPair:
    Lam: GroupHom
    L: ScwolMorphism
    u: dict
    base: str
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"base": self.base, "u": {v: list(g) for v, g in sorted(self.u.items())},
                "Lambda": [[list(x), list(y)] for x, y in sorted(self.Lam.table.items())],
                "L": dict(sorted({**self.L.vertex_map, **self.L.edge_map}.items())),
                "checks": dict(sorted(self.checks.items()))}


def F_lambda(lam: CogMorphism, s: str, meaning: dict) -> Word:
    """Image of a universal symbol under the map of universal groups."""
    tgt = lam.target
    y = lam.source.scwol
    m = meaning[s]
    if m[0] == "g":
        v = m[1]
        return element_word(tgt, lam.l.vertex_map[v], lam.local_maps[v](m[2]))
    a = m[1]
    return element_word(tgt, lam.l.vertex_map[y.t(a)], lam.phi(a)) + ((edge_symbol(lam.l.edge_map[a]), 1),)


def F_lambda_word(lam: CogMorphism, w, meaning: dict) -> Word:
    out: tuple = ()
    for s, e in w:
        piece = F_lambda(lam, s, meaning)
        out += piece if e > 0 else inverse_word(piece)
    return out


def induced_maps(lam: CogMorphism, cover: UniversalCover | None = None, cover2: UniversalCover | None = None,
                 base: str | None = None, budget: int = DEFAULT_BUDGET) -> InducedPair:
    """``Lambda_{T,T'}`` and ``L^lambda_{T,T'}`` with ``s0' = l(s0)``."""
    src, tgt = lam.source, lam.target
    y, y2 = src.scwol, tgt.scwol
    base = base if base is not None else y.vertices[0]
    base2 = lam.l.vertex_map[base]
    cover = cover or universal_cover(src, bfs_spanning_tree(y, base), budget)
    cover2 = cover2 or universal_cover(tgt, bfs_spanning_tree(y2, base2), budget)
    _require_finite(cover, cover2)
    pi1, pi2 = cover.pi1, cover2.pi1
    td = tree_data(src, cover.tree, base)
    td2 = tree_data(tgt, cover2.tree, base2)
    meaning = symbol_meaning(src)
    u = {v: pi2.word(F_lambda_word(lam, td.word(v), meaning)) * pi2.word(td2.word(lam.l.vertex_map[v])).inverse()
         for v in y.vertices}
    kap = Kappa(src, td)
    pairs = []
    formula_agrees = True
    for s, img in pi1.symbol_pairs():
        m = meaning[s]
        if m[0] == "g":
            v = m[1]
            val = u[v] * pi2.element(lam.l.vertex_map[v], lam.local_maps[v](m[2])) * u[v].inverse()
        else:
            a = m[1]
            val = (u[y.t(a)] * pi2.element(lam.l.vertex_map[y.t(a)], lam.phi(a)) * pi2.edge(lam.l.edge_map[a])
                   * u[y.i(a)].inverse())
        # the same element via kappa, F(lambda) and evaluation at the base of Y'
        if pi2.word(F_lambda_word(lam, kap.symbol(s), meaning)) != val:
            formula_agrees = False
        pairs.append((img, val))
    Lam = GroupHom.from_pairs(pi1.group, pi2.group, pairs)
    dev, dev2 = cover.development, cover2.development
    vm, em = {}, {}
    for c in dev.scwol.cells:
        g, alpha = dev.rep(c)
        ia = alpha if y.is_vertex(alpha) else y.i(alpha)
        la = lam.l.vertex_map[alpha] if y.is_vertex(alpha) else lam.l.edge_map[alpha]
        img = dev2.cell(Lam(g) * u[ia], la)
        (vm if dev.scwol.is_vertex(c) else em)[c] = img
    L = ScwolMorphism(dev.scwol, dev2.scwol, vm, em)
    flags = check_morphism(L)
    checks = {"u_base_trivial": u[base].is_identity(), "formula_agrees": formula_agrees,
              "L_morphism": flags.valid, "L_equivariant": is_equivariant(L, dev.action, dev2.action, Lam)}
    if is_covering(lam).covering:
        checks["Lambda_injective"] = Lam.is_injective()
        checks["L_covering"] = flags.covering
        vs, es = set(vm.values()), set(em.values())
        checks["L_injective"] = len(vs) == len(vm) and len(es) == len(em)
        checks["L_surjective"] = vs == set(dev2.scwol.vertices) and es == set(dev2.scwol.edges)
    ip = InducedPair(Lam, L, u, base, checks)
    ip.cover, ip.cover2, ip.lam = cover, cover2, lam  # type: ignore[attr-defined]
    return ip


# ------------------------------------------------------- commuting squares

def main_lemma_check(q: Quotient, q2: Quotient, L: ScwolMorphism, Lam: GroupHom, c: ChoiceData, c2: ChoiceData,
                     k: dict | None = None, base: str | None = None, budget: int = DEFAULT_BUDGET) -> dict:
    """Build ``lambda_{C,C',N}`` and check that ``Lambda_T`` and ``L~_T`` intertwine it with ``(L, Lam)``."""
    y = q.scwol
    base = base if base is not None else y.vertices[0]
    image = L.vertex_map[c.lifts[base]]
    l_base = q2.orbits[image]
    errors = []
    if image != c2.lifts[l_base]:
        errors.append(f"L(lift of {base}) is not the chosen lift of l({base})")
    if k is not None and not Perm(k[base]).is_identity():
        errors.append(f"k_{base} is not the identity")
    if errors:
        raise HypothesisError("; ".join(errors))
    lam = induced_morphism(q, q2, L, Lam, c, c2, k)
    if not lam.k[base].is_identity():  # type: ignore[attr-defined]
        raise HypothesisError(f"k_{base} is not the identity")
    cover = universal_cover(lam.source, bfs_spanning_tree(y, base), budget)
    cover2 = universal_cover(lam.target, bfs_spanning_tree(q2.scwol, l_base), budget)
    lt = lambda_T(q, c, cover, base, budget)
    lt2 = lambda_T(q2, c2, cover2, l_base, budget)
    ip = induced_maps(lam, cover, cover2, base, budget)
    group_fail = [g for g in cover.pi1.group.elements if lt2.hom(ip.Lam(g)) != Lam(lt.hom(g))]
    scwol_fail = [x for x in cover.development.scwol.cells if lt2.L(ip.L(x)) != L(lt.L(x))]
    return {"lambda": lam, "pair": ip, "group_square": not group_fail, "scwol_square": not scwol_fail,
            "group_failures": group_fail, "scwol_failures": scwol_fail,
            "u_base_trivial": ip.u[base].is_identity(), "ok": not group_fail and not scwol_fail}


# ------------------------------------------------------------------ theta

@dataclass
class Theta:
    theta: CogMorphism
    quotient: Quotient
    choices: ChoiceData
    cover: UniversalCover
    cover_Z: UniversalCover
    base: str
    checks: dict


def theta_iso(cog: ComplexOfGroups, cover: UniversalCover | None = None, base: str | None = None,
              budget: int = DEFAULT_BUDGET) -> Theta:
    """``theta: G(Y) -> G(Z)`` for ``Z`` the quotient of the universal cover by pi_1."""
    y = cog.scwol
    base = base if base is not None else y.vertices[0]
    cover = cover or universal_cover(cog, bfs_spanning_tree(y, base), budget)
    _require_finite(cover)
    dev, pi1 = cover.development, cover.pi1
    if not dev.phi_injective:
        raise DevelopmentError("complex is not developable: iota_T is not injective")
    q = Quotient(dev.action)
    fv = {v: q.orbits[dev.base_cell(v)] for v in y.vertices}
    fe = {a: q.orbits[dev.base_cell(a)] for a in y.edges}
    f = ScwolMorphism(y, q.scwol, fv, fe)
    choices = ChoiceData({fv[v]: dev.base_cell(v) for v in y.vertices}, {fe[a]: pi1.edge(a) for a in y.edges})
    gz = q.induced_cog(choices)
    local = {v: cover.iota.local_maps[v].corestrict(gz.local_groups[fv[v]]) for v in y.vertices}
    theta = CogMorphism(cog, gz, f, local, {a: gz.local_groups[fv[y.t(a)]].identity for a in y.edges})
    tree_z = tuple(sorted(fe[a] for a in cover.tree))
    cover_z = universal_cover(gz, tree_z, budget)
    lt = lambda_T(q, choices, cover_z, fv[base], budget)
    ip = induced_maps(theta, cover, cover_z, base, budget)
    checks = {"theta_valid": validate_morphism(theta).ok, "theta_isomorphism": is_isomorphism_direct(theta),
              "Lambda_inverse": all(lt.hom(ip.Lam(g)) == g for g in pi1.group.elements),
              "L_inverse": all(lt.L(ip.L(x)) == x for x in dev.scwol.cells)}
    return Theta(theta, q, choices, cover, cover_z, base, checks)


def reconstruct_morphism(L: ScwolMorphism, Lam: GroupHom, cover: UniversalCover, cover2: UniversalCover,
                         base: str | None = None, budget: int = DEFAULT_BUDGET) -> CogMorphism:
    """The morphism whose induced pair is ``(L, Lam)``.

    Needs ``L([1], s0) = ([1], s0')``.
    """
    _require_finite(cover, cover2)
    dev, dev2 = cover.development, cover2.development
    y = cover.pi1.cog.scwol
    base = base if base is not None else y.vertices[0]
    g, base2 = dev2.rep(L(dev.base_cell(base)))
    if not g.is_identity():
        raise BasepointConditionFailed(f"L([1], {base}) is not of the form ([1], s)")
    th = theta_iso(cover.pi1.cog, cover, base, budget)
    th2 = theta_iso(cover2.pi1.cog, cover2, base2, budget)
    mu = induced_morphism(th.quotient, th2.quotient, L, Lam, th.choices, th2.choices)
    if not mu.k[th.theta.l.vertex_map[base]].is_identity():  # type: ignore[attr-defined]
        raise BasepointConditionFailed("k at the basepoint is not the identity")
    lam = compose(inverse_isomorphism(th2.theta), compose(mu, th.theta))
    ip = induced_maps(lam, cover, cover2, base, budget)
    if ip.L != L or ip.Lam != Lam:
        raise DevelopmentError("reconstructed morphism does not induce the given pair")
    return lam


def is_isomorphism(lam: CogMorphism, cover: UniversalCover | None = None, cover2: UniversalCover | None = None,
                   base: str | None = None, budget: int = DEFAULT_BUDGET) -> dict:
    """Direct criterion and the induced-pair criterion, with their agreement."""
    direct = is_isomorphism_direct(lam)
    ip = induced_maps(lam, cover, cover2, base, budget)
    induced = ip.Lam.is_isomorphism() and check_morphism(ip.L).valid and ip.L.is_bijective()
    return {"direct": direct, "induced": induced, "agree": direct == induced}
