"""Brute-force reference computations, written independently of the package
internals.  They use plain tuples and itertools only."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd


def compose(p, q):
    """(p*q)(x) = p(q(x))."""
    return tuple(p[q[x]] for x in range(len(q)))


def naive_closure(gens, degree):
    ident = tuple(range(degree))
    elems = {ident}
    changed = True
    while changed:
        changed = False
        for x in list(elems):
            for g in gens:
                y = compose(g, x)
                if y not in elems:
                    elems.add(y)
                    changed = True
    return elems


def subgroups_by_subsets(elements):
    """All subsets closed under multiplication (finite, so subgroups)."""
    elements = sorted(elements)
    ident = tuple(range(len(elements[0])))
    rest = [e for e in elements if e != ident]
    out = []
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            s = set(sub) | {ident}
            if all(compose(a, b) in s for a in s for b in s):
                out.append(frozenset(s))
    return out


def determinantal_invariants(rows, ncols):
    """Invariant factors via gcds of k x k minors (d_k / d_{k-1})."""
    def det(m):
        n = len(m)
        if n == 1:
            return m[0][0]
        total = 0
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in m[1:]]
            total += (-1) ** j * m[0][j] * det(minor)
        return total

    ds = [1]
    for k in range(1, min(len(rows), ncols) + 1):
        g = 0
        for rs in combinations(range(len(rows)), k):
            for cs in combinations(range(ncols), k):
                g = gcd(g, det([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        ds.append(g)
    factors = [ds[k] // ds[k - 1] for k in range(1, len(ds))]
    return tuple(f for f in factors if f > 1), ncols - (len(ds) - 1)


def scwol_automorphism_count(vertices, edges, compositions):
    """Count vertex permutations that preserve the edge relation and
    composition, for scwols with at most one edge per ordered pair."""
    pairs = {(i, t): a for a, (i, t) in edges.items()}
    assert len(pairs) == len(edges)
    count = 0
    for perm in permutations(vertices):
        m = dict(zip(vertices, perm))
        if all((m[i], m[t]) in pairs for (i, t) in pairs):
            emap = {a: pairs[(m[i], m[t])] for a, (i, t) in edges.items()}
            if all(compositions.get((emap[a], emap[b])) == emap[ab] for (a, b), ab in compositions.items()):
                count += 1
    return count


def covolume_by_counting(n_vertices, group_order):
    """Sum of 1/|stabilizer| over orbits equals |V| / |G| by orbit-stabilizer."""
    return Fraction(n_vertices, group_order)


def development_size(cog, phi):
    """Sum over cells of the number of cosets of the image of the local group."""
    G = phi.group.order()
    y = cog.scwol
    nv = sum(G // len(set(phi.local_maps[v].table.values())) for v in y.vertices)
    ne = sum(G // len(set(phi.local_maps[y.i(a)].table.values())) for a in y.edges)
    return nv, ne


def axioms_hold(cog):
    """Both complex-of-groups axioms checked on every element and every triple."""
    y = cog.scwol
    for (a, b), ab in y.compositions.items():
        g = cog.twist(a, b)
        if g not in cog.local_groups[y.t(a)].element_set:
            return False
        for x in cog.local_groups[y.i(b)].elements:
            if g * cog.edge_homs[ab](x) * g.inverse() != cog.edge_homs[a](cog.edge_homs[b](x)):
                return False
    for (a, b), ab in y.compositions.items():
        for (b2, c), bc in y.compositions.items():
            if b2 != b:
                continue
            abc = y.compositions[(ab, c)]
            if y.compositions.get((a, bc)) != abc:
                return False
            lhs = cog.edge_homs[a](cog.twist(b, c)) * cog.twist(a, bc)
            rhs = cog.twist(a, b) * cog.twist(ab, c)
            if lhs != rhs:
                return False
    return True


def sympy_coset_order(presentation):
    """Order of a finitely presented group by sympy's coset enumeration."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group
    gens = presentation.generators
    if not gens:
        return 1
    F = free_group(",".join(g.replace(":", "_") for g in gens))[0]
    sym = {g: F.generators[k] for k, g in enumerate(gens)}
    rels = []
    for r in presentation.relators:
        w = F.identity
        for s, e in r:
            w = w * sym[s] ** e
        rels.append(w)
    return FpGroup(F, rels).order()
