"""Scwols (small categories without loops), their morphisms and coverings,
composable chains, subdivision, and connectivity certificates.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

PLUS, MINUS = 1, -1


class ScwolError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    i: str
    t: str


class Scwol:
    """A finite scwol.

    ``edges`` maps an edge id to ``(i, t)``; ``compositions`` maps a pair
    ``(a, b)`` with ``i(a) == t(b)`` to the id of ``ab``.  Construction does
    not validate; call :func:`validate_scwol`.  Instances are immutable.
    """

    __slots__ = ("vertices", "edges", "compositions", "_in", "_out")

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, tuple[str, str]] | Iterable,
                 compositions: Mapping[tuple[str, str], str] | Iterable = ()):
        vs = tuple(sorted(set(vertices)))
        if isinstance(edges, Mapping):
            es = {str(a): (str(x), str(y)) for a, (x, y) in edges.items()}
        else:
            es = {}
            for e in edges:
                if isinstance(e, Edge):
                    es[e.id] = (e.i, e.t)
                elif isinstance(e, Mapping):
                    es[e["id"]] = (e["i"], e["t"])
                else:
                    a, x, y = e
                    es[a] = (x, y)
        if isinstance(compositions, Mapping):
            comp = {(a, b): ab for (a, b), ab in compositions.items()}
        else:
            comp = {}
            for c in compositions:
                if isinstance(c, Mapping):
                    comp[(c["a"], c["b"])] = c["ab"]
                else:
                    a, b, ab = c
                    comp[(a, b)] = ab
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", dict(sorted(es.items())))
        object.__setattr__(self, "compositions", dict(sorted(comp.items())))
        incoming: dict[str, list[str]] = {v: [] for v in vs}
        outgoing: dict[str, list[str]] = {v: [] for v in vs}
        for a, (x, y) in self.edges.items():
            outgoing.setdefault(x, []).append(a)
            incoming.setdefault(y, []).append(a)
        object.__setattr__(self, "_in", incoming)
        object.__setattr__(self, "_out", outgoing)

    def __setattr__(self, name, value):
        raise AttributeError("Scwol is immutable")

    def i(self, a: str) -> str:
        return self.edges[a][0]

    def t(self, a: str) -> str:
        return self.edges[a][1]

    def compose(self, a: str, b: str) -> str:
        return self.compositions[(a, b)]

    def edges_from(self, v: str) -> list[str]:
        """Edges with initial vertex ``v``."""
        return self._out.get(v, [])

    def edges_to(self, v: str) -> list[str]:
        """Edges with terminal vertex ``v``."""
        return self._in.get(v, [])

    @property
    def cells(self) -> tuple[str, ...]:
        """Vertices then edges; the index order used by cell permutations."""
        return self.vertices + tuple(self.edges)

    def is_vertex(self, x: str) -> bool:
        return x in self._in

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scwol):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.compositions == other.compositions)

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items()), tuple(self.compositions.items())))

    def __repr__(self) -> str:
        return f"Scwol(|V|={len(self.vertices)}, |E|={len(self.edges)}, |E2|={len(self.compositions)})"

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": a, "i": x, "t": y} for a, (x, y) in self.edges.items()],
            "compositions": [{"a": a, "b": b, "ab": ab} for (a, b), ab in self.compositions.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Scwol":
        return cls(data["vertices"], data.get("edges", []), data.get("compositions", []))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def relabel(self, vmap: Mapping[str, str], emap: Mapping[str, str]) -> "Scwol":
        return Scwol(
            [vmap[v] for v in self.vertices],
            {emap[a]: (vmap[x], vmap[y]) for a, (x, y) in self.edges.items()},
            {(emap[a], emap[b]): emap[ab] for (a, b), ab in self.compositions.items()},
        )


# ------------------------------------------------------------ validation

@dataclass
class ValidationReport:
    errors: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, kind: str, message: str, **witness) -> None:
        self.errors.append({"kind": kind, "message": message, **witness})

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"valid": self.ok, "errors": self.errors}

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(e["message"] for e in self.errors)


def validate_scwol(s: Scwol) -> ValidationReport:
    rep = ValidationReport()
    vset = set(s.vertices)
    for a, (x, y) in s.edges.items():
        if x not in vset or y not in vset:
            rep.add("endpoint", f"edge {a} has an endpoint outside the vertex set", edge=a)
        elif x == y:
            rep.add("loop", f"loop at {x} (edge {a})", edge=a, vertex=x)
    for (a, b), ab in s.compositions.items():
        if a not in s.edges or b not in s.edges or ab not in s.edges:
            rep.add("unknown_edge", f"composition ({a},{b}) -> {ab} uses an unknown edge", pair=[a, b])
            continue
        if s.i(a) != s.t(b):
            rep.add("not_composable", f"composition given for non-composable pair ({a},{b})", pair=[a, b])
            continue
        if s.i(ab) != s.i(b) or s.t(ab) != s.t(a):
            rep.add("endpoints", f"composition ({a},{b}) -> {ab} has wrong endpoints", pair=[a, b])
    if not rep.ok:
        return rep
    for b, (x, y) in s.edges.items():
        for a in s.edges_from(y):
            if (a, b) not in s.compositions:
                rep.add("missing", f"composable pair ({a},{b}) has no composition", pair=[a, b])
    if not rep.ok:
        return rep
    for (a, b), ab in s.compositions.items():
        for c in s.edges_to(s.i(b)):
            bc = s.compositions[(b, c)]
            if s.compositions[(ab, c)] != s.compositions[(a, bc)]:
                rep.add("associativity", f"(ab)c != a(bc) for ({a},{b},{c})", triple=[a, b, c])
    return rep


# ------------------------------------------------------- constructions

def scwol_from_complex(faces: Mapping[str, Iterable[str]]) -> Scwol:
    """Scwol of an abstract cell complex.

    ``faces`` maps each cell to its codimension-one faces.  There is one edge
    ``"S>T"`` for every strict face ``T`` of ``S`` (with ``i = S``, ``t = T``)
    and the composite of ``S>T`` with ``U>S`` is ``U>T``.
    """
    cells = set(faces)
    for c, fs in faces.items():
        cells.update(fs)
    direct = {c: set(faces.get(c, ())) for c in cells}
    below: dict[str, set[str]] = {}

    def down(c, stack):
        if c in below:
            return below[c]
        if c in stack:
            raise ScwolError(f"face relation is not antisymmetric (cycle through {c!r})")
        stack.add(c)
        acc = set()
        for f in direct[c]:
            acc.add(f)
            acc |= down(f, stack)
        stack.discard(c)
        below[c] = acc
        return acc

    for c in sorted(cells):
        down(c, set())
    for c in cells:
        if c in below[c]:
            raise ScwolError(f"face relation is not antisymmetric at {c!r}")
    edges = {}
    for s in sorted(cells):
        for t in sorted(below[s]):
            edges[f"{s}>{t}"] = (s, t)
    comp = {}
    for u in sorted(cells):
        for s in sorted(below[u]):
            for t in sorted(below[s]):
                comp[(f"{s}>{t}", f"{u}>{s}")] = f"{u}>{t}"
    return Scwol(cells, edges, comp)


def simplicial_complex(simplices: Iterable[Iterable[str]]) -> Scwol:
    """Scwol of the simplicial complex generated by the given simplices.

    Cells are named by their vertices joined with ``"."`` in sorted order.
    """
    allsimp: set[tuple[str, ...]] = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for k in range(1, len(s) + 1):
            allsimp.update(combinations(s, k))
    name = ".".join
    faces = {}
    for s in allsimp:
        faces[name(s)] = [name(f) for f in combinations(s, len(s) - 1)] if len(s) > 1 else []
    return scwol_from_complex(faces)


def chains(s: Scwol, k: int) -> list[tuple]:
    """E^(k): vertices for ``k == 0`` (as 1-tuples), else sequences of ``k``
    composable edges ``(a1, ..., ak)`` with ``i(a_j) == t(a_{j+1})``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return [(v,) for v in s.vertices]
    cur = [(a,) for a in s.edges]
    for _ in range(k - 1):
        cur = [c + (b,) for c in cur for b in s.edges_to(s.i(c[-1]))]
    return sorted(cur)


def all_chains(s: Scwol) -> dict[int, list[tuple]]:
    out = {}
    k = 0
    while True:
        c = chains(s, k)
        if not c:
            break
        out[k] = c
        k += 1
    return out


def chain_name(c: tuple) -> str:
    return "[" + ",".join(c) + "]"


def barycentric_subdivision(s: Scwol) -> Scwol:
    """Scwol of the chain poset: a chain's faces drop one vertex of its flag.

    A chain ``(a1..ak)`` is the flag ``t(a1) < i(a1) < ... < i(ak)`` (in the
    face order of the original cells); its codimension-one faces delete one
    of the ``k + 1`` flag members.
    """
    faces: dict[str, list[str]] = {}
    for k, cs in all_chains(s).items():
        for c in cs:
            if k == 0:
                faces[chain_name(c)] = []
                continue
            fl = []
            # drop t(a1)
            fl.append(chain_name(c[1:]) if k > 1 else chain_name((s.i(c[0]),)))
            # drop i(ak)
            fl.append(chain_name(c[:-1]) if k > 1 else chain_name((s.t(c[0]),)))
            # drop an inner flag member i(a_j) = t(a_{j+1}): compose
            for j in range(k - 1):
                merged = c[:j] + (s.compose(c[j], c[j + 1]),) + c[j + 2:]
                fl.append(chain_name(merged))
            faces[chain_name(c)] = fl
    return scwol_from_complex(faces)


def disjoint_union(*parts: Scwol, prefixes: Sequence[str] | None = None) -> Scwol:
    prefixes = prefixes or [f"{k}:" for k in range(len(parts))]
    vs, es, cs = [], {}, {}
    for pre, s in zip(prefixes, parts):
        vs.extend(pre + v for v in s.vertices)
        es.update({pre + a: (pre + x, pre + y) for a, (x, y) in s.edges.items()})
        cs.update({(pre + a, pre + b): pre + ab for (a, b), ab in s.compositions.items()})
    return Scwol(vs, es, cs)


def point_scwol(name: str = "*") -> Scwol:
    return Scwol([name], {}, {})


# ---------------------------------------------------------- edge paths

@dataclass(frozen=True)
class OrientedEdge:
    """``a+`` runs from ``t(a)`` to ``i(a)``; ``a-`` runs from ``i(a)`` to ``t(a)``."""

    base: str
    sign: int = PLUS

    def inverse(self) -> "OrientedEdge":
        return OrientedEdge(self.base, -self.sign)

    def start(self, s: Scwol) -> str:
        return s.t(self.base) if self.sign == PLUS else s.i(self.base)

    def end(self, s: Scwol) -> str:
        return s.i(self.base) if self.sign == PLUS else s.t(self.base)

    def __str__(self) -> str:
        return self.base + ("+" if self.sign == PLUS else "-")


@dataclass(frozen=True)
class EdgePath:
    start: str
    edges: tuple[OrientedEdge, ...]

    def end(self, s: Scwol) -> str:
        return self.edges[-1].end(s) if self.edges else self.start

    def is_valid(self, s: Scwol) -> bool:
        v = self.start
        for e in self.edges:
            if e.start(s) != v:
                return False
            v = e.end(s)
        return True

    def inverse(self, s: Scwol) -> "EdgePath":
        return EdgePath(self.end(s), tuple(e.inverse() for e in reversed(self.edges)))


# ------------------------------------------------------------ morphisms

@dataclass(frozen=True)
class MorphismFlags:
    valid: bool
    nondegenerate: bool
    covering: bool
    errors: tuple = ()

    def to_json(self) -> dict:
        return {"valid": self.valid, "nondegenerate": self.nondegenerate,
                "covering": self.covering, "errors": list(self.errors)}


class ScwolMorphism:
    """A morphism of scwols given by vertex and edge maps."""

    def __init__(self, source: Scwol, target: Scwol, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        self.edge_map = dict(edge_map)
        missing = [a for a in source.edges if a not in self.edge_map]
        if missing:
            raise ScwolError(f"edges {missing} have no image; edges must map to edges")
        missing = [v for v in source.vertices if v not in self.vertex_map]
        if missing:
            raise ScwolError(f"vertices {missing} have no image")

    def __call__(self, x: str) -> str:
        return self.vertex_map[x] if x in self.vertex_map else self.edge_map[x]

    @classmethod
    def identity(cls, s: Scwol) -> "ScwolMorphism":
        return cls(s, s, {v: v for v in s.vertices}, {a: a for a in s.edges})

    def then(self, other: "ScwolMorphism") -> "ScwolMorphism":
        """``other o self``."""
        return ScwolMorphism(self.source, other.target,
                             {v: other.vertex_map[w] for v, w in self.vertex_map.items()},
                             {a: other.edge_map[b] for a, b in self.edge_map.items()})

    def is_bijective(self) -> bool:
        return (sorted(self.vertex_map.values()) == list(self.target.vertices)
                and sorted(self.edge_map.values()) == sorted(self.target.edges))

    def inverse(self) -> "ScwolMorphism":
        if not self.is_bijective():
            raise ScwolError("morphism is not bijective")
        return ScwolMorphism(self.target, self.source,
                             {w: v for v, w in self.vertex_map.items()},
                             {b: a for a, b in self.edge_map.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, ScwolMorphism) and self.vertex_map == other.vertex_map
                and self.edge_map == other.edge_map)

    def to_json(self) -> dict:
        return {"vertex_map": dict(sorted(self.vertex_map.items())),
                "edge_map": dict(sorted(self.edge_map.items()))}


def check_morphism(m: ScwolMorphism) -> MorphismFlags:
    s, x = m.source, m.target
    errs = []
    for v, w in m.vertex_map.items():
        if w not in x.vertices:
            errs.append({"kind": "vertex", "vertex": v})
    for a, b in m.edge_map.items():
        if b not in x.edges:
            errs.append({"kind": "edge", "edge": a})
        elif m.vertex_map[s.i(a)] != x.i(b) or m.vertex_map[s.t(a)] != x.t(b):
            errs.append({"kind": "endpoints", "edge": a})
    if not errs:
        for (a, b), ab in s.compositions.items():
            if x.compositions.get((m.edge_map[a], m.edge_map[b])) != m.edge_map[ab]:
                errs.append({"kind": "composition", "pair": [a, b]})
    if errs:
        return MorphismFlags(False, False, False, tuple(errs))
    nondeg = all(_bijects(m, s.edges_from(v), x.edges_from(m.vertex_map[v])) for v in s.vertices)
    cov = nondeg and all(_bijects(m, s.edges_to(v), x.edges_to(m.vertex_map[v])) for v in s.vertices)
    cov = cov and connectivity(x)["connected"]
    return MorphismFlags(True, nondeg, cov)


def _bijects(m: ScwolMorphism, edges: list[str], onto: list[str]) -> bool:
    imgs = [m.edge_map[a] for a in edges]
    return len(set(imgs)) == len(imgs) and set(imgs) == set(onto)


def find_isomorphism(a: Scwol, b: Scwol) -> ScwolMorphism | None:
    """Some isomorphism ``a -> b`` found by backtracking, or ``None``."""
    from .actions import _scwol_isomorphisms
    for vm, em in _scwol_isomorphisms(a, b, first_only=True):
        return ScwolMorphism(a, b, vm, em)
    return None


# ---------------------------------------------------------- connectivity

def _adjacency(s: Scwol) -> dict[str, list[tuple[str, str]]]:
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in s.vertices}
    for a, (x, y) in s.edges.items():
        adj[x].append((a, y))
        adj[y].append((a, x))
    return adj


def connectivity(s: Scwol) -> dict:
    adj = _adjacency(s)
    seen: set[str] = set()
    comps = []
    for v in s.vertices:
        if v in seen:
            continue
        comp = []
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for _a, y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return {"connected": len(comps) <= 1, "components": comps}


def bfs_spanning_tree(s: Scwol, root: str | None = None) -> tuple[str, ...]:
    """Canonical maximal tree: breadth-first from ``root`` over sorted edges."""
    adj = _adjacency(s)
    root = root if root is not None else s.vertices[0]
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for a, y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                tree.append(a)
                queue.append(y)
    if len(seen) != len(s.vertices):
        raise ScwolError("scwol is not connected")
    return tuple(sorted(tree))


def spanning_trees(s: Scwol, limit: int | None = None) -> list[tuple[str, ...]]:
    """All maximal trees of the underlying graph, in lexicographic order."""
    edges = sorted(s.edges)
    n = len(s.vertices) - 1
    out = []

    def rec(start, chosen, parent):
        if limit is not None and len(out) >= limit:
            return
        if len(chosen) == n:
            out.append(tuple(chosen))
            return
        for k in range(start, len(edges)):
            if len(edges) - k < n - len(chosen):
                return
            a = edges[k]
            x, y = _root(parent, s.i(a)), _root(parent, s.t(a))
            if x == y:
                continue
            p2 = dict(parent)
            p2[x] = y
            rec(k + 1, chosen + [a], p2)

    rec(0, [], {v: v for v in s.vertices})
    return out


def _root(parent, v):
    while parent[v] != v:
        v = parent[v]
    return v


def tree_paths(s: Scwol, tree: Iterable[str], base: str) -> dict[str, tuple[OrientedEdge, ...]]:
    """The unique tree path from ``base`` to each vertex, as oriented edges."""
    adj: dict[str, list[tuple[str, OrientedEdge]]] = {v: [] for v in s.vertices}
    for a in sorted(tree):
        x, y = s.i(a), s.t(a)
        adj[y].append((x, OrientedEdge(a, PLUS)))
        adj[x].append((y, OrientedEdge(a, MINUS)))
    paths = {base: ()}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for w, e in adj[v]:
            if w not in paths:
                paths[w] = paths[v] + (e,)
                queue.append(w)
    if len(paths) != len(s.vertices):
        raise ScwolError("tree does not span the scwol")
    return paths


def edge_path_presentation(s: Scwol, tree: Iterable[str] | None = None):
    """Presentation of the edge-path group of the 2-skeleton of the realization."""
    from .fp_groups import Presentation
    tree = set(bfs_spanning_tree(s) if tree is None else tree)
    gens = [a for a in s.edges if a not in tree]

    def sym(a):
        return () if a in tree else ((a, 1),)

    rels = []
    for (a, b), ab in s.compositions.items():
        w = sym(a) + sym(b) + tuple((x, -e) for x, e in reversed(sym(ab)))
        rels.append(w)
    return Presentation.make(gens, rels)


YES, NO, UNKNOWN = "Yes", "No", "Unknown"


def simple_connectivity(s: Scwol, budget: int = 100000) -> dict:
    """Three-valued simple-connectivity certificate for a connected scwol."""
    from .fp_groups import BudgetExceeded, abelianization, simplify, todd_coxeter
    if budget <= 0:
        raise ValueError("budget must be positive")
    if not connectivity(s)["connected"]:
        raise ScwolError("scwol is not connected")
    p = simplify(edge_path_presentation(s))
    ab = abelianization(p)
    if not ab.is_trivial():
        return {"answer": NO, "reason": f"abelianization {ab}", "presentation": str(p)}
    if not p.generators:
        return {"answer": YES, "reason": "presentation has no generators", "presentation": str(p)}
    try:
        table = todd_coxeter(p, (), budget)
    except BudgetExceeded:
        return {"answer": UNKNOWN, "reason": f"coset enumeration exceeded {budget} rows",
                "presentation": str(p)}
    if table.index == 1:
        return {"answer": YES, "reason": "coset enumeration collapsed to one coset", "presentation": str(p)}
    return {"answer": NO, "reason": f"fundamental group has order {table.index}", "presentation": str(p)}


# ------------------------------------------------------------------ DOT

def to_dot(s: Scwol, name: str = "X") -> str:
    """1-skeleton of the realization: one node per vertex, one arrow per edge."""
    lines = [f'digraph "{name}" {{']
    for v in s.vertices:
        lines.append(f'  "{v}";')
    for a, (x, y) in s.edges.items():
        lines.append(f'  "{x}" -> "{y}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
