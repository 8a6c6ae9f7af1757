"""Finitely presented groups: presentations, Tietze simplification,
abelianization and bounded Todd-Coxeter coset enumeration.

A word is a tuple of ``(symbol, exponent)`` letters with exponent +1 or -1.
Symbols coming from complexes of groups carry provenance in their names:
``"g:<vertex>:<k>"`` is the k-th element (in sorted order) of the local group
at ``<vertex>``, and ``"e:<edge>"`` is the edge generator ``a+``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .groups import NotWellDefined, Perm, PermGroup

Letter = tuple[str, int]
Word = tuple[Letter, ...]

DEFAULT_BUDGET = 100000
DEFAULT_PASSES = 10


class BudgetExceeded(Exception):
    def __init__(self, budget: int, what: str = "coset table"):
        super().__init__(f"{what} exceeded the budget of {budget} rows")
        self.budget = budget


class NotASpanningTree(ValueError):
    pass


# ---------------------------------------------------------------- words

def word(*letters) -> Word:
    """Build a word from symbols (``"x"``) and pairs (``("x", -1)``)."""
    out = []
    for x in letters:
        if isinstance(x, str):
            out.append((x, 1))
        else:
            s, e = x
            out.append((s, 1 if e > 0 else -1))
    return tuple(out)


def inverse_word(w: Sequence[Letter]) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    stack: list[Letter] = []
    for s, e in w:
        if stack and stack[-1][0] == s and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((s, e))
    return tuple(stack)


def cyclic_reduce(w: Iterable[Letter]) -> Word:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def cyclic_canonical(w: Sequence[Letter]) -> Word:
    """Least rotation of ``w`` or of its inverse; identifies equivalent relators."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, inverse_word(w)):
        for k in range(len(v)):
            cands.append(v[k:] + v[:k])
    return min(cands, key=lambda v: [(s, -e) for s, e in v])


def substitute(w: Sequence[Letter], defs: Mapping[str, Word]) -> Word:
    out: list[Letter] = []
    for s, e in w:
        if s in defs:
            out.extend(defs[s] if e > 0 else inverse_word(defs[s]))
        else:
            out.append((s, e))
    return free_reduce(out)


def word_str(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(s if e > 0 else f"{s}^-1" for s, e in w)


# ---------------------------------------------------------- presentations

@dataclass(frozen=True)
class Presentation:
    """Generators and relators; ``eliminated`` records Tietze substitutions.

    ``eliminated[s]`` is a word for a removed symbol ``s`` in terms of symbols
    that are either current generators or themselves eliminated.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    eliminated: Mapping[str, Word] = field(default_factory=dict)

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generator symbols")
        for r in self.relators:
            for s, e in r:
                if s not in gens:
                    raise ValueError(f"relator uses unknown symbol {s!r}")
                if e not in (1, -1):
                    raise ValueError("exponents must be +1 or -1")

    @classmethod
    def make(cls, generators: Iterable[str], relators: Iterable[Sequence[Letter]], eliminated=None) -> "Presentation":
        rels = []
        seen = set()
        for r in relators:
            r = free_reduce(r)
            if r and r not in seen:
                seen.add(r)
                rels.append(r)
        return cls(tuple(generators), tuple(rels), dict(eliminated or {}))

    @property
    def symbols(self) -> tuple[str, ...]:
        """Every symbol the presentation can evaluate: generators then eliminated ones."""
        return self.generators + tuple(sorted(self.eliminated))

    def express(self, symbol: str) -> Word:
        """Word in the current generators equal to ``symbol``."""
        if symbol in self.generators:
            return ((symbol, 1),)
        if symbol not in self.eliminated:
            raise KeyError(symbol)
        return free_reduce(self.express_word(self.eliminated[symbol]))

    def express_word(self, w: Sequence[Letter]) -> Word:
        out: list[Letter] = []
        for s, e in w:
            sub = self.express(s)
            out.extend(sub if e > 0 else inverse_word(sub))
        return free_reduce(out)

    def add_relators(self, extra: Iterable[Sequence[Letter]]) -> "Presentation":
        extra = [self.express_word(r) for r in extra]
        return Presentation.make(self.generators, list(self.relators) + extra, self.eliminated)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def __str__(self) -> str:
        rels = ", ".join(word_str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [[[s, e] for s, e in r] for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        return cls.make(data["generators"], [tuple((s, int(e)) for s, e in r) for r in data.get("relators", [])])


def simplify(p: Presentation, passes: int = DEFAULT_PASSES, max_def: int = 2) -> Presentation:
    """Bounded, deterministic Tietze simplification.

    Each pass cyclically reduces and deduplicates relators, kills generators
    occurring as a length-1 relator, and eliminates a generator that occurs
    exactly once in some relator of length at most ``max_def + 1`` (that is,
    a definition of length at most ``max_def``).  Shortest relators are used
    first; ties break lexicographically.
    """
    gens = list(p.generators)
    rels = [cyclic_canonical(r) for r in p.relators]
    elim = dict(p.eliminated)
    for _ in range(passes):
        changed = False
        while True:
            rels = sorted({r for r in (cyclic_canonical(r) for r in rels) if r},
                          key=lambda r: (len(r), r))
            pick = None
            for r in rels:
                if len(r) > max_def + 1:
                    break
                counts: dict[str, int] = {}
                for s, _e in r:
                    counts[s] = counts.get(s, 0) + 1
                single = [s for s in sorted(counts) if counts[s] == 1]
                if single:
                    # prefer eliminating the symbol that sorts last, so early
                    # (provenance-wise simpler) generators survive
                    pick = (r, single[-1])
                    break
            if pick is None:
                break
            r, s = pick
            k = next(j for j, (x, _e) in enumerate(r) if x == s)
            e = r[k][1]
            rest = r[k + 1:] + r[:k]  # s^e * rest = 1  =>  s = rest^-1 ^ e
            definition = inverse_word(rest) if e > 0 else rest
            definition = free_reduce(definition)
            elim[s] = definition
            gens.remove(s)
            rels = [substitute(x, {s: definition}) for x in rels if x != r]
            changed = True
        if not changed:
            break
    return Presentation.make(gens, rels, elim)


# ---------------------------------------------------------- abelianization

@dataclass(frozen=True)
class Abelianization:
    torsion: tuple[int, ...]
    free_rank: int

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self):
        """Order of the abelianization, or ``None`` when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) or "1"


def exponent_matrix(p: Presentation) -> list[list[int]]:
    idx = {s: k for k, s in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for s, e in r:
            row[idx[s]] += e
        rows.append(row)
    return rows


def abelianization(p: Presentation) -> Abelianization:
    """Invariant factors of the relation module via the Smith normal form."""
    n = len(p.generators)
    rows = [r for r in exponent_matrix(p) if any(r)]
    if n == 0:
        return Abelianization((), 0)
    if not rows:
        return Abelianization((), n)
    factors = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [d for d in factors if d != 0]
    return Abelianization(tuple(d for d in nonzero if d > 1), n - len(nonzero))


# ------------------------------------------------------------ Todd-Coxeter

class CosetTable:
    """A complete coset table.  ``rows[c][col]`` with ``col = 2*k`` for the
    k-th generator and ``2*k + 1`` for its inverse.  Coset 0 is the subgroup."""

    def __init__(self, presentation: Presentation, rows: list[list[int]], defined: int):
        self.presentation = presentation
        self.rows = rows
        self.defined = defined
        self.complete = True

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, w: Sequence[Letter]) -> int:
        """Right action of a word on a coset number."""
        idx = {s: k for k, s in enumerate(self.presentation.generators)}
        for s, e in w:
            coset = self.rows[coset][2 * idx[s] + (0 if e > 0 else 1)]
        return coset

    def generator_perm(self, symbol: str) -> Perm:
        """Permutation image of a generator as a left action.

        The table gives a right action, an anti-homomorphism in the
        ``(p*q)(x) = p(q(x))`` convention; inverting restores a homomorphism.
        """
        k = self.presentation.generators.index(symbol)
        return Perm(row[2 * k] for row in self.rows).inverse()

    def word_perm(self, w: Sequence[Letter]) -> Perm:
        result = Perm.identity(self.index)
        for s, e in w:
            g = self.generator_perm(s)
            result = result * (g if e > 0 else g.inverse())
        return result

    def symbol_perm(self, symbol: str) -> Perm:
        return self.word_perm(self.presentation.express(symbol))

    def permutation_group(self) -> PermGroup:
        return PermGroup(self.index, [self.generator_perm(s) for s in self.presentation.generators])


class _Enumerator:
    def __init__(self, ngens: int, budget: int):
        self.ncols = 2 * ngens
        self.budget = budget
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]

    @staticmethod
    def inv(col: int) -> int:
        return col ^ 1

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.budget:
            raise BudgetExceeded(self.budget)
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][self.inv(x)] = c

    def merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = self.table[e][x]
                if f == -1:
                    continue
                xi = self.inv(x)
                if self.table[f][xi] == e:
                    self.table[f][xi] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] != -1:
                    self.merge(f1, self.table[e1][x], queue)
                elif self.table[f1][xi] != -1:
                    self.merge(e1, self.table[f1][xi], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][xi] = e1

    def scan_and_fill(self, c: int, w: list[int]) -> None:
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] != -1:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != c:
                    self.coincidence(f, c)
                return
            while j >= i and t[b][self.inv(w[j])] != -1:
                b = t[b][self.inv(w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][self.inv(w[i])] = f
                return
            self.define(f, w[i])


def todd_coxeter(p: Presentation, subgroup_words: Iterable[Sequence[Letter]] = (),
                 budget: int = DEFAULT_BUDGET) -> CosetTable:
    """HLT coset enumeration of the subgroup generated by ``subgroup_words``.

    Relators are scanned shortest first, then lexicographically.  Raises
    :class:`BudgetExceeded` once more than ``budget`` cosets would be defined.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    idx = {s: k for k, s in enumerate(p.generators)}

    def cols(w):
        return [2 * idx[s] + (0 if e > 0 else 1) for s, e in w]

    rels = [cols(r) for r in sorted(p.relators, key=lambda r: (len(r), r))]
    subs = [cols(p.express_word(w)) for w in subgroup_words]
    en = _Enumerator(len(p.generators), budget)
    for w in subs:
        if w:
            en.scan_and_fill(0, w)
    c = 0
    while c < len(en.table):
        if en.live(c):
            for r in rels:
                en.scan_and_fill(c, r)
                if not en.live(c):
                    break
            if en.live(c):
                for x in range(en.ncols):
                    if en.table[c][x] == -1:
                        en.define(c, x)
        c += 1
    live = [c for c in range(len(en.table)) if en.live(c)]
    renum = {c: k for k, c in enumerate(live)}
    rows = [[renum[en.rep(en.table[c][x])] for x in range(en.ncols)] for c in live]
    return CosetTable(p, rows, len(en.table))


def coset_index(p: Presentation, subgroup_words=(), budget: int = DEFAULT_BUDGET):
    """Index of the subgroup, or ``None`` when the enumeration exceeds ``budget``."""
    try:
        return todd_coxeter(p, subgroup_words, budget).index
    except BudgetExceeded:
        return None


# ------------------------------------------------------ maps to perm groups

class PresentationHom:
    """A map from a presented group to a permutation group, checked on relators."""

    def __init__(self, presentation: Presentation, images: Mapping[str, Perm], target: PermGroup | None = None):
        self.presentation = presentation
        self.images = {s: Perm(images[s]) for s in presentation.generators}
        degrees = {len(g) for g in self.images.values()}
        if target is not None:
            degrees.add(target.degree)
        if len(degrees) > 1:
            raise NotWellDefined("images have inconsistent degrees")
        self.degree = degrees.pop() if degrees else (target.degree if target else 1)
        self.target = target if target is not None else PermGroup(self.degree, list(self.images.values()))
        for s, g in self.images.items():
            if g not in self.target:
                raise NotWellDefined(f"image of {s} is not in the target group", witness=s)
        for r in presentation.relators:
            if not self.evaluate(r).is_identity():
                raise NotWellDefined(f"relator {word_str(r)} does not map to the identity", witness=r)

    def evaluate(self, w: Sequence[Letter]) -> Perm:
        w = self.presentation.express_word(w)
        result = Perm.identity(self.degree)
        for s, e in w:
            g = self.images[s]
            result = result * (g if e > 0 else g.inverse())
        return result

    def symbol(self, s: str) -> Perm:
        return self.evaluate(((s, 1),))

    def image(self) -> PermGroup:
        return PermGroup(self.degree, list(self.images.values()))

    def is_surjective(self) -> bool:
        return self.image() == self.target


def hom_to_perm_group(p: Presentation, images: Mapping[str, Sequence[int]], target: PermGroup | None = None) -> PresentationHom:
    return PresentationHom(p, {s: Perm(v) for s, v in images.items()}, target)


# ------------------------------------------- presentations of complexes

def element_symbol(vertex: str, k: int) -> str:
    return f"g:{vertex}:{k}"


def edge_symbol(edge: str) -> str:
    return f"e:{edge}"


def element_word(cog, vertex: str, g: Perm) -> Word:
    """The generator word of a local-group element (empty for the identity)."""
    k = cog.local_groups[vertex].elements.index(Perm(g))
    return () if k == 0 else ((element_symbol(vertex, k), 1),)


def universal_group_presentation(cog) -> Presentation:
    """Presentation of the universal group FG(Y) of a complex of groups.

    Generators are the non-identity local elements and one symbol per edge.
    Relators: the local multiplication tables, ``a+ b+ = g_ab (ab)+`` for
    composable pairs and ``psi_a(g) = a+ g a-`` for every edge and element.
    """
    scw = cog.scwol
    gens: list[str] = []
    rels: list[Word] = []
    for v in scw.vertices:
        elems = cog.local_groups[v].elements
        gens.extend(element_symbol(v, k) for k in range(1, len(elems)))
        pos = {g: k for k, g in enumerate(elems)}
        for x in elems[1:]:
            for y in elems[1:]:
                z = x * y
                w = ((element_symbol(v, pos[x]), 1), (element_symbol(v, pos[y]), 1))
                if pos[z]:
                    w += ((element_symbol(v, pos[z]), -1),)
                rels.append(w)
    gens.extend(edge_symbol(a) for a in scw.edges)
    for (a, b), ab in sorted(scw.compositions.items()):
        t = scw.t(a)
        w = ((edge_symbol(a), 1), (edge_symbol(b), 1), (edge_symbol(ab), -1))
        rels.append(w + inverse_word(element_word(cog, t, cog.twist(a, b))))
    for a in scw.edges:
        src = scw.i(a)
        psi = cog.edge_homs[a]
        for g in cog.local_groups[src].elements[1:]:
            w = ((edge_symbol(a), 1),) + element_word(cog, src, g) + ((edge_symbol(a), -1),)
            rels.append(w + inverse_word(element_word(cog, scw.t(a), psi(g))))
    return Presentation.make(gens, rels)


def check_spanning_tree(scw, tree: Iterable[str]) -> tuple[str, ...]:
    """Validate a maximal tree of the underlying graph; returns it sorted."""
    tree = tuple(sorted(set(tree)))
    for a in tree:
        if a not in scw.edges:
            raise NotASpanningTree(f"unknown edge {a!r}")
    if len(tree) != len(scw.vertices) - 1:
        raise NotASpanningTree(f"a maximal tree needs {len(scw.vertices) - 1} edges, got {len(tree)}")
    parent = {v: v for v in scw.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in tree:
        x, y = find(scw.i(a)), find(scw.t(a))
        if x == y:
            raise NotASpanningTree(f"edge {a!r} closes a cycle")
        parent[x] = y
    return tree


def pi1_presentation(cog, tree: Iterable[str], passes: int = DEFAULT_PASSES, simplified: bool = True) -> Presentation:
    """Presentation of the fundamental group relative to a maximal tree."""
    tree = check_spanning_tree(cog.scwol, tree)
    p = universal_group_presentation(cog)
    p = Presentation.make(p.generators, list(p.relators) + [((edge_symbol(a), 1),) for a in tree])
    return simplify(p, passes) if simplified else p
