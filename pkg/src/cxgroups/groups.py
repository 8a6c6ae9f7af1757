"""Finite permutation groups, subgroups, cosets and homomorphisms.

Groups are small, so everything is done by exhaustive enumeration of the
element list.  Permutations compose right-to-left: ``(p * q)(x) == p(q(x))``,
which makes ``g.act(h.act(x)) == (g * h).act(x)`` a left action.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Sequence

DEFAULT_CAP = 20000


class GroupError(Exception):
    pass


class CapExceeded(GroupError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeds the element cap ({cap})")
        self.cap = cap


class NotSubgroup(GroupError):
    pass


class NotWellDefined(GroupError):
    """A map given on generators does not extend to a homomorphism."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Perm(tuple):
    """A permutation of ``range(len(self))`` stored as its image array."""

    def __new__(cls, images: Iterable[int] = ()):
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(degree))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):  # type: ignore[override]
        if not isinstance(other, Perm):
            return NotImplemented
        if len(other) != len(self):
            raise ValueError("degree mismatch")
        return Perm(self[x] for x in other)

    __rmul__ = None  # tuple repetition by int is not a group operation

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inverse() ** (-n)
        result = Perm.identity(len(self))
        for _ in range(n):
            result = self * result
        return result

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for x, y in enumerate(self):
            inv[y] = x
        return Perm(inv)

    def act(self, x: int) -> int:
        return self[x]

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self))

    def conjugate(self, by: "Perm") -> "Perm":
        """Return ``by * self * by^-1``."""
        return by * self * by.inverse()

    def order(self) -> int:
        n, p = 1, self
        while not p.is_identity():
            p = self * p
            n += 1
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for x in range(len(self)):
            if x in seen or self[x] == x:
                seen.add(x)
                continue
            cyc = [x]
            seen.add(x)
            y = self[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self[y]
            out.append(tuple(cyc))
        return out

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Perm{body}[{len(self)}]"


def closure(degree: int, generators: Iterable[Perm], cap: int = DEFAULT_CAP) -> list[Perm]:
    """Elements of the group generated by ``generators`` in BFS order from the identity."""
    gens = [Perm(g) for g in generators]
    ident = Perm.identity(degree)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = s * x
            if y not in seen:
                seen.add(y)
                order.append(y)
                if len(seen) > cap:
                    raise CapExceeded(cap)
                queue.append(y)
    return order


class PermGroup:
    """A finite group of permutations of ``range(degree)``.

    The element list is computed lazily by closure and cached; instances are
    treated as immutable.  Two groups compare equal when they have the same
    degree and the same element set.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), cap: int = DEFAULT_CAP):
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(Perm(g) for g in generators)
        for g in self.generators:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation of degree {degree}: {list(g)}")
        self.cap = cap
        self._bfs: list[Perm] | None = None
        self._elements: list[Perm] | None = None
        self._set: frozenset[Perm] | None = None

    @classmethod
    def trivial(cls, degree: int = 1) -> "PermGroup":
        return cls(degree, [])

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        if n < 2:
            return cls(n, [])
        gens = [Perm.from_cycles(n, (0, 1))]
        if n > 2:
            gens.append(Perm.from_cycles(n, tuple(range(n))))
        return cls(n, gens)

    @classmethod
    def cyclic(cls, n: int) -> "PermGroup":
        if n == 1:
            return cls(1, [])
        return cls(n, [Perm.from_cycles(n, tuple(range(n)))])

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Perm]) -> "PermGroup":
        """Subgroup given by a full element set; a small generating set is extracted."""
        elems = sorted(set(elements))
        gens: list[Perm] = []
        span = {Perm.identity(degree)}
        for x in elems:
            if x not in span:
                gens.append(x)
                span = set(closure(degree, gens))
        group = cls(degree, gens)
        if span != set(elems):
            raise NotSubgroup("element set is not closed under multiplication")
        return group

    def _compute(self) -> None:
        if self._bfs is None:
            self._bfs = closure(self.degree, self.generators, self.cap)
            self._elements = sorted(self._bfs)
            self._set = frozenset(self._bfs)

    @property
    def elements(self) -> list[Perm]:
        """All elements, lexicographically sorted."""
        self._compute()
        return self._elements  # type: ignore[return-value]

    @property
    def bfs_elements(self) -> list[Perm]:
        """All elements in breadth-first order over generator words, identity first."""
        self._compute()
        return self._bfs  # type: ignore[return-value]

    @property
    def element_set(self) -> frozenset[Perm]:
        self._compute()
        return self._set  # type: ignore[return-value]

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def order(self) -> int:
        return len(self.element_set)

    def __len__(self) -> int:
        return self.order()

    def __contains__(self, g) -> bool:
        return Perm(g) in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.element_set == other.element_set

    def __hash__(self) -> int:
        return hash((self.degree, self.element_set))

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order()})"

    def subgroup(self, generators: Iterable[Sequence[int]]) -> "PermGroup":
        sub = PermGroup(self.degree, generators, self.cap)
        if not sub.element_set <= self.element_set:
            raise NotSubgroup("generators are not elements of the ambient group")
        return sub

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.element_set <= other.element_set

    def index_in(self, other: "PermGroup") -> int:
        if not self.is_subgroup_of(other):
            raise NotSubgroup("not a subgroup")
        return other.order() // self.order()

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "PermGroup":
        return cls(int(data["degree"]), data.get("generators", []))


def enumerate_group(g: PermGroup, cap: int = DEFAULT_CAP) -> list[Perm]:
    """Full element list of ``g`` in canonical order; raises ``CapExceeded``."""
    return sorted(closure(g.degree, g.generators, cap))


def is_subgroup(g: PermGroup, elements: Iterable[Perm]) -> bool:
    elems = set(map(Perm, elements))
    if not elems or not elems <= g.element_set:
        return False
    if Perm.identity(g.degree) not in elems:
        return False
    return all(x * y.inverse() in elems for x in elems for y in elems)


def _as_subgroup(g: PermGroup, h) -> frozenset[Perm]:
    elems = h.element_set if isinstance(h, PermGroup) else frozenset(map(Perm, h))
    if not is_subgroup(g, elems):
        raise NotSubgroup("not a subgroup of the ambient group")
    return elems


def left_cosets(g: PermGroup, h) -> list[tuple[Perm, frozenset[Perm]]]:
    """Left cosets ``xH`` as ``(representative, members)``, sorted by representative.

    The representative is the lexicographically least member.
    """
    hs = _as_subgroup(g, h)
    seen: set[Perm] = set()
    out = []
    for x in g.elements:
        if x in seen:
            continue
        coset = frozenset(x * y for y in hs)
        seen |= coset
        out.append((min(coset), coset))
    out.sort()
    return out


def coset_rep_map(g: PermGroup, h) -> dict[Perm, Perm]:
    """Map each element of ``g`` to the canonical representative of its left coset."""
    table = {}
    for rep, coset in left_cosets(g, h):
        for x in coset:
            table[x] = rep
    return table


def is_normal(g: PermGroup, h) -> bool:
    hs = _as_subgroup(g, h)
    return all(x * y * x.inverse() in hs for x in g.generators for y in hs)


def conjugate_subgroup(h: PermGroup, x: Perm) -> PermGroup:
    """The subgroup ``x h x^-1``."""
    xi = x.inverse()
    return PermGroup(h.degree, [x * y * xi for y in h.generators])


def all_subgroups(g: PermGroup, cap: int = DEFAULT_CAP) -> list[PermGroup]:
    """Every subgroup of ``g``, sorted by order then by sorted element list.

    Subgroups are grown from cyclic ones by adjoining one element at a time;
    a candidate whose order does not divide ``|g|`` cannot occur.
    """
    n = g.order()
    if n > cap:
        raise CapExceeded(cap)
    found: dict[frozenset, PermGroup] = {}
    trivial = PermGroup(g.degree, [])
    found[trivial.element_set] = trivial
    frontier = [trivial]
    while frontier:
        new = []
        for sub in frontier:
            for x in g.elements:
                if x in sub.element_set:
                    continue
                cand = PermGroup(g.degree, list(sub.generators) + [x])
                if n % cand.order():
                    raise GroupError("Lagrange violated; ambient group is inconsistent")
                if cand.element_set not in found:
                    found[cand.element_set] = cand
                    new.append(cand)
        frontier = new
    return sorted(found.values(), key=lambda s: (s.order(), s.elements))


class GroupHom:
    """A homomorphism between permutation groups, tabulated on every element.

    Build one with :func:`hom_from_generator_images` or :meth:`from_pairs`;
    construction fails with :class:`NotWellDefined` unless the assignment
    extends to a homomorphism.
    """

    def __init__(self, source: PermGroup, target: PermGroup, table: dict[Perm, Perm]):
        self.source = source
        self.target = target
        self.table = table

    @classmethod
    def from_pairs(cls, source: PermGroup, target: PermGroup, pairs: Iterable[tuple[Perm, Perm]]) -> "GroupHom":
        """Extend ``x -> y`` for the given pairs to all of ``source``.

        The ``x`` must generate ``source``.  The extension is checked along
        every edge of the Cayley graph of ``source`` for these generators,
        which is equivalent to checking the full multiplication table.
        """
        pairs = [(Perm(x), Perm(y)) for x, y in pairs]
        for x, y in pairs:
            if x not in source.element_set:
                raise NotWellDefined(f"{x!r} is not in the source group", witness=x)
            if y not in target.element_set:
                raise NotWellDefined(f"{y!r} is not in the target group", witness=y)
        ident = source.identity
        table = {ident: target.identity}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            fx = table[x]
            for s, fs in pairs:
                y = s * x
                fy = fs * fx
                if y in table:
                    if table[y] != fy:
                        raise NotWellDefined("assignment is not compatible with the group relations",
                                             witness=(s, x))
                else:
                    table[y] = fy
                    queue.append(y)
        if len(table) != source.order():
            raise NotWellDefined("given elements do not generate the source group")
        return cls(source, target, table)

    @classmethod
    def identity(cls, group: PermGroup) -> "GroupHom":
        return cls(group, group, {x: x for x in group.elements})

    @classmethod
    def inclusion(cls, sub: PermGroup, group: PermGroup) -> "GroupHom":
        if not sub.is_subgroup_of(group):
            raise NotSubgroup("not a subgroup")
        return cls(sub, group, {x: x for x in sub.elements})

    @classmethod
    def conjugation(cls, source: PermGroup, target: PermGroup, by: Perm) -> "GroupHom":
        """``x -> by x by^-1`` restricted to ``source``; the image must lie in ``target``."""
        return cls.from_pairs(source, target, [(s, s.conjugate(by)) for s in source.generators])

    @classmethod
    def trivial(cls, source: PermGroup, target: PermGroup) -> "GroupHom":
        return cls(source, target, {x: target.identity for x in source.elements})

    def __call__(self, x: Perm) -> Perm:
        return self.table[Perm(x)]

    def images_of_generators(self) -> list[Perm]:
        return [self.table[g] for g in self.source.generators]

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table.values()) == self.target.element_set

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def kernel(self) -> PermGroup:
        ident = self.target.identity
        return PermGroup.from_elements(self.source.degree, [x for x, y in self.table.items() if y == ident])

    def image(self) -> PermGroup:
        return PermGroup.from_elements(self.target.degree, set(self.table.values()))

    def restrict(self, sub: PermGroup) -> "GroupHom":
        return GroupHom(sub, self.target, {x: self.table[x] for x in sub.elements})

    def corestrict(self, target: PermGroup) -> "GroupHom":
        if not set(self.table.values()) <= target.element_set:
            raise NotSubgroup("image is not contained in the new target")
        return GroupHom(self.source, target, self.table)

    def inverse(self) -> "GroupHom":
        if not self.is_isomorphism():
            raise GroupError("only isomorphisms are invertible")
        return GroupHom(self.target, self.source, {y: x for x, y in self.table.items()})

    def then(self, other: "GroupHom") -> "GroupHom":
        """``other o self``."""
        return GroupHom(self.source, other.target, {x: other.table[y] for x, y in self.table.items()})

    def followed_by_conjugation(self, by: Perm) -> "GroupHom":
        """``Ad(by) o self`` with the same target."""
        byi = by.inverse()
        return GroupHom(self.source, self.target, {x: by * y * byi for x, y in self.table.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.source == other.source and self.table == other.table

    def __hash__(self):
        return hash(frozenset(self.table.items()))

    def __repr__(self) -> str:
        return f"GroupHom({self.source!r} -> {self.target!r})"


def hom_from_generator_images(src: PermGroup, tgt: PermGroup, images: Sequence[Sequence[int]]) -> GroupHom:
    """Homomorphism sending ``src.generators[k]`` to ``images[k]``."""
    if len(images) != len(src.generators):
        raise NotWellDefined(f"expected {len(src.generators)} images, got {len(images)}")
    return GroupHom.from_pairs(src, tgt, zip(src.generators, map(Perm, images)))


def find_element(group: PermGroup, predicate, order: str = "bfs"):
    """First element satisfying ``predicate`` in BFS (default) or lexicographic order."""
    elems = group.bfs_elements if order == "bfs" else group.elements
    for x in elems:
        if predicate(x):
            return x
    return None


def element_subsets_closed(g: PermGroup, k: int) -> list[frozenset]:
    """All ``k``-element subsets of ``g`` closed under products (test oracle helper)."""
    out = []
    ident = g.identity
    others = [x for x in g.elements if x != ident]
    for combo in combinations(others, k - 1):
        s = frozenset(combo) | {ident}
        if all(x * y in s for x in s for y in s):
            out.append(s)
    return out
