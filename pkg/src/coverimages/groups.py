"""Finite groups given by Cayley tables, and diagrams of them.

Elements are the indices ``0..n-1`` with ``0`` the identity.  Subgroups are
sorted index tuples.  The two relations on homomorphisms into a common group
are

* ``commutes``: every element of ``Im f`` commutes with every element of
  ``Im g``; the image of ``g`` is the centralizer of ``Im g``;
* ``normalizes``: ``g`` is injective and ``Im f`` lies in the normalizer of
  ``Im g``; the image of an injective ``g`` is that normalizer.

Diagram-level images are intersections of preimages of componentwise
images, see :func:`lifted_group_image`; :func:`subdiagram_oracle` recomputes
them by enumerating every compatible family of subgroups.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CertificationError, GuardExceeded, MissingComponentImage
from .fincat import FiniteCategory, LawCheck, poset_category

RELATIONS = ("commutes", "normalizes")
DEFAULT_SUBGROUP_GUARD = 16


class FiniteGroup:
    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, name="G", check=True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.labels = tuple(labels) if labels is not None else tuple(str(k) for k in range(self.order))
        self.name = name
        if check:
            problem = _check_group_table(self.table)
            if problem:
                raise ValueError(f"group {name}: {problem}")
        self.inverse = tuple(next(y for y in range(self.order) if self.table[x][y] == 0) for x in range(self.order))

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, x: int, s: int) -> int:
        """``x s x^-1``."""
        return self.table[self.table[x][s]][self.inverse[x]]

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table and self.labels == other.labels

    def __hash__(self):
        return hash(self.table)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order {self.order})"


def _check_group_table(table) -> str | None:
    n = len(table)
    if n == 0:
        return "empty table"
    for k, row in enumerate(table):
        if len(row) != n:
            return f"row {k} has length {len(row)}"
        if any(not 0 <= x < n for x in row):
            return f"row {k} has an out-of-range entry"
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            return f"element 0 is not an identity (fails at {a})"
    for a in range(n):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(n)):
            return f"element {a} has no inverse"
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    return f"associativity fails at ({a},{b},{c})"
    return None


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return self.map == other.map and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)


def check_hom(h: GroupHom) -> LawCheck:
    S, T = h.source, h.target
    if len(h.map) != S.order or any(not 0 <= y < T.order for y in h.map):
        return LawCheck(False, ("shape", len(h.map)))
    for x in S.elements:
        for y in S.elements:
            if h.map[S.mul(x, y)] != T.mul(h.map[x], h.map[y]):
                return LawCheck(False, (x, y))
    return LawCheck(True)


def make_hom(source: FiniteGroup, target: FiniteGroup, mapping, name=None) -> GroupHom:
    h = GroupHom(source, target, tuple(mapping), name)
    check = check_hom(h)
    if not check:
        raise ValueError(f"not a homomorphism {name or ''}: fails at {check.witness}")
    return h


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(G.elements), f"id_{G.name}")


def zero_hom(S: FiniteGroup, T: FiniteGroup) -> GroupHom:
    return GroupHom(S, T, (0,) * S.order, "0")


def compose_hom(h: GroupHom, k: GroupHom) -> GroupHom:
    """``h . k``."""
    if k.target != h.source:
        raise ValueError("homomorphisms are not composable")
    return GroupHom(k.source, h.target, tuple(h.map[x] for x in k.map))


@dataclass(frozen=True)
class Subgroup:
    ambient: FiniteGroup
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    def __contains__(self, x):
        return x in self._set

    @property
    def _set(self):
        return frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __le__(self, other: "Subgroup"):
        return self._set <= other._set

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def labels(self) -> list[str]:
        return [self.ambient.labels[x] for x in self.elements]

    def as_group(self, name=None) -> tuple[FiniteGroup, GroupHom]:
        """The subgroup as a group in its own right, with its inclusion."""
        G = self.ambient
        pos = {x: k for k, x in enumerate(self.elements)}
        table = [[pos[G.mul(a, b)] for b in self.elements] for a in self.elements]
        H = FiniteGroup(table, [G.labels[x] for x in self.elements], name=name or f"{G.name}_sub", check=False)
        return H, GroupHom(H, G, self.elements, "incl")

    def __repr__(self):
        return f"Subgroup({self.ambient.name}, {{{', '.join(self.labels())}}})"


def check_subgroup(S: Subgroup) -> LawCheck:
    G = S.ambient
    if 0 not in S:
        return LawCheck(False, ("identity",))
    for a in S.elements:
        if G.inv(a) not in S:
            return LawCheck(False, ("inverse", a))
        for b in S.elements:
            if G.mul(a, b) not in S:
                return LawCheck(False, ("product", a, b))
    return LawCheck(True)


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    elems = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = G.mul(x, s)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return Subgroup(G, tuple(elems))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements))


def trivial(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, sorted by (order, elements)."""
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        H = frontier.pop()
        for x in G.elements:
            if x in H:
                continue
            K = generated_subgroup(G, H + (x,)).elements
            if K not in found:
                found.add(K)
                frontier.append(K)
    return [Subgroup(G, e) for e in sorted(found, key=lambda e: (len(e), e))]


def image_subgroup(h: GroupHom) -> Subgroup:
    return Subgroup(h.target, tuple(set(h.map)))


def kernel(h: GroupHom) -> Subgroup:
    return Subgroup(h.source, tuple(x for x in h.source.elements if h.map[x] == 0))


def centralizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    return Subgroup(G, tuple(x for x in G.elements if all(G.mul(x, s) == G.mul(s, x) for s in S.elements)))


def normalizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    members = S._set
    return Subgroup(G, tuple(x for x in G.elements if {G.conj(x, s) for s in S.elements} == members))


def is_normal(H: Subgroup, N: Subgroup) -> bool:
    """Whether ``N`` is a normal subgroup of ``H`` (both in one ambient group)."""
    G = H.ambient
    return N.issubset(H) and all(G.conj(x, n) in N for x in H.elements for n in N.elements)


def _same_target(f: GroupHom, g: GroupHom):
    if f.target != g.target:
        raise ValueError(f"homomorphisms have different targets: {f.target.name} and {g.target.name}")


def commutes_check(f: GroupHom, g: GroupHom) -> bool:
    _same_target(f, g)
    X = f.target
    imf, img = set(f.map), set(g.map)
    return all(X.mul(a, b) == X.mul(b, a) for a in imf for b in img)


def normalizes_check(f: GroupHom, g: GroupHom) -> bool:
    _same_target(f, g)
    if not g.is_injective():
        return False
    return image_subgroup(f).issubset(normalizer(f.target, image_subgroup(g)))


def normalizes_existential(f: GroupHom, g: GroupHom) -> bool:
    """Brute-force form: some subgroup ``H`` contains ``Im f`` with ``Im g`` normal in it.

    ``H`` plays the monomorphism ``h``; ``u`` and ``v`` are the corestrictions
    of ``f`` and ``g``, and ``v`` is a normal mono exactly when ``g`` is
    injective and ``Im g`` is normal in ``H``.
    """
    _same_target(f, g)
    if not g.is_injective():
        return False
    imf, img = image_subgroup(f), image_subgroup(g)
    return any(imf.issubset(H) and is_normal(H, img) for H in subgroups(f.target))


def relation_check(relation: str) -> Callable[[GroupHom, GroupHom], bool]:
    if relation == "commutes":
        return commutes_check
    if relation == "normalizes":
        return normalizes_check
    raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")


def group_image(relation: str, g: GroupHom) -> Subgroup:
    """Image of ``g`` under ``relation`` as a subgroup of the target."""
    X = g.target
    if relation == "commutes":
        return centralizer(X, image_subgroup(g))
    if relation == "normalizes":
        if not g.is_injective():
            raise MissingComponentImage(None, g)
        return normalizer(X, image_subgroup(g))
    raise ValueError(f"unknown relation {relation!r}")


def preimage_subgroup(h: GroupHom, S: Subgroup) -> Subgroup:
    return Subgroup(h.source, tuple(x for x in h.source.elements if h.map[x] in S))


def intersect(subs: Sequence[Subgroup]) -> Subgroup:
    subs = list(subs)
    if not subs:
        raise ValueError("intersection of no subgroups")
    G = subs[0].ambient
    if any(S.ambient != G for S in subs):
        raise ValueError("subgroups live in different groups")
    common = set(subs[0].elements)
    for S in subs[1:]:
        common &= S._set
    return Subgroup(G, tuple(common))


def generators(G: FiniteGroup) -> list[int]:
    """A small generating set, built greedily."""
    gens = []
    H = trivial(G)
    while len(H) < G.order:
        best = max((x for x in G.elements if x not in H), key=lambda x: (len(generated_subgroup(G, H.elements + (x,))), -x))
        gens.append(best)
        H = generated_subgroup(G, H.elements + (best,))
    return gens


def homomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms ``G -> H`` by extending assignments on generators."""
    gens = generators(G)
    out = []
    for images in itertools.product(H.elements, repeat=len(gens)):
        mapping = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for s, t in zip(gens, images):
                y, v = G.mul(x, s), H.mul(mapping[x], t)
                if y in mapping:
                    if mapping[y] != v:
                        ok = False
                        break
                else:
                    mapping[y] = v
                    frontier.append(y)
        if ok:
            h = GroupHom(G, H, tuple(mapping[x] for x in G.elements))
            if check_hom(h):
                out.append(h)
    return sorted(set(out), key=lambda h: h.map)


# -- diagrams ------------------------------------------------------------------


class GroupDiagram:
    """A functor from a finite index category into finite groups."""

    def __init__(self, index: FiniteCategory, groups: Mapping, homs: Mapping, name="D", check=True):
        self.index = index
        self.groups = dict(groups)
        self.homs = dict(homs)
        self.name = name
        if check:
            res = check_diagram(self)
            if not res:
                raise ValueError(f"diagram {name} is not a functor: {res.witness}")

    def __getitem__(self, x):
        if x in self.groups:
            return self.groups[x]
        return self.homs[x]

    def __eq__(self, other):
        if not isinstance(other, GroupDiagram):
            return NotImplemented
        return self.index == other.index and self.groups == other.groups and self.homs == other.homs

    def __hash__(self):
        return hash(tuple(self.homs[m].map for m in self.index.morphisms))

    def __repr__(self):
        return f"GroupDiagram({self.name!r}: {', '.join(G.name for G in self.groups.values())})"


def check_diagram(D: GroupDiagram) -> LawCheck:
    I = D.index
    for X in I.objects:
        if X not in D.groups:
            return LawCheck(False, ("totality", X))
    for m in I.morphisms:
        h = D.homs.get(m)
        if h is None:
            return LawCheck(False, ("totality", m))
        if h.source != D.groups[I.dom[m]] or h.target != D.groups[I.cod[m]]:
            return LawCheck(False, ("dom/cod", m))
        if not check_hom(h):
            return LawCheck(False, ("homomorphism", m))
    for X in I.objects:
        if D.homs[I.identity[X]].map != tuple(D.groups[X].elements):
            return LawCheck(False, ("identity", X))
    for (g, f), h in I.comp_table.items():
        if compose_hom(D.homs[g], D.homs[f]).map != D.homs[h].map:
            return LawCheck(False, ("composition", (g, f, h)))
    return LawCheck(True)


class DiagramHom:
    """A natural transformation between group diagrams."""

    def __init__(self, source: GroupDiagram, target: GroupDiagram, components: Mapping, name="g", check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name
        if check:
            res = check_diagram_hom(self)
            if not res:
                raise ValueError(f"{name} is not natural: {res.witness}")

    def __getitem__(self, x) -> GroupHom:
        return self.components[x]


def check_diagram_hom(g: DiagramHom) -> LawCheck:
    I = g.source.index
    for X in I.objects:
        h = g.components.get(X)
        if h is None:
            return LawCheck(False, ("totality", X))
        if h.source != g.source.groups[X] or h.target != g.target.groups[X] or not check_hom(h):
            return LawCheck(False, ("component", X))
    for i in I.morphisms:
        X, Y = I.dom[i], I.cod[i]
        if compose_hom(g.target.homs[i], g[X]).map != compose_hom(g[Y], g.source.homs[i]).map:
            return LawCheck(False, ("naturality", i))
    return LawCheck(True)


def chain_diagram(index: FiniteCategory, groups: Mapping, generating_homs: Mapping, name="D") -> GroupDiagram:
    """Fill identities and composites of a diagram given on generating arrows."""
    homs = {I_id: identity_hom(groups[X]) for X, I_id in index.identity.items()}
    homs.update(generating_homs)
    changed = True
    while changed:
        changed = False
        for (g, f), h in index.comp_table.items():
            if h not in homs and g in homs and f in homs:
                homs[h] = compose_hom(homs[g], homs[f])
                changed = True
    return GroupDiagram(index, groups, homs, name=name)


def sub_diagram(C: GroupDiagram, family: Mapping, name="A") -> tuple[GroupDiagram, DiagramHom]:
    """A compatible family of subgroups as a diagram with its inclusion into ``C``."""
    I = C.index
    groups, incl = {}, {}
    for X in I.objects:
        groups[X], incl[X] = family[X].as_group(name=f"{name}({X})")
    homs = {}
    for i in I.morphisms:
        X, Y = I.dom[i], I.cod[i]
        pos = {x: k for k, x in enumerate(family[Y].elements)}
        try:
            homs[i] = GroupHom(groups[X], groups[Y], tuple(pos[C.homs[i].map[x]] for x in family[X].elements))
        except KeyError:
            raise CertificationError(f"C({i}) does not map {X} into {Y} within the family") from None
    A = GroupDiagram(I, groups, homs, name=name)
    return A, DiagramHom(A, C, incl, name="incl")


def is_compatible(C: GroupDiagram, family: Mapping) -> bool:
    I = C.index
    return all(
        all(C.homs[i].map[x] in family[I.cod[i]] for x in family[I.dom[i]].elements) for i in I.morphisms
    )


@dataclass
class GroupDiagramImage:
    """Subgroup family ``A(X) <= C(X)`` with its diagram and inclusion."""

    subgroups: dict
    diagram: GroupDiagram
    inclusion: DiagramHom
    componentwise: dict | None = None

    def element_sets(self) -> dict:
        return {X: S.elements for X, S in self.subgroups.items()}


def lifted_group_image(relation: str, Cdiag: GroupDiagram, g: DiagramHom) -> GroupDiagramImage:
    """Image of ``g`` in the diagram category under ``relation``.

    ``A(X)`` is the intersection over all ``i: X -> Y`` (including ``1_X``) of
    the preimage of the componentwise image at ``Y`` along ``C(i)``.
    """
    I = Cdiag.index
    comp = {}
    for Y in I.objects:
        try:
            comp[Y] = group_image(relation, g[Y])
        except MissingComponentImage:
            raise MissingComponentImage(Y, g[Y]) from None
    family = {}
    for X in I.objects:
        family[X] = intersect(
            [preimage_subgroup(Cdiag.homs[i], comp[I.cod[i]]) for i in I.morphisms if I.dom[i] == X]
        )
    if not is_compatible(Cdiag, family):
        raise CertificationError("restricted maps leave the constructed family")
    A, incl = sub_diagram(Cdiag, family)
    return GroupDiagramImage(family, A, incl, comp)


def subdiagram_oracle(relation: str, Cdiag: GroupDiagram, g: DiagramHom, guard: int = DEFAULT_SUBGROUP_GUARD):
    """Greatest compatible subgroup family whose inclusion relates to ``g``.

    Every family ``S(X) <= C(X)`` preserved by all ``C(i)`` is enumerated and
    tested with elementwise commuting or the existential normalizing test.
    Returns None when the satisfying families have no greatest element.
    """
    I = Cdiag.index
    for X in I.objects:
        if Cdiag.groups[X].order > guard:
            raise GuardExceeded(f"subgroup enumeration at {X}", Cdiag.groups[X].order, guard)
    if relation == "commutes":
        test = commutes_check
    elif relation == "normalizes":
        test = normalizes_existential
    else:
        raise ValueError(f"unknown relation {relation!r}")

    lattices = [subgroups(Cdiag.groups[X]) for X in I.objects]
    good = []
    for combo in itertools.product(*lattices):
        family = dict(zip(I.objects, combo))
        if not is_compatible(Cdiag, family):
            continue
        if all(test(family[X].as_group()[1], g[X]) for X in I.objects):
            good.append(family)
    tops = [F for F in good if all(all(G[X].issubset(F[X]) for X in I.objects) for G in good)]
    if not tops:
        return None
    A, incl = sub_diagram(Cdiag, tops[0])
    return GroupDiagramImage(tops[0], A, incl)


def subgroup_lattice_category(G: FiniteGroup, name=None) -> tuple[FiniteCategory, list[Subgroup]]:
    """Poset category of all subgroups of ``G`` under inclusion, objects ``H0, H1, ...``."""
    subs = subgroups(G)
    names = [f"H{k}" for k in range(len(subs))]
    gens = [(names[a], names[b]) for a, b in itertools.permutations(range(len(subs)), 2) if subs[a].issubset(subs[b])]
    return poset_category(names, gens, name=name or f"Sub({G.name})"), subs


# -- standard groups -------------------------------------------------------------


def group_from_generators(gens: Sequence, mul: Callable, identity, label: Callable = str, name="G") -> FiniteGroup:
    """Closure of ``gens`` under ``mul``, ordered breadth-first from ``identity``."""
    elems = [identity]
    seen = {identity}
    k = 0
    while k < len(elems):
        x = elems[k]
        for s in gens:
            y = mul(x, s)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        k += 1
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, [label(e) for e in elems], name=name)


def cyclic(n: int, name=None) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], [str(a) for a in range(n)], name=name or f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name=None) -> FiniteGroup:
    pairs = [(a, b) for a in G.elements for b in H.elements]
    pos = {p: k for k, p in enumerate(pairs)}
    table = [[pos[(G.mul(a, c), H.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({G.labels[a]},{H.labels[b]})" for a, b in pairs]
    return FiniteGroup(table, labels, name=name or f"{G.name}x{H.name}")


def _perm_mul(p, q):
    # (p q)(x) = p(q(x)): apply q first
    return tuple(p[q[x]] for x in range(len(q)))


def _cycle_label(p) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "()"


def symmetric3() -> FiniteGroup:
    return group_from_generators([(1, 0, 2), (1, 2, 0)], _perm_mul, (0, 1, 2), _cycle_label, name="S3")


def dihedral4() -> FiniteGroup:
    """Symmetries of a square, as permutations of its vertices."""
    return group_from_generators([(1, 2, 3, 0), (0, 3, 2, 1)], _perm_mul, (0, 1, 2, 3), _cycle_label, name="D4")


_QUAT_UNITS = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def _quat_mul(a, b):
    s, u = _QUAT_UNITS[(a[1], b[1])]
    return (a[0] * b[0] * s, u)


def quaternion8() -> FiniteGroup:
    return group_from_generators(
        [(1, "i"), (1, "j")], _quat_mul, (1, "1"), lambda q: ("-" if q[0] < 0 else "") + q[1], name="Q8"
    )


def klein4() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2), name="V4")


def standard_groups() -> dict[str, FiniteGroup]:
    return {
        "Z1": cyclic(1),
        "Z2": cyclic(2),
        "Z3": cyclic(3),
        "Z4": cyclic(4),
        "Z6": cyclic(6),
        "V4": klein4(),
        "S3": symmetric3(),
        "D4": dihedral4(),
        "Q8": quaternion8(),
    }
