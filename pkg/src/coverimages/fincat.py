"""Explicit finite categories and brute-force finite limits.

A :class:`FiniteCategory` stores every morphism and the full composition
table.  Identifiers are arbitrary hashables (short strings in files, tuples
for derived categories such as slices); ordering is always by declaration
index, which is what makes limit and terminal-object choices deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import InvalidCategory, NotComposable, UnknownIdentifier

ObjId = Hashable
MorId = Hashable


class LawCheck(NamedTuple):
    """Outcome of a law check; falsy when the law fails, with a witness."""

    holds: bool
    witness: object = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Violation:
    law: str
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.law} violated: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self):
        return not self.violations

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def __str__(self):
        if not self.violations:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def check_category_data(objects, morphisms, identity, comp) -> ValidationReport:
    """Return every violated law of a raw category description.

    ``morphisms`` is a sequence of ``(mor, dom, cod)`` triples and ``comp`` maps
    ``(g, f)`` to ``g . f``.
    """
    report = ValidationReport()
    add = report.violations.append

    objects = list(objects)
    morphisms = list(morphisms)
    seen = set()
    for o in objects:
        if o in seen:
            add(Violation("duplicate", f"object {o!r} declared twice", (o,)))
        seen.add(o)
    obj_set = set(objects)
    dom, cod = {}, {}
    for m, d, c in morphisms:
        if m in dom:
            add(Violation("duplicate", f"morphism {m!r} declared twice", (m,)))
            continue
        for end in (d, c):
            if end not in obj_set:
                add(Violation("coherence", f"morphism {m!r} refers to unknown object {end!r}", (m, end)))
        dom[m], cod[m] = d, c
    if report.violations:
        return report

    for o in objects:
        i = identity.get(o)
        if i is None:
            add(Violation("identity", f"object {o!r} has no identity", (o,)))
        elif i not in dom:
            add(Violation("identity", f"identity {i!r} of {o!r} is not a morphism", (o, i)))
        elif dom[i] != o or cod[i] != o:
            add(Violation("identity", f"identity {i!r} of {o!r} is not an endomorphism of {o!r}", (o, i)))
    for o in identity:
        if o not in obj_set:
            add(Violation("identity", f"identity declared for unknown object {o!r}", (o,)))

    for (g, f), h in comp.items():
        if g not in dom or f not in dom:
            add(Violation("totality", f"comp entry on unknown morphism at ({g!r},{f!r})", (g, f)))
            continue
        if dom[g] != cod[f]:
            add(Violation("totality", f"comp entry on non-composable pair ({g!r},{f!r})", (g, f)))
            continue
        if h not in dom:
            add(Violation("coherence", f"({g!r},{f!r}) composes to unknown morphism {h!r}", (g, f, h)))
        elif dom[h] != dom[f] or cod[h] != cod[g]:
            add(Violation("coherence", f"{g!r} . {f!r} = {h!r} has wrong domain or codomain", (g, f, h)))
    names = [m for m, _, _ in morphisms]
    out = {o: [] for o in objects}
    for m in names:
        out[dom[m]].append(m)
    for f in names:
        for g in out[cod[f]]:
            if (g, f) not in comp:
                add(Violation("totality", f"totality violated at ({g},{f})", (g, f)))
    if report.violations:
        return report

    for f in names:
        if comp[(identity[cod[f]], f)] != f:
            add(Violation("identity", f"id_{cod[f]} . {f} != {f}", (identity[cod[f]], f)))
        if comp[(f, identity[dom[f]])] != f:
            add(Violation("identity", f"{f} . id_{dom[f]} != {f}", (f, identity[dom[f]])))

    for f in names:
        for g in out[cod[f]]:
            gf = comp[(g, f)]
            for h in out[cod[g]]:
                if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                    add(Violation("associativity", f"associativity violated at ({h},{g},{f})", (h, g, f)))
    return report


class FiniteCategory:
    """A finite category with a fully materialized composition table.

    Parameters
    ----------
    objects : iterable of object ids, in declaration order
    morphisms : iterable of ``(mor, dom, cod)`` triples, in declaration order
    identity : mapping object -> identity morphism
    comp : mapping ``(g, f) -> g . f`` defined exactly on composable pairs
    check : validate all category laws (raises :class:`InvalidCategory`)
    """

    def __init__(self, objects, morphisms, identity, comp, name="C", check=True):
        objects = tuple(objects)
        morphisms = tuple(tuple(m) for m in morphisms)
        identity = dict(identity)
        comp = dict(comp)
        if check:
            report = check_category_data(objects, morphisms, identity, comp)
            if not report:
                raise InvalidCategory(report)
        self.name = name
        self.objects = objects
        self.morphisms = tuple(m for m, _, _ in morphisms)
        self.dom = {m: d for m, d, _ in morphisms}
        self.cod = {m: c for m, _, c in morphisms}
        self.identity = identity
        self._comp = comp
        self._obj_index = {o: k for k, o in enumerate(objects)}
        self._mor_index = {m: k for k, m in enumerate(self.morphisms)}
        hom = {}
        for m in self.morphisms:
            hom.setdefault((self.dom[m], self.cod[m]), []).append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._hash = None

    # -- basic access ------------------------------------------------------

    def hom(self, a: ObjId, b: ObjId) -> tuple:
        return self._hom.get((a, b), ())

    def compose(self, g: MorId, f: MorId) -> MorId:
        try:
            return self._comp[(g, f)]
        except KeyError:
            if g not in self.dom or f not in self.dom:
                raise UnknownIdentifier(f"unknown morphism in ({g!r}, {f!r})") from None
            raise NotComposable(f"{g!r} . {f!r}: dom {self.dom[g]!r} != cod {self.cod[f]!r}") from None

    def compose_all(self, *mors: MorId) -> MorId:
        """Compose right to left: ``compose_all(h, g, f) == h . g . f``."""
        result = mors[-1]
        for m in reversed(mors[:-1]):
            result = self.compose(m, result)
        return result

    @property
    def comp_table(self) -> Mapping:
        return self._comp

    def morphism_triples(self) -> list[tuple]:
        return [(m, self.dom[m], self.cod[m]) for m in self.morphisms]

    def is_identity(self, m: MorId) -> bool:
        return self.identity[self.dom[m]] == m

    def into(self, b: ObjId) -> list:
        return [m for m in self.morphisms if self.cod[m] == b]

    def out_of(self, a: ObjId) -> list:
        return [m for m in self.morphisms if self.dom[m] == a]

    def obj_index(self, o: ObjId) -> int:
        return self._obj_index[o]

    def mor_index(self, m: MorId) -> int:
        return self._mor_index[m]

    def has_object(self, o) -> bool:
        return o in self._obj_index

    def has_morphism(self, m) -> bool:
        return m in self._mor_index

    def relabel(self, obj_map: Mapping, mor_map: Mapping, name=None) -> "FiniteCategory":
        """Isomorphic copy with objects and morphisms renamed."""
        return FiniteCategory(
            [obj_map[o] for o in self.objects],
            [(mor_map[m], obj_map[self.dom[m]], obj_map[self.cod[m]]) for m in self.morphisms],
            {obj_map[o]: mor_map[i] for o, i in self.identity.items()},
            {(mor_map[g], mor_map[f]): mor_map[h] for (g, f), h in self._comp.items()},
            name=name or self.name,
            check=False,
        )

    def __len__(self):
        return len(self.morphisms)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphism_triples() == other.morphism_triples()
            and self.identity == other.identity
            and self._comp == other._comp
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.objects, self.morphisms))
        return self._hash

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def validate_category(raw) -> FiniteCategory | ValidationReport:
    """Build a category from a raw description, or report every violated law.

    ``raw`` is a mapping with keys ``objects``, ``morphisms``, ``identity``,
    ``comp`` and optionally ``name``.
    """
    if isinstance(raw, FiniteCategory):
        raw = {
            "name": raw.name,
            "objects": raw.objects,
            "morphisms": raw.morphism_triples(),
            "identity": raw.identity,
            "comp": raw.comp_table,
        }
    report = check_category_data(raw["objects"], raw["morphisms"], raw["identity"], raw["comp"])
    if not report:
        return report
    return FiniteCategory(
        raw["objects"], raw["morphisms"], raw["identity"], raw["comp"], name=raw.get("name", "C"), check=False
    )


def compose(C: FiniteCategory, g: MorId, f: MorId) -> MorId:
    return C.compose(g, f)


def is_mono(C: FiniteCategory, f: MorId) -> bool:
    """True iff ``f`` is left-cancellable: ``f.g == f.h`` implies ``g == h``."""
    a = C.dom[f]
    for x in C.objects:
        seen = {}
        for g in C.hom(x, a):
            fg = C.compose(f, g)
            if fg in seen:
                return False
            seen[fg] = g
    return True


def terminal_object(C: FiniteCategory) -> ObjId | None:
    for t in C.objects:
        if all(len(C.hom(x, t)) == 1 for x in C.objects):
            return t
    return None


def maximal_objects(C: FiniteCategory) -> list:
    """Objects ``x`` such that any ``x -> y`` is matched by some ``y -> x``.

    Meaningful for preorder-like categories; used to explain missing terminal
    objects.
    """
    out = []
    for x in C.objects:
        if all(C.hom(y, x) for y in C.objects if C.hom(x, y)):
            out.append(x)
    return out


def full_subcategory(C: FiniteCategory, objs: Iterable[ObjId], name=None) -> FiniteCategory:
    keep = set(objs)
    for o in keep:
        if not C.has_object(o):
            raise UnknownIdentifier(f"unknown object {o!r}")
    objects = [o for o in C.objects if o in keep]
    morphisms = [m for m in C.morphisms if C.dom[m] in keep and C.cod[m] in keep]
    mset = set(morphisms)
    return FiniteCategory(
        objects,
        [(m, C.dom[m], C.cod[m]) for m in morphisms],
        {o: C.identity[o] for o in objects},
        {k: h for k, h in C.comp_table.items() if k[0] in mset and k[1] in mset},
        name=name or f"{C.name}|full",
        check=False,
    )


@dataclass(frozen=True)
class SliceCategory:
    """``(C | X)`` with projection maps back to ``C``.

    Slice objects are identified by their arrow into ``X``; slice morphisms are
    triples ``(s, p, q)`` meaning ``s: (A, p) -> (B, q)`` with ``q . s == p``.
    """

    category: FiniteCategory
    base: FiniteCategory
    over: ObjId

    def arrow(self, obj) -> MorId:
        return obj

    def domain(self, obj) -> ObjId:
        return self.base.dom[obj]

    def underlying(self, mor) -> MorId:
        return mor[0]


def slice_category(C: FiniteCategory, X: ObjId) -> SliceCategory:
    if not C.has_object(X):
        raise UnknownIdentifier(f"unknown object {X!r}")
    objs = C.into(X)
    mors = []
    for p in objs:
        for q in objs:
            for s in C.hom(C.dom[p], C.dom[q]):
                if C.compose(q, s) == p:
                    mors.append(((s, p, q), p, q))
    by_src = {}
    for m, p, q in mors:
        by_src.setdefault(p, []).append(m)
    comp = {}
    for (s, p, q), _, _ in mors:
        for t_mor in by_src.get(q, ()):
            t, _, r = t_mor
            comp[(t_mor, (s, p, q))] = (C.compose(t, s), p, r)
    identity = {p: (C.identity[C.dom[p]], p, p) for p in objs}
    cat = FiniteCategory(objs, mors, identity, comp, name=f"({C.name}|{X})", check=False)
    return SliceCategory(cat, C, X)


# -- limits ------------------------------------------------------------------


@dataclass(frozen=True)
class WideCone:
    """A cone ``apex -> dom(family[k])`` with legs aligned to ``family``."""

    apex: ObjId
    legs: tuple
    family: tuple
    certified: bool = False


def _check_family(C: FiniteCategory, family: Sequence[MorId]) -> ObjId:
    if not family:
        raise ValueError("wide pullback of an empty family")
    cods = {C.cod[m] for m in family}
    if len(cods) != 1:
        raise ValueError(f"family does not share a codomain: {sorted(map(repr, cods))}")
    return cods.pop()


def cones_over(C: FiniteCategory, family: Sequence[MorId], apexes=None) -> Iterator[tuple]:
    """Yield every cone ``(apex, legs)`` over ``family`` in declaration order."""
    family = tuple(family)
    for x in C.objects if apexes is None else apexes:
        first = family[0]
        for l0 in C.hom(x, C.dom[first]):
            target = C.compose(first, l0)
            options = [(l0,)]
            for m in family[1:]:
                legs = tuple(l for l in C.hom(x, C.dom[m]) if C.compose(m, l) == target)
                if not legs:
                    break
                options.append(legs)
            else:
                for legs in itertools.product(*options):
                    yield x, legs


def is_cone(C: FiniteCategory, family: Sequence[MorId], apex: ObjId, legs: Sequence[MorId]) -> bool:
    if len(legs) != len(family):
        return False
    composites = set()
    for m, l in zip(family, legs):
        if C.dom[l] != apex or C.cod[l] != C.dom[m]:
            return False
        composites.add(C.compose(m, l))
    return len(composites) == 1


def mediators(C: FiniteCategory, source: tuple, target: tuple) -> list:
    """All ``s: source.apex -> target.apex`` with ``target.legs[k] . s == source.legs[k]``."""
    (sx, slegs), (tx, tlegs) = source, target
    return [s for s in C.hom(sx, tx) if all(C.compose(t, s) == l for t, l in zip(tlegs, slegs))]


def verify_limit(C: FiniteCategory, family: Sequence[MorId], apex: ObjId, legs: Sequence[MorId]) -> LawCheck:
    """Exhaustively check the universal property of a cone over ``family``.

    The witness on failure is ``(competing_cone, number_of_mediators)``, or
    ``("not a cone", legs)``.
    """
    family = tuple(family)
    legs = tuple(legs)
    if not is_cone(C, family, apex, legs):
        return LawCheck(False, ("not a cone", legs))
    for other in cones_over(C, family):
        n = len(mediators(C, other, (apex, legs)))
        if n != 1:
            return LawCheck(False, (other, n))
    return LawCheck(True)


def wide_pullback(C: FiniteCategory, family: Sequence[MorId]) -> WideCone | None:
    """Certified limit of a family of morphisms into a common object, or None."""
    family = tuple(family)
    _check_family(C, family)
    cones = list(cones_over(C, family))
    for apex, legs in cones:
        ok = True
        for other in cones:
            if len(mediators(C, other, (apex, legs))) != 1:
                ok = False
                break
        if ok:
            return WideCone(apex, legs, family, certified=True)
    return None


def pullback(C: FiniteCategory, f: MorId, g: MorId) -> WideCone | None:
    if C.cod[f] != C.cod[g]:
        raise ValueError(f"pullback of non-cospan: cod {C.cod[f]!r} != {C.cod[g]!r}")
    return wide_pullback(C, (f, g))


def maximal_cones(C: FiniteCategory, family: Sequence[MorId]) -> list[tuple]:
    """Cones over ``family`` that are maximal in the preorder "factors through"."""
    family = tuple(family)
    cones = list(cones_over(C, family))
    out = []
    for c in cones:
        if all(mediators(C, d, c) for d in cones if mediators(C, c, d)):
            out.append(c)
    return out


def certify(C: FiniteCategory, cone: WideCone) -> WideCone:
    """Return ``cone`` with its certified flag set from an exhaustive check."""
    ok = verify_limit(C, cone.family, cone.apex, cone.legs).holds
    return WideCone(cone.apex, cone.legs, cone.family, certified=ok)


# -- small builders ------------------------------------------------------------


def poset_category(elements: Sequence, generators: Iterable[tuple], labels: Mapping | None = None, name="P") -> FiniteCategory:
    """Category of the partial order generated by ``generators``.

    One morphism per comparable pair ``a <= b``; it is named ``labels[(a, b)]``
    when given, ``id_a`` for identities, and ``a_to_b`` otherwise.
    """
    labels = dict(labels or {})
    elements = list(elements)
    idx = {e: k for k, e in enumerate(elements)}
    n = len(elements)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in generators:
        leq[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise ValueError(f"generators are not antisymmetric at {elements[i]!r}, {elements[j]!r}")

    def label(a, b):
        if (a, b) in labels:
            return labels[(a, b)]
        if a == b:
            return f"id_{a}"
        return f"{a}_to_{b}"

    mors = []
    name_of = {}
    for a in elements:
        for b in elements:
            if leq[idx[a]][idx[b]]:
                m = label(a, b)
                name_of[(a, b)] = m
                mors.append((m, a, b))
    comp = {}
    for (a, b), f in name_of.items():
        for (b2, c), g in name_of.items():
            if b2 == b:
                comp[(g, f)] = name_of[(a, c)]
    identity = {a: name_of[(a, a)] for a in elements}
    return FiniteCategory(elements, mors, identity, comp, name=name)


def monoid_category(elements: Sequence, mul, obj="*", name="M") -> FiniteCategory:
    """One-object category of a finite monoid; ``elements[0]`` is the unit."""
    elements = list(elements)
    comp = {(g, f): mul(g, f) for g in elements for f in elements}
    return FiniteCategory([obj], [(e, obj, obj) for e in elements], {obj: elements[0]}, comp, name=name)


def product_category(C: FiniteCategory, D: FiniteCategory, name=None) -> FiniteCategory:
    """``C x D`` with pair identifiers."""
    objects = [(a, b) for a in C.objects for b in D.objects]
    morphisms = [((f, g), (C.dom[f], D.dom[g]), (C.cod[f], D.cod[g])) for f in C.morphisms for g in D.morphisms]
    identity = {(a, b): (C.identity[a], D.identity[b]) for a, b in objects}
    comp = {
        ((f2, g2), (f1, g1)): (h1, h2)
        for (f2, f1), h1 in C.comp_table.items()
        for (g2, g1), h2 in D.comp_table.items()
    }
    return FiniteCategory(objects, morphisms, identity, comp, name=name or f"{C.name}x{D.name}", check=False)
