"""Functors, natural transformations and materialized functor categories.

Materializing ``C^I`` is exponential and exists only to provide an
independent oracle: the image of a natural transformation computed directly
from the definition inside the materialized category.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import CapExceeded, UnknownIdentifier
from .fincat import FiniteCategory, LawCheck, ObjId
from .precover import ImageResult, PreCoverRelation, image

DEFAULT_FUNCTOR_CAP = 10**7


class Functor:
    """A functor ``source -> target`` given by object and morphism maps."""

    def __init__(self, source: FiniteCategory, target: FiniteCategory, obj_map: Mapping, mor_map: Mapping, name=None):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name

    def __call__(self, x):
        if x in self.obj_map:
            return self.obj_map[x]
        return self.mor_map[x]

    def key(self) -> tuple:
        return (
            tuple(self.obj_map[o] for o in self.source.objects),
            tuple(self.mor_map[m] for m in self.source.morphisms),
        )

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        objs = ", ".join(f"{o}|->{self.obj_map[o]}" for o in self.source.objects)
        return f"Functor({self.name or ''}[{objs}])"


class NatTrans:
    """A family of components ``source(X) -> target(X)`` indexed by objects X."""

    def __init__(self, source: Functor, target: Functor, components: Mapping, name=None):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def __getitem__(self, x):
        return self.components[x]

    def key(self) -> tuple:
        return tuple(self.components[o] for o in self.source.source.objects)

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.key() == other.key()

    def __hash__(self):
        return hash((self.source, self.target, self.key()))

    def __repr__(self):
        return f"NatTrans({self.name or ''}{self.key()})"


def validate_functor(F: Functor) -> LawCheck:
    """Check totality, dom/cod preservation, identities and composition.

    The witness is ``(law, data)``.
    """
    I, C = F.source, F.target
    for o in I.objects:
        if o not in F.obj_map:
            return LawCheck(False, ("totality", o))
        if not C.has_object(F.obj_map[o]):
            return LawCheck(False, ("unknown object", o))
    for m in I.morphisms:
        if m not in F.mor_map:
            return LawCheck(False, ("totality", m))
        fm = F.mor_map[m]
        if not C.has_morphism(fm):
            return LawCheck(False, ("unknown morphism", m))
        if C.dom[fm] != F.obj_map[I.dom[m]] or C.cod[fm] != F.obj_map[I.cod[m]]:
            return LawCheck(False, ("dom/cod", m))
    for o in I.objects:
        if F.mor_map[I.identity[o]] != C.identity[F.obj_map[o]]:
            return LawCheck(False, ("identity", o))
    for (g, f), h in I.comp_table.items():
        if C.compose(F.mor_map[g], F.mor_map[f]) != F.mor_map[h]:
            return LawCheck(False, ("composition", (g, f, h)))
    return LawCheck(True)


def validate_nat(alpha: NatTrans) -> LawCheck:
    F, G = alpha.source, alpha.target
    I, C = F.source, F.target
    for x in I.objects:
        a = alpha.components.get(x)
        if a is None or not C.has_morphism(a):
            return LawCheck(False, ("totality", x))
        if C.dom[a] != F.obj_map[x] or C.cod[a] != G.obj_map[x]:
            return LawCheck(False, ("dom/cod", x))
    for i in I.morphisms:
        x, y = I.dom[i], I.cod[i]
        if C.compose(G.mor_map[i], alpha[x]) != C.compose(alpha[y], F.mor_map[i]):
            return LawCheck(False, ("naturality", i))
    return LawCheck(True)


def identity_nat(F: Functor) -> NatTrans:
    C = F.target
    return NatTrans(F, F, {x: C.identity[F.obj_map[x]] for x in F.source.objects})


def compose_nat(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """Vertical composite ``beta . alpha``."""
    if alpha.target != beta.source:
        raise ValueError("natural transformations are not composable")
    C = alpha.source.target
    return NatTrans(
        alpha.source,
        beta.target,
        {x: C.compose(beta[x], alpha[x]) for x in alpha.source.source.objects},
    )


def _candidate_count(I: FiniteCategory, C: FiniteCategory) -> int:
    non_id = sum(1 for m in I.morphisms if not I.is_identity(m))
    return len(C.objects) ** len(I.objects) * len(C.morphisms) ** non_id


def enumerate_functors(I: FiniteCategory, C: FiniteCategory, cap: int = DEFAULT_FUNCTOR_CAP) -> list[Functor]:
    """All functors ``I -> C`` in lexicographic order of declaration indices.

    The cap bounds the naive candidate count: object maps times morphism maps
    for the non-identity morphisms of ``I`` (identities are forced).
    """
    count = _candidate_count(I, C)
    if count > cap:
        raise CapExceeded("functor enumeration", count, cap)

    free = [m for m in I.morphisms if not I.is_identity(m)]
    pos = {m: k for k, m in enumerate(free)}
    checks_at = [[] for _ in free]
    for (g, f), h in I.comp_table.items():
        ks = [pos[m] for m in (g, f, h) if m in pos]
        if ks:
            checks_at[max(ks)].append((g, f, h))

    out = []
    for images in itertools.product(C.objects, repeat=len(I.objects)):
        F0 = dict(zip(I.objects, images))
        if any(not C.hom(F0[I.dom[m]], F0[I.cod[m]]) for m in free):
            continue
        mor_map = {I.identity[o]: C.identity[F0[o]] for o in I.objects}

        def extend(k):
            if k == len(free):
                out.append(Functor(I, C, F0, mor_map))
                return
            m = free[k]
            for cand in C.hom(F0[I.dom[m]], F0[I.cod[m]]):
                mor_map[m] = cand
                if all(C.compose(mor_map[g], mor_map[f]) == mor_map[h] for g, f, h in checks_at[k]):
                    extend(k + 1)
            del mor_map[m]

        extend(0)
    return out


def natural_transformations(F: Functor, G: Functor, cap: int = DEFAULT_FUNCTOR_CAP) -> list[NatTrans]:
    """All natural transformations ``F -> G``, sorted by component indices."""
    I, C = F.source, F.target
    if G.source != I or G.target != C:
        raise ValueError("functors have different source or target")
    homs = {x: C.hom(F.obj_map[x], G.obj_map[x]) for x in I.objects}
    count = math.prod(len(h) for h in homs.values())
    if count > cap:
        raise CapExceeded("natural transformation search", count, cap)
    if count == 0:
        return []

    # most constrained object first
    order = sorted(I.objects, key=lambda x: (len(homs[x]), I.obj_index(x)))
    rank = {x: k for k, x in enumerate(order)}
    checks_at = [[] for _ in order]
    for i in I.morphisms:
        if I.is_identity(i):
            continue
        checks_at[max(rank[I.dom[i]], rank[I.cod[i]])].append(i)

    found = []
    comps = {}

    def extend(k):
        if k == len(order):
            found.append(dict(comps))
            return
        x = order[k]
        for cand in homs[x]:
            comps[x] = cand
            if all(
                C.compose(G.mor_map[i], comps[I.dom[i]]) == C.compose(comps[I.cod[i]], F.mor_map[i])
                for i in checks_at[k]
            ):
                extend(k + 1)
        del comps[x]

    extend(0)
    nats = [NatTrans(F, G, c) for c in found]
    nats.sort(key=lambda a: tuple(C.mor_index(m) for m in a.key()))
    return nats


@dataclass
class FunctorCategoryView:
    """Materialized ``C^I``: objects ``F0, F1, ...``, morphisms ``N0, N1, ...``."""

    category: FiniteCategory
    base: FiniteCategory
    index: FiniteCategory
    functors: list
    nats: list
    functor_id: dict
    nat_id: dict

    def functor(self, obj_id) -> Functor:
        return self.functors[int(obj_id[1:])]

    def nat(self, mor_id) -> NatTrans:
        return self.nats[int(mor_id[1:])]

    def find_nat(self, alpha: NatTrans):
        """Materialized id of ``alpha`` (matched by component data)."""
        key = (alpha.source.key(), alpha.target.key(), alpha.key())
        try:
            return self.nat_id[key]
        except KeyError:
            raise UnknownIdentifier(f"natural transformation {alpha!r} is not in the view") from None


def materialize(C: FiniteCategory, I: FiniteCategory, cap: int = DEFAULT_FUNCTOR_CAP) -> FunctorCategoryView:
    functors = enumerate_functors(I, C, cap)
    functor_id = {F.key(): f"F{k}" for k, F in enumerate(functors)}
    nats = []
    nat_id = {}
    by_pair = {}
    for F in functors:
        for G in functors:
            for alpha in natural_transformations(F, G, cap):
                mid = f"N{len(nats)}"
                nats.append(alpha)
                nat_id[(F.key(), G.key(), alpha.key())] = mid
                by_pair.setdefault((functor_id[F.key()], functor_id[G.key()]), []).append((mid, alpha))

    objects = [functor_id[F.key()] for F in functors]
    morphisms = [(nat_id[(a.source.key(), a.target.key(), a.key())], functor_id[a.source.key()], functor_id[a.target.key()]) for a in nats]
    identity = {}
    for F in functors:
        e = identity_nat(F)
        identity[functor_id[F.key()]] = nat_id[(F.key(), F.key(), e.key())]

    out_of = {}
    for (src, tgt), items in by_pair.items():
        out_of.setdefault(src, []).extend((tgt, mid, a) for mid, a in items)
    comp = {}
    for alpha_id, src, mid_obj in morphisms:
        alpha = nats[int(alpha_id[1:])]
        for _, beta_id, beta in out_of.get(mid_obj, ()):
            comps = tuple(C.compose(b, a) for b, a in zip(beta.key(), alpha.key()))
            comp[(beta_id, alpha_id)] = nat_id[(alpha.source.key(), beta.target.key(), comps)]

    cat = FiniteCategory(objects, morphisms, identity, comp, name=f"{C.name}^{I.name}", check=False)
    return FunctorCategoryView(cat, C, I, functors, nats, functor_id, nat_id)


def induced_relation(view: FunctorCategoryView, R: PreCoverRelation) -> PreCoverRelation:
    """Componentwise relation on the materialized functor category."""
    cat = view.category
    into = {}
    for m in cat.morphisms:
        into.setdefault(cat.cod[m], []).append(m)
    pairs = []
    for ms in into.values():
        for a in ms:
            ka = view.nat(a).key()
            for b in ms:
                kb = view.nat(b).key()
                if all((x, y) in R.pairs for x, y in zip(ka, kb)):
                    pairs.append((a, b))
    return PreCoverRelation(cat, pairs, name=f"{R.name}^{view.index.name}", check=False)


@dataclass
class FunctorImage:
    """An image in ``C^I`` expressed as a functor and a natural transformation."""

    functor: Functor
    nat: NatTrans
    result: ImageResult
    view: FunctorCategoryView


def oracle_image(C: FiniteCategory, I: FiniteCategory, R: PreCoverRelation, g: NatTrans, cap: int = DEFAULT_FUNCTOR_CAP) -> FunctorImage | None:
    view = materialize(C, I, cap)
    rel = induced_relation(view, R)
    res = image(view.category, rel, view.find_nat(g))
    if res is None:
        return None
    return FunctorImage(view.functor(res.object), view.nat(res.arrow), res, view)


def constant_functor(I: FiniteCategory, C: FiniteCategory, obj: ObjId) -> Functor:
    return Functor(I, C, {x: obj for x in I.objects}, {m: C.identity[obj] for m in I.morphisms})
