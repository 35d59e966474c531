"""Pre-cover relations on a finite category and their images.

A relation is stored extensionally as a set of pairs ``(f, g)`` read as
"f is covered by g".  The image of ``g`` is the terminal object of the full
subcategory of the slice over ``cod g`` spanned by the arrows ``f`` related
to ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import UnknownIdentifier
from .fincat import (
    FiniteCategory,
    LawCheck,
    MorId,
    ObjId,
    full_subcategory,
    is_mono,
    slice_category,
    terminal_object,
)


class PreCoverRelation:
    """A finite set of pairs ``(f, g)`` of morphisms with ``cod f == cod g``."""

    def __init__(self, category: FiniteCategory, pairs: Iterable[tuple], name="R", check=True):
        self.category = category
        self.name = name
        self.pairs = frozenset((f, g) for f, g in pairs)
        if check:
            bad = _codomain_mismatches(category, self.pairs)
            if bad:
                raise ValueError(f"pairs with different codomains: {bad}")
        self._covered_by = {}
        for f, g in self.pairs:
            self._covered_by.setdefault(g, set()).add(f)

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        if not isinstance(other, PreCoverRelation):
            return NotImplemented
        return self.pairs == other.pairs and self.category == other.category

    def __hash__(self):
        return hash(self.pairs)

    def related_to(self, g: MorId) -> list:
        """Every ``f`` with ``(f, g)`` in the relation, in declaration order."""
        fs = self._covered_by.get(g, ())
        return [m for m in self.category.morphisms if m in fs]

    def sorted_pairs(self) -> list[tuple]:
        idx = self.category.mor_index
        return sorted(self.pairs, key=lambda p: (idx(p[1]), idx(p[0])))

    def with_pairs(self, pairs, name=None) -> "PreCoverRelation":
        return PreCoverRelation(self.category, pairs, name=name or self.name, check=False)

    def __repr__(self):
        return f"PreCoverRelation({self.name!r} on {self.category.name!r}, {len(self.pairs)} pairs)"


def _codomain_mismatches(C, pairs):
    return sorted(
        ((f, g) for f, g in pairs if C.cod[f] != C.cod[g]),
        key=lambda p: (C.mor_index(p[0]), C.mor_index(p[1])),
    )


@dataclass
class RelationReport:
    offending: list = field(default_factory=list)

    def __bool__(self):
        return not self.offending

    def __str__(self):
        return "\n".join(f"codomain mismatch in pair ({f}, {g})" for f, g in self.offending) or "valid"


def validate_precover(C: FiniteCategory, pairs: Iterable[tuple], name="R") -> PreCoverRelation | RelationReport:
    pairs = [tuple(p) for p in pairs]
    for f, g in pairs:
        for m in (f, g):
            if not C.has_morphism(m):
                raise UnknownIdentifier(f"unknown morphism {m!r}")
    bad = _codomain_mismatches(C, pairs)
    if bad:
        return RelationReport(bad)
    return PreCoverRelation(C, pairs, name=name, check=False)


def satisfies_condition_i(R: PreCoverRelation) -> LawCheck:
    """Post-composition: ``f < g`` implies ``hf < hg``.  Witness ``(f, g, h)``."""
    C = R.category
    for f, g in R.sorted_pairs():
        for h in C.out_of(C.cod[g]):
            if (C.compose(h, f), C.compose(h, g)) not in R.pairs:
                return LawCheck(False, (f, g, h))
    return LawCheck(True)


def satisfies_condition_ii(R: PreCoverRelation) -> LawCheck:
    """Pre-composition on the left: ``f < g`` implies ``fe < g``.  Witness ``(f, g, e)``."""
    C = R.category
    for f, g in R.sorted_pairs():
        for e in C.into(C.dom[f]):
            if (C.compose(f, e), g) not in R.pairs:
                return LawCheck(False, (f, g, e))
    return LawCheck(True)


def _close(R: PreCoverRelation, post: bool, pre: bool) -> PreCoverRelation:
    C = R.category
    pairs = set(R.pairs)
    todo = list(pairs)
    while todo:
        f, g = todo.pop()
        new = []
        if post:
            new += [(C.compose(h, f), C.compose(h, g)) for h in C.out_of(C.cod[g])]
        if pre:
            new += [(C.compose(f, e), g) for e in C.into(C.dom[f])]
        for p in new:
            if p not in pairs:
                pairs.add(p)
                todo.append(p)
    return R.with_pairs(pairs)


def cover_closure(R: PreCoverRelation) -> PreCoverRelation:
    """Smallest relation containing ``R`` closed under conditions (i) and (ii)."""
    return _close(R, post=True, pre=True)


def closure_under_ii(R: PreCoverRelation) -> PreCoverRelation:
    """Smallest relation containing ``R`` closed under condition (ii) only."""
    return _close(R, post=False, pre=True)


@dataclass(frozen=True)
class ImageResult:
    """Image ``(object, arrow)`` of ``g`` with its terminality certificate.

    ``satisfying`` lists the slice objects, identified by their arrows ``f``
    with ``(f, g)`` related; ``certificate[f]`` is the unique ``s`` with
    ``arrow . s == f``.
    """

    morphism: MorId
    object: ObjId
    arrow: MorId
    satisfying: tuple
    certificate: dict

    def __iter__(self):
        yield self.object
        yield self.arrow


def satisfying_subcategory(C: FiniteCategory, R: PreCoverRelation, g: MorId) -> FiniteCategory:
    """Full subcategory of ``(C | cod g)`` on arrows related to ``g``."""
    if not C.has_morphism(g):
        raise UnknownIdentifier(f"unknown morphism {g!r}")
    sl = slice_category(C, C.cod[g])
    return full_subcategory(sl.category, R.related_to(g), name=f"sat({g})")


def image(C: FiniteCategory, R: PreCoverRelation, g: MorId) -> ImageResult | None:
    sub = satisfying_subcategory(C, R, g)
    t = terminal_object(sub)
    if t is None:
        return None
    cert = {}
    for p in sub.objects:
        (s_mor,) = sub.hom(p, t)
        cert[p] = s_mor[0]
    return ImageResult(g, C.dom[t], t, tuple(sub.objects), cert)


def check_image_mono(C: FiniteCategory, R: PreCoverRelation, result: ImageResult) -> bool:
    return is_mono(C, result.arrow)


def verify_image(C: FiniteCategory, R: PreCoverRelation, result: ImageResult) -> LawCheck:
    """Re-check an image's certificate directly from the definitions."""
    g = result.morphism
    if (result.arrow, g) not in R:
        return LawCheck(False, ("image arrow not related", result.arrow))
    for f in R.related_to(g):
        s = [x for x in C.hom(C.dom[f], result.object) if C.compose(result.arrow, x) == f]
        if len(s) != 1:
            return LawCheck(False, (f, len(s)))
    return LawCheck(True)
