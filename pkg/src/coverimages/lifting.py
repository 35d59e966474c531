"""Images in a functor category built from componentwise images and limits.

Given ``g: B -> C`` in ``C^I`` whose components have images, the image of
``g`` is assembled object by object:

* for each index morphism ``i: X -> Y`` pull ``im g_Y`` back along ``C(i)``,
  giving a mono ``w_i: W_i -> C(X)`` and ``tilde_i: W_i -> Im g_Y``;
* ``A(X)`` is the wide pullback of all ``w_i`` with ``dom i == X`` (this
  always includes ``i = 1_X``), with projections ``v_i``;
* ``f_X = w_{1_X} . v_{1_X}``;
* ``A(i)`` is the unique morphism into the cone at ``Y`` determined by the
  mediators ``bar_i: W_{ji} -> W_j``.

Nothing here materializes ``C^I``; the functor-category oracle is only used by
:func:`verify_universal` when asked to.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    CapExceeded,
    CertificationError,
    ConditionIIViolated,
    MissingComponentImage,
    MissingPullback,
    MissingWidePullback,
)
from .fincat import FiniteCategory, LawCheck, MorId, WideCone, is_mono, maximal_cones, pullback, slice_category, wide_pullback
from .functorcat import (
    DEFAULT_FUNCTOR_CAP,
    Functor,
    FunctorImage,
    NatTrans,
    compose_nat,
    enumerate_functors,
    identity_nat,
    natural_transformations,
    oracle_image,
    validate_functor,
    validate_nat,
)
from .precover import PreCoverRelation, image, satisfies_condition_ii


@dataclass(frozen=True)
class ComponentCover:
    """Pullback square of ``im g_Y`` along ``C(i)`` for ``i: X -> Y``."""

    index_morphism: object
    W: object
    w: MorId
    tilde: MorId
    cone: WideCone


@dataclass
class LiftedImage:
    functor: Functor
    nat: NatTrans
    component_images: dict
    covers: dict
    families: dict
    cones: dict
    bars: dict = field(default_factory=dict)

    @property
    def mediators(self) -> dict:
        return self.functor.mor_map

    def projection(self, i) -> MorId:
        """The wide-pullback projection ``v_i: A(dom i) -> W_i``."""
        X = self.functor.source.dom[i]
        return self.cones[X].legs[self.families[X].index(i)]

    def comma_product(self, X):
        """``(A(X), f_X)`` with its factors ``(i, W_i, w_i, v_i)`` in ``(C | C(X))``."""
        factors = [(i, self.covers[i].W, self.covers[i].w, self.projection(i)) for i in self.families[X]]
        return self.functor.obj_map[X], self.nat[X], factors


def component_images(C: FiniteCategory, I: FiniteCategory, R: PreCoverRelation, g: NatTrans) -> dict:
    check = satisfies_condition_ii(R)
    if not check:
        raise ConditionIIViolated(check.witness)
    out = {}
    for X in I.objects:
        res = image(C, R, g[X])
        if res is None:
            raise MissingComponentImage(X, g[X])
        out[X] = res
    return out


def _unique(candidates, what):
    if len(candidates) != 1:
        raise CertificationError(f"{what}: expected one mediator, found {len(candidates)}")
    return candidates[0]


def lifted_image(C: FiniteCategory, I: FiniteCategory, R: PreCoverRelation, g: NatTrans) -> LiftedImage:
    images = component_images(C, I, R, g)
    target = g.target

    covers = {}
    for i in I.morphisms:
        X, Y = I.dom[i], I.cod[i]
        cospan = (target.mor_map[i], images[Y].arrow)
        pb = pullback(C, *cospan)
        if pb is None:
            raise MissingPullback(i, X, cospan, maximal_cones(C, cospan))
        w, tilde = pb.legs
        if not is_mono(C, w):
            raise CertificationError(f"pullback leg {w!r} of a mono is not mono")
        covers[i] = ComponentCover(i, pb.apex, w, tilde, pb)

    families, cones = {}, {}
    for X in I.objects:
        idx = [i for i in I.morphisms if I.dom[i] == X]
        family = [covers[i].w for i in idx]
        cone = wide_pullback(C, family)
        if cone is None:
            raise MissingWidePullback(X, family, maximal_cones(C, family))
        families[X], cones[X] = idx, cone

    obj_map = {X: cones[X].apex for X in I.objects}

    def leg(i):
        X = I.dom[i]
        return cones[X].legs[families[X].index(i)]

    comps = {X: C.compose(covers[I.identity[X]].w, leg(I.identity[X])) for X in I.objects}

    bars = {}
    mor_map = {}
    for i in I.morphisms:
        X, Y = I.dom[i], I.cod[i]
        Ci = target.mor_map[i]
        required = []
        for j in families[Y]:
            ji = I.compose(j, i)
            src, dst = covers[ji], covers[j]
            bar = _unique(
                [
                    b
                    for b in C.hom(src.W, dst.W)
                    if C.compose(dst.w, b) == C.compose(Ci, src.w) and C.compose(dst.tilde, b) == src.tilde
                ],
                f"bar({i!r}, {j!r})",
            )
            bars[(i, j)] = bar
            required.append(C.compose(bar, leg(ji)))
        Y_legs = cones[Y].legs
        mor_map[i] = _unique(
            [s for s in C.hom(obj_map[X], obj_map[Y]) if all(C.compose(v, s) == r for v, r in zip(Y_legs, required))],
            f"A({i!r})",
        )

    A = Functor(I, C, obj_map, mor_map, name="Im")
    check = validate_functor(A)
    if not check:
        raise CertificationError(f"constructed A is not a functor: {check.witness}")
    f = NatTrans(A, target, comps, name="im")
    check = validate_nat(f)
    if not check:
        raise CertificationError(f"constructed f is not natural: {check.witness}")
    return LiftedImage(A, f, images, covers, families, cones, bars)


def check_lifted_invariants(C: FiniteCategory, R: PreCoverRelation, g: NatTrans, L: LiftedImage) -> LawCheck:
    """``A`` a functor, ``f`` natural, ``f_X < g_X`` for all X, every ``f_X`` mono."""
    check = validate_functor(L.functor)
    if not check:
        return check
    check = validate_nat(L.nat)
    if not check:
        return check
    for X in L.functor.source.objects:
        if (L.nat[X], g[X]) not in R:
            return LawCheck(False, ("not related", X))
        if not is_mono(C, L.nat[X]):
            return LawCheck(False, ("not mono", X))
    return LawCheck(True)


def verify_comma_product(C: FiniteCategory, L: LiftedImage, X) -> LawCheck:
    """Check that ``(A(X), f_X)`` is the product of the ``(W_i, w_i)`` in the slice.

    Exhaustive over every slice object and every family of slice maps into
    the factors.  Witness: ``(slice_object, maps, number_of_mediators)``.
    """
    base = L.nat.target.obj_map[X]
    sl = slice_category(C, base).category
    apex, f_X, factors = L.comma_product(X)
    projections = [(v, f_X, w) for _, _, w, v in factors]
    for p in projections:
        if C.compose(p[2], p[0]) != f_X:
            return LawCheck(False, ("projection not a slice map", p))
    for q in sl.objects:
        options = [sl.hom(q, w) for _, _, w, _ in factors]
        for maps in itertools.product(*options):
            n = sum(1 for t in sl.hom(q, f_X) if all(sl.compose(p, t) == s for p, s in zip(projections, maps)))
            if n != 1:
                return LawCheck(False, (q, maps, n))
    return LawCheck(True)


@dataclass
class UniversalCheck:
    """Outcome of :func:`verify_universal`.

    ``status`` is ``"CERTIFIED"``, ``"COUNTEREXAMPLE"`` or ``"SKIPPED"``.
    """

    status: str
    checked: int = 0
    counterexample: object = None
    reason: str = ""
    isomorphism: tuple | None = None
    oracle: FunctorImage | None = None

    def __bool__(self):
        return self.status == "CERTIFIED"


def oracle_isomorphism(L: LiftedImage, O: FunctorImage, cap: int = DEFAULT_FUNCTOR_CAP):
    """Mutually inverse slice isomorphisms ``(u, u_inv)`` between two images.

    Returns None unless each direction has exactly one mediator and the two
    compose to identities.
    """
    forward = [u for u in natural_transformations(L.functor, O.functor, cap) if compose_nat(O.nat, u) == L.nat]
    backward = [u for u in natural_transformations(O.functor, L.functor, cap) if compose_nat(L.nat, u) == O.nat]
    if len(forward) != 1 or len(backward) != 1:
        return None
    u, v = forward[0], backward[0]
    if compose_nat(v, u) != identity_nat(L.functor) or compose_nat(u, v) != identity_nat(O.functor):
        return None
    return u, v


def verify_universal(
    C: FiniteCategory,
    I: FiniteCategory,
    R: PreCoverRelation,
    g: NatTrans,
    L: LiftedImage,
    cap: int = DEFAULT_FUNCTOR_CAP,
    oracle: bool = False,
) -> UniversalCheck:
    """Check terminality of ``L`` among all ``(A', f')`` with ``f' < g``.

    Enumerates every functor ``A'`` and every natural ``f': A' -> C`` related
    to ``g`` componentwise, and counts mediators ``u`` with ``f . u == f'``.
    With ``oracle=True`` the materialized-category image is also computed and
    an explicit isomorphism with it is required.
    """
    inv = check_lifted_invariants(C, R, g, L)
    if not inv:
        return UniversalCheck("COUNTEREXAMPLE", counterexample=(L.functor, L.nat), reason=f"invariant failed: {inv.witness}")
    target = g.target
    checked = 0
    try:
        functors = enumerate_functors(I, C, cap)
        for A2 in functors:
            for f2 in natural_transformations(A2, target, cap):
                if not all((f2[X], g[X]) in R for X in I.objects):
                    continue
                checked += 1
                n = sum(1 for u in natural_transformations(A2, L.functor, cap) if compose_nat(L.nat, u) == f2)
                if n != 1:
                    return UniversalCheck(
                        "COUNTEREXAMPLE", checked, (A2, f2), reason=f"{n} mediating transformations"
                    )
        result = UniversalCheck("CERTIFIED", checked)
        if oracle:
            O = oracle_image(C, I, R, g, cap)
            result.oracle = O
            if O is None:
                return UniversalCheck("COUNTEREXAMPLE", checked, None, reason="oracle finds no image")
            iso = oracle_isomorphism(L, O, cap)
            if iso is None:
                return UniversalCheck("COUNTEREXAMPLE", checked, (O.functor, O.nat), reason="not isomorphic to oracle image")
            result.isomorphism = iso
        return result
    except CapExceeded as exc:
        return UniversalCheck("SKIPPED", checked, reason=str(exc))
