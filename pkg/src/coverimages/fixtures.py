"""Built-in categories, relations and diagrams, including the counterexample.

The counterexample poset has objects ``A, A', B, B', C, C'`` with the order
generated by ``A<=A'``, ``A<=C``, ``B<=B'``, ``B<=C``, ``A'<=C'``,
``B'<=A'`` and ``C<=C'``.  Morphism names: ``f: A->C``, ``g: B->C``,
``alpha: A->A'``, ``beta: B->B'``, ``gamma: C->C'``, ``f': A'->C'``,
``g': B'->C'``, ``u: B'->A'``; the remaining composites are ``A_to_C'``,
``B_to_A'`` and ``B_to_C'``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import MissingWidePullback
from .fincat import FiniteCategory, maximal_objects, monoid_category, poset_category, product_category
from .functorcat import Functor, NatTrans, enumerate_functors, materialize, natural_transformations, induced_relation
from .groups import (
    FiniteGroup,
    chain_diagram,
    homomorphisms,
    image_subgroup,
    is_compatible,
    standard_groups,
    sub_diagram,
    subgroups,
    zero_hom,
    DiagramHom,
    GroupDiagram,
    identity_hom,
    cyclic,
)
from .lifting import lifted_image
from .precover import PreCoverRelation, closure_under_ii, image, satisfying_subcategory, satisfies_condition_i, satisfies_condition_ii


# -- index categories ----------------------------------------------------------


def terminal_category() -> FiniteCategory:
    return poset_category(["0"], [], name="1")


def arrow_category() -> FiniteCategory:
    return poset_category(["0", "1"], [("0", "1")], {("0", "1"): "a"}, name="2")


def composable_pair() -> FiniteCategory:
    return poset_category(
        ["0", "1", "2"], [("0", "1"), ("1", "2")], {("0", "1"): "a", ("1", "2"): "b", ("0", "2"): "ba"}, name="3"
    )


def commutative_square() -> FiniteCategory:
    return poset_category(
        ["0", "1", "2", "3"],
        [("0", "1"), ("0", "2"), ("1", "3"), ("2", "3")],
        {("0", "1"): "a", ("0", "2"): "b", ("1", "3"): "c", ("2", "3"): "d", ("0", "3"): "e"},
        name="sq",
    )


def parallel_pair() -> FiniteCategory:
    mors = [("id_0", "0", "0"), ("id_1", "1", "1"), ("x", "0", "1"), ("y", "0", "1")]
    comp = {("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1"}
    for m in ("x", "y"):
        comp[(m, "id_0")] = m
        comp[("id_1", m)] = m
    return FiniteCategory(["0", "1"], mors, {"0": "id_0", "1": "id_1"}, comp, name="par")


def discrete_category(n: int = 2) -> FiniteCategory:
    return poset_category([str(k) for k in range(n)], [], name=f"disc{n}")


INDEX_CATEGORIES = {
    "1": terminal_category,
    "2": arrow_category,
    "3": composable_pair,
    "sq": commutative_square,
}


# -- small lattices and monoids ---------------------------------------------------


def chain(n: int) -> FiniteCategory:
    names = [f"c{k}" for k in range(n)]
    return poset_category(names, list(zip(names, names[1:])), name=f"chain{n}")


def diamond() -> FiniteCategory:
    return poset_category(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="diamond")


def pentagon() -> FiniteCategory:
    return poset_category(
        ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")], name="N5"
    )


def m3() -> FiniteCategory:
    return poset_category(
        ["0", "x", "y", "z", "1"], [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")], name="M3"
    )


def grid(m: int, n: int) -> FiniteCategory:
    names = [f"p{i}{j}" for i in range(m) for j in range(n)]
    gens = []
    for i in range(m):
        for j in range(n):
            if i + 1 < m:
                gens.append((f"p{i}{j}", f"p{i + 1}{j}"))
            if j + 1 < n:
                gens.append((f"p{i}{j}", f"p{i}{j + 1}"))
    return poset_category(names, gens, name=f"grid{m}x{n}")


def boolean_cube() -> FiniteCategory:
    names = ["".join(bits) for bits in itertools.product("01", repeat=3)]
    gens = [(a, b) for a in names for b in names if sum(x != y for x, y in zip(a, b)) == 1 and a < b]
    return poset_category(names, gens, name="B3")


def idempotent_monoid() -> FiniteCategory:
    """``{1, e}`` with ``e e = e``."""
    return monoid_category(["1", "e"], lambda a, b: "e" if "e" in (a, b) else "1", name="idem")


def group_as_category(G: FiniteGroup) -> FiniteCategory:
    labels = [f"{G.name}:{G.labels[x]}" for x in G.elements]
    pos = {l: k for k, l in enumerate(labels)}
    return monoid_category(labels, lambda a, b: labels[G.mul(pos[a], pos[b])], name=f"B{G.name}")


# -- the counterexample -------------------------------------------------------------

COUNTEREXAMPLE_OBJECTS = ["A", "A'", "B", "B'", "C", "C'"]
COUNTEREXAMPLE_ORDER = [("A", "A'"), ("A", "C"), ("B", "B'"), ("B", "C"), ("A'", "C'"), ("B'", "A'"), ("C", "C'")]
COUNTEREXAMPLE_LABELS = {
    ("A", "C"): "f",
    ("B", "C"): "g",
    ("A", "A'"): "alpha",
    ("B", "B'"): "beta",
    ("C", "C'"): "gamma",
    ("A'", "C'"): "f'",
    ("B'", "C'"): "g'",
    ("B'", "A'"): "u",
}


def counterexample_category() -> tuple[FiniteCategory, PreCoverRelation]:
    C = poset_category(COUNTEREXAMPLE_OBJECTS, COUNTEREXAMPLE_ORDER, COUNTEREXAMPLE_LABELS, name="P")
    gp = "g'"
    pairs = {(C.compose("f'", s), gp) for s in C.into("A'")}
    pairs |= {(t, p) for t in C.morphisms for p in C.morphisms if C.cod[t] == C.cod[p] and p != gp}
    return C, PreCoverRelation(C, pairs, name="cover")


def arrow_functor(C: FiniteCategory, m, I: FiniteCategory | None = None) -> Functor:
    """The object of ``C^2`` picking the morphism ``m``."""
    I = I or arrow_category()
    return Functor(I, C, {"0": C.dom[m], "1": C.cod[m]}, {"id_0": C.identity[C.dom[m]], "id_1": C.identity[C.cod[m]], "a": m})


def counterexample_g() -> tuple[FiniteCategory, FiniteCategory, PreCoverRelation, NatTrans]:
    """``(g, g'): (B, B', beta) -> (C, C', gamma)`` in ``C^2``."""
    C, R = counterexample_category()
    I = arrow_category()
    g = NatTrans(arrow_functor(C, "beta", I), arrow_functor(C, "gamma", I), {"0": "g", "1": "g'"}, name="(g,g')")
    return C, I, R, g


def describe_arrow_object(F: Functor) -> str:
    return f"({F.obj_map['0']},{F.obj_map['1']},{F.mor_map['a']})"


def describe_arrow_nat(alpha: NatTrans) -> str:
    return f"({alpha['0']},{alpha['1']})"


class ReproductionError(AssertionError):
    pass


@dataclass
class CounterexampleReport:
    morphism_count: int
    condition_i: bool
    condition_ii: bool
    image_table: list
    satisfying: list
    maximal: list
    oracle_image_exists: bool
    lifted_error: str
    lifted_error_kind: str
    maximal_cones: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "morphisms": self.morphism_count,
            "condition_i": self.condition_i,
            "condition_ii": self.condition_ii,
            "images": [{"morphism": m, "object": o, "arrow": a} for m, o, a in self.image_table],
            "satisfying_objects": [{"object": o, "arrow": a} for o, a in self.satisfying],
            "maximal": [{"object": o, "arrow": a} for o, a in self.maximal],
            "oracle_image": None if not self.oracle_image_exists else "exists",
            "lifted_image": {"error": self.lifted_error_kind, "detail": self.lifted_error, "maximal_cones": self.maximal_cones},
        }

    def to_text(self) -> str:
        lines = [
            "counterexample: images do not lift to the arrow category",
            f"category: poset on {', '.join(COUNTEREXAMPLE_OBJECTS)} with {self.morphism_count} morphisms",
            f"condition (i): {'holds' if self.condition_i else 'fails'}",
            f"condition (ii): {'holds' if self.condition_ii else 'fails'}",
            "images in C:",
        ]
        lines += [f"  im {m} = ({o}, {a})" for m, o, a in self.image_table]
        lines.append("satisfying objects over (C,C',gamma) for (g,g'):")
        lines += [f"  ({o},{a})" for o, a in self.satisfying]
        lines.append("maximal satisfying objects:")
        lines += [f"  ({o},{a})" for o, a in self.maximal]
        lines.append(f"oracle image of (g,g'): {'exists' if self.oracle_image_exists else 'none'}")
        lines.append(f"lifted image of (g,g'): {self.lifted_error_kind}: {self.lifted_error}")
        lines.append("maximal cones: " + ", ".join(f"{x} via ({', '.join(legs)})" for x, legs in self.maximal_cones))
        return "\n".join(lines) + "\n"


EXPECTED_SATISFYING = {
    ("(A,A,id_A)", "(f,A_to_C')"),
    ("(B,B,id_B)", "(g,B_to_C')"),
    ("(B,B',beta)", "(g,g')"),
    ("(A,A',alpha)", "(f,f')"),
    ("(B,A',B_to_A')", "(g,f')"),
}
EXPECTED_MAXIMAL = [("(A,A',alpha)", "(f,f')"), ("(B,A',B_to_A')", "(g,f')")]


def reproduce_counterexample() -> CounterexampleReport:
    C, I, R, g = counterexample_g()
    table = []
    for phi in C.morphisms:
        res = image(C, R, phi)
        table.append((phi, res.object, res.arrow))

    view = materialize(C, I)
    rel = induced_relation(view, R)
    gid = view.find_nat(g)
    sub = satisfying_subcategory(view.category, rel, gid)

    def show(p):
        alpha = view.nat(p)
        return describe_arrow_object(alpha.source), describe_arrow_nat(alpha)

    satisfying = [show(p) for p in sub.objects]
    maximal = [show(p) for p in maximal_objects(sub)]
    oracle = image(view.category, rel, gid)

    try:
        lifted_image(C, I, R, g)
        kind, detail, cones = "none", "lifted image exists", []
    except MissingWidePullback as exc:
        kind, detail = type(exc).__name__, str(exc)
        cones = [(x, list(legs)) for x, legs in exc.maximal_cones]

    report = CounterexampleReport(
        len(C.morphisms),
        satisfies_condition_i(R).holds,
        satisfies_condition_ii(R).holds,
        table,
        satisfying,
        maximal,
        oracle is not None,
        detail,
        kind,
        cones,
    )
    _check_report(C, report)
    return report


def _check_report(C: FiniteCategory, r: CounterexampleReport):
    problems = []
    if r.morphism_count != 17:
        problems.append(f"expected 17 morphisms, got {r.morphism_count}")
    if not (r.condition_i and r.condition_ii):
        problems.append("relation is not a cover relation")
    for m, o, a in r.image_table:
        want = ("A'", "f'") if m == "g'" else (C.cod[m], C.identity[C.cod[m]])
        if (o, a) != want:
            problems.append(f"image of {m} is ({o}, {a}), expected {want}")
    if set(r.satisfying) != EXPECTED_SATISFYING or len(r.satisfying) != 5:
        problems.append(f"unexpected satisfying objects {r.satisfying}")
    if sorted(r.maximal) != sorted(EXPECTED_MAXIMAL):
        problems.append(f"unexpected maximal elements {r.maximal}")
    if r.oracle_image_exists:
        problems.append("oracle found an image")
    if r.lifted_error_kind not in ("MissingWidePullback", "MissingPullback"):
        problems.append(f"lifted image did not report a missing wide pullback: {r.lifted_error_kind}")
    if problems:
        raise ReproductionError("; ".join(problems))


# -- fixture zoo -------------------------------------------------------------------


@dataclass
class Fixture:
    """A named category or group with expected counts.

    ``expected`` maps a key to ``(value, provenance)`` where provenance is
    ``TRIVIAL`` (forced by definitions), ``DERIVED`` (recomputed by an
    independent count) or ``GIVEN`` (stated with the published example).
    """

    name: str
    category: FiniteCategory | None = None
    group: FiniteGroup | None = None
    relations: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)


def lattice_zoo() -> list[FiniteCategory]:
    return [chain(2), chain(3), chain(4), diamond(), pentagon(), m3(), grid(2, 3), boolean_cube()]


def standard_fixtures() -> list[Fixture]:
    out = [
        Fixture("terminal", terminal_category(), expected={"objects": (1, "TRIVIAL"), "morphisms": (1, "TRIVIAL")}),
        Fixture("arrow", arrow_category(), expected={"objects": (2, "TRIVIAL"), "morphisms": (3, "TRIVIAL")}),
        Fixture("composable_pair", composable_pair(), expected={"objects": (3, "TRIVIAL"), "morphisms": (6, "TRIVIAL")}),
        Fixture("square", commutative_square(), expected={"objects": (4, "TRIVIAL"), "morphisms": (9, "TRIVIAL")}),
        Fixture("parallel_pair", parallel_pair(), expected={"objects": (2, "TRIVIAL"), "morphisms": (4, "TRIVIAL")}),
        Fixture("discrete2", discrete_category(2), expected={"objects": (2, "TRIVIAL"), "morphisms": (2, "TRIVIAL")}),
        Fixture("idempotent", idempotent_monoid(), expected={"objects": (1, "TRIVIAL"), "morphisms": (2, "TRIVIAL")}),
    ]
    for L in lattice_zoo():
        out.append(Fixture(L.name, L))
    C, R = counterexample_category()
    out.append(
        Fixture(
            "counterexample",
            C,
            relations={"cover": R},
            expected={"objects": (6, "GIVEN"), "morphisms": (17, "DERIVED")},
        )
    )
    orders = {"Z1": 1, "Z2": 2, "Z3": 3, "Z4": 4, "Z6": 6, "V4": 4, "S3": 6, "D4": 8, "Q8": 8}
    for name, G in standard_groups().items():
        out.append(Fixture(name, group=G, expected={"order": (orders[name], "TRIVIAL")}))
    for name in ("Z2", "Z3"):
        G = standard_groups()[name]
        out.append(Fixture(f"B{name}", group_as_category(G), expected={"objects": (1, "TRIVIAL"), "morphisms": (G.order, "TRIVIAL")}))
    return out


# -- oracle suite for the lifting construction ----------------------------------------


@dataclass
class LiftingInstance:
    name: str
    C: FiniteCategory
    I: FiniteCategory
    R: PreCoverRelation
    g: NatTrans
    cap: int = 10**8


def total_relation(C: FiniteCategory) -> PreCoverRelation:
    return PreCoverRelation(C, [(f, g) for f in C.morphisms for g in C.morphisms if C.cod[f] == C.cod[g]], name="total")


def factors_relation(C: FiniteCategory) -> PreCoverRelation:
    """``f < g`` iff ``f`` factors through ``g``."""
    pairs = [
        (f, g)
        for f in C.morphisms
        for g in C.morphisms
        if C.cod[f] == C.cod[g] and any(C.compose(g, s) == f for s in C.hom(C.dom[f], C.dom[g]))
    ]
    return PreCoverRelation(C, pairs, name="factors")


def principal_relation(C: FiniteCategory, rng: random.Random) -> PreCoverRelation:
    """``f < g`` iff ``dom f`` maps to ``dom m(g)`` for a random ``m(g)`` into ``cod g``.

    Closed under condition (ii); in a poset the image of ``g`` is ``m(g)``.
    """
    pairs = []
    for g in C.morphisms:
        m = rng.choice(C.into(C.cod[g]))
        top = C.dom[m]
        pairs += [(f, g) for f in C.into(C.cod[g]) if C.hom(C.dom[f], top)]
    return PreCoverRelation(C, pairs, name="principal")


def _pick_nat(C, I, rng, cap) -> NatTrans | None:
    functors = enumerate_functors(I, C, cap)
    for _ in range(50):
        F, G = rng.choice(functors), rng.choice(functors)
        nats = natural_transformations(F, G, cap)
        if nats:
            return rng.choice(nats)
    return None


def lifting_suite(seed: int = 0) -> list[LiftingInstance]:
    """Instances meeting the lifting hypotheses: (ii), component images, limits."""
    rng = random.Random(seed)
    plan = [
        (chain(3), ["1", "2", "3", "sq"]),
        (diamond(), ["1", "2", "3", "sq"]),
        (pentagon(), ["2", "3"]),
        (m3(), ["2", "3"]),
        (grid(2, 3), ["2"]),
        (boolean_cube(), ["1", "2"]),
        (chain(4), ["3"]),
        (group_as_category(cyclic(3)), ["2", "3"]),
        (group_as_category(cyclic(2)), ["sq"]),
        (product_category(group_as_category(cyclic(2)), chain(2)), ["1", "2"]),
        (product_category(group_as_category(cyclic(3)), chain(2)), ["2"]),
    ]
    out = []
    for C, index_names in plan:
        is_group = len(C.objects) == 1
        relations = [total_relation(C)]
        if not is_group:
            relations += [factors_relation(C), principal_relation(C, rng)]
        for iname in index_names:
            I = INDEX_CATEGORIES[iname]()
            for R in relations:
                g = _pick_nat(C, I, rng, 10**8)
                if g is not None:
                    out.append(LiftingInstance(f"{C.name}/{I.name}/{R.name}", C, I, R, g))
    out += _nontrivial_instances(rng)
    return out


def _differs_from_components(inst: LiftingInstance) -> bool:
    try:
        L = lifted_image(inst.C, inst.I, inst.R, inst.g)
    except Exception:
        return False
    return any(L.nat[X] != L.component_images[X].arrow for X in inst.I.objects)


def _nontrivial_instances(rng: random.Random, attempts: int = 300) -> list[LiftingInstance]:
    """Instances whose image is not the componentwise image at some object."""
    plan = [
        (diamond(), "2"), (diamond(), "3"), (diamond(), "sq"),
        (pentagon(), "2"), (pentagon(), "3"), (m3(), "2"), (m3(), "3"),
        (grid(2, 3), "2"), (boolean_cube(), "2"), (chain(4), "sq"),
        (product_category(group_as_category(cyclic(2)), chain(3)), "2"),
    ]
    out = []
    for C, iname in plan:
        I = INDEX_CATEGORIES[iname]()
        functors = enumerate_functors(I, C, 10**8)
        for _ in range(attempts):
            R = principal_relation(C, rng)
            F, G = rng.choice(functors), rng.choice(functors)
            nats = natural_transformations(F, G)
            if not nats:
                continue
            inst = LiftingInstance(f"{C.name}/{I.name}/principal*", C, I, R, rng.choice(nats))
            if _differs_from_components(inst):
                out.append(inst)
                break
    return out


# -- random categories for property tests ------------------------------------------------


def random_concrete_category(rng: random.Random, max_morphisms: int = 30) -> FiniteCategory:
    """A random subcategory of finite sets generated by a few random functions."""
    while True:
        sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        objs = [f"X{k}" for k in range(len(sizes))]
        gens = set()
        for _ in range(rng.randint(1, 3)):
            a, b = rng.randrange(len(sizes)), rng.randrange(len(sizes))
            gens.add((a, b, tuple(rng.randrange(sizes[b]) for _ in range(sizes[a]))))
        arrows = {(a, a, tuple(range(sizes[a]))) for a in range(len(sizes))} | gens
        frontier = list(arrows)
        too_big = False
        while frontier and not too_big:
            f = frontier.pop()
            for g in list(arrows):
                for first, second in ((f, g), (g, f)):
                    if first[1] == second[0]:
                        h = (first[0], second[1], tuple(second[2][x] for x in first[2]))
                        if h not in arrows:
                            arrows.add(h)
                            frontier.append(h)
            too_big = len(arrows) > max_morphisms
        if too_big:
            continue
        ordered = sorted(arrows)
        name = {a: f"m{k}" for k, a in enumerate(ordered)}
        comp = {}
        for f in ordered:
            for g in ordered:
                if g[0] == f[1]:
                    comp[(name[g], name[f])] = name[(f[0], g[1], tuple(g[2][x] for x in f[2]))]
        identity = {objs[a]: name[(a, a, tuple(range(sizes[a])))] for a in range(len(sizes))}
        mors = [(name[a], objs[a[0]], objs[a[1]]) for a in ordered]
        return FiniteCategory(objs, mors, identity, comp, name="rand", check=False)


def random_relation_ii(C: FiniteCategory, rng: random.Random, density: float = 0.2) -> PreCoverRelation:
    """Random pairs with equal codomains, closed under condition (ii)."""
    pairs = [(f, g) for f in C.morphisms for g in C.morphisms if C.cod[f] == C.cod[g] and rng.random() < density]
    return closure_under_ii(PreCoverRelation(C, pairs, name="rand"))


# -- group diagrams ---------------------------------------------------------------------------


@dataclass
class GroupInstance:
    name: str
    C: GroupDiagram
    g: DiagramHom


def _largest_image_hom(G, H):
    homs = homomorphisms(G, H)
    return max(homs, key=lambda h: (len(image_subgroup(h)), [-x for x in h.map]))


def group_diagrams() -> list[GroupDiagram]:
    """Diagrams over ``2`` and ``3`` with component orders at most 8."""
    gs = standard_groups()
    two, three = arrow_category(), composable_pair()
    hom = lambda a, b: _largest_image_hom(gs[a], gs[b])  # noqa: E731
    chains2 = [("S3", "Z2"), ("Z4", "Z2"), ("Z2", "S3"), ("Z4", "D4"), ("Q8", "V4"), ("D4", "V4"), ("Z6", "S3"), ("S3", "S3"), ("V4", "D4")]
    chains3 = [("Z2", "S3", "Z2"), ("Z4", "D4", "V4"), ("Q8", "V4", "Z2"), ("S3", "S3", "Z2"), ("Z2", "Q8", "V4")]
    out = []
    for a, b in chains2:
        out.append(chain_diagram(two, {"0": gs[a], "1": gs[b]}, {"a": hom(a, b)}, name=f"{a}->{b}"))
    for a, b, c in chains3:
        out.append(
            chain_diagram(three, {"0": gs[a], "1": gs[b], "2": gs[c]}, {"a": hom(a, b), "b": hom(b, c)}, name=f"{a}->{b}->{c}")
        )
    return out


def compatible_families(C: GroupDiagram) -> list[dict]:
    I = C.index
    lattices = [subgroups(C.groups[X]) for X in I.objects]
    out = []
    for combo in itertools.product(*lattices):
        fam = dict(zip(I.objects, combo))
        if is_compatible(C, fam):
            out.append(fam)
    return out


def group_instances(seed: int = 0, per_diagram: int = 3) -> list[GroupInstance]:
    """Inclusions of compatible subdiagrams plus one zero map per diagram."""
    rng = random.Random(seed)
    out = []
    for C in group_diagrams():
        fams = compatible_families(C)
        picks = [fams[0], fams[-1]] + rng.sample(fams, min(per_diagram, len(fams)))
        seen = set()
        for k, fam in enumerate(picks):
            key = tuple(fam[X].elements for X in C.index.objects)
            if key in seen:
                continue
            seen.add(key)
            _, incl = sub_diagram(C, fam, name=f"S{k}")
            out.append(GroupInstance(f"{C.name}/sub{k}", C, incl))
        Z2 = cyclic(2)
        const = chain_diagram(C.index, {X: Z2 for X in C.index.objects}, {m: identity_hom(Z2) for m in C.index.morphisms if not C.index.is_identity(m)}, name="constZ2")
        zero = DiagramHom(const, C, {X: zero_hom(Z2, C.groups[X]) for X in C.index.objects}, name="zero")
        out.append(GroupInstance(f"{C.name}/zero", C, zero))
    return out
