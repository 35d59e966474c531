import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coverimages import fixtures as fx
from coverimages.errors import GuardExceeded, MissingComponentImage
from coverimages.fincat import verify_limit, wide_pullback
from coverimages.groups import (
    FiniteGroup,
    centralizer,
    check_diagram,
    check_hom,
    commutes_check,
    compose_hom,
    generated_subgroup,
    group_image,
    homomorphisms,
    identity_hom,
    intersect,
    is_normal,
    kernel,
    lifted_group_image,
    make_hom,
    normalizer,
    normalizes_check,
    normalizes_existential,
    preimage_subgroup,
    standard_groups,
    subdiagram_oracle,
    subgroup_lattice_category,
    subgroups,
    trivial,
    whole,
    zero_hom,
)

GROUPS = standard_groups()
S3 = GROUPS["S3"]


def el(G, label):
    return G.labels.index(label)


def sub(G, *labels):
    return generated_subgroup(G, [el(G, x) for x in labels])


def incl(S):
    return S.as_group()[1]


def test_bad_table_rejected():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])


def test_standard_groups_orders_and_subgroup_counts():
    counts = {"Z1": 1, "Z2": 2, "Z3": 2, "Z4": 3, "Z6": 4, "V4": 5, "S3": 6, "D4": 10, "Q8": 6}
    for name, G in GROUPS.items():
        assert len(subgroups(G)) == counts[name], name
    assert not S3.is_abelian() and GROUPS["V4"].is_abelian()


def test_images_of_homs():
    sign = next(h for h in homomorphisms(S3, GROUPS["Z2"]) if set(h.map) == {0, 1})
    from coverimages.groups import image_subgroup

    assert image_subgroup(zero_hom(S3, S3)) == trivial(S3)
    assert image_subgroup(identity_hom(S3)) == whole(S3)
    assert image_subgroup(sign) == whole(GROUPS["Z2"])
    assert kernel(sign) == sub(S3, "(123)")


def test_centralizer_examples():
    for G in GROUPS.values():
        assert centralizer(G, trivial(G)) == whole(G)
    assert centralizer(S3, sub(S3, "(123)")) == sub(S3, "(123)")
    Q8 = GROUPS["Q8"]
    assert centralizer(Q8, sub(Q8, "-1")) == whole(Q8)


def test_normalizer_examples():
    assert normalizer(S3, sub(S3, "(12)")) == sub(S3, "(12)")
    D4 = GROUPS["D4"]
    r = sub(D4, "(1234)")
    assert normalizer(D4, r) == whole(D4)
    assert is_normal(whole(S3), sub(S3, "(123)"))
    assert normalizer(S3, sub(S3, "(123)")) == whole(S3)


def test_commutes_check_examples():
    t12, t13 = sub(S3, "(12)"), sub(S3, "(13)")
    assert not commutes_check(incl(t12), incl(t13))
    for h in (incl(t12), incl(t13)):
        assert commutes_check(zero_hom(GROUPS["Z2"], S3), h)
    V4 = GROUPS["V4"]
    for a, b in itertools.product(subgroups(V4), repeat=2):
        assert commutes_check(incl(a), incl(b))


def test_normalizes_check_examples():
    A3 = sub(S3, "(123)")
    for H in subgroups(S3):
        assert normalizes_check(incl(H), incl(A3))
    sign = next(h for h in homomorphisms(S3, GROUPS["Z2"]) if set(h.map) == {0, 1})
    assert not normalizes_check(identity_hom(GROUPS["Z2"]), sign)
    assert not normalizes_check(incl(A3), incl(sub(S3, "(12)")))
    assert not normalizes_existential(incl(A3), incl(sub(S3, "(12)")))


def test_preimage_and_intersection():
    S = sub(S3, "(123)")
    assert preimage_subgroup(identity_hom(S3), S) == S
    sign = next(h for h in homomorphisms(S3, GROUPS["Z2"]) if set(h.map) == {0, 1})
    assert preimage_subgroup(sign, trivial(GROUPS["Z2"])) == kernel(sign)
    for aut in homomorphisms(S3, S3):
        if aut.is_injective():
            assert preimage_subgroup(aut, S) == S
    assert intersect([whole(S3)]) == whole(S3)
    assert intersect([sub(S3, "(12)"), S]) == trivial(S3)
    assert intersect([S, whole(S3)]) == S
    with pytest.raises(ValueError):
        intersect([])


def test_group_image_normalizes_non_injective():
    sign = next(h for h in homomorphisms(S3, GROUPS["Z2"]) if set(h.map) == {0, 1})
    with pytest.raises(MissingComponentImage):
        group_image("normalizes", sign)
    with pytest.raises(ValueError):
        group_image("bogus", sign)


def test_homomorphism_counts():
    # |Hom(Z_m, Z_n)| = gcd(m, n); |Hom(S3, S3)| = 10
    assert len(homomorphisms(GROUPS["Z4"], GROUPS["Z6"])) == 2
    assert len(homomorphisms(S3, S3)) == 10
    assert all(check_hom(h) for h in homomorphisms(GROUPS["Q8"], GROUPS["V4"]))


def test_make_hom_rejects_non_hom():
    with pytest.raises(ValueError):
        make_hom(GROUPS["Z2"], GROUPS["Z2"], [1, 0])


def test_wide_pullback_of_subgroup_inclusions_is_intersection():
    for G in (S3, GROUPS["D4"], GROUPS["Q8"]):
        C, subs = subgroup_lattice_category(G)
        top = C.objects[subs.index(whole(G))]
        for trio in itertools.combinations(range(len(subs)), 3):
            family = [C.hom(C.objects[k], top)[0] for k in trio]
            cone = wide_pullback(C, family)
            assert verify_limit(C, family, cone.apex, cone.legs)
            assert subs[C.objects.index(cone.apex)] == intersect([subs[k] for k in trio])


def test_diagrams_are_functors():
    for D in fx.group_diagrams():
        assert check_diagram(D)


def test_terminal_index_diagram_image():
    from coverimages.groups import GroupDiagram, DiagramHom

    I = fx.terminal_category()
    S = sub(S3, "(12)")
    Sg, inc = S.as_group()
    Cd = GroupDiagram(I, {"0": S3}, {"id_0": identity_hom(S3)})
    Ad = GroupDiagram(I, {"0": Sg}, {"id_0": identity_hom(Sg)})
    g = DiagramHom(Ad, Cd, {"0": inc})
    assert lifted_group_image("commutes", Cd, g).subgroups["0"] == centralizer(S3, S)
    assert lifted_group_image("normalizes", Cd, g).subgroups["0"] == normalizer(S3, S)


def test_arrow_centralizer_formula():
    for inst in fx.group_instances():
        C = inst.C
        if C.index.name != "2":
            continue
        g = inst.g
        gamma = C.homs["a"]
        from coverimages.groups import image_subgroup

        z0 = centralizer(C.groups["0"], image_subgroup(g["0"]))
        z1 = centralizer(C.groups["1"], image_subgroup(g["1"]))
        expected0 = intersect([z0, preimage_subgroup(gamma, z1)])
        lifted = lifted_group_image("commutes", C, g)
        oracle = subdiagram_oracle("commutes", C, g)
        assert lifted.subgroups["0"] == expected0 == oracle.subgroups["0"]
        assert lifted.subgroups["1"] == z1 == oracle.subgroups["1"]


def test_zero_components_give_whole_diagram():
    for inst in fx.group_instances():
        if all(set(inst.g[X].map) == {0} for X in inst.C.index.objects):
            res = subdiagram_oracle("commutes", inst.C, inst.g)
            assert all(res.subgroups[X] == whole(inst.C.groups[X]) for X in inst.C.index.objects)
            assert lifted_group_image("commutes", inst.C, inst.g).element_sets() == res.element_sets()


def test_normalizes_with_non_injective_component_has_no_image():
    for inst in fx.group_instances():
        if not all(inst.g[X].is_injective() for X in inst.C.index.objects):
            assert subdiagram_oracle("normalizes", inst.C, inst.g) is None
            with pytest.raises(MissingComponentImage):
                lifted_group_image("normalizes", inst.C, inst.g)
            break
    else:
        pytest.fail("no instance with a non-injective component")


def test_oracle_guard():
    inst = fx.group_instances()[0]
    with pytest.raises(GuardExceeded):
        subdiagram_oracle("commutes", inst.C, inst.g, guard=2)


subgroup_pairs = st.sampled_from(["Z4", "Z6", "S3", "D4", "Q8", "V4"]).flatmap(
    lambda n: st.tuples(st.just(GROUPS[n]), st.sampled_from(subgroups(GROUPS[n])), st.sampled_from(subgroups(GROUPS[n])))
)


@given(subgroup_pairs)
def test_normalizes_agrees_with_existential(data):
    G, A, B = data
    assert normalizes_check(incl(A), incl(B)) == normalizes_existential(incl(A), incl(B))


@given(subgroup_pairs)
def test_centralizer_is_greatest_commuting_subgroup(data):
    G, _, S = data
    Z = centralizer(G, S)
    assert commutes_check(incl(Z), incl(S))
    for H in subgroups(G):
        if commutes_check(incl(H), incl(S)):
            assert H.issubset(Z)


@given(st.sampled_from(list(GROUPS.values())).flatmap(lambda G: st.tuples(st.just(G), st.sampled_from(homomorphisms(G, G)))))
def test_compose_with_identity(data):
    G, h = data
    assert compose_hom(h, identity_hom(G)) == h == compose_hom(identity_hom(G), h)
