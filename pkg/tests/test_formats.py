import pytest

from coverimages import fixtures as fx
from coverimages.formats import (
    ParseError,
    dump_category,
    dump_diagram_hom,
    dump_functor,
    dump_group,
    dump_group_diagram,
    dump_hom,
    dump_nat,
    dump_relation,
    load_files,
    loads,
)
from coverimages.groups import identity_hom, standard_groups

ARROW = """\
# the arrow category
category two
object 0
object 1
mor i0 : 0 -> 0
mor i1 : 1 -> 1
mor a : 0 -> 1
id 0 = i0
id 1 = i1
comp i0 . i0 = i0
comp i1 . i1 = i1
comp a . i0 = a
comp i1 . a = a
"""


def test_parse_category_with_comments():
    ws = loads(ARROW)
    C = ws.categories["two"]
    assert C.objects == ("0", "1")
    assert C.compose("a", "i0") == "a"


def test_missing_comp_names_file_line_and_law():
    text = ARROW.replace("comp i1 . a = a\n", "")
    with pytest.raises(ParseError) as info:
        loads(text, "two.fincat")
    msg = str(info.value)
    assert msg.startswith("two.fincat:")
    assert "totality violated at (i1,a)" in msg


def test_bad_line_shape():
    with pytest.raises(ParseError) as info:
        loads(ARROW.replace("mor a : 0 -> 1", "mor a 0 -> 1"), "x")
    assert info.value.line == 7


def test_line_outside_block():
    with pytest.raises(ParseError):
        loads("object a\n")


def test_duplicate_names():
    with pytest.raises(ParseError):
        loads(ARROW + ARROW)


def test_relation_errors(counterexample):
    C, _ = counterexample
    base = dump_category(C)
    with pytest.raises(ParseError, match="unknown morphism"):
        loads(base + "relation R on P\npair f < zz\n")
    with pytest.raises(ParseError, match="codomain"):
        loads(base + "relation R on P\npair f < g'\n")
    with pytest.raises(ParseError, match="unknown category"):
        loads(base + "relation R on Q\n")


def test_counterexample_round_trip(counterexample):
    C, R = counterexample
    text = dump_category(C) + dump_relation(R)
    ws = loads(text)
    assert ws.categories["P"] == C
    assert ws.relations["cover"] == R
    assert dump_category(ws.categories["P"]) + dump_relation(ws.relations["cover"]) == text


def test_all_string_fixtures_round_trip():
    for fixture in fx.standard_fixtures():
        if fixture.category is not None:
            text = dump_category(fixture.category)
            C = loads(text).first("category")
            assert C == fixture.category and dump_category(C) == text
        if fixture.group is not None:
            text = dump_group(fixture.group)
            assert loads(text).first("group") == fixture.group


def test_nat_round_trip():
    C, I, R, g = fx.counterexample_g()
    text = dump_category(C) + dump_category(I)
    text += dump_functor(g.source, "beta") + dump_functor(g.target, "gamma") + dump_nat(g, "gg", "beta", "gamma")
    ws = loads(text)
    h = ws.nats["gg"]
    assert h.key() == g.key() and h.source.key() == g.source.key()


def test_functor_law_violation_reported():
    C, I, R, g = fx.counterexample_g()
    text = dump_category(C) + dump_category(I) + dump_functor(g.source, "beta").replace("a |-> beta", "a |-> g")
    with pytest.raises(ParseError, match="functor beta"):
        loads(text)


def test_group_diagram_round_trip():
    for inst in fx.group_instances()[:10]:
        A, Cd = inst.g.source, inst.g.target
        groups = {G.name: G for D in (A, Cd) for G in D.groups.values()}
        text = dump_category(Cd.index) + "".join(dump_group(G) for G in groups.values())
        text += dump_group_diagram(A, "Ad") + dump_group_diagram(Cd, "Cd") + dump_diagram_hom(inst.g, "g", "Ad", "Cd")
        ws = loads(text)
        assert ws.functors["Cd"] == Cd
        assert ws.functors["Ad"] == A
        assert all(ws.nats["g"][X] == inst.g[X] for X in Cd.index.objects)


def test_group_diagram_fills_identities_and_composites():
    S3 = standard_groups()["S3"]
    text = dump_category(fx.composable_pair()) + dump_group(S3)
    text += dump_hom(identity_hom(S3), "e")
    text += "functor D : 3 -> Grp\nobj 0 |-> S3\nobj 1 |-> S3\nobj 2 |-> S3\nmor a |-> e\nmor b |-> e\n"
    D = loads(text).functors["D"]
    assert D.homs["ba"] == identity_hom(S3)


def test_group_parse_errors():
    with pytest.raises(ParseError, match="identity"):
        loads("group G order 2\nrow 0 : 1 0\nrow 1 : 0 1\n", "g.grp")
    with pytest.raises(ParseError, match="rows"):
        loads("group G order 2\nrow 0 : 0 1\n")
    with pytest.raises(ParseError, match="homomorphism"):
        Z2 = dump_group(standard_groups()["Z2"])
        loads(Z2 + "hom h : Z2 -> Z2\nmap 0 -> 1\nmap 1 -> 0\n")


def test_load_files(tmp_path):
    p = tmp_path / "two.fincat"
    p.write_text(ARROW, encoding="utf-8")
    ws = load_files([p])
    assert ws.origin[("category", "two")] == str(p)
    with pytest.raises(ParseError, match="cannot read"):
        load_files([tmp_path / "missing.fincat"])


def test_unwritable_identifiers():
    from coverimages.fincat import product_category

    with pytest.raises(ValueError):
        dump_category(product_category(fx.chain(2), fx.chain(2)))
