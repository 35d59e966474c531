import json
import subprocess
import sys

import pytest

from coverimages import fixtures as fx
from coverimages.cli import EXIT_CAP, EXIT_INVALID, EXIT_NO_IMAGE, EXIT_OK, export_counterexample, main
from coverimages.formats import dump_category, dump_diagram_hom, dump_group, dump_group_diagram, dump_hom, dump_relation
from coverimages.groups import standard_groups


@pytest.fixture
def cx(tmp_path):
    return export_counterexample(tmp_path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_counterexample_matches_golden(capsys, request):
    code, out, _ = run(capsys, "counterexample")
    assert code == EXIT_OK
    assert out == (request.path.parent / "golden" / "counterexample.txt").read_text(encoding="utf-8")


def test_counterexample_structured(capsys):
    code, out, _ = run(capsys, "counterexample", "--format", "structured")
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["command"] == "counterexample"
    assert record["kind"] == "counterexample"
    assert record["result"]["oracle_image"] is None


def test_image_of_g_prime(capsys, cx):
    code, out, _ = run(capsys, "image", "--cat", cx["cat"], "--rel", cx["rel"], "--mor", "gp")
    assert code == EXIT_OK
    assert out == "(A', f')\n"
    code, out, _ = run(capsys, "image", "--cat", cx["cat"], "--rel", cx["rel"], "--mor", "g'")
    assert out == "(A', f')\n"


def test_image_unknown_morphism(capsys, cx):
    code, _, err = run(capsys, "image", "--cat", cx["cat"], "--rel", cx["rel"], "--mor", "zz")
    assert code == EXIT_INVALID
    assert "zz" in err


def test_no_image_exit_code(capsys, tmp_path, cx):
    rel = tmp_path / "empty.pcr"
    rel.write_text("relation empty on P\n", encoding="utf-8")
    code, _, _ = run(capsys, "image", "--cat", cx["cat"], "--rel", rel, "--mor", "g")
    assert code == EXIT_NO_IMAGE


def test_conditions(capsys, cx):
    code, out, _ = run(capsys, "conditions", "--cat", cx["cat"], "--rel", cx["rel"])
    assert code == EXIT_OK
    assert out == "condition (i): holds\ncondition (ii): holds\n"


def test_closure(capsys, tmp_path, cx):
    rel = tmp_path / "one.pcr"
    rel.write_text("relation one on P\npair g' < g'\n", encoding="utf-8")
    code, out, _ = run(capsys, "closure", "--cat", cx["cat"], "--rel", rel, "--only-ii")
    assert code == EXIT_OK
    assert "pair B_to_C' < g'" in out


@pytest.mark.parametrize("command", ["lift", "oracle-image"])
def test_counterexample_square_query_exits_2(capsys, cx, command):
    for index in ("two", cx["index"]):
        code, _, err = run(capsys, command, "--cat", cx["cat"], "--index", index, "--rel", cx["rel"], "--nat", cx["nat"])
        assert code == EXIT_NO_IMAGE, (index, err)


def test_lift_structured_failure_record(capsys, cx):
    code, out, _ = run(
        capsys, "lift", "--format", "structured", "--cat", cx["cat"], "--index", "two", "--rel", cx["rel"], "--nat", cx["nat"]
    )
    assert code == EXIT_NO_IMAGE
    record = json.loads(out)
    assert record["kind"] == "no-limit"
    assert [c[0] for c in record["witness"]["maximal_cones"]] == ["A", "B"]


def test_lift_with_oracle(capsys, tmp_path):
    inst = next(i for i in fx.lifting_suite() if i.I.name == "2" and i.C.name == "diamond")
    from coverimages.formats import dump_functor, dump_nat

    (tmp_path / "c.fincat").write_text(dump_category(inst.C), encoding="utf-8")
    (tmp_path / "r.pcr").write_text(dump_relation(inst.R), encoding="utf-8")
    nat = dump_functor(inst.g.source, "F") + dump_functor(inst.g.target, "G") + dump_nat(inst.g, "g", "F", "G")
    (tmp_path / "g.nat").write_text(nat, encoding="utf-8")
    code, out, err = run(
        capsys, "lift", "--cat", tmp_path / "c.fincat", "--index", "two", "--rel", tmp_path / "r.pcr",
        "--nat", tmp_path / "g.nat", "--oracle",
    )
    assert code == EXIT_OK, err
    assert out.startswith("lifted image of g:")
    assert out.rstrip().endswith("oracle agreement: CERTIFIED (isomorphic to oracle image)")


def test_materialize_and_cap(capsys, cx):
    code, out, _ = run(capsys, "materialize", "--cat", cx["cat"], "--index", "two")
    assert code == EXIT_OK
    assert out.startswith("# 17 functors")
    code, _, err = run(capsys, "materialize", "--cat", cx["cat"], "--index", "square", "--cap-functors", "100")
    assert code == EXIT_CAP
    assert "exceeds cap 100" in err


def test_validate_reports_file_and_line(capsys, tmp_path):
    bad = tmp_path / "bad.fincat"
    bad.write_text("category X\nobject a\nmor f : a -> a\nid a = f\n", encoding="utf-8")
    code, _, err = run(capsys, "validate", bad)
    assert code == EXIT_INVALID
    assert f"{bad}:" in err and "totality" in err


def test_validate_ok(capsys, cx):
    code, out, _ = run(capsys, "validate", cx["cat"], cx["rel"])
    assert code == EXIT_OK
    assert "category P: valid (6 objects, 17 morphisms)" in out


def test_usage_error_is_invalid_input(capsys):
    assert main(["image"]) == EXIT_INVALID
    assert main(["materialize", "--cat", "x", "--index", "two", "--cap-functors", "0"]) == EXIT_INVALID


def _group_files(tmp_path):
    inst = next(i for i in fx.group_instances() if i.C.index.name == "2")
    A, Cd = inst.g.source, inst.g.target
    groups = {G.name: G for D in (A, Cd) for G in D.groups.values()}
    text = dump_category(Cd.index) + "".join(dump_group(G) for G in groups.values())
    text += dump_group_diagram(A, "Ad") + dump_group_diagram(Cd, "Cd") + dump_diagram_hom(inst.g, "g", "Ad", "Cd")
    path = tmp_path / "diagram.txt"
    path.write_text(text, encoding="utf-8")
    return path


def test_group_centralizer_and_normalizer(capsys, tmp_path):
    p = tmp_path / "s3.grp"
    p.write_text(dump_group(standard_groups()["S3"]), encoding="utf-8")
    code, out, _ = run(capsys, "group", "centralizer", p, "--gens", "(123)")
    assert code == EXIT_OK
    assert out == "centralizer of {(), (123), (132)} in S3: {(), (123), (132)}\n"
    code, out, _ = run(capsys, "group", "normalizer", p, "--gens", "(12)", "--format", "structured")
    assert json.loads(out)["result"]["labels"] == ["()", "(12)"]
    code, _, _ = run(capsys, "group", "centralizer", p, "--gens", "(1234)")
    assert code == EXIT_INVALID


def test_group_image_of_hom(capsys, tmp_path):
    S3 = standard_groups()["S3"]
    from coverimages.groups import generated_subgroup

    S, inc = generated_subgroup(S3, [1]).as_group("T")
    p = tmp_path / "h.txt"
    p.write_text(dump_group(S3) + dump_group(S) + dump_hom(inc, "h"), encoding="utf-8")
    code, out, _ = run(capsys, "group", "image", p, "--hom", "h", "--relation", "normalizes")
    assert code == EXIT_OK
    assert out == "image of h under normalizes: {(), (12)}\n"


def test_group_lift_and_oracle(capsys, tmp_path):
    path = _group_files(tmp_path)
    for relation in ("commutes", "normalizes"):
        code, out, _ = run(capsys, "group", "lift", path, "--relation", relation, "--oracle")
        assert code == EXIT_OK
        assert "oracle agreement: AGREE" in out
        code2, out2, _ = run(capsys, "group", "oracle", path, "--relation", relation)
        assert code2 == EXIT_OK
        assert out2.splitlines()[1:] == out.splitlines()[1:-1]
    code, _, _ = run(capsys, "group", "oracle", path, "--cap-subgroup-order", "2")
    assert code == EXIT_CAP


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "coverimages.cli", "counterexample", "--format", "structured"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "counterexample"
