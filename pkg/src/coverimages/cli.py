"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 no image or no limit,
3 size cap exceeded, 4 internal certification failure.

With ``--format structured`` every result is one JSON object per line with
keys ``command``, ``inputs``, ``kind`` and ``result`` (plus ``witness`` for
failures).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures
from .errors import (
    CapExceeded,
    CertificationError,
    ConditionIIViolated,
    CoverImagesError,
    MissingComponentImage,
    MissingLimit,
    UnknownIdentifier,
)
from .formats import ParseError, Workspace, dump_category, dump_functor, dump_nat, dump_relation, load_texts
from .functorcat import DEFAULT_FUNCTOR_CAP, materialize, oracle_image
from .groups import (
    DEFAULT_SUBGROUP_GUARD,
    RELATIONS,
    DiagramHom,
    GroupDiagram,
    centralizer,
    generated_subgroup,
    group_image,
    lifted_group_image,
    normalizer,
    subdiagram_oracle,
)
from .lifting import lifted_image, verify_universal
from .precover import closure_under_ii, cover_closure, image, satisfies_condition_i, satisfies_condition_ii

EXIT_OK, EXIT_INVALID, EXIT_NO_IMAGE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4

INDEX_ALIASES = {
    "terminal": "1",
    "one": "1",
    "arrow": "2",
    "two": "2",
    "pair": "3",
    "three": "3",
    "square": "sq",
}


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    cap_functors: int = DEFAULT_FUNCTOR_CAP
    cap_subgroup_order: int = DEFAULT_SUBGROUP_GUARD
    output_format: str = "text"
    seed: int = 0
    inputs: list = field(default_factory=list)


class _Failure(Exception):
    def __init__(self, code, kind, message, witness=None):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.witness = witness


class Reporter:
    def __init__(self, config: RunConfig, out):
        self.config = config
        self.out = out

    def emit(self, kind: str, text: str, result=None, witness=None):
        if self.config.output_format == "structured":
            record = {"command": self.config.command, "inputs": self.config.inputs, "kind": kind, "result": result}
            if witness is not None:
                record["witness"] = witness
            self.out.write(json.dumps(record, sort_keys=True, default=str) + "\n")
        else:
            self.out.write(text if text.endswith("\n") else text + "\n")


# -- input resolution -------------------------------------------------------------------


def _load(paths, index_spec: str | None = None) -> tuple[Workspace, object]:
    """Load files together; a built-in index name is added as a category block.

    Returns the workspace and the index category (None without ``index_spec``).
    """
    texts = []
    for p in paths:
        if p is None:
            continue
        try:
            texts.append((str(p), Path(p).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ParseError(str(p), 0, f"cannot read file: {exc.strerror}") from None
    builtin = None
    if index_spec is not None and not Path(index_spec).exists():
        key = INDEX_ALIASES.get(index_spec, index_spec)
        if key not in fixtures.INDEX_CATEGORIES:
            raise ParseError(index_spec, 0, "no such file or built-in index category")
        builtin = fixtures.INDEX_CATEGORIES[key]()
        texts.insert(0, ("<builtin>", dump_category(builtin)))
    elif index_spec is not None:
        texts.append((str(index_spec), Path(index_spec).read_text(encoding="utf-8")))
    ws = load_texts(texts)
    if index_spec is None:
        return ws, None
    return ws, ws.first("category", "<builtin>" if builtin is not None else index_spec)


def _resolve_morphism(C, name: str):
    """Look a morphism up by id; a trailing ``p`` may stand for a prime."""
    if C.has_morphism(name):
        return name
    alias = name[:-1] + "'"
    if name.endswith("p") and C.has_morphism(alias):
        return alias
    raise _Failure(EXIT_INVALID, "unknown-morphism", f"no morphism {name!r} in category {C.name}")


def _cat_and_rel(args):
    ws, _ = _load([args.cat, args.rel])
    C = ws.first("category", args.cat)
    R = ws.first("relation", args.rel)
    if R.category != C:
        raise _Failure(EXIT_INVALID, "mismatch", f"relation {R.name} is not on category {C.name}")
    return ws, C, R


# -- commands -------------------------------------------------------------------------


def cmd_validate(cfg: RunConfig, rep: Reporter) -> int:
    ws, _ = _load(cfg.args.files)
    summary = []
    for kind, name in ws.order:
        obj = ws.get(kind, name)
        detail = ""
        if kind == "category":
            detail = f"{len(obj.objects)} objects, {len(obj.morphisms)} morphisms"
        elif kind == "relation":
            detail = f"{len(obj.pairs)} pairs"
        elif kind == "group":
            detail = f"order {obj.order}"
        summary.append({"kind": kind, "name": name, "detail": detail})
        rep.emit("valid", f"{kind} {name}: valid" + (f" ({detail})" if detail else ""), summary[-1])
    return EXIT_OK


def cmd_image(cfg: RunConfig, rep: Reporter) -> int:
    _, C, R = _cat_and_rel(cfg.args)
    g = _resolve_morphism(C, cfg.args.mor)
    res = image(C, R, g)
    if res is None:
        raise _Failure(EXIT_NO_IMAGE, "no-image", f"{g} has no image", {"morphism": g})
    rep.emit("image", f"({res.object}, {res.arrow})", {"morphism": g, "object": res.object, "arrow": res.arrow})
    return EXIT_OK


def cmd_conditions(cfg: RunConfig, rep: Reporter) -> int:
    _, _, R = _cat_and_rel(cfg.args)
    for label, check in (("i", satisfies_condition_i(R)), ("ii", satisfies_condition_ii(R))):
        text = f"condition ({label}): " + ("holds" if check else f"fails at {check.witness}")
        rep.emit("condition", text, {"condition": label, "holds": check.holds}, None if check else list(check.witness))
    return EXIT_OK


def cmd_closure(cfg: RunConfig, rep: Reporter) -> int:
    _, _, R = _cat_and_rel(cfg.args)
    closed = closure_under_ii(R) if cfg.args.only_ii else cover_closure(R)
    rep.emit("relation", dump_relation(closed, name=R.name), {"pairs": [list(p) for p in closed.sorted_pairs()]})
    return EXIT_OK


def cmd_materialize(cfg: RunConfig, rep: Reporter) -> int:
    ws, I = _load([cfg.args.cat], cfg.args.index)
    C = ws.first("category", cfg.args.cat)
    view = materialize(C, I, cfg.cap_functors)
    cat = view.category
    text = f"# {len(cat.objects)} functors, {len(cat.morphisms)} natural transformations\n" + dump_category(cat)
    rep.emit("materialized", text, {"objects": len(cat.objects), "morphisms": len(cat.morphisms)})
    return EXIT_OK


def _nat_inputs(cfg: RunConfig):
    a = cfg.args
    ws, I = _load([a.cat, a.rel, a.nat], a.index)
    C = ws.first("category", a.cat)
    R = ws.first("relation", a.rel)
    g = ws.get("nat", a.nat_name) if a.nat_name else ws.first("nat", a.nat)
    if R.category != C:
        raise _Failure(EXIT_INVALID, "mismatch", f"relation {R.name} is not on category {C.name}")
    if not hasattr(g.source, "source") or g.source.source != I or g.source.target != C:
        raise _Failure(EXIT_INVALID, "mismatch", f"nat {g.name} is not a morphism of {C.name}^{I.name}")
    return C, I, R, g


def _describe_functor_image(A, f) -> tuple[str, dict]:
    I = A.source
    lines = [f"  A({x}) = {A.obj_map[x]}, f_{x} = {f[x]}" for x in I.objects]
    lines += [f"  A({m}) = {A.mor_map[m]}" for m in I.morphisms if not I.is_identity(m)]
    data = {
        "objects": {str(x): A.obj_map[x] for x in I.objects},
        "components": {str(x): f[x] for x in I.objects},
        "morphisms": {str(m): A.mor_map[m] for m in I.morphisms},
    }
    return "\n".join(lines), data


def cmd_oracle_image(cfg: RunConfig, rep: Reporter) -> int:
    C, I, R, g = _nat_inputs(cfg)
    O = oracle_image(C, I, R, g, cfg.cap_functors)
    if O is None:
        raise _Failure(EXIT_NO_IMAGE, "no-image", f"{g.name} has no image in {C.name}^{I.name}")
    text, data = _describe_functor_image(O.functor, O.nat)
    rep.emit("image", f"oracle image of {g.name}:\n{text}", data)
    return EXIT_OK


def cmd_lift(cfg: RunConfig, rep: Reporter) -> int:
    C, I, R, g = _nat_inputs(cfg)
    L = lifted_image(C, I, R, g)
    text, data = _describe_functor_image(L.functor, L.nat)
    rep.emit("image", f"lifted image of {g.name}:\n{text}", data)
    if cfg.args.oracle:
        check = verify_universal(C, I, R, g, L, cfg.cap_functors, oracle=True)
        verdict = {"status": check.status, "checked": check.checked, "reason": check.reason}
        line = f"oracle agreement: {check.status}"
        line += " (isomorphic to oracle image)" if check.isomorphism else f" ({check.reason})" if check.reason else ""
        rep.emit("verdict", line, verdict)
        if check.status == "SKIPPED":
            return EXIT_CAP
        if check.status != "CERTIFIED":
            return EXIT_INTERNAL
    return EXIT_OK


def cmd_counterexample(cfg: RunConfig, rep: Reporter) -> int:
    if cfg.args.export:
        out = Path(cfg.args.export)
        out.mkdir(parents=True, exist_ok=True)
        export_counterexample(out)
    report = fixtures.reproduce_counterexample()
    rep.emit("counterexample", report.to_text(), report.to_dict())
    return EXIT_OK


def export_counterexample(directory: Path) -> dict:
    """Write the counterexample category, relation and ``(g,g')`` as files."""
    C, I, R, g = fixtures.counterexample_g()
    paths = {
        "cat": directory / "poset.fincat",
        "rel": directory / "cover.pcr",
        "index": directory / "two.fincat",
        "nat": directory / "g.nat",
    }
    paths["cat"].write_text(dump_category(C), encoding="utf-8")
    paths["rel"].write_text(dump_relation(R), encoding="utf-8")
    paths["index"].write_text(dump_category(I), encoding="utf-8")
    nat_text = dump_functor(g.source, "beta") + dump_functor(g.target, "gamma") + dump_nat(g, "gg", "beta", "gamma")
    paths["nat"].write_text(nat_text, encoding="utf-8")
    return paths


# -- group commands ---------------------------------------------------------------------


def _parse_gens(G, text: str):
    gens = []
    for tok in filter(None, (text or "").split(",")):
        tok = tok.strip()
        if tok in G.labels:
            gens.append(G.labels.index(tok))
        else:
            try:
                k = int(tok)
            except ValueError:
                raise _Failure(EXIT_INVALID, "unknown-element", f"no element {tok!r} in group {G.name}") from None
            if not 0 <= k < G.order:
                raise _Failure(EXIT_INVALID, "unknown-element", f"element index {k} out of range for {G.name}")
            gens.append(k)
    return gens


def _subgroup_result(S):
    return {"order": len(S), "elements": list(S.elements), "labels": S.labels()}


def _subgroup_text(S):
    return "{" + ", ".join(S.labels()) + "}"


def cmd_group(cfg: RunConfig, rep: Reporter) -> int:
    a = cfg.args
    ws, _ = _load(a.files)
    op = a.operation
    if op in ("centralizer", "normalizer"):
        G = ws.get("group", a.group) if a.group else ws.first("group")
        S = generated_subgroup(G, _parse_gens(G, a.gens))
        T = centralizer(G, S) if op == "centralizer" else normalizer(G, S)
        rep.emit("subgroup", f"{op} of {_subgroup_text(S)} in {G.name}: {_subgroup_text(T)}", _subgroup_result(T))
        return EXIT_OK
    relation = a.relation
    if op == "image":
        h = ws.get("hom", a.hom) if a.hom else ws.first("hom")
        S = group_image(relation, h)
        rep.emit("subgroup", f"image of {h.name} under {relation}: {_subgroup_text(S)}", _subgroup_result(S))
        return EXIT_OK
    g = ws.get("nat", a.nat) if a.nat else ws.first("nat")
    if not isinstance(g, DiagramHom):
        raise _Failure(EXIT_INVALID, "mismatch", f"nat {g.name} is not between group diagrams")
    Cdiag: GroupDiagram = g.target
    if op == "lift":
        res = lifted_group_image(relation, Cdiag, g)
    else:
        res = subdiagram_oracle(relation, Cdiag, g, cfg.cap_subgroup_order)
        if res is None:
            raise _Failure(EXIT_NO_IMAGE, "no-image", "satisfying subdiagrams have no greatest element")
    I = Cdiag.index
    lines = [f"{op} image of {g.name} under {relation}:"]
    lines += [f"  A({x}) = {_subgroup_text(res.subgroups[x])} <= {Cdiag.groups[x].name}" for x in I.objects]
    data = {str(x): _subgroup_result(res.subgroups[x]) for x in I.objects}
    rep.emit("diagram-image", "\n".join(lines), data)
    if op == "lift" and a.oracle:
        other = subdiagram_oracle(relation, Cdiag, g, cfg.cap_subgroup_order)
        agree = other is not None and other.element_sets() == res.element_sets()
        rep.emit("verdict", f"oracle agreement: {'AGREE' if agree else 'DISAGREE'}", {"agree": agree})
        if not agree:
            return EXIT_INTERNAL
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "image": cmd_image,
    "conditions": cmd_conditions,
    "closure": cmd_closure,
    "materialize": cmd_materialize,
    "oracle-image": cmd_oracle_image,
    "lift": cmd_lift,
    "counterexample": cmd_counterexample,
    "group": cmd_group,
}


def _positive(text):
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-functors", type=_positive, default=DEFAULT_FUNCTOR_CAP)
    common.add_argument("--cap-subgroup-order", type=_positive, default=DEFAULT_SUBGROUP_GUARD)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="coverimages", description="Images under pre-cover relations in finite categories.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse and validate input files")
    s.add_argument("files", nargs="+")

    for name, help_ in (("image", "image of one morphism"), ("conditions", "check conditions (i) and (ii)"), ("closure", "close a relation")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--cat", required=True)
        s.add_argument("--rel", required=True)
        if name == "image":
            s.add_argument("--mor", required=True)
        if name == "closure":
            s.add_argument("--only-ii", action="store_true", help="close under condition (ii) only")

    s = sub.add_parser("materialize", parents=[common], help="materialize a functor category")
    s.add_argument("--cat", required=True)
    s.add_argument("--index", required=True)

    for name in ("oracle-image", "lift"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--cat", required=True)
        s.add_argument("--index", required=True, help="category file or built-in: terminal, two, three, square")
        s.add_argument("--rel", required=True)
        s.add_argument("--nat", required=True, help="file with the functors and the nat")
        s.add_argument("--nat-name")
        if name == "lift":
            s.add_argument("--oracle", action="store_true")

    s = sub.add_parser("counterexample", parents=[common], help="reproduce the built-in counterexample")
    s.add_argument("--export", metavar="DIR", help="also write its input files to DIR")

    s = sub.add_parser("group", parents=[common], help="finite-group backend")
    s.add_argument("operation", choices=("centralizer", "normalizer", "image", "lift", "oracle"))
    s.add_argument("files", nargs="+")
    s.add_argument("--group")
    s.add_argument("--gens", default="", help="comma-separated element labels or indices")
    s.add_argument("--hom")
    s.add_argument("--nat")
    s.add_argument("--relation", choices=RELATIONS, default="commutes")
    s.add_argument("--oracle", action="store_true")
    return p


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    rep = Reporter(config, out)

    def fail(code, kind, message, witness=None):
        if config.output_format == "structured":
            rep.emit(kind, "", {"error": message, "exit": code}, witness)
        else:
            err.write(f"error: {message}\n")
        return code

    try:
        return COMMANDS[config.command](config, rep)
    except _Failure as exc:
        return fail(exc.code, exc.kind, str(exc), exc.witness)
    except ParseError as exc:
        return fail(EXIT_INVALID, "parse-error", str(exc), {"file": exc.source, "line": exc.line})
    except ConditionIIViolated as exc:
        return fail(EXIT_INVALID, "invalid-relation", str(exc), list(exc.witness))
    except (UnknownIdentifier, KeyError) as exc:
        return fail(EXIT_INVALID, "unknown-identifier", str(exc).strip("'\""))
    except MissingComponentImage as exc:
        return fail(EXIT_NO_IMAGE, "no-image", str(exc), {"object": exc.obj})
    except MissingLimit as exc:
        cones = [[x, list(legs)] for x, legs in getattr(exc, "maximal_cones", ())]
        return fail(EXIT_NO_IMAGE, "no-limit", f"{type(exc).__name__}: {exc}", {"maximal_cones": cones})
    except CapExceeded as exc:
        return fail(EXIT_CAP, "cap-exceeded", str(exc), {"count": exc.count, "cap": exc.cap})
    except CertificationError as exc:
        return fail(EXIT_INTERNAL, "certification-error", str(exc))
    except CoverImagesError as exc:
        return fail(EXIT_INVALID, "invalid-input", str(exc))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for "no image"
        return EXIT_INVALID if exc.code else EXIT_OK
    inputs = list(getattr(args, "files", None) or [])
    inputs += [getattr(args, k) for k in ("cat", "index", "rel", "nat") if getattr(args, k, None)]
    cfg = RunConfig(
        command=args.command,
        args=args,
        cap_functors=args.cap_functors,
        cap_subgroup_order=args.cap_subgroup_order,
        output_format=args.format,
        seed=args.seed,
        inputs=inputs,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
