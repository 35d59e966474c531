"""Line-oriented text formats for categories, relations, groups and diagrams.

Every file is UTF-8, ``#`` starts a comment, tokens are whitespace
separated.  A file may hold several blocks; each block starts with a header
line::

    category NAME            object ID | mor ID : DOM -> COD | id OBJ = MOR | comp G . F = H
    relation NAME on CAT     pair F < G
    group NAME order N       elem INDEX LABEL | row INDEX : N indices
    hom NAME : SRC -> TGT    map S -> T
    functor NAME : I -> TGT  obj X |-> Y | mor M |-> N
    nat NAME : F -> G        at X : MOR

A functor whose target is ``Grp`` is a group diagram: objects map to group
names and morphisms to hom names.  Identity morphisms and composites may be
omitted there and are filled in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import CoverImagesError
from .fincat import FiniteCategory, check_category_data
from .functorcat import Functor, NatTrans, validate_functor, validate_nat
from .groups import DiagramHom, FiniteGroup, GroupDiagram, GroupHom, _check_group_table, check_diagram, check_diagram_hom, check_hom, compose_hom, identity_hom
from .precover import PreCoverRelation, validate_precover

GROUP_TARGET = "Grp"


class ParseError(CoverImagesError):
    """Invalid input; the message names the file and line."""

    def __init__(self, source, line, message):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


@dataclass
class _Block:
    kind: str
    name: str
    header: list
    source: str
    line: int
    body: list = field(default_factory=list)  # (line, tokens)


HEADERS = {"category", "relation", "group", "hom", "functor", "nat"}


def _tokenize(text: str, source: str) -> list[_Block]:
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] in HEADERS:
            if len(toks) < 2:
                raise ParseError(source, lineno, f"'{toks[0]}' header needs a name")
            blocks.append(_Block(toks[0], toks[1], toks, source, lineno))
        elif not blocks:
            raise ParseError(source, lineno, f"line outside any block: {line!r}")
        else:
            blocks[-1].body.append((lineno, toks))
    return blocks


def _expect(block, lineno, toks, pattern):
    """Match ``toks`` against ``pattern`` where ``None`` marks a free token."""
    if len(toks) != len(pattern) or any(p is not None and p != t for p, t in zip(pattern, toks)):
        shape = " ".join(p if p is not None else "_" for p in pattern)
        raise ParseError(block.source, lineno, f"expected '{shape}', got {' '.join(toks)!r}")
    return [t for p, t in zip(pattern, toks) if p is None]


@dataclass
class Workspace:
    """Everything loaded from a set of files, keyed by name."""

    categories: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    nats: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    origin: dict = field(default_factory=dict)

    def first(self, kind: str, source: str | None = None):
        """The first ``kind`` block, optionally restricted to one source file."""
        for k, name in self.order:
            if k == kind and (source is None or self.origin[(k, name)] == str(source)):
                return getattr(self, _PLURAL[k])[name]
        where = f" in {source}" if source is not None else ""
        raise KeyError(f"no {kind} block{where}")

    def get(self, kind: str, name: str):
        table = getattr(self, _PLURAL[kind])
        if name not in table:
            raise KeyError(f"no {kind} named {name!r}")
        return table[name]


_PLURAL = {
    "category": "categories",
    "relation": "relations",
    "group": "groups",
    "hom": "homs",
    "functor": "functors",
    "nat": "nats",
}


def _lookup(ws, kind, name, block, lineno):
    try:
        return ws.get(kind, name)
    except KeyError:
        raise ParseError(block.source, lineno, f"unknown {kind} {name!r}") from None


def _build_category(b: _Block) -> FiniteCategory:
    _expect(b, b.line, b.header, ["category", None])
    objects, morphisms, identity, comp = [], [], {}, {}
    where = {}
    for lineno, toks in b.body:
        kw = toks[0]
        if kw == "object":
            (o,) = _expect(b, lineno, toks, ["object", None])
            objects.append(o)
        elif kw == "mor":
            m, d, c = _expect(b, lineno, toks, ["mor", None, ":", None, "->", None])
            morphisms.append((m, d, c))
            where.setdefault(m, lineno)
        elif kw == "id":
            o, m = _expect(b, lineno, toks, ["id", None, "=", None])
            identity[o] = m
            where.setdefault(o, lineno)
        elif kw == "comp":
            g, f, h = _expect(b, lineno, toks, ["comp", None, ".", None, "=", None])
            if (g, f) in comp:
                raise ParseError(b.source, lineno, f"duplicate comp entry for ({g},{f})")
            comp[(g, f)] = h
            where[(g, f)] = lineno
        else:
            raise ParseError(b.source, lineno, f"unexpected {kw!r} in category block")
    report = check_category_data(objects, morphisms, identity, comp)
    if not report:
        v = report.violations[0]
        lineno = b.line
        for key in (v.witness[:2], v.witness[0] if v.witness else None):
            if key in where:
                lineno = where[key]
                break
        extra = f" (+{len(report.violations) - 1} more)" if len(report.violations) > 1 else ""
        raise ParseError(b.source, lineno, f"category {b.name}: {v}{extra}")
    return FiniteCategory(objects, morphisms, identity, comp, name=b.name, check=False)


def _build_relation(b: _Block, ws: Workspace) -> PreCoverRelation:
    (_, cat_name) = _expect(b, b.line, b.header, ["relation", None, "on", None])
    C = _lookup(ws, "category", cat_name, b, b.line)
    pairs = []
    for lineno, toks in b.body:
        f, g = _expect(b, lineno, toks, ["pair", None, "<", None])
        for m in (f, g):
            if not C.has_morphism(m):
                raise ParseError(b.source, lineno, f"unknown morphism {m!r} in category {cat_name}")
        pairs.append((f, g))
    res = validate_precover(C, pairs, name=b.name)
    if not isinstance(res, PreCoverRelation):
        raise ParseError(b.source, b.line, f"relation {b.name}: {res}")
    return res


def _build_group(b: _Block) -> FiniteGroup:
    _, n = _expect(b, b.line, b.header, ["group", None, "order", None])
    try:
        n = int(n)
    except ValueError:
        raise ParseError(b.source, b.line, f"order must be an integer, got {n!r}") from None
    labels = [str(k) for k in range(n)]
    rows = {}
    for lineno, toks in b.body:
        try:
            if toks[0] == "elem":
                k, lab = _expect(b, lineno, toks, ["elem", None, None])
                labels[int(k)] = lab
            elif toks[0] == "row":
                if len(toks) != n + 3 or toks[2] != ":":
                    raise ParseError(b.source, lineno, f"row needs {n} entries")
                rows[int(toks[1])] = [int(x) for x in toks[3:]]
            else:
                raise ParseError(b.source, lineno, f"unexpected {toks[0]!r} in group block")
        except (ValueError, IndexError):
            raise ParseError(b.source, lineno, "bad element index") from None
    if sorted(rows) != list(range(n)):
        raise ParseError(b.source, b.line, f"group {b.name} needs rows 0..{n - 1}")
    table = [rows[k] for k in range(n)]
    problem = _check_group_table(table)
    if problem:
        raise ParseError(b.source, b.line, f"group {b.name}: {problem}")
    return FiniteGroup(table, labels, name=b.name, check=False)


def _build_hom(b: _Block, ws: Workspace) -> GroupHom:
    src, tgt = _expect(b, b.line, b.header, ["hom", b.name, ":", None, "->", None])
    S = _lookup(ws, "group", src, b, b.line)
    T = _lookup(ws, "group", tgt, b, b.line)
    mapping = {}
    for lineno, toks in b.body:
        x, y = _expect(b, lineno, toks, ["map", None, "->", None])
        try:
            mapping[int(x)] = int(y)
        except ValueError:
            raise ParseError(b.source, lineno, "map entries must be element indices") from None
    if sorted(mapping) != list(range(S.order)):
        raise ParseError(b.source, b.line, f"hom {b.name} must map every element of {src}")
    h = GroupHom(S, T, tuple(mapping[x] for x in range(S.order)), b.name)
    check = check_hom(h)
    if not check:
        raise ParseError(b.source, b.line, f"hom {b.name} is not a homomorphism at {check.witness}")
    return h


def _build_functor(b: _Block, ws: Workspace):
    i_name, t_name = _expect(b, b.line, b.header, ["functor", b.name, ":", None, "->", None])
    I = _lookup(ws, "category", i_name, b, b.line)
    objs, mors = {}, {}
    for lineno, toks in b.body:
        if toks[0] == "obj":
            x, y = _expect(b, lineno, toks, ["obj", None, "|->", None])
            if not I.has_object(x):
                raise ParseError(b.source, lineno, f"unknown object {x!r} of {i_name}")
            objs[x] = y
        elif toks[0] == "mor":
            x, y = _expect(b, lineno, toks, ["mor", None, "|->", None])
            if not I.has_morphism(x):
                raise ParseError(b.source, lineno, f"unknown morphism {x!r} of {i_name}")
            mors[x] = (y, lineno)
        else:
            raise ParseError(b.source, lineno, f"unexpected {toks[0]!r} in functor block")
    if t_name == GROUP_TARGET:
        groups = {x: _lookup(ws, "group", objs.get(x, "?"), b, b.line) for x in I.objects}
        homs = {m: _lookup(ws, "hom", n, b, ln) for m, (n, ln) in mors.items()}
        for x in I.objects:
            homs.setdefault(I.identity[x], identity_hom(groups[x]))
        changed = True
        while changed:
            changed = False
            for (g, f), h in I.comp_table.items():
                if h not in homs and g in homs and f in homs:
                    homs[h] = compose_hom(homs[g], homs[f])
                    changed = True
        missing = [m for m in I.morphisms if m not in homs]
        if missing:
            raise ParseError(b.source, b.line, f"diagram {b.name} has no hom for {missing[0]!r}")
        D = GroupDiagram(I, groups, homs, name=b.name, check=False)
        check = check_diagram(D)
        if not check:
            raise ParseError(b.source, b.line, f"diagram {b.name} is not a functor: {check.witness}")
        return D
    C = _lookup(ws, "category", t_name, b, b.line)
    F = Functor(I, C, objs, {m: n for m, (n, _) in mors.items()}, name=b.name)
    check = validate_functor(F)
    if not check:
        raise ParseError(b.source, b.line, f"functor {b.name}: {check.witness[0]} law violated at {check.witness[1]!r}")
    return F


def _build_nat(b: _Block, ws: Workspace):
    f_name, g_name = _expect(b, b.line, b.header, ["nat", b.name, ":", None, "->", None])
    F = _lookup(ws, "functor", f_name, b, b.line)
    G = _lookup(ws, "functor", g_name, b, b.line)
    comps = {}
    for lineno, toks in b.body:
        x, m = _expect(b, lineno, toks, ["at", None, ":", None])
        comps[x] = (m, lineno)
    if isinstance(F, GroupDiagram):
        if not isinstance(G, GroupDiagram):
            raise ParseError(b.source, b.line, "nat between a group diagram and a functor")
        alpha = DiagramHom(F, G, {x: _lookup(ws, "hom", m, b, ln) for x, (m, ln) in comps.items()}, name=b.name, check=False)
        check = check_diagram_hom(alpha)
    else:
        alpha = NatTrans(F, G, {x: m for x, (m, _) in comps.items()}, name=b.name)
        check = validate_nat(alpha)
    if not check:
        raise ParseError(b.source, b.line, f"nat {b.name}: {check.witness[0]} violated at {check.witness[1]!r}")
    return alpha


_BUILD_ORDER = ["category", "group", "hom", "relation", "functor", "nat"]


def load_texts(texts: list[tuple[str, str]]) -> Workspace:
    """Parse ``(source, text)`` pairs into one workspace."""
    blocks = []
    for source, text in texts:
        blocks += _tokenize(text, source)
    ws = Workspace()
    for kind in _BUILD_ORDER:
        table = getattr(ws, _PLURAL[kind])
        for b in blocks:
            if b.kind != kind:
                continue
            if b.name in table:
                raise ParseError(b.source, b.line, f"duplicate {kind} name {b.name!r}")
            if kind == "category":
                table[b.name] = _build_category(b)
            elif kind == "group":
                table[b.name] = _build_group(b)
            elif kind == "hom":
                table[b.name] = _build_hom(b, ws)
            elif kind == "relation":
                table[b.name] = _build_relation(b, ws)
            elif kind == "functor":
                table[b.name] = _build_functor(b, ws)
            else:
                table[b.name] = _build_nat(b, ws)
    ws.order = [(b.kind, b.name) for b in blocks]
    ws.origin = {(b.kind, b.name): b.source for b in blocks}
    return ws


def loads(text: str, source: str = "<string>") -> Workspace:
    return load_texts([(source, text)])


def load_files(paths) -> Workspace:
    texts = []
    for p in paths:
        try:
            texts.append((str(p), Path(p).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ParseError(str(p), 0, f"cannot read file: {exc.strerror}") from None
    return load_texts(texts)


# -- writers -------------------------------------------------------------------------


def _tok(x) -> str:
    s = str(x)
    if not isinstance(x, str) or not s or any(c.isspace() for c in s) or "#" in s:
        raise ValueError(f"identifier {x!r} cannot be written to a text file")
    return s


def dump_category(C: FiniteCategory, name: str | None = None) -> str:
    lines = [f"category {_tok(name or C.name)}"]
    lines += [f"object {_tok(o)}" for o in C.objects]
    lines += [f"mor {_tok(m)} : {_tok(C.dom[m])} -> {_tok(C.cod[m])}" for m in C.morphisms]
    lines += [f"id {_tok(o)} = {_tok(C.identity[o])}" for o in C.objects]
    idx = C.mor_index
    for (g, f), h in sorted(C.comp_table.items(), key=lambda kv: (idx(kv[0][0]), idx(kv[0][1]))):
        lines.append(f"comp {_tok(g)} . {_tok(f)} = {_tok(h)}")
    return "\n".join(lines) + "\n"


def dump_relation(R: PreCoverRelation, name: str | None = None, category_name: str | None = None) -> str:
    lines = [f"relation {_tok(name or R.name)} on {_tok(category_name or R.category.name)}"]
    lines += [f"pair {_tok(f)} < {_tok(g)}" for f, g in R.sorted_pairs()]
    return "\n".join(lines) + "\n"


def dump_group(G: FiniteGroup, name: str | None = None) -> str:
    lines = [f"group {_tok(name or G.name)} order {G.order}"]
    lines += [f"elem {k} {_tok(G.labels[k])}" for k in G.elements]
    lines += [f"row {k} : " + " ".join(str(x) for x in G.table[k]) for k in G.elements]
    return "\n".join(lines) + "\n"


def dump_hom(h: GroupHom, name: str | None = None) -> str:
    lines = [f"hom {_tok(name or h.name)} : {_tok(h.source.name)} -> {_tok(h.target.name)}"]
    lines += [f"map {x} -> {y}" for x, y in enumerate(h.map)]
    return "\n".join(lines) + "\n"


def dump_functor(F: Functor, name: str | None = None) -> str:
    lines = [f"functor {_tok(name or F.name)} : {_tok(F.source.name)} -> {_tok(F.target.name)}"]
    lines += [f"obj {_tok(x)} |-> {_tok(F.obj_map[x])}" for x in F.source.objects]
    lines += [f"mor {_tok(m)} |-> {_tok(F.mor_map[m])}" for m in F.source.morphisms]
    return "\n".join(lines) + "\n"


def dump_nat(alpha: NatTrans, name: str | None = None, source_name: str | None = None, target_name: str | None = None) -> str:
    lines = [f"nat {_tok(name or alpha.name)} : {_tok(source_name or alpha.source.name)} -> {_tok(target_name or alpha.target.name)}"]
    lines += [f"at {_tok(x)} : {_tok(alpha[x])}" for x in alpha.source.source.objects]
    return "\n".join(lines) + "\n"


def dump_group_diagram(D: GroupDiagram, name: str | None = None) -> str:
    """The diagram block plus ``hom`` blocks for its non-identity morphisms.

    Group blocks are not included; hom names are ``<diagram>_<morphism>``.
    """
    name = name or D.name
    I = D.index
    parts = []
    lines = [f"functor {_tok(name)} : {_tok(I.name)} -> {GROUP_TARGET}"]
    lines += [f"obj {_tok(x)} |-> {_tok(D.groups[x].name)}" for x in I.objects]
    for m in I.morphisms:
        if I.is_identity(m):
            continue
        hname = f"{name}_{m}"
        parts.append(dump_hom(D.homs[m], hname))
        lines.append(f"mor {_tok(m)} |-> {_tok(hname)}")
    return "".join(parts) + "\n".join(lines) + "\n"


def dump_diagram_hom(alpha: DiagramHom, name: str | None = None, source_name: str | None = None, target_name: str | None = None) -> str:
    name = name or alpha.name
    I = alpha.source.index
    parts = []
    lines = [f"nat {_tok(name)} : {_tok(source_name or alpha.source.name)} -> {_tok(target_name or alpha.target.name)}"]
    for x in I.objects:
        hname = f"{name}_{x}"
        parts.append(dump_hom(alpha[x], hname))
        lines.append(f"at {_tok(x)} : {_tok(hname)}")
    return "".join(parts) + "\n".join(lines) + "\n"
