"""Line-oriented text documents for categories, functors and fibrations.

A document is a sequence of named blocks::

    category 2
      object ⊥
      object ⊤
      arrow id⊥ : ⊥ -> ⊥
      ...
      identity ⊥ = id⊥
      comp ⊥≤⊤ id⊥ = ⊥≤⊤
    end

Names are bare tokens or JSON string literals; ``#`` starts a comment.
Composition tables are explicit: every composable pair needs a ``comp`` line.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .category import FinCat, RawCategory, validate_category
from .closure import InternalCat, fundamental_fibration, glueing
from .errors import (
    AssociativityViolation,
    CategoryValidationError,
    CompositeTypeMismatch,
    DocumentValidationError,
    FibcatError,
    FormatSyntaxError,
    MissingComposite,
    NonComposablePairInTable,
    UnitViolation,
    UnresolvedReference,
)
from .fibration import FibrationData
from .functor import AdjunctionData, FunctorData, NatTransData, adjunction_violations, validate_mapping
from .indexed import IndexedCat

KINDS = ("category", "functor", "nattrans", "fibration", "indexed", "internal", "adjunction", "distributor")

_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|#.*|[^\s"#]+')
_BARE = re.compile(r'[^\s"#]+')
# characters str.splitlines breaks on that json.dumps leaves raw
_LINE_BREAKS = re.compile("[\x0b\x0c\x1c-\x1e\x85\u2028\u2029]")


# ---------------------------------------------------------------- tokens


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int
    quoted: bool = False


def tokenize(line: str, lineno: int) -> list[Token]:
    out = []
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(line, pos)
        if m is None:
            raise FormatSyntaxError("unterminated string literal", lineno, pos + 1)
        text = m.group(0)
        if text.startswith("#"):
            break
        if text.startswith('"'):
            try:
                out.append(Token(json.loads(text), lineno, pos + 1, True))
            except json.JSONDecodeError as exc:
                raise FormatSyntaxError(f"bad string literal: {exc.msg}", lineno, pos + 1) from None
        else:
            out.append(Token(text, lineno, pos + 1))
        pos = m.end()
    return out


def quote(name: str) -> str:
    """A name as a token: bare when possible, else a JSON string."""
    if name and _BARE.fullmatch(name) and name not in ("=", ":", "->", "=>", "end"):
        return name
    return _LINE_BREAKS.sub(lambda m: f"\\u{ord(m.group()):04x}", json.dumps(name, ensure_ascii=False))


# ---------------------------------------------------------------- documents


@dataclass
class Block:
    """A named value with the names of the blocks it refers to."""

    kind: str
    name: str
    value: Any
    refs: dict[str, Any] = field(default_factory=dict)
    line: int = 0


@dataclass
class Document:
    """Blocks in declaration order; ``includes`` are other files whose blocks are in scope."""

    blocks: dict[str, Block] = field(default_factory=dict)
    includes: list[str] = field(default_factory=list)
    scope: dict[str, Block] = field(default_factory=dict)

    def add(self, block: Block) -> Block:
        if block.name in self.scope:
            raise FormatSyntaxError(f"duplicate block name {block.name!r}", block.line)
        self.blocks[block.name] = block
        self.scope[block.name] = block
        return block

    def get(self, name: str, kind: str | None = None, line: int | None = None) -> Block:
        b = self.scope.get(name)
        if b is None or (kind is not None and b.kind != kind):
            raise UnresolvedReference(name if kind is None else f"{kind} {name}", line)
        return b

    def value(self, name: str) -> Any:
        return self.scope[name].value

    def of_kind(self, kind: str) -> list[Block]:
        return [b for b in self.blocks.values() if b.kind == kind]

    # convenience builders used by the corpus and by constructions

    def name_of(self, value: Any) -> str | None:
        for b in self.scope.values():
            if b.value is value:
                return b.name
        if isinstance(value, FinCat):
            for b in self.scope.values():
                if b.kind == "category" and b.value == value and b.value.same_labels(value):
                    return b.name
        return None

    def category(self, name: str, C: FinCat) -> str:
        found = self.name_of(C)
        if found is not None:
            return found
        self.add(Block("category", name, C))
        return name

    def functor(self, name: str, F: FunctorData, source: str | None = None, target: str | None = None) -> str:
        found = self.name_of(F)
        if found is not None:
            return found
        s = self.category(source or f"{name}.source", F.source)
        t = self.category(target or f"{name}.target", F.target)
        self.add(Block("functor", name, F, {"source": s, "target": t}))
        return name

    def fibration(self, name: str, P: FibrationData, total: str | None = None, base: str | None = None) -> str:
        proj = self.functor(f"{name}.proj", P.proj, total or f"{name}.total", base or f"{name}.base")
        refs = {"projection": proj}
        kind = P.provenance.get("construction")
        if kind == "glueing":
            refs["construction"] = kind
            refs["argument"] = self.functor(f"{name}.glued", P.glued, self.name_of(P.base))
        elif kind == "fundamental":
            refs["construction"] = kind
            refs["argument"] = self.name_of(P.base)
        self.add(Block("fibration", name, P, refs))
        return name

    def indexed(self, name: str, H: IndexedCat, base: str | None = None) -> str:
        b = self.category(base or f"{name}.base", H.base)
        fibres = [self.category(f"{name}.fibre.{H.base.obj_labels[I]}", C) for I, C in enumerate(H.fibres)]
        reindex = []
        for u, F in enumerate(H.reindex):
            reindex.append(
                self.functor(
                    f"{name}.reindex.{H.base.arr_labels[u]}", F, fibres[H.base.cod[u]], fibres[H.base.dom[u]]
                )
            )
        self.add(Block("indexed", name, H, {"base": b, "fibres": fibres, "reindex": reindex}))
        return name

    def adjunction(self, name: str, adj: AdjunctionData, source: str | None = None, target: str | None = None) -> str:
        s = self.category(source or f"{name}.source", adj.left.source)
        t = self.category(target or f"{name}.target", adj.left.target)
        left = self.functor(f"{name}.left", adj.left, s, t)
        right = self.functor(f"{name}.right", adj.right, t, s)
        self.add(Block("adjunction", name, adj, {"left": left, "right": right}))
        return name


# ---------------------------------------------------------------- parsing


class _Lines:
    def __init__(self, text: str):
        self.rows = []
        for i, raw in enumerate(text.splitlines(), start=1):
            toks = tokenize(raw, i)
            if toks:
                self.rows.append(toks)
        self.pos = 0

    def next(self) -> list[Token] | None:
        if self.pos >= len(self.rows):
            return None
        row = self.rows[self.pos]
        self.pos += 1
        return row


def _expect(toks: list[Token], shape: str) -> list[Token]:
    """Match ``toks`` against a shape such as ``'arrow N : N -> N'``; ``N`` is any name,
    ``*`` any number of trailing names."""
    words = shape.split()
    out = []
    i = 0
    for w in words:
        if w == "*":
            out += toks[i:]
            i = len(toks)
            break
        if i >= len(toks):
            last = toks[-1]
            raise FormatSyntaxError(f"expected {shape!r}", last.line, last.col + len(last.text))
        t = toks[i]
        if w == "N":
            out.append(t)
        elif t.quoted or t.text != w:
            raise FormatSyntaxError(f"expected {w!r} in {shape!r}, found {t.text!r}", t.line, t.col)
        i += 1
    if i < len(toks):
        t = toks[i]
        raise FormatSyntaxError(f"unexpected token {t.text!r}", t.line, t.col)
    return out


def _index(names: list[str], what: str, tok: Token, block: str) -> int:
    try:
        return names.index(tok.text)
    except ValueError:
        raise DocumentValidationError(block, tok.line, FibcatError(f"unknown {what} {tok.text!r}")) from None


def parse(text: str, base_dir: str | Path | None = None, _seen: frozenset = frozenset()) -> Document:
    """Parse and validate a document; ``include`` paths resolve against ``base_dir``."""
    doc = Document()
    lines = _Lines(text)
    while (row := lines.next()) is not None:
        head = row[0]
        if head.text == "include" and not head.quoted:
            (path_tok,) = _expect(row, "include N")
            path = Path(base_dir or ".") / path_tok.text
            if str(path.resolve()) in _seen:
                raise FormatSyntaxError(f"include cycle through {path_tok.text!r}", path_tok.line, path_tok.col)
            try:
                inner = parse(path.read_text(encoding="utf-8"), path.parent, _seen | {str(path.resolve())})
            except OSError as exc:
                raise UnresolvedReference(path_tok.text, path_tok.line) from exc
            doc.includes.append(path_tok.text)
            for b in inner.scope.values():
                if b.name in doc.scope:
                    raise FormatSyntaxError(f"duplicate block name {b.name!r} from include", path_tok.line)
                doc.scope[b.name] = b
            continue
        if head.quoted or head.text not in KINDS:
            raise FormatSyntaxError(f"expected a block kind, found {head.text!r}", head.line, head.col)
        body = []
        while True:
            nxt = lines.next()
            if nxt is None:
                raise FormatSyntaxError("block starting here is missing 'end'", head.line, head.col)
            if nxt[0].text == "end" and not nxt[0].quoted:
                _expect(nxt, "end")
                break
            body.append(nxt)
        doc.add(_PARSERS[head.text](doc, row, body))
    return doc


def parse_file(path: str | Path) -> Document:
    p = Path(path)
    return parse(p.read_text(encoding="utf-8"), p.parent, frozenset({str(p.resolve())}))


def _parse_category(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    (name,) = _expect(header, "category N")
    bname = name.text
    objects: list[str] = []
    arrows: list[tuple[str, Token, Token]] = []
    identity: dict[int, tuple[int, int]] = {}
    comp_rows: list[tuple[Token, Token, Token]] = []
    for row in body:
        key = row[0].text
        if key == "object":
            (o,) = _expect(row, "object N")
            if o.text in objects:
                raise DocumentValidationError(bname, o.line, FibcatError(f"duplicate object {o.text!r}"))
            objects.append(o.text)
        elif key == "arrow":
            a, d, c = _expect(row, "arrow N : N -> N")
            if any(a.text == x[0] for x in arrows):
                raise DocumentValidationError(bname, a.line, FibcatError(f"duplicate arrow {a.text!r}"))
            arrows.append((a.text, d, c))
        elif key == "identity":
            o, a = _expect(row, "identity N = N")
            identity[_index(objects, "object", o, bname)] = (a, o.line)
        elif key == "comp":
            g, f, h = _expect(row, "comp N N = N")
            comp_rows.append((g, f, h))
        else:
            raise FormatSyntaxError(f"unknown category entry {key!r}", row[0].line, row[0].col)
    anames = [a for a, _, _ in arrows]
    raw_arrows = [(i, _index(objects, "object", d, bname), _index(objects, "object", c, bname)) for i, (_, d, c) in enumerate(arrows)]
    ident = {}
    for o in range(len(objects)):
        if o not in identity:
            raise DocumentValidationError(bname, name.line, FibcatError(f"no identity for object {objects[o]!r}"))
        tok, _ = identity[o]
        ident[o] = _index(anames, "arrow", tok, bname)
    comp: dict[tuple[int, int], int] = {}
    lines: dict[tuple[int, int], int] = {}
    for g, f, h in comp_rows:
        key = (_index(anames, "arrow", g, bname), _index(anames, "arrow", f, bname))
        if key in comp:
            raise DocumentValidationError(bname, g.line, FibcatError(f"duplicate comp entry for ({g.text}, {f.text})"))
        comp[key] = _index(anames, "arrow", h, bname)
        lines[key] = g.line
    raw = RawCategory(
        list(range(len(objects))),
        raw_arrows,
        ident,
        comp,
        dict(enumerate(objects)),
        dict(enumerate(anames)),
    )
    try:
        C = validate_category(raw)
    except CategoryValidationError as exc:
        raise DocumentValidationError(bname, _locate(exc, raw, lines, name.line, anames), exc) from None
    return Block("category", bname, C, {}, name.line)


def _locate(exc: CategoryValidationError, raw: RawCategory, lines: dict, default: int, names: list[str]) -> int:
    """The ``comp`` line most often involved in the violations, as the likely culprit."""
    votes: Counter = Counter()
    for v in exc.violations:
        involved: list[tuple[int, int]] = []
        if isinstance(v, AssociativityViolation):
            h, g, f = v.h, v.g, v.f
            gf, hg = raw.comp.get((g, f)), raw.comp.get((h, g))
            involved = [(g, f), (h, g)]
            if gf is not None:
                involved.append((h, gf))
            if hg is not None:
                involved.append((hg, f))
        elif isinstance(v, UnitViolation):
            f = v.f
            involved = [k for k in raw.comp if f in k and (raw.identity.get(raw.arrows[k[0]][1]) == k[0] or raw.identity.get(raw.arrows[k[1]][2]) == k[1])]
        elif isinstance(v, (NonComposablePairInTable, CompositeTypeMismatch)):
            involved = [(v.g, v.f)]
        elif isinstance(v, MissingComposite):
            continue
        for k in involved:
            if k in lines:
                votes[k] += 1
    if not votes:
        return default
    return lines[votes.most_common(1)[0][0]]


def _category_ref(doc: Document, tok: Token) -> tuple[str, FinCat]:
    return tok.text, doc.get(tok.text, "category", tok.line).value


def _parse_functor(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    name, s, t = _expect(header, "functor N : N -> N")
    sname, S = _category_ref(doc, s)
    tname, T = _category_ref(doc, t)
    obj = [None] * S.n_obj
    arr = [None] * S.n_arr
    for row in body:
        key = row[0].text
        if key == "object":
            x, y = _expect(row, "object N = N")
            obj[_index(_names(S.obj_labels), "object", x, name.text)] = _index(_names(T.obj_labels), "object", y, name.text)
        elif key == "arrow":
            f, g = _expect(row, "arrow N = N")
            arr[_index(_names(S.arr_labels), "arrow", f, name.text)] = _index(_names(T.arr_labels), "arrow", g, name.text)
        else:
            raise FormatSyntaxError(f"unknown functor entry {key!r}", row[0].line, row[0].col)
    _require_total(name, obj, S.obj_labels, "object")
    _require_total(name, arr, S.arr_labels, "arrow")
    F = FunctorData(S, T, obj, arr)
    problems = validate_mapping(F)
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError("; ".join(p.describe() for p in problems[:3])))
    return Block("functor", name.text, F, {"source": sname, "target": tname}, name.line)


def _require_total(name: Token, values: list, labels, what: str) -> None:
    for i, v in enumerate(values):
        if v is None:
            raise DocumentValidationError(name.text, name.line, FibcatError(f"no image for {what} {labels[i]!r}"))


def _parse_nattrans(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    name, f, g = _expect(header, "nattrans N : N => N")
    F = doc.get(f.text, "functor", f.line).value
    G = doc.get(g.text, "functor", g.line).value
    comps = [None] * F.source.n_obj
    for row in body:
        x, a = _expect(row, "component N = N")
        comps[_index(list(F.source.obj_labels), "object", x, name.text)] = _index(list(F.target.arr_labels), "arrow", a, name.text)
    _require_total(name, comps, F.source.obj_labels, "component")
    tau = NatTransData(F, G, comps)
    problems = validate_mapping(tau)
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError("; ".join(p.describe() for p in problems[:3])))
    return Block("nattrans", name.text, tau, {"source": f.text, "target": g.text}, name.line)


def _parse_fibration(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    (name,) = _expect(header, "fibration N")
    refs: dict[str, str] = {}
    for row in body:
        key = row[0].text
        if key == "projection" and key not in refs:
            (f,) = _expect(row, "projection N")
            doc.get(f.text, "functor", f.line)
            refs["projection"] = f.text
        elif key == "construction" and key not in refs:
            kind, arg = _expect(row, "construction N N")
            if kind.text not in _CONSTRUCTIONS:
                raise FormatSyntaxError(f"unknown construction {kind.text!r}", kind.line, kind.col)
            doc.get(arg.text, _CONSTRUCTIONS[kind.text][0], arg.line)
            refs["construction"] = kind.text
            refs["argument"] = arg.text
        else:
            raise FormatSyntaxError(f"unexpected fibration entry {key!r}", row[0].line, row[0].col)
    if "projection" not in refs:
        raise FormatSyntaxError("a fibration block needs a 'projection' line", name.line, name.col)
    proj = doc.value(refs["projection"])
    P = FibrationData(proj, name.text, provenance={"construction": "input"})
    if "construction" in refs:
        # rebuild so the construction's keys travel with the value; the tables must match exactly
        built = _CONSTRUCTIONS[refs["construction"]][1](doc.value(refs["argument"]))
        if built.proj != proj or not built.total.same_labels(proj.source):
            raise DocumentValidationError(
                name.text,
                name.line,
                FibcatError(f"projection is not the {refs['construction']} fibration of {refs['argument']!r}"),
            )
        P = built
    return Block("fibration", name.text, P, refs, name.line)


_CONSTRUCTIONS = {"fundamental": ("category", fundamental_fibration), "glueing": ("functor", glueing)}


def _parse_indexed(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    name, b = _expect(header, "indexed N over N")
    bname, B = _category_ref(doc, b)
    fibres: list[str | None] = [None] * B.n_obj
    reindex: list[str | None] = [None] * B.n_arr
    for row in body:
        key = row[0].text
        if key == "fibre":
            i, c = _expect(row, "fibre N = N")
            doc.get(c.text, "category", c.line)
            fibres[_index(_names(B.obj_labels), "object", i, name.text)] = c.text
        elif key == "reindex":
            u, f = _expect(row, "reindex N = N")
            doc.get(f.text, "functor", f.line)
            reindex[_index(_names(B.arr_labels), "arrow", u, name.text)] = f.text
        else:
            raise FormatSyntaxError(f"unknown indexed entry {key!r}", row[0].line, row[0].col)
    _require_total(name, fibres, B.obj_labels, "fibre")
    _require_total(name, reindex, B.arr_labels, "reindexing")
    H = IndexedCat(B, [doc.value(c) for c in fibres], [doc.value(f) for f in reindex])
    problems = H.violations()
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError("; ".join(p.describe() for p in problems[:3])))
    return Block("indexed", name.text, H, {"base": bname, "fibres": fibres, "reindex": reindex}, name.line)


def _parse_internal(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    name, c = _expect(header, "internal N in N")
    cname, C = _category_ref(doc, c)
    fields: dict[str, int] = {}
    for row in body:
        key = row[0].text
        if key == "objects":
            c0, c1 = _expect(row, "objects N N")
            fields["C0"] = _index(_names(C.obj_labels), "object", c0, name.text)
            fields["C1"] = _index(_names(C.obj_labels), "object", c1, name.text)
        elif key in ("source", "target", "identity", "composition"):
            (a,) = _expect(row, f"{key} N")
            fields[{"source": "d0", "target": "d1", "identity": "i", "composition": "m"}[key]] = _index(
                _names(C.arr_labels), "arrow", a, name.text
            )
        else:
            raise FormatSyntaxError(f"unknown internal entry {key!r}", row[0].line, row[0].col)
    missing = [k for k in ("C0", "C1", "d0", "d1", "i", "m") if k not in fields]
    if missing:
        raise DocumentValidationError(name.text, name.line, FibcatError(f"missing entries {missing}"))
    ic = InternalCat(C, **fields)
    problems = ic.violations()
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError("; ".join(map(str, problems[:3]))))
    return Block("internal", name.text, ic, {"ambient": cname}, name.line)


def _parse_adjunction(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    (name,) = _expect(header, "adjunction N")
    refs: dict[str, str] = {}
    unit: dict[int, int] = {}
    counit: dict[int, int] = {}
    rows_unit, rows_counit = [], []
    for row in body:
        key = row[0].text
        if key in ("left", "right"):
            (f,) = _expect(row, f"{key} N")
            doc.get(f.text, "functor", f.line)
            refs[key] = f.text
        elif key == "unit":
            rows_unit.append(_expect(row, "unit N = N"))
        elif key == "counit":
            rows_counit.append(_expect(row, "counit N = N"))
        else:
            raise FormatSyntaxError(f"unknown adjunction entry {key!r}", row[0].line, row[0].col)
    if set(refs) != {"left", "right"}:
        raise DocumentValidationError(name.text, name.line, FibcatError("needs 'left' and 'right'"))
    L, R = doc.value(refs["left"]), doc.value(refs["right"])
    C, D = L.source, L.target
    for x, a in rows_unit:
        unit[_index(_names(C.obj_labels), "object", x, name.text)] = _index(_names(C.arr_labels), "arrow", a, name.text)
    for x, a in rows_counit:
        counit[_index(_names(D.obj_labels), "object", x, name.text)] = _index(_names(D.arr_labels), "arrow", a, name.text)
    if len(unit) != C.n_obj or len(counit) != D.n_obj:
        raise DocumentValidationError(name.text, name.line, FibcatError("unit and counit need a component at every object"))
    from .functor import compose_functors, identity_functor

    adj = AdjunctionData(
        L,
        R,
        NatTransData(identity_functor(C), compose_functors(R, L), [unit[x] for x in C.objects]),
        NatTransData(compose_functors(L, R), identity_functor(D), [counit[y] for y in D.objects]),
    )
    problems = adjunction_violations(adj)
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError("; ".join(p.describe() for p in problems[:3])))
    return Block("adjunction", name.text, adj, refs, name.line)


def _parse_distributor(doc: Document, header: list[Token], body: list[list[Token]]) -> Block:
    from .change_base import DistributorData

    name, a, b = _expect(header, "distributor N : N -> N")
    aname, A = _category_ref(doc, a)
    bname, B = _category_ref(doc, b)
    sizes, restrict, extend = {}, {}, {}

    def ints(toks: list[Token]) -> tuple[int, ...]:
        try:
            return tuple(int(t.text) for t in toks)
        except ValueError:
            bad = next(t for t in toks if not t.text.lstrip("-").isdigit())
            raise FormatSyntaxError(f"expected an element number, found {bad.text!r}", bad.line, bad.col) from None

    for row in body:
        key = row[0].text
        if key == "size":
            y, x, n = _expect(row, "size N N = N")
            sizes[(_index(_names(B.obj_labels), "object", y, name.text), _index(_names(A.obj_labels), "object", x, name.text))] = ints([n])[0]
        elif key == "restrict":
            v, x, *rest = _expect(row, "restrict N N = *")
            restrict[(_index(_names(B.arr_labels), "arrow", v, name.text), _index(_names(A.obj_labels), "object", x, name.text))] = ints(rest)
        elif key == "extend":
            u, y, *rest = _expect(row, "extend N N = *")
            extend[(_index(_names(A.arr_labels), "arrow", u, name.text), _index(_names(B.obj_labels), "object", y, name.text))] = ints(rest)
        else:
            raise FormatSyntaxError(f"unknown distributor entry {key!r}", row[0].line, row[0].col)
    phi = DistributorData(A, B, sizes, restrict, extend)
    try:
        problems = phi.violations()
    except (KeyError, IndexError) as exc:
        raise DocumentValidationError(name.text, name.line, FibcatError(f"incomplete table: {exc!r}")) from None
    if problems:
        raise DocumentValidationError(name.text, name.line, FibcatError(f"{problems[:3]}"))
    return Block("distributor", name.text, phi, {"source": aname, "target": bname}, name.line)


_PARSERS = {
    "category": _parse_category,
    "functor": _parse_functor,
    "nattrans": _parse_nattrans,
    "fibration": _parse_fibration,
    "indexed": _parse_indexed,
    "internal": _parse_internal,
    "adjunction": _parse_adjunction,
    "distributor": _parse_distributor,
}


# ---------------------------------------------------------------- printing


def _names(labels: tuple[str, ...]) -> list[str]:
    """Labels made unique by suffixing the id where they clash."""
    seen = Counter(labels)
    return [lab if seen[lab] == 1 and lab else f"{lab}@{i}" for i, lab in enumerate(labels)]


def print_document(doc: Document) -> str:
    out = [f"include {quote(p)}" for p in doc.includes]
    if out:
        out.append("")
    for b in doc.blocks.values():
        out += _PRINTERS[b.kind](doc, b)
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


def _print_category(doc: Document, b: Block) -> list[str]:
    C: FinCat = b.value
    on, an = _names(C.obj_labels), _names(C.arr_labels)
    q = quote
    lines = [f"category {q(b.name)}"]
    lines += [f"  object {q(on[x])}" for x in C.objects]
    lines += [f"  arrow {q(an[f])} : {q(on[C.dom[f]])} -> {q(on[C.cod[f]])}" for f in C.arrows]
    lines += [f"  identity {q(on[x])} = {q(an[C.identity[x]])}" for x in C.objects]
    for g in C.arrows:
        for f in C.incoming[C.dom[g]]:
            lines.append(f"  comp {q(an[g])} {q(an[f])} = {q(an[C.comp(g, f)])}")
    lines.append("end")
    return lines


def _print_functor(doc: Document, b: Block) -> list[str]:
    F: FunctorData = b.value
    S, T = F.source, F.target
    so, sa, to, ta = _names(S.obj_labels), _names(S.arr_labels), _names(T.obj_labels), _names(T.arr_labels)
    q = quote
    lines = [f"functor {q(b.name)} : {q(b.refs['source'])} -> {q(b.refs['target'])}"]
    lines += [f"  object {q(so[x])} = {q(to[F.ob(x)])}" for x in S.objects]
    lines += [f"  arrow {q(sa[f])} = {q(ta[F(f)])}" for f in S.arrows]
    lines.append("end")
    return lines


def _print_nattrans(doc: Document, b: Block) -> list[str]:
    tau: NatTransData = b.value
    S, T = tau.source_functor.source, tau.source_functor.target
    so, ta = _names(S.obj_labels), _names(T.arr_labels)
    lines = [f"nattrans {quote(b.name)} : {quote(b.refs['source'])} => {quote(b.refs['target'])}"]
    lines += [f"  component {quote(so[x])} = {quote(ta[tau[x]])}" for x in S.objects]
    lines.append("end")
    return lines


def _print_fibration(doc: Document, b: Block) -> list[str]:
    lines = [f"fibration {quote(b.name)}", f"  projection {quote(b.refs['projection'])}"]
    if "construction" in b.refs:
        lines.append(f"  construction {b.refs['construction']} {quote(b.refs['argument'])}")
    lines.append("end")
    return lines


def _print_indexed(doc: Document, b: Block) -> list[str]:
    H: IndexedCat = b.value
    B = H.base
    on, an = _names(B.obj_labels), _names(B.arr_labels)
    lines = [f"indexed {quote(b.name)} over {quote(b.refs['base'])}"]
    lines += [f"  fibre {quote(on[I])} = {quote(b.refs['fibres'][I])}" for I in B.objects]
    lines += [f"  reindex {quote(an[u])} = {quote(b.refs['reindex'][u])}" for u in B.arrows]
    lines.append("end")
    return lines


def _print_internal(doc: Document, b: Block) -> list[str]:
    ic: InternalCat = b.value
    C = ic.ambient
    on, an = _names(C.obj_labels), _names(C.arr_labels)
    return [
        f"internal {quote(b.name)} in {quote(b.refs['ambient'])}",
        f"  objects {quote(on[ic.C0])} {quote(on[ic.C1])}",
        f"  source {quote(an[ic.d0])}",
        f"  target {quote(an[ic.d1])}",
        f"  identity {quote(an[ic.i])}",
        f"  composition {quote(an[ic.m])}",
        "end",
    ]


def _print_adjunction(doc: Document, b: Block) -> list[str]:
    adj: AdjunctionData = b.value
    C, D = adj.left.source, adj.left.target
    co, ca, do, da = _names(C.obj_labels), _names(C.arr_labels), _names(D.obj_labels), _names(D.arr_labels)
    lines = [f"adjunction {quote(b.name)}", f"  left {quote(b.refs['left'])}", f"  right {quote(b.refs['right'])}"]
    lines += [f"  unit {quote(co[x])} = {quote(ca[adj.unit[x]])}" for x in C.objects]
    lines += [f"  counit {quote(do[y])} = {quote(da[adj.counit[y]])}" for y in D.objects]
    lines.append("end")
    return lines


def _print_distributor(doc: Document, b: Block) -> list[str]:
    phi = b.value
    A, B = phi.source, phi.target
    ao, aa, bo, ba = _names(A.obj_labels), _names(A.arr_labels), _names(B.obj_labels), _names(B.arr_labels)
    lines = [f"distributor {quote(b.name)} : {quote(b.refs['source'])} -> {quote(b.refs['target'])}"]
    for y in B.objects:
        for x in A.objects:
            lines.append(f"  size {quote(bo[y])} {quote(ao[x])} = {phi.sizes[(y, x)]}")
    for v in B.arrows:
        for x in A.objects:
            lines.append(" ".join([f"  restrict {quote(ba[v])} {quote(ao[x])} =", *map(str, phi.restrict[(v, x)])]).rstrip())
    for u in A.arrows:
        for y in B.objects:
            lines.append(" ".join([f"  extend {quote(aa[u])} {quote(bo[y])} =", *map(str, phi.extend[(u, y)])]).rstrip())
    lines.append("end")
    return lines


_PRINTERS = {
    "category": _print_category,
    "functor": _print_functor,
    "nattrans": _print_nattrans,
    "fibration": _print_fibration,
    "indexed": _print_indexed,
    "internal": _print_internal,
    "adjunction": _print_adjunction,
    "distributor": _print_distributor,
}


# ---------------------------------------------------------------- comparison


def block_structure(b: Block) -> tuple:
    """Everything a block means, independent of labels and object identity."""
    v = b.value
    if b.kind == "category":
        return (b.kind, v.structure())
    if b.kind == "functor":
        return (b.kind, b.refs["source"], b.refs["target"], v.obj_map, v.arr_map)
    if b.kind == "nattrans":
        return (b.kind, b.refs["source"], b.refs["target"], v.components)
    if b.kind == "fibration":
        return (b.kind, b.refs["projection"], b.refs.get("construction"), b.refs.get("argument"))
    if b.kind == "indexed":
        return (b.kind, b.refs["base"], tuple(b.refs["fibres"]), tuple(b.refs["reindex"]))
    if b.kind == "internal":
        return (b.kind, b.refs["ambient"], v.C0, v.C1, v.d0, v.d1, v.i, v.m)
    if b.kind == "adjunction":
        return (b.kind, b.refs["left"], b.refs["right"], v.unit.components, v.counit.components)
    if b.kind == "distributor":
        return (
            b.kind,
            b.refs["source"],
            b.refs["target"],
            tuple(sorted(v.sizes.items())),
            tuple(sorted(v.restrict.items())),
            tuple(sorted(v.extend.items())),
        )
    raise ValueError(b.kind)


def same_document(a: Document, b: Document) -> bool:
    return (
        a.includes == b.includes
        and list(a.blocks) == list(b.blocks)
        and all(block_structure(a.blocks[k]) == block_structure(b.blocks[k]) for k in a.blocks)
    )
