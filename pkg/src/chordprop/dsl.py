"""Text format (``.sd``) for fat graphs, chord diagrams and graded algebras.

Grammar (EBNF; whitespace is free, ``#`` starts a comment, commas between
list items are optional)::

    value    = fatgraph | diagram | algebra
    fatgraph = "fatgraph" "{" "pairs" ":" pair* ";" "vertices" ":" cycle* [";"] "}"
    pair     = "(" int "," int ")"
    cycle    = "(" int ("," int)* ")"
    diagram  = "diagram" "{" "graph" ":" fatgraph [";"]
                             ["ghost" ":" int* ";"]
                             "lengths" ":" (int "=" rat)* ";"
                             ["in" ":" cycle* ";"]
                             "roles" ":" (int "=" role)* ";"
                             ["marks" ":" (int "=" rat)* [";"]] "}"
    role     = ("in" | "out") ":" int
    algebra  = "algebra" "{" "basis" ":" (name ":" sint)* ";"
                             "unit" ":" name ";"
                             ["mul" ":" ("(" name "," name ")" "->" sum)* ";"]
                             ["delta" ":" (name "->" sum)* [";"]] "}"
    sum      = "0" | term (("+" | "-") term)*
    term     = ["-"] [rat "*"] name
    rat      = sint ["/" int]
    sint     = ["-"] int

Sections of a block may appear in any order.  Half-edges in a diagram refer
to the labels of its ``graph`` block; edges are named by either half-edge
and boundary cycles by any of their half-edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .bv import AlgebraSpec, GradedBasisAlgebra, load_algebra
from .diagram import ChordDiagram, make_diagram
from .errors import ChordpropError, DslSyntaxError, Span, UnknownEdge
from .fatgraph import FatGraph, _build, boundary_cycles

Value = Union[FatGraph, ChordDiagram, GradedBasisAlgebra]

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}();:,=/*+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str      # "int", "name", "punct" (arrow is punct "->"), "eof"
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", span=Span(line, col))
        kind, chunk = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token("punct" if kind == "arrow" else kind, chunk, Span(line, col)))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, col)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -----------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> DslSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return DslSyntaxError(f"{message}, found {found}", span=tok.span)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "name") and self.tok.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            raise self.error(f"expected {text!r}")
        return tok

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error("expected a name")
        tok = self.tok
        self.i += 1
        return tok

    def natural(self) -> tuple[int, Span]:
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        tok = self.tok
        self.i += 1
        return int(tok.text), tok.span

    def signed(self) -> tuple[int, Span]:
        span = self.tok.span
        neg = self.accept("-") is not None
        value, _ = self.natural()
        return (-value if neg else value), span

    def rational(self) -> tuple[Fraction, Span]:
        num, span = self.signed()
        if self.accept("/"):
            den, den_span = self.natural()
            if den == 0:
                raise DslSyntaxError("zero denominator", span=den_span)
            return Fraction(num, den), span
        return Fraction(num), span

    def comma(self) -> None:
        self.accept(",")

    def end_section(self) -> None:
        if not self.accept(";") and not self.at("}"):
            raise self.error("expected ';'")

    def int_tuple(self) -> tuple[tuple[int, ...], Span, list[Span]]:
        open_tok = self.expect("(")
        items, spans = [], []
        while not self.at(")"):
            value, span = self.natural()
            items.append(value)
            spans.append(span)
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return tuple(items), open_tok.span, spans

    def sections(self, allowed: dict, required: set[str], spans: dict | None = None) -> dict:
        """Parse ``key: ...`` sections in any order until ``}``.

        With ``spans``, the position of each section keyword is stored under
        ``spans[key][None]``.
        """
        seen: dict = {}
        while not self.at("}"):
            key_tok = self.name()
            if key_tok.text not in allowed:
                raise DslSyntaxError(f"unknown section {key_tok.text!r}", span=key_tok.span)
            if key_tok.text in seen:
                raise DslSyntaxError(f"section {key_tok.text!r} given twice", span=key_tok.span)
            if spans is not None:
                spans.setdefault(key_tok.text, {})[None] = key_tok.span
            self.expect(":")
            seen[key_tok.text] = allowed[key_tok.text]()
            self.comma()
        for key in sorted(required - set(seen)):
            raise self.error(f"missing section {key!r}")
        return seen

    # -- values ------------------------------------------------------------------

    def value(self) -> Value:
        tok = self.tok
        if tok.kind == "name" and tok.text == "fatgraph":
            out = self.fatgraph()[0]
        elif tok.kind == "name" and tok.text == "diagram":
            out = self.diagram()
        elif tok.kind == "name" and tok.text == "algebra":
            out = self.algebra()
        else:
            raise self.error("expected 'fatgraph', 'diagram' or 'algebra'")
        if self.tok.kind != "eof":
            raise self.error("expected end of input")
        return out

    def fatgraph(self) -> tuple[FatGraph, dict[int, int], dict]:
        head = self.expect("fatgraph")
        self.expect("{")
        spans: dict = {"pairing": {}, "vertices": {}}

        def pairs():
            out = []
            while self.at("("):
                items, open_span, _ = self.int_tuple()
                if len(items) != 2:
                    raise DslSyntaxError(f"a pair needs 2 half-edges, got {len(items)}", span=open_span)
                for h in items:
                    spans["pairing"].setdefault(h, open_span)
                out.append(items)
                self.comma()
            self.end_section()
            return out

        def vertices():
            out = []
            while self.at("("):
                items, open_span, item_spans = self.int_tuple()
                for h, s in zip(items, item_spans):
                    spans["vertices"].setdefault(h, s)
                if not items:
                    spans["vertices"].setdefault(None, open_span)
                out.append(items)
                self.comma()
            self.end_section()
            return out

        body = self.sections({"pairs": pairs, "vertices": vertices}, {"pairs", "vertices"})
        self.expect("}")
        try:
            graph, relabel = _build(body["pairs"], body["vertices"])
        except ChordpropError as exc:
            raise exc.with_span(_span_for(exc, spans, head.span)) from None
        return graph, relabel, spans

    def diagram(self) -> ChordDiagram:
        head = self.expect("diagram")
        self.expect("{")
        spans: dict = {}

        def graph_section():
            g = self.fatgraph()
            self.accept(";")
            return g

        def int_list(section):
            def parse():
                out = []
                while self.tok.kind == "int":
                    value, span = self.natural()
                    spans.setdefault(section, {}).setdefault(value, span)
                    out.append(value)
                    self.comma()
                self.end_section()
                return out
            return parse

        def assignments(section, parse_value):
            def parse():
                out = []
                while self.tok.kind == "int":
                    key, span = self.natural()
                    self.expect("=")
                    spans.setdefault(section, {}).setdefault(key, span)
                    out.append((key, parse_value(), span))
                    self.comma()
                self.end_section()
                return out
            return parse

        def circles():
            out = []
            while self.at("("):
                items, open_span, _ = self.int_tuple()
                for h in items:
                    spans.setdefault("in", {}).setdefault(h, open_span)
                out.append((items, open_span))
                self.comma()
            self.end_section()
            return out

        def role():
            kind = self.name()
            if kind.text not in ("in", "out"):
                raise DslSyntaxError(f"role must be 'in' or 'out', got {kind.text!r}", span=kind.span)
            self.expect(":")
            return kind.text, self.natural()[0]

        body = self.sections(
            {
                "graph": graph_section,
                "ghost": int_list("ghost"),
                "lengths": assignments("lengths", lambda: self.rational()[0]),
                "in": circles,
                "roles": assignments("roles", role),
                "marks": assignments("marks", lambda: self.rational()[0]),
            },
            {"graph", "lengths", "roles"},
            spans,
        )
        self.expect("}")
        graph, relabel, graph_spans = body["graph"]

        def local(h, span):
            if h not in relabel:
                raise UnknownEdge(f"half-edge {h} is not in the graph", span=span, half_edge=h)
            return relabel[h]

        ghost = [local(h, spans["ghost"][h]) for h in body.get("ghost", [])]
        lengths = _unique({local(e, s): v for e, v, s in body["lengths"]}, body["lengths"], relabel, "lengths")
        incoming = [tuple(local(h, s) for h in items) for items, s in body.get("in", [])]
        roles = _unique({local(h, s): r for h, r, s in body["roles"]}, body["roles"], relabel, "roles")
        marks = _unique({local(h, s): v for h, v, s in body.get("marks", [])},
                        body.get("marks", []), relabel, "marks")
        try:
            return make_diagram(graph, ghost, lengths, incoming, roles, marks)
        except ChordpropError as exc:
            inverse = {v: k for k, v in relabel.items()}
            all_spans = {**graph_spans, **spans}
            raise exc.with_span(_span_for(exc, all_spans, head.span, inverse)) from None

    def algebra(self) -> GradedBasisAlgebra:
        head = self.expect("algebra")
        self.expect("{")
        name_spans: dict[str, Span] = {}

        def basis():
            out = []
            while self.tok.kind == "name":
                tok = self.name()
                self.expect(":")
                deg, _ = self.signed()
                name_spans.setdefault(tok.text, tok.span)
                out.append((tok.text, deg))
                self.comma()
            self.end_section()
            return out

        def unit():
            tok = self.name()
            name_spans.setdefault(tok.text, tok.span)
            self.end_section()
            return tok.text

        def mul():
            out = {}
            while self.at("("):
                open_tok = self.expect("(")
                i = self.name().text
                self.comma()
                j = self.name().text
                self.expect(")")
                self.expect("->")
                if (i, j) in out:
                    raise DslSyntaxError(f"product ({i},{j}) given twice", span=open_tok.span)
                name_spans.setdefault(f"{i},{j}", open_tok.span)
                out[(i, j)] = self.linear_sum()
                self.comma()
            self.end_section()
            return out

        def delta():
            out = {}
            while self.tok.kind == "name":
                tok = self.name()
                self.expect("->")
                if tok.text in out:
                    raise DslSyntaxError(f"delta({tok.text}) given twice", span=tok.span)
                out[tok.text] = self.linear_sum()
                self.comma()
            self.end_section()
            return out

        body = self.sections({"basis": basis, "unit": unit, "mul": mul, "delta": delta},
                             {"basis", "unit"})
        self.expect("}")
        spec = AlgebraSpec.build(body["basis"], body["unit"], body.get("mul"), body.get("delta"))
        try:
            return load_algebra(spec)
        except ChordpropError as exc:
            span = name_spans.get(exc.details.get("name"), head.span)
            raise exc.with_span(span) from None

    def linear_sum(self) -> dict[str, Fraction]:
        if self.tok.kind == "int" and self.tok.text == "0" and not self._followed_by_term():
            self.i += 1
            return {}
        out: dict[str, Fraction] = {}
        sign = -1 if self.accept("-") else 1
        while True:
            coeff = Fraction(1)
            if self.tok.kind == "int":
                coeff, _ = self.rational()
                self.expect("*")
            tok = self.name()
            out[tok.text] = out.get(tok.text, Fraction(0)) + sign * coeff
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return {k: c for k, c in out.items() if c != 0}

    def _followed_by_term(self) -> bool:
        nxt = self.tokens[self.i + 1]
        return nxt.kind == "punct" and nxt.text in ("*", "/")


def _unique(mapping: dict, raw: list, relabel: dict, section: str) -> dict:
    if len(mapping) != len(raw):
        seen = set()
        for key, _, span in raw:
            if relabel[key] in seen:
                raise DslSyntaxError(f"{section}: half-edge {key} given twice", span=span)
            seen.add(relabel[key])
    return mapping


def _span_for(exc: ChordpropError, spans: dict, fallback: Span, inverse: dict | None = None) -> Span:
    """Locate the source of a construction error from the indices it names."""
    details = exc.details
    for key in ("half_edge", "edge"):
        h = details.get(key)
        if h is None:
            continue
        if inverse is not None:
            h = inverse.get(h, h)
        where = details.get("where")
        sections = [where] if where in spans else []
        order = ("pairing", "vertices", "ghost", "lengths", "in", "roles", "marks")
        if inverse is not None:
            order = order[2:] + order[:2]
        sections += [s for s in order if s in spans and s not in sections]
        for s in sections:
            if h in spans[s]:
                return spans[s][h]
    where = details.get("where")
    if where in spans and None in spans[where]:
        return spans[where][None]
    return fallback


def parse(text: str) -> Value:
    """Parse one value; every error is a ``ChordpropError`` carrying a span."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DslSyntaxError(f"input is not UTF-8: {exc.reason}", span=Span(1, 1)) from None
    return _Parser(text).value()


# -- serialization ------------------------------------------------------------------

def _tuple(items) -> str:
    return "(" + ",".join(str(x) for x in items) + ")"


def _serialize_graph(g: FatGraph) -> str:
    pairs = " ".join(_tuple(p) for p in g.pairs)
    vertices = " ".join(_tuple(v) for v in g.vertices)
    return f"fatgraph {{ pairs: {pairs}; vertices: {vertices} }}"


def _serialize_diagram(d: ChordDiagram) -> str:
    lines = [
        "diagram {",
        f"  graph: {_serialize_graph(d.graph)}",
        "  ghost: " + " ".join(str(e) for e in d.ghost_edges) + ";",
        "  lengths: " + " ".join(f"{e}={v}" for e, v in d.lengths) + ";",
        "  in: " + " ".join(_tuple(c) for c in d.incoming_circles) + ";",
        "  roles: " + " ".join(f"{s}={k}:{i}" for s, k, i in d.roles) + ";",
        "  marks: " + " ".join(f"{s}={v}" for s, v in d.markings if v != 0) + ";",
        "}",
    ]
    return "\n".join(line.replace(" ;", ";") for line in lines)


def _serialize_sum(vec: dict[str, Fraction]) -> str:
    if not vec:
        return "0"
    parts = []
    for k, c in sorted(vec.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = k if mag == 1 else f"{mag}*{k}"
        parts.append((sign, term))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, term in parts[1:]:
        text += f"{sign}{term}"
    return text


def _serialize_algebra(alg: GradedBasisAlgebra) -> str:
    u = alg.unit
    mul = []
    for (i, j), vec in sorted(alg.mul.items()):
        if u in (i, j) and vec == {j if i == u else i: Fraction(1)}:
            continue
        mul.append(f"({i},{j})->{_serialize_sum(vec)}")
    # a unit product absent from the table is zero, not the implicit default
    for n in alg.names:
        for key in ((u, n), (n, u)):
            if key not in alg.mul:
                mul.append(f"({key[0]},{key[1]})->0")
    lines = [
        "algebra {",
        "  basis: " + " ".join(f"{n}:{d}" for n, d in alg.basis) + ";",
        f"  unit: {u};",
        "  mul: " + " ".join(sorted(set(mul))) + ";",
        "  delta: " + " ".join(f"{i}->{_serialize_sum(v)}" for i, v in sorted(alg.delta.items())) + ";",
        "}",
    ]
    return "\n".join(line.replace(" ;", ";") for line in lines)


def serialize(x: Value) -> str:
    """Canonical text of a value; ``parse(serialize(x)) == x``."""
    if isinstance(x, FatGraph):
        return _serialize_graph(x) + "\n"
    if isinstance(x, ChordDiagram):
        return _serialize_diagram(x) + "\n"
    if isinstance(x, GradedBasisAlgebra):
        return _serialize_algebra(x) + "\n"
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- DOT export ---------------------------------------------------------------------

def _role_label(role) -> str:
    return f"{role[0]}:{role[1]}"


def export_dot(x: FatGraph | ChordDiagram) -> str:
    """Undirected DOT text; one node per vertex, one line per edge.

    For diagrams, ghost edges are dashed and each edge end carries the role
    of the boundary cycle running along that side of the edge.
    """
    d = x if isinstance(x, ChordDiagram) else None
    g = d.graph if d is not None else x
    node = {h: f"v{min(cyc)}" for cyc in g.vertices for h in cyc}
    lines = ["graph fatgraph {", "  node [shape=circle, label=\"\"];"]
    for cyc in g.vertices:
        lines.append(f"  v{min(cyc)} [xlabel=\"{' '.join(map(str, cyc))}\"];")
    role_of_dart = {}
    if d is not None:
        roles = d.role_of
        for c in boundary_cycles(g):
            for h in c.darts:
                role_of_dart[h] = roles[c.start]
        lengths = d.length_of
    for h, k in g.pairs:
        attrs = [f"label=\"{h}-{k}\""]
        if d is not None:
            e = g.edge_of(h)
            attrs[0] = f"label=\"{h}-{k} len={lengths[e]}\""
            if e in d.ghost_edges:
                attrs.append("style=dashed")
            attrs.append(f"taillabel=\"{_role_label(role_of_dart[h])}\"")
            attrs.append(f"headlabel=\"{_role_label(role_of_dart[k])}\"")
        lines.append(f"  {node[h]} -- {node[k]} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
