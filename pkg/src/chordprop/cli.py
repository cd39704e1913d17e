"""Command-line front end.

Exit codes: 0 all checks pass, 1 validation or check failure, 2 usage
error, 3 I/O error.  ``--json`` switches every subcommand to machine mode.
"""

from __future__ import annotations

import argparse
import functools
import sys
from typing import Callable, Sequence

from . import signs
from .bv import GradedBasisAlgebra, check_bv, check_gerstenhaber
from .diagram import ChordDiagram, GlueMatching, classify_type, glue, is_cactus, reduce
from .dsl import export_dot, parse, serialize
from .errors import ChordpropError, WrongKind
from .fatgraph import (
    FatGraph,
    boundary_cycles,
    enumerate_fatgraphs,
    euler_characteristic,
    genus,
    is_connected,
)
from .reports import SCHEMA, dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _Out:
    def __init__(self, json_mode: bool, stdout, stderr):
        self.json = json_mode
        self.stdout = stdout
        self.stderr = stderr

    def emit(self, payload: dict, text: str) -> None:
        if self.json:
            self.stdout.write(dumps({"schema": SCHEMA, **payload}))
        else:
            self.stdout.write(text if text.endswith("\n") else text + "\n")


# -- helpers ------------------------------------------------------------------------

def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str | None, text: str, out: _Out) -> None:
    if path is None or path == "-":
        out.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load(path: str):
    return parse(_read(path))


def _need(value, kind: type, path: str):
    if not isinstance(value, kind):
        names = {FatGraph: "fatgraph", ChordDiagram: "diagram", GradedBasisAlgebra: "algebra"}
        got = names.get(type(value), type(value).__name__)
        raise WrongKind(f"{path}: expected a {names[kind]}, got a {got}")
    return value


def _kind(value) -> str:
    if isinstance(value, FatGraph):
        return "fatgraph"
    if isinstance(value, ChordDiagram):
        return "diagram"
    return "algebra"


def _graph_invariants(g: FatGraph) -> dict:
    connected = is_connected(g)
    out = {
        "V": g.num_vertices,
        "E": g.num_edges,
        "chi": euler_characteristic(g),
        "b": len(boundary_cycles(g)),
        "connected": connected,
        "g": genus(g) if connected and g.pairs else None,
        "boundary_cycles": [list(c.darts) for c in boundary_cycles(g)],
    }
    return out


def _parse_params(text: str | None) -> dict[str, int]:
    params: dict[str, int] = {}
    if not text:
        return params
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"bad parameter {item!r}; expected k=v")
        try:
            params[key] = int(value)
        except ValueError:
            raise UsageError(f"parameter {key} must be an integer, got {value!r}") from None
    return params


def _parse_match(text: str | None, q: int) -> GlueMatching:
    if not text:
        return GlueMatching.identity(q)
    pairs = []
    for item in text.split(","):
        a, sep, b = item.partition("=")
        try:
            pairs.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"bad match {item!r}; expected OUT=IN with integers") from None
        if not sep:
            raise UsageError(f"bad match {item!r}; expected OUT=IN")
    return GlueMatching(tuple(pairs))


# -- subcommands --------------------------------------------------------------------

def cmd_validate(args, out: _Out) -> int:
    value = _load(args.file)
    payload = {"kind": _kind(value), "valid": True}
    if isinstance(value, FatGraph):
        payload["connected"] = is_connected(value)
    elif isinstance(value, ChordDiagram):
        payload["type"] = list(value.surface_type)
    else:
        payload["basis_size"] = len(value.basis)
    out.emit(payload, f"ok: valid {payload['kind']}")
    return EXIT_OK


def cmd_invariants(args, out: _Out) -> int:
    value = _load(args.file)
    if isinstance(value, GradedBasisAlgebra):
        raise WrongKind(f"{args.file}: invariants need a fatgraph or a diagram, got an algebra")
    g = value.graph if isinstance(value, ChordDiagram) else value
    payload = {"kind": _kind(value), **_graph_invariants(g)}
    if isinstance(value, ChordDiagram):
        gg, p, q = classify_type(value)
        payload.update({"p": p, "q": q, "type": [gg, p, q], "reduced": value.is_reduced(),
                        "cactus": is_cactus(value)})
    keys = ["V", "E", "chi", "b", "g"] + (["type"] if "type" in payload else [])
    text = "\n".join(f"{k}: {payload[k]}" for k in keys)
    out.emit(payload, text)
    return EXIT_OK


def cmd_reduce(args, out: _Out) -> int:
    d = _need(_load(args.file), ChordDiagram, args.file)
    _write(args.output, serialize(reduce(d)), out)
    return EXIT_OK


def cmd_glue(args, out: _Out) -> int:
    a = _need(_load(args.a), ChordDiagram, args.a)
    b = _need(_load(args.b), ChordDiagram, args.b)
    glued = glue(reduce(a), reduce(b), _parse_match(args.match, a.q))
    _write(args.output, serialize(glued), out)
    return EXIT_OK


def cmd_cactus(args, out: _Out) -> int:
    d = reduce(_need(_load(args.file), ChordDiagram, args.file))
    result = is_cactus(d)
    out.emit({"cactus": result, "type": list(d.surface_type)},
             f"cactus: {str(result).lower()} (type {d.surface_type})")
    return EXIT_OK if result else EXIT_FAIL


def _cycle(params: dict, dim: str, co: str) -> signs.FormalCycleDegree:
    return signs.FormalCycleDegree(params.get(dim, 0), params.get(co, 0), params.get("d", 0))


_DEGREE_OPS: dict[str, tuple[set[str], Callable[[dict], object]]] = {
    "loop": ({"dimP", "a", "dimQ", "b", "d"},
             lambda p: signs.loop_product(_cycle(p, "dimP", "a"), _cycle(p, "dimQ", "b"))),
    "bracket": ({"dimP", "a", "dimQ", "b", "d"},
                lambda p: signs.bracket_degree(_cycle(p, "dimP", "a"), _cycle(p, "dimQ", "b"))),
    "cross": ({"dimP", "a", "dimQ", "b"},
              lambda p: signs.cross_sign(_cycle(p, "dimP", "a"), _cycle(p, "dimQ", "b"))),
    "delta": ({"dimP", "a", "d", "s"},
              lambda p: signs.delta(_cycle(p, "dimP", "a"), p.get("s", 1))),
    "gysin": ({"dimP", "a", "codim"},
              lambda p: signs.gysin(_cycle(p, "dimP", "a"), p.get("codim", 0))),
    "cap": ({"dimP", "a", "u"},
            lambda p: signs.cap_degree(p.get("u", 0), _cycle(p, "dimP", "a"))),
    "intersection": ({"dimP", "a", "d"},
                     lambda p: signs.intersection_morphism(_cycle(p, "dimP", "a"))),
    "mu": ({"g", "p", "q", "n", "d"},
           lambda p: signs.mu_degree(p.get("g", 0), p.get("p", 1), p.get("q", 1),
                                     p.get("n", 0), p.get("d", 0))),
    "string-bracket": ({"i", "j", "d", "s"},
                       lambda p: signs.string_bracket_degrees(p.get("i", 0), p.get("j", 0),
                                                              p.get("d", 0), p.get("s", 1))),
}


def cmd_degree(args, out: _Out) -> int:
    allowed, fn = _DEGREE_OPS[args.op]
    params = _parse_params(args.params)
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise UsageError(f"--op {args.op} takes {sorted(allowed)}, got unknown {unknown}")
    result = fn(params)
    if isinstance(result, int):
        payload, text = {"op": args.op, "degree": result}, str(result)
    elif isinstance(result, dict):
        payload = {"op": args.op, "degrees": result}
        text = "\n".join(f"{k}: {v}" for k, v in result.items())
    elif result is signs.ZERO:
        payload, text = {"op": args.op, "zero": True}, "ZERO"
    else:
        payload = {"op": args.op, "degree": result.degree, "sign_exponent": result.sign_exponent}
        text = f"degree {result.degree}, sign (-1)^{result.sign_exponent}"
    out.emit(payload, text)
    return EXIT_OK


def cmd_audit_signs(args, out: _Out) -> int:
    report = signs.commutativity_audit(args.max)
    if out.json:
        out.stdout.write(report.to_json())
    else:
        d = report.to_dict()
        out.stdout.write(
            f"commutativity audit on [0,{args.max}]^5: {report.checked} tuples\n"
            f"identity {d['identity']}: {report.verdict}\n"
            f"required exponent differs from (d-dimP-a)(d-dimQ-b) on {d['discrepancy_count']} tuples "
            f"(discrepancy polynomial {d['discrepancy_polynomial']})\n"
            f"required exponent differs from (dimP-d-a)(dimP-d-b) on "
            f"{d['loop_proof_convention_disagreements']} tuples\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _emit_check(report, out: _Out) -> int:
    if out.json:
        out.stdout.write(report.to_json())
    else:
        lines = [f"{report.kind}: {report.verdict}"]
        for it in report.items:
            tag = " (informational)" if it.informational else ""
            status = "pass" if it.passed else "fail"
            lines.append(f"  {it.axiom}{tag}: {status} ({it.checked} checked)")
            if it.failures:
                f = it.failures[0]
                lines.append(f"    counterexample {f['params']}: {f['actual']}")
        out.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_check_bv(args, out: _Out) -> int:
    return _emit_check(check_bv(_need(_load(args.file), GradedBasisAlgebra, args.file)), out)


def cmd_check_gerstenhaber(args, out: _Out) -> int:
    alg = _need(_load(args.file), GradedBasisAlgebra, args.file)
    return _emit_check(check_gerstenhaber(alg), out)


def cmd_export_dot(args, out: _Out) -> int:
    value = _load(args.file)
    if isinstance(value, GradedBasisAlgebra):
        raise WrongKind(f"{args.file}: export-dot needs a fatgraph or a diagram")
    _write(args.output, export_dot(value), out)
    return EXIT_OK


def cmd_enumerate(args, out: _Out) -> int:
    graphs = list(enumerate_fatgraphs(args.max_edges))
    if out.json:
        items = [{"text": serialize(g).strip(), **_graph_invariants(g)} for g in graphs]
        out.emit({"max_edges": args.max_edges, "count": len(graphs), "graphs": items}, "")
    else:
        out.stdout.write("".join(serialize(g) for g in graphs))
    return EXIT_OK


# -- entry point --------------------------------------------------------------------

@functools.cache
def build_parser() -> argparse.ArgumentParser:
    # cached: parse_args never mutates the parser, and building it dominates small runs
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    parser = _Parser(prog="chordprop", parents=[common],
                     description="Fat graphs, chord diagrams, sign calculus and BV checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "parse a .sd file and check its invariants").add_argument("file")
    add("invariants", cmd_invariants, "V, E, chi, b, g and (g;p,q)").add_argument("file")
    p = add("reduce", cmd_reduce, "collapse non-loop ghost edges")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p = add("glue", cmd_glue, "glue outgoing boundaries of A to incoming circles of B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--match", help="OUT=IN,... (outgoing index of A = incoming index of B)")
    p.add_argument("-o", "--output")
    add("cactus", cmd_cactus, "exit 0 iff the reduced diagram has genus 0 and one output") \
        .add_argument("file")
    p = add("degree", cmd_degree, "degree and sign of an operation")
    p.add_argument("--op", required=True, choices=sorted(_DEGREE_OPS))
    p.add_argument("--params", help="k=v,... integer parameters")
    p = add("audit-signs", cmd_audit_signs, "exhaustive commutativity sign audit")
    p.add_argument("--max", type=int, required=True)
    add("check-bv", cmd_check_bv, "BV axiom suite").add_argument("file")
    add("check-gerstenhaber", cmd_check_gerstenhaber, "Gerstenhaber axiom suite").add_argument("file")
    p = add("export-dot", cmd_export_dot, "DOT text of a graph or diagram")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p = add("enumerate", cmd_enumerate, "all connected fat graphs up to a number of edges")
    p.add_argument("--max-edges", type=int, required=True)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    json_mode = "--json" in argv
    out = _Out(json_mode, stdout, stderr)

    def fail(code: int, payload: dict, text: str) -> int:
        if json_mode:
            stdout.write(dumps({"schema": SCHEMA, "error": payload}))
        else:
            stderr.write(f"chordprop: {text}\n")
        return code

    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        return fail(EXIT_USAGE, {"code": "UsageError", "message": str(exc)}, f"usage error: {exc}")
    except ChordpropError as exc:
        return fail(EXIT_FAIL, exc.as_dict(), str(exc))
    except (OSError, UnicodeError) as exc:
        return fail(EXIT_IO, {"code": "IOError", "message": str(exc)}, f"I/O error: {exc}")


def main() -> None:
    sys.exit(run())
