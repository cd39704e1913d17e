"""Marked metric Sullivan chord diagrams.

A diagram is a fat graph together with

* ghost edges: the edges of the ``p`` incoming circles;
* incoming circles: boundary cycles made only of ghost edges, each ghost
  edge traversed exactly once;
* boundary roles: every boundary cycle is ``("in", i)`` or ``("out", j)``;
* exact rational edge lengths and one marking per boundary cycle, the
  offset of the parametrisation start measured along the cycle from the
  tail of its first (smallest) half-edge.

Boundary cycles are referenced by any of their half-edges and stored under
their smallest one.  Parametrisations run in the direction of the boundary
cycle; gluing identifies parameter ``t`` on an outgoing boundary with
``-t`` on the matched incoming circle, which is what orientability of the
glued surface forces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadParameter,
    CoincidentAttachment,
    GhostNotCircles,
    MarkingOutOfRange,
    NonpositiveLength,
    RoleCountMismatch,
    TypeMismatch,
    UnknownEdge,
    UnreducedInput,
)
from .fatgraph import (
    FatGraph,
    _build,
    _contract,
    boundary_cycles,
    euler_characteristic,
    genus,
    rotate_min_first,
)

Role = tuple[str, int]


@dataclass(frozen=True)
class ChordDiagram:
    """Validated diagram.  Build with :func:`make_diagram`."""

    graph: FatGraph
    ghost_edges: tuple[int, ...]
    lengths: tuple[tuple[int, Fraction], ...]
    incoming_circles: tuple[tuple[int, ...], ...]
    roles: tuple[tuple[int, str, int], ...]
    markings: tuple[tuple[int, Fraction], ...]
    surface_type: tuple[int, int, int]

    @property
    def length_of(self) -> dict[int, Fraction]:
        return dict(self.lengths)

    @property
    def role_of(self) -> dict[int, Role]:
        return {start: (kind, idx) for start, kind, idx in self.roles}

    @property
    def marking_of(self) -> dict[int, Fraction]:
        return dict(self.markings)

    @property
    def p(self) -> int:
        return self.surface_type[1]

    @property
    def q(self) -> int:
        return self.surface_type[2]

    @property
    def outgoing(self) -> tuple[tuple[int, ...], ...]:
        """Outgoing boundary cycles, by outgoing index."""
        cyc = {c.start: c.darts for c in boundary_cycles(self.graph)}
        out = sorted((idx, start) for start, kind, idx in self.roles if kind == "out")
        return tuple(cyc[start] for _, start in out)

    def dart_length(self, h: int) -> Fraction:
        return self.length_of[self.graph.edge_of(h)]

    def cycle_length(self, darts: Sequence[int]) -> Fraction:
        lengths = self.length_of
        return sum((lengths[self.graph.edge_of(h)] for h in darts), Fraction(0))

    def euler_characteristic(self) -> int:
        return euler_characteristic(self.graph)

    def is_reduced(self) -> bool:
        return all(self.graph.is_loop(e) for e in self.ghost_edges)


@dataclass(frozen=True)
class GlueMatching:
    """Bijection from outgoing indices of one diagram to incoming indices of another."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        outs = [j for j, _ in self.pairs]
        ins = [i for _, i in self.pairs]
        if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
            raise BadParameter(f"matching {self.pairs} is not a bijection")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def identity(cls, q: int) -> "GlueMatching":
        return cls(tuple((j, j) for j in range(q)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _parse_role(role) -> Role:
    if isinstance(role, str):
        kind, _, idx = role.partition(":")
        role = (kind, int(idx))
    kind, idx = role
    if kind not in ("in", "out"):
        raise RoleCountMismatch(f"unknown role kind {kind!r}")
    return kind, int(idx)


def _cycle_index(graph: FatGraph) -> tuple[dict[int, tuple[int, ...]], dict[int, int]]:
    cycles = {c.start: c.darts for c in boundary_cycles(graph)}
    start_of = {h: s for s, darts in cycles.items() for h in darts}
    return cycles, start_of


def make_diagram(graph: FatGraph,
                 ghost_edges: Iterable[int],
                 lengths: Mapping[int, object],
                 incoming_circles: Iterable[Sequence[int]],
                 boundary_roles: Mapping[int, object],
                 markings: Mapping[int, object] | None = None) -> ChordDiagram:
    """Validate the data of a marked metric chord diagram.

    Edges may be named by either of their half-edges; boundary cycles by any
    of their half-edges.  Missing markings default to offset 0.
    """
    cycles, start_of = _cycle_index(graph)

    ghost = set()
    for e in ghost_edges:
        ghost.add(graph.edge_of(e))

    length_of: dict[int, Fraction] = {}
    for e, value in lengths.items():
        value = _as_fraction(value)
        if value <= 0:
            raise NonpositiveLength(f"edge {e} has length {value}", edge=e)
        length_of[graph.edge_of(e)] = value
    for e in graph.edges:
        if e not in length_of:
            raise NonpositiveLength(f"edge {e} has no length", edge=e)

    circles = []
    covered: dict[int, int] = {}
    for cyc in incoming_circles:
        cyc = rotate_min_first(tuple(cyc))
        if not cyc or cyc[0] not in start_of or cycles[start_of[cyc[0]]] != cyc:
            raise GhostNotCircles(f"incoming circle {cyc} is not a boundary cycle",
                                  half_edge=cyc[0] if cyc else None)
        for h in cyc:
            e = graph.edge_of(h)
            if e not in ghost:
                raise GhostNotCircles(f"incoming circle {cyc} uses non-ghost edge {e}", edge=e)
            if e in covered:
                raise GhostNotCircles(f"ghost edge {e} is traversed twice by incoming circles",
                                      edge=e)
            covered[e] = h
        circles.append(cyc)
    uncovered = ghost - set(covered)
    if uncovered:
        e = min(uncovered)
        raise GhostNotCircles(f"ghost edge {e} lies on no incoming circle", edge=e)

    roles: dict[int, Role] = {}
    for h, role in boundary_roles.items():
        if h not in start_of:
            raise UnknownEdge(f"half-edge {h} is not in the graph", half_edge=h)
        start = start_of[h]
        if start in roles:
            raise RoleCountMismatch(f"boundary cycle {cycles[start]} has two roles", half_edge=h)
        roles[start] = _parse_role(role)
    missing = set(cycles) - set(roles)
    if missing:
        start = min(missing)
        raise RoleCountMismatch(f"boundary cycle {cycles[start]} has no role", half_edge=start)
    ins = sorted(idx for kind, idx in roles.values() if kind == "in")
    outs = sorted(idx for kind, idx in roles.values() if kind == "out")
    if ins != list(range(len(circles))):
        raise RoleCountMismatch(
            f"incoming roles {ins} do not match the {len(circles)} incoming circles", where="roles")
    if outs != list(range(len(outs))):
        raise RoleCountMismatch(f"outgoing indices {outs} are not 0..{len(outs) - 1}", where="roles")
    for start, (kind, idx) in roles.items():
        if kind == "in" and circles[idx] != cycles[start]:
            raise RoleCountMismatch(
                f"role in:{idx} is on {cycles[start]} but incoming circle {idx} is {circles[idx]}",
                half_edge=start)

    marks: dict[int, Fraction] = {start: Fraction(0) for start in cycles}
    for h, value in (markings or {}).items():
        if h not in start_of:
            raise UnknownEdge(f"half-edge {h} is not in the graph", half_edge=h)
        start = start_of[h]
        value = _as_fraction(value)
        total = sum((length_of[graph.edge_of(x)] for x in cycles[start]), Fraction(0))
        if not 0 <= value < total:
            raise MarkingOutOfRange(
                f"marking {value} on boundary {cycles[start]} is outside [0, {total})",
                half_edge=h)
        marks[start] = value

    surface_type = (genus(graph), len(circles), len(outs))
    return ChordDiagram(
        graph=graph,
        ghost_edges=tuple(sorted(ghost)),
        lengths=tuple(sorted(length_of.items())),
        incoming_circles=tuple(circles),
        roles=tuple(sorted((s, k, i) for s, (k, i) in roles.items())),
        markings=tuple(sorted(marks.items())),
        surface_type=surface_type,
    )


def classify_type(d: ChordDiagram) -> tuple[int, int, int]:
    """``(g, p, q)`` recomputed from the graph and the roles."""
    kinds = [kind for _, kind, _ in d.roles]
    return genus(d.graph), kinds.count("in"), kinds.count("out")


def is_cactus(d: ChordDiagram) -> bool:
    g, _, q = classify_type(d)
    return g == 0 and q == 1


# -- metric helpers -----------------------------------------------------------------

def _locate(darts: Sequence[int], dart_len, pos: Fraction) -> tuple[int, Fraction]:
    """Index ``t`` and offset of ``pos`` with ``cum_t <= pos < cum_t + len_t``."""
    cum = Fraction(0)
    for t, h in enumerate(darts):
        step = dart_len(h)
        if pos < cum + step:
            return t, pos - cum
        cum += step
    raise AssertionError(f"position {pos} beyond cycle length {cum}")


def _position(darts: Sequence[int], dart_len, t: int, offset: Fraction) -> Fraction:
    return sum((dart_len(h) for h in darts[:t]), Fraction(0)) + offset


def _point_position(graph: FatGraph, lengths: Mapping[int, Fraction],
                    dart: int, offset: Fraction) -> tuple[int, Fraction]:
    """Boundary cycle (by start) and position of the point ``offset`` along ``dart``."""
    cycles, start_of = _cycle_index(graph)
    start = start_of[dart]
    darts = cycles[start]
    pos = _position(darts, lambda h: lengths[graph.edge_of(h)], darts.index(dart), offset)
    return start, pos


# -- reduction ----------------------------------------------------------------------

def _contract_ghost(d: ChordDiagram, h: int) -> ChordDiagram:
    g = d.graph
    k = g.alpha[h]
    gone = {h, k}
    new_graph, relabel = _contract(g, h)
    lengths = d.length_of

    def dart_len(x):
        return lengths[g.edge_of(x)]

    def new_edge(e):
        return min(relabel[e], relabel[g.alpha[e]])

    new_lengths = {new_edge(e): v for e, v in lengths.items() if e not in gone}
    ghost = [new_edge(e) for e in d.ghost_edges if e not in gone]
    circles = [[relabel[x] for x in cyc if x not in gone] for cyc in d.incoming_circles]

    cycles = {c.start: c.darts for c in boundary_cycles(g)}
    roles = {}
    marks = {}
    for start, kind, idx in d.roles:
        darts = cycles[start]
        t, off = _locate(darts, dart_len, d.marking_of[start])
        if darts[t] in gone:
            # a point on the collapsed arc lands on the merged vertex
            t = next((t + s) % len(darts) for s in range(1, len(darts) + 1)
                     if darts[(t + s) % len(darts)] not in gone)
            off = Fraction(0)
        anchor = relabel[darts[t]]
        roles[anchor] = (kind, idx)
        _, pos = _point_position(new_graph, new_lengths, anchor, off)
        marks[anchor] = pos
    return make_diagram(new_graph, ghost, new_lengths, circles, roles, marks)


def reduce(d: ChordDiagram) -> ChordDiagram:
    """Contract every non-loop ghost edge, smallest edge first.

    Ghost loops are kept, so each incoming circle survives as one or more
    loops.  Collapsed arcs contribute zero length; markings on them move to
    the merged vertex.
    """
    while True:
        todo = [e for e in d.ghost_edges if not d.graph.is_loop(e)]
        if not todo:
            return d
        d = _contract_ghost(d, todo[0])


# -- gluing -------------------------------------------------------------------------

@dataclass
class _Visit:
    pair_head: int        # d2 dart alpha(c_s); the visit corner is (alpha(c_s), c_{s+1})
    boundary: int         # outgoing index of d1
    position: Fraction    # position on that boundary of d1


def glue(d1: ChordDiagram, d2: ChordDiagram,
         matching: GlueMatching | Mapping[int, int] | None = None) -> ChordDiagram:
    """Glue every outgoing boundary of ``d1`` to an incoming circle of ``d2``.

    ``matching`` maps outgoing index of ``d1`` to incoming index of ``d2``
    (identity by default).  Each incoming circle of ``d2`` is rescaled to the
    length of its partner; vertices of ``d2`` on the circle that carry other
    structure are attached to ``d1`` at the corresponding points, and the
    circle's ghost edges are replaced by the boundary arcs of ``d1``.
    """
    g1, _, q = d1.surface_type
    g2, p2, _ = d2.surface_type
    if q != p2:
        raise TypeMismatch(f"cannot glue {q} outgoing boundaries to {p2} incoming circles")
    if q < 1:
        raise TypeMismatch("gluing needs at least one outgoing boundary")
    if matching is None:
        matching = GlueMatching.identity(q)
    elif not isinstance(matching, GlueMatching):
        matching = GlueMatching(tuple(matching.items()))
    match = matching.as_dict()
    if sorted(match) != list(range(q)) or sorted(match.values()) != list(range(q)):
        raise TypeMismatch(f"matching {matching.pairs} is not total on {q} boundaries")
    for name, d in (("first", d1), ("second", d2)):
        if not d.is_reduced():
            raise UnreducedInput(f"{name} diagram has non-loop ghost edges; reduce it first")

    G1, G2 = d1.graph, d2.graph
    len1, len2 = d1.length_of, d2.length_of

    def dl1(h):
        return len1[G1.edge_of(h)]

    def dl2(h):
        return len2[G2.edge_of(h)]

    n1 = 2 * G1.num_edges
    n2 = 2 * G2.num_edges
    shift = n1  # d2 half-edge h becomes h + shift
    next_label = n1 + n2 + 1

    outs1 = d1.outgoing
    marks1, marks2 = d1.marking_of, d2.marking_of
    circle_of = {i: d2.incoming_circles[i] for i in range(p2)}
    in_to_out = {i: j for j, i in match.items()}

    # metric map from d2 circle positions to d1 boundary positions
    scale = {}
    for i, C in circle_of.items():
        B = outs1[in_to_out[i]]
        scale[i] = (d1.cycle_length(B), d2.cycle_length(C), marks1[B[0]], marks2[C[0]])

    def to_boundary(i: int, u: Fraction) -> Fraction:
        lenB, lenC, mB, mC = scale[i]
        return (mB - lenB / lenC * (u - mC)) % lenB

    # visits of incoming circles at vertices of d2
    visits: dict[int, _Visit] = {}
    ghost2 = set()
    for i, C in circle_of.items():
        u = Fraction(0)
        for c in C:
            ghost2.add(c)
            ghost2.add(G2.alpha[c])
            u += dl2(c)
            visits[G2.alpha[c]] = _Visit(G2.alpha[c], in_to_out[i],
                                         to_boundary(i, u % d2.cycle_length(C)))

    active_vertices = [v for v, cyc in enumerate(G2.vertices)
                       if len(cyc) > 2 and any(h in visits for h in cyc)]

    # locate active visits on d1 and check for collisions
    point_of_visit: dict[int, tuple] = {}
    edge_cuts: dict[int, set[Fraction]] = {}
    vertex_hits: dict[int, int] = {}
    taken: dict[tuple, int] = {}
    for v in active_vertices:
        for h in G2.vertices[v]:
            if h not in visits:
                continue
            vis = visits[h]
            B = outs1[vis.boundary]
            t, off = _locate(B, dl1, vis.position)
            b = B[t]
            if off == 0:
                key = ("v", G1.vertex_of[b])
                vertex_hits[G1.vertex_of[b]] = b
            else:
                e = G1.edge_of(b)
                cut = off if b == e else dl1(b) - off
                key = ("e", e, cut)
                edge_cuts.setdefault(e, set()).add(cut)
            if key in taken:
                raise CoincidentAttachment(
                    f"two attachment points meet at {key[0]}{key[1:]} on the first diagram")
            taken[key] = h
            point_of_visit[h] = (key, b)

    # subdivide edges of d1
    expansion: dict[int, list[int]] = {}      # d1 dart -> glued darts in its direction
    new_len: dict[int, Fraction] = {}         # glued dart -> length of its edge
    pairs: list[tuple[int, int]] = []
    vertices: list[tuple[int, ...]] = []
    cut_vertex: dict[tuple, tuple[int, ...]] = {}
    for e, k in G1.pairs:
        if e not in edge_cuts:
            pairs.append((e, k))
            new_len[e] = new_len[k] = len1[e]
            expansion[e], expansion[k] = [e], [k]
            continue
        cuts = sorted(edge_cuts[e])
        m = len(cuts)
        f = [e] + list(range(next_label, next_label + m))
        next_label += m
        r = list(range(next_label, next_label + m)) + [k]
        next_label += m
        stops = [Fraction(0)] + cuts + [len1[e]]
        for s in range(m + 1):
            pairs.append((f[s], r[s]))
            new_len[f[s]] = new_len[r[s]] = stops[s + 1] - stops[s]
        for s in range(1, m + 1):
            cut_vertex[("e", e, cuts[s - 1])] = (f[s], r[s - 1])
        expansion[e] = f
        expansion[k] = list(reversed(r))

    def segment(key, b_out_dart):
        """Half-edges met going round the d1 point, starting where the boundary leaves it."""
        if key[0] == "v":
            cyc = G1.vertices[key[1]]
            i = cyc.index(b_out_dart)
            return cyc[i:] + cyc[:i]
        f_s, r_prev = cut_vertex[key]
        e = key[1]
        return (f_s, r_prev) if b_out_dart == e else (r_prev, f_s)

    for w, cyc in enumerate(G1.vertices):
        if w not in vertex_hits:
            vertices.append(cyc)

    for v, cyc in enumerate(G2.vertices):
        if not any(h in visits or h in ghost2 for h in cyc):
            vertices.append(tuple(h + shift for h in cyc))
            continue
        if v not in active_vertices:
            continue
        start = next(i for i, h in enumerate(cyc) if h in visits)
        cyc = cyc[start:] + cyc[:start]
        merged: list[int] = []
        skip = False
        for h in cyc:
            if skip:
                skip = False
                continue
            if h in visits:
                key, b = point_of_visit[h]
                merged.extend(segment(key, b))
                skip = True   # drop c_{s+1}, the circle leaving the visit
            else:
                merged.append(h + shift)
        vertices.append(tuple(merged))

    for a, b in G2.pairs:
        if a not in ghost2:
            pairs.append((a + shift, b + shift))
            new_len[a + shift] = new_len[b + shift] = len2[a]

    ghost = []
    for e in d1.ghost_edges:
        ghost.extend(expansion[e])

    circles = [[x for h in cyc for x in expansion[h]] for cyc in d1.incoming_circles]

    graph, relabel = _build(pairs, vertices)
    lengths = {min(relabel[a], relabel[b]): new_len[a] for a, b in pairs}

    def glued_point(d1_dart: int, offset: Fraction) -> tuple[int, Fraction]:
        for x in expansion[d1_dart]:
            if offset < new_len[x]:
                return x, offset
            offset -= new_len[x]
        raise AssertionError("offset beyond dart length")

    def boundary_point(i: int, u: Fraction) -> tuple[int, Fraction]:
        B = outs1[in_to_out[i]]
        t, off = _locate(B, dl1, to_boundary(i, u))
        return glued_point(B[t], off)

    circle_pos = {}
    for i, C in circle_of.items():
        u = Fraction(0)
        for c in C:
            circle_pos[c] = (i, u)
            u += dl2(c)

    def image_of_d2_point(h: int, offset: Fraction) -> tuple[int, Fraction]:
        if h not in ghost2:
            return h + shift, offset
        c = G2.alpha[h]
        i, u = circle_pos[c]
        return boundary_point(i, u + dl2(c) - offset)

    roles: dict[int, Role] = {}
    marks: dict[int, Fraction] = {}
    for idx, cyc in enumerate(d1.incoming_circles):
        t, off = _locate(cyc, dl1, marks1[cyc[0]])
        x, off = glued_point(cyc[t], off)
        roles[relabel[x]] = ("in", idx)
        marks[relabel[x]] = _point_position(graph, lengths, relabel[x], off)[1]
    for start, kind, idx in d2.roles:
        if kind != "out":
            continue
        darts = [h for h in _cycle_index(G2)[0][start]]
        t, off = _locate(darts, dl2, marks2[start])
        x, off = image_of_d2_point(darts[t], off)
        roles[relabel[x]] = ("out", idx)
        marks[relabel[x]] = _point_position(graph, lengths, relabel[x], off)[1]

    return make_diagram(graph, [relabel[x] for x in ghost], lengths,
                        [[relabel[x] for x in cyc] for cyc in circles], roles, marks)

