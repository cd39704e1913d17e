"""Fat (ribbon) graphs in half-edge form.

A fat graph is a finite set of half-edges ``H = {1, ..., 2E}`` with two
permutations: the pairing ``alpha`` (a fixed-point-free involution, one
2-cycle per edge) and the vertex rotation ``sigma`` (one cycle per vertex,
listing its half-edges in cyclic order).  Boundary cycles are the orbits of
``phi = sigma o alpha``.

Values are immutable.  Half-edges are renumbered ``1..|H|`` on construction
(order preserving) and every cycle is stored starting from its smallest
half-edge, so two graphs compare equal iff they agree after that
relabelling.  Isomorphism-invariant comparison goes through
:func:`canonical_form`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BoundExceeded,
    DegenerateContraction,
    DisconnectedGraph,
    DuplicateHalfEdge,
    EmptyGraph,
    EmptyVertex,
    FixedPointInPairing,
    LoopContraction,
    LowValence,
    MissingHalfEdge,
    UnknownEdge,
)

MAX_ENUMERATION_EDGES = 6


def rotate_min_first(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate a cyclic sequence so that its smallest entry comes first."""
    if not cycle:
        return ()
    i = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[i:]) + tuple(cycle[:i])


def perm_cycles(perm: Mapping[int, int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation given as a dict, each rotated min-first, sorted."""
    seen: set[int] = set()
    out = []
    for start in sorted(perm):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        h = perm[start]
        while h != start:
            cyc.append(h)
            seen.add(h)
            h = perm[h]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class BoundaryCycle:
    """One boundary component: an orbit of ``sigma o alpha``.

    ``darts`` starts at the smallest half-edge.  ``length`` is the metric
    length when edge lengths were supplied, else ``None``.
    """

    darts: tuple[int, ...]
    length: Fraction | None = None

    def __len__(self) -> int:
        return len(self.darts)

    def __contains__(self, h: object) -> bool:
        return h in self.darts

    @property
    def start(self) -> int:
        return self.darts[0]


@dataclass(frozen=True)
class FatGraph:
    """Canonically labelled fat graph.  Build with :func:`make_fatgraph`."""

    pairs: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, ...], ...]
    alpha: Mapping[int, int] = field(init=False, repr=False, compare=False)
    sigma: Mapping[int, int] = field(init=False, repr=False, compare=False)
    vertex_of: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha = {}
        for a, b in self.pairs:
            alpha[a] = b
            alpha[b] = a
        sigma = {}
        vertex_of = {}
        for v, cyc in enumerate(self.vertices):
            for i, h in enumerate(cyc):
                sigma[h] = cyc[(i + 1) % len(cyc)]
                vertex_of[h] = v
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "vertex_of", vertex_of)

    @property
    def half_edges(self) -> range:
        return range(1, 2 * len(self.pairs) + 1)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.pairs)

    @property
    def edges(self) -> tuple[int, ...]:
        """Edge ids.  An edge is named by its smaller half-edge."""
        return tuple(a for a, _ in self.pairs)

    def edge_of(self, h: int) -> int:
        if h not in self.alpha:
            raise UnknownEdge(f"half-edge {h} is not in the graph", half_edge=h)
        return min(h, self.alpha[h])

    def is_loop(self, e: int) -> bool:
        return self.vertex_of[e] == self.vertex_of[self.alpha[e]]

    def phi(self, h: int) -> int:
        return self.sigma[self.alpha[h]]

    def valence(self, v: int) -> int:
        return len(self.vertices[v])

    def __str__(self) -> str:
        pairs = " ".join(f"({a},{b})" for a, b in self.pairs)
        verts = " ".join("(" + ",".join(map(str, c)) + ")" for c in self.vertices)
        return f"FatGraph(pairs={pairs}; vertices={verts})"


def _build(pairs: Iterable[Sequence[int]], vertices: Iterable[Sequence[int]]
           ) -> tuple[FatGraph, dict[int, int]]:
    """Validate raw data, renumber to 1..|H|; return graph and old->new map."""
    alpha: dict[int, int] = {}
    for pair in pairs:
        a, b = pair
        if a == b:
            raise FixedPointInPairing(f"half-edge {a} is paired with itself",
                                      half_edge=a, where="pairing")
        for h in (a, b):
            if h in alpha:
                raise DuplicateHalfEdge(f"half-edge {h} appears twice in the pairing",
                                        half_edge=h, where="pairing")
        alpha[a] = b
        alpha[b] = a

    cycles = []
    seen: set[int] = set()
    for cyc in vertices:
        cyc = tuple(cyc)
        if not cyc:
            raise EmptyVertex("vertex with no half-edges", where="vertices")
        for h in cyc:
            if h in seen:
                raise DuplicateHalfEdge(f"half-edge {h} appears twice in the vertex orders",
                                        half_edge=h, where="vertices")
            seen.add(h)
        cycles.append(cyc)

    only_pairs = set(alpha) - seen
    if only_pairs:
        h = min(only_pairs)
        raise MissingHalfEdge(f"half-edge {h} is paired but lies on no vertex",
                              half_edge=h, where="pairing")
    only_vertices = seen - set(alpha)
    if only_vertices:
        h = min(only_vertices)
        raise MissingHalfEdge(f"half-edge {h} lies on a vertex but is not paired",
                              half_edge=h, where="vertices")

    relabel = {old: new for new, old in enumerate(sorted(alpha), start=1)}
    new_pairs = sorted({tuple(sorted((relabel[a], relabel[alpha[a]]))) for a in alpha})
    new_vertices = sorted(rotate_min_first([relabel[h] for h in c]) for c in cycles)
    return FatGraph(tuple(new_pairs), tuple(new_vertices)), relabel


def make_fatgraph(pairing: Iterable[Sequence[int]],
                  vertex_orders: Iterable[Sequence[int]]) -> FatGraph:
    """Build a validated fat graph from half-edge pairs and vertex cycles.

    >>> g = make_fatgraph([(1, 2), (3, 4), (5, 6)], [(1, 3, 5), (2, 4, 6)])
    >>> g.num_vertices, g.num_edges
    (2, 3)
    """
    return _build(pairing, vertex_orders)[0]


def boundary_cycles(g: FatGraph, lengths: Mapping[int, Fraction] | None = None
                    ) -> list[BoundaryCycle]:
    """Orbits of ``phi = sigma o alpha``, sorted by starting half-edge.

    ``lengths`` maps edge ids to edge lengths; when given each cycle carries
    its total length.
    """
    out = []
    for cyc in perm_cycles({h: g.phi(h) for h in g.half_edges}):
        length = None
        if lengths is not None:
            length = sum((Fraction(lengths[g.edge_of(h)]) for h in cyc), Fraction(0))
        out.append(BoundaryCycle(cyc, length))
    return out


def euler_characteristic(g: FatGraph) -> int:
    return g.num_vertices - g.num_edges


def is_connected(g: FatGraph) -> bool:
    """True iff <alpha, sigma> acts transitively on the half-edges.

    The empty graph counts as connected.
    """
    if not g.pairs:
        return True
    return len(_orbit(g, 1)) == 2 * g.num_edges


def _orbit(g: FatGraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        h = stack.pop()
        for nxt in (g.alpha[h], g.sigma[h]):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def genus(g: FatGraph) -> int:
    """Genus of the thickened surface, from ``V - E = 2 - 2g - b``."""
    if not g.pairs:
        raise EmptyGraph("genus of the empty graph is undefined")
    if not is_connected(g):
        raise DisconnectedGraph("genus requires a connected graph")
    b = len(boundary_cycles(g))
    twice = 2 - b - euler_characteristic(g)
    assert twice >= 0 and twice % 2 == 0, (twice, g)
    return twice // 2


def check_valence(g: FatGraph, minimum: int = 3) -> None:
    """Raise :class:`LowValence` if some vertex has fewer than ``minimum`` half-edges."""
    for cyc in g.vertices:
        if len(cyc) < minimum:
            raise LowValence(f"vertex {cyc} has valence {len(cyc)} < {minimum}",
                             half_edge=cyc[0])


def _contract(g: FatGraph, h: int) -> tuple[FatGraph, dict[int, int]]:
    if h not in g.alpha:
        raise UnknownEdge(f"no edge contains half-edge {h}", half_edge=h)
    k = g.alpha[h]
    vh, vk = g.vertex_of[h], g.vertex_of[k]
    if vh == vk:
        raise LoopContraction(f"edge {g.edge_of(h)} is a loop", edge=g.edge_of(h))
    cyc_h, cyc_k = g.vertices[vh], g.vertices[vk]
    if len(cyc_h) == 1 and len(cyc_k) == 1:
        raise DegenerateContraction(
            f"edge {g.edge_of(h)} is an isolated segment; contracting it leaves a bare point",
            edge=g.edge_of(h))
    i, j = cyc_h.index(h), cyc_k.index(k)
    merged = cyc_h[i + 1:] + cyc_h[:i] + cyc_k[j + 1:] + cyc_k[:j]
    vertices = [c for n, c in enumerate(g.vertices) if n not in (vh, vk)] + [merged]
    pairs = [p for p in g.pairs if h not in p]
    return _build(pairs, vertices)


def contract_edge(g: FatGraph, e: int) -> FatGraph:
    """Contract the non-loop edge containing half-edge ``e``.

    The two end vertices merge; their cyclic orders are spliced where the
    edge's half-edges are removed.
    """
    return _contract(g, e)[0]


# -- canonical forms and enumeration -------------------------------------------------

def _rooted_code(g: FatGraph, root: int) -> tuple[list[int], tuple[int, ...]]:
    label = {root: 1}
    order = [root]
    i = 0
    while i < len(order):
        d = order[i]
        for nxt in (g.sigma[d], g.alpha[d]):
            if nxt not in label:
                label[nxt] = len(order) + 1
                order.append(nxt)
        i += 1
    code = []
    for d in order:
        code.append(label[g.sigma[d]])
        code.append(label[g.alpha[d]])
    return order, tuple(code)


def _component_roots(g: FatGraph) -> list[list[int]]:
    comps = []
    seen: set[int] = set()
    for h in g.half_edges:
        if h not in seen:
            orb = _orbit(g, h)
            seen |= orb
            comps.append(sorted(orb))
    return comps


def canonical_code(g: FatGraph) -> tuple:
    """Isomorphism invariant: equal iff the graphs are isomorphic as fat graphs."""
    codes = [min(_rooted_code(g, r)[1] for r in comp) for comp in _component_roots(g)]
    return tuple(sorted(codes))


def automorphism_count(g: FatGraph) -> int:
    """Order of the automorphism group of a connected fat graph."""
    if not is_connected(g) or not g.pairs:
        raise DisconnectedGraph("automorphism_count requires a connected, non-empty graph")
    codes = [_rooted_code(g, r)[1] for r in g.half_edges]
    best = min(codes)
    return codes.count(best)


def canonical_relabel(g: FatGraph) -> dict[int, int]:
    """Half-edge relabelling that sends ``g`` to :func:`canonical_form`."""
    parts = []
    for comp in _component_roots(g):
        order, code = min((_rooted_code(g, r) for r in comp), key=lambda oc: oc[1])
        parts.append((code, order))
    parts.sort()
    relabel = {}
    for _, order in parts:
        for d in order:
            relabel[d] = len(relabel) + 1
    return relabel


def relabel_graph(g: FatGraph, relabel: Mapping[int, int]) -> FatGraph:
    return _build([(relabel[a], relabel[b]) for a, b in g.pairs],
                  [[relabel[h] for h in c] for c in g.vertices])[0]


def canonical_form(g: FatGraph) -> FatGraph:
    """Representative of the isomorphism class of ``g``."""
    return relabel_graph(g, canonical_relabel(g))


def _base_graphs() -> list[FatGraph]:
    return [make_fatgraph([(1, 2)], [(1,), (2,)]), make_fatgraph([(1, 2)], [(1, 2)])]


def _corners(cyc: tuple[int, ...]) -> list[int]:
    # insertion positions after each entry of the cycle
    return list(range(len(cyc)))


def _insert_after(cyc: tuple[int, ...], pos: int, items: Sequence[int]) -> tuple[int, ...]:
    return cyc[:pos + 1] + tuple(items) + cyc[pos + 1:]


def _children(g: FatGraph) -> Iterator[FatGraph]:
    n = 2 * g.num_edges
    x, y = n + 1, n + 2
    pairs = list(g.pairs) + [(x, y)]
    verts = list(g.vertices)
    # pendant edge to a new univalent vertex
    for v, cyc in enumerate(verts):
        for pos in _corners(cyc):
            nv = verts[:v] + [_insert_after(cyc, pos, [x])] + verts[v + 1:] + [(y,)]
            yield make_fatgraph(pairs, nv)
    # new edge between two corners (possibly the same vertex or corner)
    for v, cyc in enumerate(verts):
        for pos in _corners(cyc):
            with_x = _insert_after(cyc, pos, [x])
            for w in range(len(verts)):
                base = with_x if w == v else verts[w]
                for pos2 in range(len(base)):
                    nv = list(verts)
                    nv[v] = with_x
                    nv[w] = _insert_after(base, pos2, [y])
                    yield make_fatgraph(pairs, nv)


def enumerate_fatgraphs(max_edges: int) -> Iterator[FatGraph]:
    """Every connected fat graph with ``1 <= E <= max_edges``, up to isomorphism.

    Graphs are yielded in canonical form, ordered by edge count and then by
    canonical code.  Every connected graph with E >= 2 edges arises from one
    with E - 1 edges by adding a pendant edge or an edge between two corners,
    so growing from the two one-edge graphs reaches all classes.
    """
    if max_edges > MAX_ENUMERATION_EDGES:
        raise BoundExceeded(f"max_edges={max_edges} exceeds {MAX_ENUMERATION_EDGES}")
    if max_edges < 1:
        return
    layer = {canonical_code(g): canonical_form(g) for g in _base_graphs()}
    for edges in range(1, max_edges + 1):
        for code in sorted(layer):
            yield layer[code]
        if edges == max_edges:
            break
        nxt = {}
        for g in layer.values():
            for child in _children(g):
                code = canonical_code(child)
                if code not in nxt:
                    nxt[code] = child
        layer = {code: canonical_form(c) for code, c in nxt.items()}
