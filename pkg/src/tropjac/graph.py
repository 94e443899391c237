"""Metric graphs as models of compact tropical curves.

Points are :class:`GraphPoint` values: a vertex, or an offset strictly inside
an edge measured from the edge's tail. Divisors map points to integers.
Refinement (:func:`refine`) inserts 2-valent vertices and keeps the map back to
the original graph, which is how the rest of the package computes on curves
whose interesting points do not sit at vertices.
"""
from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ._linalg import fmt_fraction
from .errors import DisconnectedGraphError, GraphError


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class GraphPoint:
    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @classmethod
    def at(cls, vertex: str) -> "GraphPoint":
        return cls(vertex=vertex)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.offset)

    def __lt__(self, other: "GraphPoint") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.vertex is not None:
            return self.vertex
        return f"{self.edge}@{fmt_fraction(self.offset)}"

    def __repr__(self) -> str:
        return f"GraphPoint({self})"


class MetricGraph:
    """Connected multigraph with positive rational edge lengths.

    Loops and parallel edges are allowed. Leaves are allowed here (trees are
    legitimate metric graphs); the compactness policy of rejecting 1-valent
    vertices lives in the file parser.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                eid, t, h, length = e
                e = Edge(str(eid), str(t), str(h), Fraction(length))
            es.append(e)
        self.edges: tuple[Edge, ...] = tuple(es)
        if not self.vertices:
            raise GraphError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex identifiers")
        self._edge = {e.id: e for e in self.edges}
        if len(self._edge) != len(self.edges):
            raise GraphError("duplicate edge identifiers")
        vs = set(self.vertices)
        self._ends: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise GraphError(f"edge {e.id} has an end outside the vertex set")
            if e.length <= 0:
                raise GraphError(f"edge {e.id} has nonpositive length {e.length}")
            self._ends[e.tail].append((e.id, +1))
            self._ends[e.head].append((e.id, -1))
        if len(self.component_of(self.vertices[0])) != len(self.vertices):
            raise DisconnectedGraphError("graph is not connected")

    def __repr__(self) -> str:
        return f"MetricGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MetricGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def edge(self, eid: str) -> Edge:
        return self._edge[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge

    def ends(self, v: str) -> list[tuple[str, int]]:
        """Edge-ends at v as (edge id, direction); +1 leaves along the edge from its tail.

        A loop contributes both of its ends.
        """
        return self._ends[v]

    def valence(self, v: str) -> int:
        return len(self._ends[v])

    def other_end(self, eid: str, sign: int) -> str:
        e = self._edge[eid]
        return e.head if sign > 0 else e.tail

    def component_of(self, v: str, skip: frozenset | set = frozenset()) -> set[str]:
        seen = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for eid, sign in self._ends[x]:
                if eid in skip:
                    continue
                y = self.other_end(eid, sign)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def leaves(self) -> list[str]:
        return [v for v in self.vertices if self.valence(v) == 1]

    def point(self, edge: str, offset) -> GraphPoint:
        """Canonical point at ``offset`` from the tail of ``edge``."""
        e = self._edge[edge]
        offset = Fraction(offset)
        if offset == 0:
            return GraphPoint(vertex=e.tail)
        if offset == e.length:
            return GraphPoint(vertex=e.head)
        if not 0 < offset < e.length:
            raise GraphError(f"offset {offset} outside edge {edge} of length {e.length}")
        return GraphPoint(edge=edge, offset=offset)

    def vertex(self, v: str) -> GraphPoint:
        if v not in self._ends:
            raise GraphError(f"unknown vertex {v}")
        return GraphPoint(vertex=v)

    def check_point(self, p: GraphPoint) -> GraphPoint:
        if p.vertex is not None:
            if p.vertex not in self._ends:
                raise GraphError(f"unknown vertex {p.vertex}")
        elif p.edge not in self._edge or not 0 < p.offset < self._edge[p.edge].length:
            raise GraphError(f"point {p} is not an interior edge point")
        return p

    def point_valence(self, p: GraphPoint) -> int:
        return self.valence(p.vertex) if p.is_vertex else 2

    def tangents(self, p: GraphPoint) -> list[tuple[str, int]]:
        """Outgoing primitive directions at p as (edge id, sign), sign +1 = toward the head."""
        if p.is_vertex:
            return list(self._ends[p.vertex])
        return [(p.edge, +1), (p.edge, -1)]

    def spanning_tree(self, edge_order: Sequence[str] | None = None, root: str | None = None) -> list[str]:
        """BFS spanning tree; edges are tried in ``edge_order`` (default: storage order)."""
        rank = {eid: i for i, eid in enumerate(edge_order or [e.id for e in self.edges])}
        root = root if root is not None else self.vertices[0]
        seen = {root}
        tree = []
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for eid, sign in sorted(self._ends[x], key=lambda es: (rank.get(es[0], len(rank)), -es[1])):
                y = self.other_end(eid, sign)
                if y not in seen:
                    seen.add(y)
                    tree.append(eid)
                    queue.append(y)
        return tree


class Divisor:
    """Finite integer combination of graph points; immutable and hashable."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coefficients: Mapping[GraphPoint, int] | Iterable[tuple[GraphPoint, int]] | None = None):
        acc: dict[GraphPoint, int] = defaultdict(int)
        items = coefficients.items() if isinstance(coefficients, Mapping) else (coefficients or ())
        for p, a in items:
            if int(a) != a:
                raise ValueError(f"non-integer coefficient {a}")
            acc[p] += int(a)
        self._c = {p: acc[p] for p in sorted(acc) if acc[p] != 0}
        self._hash = None

    @classmethod
    def of_points(cls, points: Iterable[GraphPoint]) -> "Divisor":
        return cls((p, 1) for p in points)

    def __getitem__(self, p: GraphPoint) -> int:
        return self._c.get(p, 0)

    def __iter__(self) -> Iterator[GraphPoint]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def items(self):
        return self._c.items()

    @property
    def support(self) -> list[GraphPoint]:
        return list(self._c)

    @property
    def degree(self) -> int:
        return sum(self._c.values())

    @property
    def is_effective(self) -> bool:
        return all(a > 0 for a in self._c.values())

    def effective_away_from(self, p: GraphPoint) -> bool:
        return all(a > 0 for q, a in self._c.items() if q != p)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._c.items()) + list(other._c.items()))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._c.items()) + [(p, -a) for p, a in other._c.items()])

    def __neg__(self) -> "Divisor":
        return Divisor({p: -a for p, a in self._c.items()})

    def __mul__(self, k: int) -> "Divisor":
        return Divisor({p: k * a for p, a in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Divisor({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for p, a in self._c.items():
            term = str(p) if abs(a) == 1 else f"{abs(a)}*{p}"
            parts.append(("- " if a < 0 else "+ ") + term)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def point_divisor(p: GraphPoint, k: int = 1) -> Divisor:
    return Divisor({p: k})


def genus(G: MetricGraph) -> int:
    return G.genus


def canonical_divisor(G: MetricGraph) -> Divisor:
    """Sum of (valence - 2) v over the vertices."""
    return Divisor({GraphPoint(vertex=v): G.valence(v) - 2 for v in G.vertices})


@dataclass(frozen=True)
class Segment:
    """Part [start, end] of a base edge, offsets from the base edge's tail."""

    base_edge: str
    start: Fraction
    end: Fraction


@dataclass(eq=False)
class Model:
    """A refinement of ``base`` together with the point correspondence."""

    base: MetricGraph
    graph: MetricGraph
    point_of: dict[str, GraphPoint]
    segment: dict[str, Segment]
    pieces: dict[str, list[str]]
    vertex_of: dict[GraphPoint, str] = field(init=False)

    def __post_init__(self):
        self.vertex_of = {p: v for v, p in self.point_of.items()}

    def to_model(self, p: GraphPoint) -> GraphPoint:
        """Express a point of the base graph as a point of the refinement."""
        if p in self.vertex_of:
            return GraphPoint(vertex=self.vertex_of[p])
        if p.is_vertex:
            raise GraphError(f"unknown vertex {p}")
        for meid in self.pieces[p.edge]:
            s = self.segment[meid]
            if s.start < p.offset < s.end:
                return GraphPoint(edge=meid, offset=p.offset - s.start)
        raise GraphError(f"point {p} not located")  # pragma: no cover

    def to_base(self, q: GraphPoint) -> GraphPoint:
        if q.is_vertex:
            return self.point_of[q.vertex]
        s = self.segment[q.edge]
        return self.base.point(s.base_edge, s.start + q.offset)

    def divisor_to_model(self, D: Divisor) -> Divisor:
        return Divisor({self.to_model(p): a for p, a in D.items()})

    def divisor_to_base(self, D: Divisor) -> Divisor:
        return Divisor({self.to_base(p): a for p, a in D.items()})

    def vertex_points(self) -> list[GraphPoint]:
        return [self.point_of[v] for v in self.graph.vertices]


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def refine(G: MetricGraph, points: Iterable[GraphPoint] = (), split_loops: bool = False) -> Model:
    """Insert a 2-valent vertex at every non-vertex point of ``points``.

    With ``split_loops`` every loop without an inserted point is split at its
    midpoint, giving a model without loop edges.
    """
    cuts: dict[str, set[Fraction]] = defaultdict(set)
    for p in points:
        G.check_point(p)
        if not p.is_vertex:
            cuts[p.edge].add(p.offset)
    if split_loops:
        for e in G.edges:
            if e.is_loop and not cuts[e.id]:
                cuts[e.id].add(e.length / 2)

    vnames = set(G.vertices)
    enames = {e.id for e in G.edges}
    vertices = list(G.vertices)
    point_of = {v: GraphPoint(vertex=v) for v in G.vertices}
    edges: list[Edge] = []
    segment: dict[str, Segment] = {}
    pieces: dict[str, list[str]] = {}
    for e in G.edges:
        offs = sorted(cuts.get(e.id, ()))
        if not offs:
            edges.append(e)
            segment[e.id] = Segment(e.id, Fraction(0), e.length)
            pieces[e.id] = [e.id]
            continue
        names = []
        for t in offs:
            name = _fresh(f"{e.id}@{fmt_fraction(t)}", vnames)
            vertices.append(name)
            point_of[name] = GraphPoint(edge=e.id, offset=t)
            names.append(name)
        chain = [e.tail] + names + [e.head]
        bounds = [Fraction(0)] + offs + [e.length]
        pieces[e.id] = []
        for i in range(len(chain) - 1):
            meid = _fresh(f"{e.id}#{i}", enames)
            edges.append(Edge(meid, chain[i], chain[i + 1], bounds[i + 1] - bounds[i]))
            segment[meid] = Segment(e.id, bounds[i], bounds[i + 1])
            pieces[e.id].append(meid)
    return Model(G, MetricGraph(vertices, edges), point_of, segment, pieces)


def vertex_distances(G: MetricGraph, source: str) -> dict[str, Fraction]:
    """Dijkstra from a vertex; exact rational distances."""
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), 0, source)]
    tick = 1
    done = set()
    while heap:
        d, _, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for eid, sign in G.ends(x):
            y = G.other_end(eid, sign)
            nd = d + G.edge(eid).length
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, tick, y))
                tick += 1
    return dist


def distance(G: MetricGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Shortest-path distance in the inner metric."""
    if p == q:
        return Fraction(0)
    M = refine(G, [p, q])
    dist = vertex_distances(M.graph, M.vertex_of[p])
    return dist[M.vertex_of[q]]


@dataclass(frozen=True, eq=False)
class Subgraph:
    """A closed subgraph of a model: a set of model edges plus model vertices."""

    model: Model
    edges: frozenset[str]
    vertices: frozenset[str]

    @classmethod
    def from_edges(cls, model: Model, edges: Iterable[str], extra_vertices: Iterable[str] = ()) -> "Subgraph":
        es = frozenset(edges)
        vs = set(extra_vertices)
        for eid in es:
            e = model.graph.edge(eid)
            vs.update((e.tail, e.head))
        return cls(model, es, frozenset(vs))

    def boundary(self) -> list[str]:
        G = self.model.graph
        return [
            v for v in G.vertices
            if v in self.vertices and any(eid not in self.edges for eid, _ in G.ends(v))
        ]

    def interior_vertices(self) -> list[str]:
        b = set(self.boundary())
        return [v for v in self.model.graph.vertices if v in self.vertices and v not in b]

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        G = self.model.graph
        skip = {e.id for e in G.edges if e.id not in self.edges}
        start = next(v for v in G.vertices if v in self.vertices)
        return self.vertices <= G.component_of(start, skip)

    def is_proper(self) -> bool:
        G = self.model.graph
        return len(self.edges) < len(G.edges) or len(self.vertices) < len(G.vertices)

    def as_graph(self) -> MetricGraph:
        G = self.model.graph
        return MetricGraph(
            [v for v in G.vertices if v in self.vertices],
            [e for e in G.edges if e.id in self.edges],
        )

    def boundary_divisor(self) -> Divisor:
        return Divisor.of_points(self.model.point_of[v] for v in self.boundary())
