"""Piecewise-affine functions with integer slopes and their divisors.

A :class:`PLFunction` stores its values at the vertices of a :class:`Model`
and is affine on every model edge. Divisors count outgoing slopes, so a
local maximum is a pole: ``divisor_of(f)`` has coefficient -2 at the apex of
a tent.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BoundaryError, DegreeMismatchError, FiringError, NonIntegerSlopeError
from .graph import Divisor, GraphPoint, MetricGraph, Model, Subgraph, refine, vertex_distances
from .homology import Jacobian


@dataclass(frozen=True, eq=False)
class PLFunction:
    model: Model
    values: dict[str, Fraction]

    def __post_init__(self):
        G = self.model.graph
        missing = [v for v in G.vertices if v not in self.values]
        if missing:
            raise ValueError(f"no value at vertices {missing}")
        for e in G.edges:
            s = (self.values[e.head] - self.values[e.tail]) / e.length
            if s.denominator != 1:
                raise NonIntegerSlopeError(f"slope {s} on edge {e.id}")

    @property
    def graph(self) -> MetricGraph:
        return self.model.base

    def slope(self, model_edge: str) -> int:
        e = self.model.graph.edge(model_edge)
        return int((self.values[e.head] - self.values[e.tail]) / e.length)

    def outgoing_slope(self, model_edge: str, sign: int) -> int:
        return sign * self.slope(model_edge)

    def __call__(self, p: GraphPoint) -> Fraction:
        q = self.model.to_model(p)
        if q.is_vertex:
            return self.values[q.vertex]
        e = self.model.graph.edge(q.edge)
        return self.values[e.tail] + self.slope(e.id) * q.offset

    def max_value(self) -> Fraction:
        return max(self.values.values())

    def _combine(self, other: "PLFunction", op) -> "PLFunction":
        pts = self.model.vertex_points() + other.model.vertex_points()
        M = refine(self.graph, pts)
        return PLFunction(M, {v: op(self(p), other(p)) for v, p in M.point_of.items()})

    def __add__(self, other):
        if isinstance(other, PLFunction):
            return self._combine(other, lambda a, b: a + b)
        return PLFunction(self.model, {v: x + Fraction(other) for v, x in self.values.items()})

    def __sub__(self, other):
        if isinstance(other, PLFunction):
            return self._combine(other, lambda a, b: a - b)
        return self + (-Fraction(other))

    def __neg__(self):
        return PLFunction(self.model, {v: -x for v, x in self.values.items()})

    def __mul__(self, k: int):
        if int(k) != k:
            raise NonIntegerSlopeError("only integer multiples keep slopes integral")
        return PLFunction(self.model, {v: int(k) * x for v, x in self.values.items()})

    __rmul__ = __mul__


def constant(G: MetricGraph, c=0) -> PLFunction:
    M = refine(G)
    return PLFunction(M, {v: Fraction(c) for v in M.graph.vertices})


def from_values(G: MetricGraph, values: dict[GraphPoint, Fraction]) -> PLFunction:
    """Function that is affine between the given points (which must include every vertex)."""
    M = refine(G, values.keys())
    return PLFunction(M, {M.vertex_of[p]: Fraction(x) for p, x in values.items()})


def divisor_of(f: PLFunction) -> Divisor:
    """At every point, the sum of the outgoing slopes."""
    G = f.model.graph
    coeffs = {}
    for v in G.vertices:
        coeffs[f.model.point_of[v]] = sum(f.outgoing_slope(eid, s) for eid, s in G.ends(v))
    return Divisor(coeffs)


def residue_check(f: PLFunction, U: Subgraph) -> bool:
    """Degree of (f) inside U equals the sum of outward slopes at its boundary."""
    if U.model is not f.model:
        raise ValueError("subgraph must live on the function's model")
    G = f.model.graph
    D = divisor_of(f)
    boundary = U.boundary()
    for z in boundary:
        if D[f.model.point_of[z]] != 0:
            raise BoundaryError(f"boundary point {z} carries a point of (f)")
    inner = sum(D[f.model.point_of[v]] for v in U.interior_vertices())
    outward = sum(
        f.outgoing_slope(eid, s) for z in boundary for eid, s in G.ends(z) if eid not in U.edges
    )
    return inner == outward


def max_locus(f: PLFunction) -> Subgraph:
    """Closed subgraph where f attains its maximum."""
    top = f.max_value()
    G = f.model.graph
    vs = {v for v in G.vertices if f.values[v] == top}
    es = {e.id for e in G.edges if e.tail in vs and e.head in vs}
    return Subgraph(f.model, frozenset(es), frozenset(vs))


def distance_function(
    G: MetricGraph,
    sources: Subgraph | Iterable[GraphPoint],
    cap: Fraction | None = None,
) -> PLFunction:
    """x -> min(cap, dist(x, sources)); slopes are -1, 0 or 1."""
    if isinstance(sources, Subgraph):
        S = sources
    else:
        pts = list(sources)
        M0 = refine(G, pts)
        S = Subgraph.from_edges(M0, (), [M0.vertex_of[p] for p in pts])
    M = S.model
    H = M.graph
    # multi-source Dijkstra via a virtual root
    dist: dict[str, Fraction] = {}
    for v in S.vertices:
        for v2, d in vertex_distances(H, v).items():
            if v2 not in dist or d < dist[v2]:
                dist[v2] = d

    def value_on(meid: str, t: Fraction) -> Fraction:
        e = H.edge(meid)
        if meid in S.edges:
            d = Fraction(0)
        else:
            d = min(dist[e.tail] + t, dist[e.head] + e.length - t)
        return d if cap is None else min(cap, d)

    cuts: list[GraphPoint] = list(M.vertex_points())
    for e in H.edges:
        if e.id in S.edges:
            continue
        ts = set()
        mid = (dist[e.head] + e.length - dist[e.tail]) / 2
        ts.add(mid)
        if cap is not None:
            ts.add(cap - dist[e.tail])
            ts.add(e.length - (cap - dist[e.head]))
        seg = M.segment[e.id]
        for t in ts:
            if 0 < t < e.length:
                cuts.append(G.point(seg.base_edge, seg.start + t))
    R = refine(G, cuts)
    values = {}
    for v, p in R.point_of.items():
        q = M.to_model(p)
        if q.is_vertex:
            d = dist[q.vertex] if cap is None else min(cap, dist[q.vertex])
            values[v] = d
        else:
            values[v] = value_on(q.edge, q.offset)
    return PLFunction(R, values)


def equivalence_witness(
    J: Jacobian,
    D: Divisor,
    E: Divisor,
    base: GraphPoint,
    edge_order: Sequence[str] | None = None,
) -> PLFunction | None:
    """A function f with divisor_of(f) == D - E, or None when D and E are not equivalent.

    Pairs the points of D - E, joins each pair by a path in a spanning tree of
    the model refined at all support points, corrects the chain by an integer
    combination of basis cycles so that it pairs to zero with every cycle,
    and integrates the chain against paths from ``base``. ``edge_order``
    changes the spanning tree (and so the paths) without changing the result.
    """
    if D.degree != E.degree:
        raise DegreeMismatchError(f"degrees {D.degree} and {E.degree}")
    G = J.graph
    M = refine(G, list(D.support) + list(E.support) + [base])
    H = M.graph
    delta = D - E
    pos = [p for p, a in delta.items() if a > 0 for _ in range(a)]
    neg = [p for p, a in delta.items() if a < 0 for _ in range(-a)]

    tree = set(H.spanning_tree(edge_order))
    root = H.vertices[0]
    chains: dict[str, dict[str, int]] = {root: {}}
    todo = [root]
    while todo:
        x = todo.pop()
        for eid, sign in H.ends(x):
            y = H.other_end(eid, sign)
            if eid in tree and y not in chains:
                c = dict(chains[x])
                c[eid] = c.get(eid, 0) + sign
                chains[y] = c
                todo.append(y)

    density: dict[str, int] = defaultdict(int)
    for p, q in zip(pos, neg):
        for eid, k in chains[M.vertex_of[q]].items():
            density[eid] += k
        for eid, k in chains[M.vertex_of[p]].items():
            density[eid] -= k

    dirs = J.basis.directions
    g = J.g
    pairing = [Fraction(0)] * g
    for eid, k in density.items():
        w = dirs[M.segment[eid].base_edge]
        length = H.edge(eid).length
        for i in range(g):
            pairing[i] += k * length * w[i]
    m = J.Q.solve([-x for x in pairing]) if g else ()
    if any(x.denominator != 1 for x in m):
        return None
    for e in H.edges:
        w = dirs[M.segment[e.id].base_edge]
        density[e.id] += sum(int(mi) * wi for mi, wi in zip(m, w))

    start = M.vertex_of[base]
    values = {start: Fraction(0)}
    todo = [start]
    while todo:
        x = todo.pop()
        for eid, sign in H.ends(x):
            y = H.other_end(eid, sign)
            if y not in values:
                values[y] = values[x] + sign * density[eid] * H.edge(eid).length
                todo.append(y)
    for e in H.edges:
        if values[e.head] - values[e.tail] != density[e.id] * e.length:
            raise FiringError("witness chain does not close up")  # pragma: no cover
    return PLFunction(M, values)


def random_pl_function(G: MetricGraph, rng, terms: int = 3, denom: int = 4) -> PLFunction:
    """Integer combination of capped distance functions to random points."""
    f = constant(G, 0)
    for _ in range(terms):
        p = random_point(G, rng, denom)
        cap = Fraction(rng.randint(1, 3 * denom), denom)
        f = f + rng.choice([-2, -1, 1, 2]) * distance_function(G, [p], cap)
    return f


def random_point(G: MetricGraph, rng, denom: int = 4) -> GraphPoint:
    if rng.random() < 0.2:
        return G.vertex(rng.choice(G.vertices))
    e = rng.choice(G.edges)
    q = rng.randint(1, denom * 8)
    t = e.length * Fraction(q, denom * 8 + 1)
    return G.point(e.id, t)


__all__ = [
    "PLFunction",
    "constant",
    "divisor_of",
    "distance_function",
    "equivalence_witness",
    "from_values",
    "max_locus",
    "random_pl_function",
    "random_point",
    "residue_check",
]
