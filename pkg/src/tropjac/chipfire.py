"""Chip-firing on metric graphs: reduced divisors, rank, moderators.

Everything here is combinatorial: divisors are pushed around by firing
closed subsets, and the only call into the theta side is the effectivization
step of :func:`reduce_divisor` for divisors with debt away from the base point.
"""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BoundExceededError,
    CyclicOrientationError,
    DegreeMismatchError,
    FiringError,
    IterationCapExceeded,
    MalformedDomainError,
    NegativeChipError,
    RankAuditError,
)
from .graph import (
    Divisor,
    GraphPoint,
    MetricGraph,
    Model,
    Subgraph,
    canonical_divisor,
    refine,
)
from .homology import Jacobian
from .inversion import canonical_effective, is_break_divisor
from .plfunc import PLFunction, distance_function, random_point

DEFAULT_ITER_CAP = 10**6


def iteration_cap() -> int:
    return int(os.environ.get("TROPJAC_ITER_CAP", DEFAULT_ITER_CAP))


@dataclass(frozen=True, eq=False)
class BurningResult:
    """Outcome of Dhar's burning test on the model refined at supp(D) and p."""

    model: Model
    divisor: Divisor
    base: GraphPoint
    burnt: frozenset[str]
    # unburnt vertex -> number of its edge-ends leading into the fire
    boundary: dict[str, int]

    @property
    def unburnt(self) -> frozenset[str]:
        return frozenset(v for v in self.model.graph.vertices if v not in self.burnt)

    @property
    def all_burnt(self) -> bool:
        return len(self.burnt) == len(self.model.graph.vertices)

    def unburnt_subgraph(self) -> Subgraph:
        A = self.unburnt
        H = self.model.graph
        es = [e.id for e in H.edges if e.tail in A and e.head in A]
        return Subgraph.from_edges(self.model, es, A)


def dhar_burn(G: MetricGraph, D: Divisor, p: GraphPoint) -> BurningResult:
    """Start a fire at p; a vertex burns once more fire fronts reach it than it holds chips."""
    for q, a in D.items():
        if a < 0 and q != p:
            raise NegativeChipError(f"coefficient {a} at {q}")
    M = refine(G, list(D.support) + [p], split_loops=True)
    H = M.graph
    chips = {v: D[M.point_of[v]] for v in H.vertices}
    start = M.vertex_of[p]
    burnt = {start}
    fronts = {v: 0 for v in H.vertices}
    todo = [start]
    while todo:
        x = todo.pop()
        for eid, sign in H.ends(x):
            y = H.other_end(eid, sign)
            if y in burnt:
                continue
            fronts[y] += 1
            if fronts[y] > chips[y]:
                burnt.add(y)
                todo.append(y)
    boundary = {v: fronts[v] for v in H.vertices if v not in burnt and fronts[v]}
    return BurningResult(M, D, p, frozenset(burnt), boundary)


def _fire(burning: BurningResult) -> tuple[Divisor, Fraction]:
    M = burning.model
    H = M.graph
    burnt = burning.burnt
    if burning.all_burnt:
        raise FiringError("nothing to fire: the whole graph burns")
    moves = []
    for e in H.edges:
        if (e.tail in burnt) == (e.head in burnt):
            continue
        moves.append((e, +1 if e.head in burnt else -1))
    eps = min(e.length for e, _ in moves)
    if eps <= 0:  # pragma: no cover
        raise FiringError("zero firing distance")
    G = M.base
    coeffs = dict(burning.divisor.items())
    for e, sign in moves:
        seg = M.segment[e.id]
        src = M.point_of[e.tail if sign > 0 else e.head]
        dst = G.point(seg.base_edge, seg.start + eps if sign > 0 else seg.end - eps)
        coeffs[src] = coeffs.get(src, 0) - 1
        coeffs[dst] = coeffs.get(dst, 0) + 1
    return Divisor(coeffs), eps


def fire_unburnt(G: MetricGraph, D: Divisor, burning: BurningResult) -> tuple[Divisor, PLFunction, Fraction]:
    """Fire the unburnt set by the largest step that keeps the model combinatorics.

    Returns (new divisor, witness, eps) with divisor_of(witness) == D - new,
    the witness being min(eps, distance to the unburnt set).
    """
    if burning.divisor != D:
        raise FiringError("burning result belongs to another divisor")
    new, eps = _fire(burning)
    witness = distance_function(G, burning.unburnt_subgraph(), cap=eps)
    return new, witness, eps


def effectivize(J: Jacobian, D: Divisor, p: GraphPoint) -> Divisor:
    """An equivalent divisor that is effective away from p (via the theta side)."""
    if D.effective_away_from(p):
        return D
    k = J.g - D.degree
    kp = Divisor({p: k})
    return canonical_effective(J, D + kp) - kp


def _reduce_effective(G: MetricGraph, D: Divisor, p: GraphPoint, cap: int) -> Divisor:
    for _ in range(cap):
        burning = dhar_burn(G, D, p)
        if burning.all_burnt:
            return D
        D, _ = _fire(burning)
    raise IterationCapExceeded(f"no p-reduced divisor after {cap} firings")


def reduce_divisor(J: Jacobian, D: Divisor, p: GraphPoint, cap: int | None = None) -> Divisor:
    """The p-reduced divisor equivalent to D."""
    J.graph.check_point(p)
    cap = iteration_cap() if cap is None else cap
    return _reduce_effective(J.graph, effectivize(J, D, p), p, cap)


def linear_system_nonempty(J: Jacobian, D: Divisor, p: GraphPoint | None = None) -> bool:
    if D.degree < 0:
        return False
    p = p if p is not None else J.graph.vertex(J.graph.vertices[0])
    E = effectivize(J, D, p)
    if E[p] >= 0:
        return True
    return reduce_divisor(J, E, p)[p] >= 0


def candidate_points(G: MetricGraph, D: Divisor, p: GraphPoint) -> list[GraphPoint]:
    """Vertices of the loop-free model refined at supp(D) and p."""
    return refine(G, list(D.support) + [p], split_loops=True).vertex_points()


def rank(
    J: Jacobian,
    D: Divisor,
    p: GraphPoint | None = None,
    audit: int = 50,
    seed: int = 0,
) -> int:
    """Baker-Norine rank, with subtracted points drawn from the model vertices.

    ``audit`` random effective divisors of degree r with arbitrary rational
    points are subtracted afterwards; if one empties the linear system the
    candidate set was not rank-determining and RankAuditError is raised.
    """
    G = J.graph
    p = p if p is not None else G.vertex(G.vertices[0])
    if not linear_system_nonempty(J, D, p):
        return -1
    cap = iteration_cap()
    S = candidate_points(G, D, p)
    E = effectivize(J, D, p)
    E = _reduce_effective(G, E, p, cap)
    if E[p] < 0:  # pragma: no cover
        raise FiringError("nonempty class without effective reduced form")
    memo: dict[Divisor, int] = {}

    def rank_effective(E: Divisor) -> int:
        key = _reduce_effective(G, E, p, cap)
        if key in memo:
            return memo[key]
        children = []
        for s in S:
            F = _reduce_effective(G, E, s, cap)
            if F[s] <= 0:
                memo[key] = 0
                return 0
            children.append(F - Divisor({s: 1}))
        best = None
        for child in children:
            r = rank_effective(child)
            best = r if best is None else min(best, r)
            if best == 0:
                break
        memo[key] = 1 + best
        return 1 + best

    r = rank_effective(E)
    if audit and r > 0:
        rng = random.Random(seed)
        for _ in range(audit):
            R = [random_point(G, rng) for _ in range(r)]
            if not _subtract_all(G, E, R, cap):
                raise RankAuditError(f"|D - R| empty for R = {Divisor.of_points(R)} although rank(D) = {r}")
    return r


def _subtract_all(G: MetricGraph, E: Divisor, points: Iterable[GraphPoint], cap: int) -> bool:
    """For effective E: is |E - sum(points)| nonempty?"""
    for q in points:
        F = _reduce_effective(G, E, q, cap)
        if F[q] <= 0:
            return False
        E = F - Divisor({q: 1})
    return True


def riemann_roch_data(J: Jacobian, D: Divisor, p: GraphPoint | None = None, audit: int = 50) -> tuple[int, int, int]:
    """(deg D, rank D, rank K-D)."""
    K = canonical_divisor(J.graph)
    return D.degree, rank(J, D, p, audit=audit), rank(J, K - D, p, audit=audit)


def riemann_roch_check(J: Jacobian, D: Divisor, p: GraphPoint | None = None, audit: int = 50) -> bool:
    d, r, rk = riemann_roch_data(J, D, p, audit)
    return r - rk == d - J.g + 1


@dataclass(frozen=True, eq=False)
class AcyclicOrientation:
    """Orientation of every model edge; sign +1 keeps tail -> head."""

    model: Model
    signs: tuple[int, ...]

    def __post_init__(self):
        H = self.model.graph
        if len(self.signs) != len(H.edges):
            raise CyclicOrientationError("one sign per model edge required")
        if not _is_acyclic(H, self.signs):
            raise CyclicOrientationError("orientation has a directed cycle")

    def arcs(self) -> list[tuple[str, str]]:
        return [(e.tail, e.head) if s > 0 else (e.head, e.tail) for e, s in zip(self.model.graph.edges, self.signs)]

    def reversed(self) -> "AcyclicOrientation":
        return AcyclicOrientation(self.model, tuple(-s for s in self.signs))


def _is_acyclic(H: MetricGraph, signs: Sequence[int]) -> bool:
    indeg = {v: 0 for v in H.vertices}
    out: dict[str, list[str]] = {v: [] for v in H.vertices}
    for e, s in zip(H.edges, signs):
        a, b = (e.tail, e.head) if s > 0 else (e.head, e.tail)
        if a == b:
            return False
        out[a].append(b)
        indeg[b] += 1
    ready = [v for v in H.vertices if indeg[v] == 0]
    seen = 0
    while ready:
        x = ready.pop()
        seen += 1
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    return seen == len(H.vertices)


def moderator(orientation: AcyclicOrientation) -> Divisor:
    """Sum over model vertices of (outdegree - 1) v."""
    M = orientation.model
    outdeg = {v: 0 for v in M.graph.vertices}
    for a, _ in orientation.arcs():
        outdeg[a] += 1
    return Divisor({M.point_of[v]: k - 1 for v, k in outdeg.items()})


def enumerate_acyclic_orientations(model: Model, max_edges: int = 16) -> list[AcyclicOrientation]:
    """All acyclic orientations of the model graph, in lexicographic sign order."""
    H = model.graph
    if len(H.edges) > max_edges:
        raise BoundExceededError(f"{len(H.edges)} edges exceeds the bound {max_edges}")
    return [
        AcyclicOrientation(model, signs)
        for signs in itertools.product((1, -1), repeat=len(H.edges))
        if _is_acyclic(H, signs)
    ]


def dichotomy_check(J: Jacobian, D: Divisor, p: GraphPoint | None = None, max_edges: int = 16) -> bool:
    """Exactly one of |D| and some |K_+ - D| is nonempty.

    For degree g-1 a non-effective p-reduced form must moreover be one of the
    enumerated moderators.
    """
    G = J.graph
    p = p if p is not None else G.vertex(G.vertices[0])
    nu = reduce_divisor(J, D, p)
    first = nu[p] >= 0
    M = refine(G, list(D.support) + list(nu.support) + [p], split_loops=True)
    mods = [moderator(o) for o in enumerate_acyclic_orientations(M, max_edges)]
    second = any(linear_system_nonempty(J, K - D, p) for K in mods)
    ok = first != second
    if D.degree == J.g - 1 and not first:
        ok = ok and nu in set(mods)
    return ok


def _model_end(M: Model, z: GraphPoint, tangent: tuple[str, int]) -> tuple[str, int]:
    """Model edge-end leaving z in direction (base edge, sign)."""
    G = M.base
    eid, sign = tangent
    if not G.has_edge(eid) or sign not in (1, -1):
        raise MalformedDomainError(f"invalid tangent {tangent}")
    e = G.edge(eid)
    if z.is_vertex:
        if sign > 0 and e.tail == z.vertex:
            return M.pieces[eid][0], +1
        if sign < 0 and e.head == z.vertex:
            return M.pieces[eid][-1], -1
        raise MalformedDomainError(f"tangent {tangent} does not leave {z}")
    if z.edge != eid:
        raise MalformedDomainError(f"tangent {tangent} does not leave {z}")
    v = M.vertex_of[z]
    for meid in M.pieces[eid]:
        me = M.graph.edge(meid)
        if sign > 0 and me.tail == v:
            return meid, +1
        if sign < 0 and me.head == v:
            return meid, -1
    raise MalformedDomainError(f"tangent {tangent} not found at {z}")  # pragma: no cover


def pseudo_break_divisor(G: MetricGraph, cuts: Sequence[tuple[GraphPoint, tuple[str, int]]]) -> Divisor:
    """Valence defect of the domain obtained by detaching the given tangent directions.

    Each cut (z, (edge, sign)) separates one edge-end at z from the point z.
    The pieces must form a forest; the divisor puts at each z the number of
    ends detached there.
    """
    M = refine(G, [z for z, _ in cuts], split_loops=True)
    H = M.graph
    detached = set()
    for z, t in cuts:
        end = _model_end(M, G.check_point(z), t)
        if end in detached:
            raise MalformedDomainError(f"tangent {t} at {z} cut twice")
        detached.add(end)
    parent: dict[object, object] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in H.edges:
        a = ("cut", e.id, 1) if (e.id, 1) in detached else e.tail
        b = ("cut", e.id, -1) if (e.id, -1) in detached else e.head
        ra, rb = find(a), find(b)
        if ra == rb:
            raise MalformedDomainError("the domain still contains a cycle")
        parent[ra] = rb
    return Divisor((z, 1) for z, _ in cuts)


def spanning_tree_domain(G: MetricGraph) -> list[tuple[GraphPoint, tuple[str, int]]]:
    """Cut every edge outside a spanning tree at its midpoint."""
    tree = set(G.spanning_tree())
    return [(G.point(e.id, e.length / 2), (e.id, +1)) for e in G.edges if e.id not in tree]


def support_lemma_check(
    J: Jacobian,
    region: Subgraph,
    D_b: Divisor,
    samples: int = 10,
    seed: int = 0,
) -> bool:
    """Every sampled q in a proper connected subgraph lies in supp|D_b + boundary|.

    ``region`` lives on a model of J.graph and ``D_b`` (base-graph points
    inside the region) must be a break divisor of the region.
    """
    M = region.model
    if not region.is_connected() or not region.is_proper():
        raise MalformedDomainError("region must be a proper connected subgraph")
    sub = region.as_graph()
    local = Divisor({M.to_model(p): a for p, a in D_b.items()})
    if local.degree != sub.genus:
        raise DegreeMismatchError(f"break divisor of degree {local.degree} on a genus {sub.genus} region")
    for q in local.support:
        if (q.is_vertex and q.vertex not in region.vertices) or (not q.is_vertex and q.edge not in region.edges):
            raise MalformedDomainError(f"{q} lies outside the region")
    if not is_break_divisor(sub, local):
        raise MalformedDomainError("not a break divisor of the region")
    D = D_b + region.boundary_divisor()
    rng = random.Random(seed)
    qs = [M.point_of[v] for v in sorted(region.vertices)]
    H = M.graph
    edges = sorted(region.edges)
    for _ in range(samples if edges else 0):
        e = H.edge(rng.choice(edges))
        t = e.length * Fraction(rng.randint(1, 30), 31)
        qs.append(M.to_base(GraphPoint(edge=e.id, offset=t)))
    return all(linear_system_nonempty(J, D - Divisor({q: 1}), q) for q in qs)


__all__ = [
    "AcyclicOrientation",
    "BurningResult",
    "DEFAULT_ITER_CAP",
    "candidate_points",
    "dhar_burn",
    "dichotomy_check",
    "effectivize",
    "enumerate_acyclic_orientations",
    "fire_unburnt",
    "iteration_cap",
    "linear_system_nonempty",
    "moderator",
    "pseudo_break_divisor",
    "rank",
    "reduce_divisor",
    "riemann_roch_check",
    "riemann_roch_data",
    "spanning_tree_domain",
    "support_lemma_check",
]
