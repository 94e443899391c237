"""Cycle bases, the period matrix and the Abel-Jacobi map.

Coordinates on the Jacobian: a 1-chain c is recorded by its pairings
u_i = Q(gamma_i, c) against the fundamental cycles. In these coordinates the
period lattice is Q Z^g and every quantity stays rational.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _linalg as la
from .errors import NotPositiveDefiniteError
from .graph import Divisor, GraphPoint, MetricGraph

JacobianPoint = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a spanning tree.

    ``coefficients[i]`` maps edge id -> integer coefficient of gamma_i; the
    cycle uses non-tree edge ``non_tree[i]`` with coefficient +1.
    """

    graph: MetricGraph
    tree: tuple[str, ...]
    non_tree: tuple[str, ...]
    coefficients: tuple[tuple[tuple[str, int], ...], ...]

    @property
    def g(self) -> int:
        return len(self.non_tree)

    def coefficient(self, i: int, edge: str) -> int:
        return dict(self.coefficients[i]).get(edge, 0)

    @cached_property
    def directions(self) -> dict[str, tuple[int, ...]]:
        """Per edge, the pairing rate against each gamma_i per unit length."""
        cs = [dict(c) for c in self.coefficients]
        return {e.id: tuple(c.get(e.id, 0) for c in cs) for e in self.graph.edges}

    @cached_property
    def tree_chains(self) -> dict[str, dict[str, int]]:
        """Signed tree path from the root (first vertex) to every vertex."""
        G = self.graph
        tree = set(self.tree)
        root = G.vertices[0]
        chains = {root: {}}
        todo = [root]
        while todo:
            x = todo.pop()
            for eid, sign in G.ends(x):
                if eid not in tree:
                    continue
                y = G.other_end(eid, sign)
                if y in chains:
                    continue
                c = dict(chains[x])
                c[eid] = c.get(eid, 0) + sign
                chains[y] = c
                todo.append(y)
        return chains

    @cached_property
    def vertex_lifts(self) -> dict[str, JacobianPoint]:
        G = self.graph
        out = {}
        for v, chain in self.tree_chains.items():
            u = [Fraction(0)] * self.g
            for eid, k in chain.items():
                w = self.directions[eid]
                length = G.edge(eid).length
                for i in range(self.g):
                    u[i] += k * length * w[i]
            out[v] = tuple(u)
        return out

    def lift(self, p: GraphPoint) -> JacobianPoint:
        """Coordinates of p reached from the root through the tree (then along p's edge)."""
        if p.is_vertex:
            return self.vertex_lifts[p.vertex]
        e = self.graph.edge(p.edge)
        return la.vadd(self.vertex_lifts[e.tail], la.vscale(p.offset, self.directions[e.id]))


def cycle_basis(G: MetricGraph, edge_order: Sequence[str] | None = None) -> CycleBasis:
    tree = G.spanning_tree(edge_order)
    in_tree = set(tree)
    order = list(edge_order) if edge_order else [e.id for e in G.edges]
    order += [e.id for e in G.edges if e.id not in order]
    non_tree = [eid for eid in order if eid not in in_tree]
    partial = CycleBasis(G, tuple(tree), (), ())
    chains = partial.tree_chains
    coeffs = []
    for eid in non_tree:
        e = G.edge(eid)
        c: dict[str, int] = {eid: 1}
        # close e (tail -> head) through the tree back from head to tail
        for tid, k in chains[e.tail].items():
            c[tid] = c.get(tid, 0) + k
        for tid, k in chains[e.head].items():
            c[tid] = c.get(tid, 0) - k
        coeffs.append(tuple((x, k) for x, k in sorted(c.items()) if k))
    return CycleBasis(G, tuple(tree), tuple(non_tree), tuple(coeffs))


class PeriodMatrix:
    """Symmetric positive definite rational g x g matrix (the length pairing)."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows: la.Matrix = la.as_matrix(rows)
        self.g = len(self.rows)
        if any(len(r) != self.g for r in self.rows):
            raise NotPositiveDefiniteError("period matrix must be square")
        if self.g:
            self.ldl  # validates symmetry and definiteness

    @cached_property
    def ldl(self):
        return la.ldl(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, PeriodMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"PeriodMatrix({format_matrix(self.rows)})"

    def apply(self, v: Sequence) -> JacobianPoint:
        return la.matvec(self.rows, v)

    def solve(self, v: Sequence) -> JacobianPoint:
        return la.solve(self.rows, v) if self.g else ()

    def quad(self, v: Sequence) -> Fraction:
        return la.quad(self.rows, v)


def as_period_matrix(Q) -> PeriodMatrix:
    return Q if isinstance(Q, PeriodMatrix) else PeriodMatrix(Q)


def format_matrix(rows) -> str:
    return "[" + ",".join("[" + ",".join(la.fmt_fraction(x) for x in r) + "]" for r in rows) + "]"


def period_matrix(basis: CycleBasis) -> PeriodMatrix:
    """Q_ij = sum over edges of a_i(E) a_j(E) l(E)."""
    G = basis.graph
    g = basis.g
    cs = [dict(c) for c in basis.coefficients]
    rows = [[Fraction(0)] * g for _ in range(g)]
    for e in G.edges:
        for i in range(g):
            ai = cs[i].get(e.id, 0)
            if not ai:
                continue
            for j in range(g):
                rows[i][j] += ai * cs[j].get(e.id, 0) * e.length
    return PeriodMatrix(rows)


@dataclass(eq=False)
class Jacobian:
    """A metric graph together with a cycle basis and its period matrix."""

    graph: MetricGraph
    basis: CycleBasis
    Q: PeriodMatrix
    _kappa: dict = field(default_factory=dict, repr=False)

    @classmethod
    def of(cls, G: MetricGraph, edge_order: Sequence[str] | None = None) -> "Jacobian":
        basis = cycle_basis(G, edge_order)
        return cls(G, basis, period_matrix(basis))

    @property
    def g(self) -> int:
        return self.basis.g

    def zero(self) -> JacobianPoint:
        return tuple(Fraction(0) for _ in range(self.g))

    def lift(self, p: GraphPoint, base: GraphPoint) -> JacobianPoint:
        return la.vsub(self.basis.lift(p), self.basis.lift(base))

    def aj(self, D: Divisor, base: GraphPoint) -> JacobianPoint:
        return abel_jacobi(self, D, base)

    def equal(self, u: Sequence, v: Sequence) -> bool:
        return jac_equal(u, v, self.Q)


def abel_jacobi(J: Jacobian, D: Divisor, base: GraphPoint) -> JacobianPoint:
    """Sum of a * Q(gamma_i, path from base to p) over the points of D."""
    J.graph.check_point(base)
    u = J.zero()
    b = J.basis.lift(base)
    for p, a in D.items():
        u = la.vadd(u, la.vscale(a, la.vsub(J.basis.lift(p), b)))
    return u


def lattice_coordinates(u: Sequence, Q) -> JacobianPoint:
    return as_period_matrix(Q).solve(u)


def jac_equal(u: Sequence, v: Sequence, Q) -> bool:
    """Do u and v differ by an element of Q Z^g?"""
    Q = as_period_matrix(Q)
    if len(u) != Q.g or len(v) != Q.g:
        raise ValueError("dimension mismatch")
    return all(x.denominator == 1 for x in Q.solve(la.vsub(u, v)))


def is_principal(J: Jacobian, D: Divisor, base: GraphPoint | None = None) -> bool:
    if D.degree != 0:
        return False
    base = base if base is not None else J.graph.vertex(J.graph.vertices[0])
    return jac_equal(abel_jacobi(J, D, base), J.zero(), J.Q)
