"""Pulling the theta divisor back to the curve.

Along an edge E the lifted Abel-Jacobi map is affine, u(t) = u(tail) + t w_E,
with w_E the integer vector of cycle coefficients of E. Hence
t -> Theta(u(t) - lambda) is a convex maximum of affine functions with integer
slopes n.w_E, and its divisor on the curve is effective. Interior breakpoints
come from the exact upper envelope on each edge; vertex orders are the sums of
outgoing one-sided slopes, evaluated with one consistent lift at the vertex.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .errors import DegreeMismatchError, KappaConstancyError
from .graph import Divisor, GraphPoint, MetricGraph, refine
from .homology import Jacobian, JacobianPoint, abel_jacobi, jac_equal
from .theta import ThetaValue, on_theta_divisor, theta


@dataclass(frozen=True)
class Breakpoint:
    offset: Fraction
    left_slope: int
    right_slope: int

    @property
    def multiplicity(self) -> int:
        return self.right_slope - self.left_slope


@dataclass(frozen=True)
class EdgeEnvelope:
    edge: str
    direction: tuple[int, ...]
    breakpoints: tuple[Breakpoint, ...]


def _default_base(J: Jacobian, base: GraphPoint | None) -> GraphPoint:
    return base if base is not None else J.graph.vertex(J.graph.vertices[0])


def edge_envelope(J: Jacobian, edge: str, base: GraphPoint, lam: Sequence) -> EdgeEnvelope:
    """Breakpoints of t -> Theta(u(t) - lam) strictly inside ``edge``.

    The envelope is found by recursive tangent intersection: with the piece
    active just right of a and the piece active just left of b, their
    intersection t* either lies on the envelope (a single breakpoint) or
    exposes a new piece there. Convexity makes each step exact.
    """
    G = J.graph
    e = G.edge(edge)
    w = J.basis.directions[edge]
    u0 = la.vsub(J.lift(G.vertex(e.tail), base), lam)

    def at(t: Fraction) -> ThetaValue:
        return theta(J.Q, la.vadd(u0, la.vscale(t, w)))

    out: list[Breakpoint] = []

    def rec(a, fa, sa, b, fb, sb):
        if sa == sb:
            return
        t = (fb - fa + sa * a - sb * b) / (sa - sb)
        on_a = fa + sa * (t - a)
        tv = at(t)
        if tv.value == on_a:
            out.append(Breakpoint(t, int(sa), int(sb)))
            return
        lo, hi = tv.slope_range(w)
        rec(a, fa, sa, t, tv.value, lo)
        if hi > lo:
            out.append(Breakpoint(t, int(lo), int(hi)))
        rec(t, tv.value, hi, b, fb, sb)

    left, right = at(Fraction(0)), at(e.length)
    rec(Fraction(0), left.value, left.slope_range(w)[1], e.length, right.value, right.slope_range(w)[0])
    out.sort(key=lambda bp: bp.offset)
    return EdgeEnvelope(edge, w, tuple(out))


def vertex_order(J: Jacobian, v: str, base: GraphPoint, lam: Sequence) -> int:
    """Sum of outgoing slopes of the pulled-back theta function at vertex v."""
    G = J.graph
    tv = theta(J.Q, la.vsub(J.lift(G.vertex(v), base), lam))
    total = Fraction(0)
    for eid, sign in G.ends(v):
        w = J.basis.directions[eid]
        total += tv.slope_range(la.vscale(sign, w))[1]
    return int(total)


def pullback_theta(J: Jacobian, base: GraphPoint | None, lam: Sequence) -> Divisor:
    """D_lambda: the divisor of x -> Theta(mu(x) - lambda) on the curve."""
    base = _default_base(J, base)
    G = J.graph
    lam = la.as_vector(lam)
    coeffs: dict[GraphPoint, int] = {}
    for v in G.vertices:
        coeffs[G.vertex(v)] = vertex_order(J, v, base, lam)
    for e in G.edges:
        for bp in edge_envelope(J, e.id, base, lam).breakpoints:
            coeffs[G.point(e.id, bp.offset)] = bp.multiplicity
    return Divisor(coeffs)


def kappa(J: Jacobian, base: GraphPoint | None = None, probes: int = 3, seed: int = 0) -> JacobianPoint:
    """The Jacobi inversion constant: lambda - mu(D_lambda), computed at lambda = 0.

    The value is checked against ``probes`` random lambdas; a disagreement
    raises KappaConstancyError. Results are cached on J per base point.
    """
    base = _default_base(J, base)
    if base in J._kappa:
        return J._kappa[base]
    k = la.vsub(J.zero(), abel_jacobi(J, pullback_theta(J, base, J.zero()), base))
    rng = random.Random(seed)
    for _ in range(probes):
        lam = random_jacobian_point(J, rng)
        other = la.vsub(lam, abel_jacobi(J, pullback_theta(J, base, lam), base))
        if not jac_equal(k, other, J.Q):
            raise KappaConstancyError(f"kappa {k} vs {other} at lambda={lam}")
    J._kappa[base] = k
    return k


def random_jacobian_point(J: Jacobian, rng: random.Random, denom: int = 7) -> JacobianPoint:
    coords = [Fraction(rng.randint(-3 * denom, 3 * denom), denom) for _ in range(J.g)]
    return J.Q.apply(coords)


def canonical_effective(J: Jacobian, D: Divisor, base: GraphPoint | None = None) -> Divisor:
    """The base-independent effective representative D_{mu(D)+kappa} of a degree-g class."""
    if D.degree != J.g:
        raise DegreeMismatchError(f"expected degree {J.g}, got {D.degree}")
    base = _default_base(J, base)
    lam = la.vadd(abel_jacobi(J, D, base), kappa(J, base))
    return pullback_theta(J, base, lam)


def theta_support_test(J: Jacobian, D: Divisor, q: GraphPoint, base: GraphPoint | None = None) -> bool:
    """Is q in the support of |D|?  Decided on the theta side."""
    if D.degree != J.g:
        raise DegreeMismatchError(f"expected degree {J.g}, got {D.degree}")
    base = _default_base(J, base)
    shift = la.vadd(abel_jacobi(J, D, base), kappa(J, base))
    return on_theta_divisor(J.Q, la.vsub(J.lift(q, base), shift))


def riemann_membership(J: Jacobian, c: Sequence, base: GraphPoint | None = None) -> bool:
    """Is the degree g-1 class with Abel-Jacobi image c effective?  (c + kappa on the theta divisor.)"""
    base = _default_base(J, base)
    return on_theta_divisor(J.Q, la.vadd(c, kappa(J, base)))


def break_directions(G: MetricGraph, D: Divisor) -> list[tuple[GraphPoint, tuple[str, int]]] | None:
    """A choice of break directions realising D as a break divisor, or None.

    Directions are (edge id, sign) of the loop-free model refined at supp(D);
    chips at one point take distinct directions and the cut edges must leave
    a spanning tree. Exhaustive over all assignments.
    """
    if not D.is_effective or D.degree != G.genus:
        return None
    M = refine(G, D.support, split_loops=True)
    H = M.graph
    per_point = []
    for p, k in D.items():
        v = M.vertex_of[p]
        ends = H.ends(v)
        if k > len(ends):
            return None
        per_point.append([(v, combo) for combo in itertools.combinations(ends, k)])
    root = H.vertices[0]
    for choice in itertools.product(*per_point):
        cut = [eid for _, combo in choice for eid, _ in combo]
        if len(set(cut)) != len(cut):
            continue
        if len(H.component_of(root, set(cut))) == len(H.vertices):
            return [(M.point_of[v], end) for v, combo in choice for end in combo]
    return None


def is_break_divisor(G: MetricGraph, D: Divisor) -> bool:
    return break_directions(G, D) is not None


def refined_residue_audit(J: Jacobian, base: GraphPoint | None, lam: Sequence) -> bool:
    """Check the vector-valued residue identity for the lifted theta pullback.

    On the fundamental domain T obtained by cutting every non-tree edge of the
    model refined at supp(D_lambda) at its midpoint, the lifted function
    f = Theta(u_T(x) - lambda) satisfies

        sum a_j u_T(p_j) = sum over cut ends z of (df/dnu(z) u_T(z) - f(z) nu),

    nu being the outward direction vector at the cut end.
    """
    base = _default_base(J, base)
    lam = la.as_vector(lam)
    G = J.graph
    D = pullback_theta(J, base, lam)
    M = refine(G, list(D.support) + [base], split_loops=True)
    H = M.graph
    tree = set(H.spanning_tree())
    dirs = {e.id: J.basis.directions[M.segment[e.id].base_edge] for e in H.edges}

    start = M.vertex_of[base]
    lift = {start: J.zero()}
    todo = [start]
    while todo:
        x = todo.pop()
        for eid, sign in H.ends(x):
            y = H.other_end(eid, sign)
            if eid in tree and y not in lift:
                lift[y] = la.vadd(lift[x], la.vscale(sign * H.edge(eid).length, dirs[eid]))
                todo.append(y)

    lhs = J.zero()
    for p, a in D.items():
        lhs = la.vadd(lhs, la.vscale(a, lift[M.vertex_of[p]]))

    rhs = J.zero()
    for e in H.edges:
        if e.id in tree:
            continue
        half = e.length / 2
        w = dirs[e.id]
        for anchor, nu in ((e.tail, w), (e.head, la.vscale(-1, w))):
            z = la.vadd(lift[anchor], la.vscale(half, nu))
            tv = theta(J.Q, la.vsub(z, lam))
            slope = tv.slope_range(nu)[1]
            rhs = la.vadd(rhs, la.vsub(la.vscale(slope, z), la.vscale(tv.value, nu)))
    return lhs == rhs


__all__ = [
    "Breakpoint",
    "EdgeEnvelope",
    "break_directions",
    "canonical_effective",
    "edge_envelope",
    "is_break_divisor",
    "kappa",
    "pullback_theta",
    "random_jacobian_point",
    "refined_residue_audit",
    "riemann_membership",
    "theta_support_test",
    "vertex_order",
]
