"""Command-line driver and JSON file formats.

Graph document::

    {"vertices": ["v1", "v2"],
     "edges": [{"id": "A", "ends": ["v1", "v2"], "length": "1/2"}, ...]}

Divisor document::

    {"entries": [{"vertex": "v1", "coeff": 2},
                 {"edge": "A", "offset": "1/3", "coeff": -1}]}

Rationals are written as strings ("p/q" or an integer); JSON floats are
rejected so that no lossy number type reaches the computation.
"""
from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Sequence

from . import chipfire, inversion
from ._linalg import fmt_fraction
from .errors import DegreeMismatchError, LeafVertexError, SchemaError, TropJacError
from .graph import Divisor, Edge, GraphPoint, MetricGraph, canonical_divisor, refine
from .homology import Jacobian, abel_jacobi, format_matrix
from .theta import canonical_point, theta


def parse_rational(x: Any, what: str = "value") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise SchemaError(f"{what} must be a rational string such as \"3/2\", got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{what}: cannot parse {x!r} as a rational") from exc


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"{where}: field {key!r} has the wrong type")
    return doc[key]


def graph_from_document(doc: Any) -> MetricGraph:
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be a JSON object")
    vertices = _require(doc, "vertices", list, "graph")
    if not all(isinstance(v, str) for v in vertices):
        raise SchemaError("vertex identifiers must be strings")
    edges = []
    for i, rec in enumerate(_require(doc, "edges", list, "graph")):
        where = f"edge #{i}"
        if not isinstance(rec, dict):
            raise SchemaError(f"{where} must be an object")
        eid = _require(rec, "id", str, where)
        ends = _require(rec, "ends", list, where)
        if len(ends) != 2 or not all(isinstance(v, str) for v in ends):
            raise SchemaError(f"{where}: ends must be two vertex identifiers")
        edges.append(Edge(eid, ends[0], ends[1], parse_rational(rec.get("length"), f"{where} length")))
    G = MetricGraph(sorted(vertices), sorted(edges, key=lambda e: e.id))
    if G.leaves():
        raise LeafVertexError(f"1-valent vertices {G.leaves()} (curves must be compact)")
    return G


def parse_graph(text: str) -> MetricGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return graph_from_document(doc)


def parse_point(G: MetricGraph, s: str) -> GraphPoint:
    """"v1" for a vertex, "A@1/3" for the point at offset 1/3 along edge A."""
    if s in G.vertices:
        return G.vertex(s)
    if "@" in s:
        eid, off = s.rsplit("@", 1)
        if G.has_edge(eid):
            return G.point(eid, parse_rational(off, "offset"))
    raise SchemaError(f"unknown point {s!r}")


def divisor_from_document(G: MetricGraph, doc: Any) -> Divisor:
    if not isinstance(doc, dict):
        raise SchemaError("divisor document must be a JSON object")
    coeffs: list[tuple[GraphPoint, int]] = []
    for i, rec in enumerate(_require(doc, "entries", list, "divisor")):
        where = f"entry #{i}"
        if not isinstance(rec, dict):
            raise SchemaError(f"{where} must be an object")
        k = rec.get("coeff")
        if isinstance(k, bool) or not isinstance(k, int) or k == 0:
            raise SchemaError(f"{where}: coeff must be a nonzero integer")
        if "vertex" in rec:
            p = G.vertex(_require(rec, "vertex", str, where))
        else:
            eid = _require(rec, "edge", str, where)
            if not G.has_edge(eid):
                raise SchemaError(f"{where}: unknown edge {eid!r}")
            t = parse_rational(rec.get("offset"), f"{where} offset")
            if not 0 < t < G.edge(eid).length:
                raise SchemaError(f"{where}: offset must lie strictly inside the edge")
            p = G.point(eid, t)
        coeffs.append((p, k))
    return Divisor(coeffs)


def parse_divisor(G: MetricGraph, text: str) -> Divisor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return divisor_from_document(G, doc)


def graph_document(G: MetricGraph) -> dict:
    return {
        "vertices": sorted(G.vertices),
        "edges": [
            {"id": e.id, "ends": [e.tail, e.head], "length": fmt_fraction(e.length)}
            for e in sorted(G.edges, key=lambda e: e.id)
        ],
    }


def point_document(p: GraphPoint) -> dict:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": fmt_fraction(p.offset)}


def divisor_document(D: Divisor) -> dict:
    return {"entries": [dict(point_document(p), coeff=a) for p, a in D.items()]}


def serialize_graph(G: MetricGraph) -> str:
    return json.dumps(graph_document(G), indent=2)


def serialize_divisor(D: Divisor) -> str:
    return json.dumps(divisor_document(D), indent=2)


def to_dot(G: MetricGraph, D: Divisor | None = None) -> str:
    """Graphviz text; interior divisor points become small labelled nodes."""
    D = D if D is not None else Divisor()
    M = refine(G, D.support)
    H = M.graph
    lines = ["graph tropical_curve {", "  node [shape=circle];"]
    for v in H.vertices:
        p = M.point_of[v]
        a = D[p]
        attrs = [f'label="{v}"' if p.is_vertex else 'label="", shape=point']
        if a:
            attrs.append(f'xlabel="{a}"')
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for e in H.edges:
        lines.append(f'  "{e.tail}" -- "{e.head}" [label="{M.segment[e.id].base_edge}: {fmt_fraction(e.length)}"];')
    lines.append("}")
    return "\n".join(lines)


class _Formatter:
    def __init__(self, decimal: bool):
        self.decimal = decimal

    def num(self, x) -> str:
        s = fmt_fraction(x)
        if self.decimal and Fraction(x).denominator != 1:
            x = Fraction(x)
            with localcontext() as ctx:
                ctx.prec = 8
                s += f" (~{Decimal(x.numerator) / Decimal(x.denominator)})"
        return s

    def vec(self, v) -> str:
        return "(" + ", ".join(self.num(x) for x in v) + ")"


def _lattice(Q) -> str:
    # a rank-one lattice reads better as its single generator
    return f"[{fmt_fraction(Q.rows[0][0])}]" if Q.g == 1 else format_matrix(Q.rows)


def _vec_json(v) -> list[str]:
    return [fmt_fraction(x) for x in v]


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _vector(arg: str, g: int) -> tuple[Fraction, ...]:
    parts = [s for s in arg.split(",") if s.strip()] if arg else []
    v = tuple(parse_rational(s.strip(), "vector entry") for s in parts)
    if len(v) != g:
        raise SchemaError(f"expected {g} comma-separated rationals, got {len(v)}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropjac", description="Divisors, Jacobians and theta functions of metric graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--decimal", action="store_true", help="also show decimal approximations (display only)")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help, divisor=False, base=False):
        p = sub.add_parser(name, help=help, parents=[common])
        p.add_argument("graph", help="graph JSON file")
        if divisor:
            p.add_argument("divisor", help="divisor JSON file")
        if base:
            p.add_argument("--base", help='base point, e.g. "v1" or "A@1/3" (default: first vertex)')
        return p

    cmd("genus", "first Betti number")
    cmd("canonical", "canonical divisor")
    cmd("period", "period matrix of the fundamental cycles").add_argument("--edge-order", help="comma-separated edge ids")
    cmd("aj", "Abel-Jacobi image", divisor=True, base=True)
    cmd("theta", "theta function value and maximizers").add_argument("--at", required=True, help="comma-separated rationals")
    cmd("reduce", "reduced divisor", divisor=True, base=True)
    cmd("rank", "Baker-Norine rank", divisor=True, base=True)
    cmd("rr-check", "check the Riemann-Roch identity", divisor=True, base=True)
    cmd("kappa", "Jacobi inversion constant", base=True)
    cmd("inversion", "effective divisor pulled back from the theta divisor", base=True).add_argument(
        "--lambda", dest="lam", required=True, help="comma-separated rationals"
    )
    cmd("riemann-check", "effectivity of a degree g-1 class, by theta and by chip-firing", divisor=True, base=True)
    cmd("moderators", "moderators of all acyclic orientations").add_argument("--max-edges", type=int, default=16)
    cmd("break", "break divisor test", divisor=True)
    p = sub.add_parser("dot", help="Graphviz rendering with divisor marks", parents=[common])
    p.add_argument("graph")
    p.add_argument("divisor", nargs="?")
    p.add_argument("--svg", help="also write a static SVG rendering to this path")
    return ap


def run(args: argparse.Namespace, out) -> None:
    G = parse_graph(_read(args.graph))
    fmt = _Formatter(args.decimal)
    D = parse_divisor(G, _read(args.divisor)) if getattr(args, "divisor", None) else None
    base = parse_point(G, args.base) if getattr(args, "base", None) else G.vertex(G.vertices[0])
    c = args.command

    def emit(text: str, data: dict):
        if args.json:
            out.write(json.dumps(dict(command=c, **data), indent=2) + "\n")
        else:
            out.write(text + "\n")

    if c == "genus":
        emit(f"g = {G.genus}", {"genus": G.genus})
        return
    if c == "canonical":
        K = canonical_divisor(G)
        emit(f"K = {K}", {"divisor": divisor_document(K)})
        return
    if c == "break":
        dirs = inversion.break_directions(G, D)
        text = f"break divisor: {'yes' if dirs else 'no'}"
        if dirs:
            text += "\n" + "\n".join(f"  {p} -> {e}{'+' if s > 0 else '-'}" for p, (e, s) in dirs)
        emit(text, {"break": dirs is not None,
                    "directions": [dict(point_document(p), edge=e, sign=s) for p, (e, s) in dirs or []]})
        return
    if c == "moderators":
        M = refine(G, split_loops=True)
        mods = sorted({chipfire.moderator(o) for o in chipfire.enumerate_acyclic_orientations(M, args.max_edges)},
                      key=lambda d: tuple((p.sort_key(), a) for p, a in d.items()))
        emit("\n".join(f"K+ = {m}" for m in mods), {"moderators": [divisor_document(m) for m in mods]})
        return
    if c == "dot":
        text = to_dot(G, D)
        if args.svg:
            from .plotting import render_svg

            render_svg(G, D, args.svg)
        out.write(text + "\n")
        return

    order = args.edge_order.split(",") if c == "period" and args.edge_order else None
    J = Jacobian.of(G, order)
    if c == "period":
        emit(format_matrix(J.Q.rows), {"period_matrix": [_vec_json(r) for r in J.Q.rows]})
    elif c == "aj":
        u = abel_jacobi(J, D, base)
        emit(f"mu(D) = {fmt.vec(u)} mod {_lattice(J.Q)}", {"aj": _vec_json(u)})
    elif c == "theta":
        tv = theta(J.Q, _vector(args.at, J.g))
        ms = ", ".join("(" + ",".join(map(str, n)) + ")" for n in tv.maximizers)
        emit(f"Theta = {fmt.num(tv.value)}; maximizers {ms}",
             {"value": fmt_fraction(tv.value), "maximizers": [list(n) for n in tv.maximizers]})
    elif c == "reduce":
        R = chipfire.reduce_divisor(J, D, base)
        emit(f"{base}-reduced: {R}", {"base": str(base), "divisor": divisor_document(R)})
    elif c == "rank":
        r = chipfire.rank(J, D, base)
        emit(f"r(D) = {r}", {"rank": r})
    elif c == "rr-check":
        d, r, rk = chipfire.riemann_roch_data(J, D, base)
        ok = r - rk == d - J.g + 1
        emit(f"{'OK' if ok else 'FAIL'} d={d}, r(D)={r}, r(K−D)={rk}",
             {"ok": ok, "degree": d, "rank": r, "rank_complement": rk, "genus": J.g})
        if not ok:
            raise SystemExit(1)
    elif c == "kappa":
        k = canonical_point(J.Q, inversion.kappa(J, base)) if J.g else ()
        emit(f"κ = {fmt.vec(k)} mod {_lattice(J.Q)}", {"kappa": _vec_json(k), "base": str(base)})
    elif c == "inversion":
        Dl = inversion.pullback_theta(J, base, _vector(args.lam, J.g))
        emit(f"D_lambda = {Dl}", {"divisor": divisor_document(Dl)})
    elif c == "riemann-check":
        if D.degree != J.g - 1:
            raise DegreeMismatchError(f"expected degree {J.g - 1}, got {D.degree}")
        by_theta = inversion.riemann_membership(J, abel_jacobi(J, D, base), base)
        by_chips = chipfire.linear_system_nonempty(J, D, base)
        emit(f"effective class: theta={'yes' if by_theta else 'no'}, chip-firing={'yes' if by_chips else 'no'}",
             {"theta": by_theta, "chipfire": by_chips, "agree": by_theta == by_chips})


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run(args, sys.stdout)
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TropJacError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
