"""Static matplotlib rendering of a metric graph with divisor marks.

Drawing is the one place where floats appear; nothing here feeds back into
a computation.
"""
from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graph import Divisor, MetricGraph  # noqa: E402


def _layout(G: MetricGraph) -> dict[str, tuple[float, float]]:
    n = len(G.vertices)
    if n == 1:
        return {G.vertices[0]: (0.0, 0.0)}
    return {v: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i, v in enumerate(G.vertices)}


def _edge_curve(G: MetricGraph, pos, bends):
    """Per edge, a function t in [0, 1] -> (x, y) (t measured from the tail)."""
    curves = {}
    for e in G.edges:
        x0, y0 = pos[e.tail]
        if e.is_loop:
            k = bends[e.id]
            r = 0.35 + 0.15 * k
            cx, cy = x0 * (1 + r) if (x0 or y0) else 0.0, y0 * (1 + r) if (x0 or y0) else r
            a0 = math.atan2(y0 - cy, x0 - cx)
            curves[e.id] = (lambda t, cx=cx, cy=cy, r=r, a0=a0:
                            (cx + r * math.cos(a0 + 2 * math.pi * t), cy + r * math.sin(a0 + 2 * math.pi * t)))
            continue
        x1, y1 = pos[e.head]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        nx, ny = -(y1 - y0), x1 - x0
        b = 0.4 * bends[e.id]
        qx, qy = mx + b * nx, my + b * ny
        curves[e.id] = (lambda t, x0=x0, y0=y0, x1=x1, y1=y1, qx=qx, qy=qy:
                        ((1 - t) ** 2 * x0 + 2 * t * (1 - t) * qx + t * t * x1,
                         (1 - t) ** 2 * y0 + 2 * t * (1 - t) * qy + t * t * y1))
    return curves


def _bends(G: MetricGraph) -> dict[str, float]:
    groups = defaultdict(list)
    for e in G.edges:
        groups[frozenset((e.tail, e.head))].append(e)
    out = {}
    for es in groups.values():
        m = len(es)
        for i, e in enumerate(es):
            if e.is_loop:
                out[e.id] = float(i)
            else:
                # orient the offset consistently for edges stored head-first
                s = 1.0 if e.tail <= e.head else -1.0
                out[e.id] = s * (i - (m - 1) / 2)
    return out


def render_svg(G: MetricGraph, D: Divisor | None, path: str) -> None:
    D = D if D is not None else Divisor()
    pos = _layout(G)
    curves = _edge_curve(G, pos, _bends(G))
    fig, ax = plt.subplots(figsize=(5, 5))
    for e in G.edges:
        pts = [curves[e.id](i / 60) for i in range(61)]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color="0.3", lw=1.5, zorder=1)
        lx, ly = curves[e.id](0.5)
        ax.annotate(f"{e.id}: {e.length}", (lx, ly), fontsize=8, color="0.35",
                    xytext=(3, 3), textcoords="offset points")
    for v, (x, y) in pos.items():
        ax.scatter([x], [y], s=90, color="white", edgecolor="black", zorder=2)
        ax.annotate(v, (x, y), fontsize=9, xytext=(-12, -14), textcoords="offset points")
    for p, a in D.items():
        if p.is_vertex:
            x, y = pos[p.vertex]
        else:
            e = G.edge(p.edge)
            x, y = curves[e.id](float(p.offset / e.length))
        ax.scatter([x], [y], s=50, color="tab:red" if a > 0 else "tab:blue", zorder=3)
        ax.annotate(str(a), (x, y), fontsize=9, fontweight="bold", xytext=(5, 5), textcoords="offset points")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
