"""Sample curves shared by the test modules."""
from fractions import Fraction as F

from tropjac.graph import MetricGraph


def circle(length=1):
    return MetricGraph(["v"], [("e", "v", "v", length)])


def theta_graph(a=1, b=1, c=1):
    return MetricGraph(["x", "y"], [("A", "x", "y", a), ("B", "x", "y", b), ("C", "x", "y", c)])


def dumbbell(bridge=1, loops=(1, 2)):
    return MetricGraph(
        ["a", "b"],
        [("La", "a", "a", loops[0]), ("Lb", "b", "b", loops[1]), ("M", "a", "b", bridge)],
    )


def k4():
    vs = ["p", "q", "r", "s"]
    es = [(f"{u}{v}", u, v, 1) for i, u in enumerate(vs) for v in vs[i + 1:]]
    return MetricGraph(vs, es)


SAMPLES = {
    "circle1": lambda: circle(1),
    "circle2": lambda: circle(2),
    "theta111": lambda: theta_graph(),
    "theta_mixed": lambda: theta_graph(F(2, 3), 1, F(5, 2)),
    "dumbbell1": lambda: dumbbell(1),
    "dumbbell2": lambda: dumbbell(2),
    "k4": k4,
}
