import itertools
import random
from fractions import Fraction as F

import pytest

from oracles import chromatic_at_minus_one, genus_one_rank
from samples import SAMPLES, circle, dumbbell, theta_graph
from tropjac import chipfire
from tropjac.chipfire import (
    AcyclicOrientation,
    dhar_burn,
    dichotomy_check,
    effectivize,
    enumerate_acyclic_orientations,
    fire_unburnt,
    linear_system_nonempty,
    moderator,
    pseudo_break_divisor,
    rank,
    reduce_divisor,
    riemann_roch_check,
    riemann_roch_data,
    spanning_tree_domain,
    support_lemma_check,
)
from tropjac.errors import (
    BoundExceededError,
    CyclicOrientationError,
    DegreeMismatchError,
    IterationCapExceeded,
    MalformedDomainError,
    NegativeChipError,
    RankAuditError,
)
from tropjac.graph import Divisor, MetricGraph, Subgraph, canonical_divisor, refine
from tropjac.homology import Jacobian, abel_jacobi, is_principal, jac_equal
from tropjac.inversion import is_break_divisor
from tropjac.plfunc import divisor_of, equivalence_witness, random_pl_function, random_point


def random_divisor(G, rng, n=3, lo=-2, hi=2):
    return Divisor([(random_point(G, rng), rng.randint(lo, hi)) for _ in range(n)])


# burning


def test_single_chip_on_circle_burns():
    G = circle(2)
    q, p = G.point("e", F(1, 2)), G.vertex("v")
    assert dhar_burn(G, Divisor({q: 1}), p).all_burnt


def test_two_chips_block_the_fire():
    G = circle(2)
    q, p = G.point("e", F(1, 2)), G.vertex("v")
    b = dhar_burn(G, Divisor({q: 2}), p)
    assert [b.model.point_of[v] for v in b.unburnt] == [q]
    assert sum(b.boundary.values()) == 2


def test_zero_divisor_burns_everything():
    G = theta_graph()
    assert dhar_burn(G, Divisor(), G.vertex("x")).all_burnt


def test_negative_chips_rejected():
    G = theta_graph()
    with pytest.raises(NegativeChipError):
        dhar_burn(G, Divisor({G.vertex("y"): -1}), G.vertex("x"))


# firing


def test_firing_on_circle_moves_both_chips():
    G = circle(2)
    q, p = G.point("e", F(1, 2)), G.vertex("v")
    D = Divisor({q: 2})
    new, w, eps = fire_unburnt(G, D, dhar_burn(G, D, p))
    assert eps == F(1, 2)
    assert new == Divisor({p: 1, G.point("e", 1): 1})
    assert divisor_of(w) == D - new


def test_firing_three_chips_at_theta_vertex():
    G = theta_graph(F(2, 3), 1, F(5, 2))
    x, y = G.vertex("x"), G.vertex("y")
    D = Divisor({y: 3})
    new, w, eps = fire_unburnt(G, D, dhar_burn(G, D, x))
    assert eps == F(2, 3)
    assert new == Divisor({x: 1, G.point("B", F(1, 3)): 1, G.point("C", F(11, 6)): 1})
    assert divisor_of(w) == D - new


@pytest.mark.parametrize("name", ["theta_mixed", "dumbbell1", "k4"])
def test_firing_preserves_the_class(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    rng = random.Random(1)
    for _ in range(10):
        p = random_point(G, rng)
        D = Divisor.of_points(random_point(G, rng) for _ in range(J.g + 1))
        b = dhar_burn(G, D, p)
        if b.all_burnt:
            continue
        new, w, _ = fire_unburnt(G, D, b)
        assert divisor_of(w) == D - new
        assert jac_equal(abel_jacobi(J, new, p), abel_jacobi(J, D, p), J.Q)


# reduction


def test_reduced_single_chip_on_circle():
    G = circle(2)
    J = Jacobian.of(G)
    q = G.point("e", F(1, 3))
    assert reduce_divisor(J, Divisor({q: 1}), G.vertex("v")) == Divisor({q: 1})


def _circle_reduced(G, D, p):
    # genus one: (d - 1) p + q with q determined by the group law
    L = G.edge("e").length
    pos = lambda z: F(0) if z.is_vertex else z.offset
    d = D.degree
    t = (sum(a * pos(z) for z, a in D.items()) - (d - 1) * pos(p)) % L
    return Divisor({p: d - 1}) + Divisor({G.point("e", t): 1})


@pytest.mark.parametrize("length", [1, 2, F(5, 3)])
def test_reduce_on_circle_matches_group_law(length):
    G = circle(length)
    J = Jacobian.of(G)
    rng = random.Random(2)
    for _ in range(25):
        p = random_point(G, rng)
        D = random_divisor(G, rng)
        if D.degree < 1:
            continue
        assert reduce_divisor(J, D, p) == _circle_reduced(G, D, p)


def test_reduce_clears_debt():
    G = theta_graph()
    J = Jacobian.of(G)
    x, y = G.vertex("x"), G.vertex("y")
    R = reduce_divisor(J, Divisor({y: -2, G.point("A", F(1, 3)): 3}), x)
    assert R.effective_away_from(x)
    E = effectivize(J, Divisor({y: -1, x: 1}), x)
    assert E.effective_away_from(x)


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_reduce_is_canonical(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    rng = random.Random(3)
    for _ in range(8):
        p = random_point(G, rng)
        D = random_divisor(G, rng)
        R = reduce_divisor(J, D, p)
        assert R.effective_away_from(p)
        assert dhar_burn(G, R, p).all_burnt
        assert reduce_divisor(J, R, p) == R
        w = equivalence_witness(J, D, R, p)
        assert w is not None and divisor_of(w) == D - R
        # another representative of the same class
        D2 = D + divisor_of(random_pl_function(G, rng))
        assert reduce_divisor(J, D2, p) == R


def test_iteration_cap(monkeypatch):
    G = theta_graph()
    J = Jacobian.of(G)
    D = Divisor({G.vertex("y"): 3})
    with pytest.raises(IterationCapExceeded):
        reduce_divisor(J, D, G.vertex("x"), cap=1)
    monkeypatch.setenv("TROPJAC_ITER_CAP", "1")
    with pytest.raises(IterationCapExceeded):
        reduce_divisor(J, D, G.vertex("x"))


# linear systems and rank


@pytest.mark.parametrize("length", [1, F(7, 3)])
def test_genus_one_linear_systems(length):
    G = circle(length)
    J = Jacobian.of(G)
    rng = random.Random(4)
    for _ in range(30):
        D = random_divisor(G, rng)
        principal = is_principal(J, D) if D.degree == 0 else False
        expected = genus_one_rank(D.degree, principal)
        assert linear_system_nonempty(J, D) == (expected >= 0)
        assert rank(J, D) == expected
    v = G.vertex("v")
    assert rank(J, Divisor({v: 3})) == 2


@pytest.mark.parametrize("name", ["theta_mixed", "dumbbell2", "k4"])
def test_nonemptiness_does_not_depend_on_base(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    rng = random.Random(6)
    for _ in range(10):
        D = random_divisor(G, rng, n=4)
        verdicts = {linear_system_nonempty(J, D, random_point(G, rng)) for _ in range(3)}
        assert len(verdicts) == 1
        if D.degree >= J.g:
            assert verdicts == {True}
        if D.degree < 0:
            assert verdicts == {False}


def test_rank_examples():
    G = theta_graph()
    J = Jacobian.of(G)
    assert rank(J, Divisor()) == 0
    assert rank(J, canonical_divisor(G)) == 1
    assert rank(J, Divisor({G.vertex("x"): 2})) == 0
    assert rank(J, Divisor({G.vertex("x"): 1}) - Divisor({G.vertex("y"): 1})) == -1


def test_rank_audit_catches_a_bad_candidate_set(monkeypatch):
    G = theta_graph()
    J = Jacobian.of(G)
    y = G.vertex("y")
    monkeypatch.setattr(chipfire, "candidate_points", lambda G, D, p: [y])
    with pytest.raises(RankAuditError):
        rank(J, Divisor({y: 1}), G.vertex("x"))


def _vertex_census(G, lo=-2, hi=2):
    pts = refine(G, split_loops=True).vertex_points()
    for cs in itertools.product(range(lo, hi + 1), repeat=len(pts)):
        yield Divisor(dict(zip(pts, cs)))


@pytest.mark.parametrize("name", ["circle1", "theta111"])
def test_riemann_roch_census(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    g = J.g
    ranks = {}
    for D in _vertex_census(G):
        if abs(D.degree) > 2 * g:
            continue
        d, r, rk = riemann_roch_data(J, D)
        assert r - rk == d - g + 1
        assert r >= d - g
        if d >= 2 * g - 1:
            assert r == d - g and rk == -1
        if d >= 0:
            assert r <= d
        ranks[D] = r
    items = [(D, r) for D, r in ranks.items() if r >= 0]
    for (D1, r1), (D2, r2) in itertools.islice(itertools.combinations(items, 2), 150):
        S = D1 + D2
        rs = ranks[S] if S in ranks else rank(J, S)
        assert r1 + r2 <= rs


# moderators


def test_moderator_examples():
    C = MetricGraph(["s", "t"], [("e1", "s", "t", 1), ("e2", "s", "t", 1)])
    M = refine(C)
    o = AcyclicOrientation(M, (1, 1))
    assert moderator(o) == Divisor({C.vertex("s"): 1, C.vertex("t"): -1})
    T = theta_graph()
    o = AcyclicOrientation(refine(T), (1, 1, 1))
    assert moderator(o) == Divisor({T.vertex("x"): 2, T.vertex("y"): -1})
    with pytest.raises(CyclicOrientationError):
        AcyclicOrientation(refine(C), (1, -1))


@pytest.mark.parametrize(
    "graph",
    [
        MetricGraph(["a", "b"], [("e", "a", "b", 1)]),
        MetricGraph(["a", "b", "c"], [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)]),
        theta_graph(),
        SAMPLES["k4"](),
    ],
)
def test_orientation_count_matches_chromatic_polynomial(graph):
    n = len(enumerate_acyclic_orientations(refine(graph)))
    assert n == chromatic_at_minus_one(graph.vertices, [(e.tail, e.head) for e in graph.edges])


def test_orientation_counts_frozen():
    tri = MetricGraph(["a", "b", "c"], [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("ca", "c", "a", 1)])
    assert len(enumerate_acyclic_orientations(refine(tri))) == 6
    assert len(enumerate_acyclic_orientations(refine(theta_graph()))) == 2
    with pytest.raises(BoundExceededError):
        enumerate_acyclic_orientations(refine(SAMPLES["k4"]()), max_edges=5)


@pytest.mark.parametrize("name", ["circle1", "theta_mixed", "dumbbell1"])
def test_moderators_have_empty_systems(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    M = refine(G, split_loops=True)
    K = canonical_divisor(G)
    for o in enumerate_acyclic_orientations(M):
        Kp = moderator(o)
        assert Kp.degree == J.g - 1
        assert Kp + moderator(o.reversed()) == K
        assert not linear_system_nonempty(J, Kp)
        # contrapositive of the one-point extension corollary
        assert not linear_system_nonempty(J, K - Kp)
        if J.g >= 2:
            r = M.point_of[M.graph.vertices[0]]
            D = Kp - Divisor({r: 1})
            assert not linear_system_nonempty(J, D) and not linear_system_nonempty(J, D + Divisor({r: 1}))


@pytest.mark.parametrize("name", ["theta111", "dumbbell1"])
def test_dichotomy(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    rng = random.Random(7)
    assert dichotomy_check(J, Divisor())
    for o in enumerate_acyclic_orientations(refine(G, split_loops=True)):
        assert dichotomy_check(J, moderator(o))
    for _ in range(6):
        D = random_divisor(G, rng, n=3)
        D = D + Divisor({G.vertex(G.vertices[0]): J.g - 1 - D.degree})
        assert D.degree == J.g - 1
        assert dichotomy_check(J, D)


@pytest.mark.parametrize("name", ["theta_mixed", "dumbbell2"])
def test_complementary_emptiness_in_degree_g_minus_one(name):
    G = SAMPLES[name]()
    J = Jacobian.of(G)
    K = canonical_divisor(G)
    rng = random.Random(8)
    for _ in range(10):
        D = Divisor.of_points(random_point(G, rng) for _ in range(J.g - 1))
        D = D + Divisor({random_point(G, rng): 1}) - Divisor({random_point(G, rng): 1})
        assert linear_system_nonempty(J, D) == linear_system_nonempty(J, K - D)


# fundamental domains and break divisors


def test_pseudo_break_examples():
    C = circle(2)
    q = C.point("e", F(1, 2))
    assert pseudo_break_divisor(C, [(q, ("e", 1))]) == Divisor({q: 1})
    T = theta_graph()
    a, c = T.point("A", F(1, 2)), T.point("C", F(1, 4))
    D = pseudo_break_divisor(T, [(a, ("A", 1)), (c, ("C", -1))])
    assert D == Divisor({a: 1, c: 1}) and is_break_divisor(T, D)


def test_pseudo_break_errors():
    T = theta_graph()
    a = T.point("A", F(1, 2))
    with pytest.raises(MalformedDomainError):
        pseudo_break_divisor(T, [(a, ("A", 1))])
    with pytest.raises(MalformedDomainError):
        pseudo_break_divisor(T, [(a, ("A", 1)), (a, ("A", 1))])
    with pytest.raises(MalformedDomainError):
        pseudo_break_divisor(T, [(a, ("B", 1)), (T.vertex("x"), ("C", 1))])
    with pytest.raises(MalformedDomainError):
        pseudo_break_divisor(T, [(T.vertex("y"), ("A", 1)), (a, ("B", 1))])


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_spanning_tree_domain_gives_break_divisor(name):
    G = SAMPLES[name]()
    D = pseudo_break_divisor(G, spanning_tree_domain(G))
    assert D.degree == G.genus
    assert is_break_divisor(G, D)


def test_support_lemma_on_a_single_edge():
    G = theta_graph()
    J = Jacobian.of(G)
    M = refine(G)
    region = Subgraph.from_edges(M, ["A"])
    assert support_lemma_check(J, region, Divisor())


def test_support_lemma_on_genus_one_region():
    G = theta_graph()
    J = Jacobian.of(G)
    M = refine(G, [G.point("C", F(1, 3)), G.point("C", F(2, 3))])
    arc = M.pieces["C"][1]
    region = Subgraph.from_edges(M, [e.id for e in M.graph.edges if e.id != arc])
    D_b = Divisor({G.vertex("x"): 1})
    assert support_lemma_check(J, region, D_b)
    with pytest.raises(DegreeMismatchError):
        support_lemma_check(J, region, Divisor({G.vertex("x"): 2}))


def test_riemann_roch_check_wrapper():
    G = dumbbell()
    J = Jacobian.of(G)
    assert riemann_roch_check(J, Divisor({G.point("M", F(1, 2)): 2}))
