import pytest
from hypothesis import given, settings

import oracles
from conftest import epis, pairs_over
from treefraisse.amalgamation import (
    AmalgamationError,
    NoAmalgamationError,
    PreconditionError,
    amalgamate,
    certify,
    component_amalgamate,
    confluent_amalgamate,
    end_preserving_amalgamate,
    monotone_amalgamate,
    pullback,
    search_amalgamate,
    tree_amalgamate,
    unfolding_amalgamate,
)
from treefraisse.graph import Graph, is_tree, labelled, path_graph, star_graph
from treefraisse.morphisms import GraphMap, check, enumerate_epis, identity
from treefraisse.rooted import RootedTree, branches, is_uniform_fan

EDGE = labelled("01", [("0", "1")])
POINT = Graph(1)


def big_example():
    b = labelled("abcd", [("a", "b"), ("b", "c"), ("b", "d")])
    c = labelled("pqr", [("p", "q"), ("q", "r")])
    return GraphMap(b, EDGE, (0, 1, 1, 1), (0, 0)), GraphMap(c, EDGE, (0, 1, 1), (0, 0))


def fold_pair():
    b = labelled("acb", [("a", "c"), ("c", "b")])
    c = labelled("prq", [("p", "r"), ("r", "q")])
    return GraphMap(b, EDGE, (0, 1, 0)), GraphMap(c, EDGE, (1, 0, 1))


def pair_index(pb, f, g, b, c):
    return pb.pairs.index((f.dom.index(b), g.dom.index(c)))


# ------------------------------------------------------------------ pullback


def test_two_edges_over_a_point():
    e = path_graph(2)
    pb = pullback(GraphMap(e, POINT, (0, 0), (0, 0)), GraphMap(e, POINT, (0, 0), (0, 0)))
    assert pb.graph.n == 4 and len(pb.graph.edges) == 6


def test_big_example_pullback():
    f, g = big_example()
    pb = pullback(f, g)
    assert pb.graph.n == 7 and not is_tree(pb.graph)
    cyc = [pair_index(pb, f, g, *p) for p in (("b", "q"), ("c", "q"), ("c", "r"), ("b", "r"))]
    assert all(pb.graph.has_edge(cyc[i], cyc[i - 1]) for i in range(4))
    # (b,q) is adjacent to everything else in the pullback
    from treefraisse.graph import is_connected, vertex_order

    assert is_connected(pb.graph)
    assert vertex_order(pb.graph, cyc[0]) == 6


def test_pullback_along_identity():
    f, _ = big_example()
    pb = pullback(f, identity(EDGE, 0))
    assert pb.graph == f.dom and pb.f0.assign == tuple(range(f.dom.n))


# ------------------------------------------------------------------ components


def test_fold_pair_component_is_a_four_cycle():
    f, g = fold_pair()
    pb = pullback(f, g)
    assert pb.graph.n == 4
    res = component_amalgamate(f, g)
    assert res.d.n == 4 and len(res.d.edges) == 4 and not is_tree(res.d)
    assert res.certificate.commutes and res.ok


def test_component_of_identities():
    res = component_amalgamate(identity(EDGE), identity(EDGE))
    assert oracles.isomorphic(res.d, EDGE)


@settings(max_examples=150, deadline=None)
@given(epis(6, 4, constraints=("confluent",)), epis(6, 4, constraints=("confluent",)))
def test_component_certificates(f, g):
    if f.cod != g.cod:
        g = f
    assert component_amalgamate(f, g).ok


# ------------------------------------------------------------------ tree amalgamation


def test_big_example_tree():
    f, g = big_example()
    res = tree_amalgamate(f, g)
    assert res.d.n == 11 and is_tree(res.d) and res.certificate.commutes
    over = [(f.dom.label(b), g.dom.label(c)) for b, c in zip(res.f0.assign, res.g0.assign)]
    assert over.count(("c", "r")) == 3 and over.count(("d", "r")) == 3
    rt = RootedTree(res.d, res.root)
    # leaves in the root order vs vertices of order at most one
    from treefraisse.graph import end_vertices

    assert len(rt.leaves()) == 6 and len(end_vertices(res.d)) == 7
    assert sorted(over[v] for v in rt.leaves()) == [("c", "r")] * 3 + [("d", "r")] * 3


def test_big_example_deep_path_walks_up_the_chain():
    from treefraisse.graph import unique_path

    f, g = big_example()
    res = tree_amalgamate(f, g)
    rt = RootedTree(res.d, res.root)
    deep = max(range(res.d.n), key=lambda v: rt.depth[v])
    path = unique_path(res.d, res.root, deep)
    assert len(path) == 4
    assert [rt.depth[v] for v in path] == [0, 1, 2, 3]


def test_tree_pullback_is_kept():
    f = GraphMap(path_graph(3), EDGE, (0, 1, 1), (0, 0))
    res = tree_amalgamate(f, identity(EDGE, 0))
    pb = pullback(f, identity(EDGE, 0))
    assert is_tree(pb.graph) and oracles.isomorphic(res.d, pb.graph, (res.root, pb.root))


def test_tree_of_points():
    p = identity(POINT, 0)
    assert tree_amalgamate(p, p).d.n == 1


def test_tree_amalgamation_small_instances():
    n = 0
    for f, g in pairs_over(4, ("order",), rooted=True):
        res = tree_amalgamate(f, g)
        n += 1
        assert is_tree(res.d) and res.certificate.commutes
        assert check(res.f0, "order") and check(res.g0, "order")
    assert n > 1000


def test_tree_amalgamation_can_lose_confluence():
    b = Graph(4, ((0, 1), (1, 2), (1, 3)))
    c = Graph(4, ((0, 1), (0, 2), (1, 3)))
    f = GraphMap(b, star_graph(2), (0, 0, 1, 2), (0, 0))
    g = GraphMap(c, star_graph(2), (0, 0, 1, 2), (0, 0))
    for h in (f, g):
        assert check(h, "confluent") and check(h, "order")
    res = tree_amalgamate(f, g)
    assert res.certificate.commutes and not res.certificate.holds("confluent")
    # the family amalgamator still finds a confluent one
    assert confluent_amalgamate(f, g).certificate.holds("confluent")


def test_tree_amalgamation_can_lose_ends():
    t = Graph(4, ((0, 1), (0, 2), (1, 3)))
    f = GraphMap(t, star_graph(2), (0, 0, 1, 2), (0, 0))
    g = GraphMap(t, star_graph(2), (0, 0, 2, 1), (0, 0))
    for h in (f, g):
        assert check(h, "confluent") and check(h, "end")
    res = tree_amalgamate(f, g)
    assert not res.certificate.holds("end")
    assert confluent_amalgamate(f, g, ends=True).certificate.holds("end")


# ------------------------------------------------------------------ monotone


def test_monotone_points():
    p = identity(POINT)
    assert monotone_amalgamate(p, p).d.n == 1


def test_monotone_against_identity():
    f = enumerate_epis(star_graph(3), path_graph(2), ["monotone"])[0]
    res = monotone_amalgamate(f, identity(path_graph(2)))
    assert res.ok and oracles.isomorphic(res.d, f.dom)


def test_monotone_paths():
    f = GraphMap(path_graph(3), path_graph(2), (0, 1, 1))
    res = monotone_amalgamate(f, f)
    assert res.ok and res.d.n == 3
    found = search_amalgamate(f, f, ["monotone"], 3)
    assert found is not None and found.d.n <= 3


def test_monotone_rejects_non_monotone():
    f, g = fold_pair()
    with pytest.raises(PreconditionError):
        monotone_amalgamate(f, g)


def test_monotone_instances_agree_with_search():
    for f, g in pairs_over(4, ("monotone",)):
        res = monotone_amalgamate(f, g)
        assert res.ok and is_tree(res.d)
        assert res.d.n >= max(f.dom.n, g.dom.n)
        assert search_amalgamate(f, g, ["monotone"], res.d.n) is not None


# ------------------------------------------------------------------ confluent


def test_confluent_with_monotone_inputs():
    f = GraphMap(path_graph(3), EDGE, (0, 1, 1), (0, 0))
    res = confluent_amalgamate(f, f)
    assert res.ok and check(res.f0, "confluent")


def test_confluent_with_light_inputs():
    f = GraphMap(path_graph(3), EDGE, (1, 0, 1), (1, 0))
    res = confluent_amalgamate(f, f)
    assert res.ok and is_tree(res.d)


def test_confluent_duplicated_triod_pair():
    t = labelled(["a", "b1", "b2", "c", "d1", "d2"],
                 [("a", "b1"), ("a", "b2"), ("b1", "c"), ("b1", "d1"), ("b2", "d2")])
    s = labelled("ABCD", [("A", "B"), ("B", "C"), ("B", "D")])
    f = enumerate_epis(t, s, ["confluent", "order"], (0, 0))[0]
    res = confluent_amalgamate(f, f)
    assert res.ok and res.certificate.holds("confluent")


def test_no_confluent_amalgamation_instance():
    # confluent, order- and end-preserving, yet no confluent tree amalgamation
    a = star_graph(3)
    b = Graph(5, ((0, 1), (0, 2), (1, 3), (1, 4)))
    f = GraphMap(b, a, (0, 0, 1, 2, 3), (0, 0))
    g = GraphMap(b, a, (0, 0, 2, 1, 3), (0, 0))
    for h in (f, g):
        assert check(h, "monotone") and check(h, "order") and check(h, "end")
    with pytest.raises(NoAmalgamationError):
        unfolding_amalgamate(f, g)
    with pytest.raises(AmalgamationError):
        confluent_amalgamate(f, g)
    assert search_amalgamate(f, g, ["confluent", "order"], 7) is None


@settings(max_examples=100, deadline=None)
@given(epis(5, 4, rooted=True, constraints=("confluent", "order")))
def test_unfolding_self_pairs(f):
    res = unfolding_amalgamate(f, f)
    assert res.ok and res.certificate.holds("confluent")


# ------------------------------------------------------------------ end-preserving


def test_end_preserving_single_branch():
    f = GraphMap(path_graph(3), path_graph(2), (0, 1, 1), (0, 0))
    res = end_preserving_amalgamate(f, f)
    assert res.ok and len(branches(RootedTree(res.d, res.root))) == 1


def test_end_preserving_edges_over_point():
    e = GraphMap(path_graph(2), POINT, (0, 0), (0, 0))
    res = end_preserving_amalgamate(e, e)
    assert res.ok and res.d == path_graph(2)


def test_end_preserving_two_branch_fans():
    a = RootedTree(path_graph(3), 1)
    fan = RootedTree(path_graph(5), 2)
    f = enumerate_epis(fan.tree, a.tree, ["order", "end"], (2, 1))[0]
    res = end_preserving_amalgamate(f, f, uniform=True)
    rt = RootedTree(res.d, res.root)
    assert res.ok and is_uniform_fan(rt) and len(branches(rt)) <= 4


# ------------------------------------------------------------------ search and propagation


def test_search_finds_diagonal_for_equal_maps():
    f = GraphMap(path_graph(3), path_graph(2), (0, 1, 1))
    res = search_amalgamate(f, f, [], 3)
    assert res is not None and res.ok


def test_fold_pair_has_no_confluent_tree_amalgamation_up_to_6():
    f, g = fold_pair()
    assert search_amalgamate(f, g, ["confluent"], 6) is None


def test_pullback_propagation_small():
    for f, g in pairs_over(4):
        pb = pullback(f, g)
        for p in ("light", "monotone", "confluent"):
            if f.verdict(p):
                assert check(pb.g0, p)


def test_rooted_light_pullback_is_a_tree():
    n = 0
    for f, g in pairs_over(5, ("order",), rooted=True):
        if f.verdict("light"):
            n += 1
            assert is_tree(pullback(f, g).graph)
    assert n


def test_certificate_detects_non_commuting_square():
    f, g = big_example()
    res = tree_amalgamate(f, g)
    broken = GraphMap(res.d, g.dom, tuple(0 for _ in res.g0.assign), res.g0.roots)
    assert not certify(f, g, res.f0, broken).commutes


def test_unknown_strategy():
    f, g = big_example()
    with pytest.raises(ValueError):
        amalgamate(f, g, "nope")
