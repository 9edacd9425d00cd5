from hypothesis import given, settings

import oracles
from conftest import epis
from treefraisse.graph import enumerate_trees, is_tree, labelled
from treefraisse.factorization import ml_factorize
from treefraisse.morphisms import GraphMap, check, compose, enumerate_epis


def trees_upto(n):
    return [t for k in range(1, n + 1) for t in enumerate_trees(k)]


def test_monotone_input_keeps_codomain():
    f = enumerate_epis(labelled("abcd", [("a", "b"), ("b", "c"), ("c", "d")]),
                       labelled("xy", [("x", "y")]), ["monotone"])[0]
    fz = ml_factorize(f)
    assert fz.middle == f.cod and sorted(fz.l.assign) == [0, 1]


def test_light_input_keeps_domain():
    b = labelled("acb", [("a", "c"), ("c", "b")])
    f = GraphMap(b, labelled("01", [("0", "1")]), (0, 1, 0))
    fz = ml_factorize(f)
    assert fz.middle == f.dom and fz.m.assign == (0, 1, 2)


def test_path_onto_edge_example():
    p5 = labelled("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")])
    f = GraphMap(p5, labelled("xy", [("x", "y")]), (0, 0, 1, 0, 1))
    fz = ml_factorize(f)
    assert fz.middle.n == 4 and is_tree(fz.middle)
    classes = {}
    for v, c in enumerate(fz.classmap):
        classes.setdefault(c, []).append(p5.label(v))
    assert sorted(classes.values()) == [["a", "b"], ["c"], ["d"], ["e"]]
    assert check(fz.m, "monotone") and check(fz.l, "light")


def factorization_counterexamples(max_n):
    bad, count = [], 0
    for dom in trees_upto(max_n):
        for cod in trees_upto(dom.n):
            for f in enumerate_epis(dom, cod, max_vertices=max_n):
                count += 1
                fz = ml_factorize(f)
                ok = (compose(fz.m, fz.l).assign == f.assign
                      and check(fz.m, "epi") and check(fz.l, "epi")
                      and check(fz.m, "monotone") and check(fz.l, "light"))
                if ok and check(f, "confluent"):
                    ok = check(fz.m, "confluent") and check(fz.l, "confluent")
                if not ok:
                    bad.append(f)
    return count, bad


def test_factorization_up_to_6():
    count, bad = factorization_counterexamples(6)
    assert count and not bad


@settings(max_examples=200, deadline=None)
@given(epis(7, 5, rooted=True, constraints=("order",)))
def test_rooted_factorization_is_ordered(f):
    fz = ml_factorize(f)
    assert is_tree(fz.middle)
    assert check(fz.m, "order") and check(fz.l, "order")


@settings(max_examples=200, deadline=None)
@given(epis(7, 5))
def test_factorization_idempotent(f):
    fz = ml_factorize(f)
    again_m = ml_factorize(fz.m)
    assert sorted(again_m.l.assign) == list(range(fz.middle.n))
    again_l = ml_factorize(fz.l)
    assert sorted(again_l.m.assign) == list(range(fz.middle.n))
    # classes are fiber components, numbered by smallest member
    firsts = [fz.classmap.index(c) for c in range(fz.middle.n)]
    assert firsts == sorted(firsts)
    for c in range(fz.middle.n):
        members = [v for v, k in enumerate(fz.classmap) if k == c]
        assert oracles.connected(f.dom.n, f.dom.edges, members)
