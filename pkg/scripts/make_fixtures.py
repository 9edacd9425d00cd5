"""Write the worked-example fixtures into the package's fixtures directory.

Each fixture is re-verified on write; a mismatch aborts.
"""

from treefraisse.graph import Graph, complete_graph, labelled
from treefraisse.io import dumps, fixture_from_dict, fixture_path, map_to_dict
from treefraisse.morphisms import GraphMap


def named_map(dom, cod, images, roots=None):
    assign = tuple(cod.index(x) for x in images)
    if roots is not None:
        roots = (dom.index(roots[0]), cod.index(roots[1]))
    return GraphMap(dom, cod, assign, roots)


def fixtures():
    out = []

    edge01 = labelled("01", [("0", "1")])
    B = labelled("abcd", [("a", "b"), ("b", "c"), ("b", "d")])
    C = labelled("pqr", [("p", "q"), ("q", "r")])
    out.append({
        "name": "big_example",
        "kind": "amalgamation",
        "source": "worked example: chain-tree amalgamation of a triod and an arc over an edge",
        "inputs": {
            "f": map_to_dict(named_map(B, edge01, "0111", ("a", "0"))),
            "g": map_to_dict(named_map(C, edge01, "011", ("p", "0"))),
        },
        "expected": {
            "pullback_vertices": 7,
            "pullback_cycle": [["b", "q"], ["c", "q"], ["c", "r"], ["b", "r"]],
            "tree_vertices": 11,
            "over": {"c,r": 3, "d,r": 3},
        },
    })

    point = Graph(1, (), ("*",))
    e1 = labelled("ab", [("a", "b")])
    e2 = labelled("pq", [("p", "q")])
    out.append({
        "name": "k4_pullback",
        "kind": "amalgamation",
        "source": "worked example: two edges over a point",
        "inputs": {
            "f": map_to_dict(named_map(e1, point, "**", ("a", "*"))),
            "g": map_to_dict(named_map(e2, point, "**", ("p", "*"))),
        },
        "expected": {"pullback_vertices": 4, "pullback_edges": 6},
    })

    Bc = labelled("acb", [("a", "c"), ("c", "b")])
    Cc = labelled("prq", [("p", "r"), ("r", "q")])
    f51 = map_to_dict(named_map(Bc, edge01, "010"))
    g51 = map_to_dict(named_map(Cc, edge01, "101"))
    out.append({
        "name": "no_confluent_f",
        "kind": "properties",
        "source": "worked example: folding an arc onto an edge",
        "inputs": {"map": f51},
        "expected": {"verdicts": {"epi": True, "confluent": True, "light": True, "monotone": False}},
    })
    out.append({
        "name": "no_confluent_g",
        "kind": "properties",
        "source": "worked example: folding an arc onto an edge",
        "inputs": {"map": g51},
        "expected": {"verdicts": {"epi": True, "confluent": True, "light": True, "monotone": False}},
    })
    out.append({
        "name": "no_confluent_search",
        "kind": "search",
        "source": "worked example: two folds with no confluent tree amalgamation, searched up to 8 vertices",
        "inputs": {"f": f51, "g": g51, "constraints": ["confluent"], "max_verts": 8},
        "expected": {"count": 0},
    })

    T = labelled(["a", "b1", "b2", "c", "d1", "d2"],
                 [("a", "b1"), ("a", "b2"), ("b1", "c"), ("b1", "d1"), ("b2", "d2")])
    S = labelled("ABCD", [("A", "B"), ("B", "C"), ("B", "D")])
    out.append({
        "name": "rooted_triod",
        "kind": "properties",
        "source": "worked example: order-preserving map of rooted trees that is not confluent",
        "inputs": {"map": map_to_dict(named_map(T, S, "ABBCDD", ("a", "A")))},
        "expected": {"verdicts": {"epi": True, "order": True, "confluent": False, "monotone": False}},
    })

    K3 = complete_graph(3).with_labels("abc")
    H = labelled("pq", [("p", "q")])
    out.append({
        "name": "triangle_onto_edge",
        "kind": "properties",
        "source": "worked example: monotone map of a cycle onto an arc",
        "inputs": {"map": map_to_dict(named_map(K3, H, "pqq"))},
        "expected": {"verdicts": {"epi": True, "monotone": True, "light": False}},
    })

    Tr = labelled("abcd", [("a", "b"), ("b", "c"), ("b", "d")])
    I = labelled(["p1", "p2", "p3", "p4", "p5"], [("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p5")])
    J = labelled(["q1", "q2", "q3", "q4", "q5"], [("q1", "q2"), ("q2", "q3"), ("q3", "q4"), ("q4", "q5")])
    out.append({
        "name": "arcs_over_triod",
        "kind": "amalgamation",
        "source": "worked example: two arcs over a triod with no connected amalgamation",
        "inputs": {
            "f": map_to_dict(GraphMap(I, Tr, tuple(Tr.index(x) for x in "dbcba"))),
            "g": map_to_dict(GraphMap(J, Tr, tuple(Tr.index(x) for x in "dbabc"))),
        },
        "expected": {"pullback_vertices": 7, "surjective_components": 0},
    })

    A = labelled("0123", [("0", "1"), ("0", "2"), ("0", "3")])
    Ba = labelled("dbace", [("d", "b"), ("b", "a"), ("a", "c"), ("c", "e")])
    Ca = labelled("sqprt", [("s", "q"), ("q", "p"), ("p", "r"), ("r", "t")])
    out.append({
        "name": "tree_amalgamation_loses_ends",
        "kind": "amalgamation",
        "source": "worked example: end-preserving arcs over a triod rooted at an end",
        "inputs": {
            "f": map_to_dict(named_map(Ba, A, "20103", ("a", "1"))),
            "g": map_to_dict(named_map(Ca, A, "20103", ("p", "1"))),
        },
        "expected": {"tree_vertices": 7, "leaves_over_non_ends": ["b,r", "c,q"]},
    })
    return out


def main():
    for doc in fixtures():
        fx = fixture_from_dict(doc)
        text = dumps(fx.to_dict())
        fixture_path(fx.name).write_text(text)
        print(f"wrote {fx.name}")


if __name__ == "__main__":
    main()
