"""Named families of trees with their map classes, amalgamators and surgery moves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .amalgamation import (
    AmalgamationError,
    AmalgamationResult,
    PreconditionError,
    _result,
    confluent_amalgamate,
    end_preserving_amalgamate,
    monotone_amalgamate,
    tree_amalgamate,
)
from .graph import (
    Graph,
    GraphError,
    _members,
    enumerate_rooted_trees,
    enumerate_trees,
    is_tree,
    vertex_order,
)
from .morphisms import GraphMap, compose, enumerate_epis, satisfies
from .rooted import RootedTree, is_uniform_fan


@dataclass(frozen=True)
class FamilySpec:
    name: str
    rooted: bool
    constraints: tuple
    amalgamator: str
    moves: tuple
    structure: str = "tree"


FAMILIES = {
    "TM": FamilySpec(
        "TM", False, ("monotone",), "monotone",
        ("subdivide_edge", "attach_leaf", "attach_triod", "stretch_leaf"),
    ),
    "TM3": FamilySpec(
        "TM3", False, ("monotone",), "monotone3",
        ("subdivide_edge", "attach_leaf", "stretch_leaf"), "order3",
    ),
    "TC": FamilySpec(
        "TC", True, ("confluent", "order"), "confluent",
        ("subdivide_edge", "attach_leaf", "attach_triod", "double_tree", "stretch_leaf"),
    ),
    "TCE": FamilySpec(
        "TCE", True, ("confluent", "order", "end"), "confluent_end",
        ("subdivide_edge", "double_tree", "stretch_leaf"),
    ),
    "TE": FamilySpec(
        "TE", True, ("order", "end"), "endpreserving",
        ("subdivide_edge", "double_tree", "stretch_leaf"),
    ),
    "FE": FamilySpec("FE", True, ("order", "end"), "fan", ("double_tree",), "uniform_fan"),
}


def family(name) -> FamilySpec:
    if isinstance(name, FamilySpec):
        return name
    try:
        return FAMILIES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


def _split(t):
    if isinstance(t, RootedTree):
        return t.tree, t.root
    if isinstance(t, tuple):
        return t
    return t, None


def is_order3(g: Graph) -> bool:
    """Every vertex has order at most 3 and no two order-3 vertices are adjacent."""
    orders = [vertex_order(g, v) for v in range(g.n)]
    if any(k > 3 for k in orders):
        return False
    return not any(orders[u] == 3 and orders[v] == 3 for u, v in g.edges)


def member(spec, t, root: Optional[int] = None) -> bool:
    spec = family(spec)
    g, r = _split(t)
    if root is not None:
        r = root
    if not is_tree(g):
        return False
    if spec.rooted and r is None:
        return False
    if spec.structure == "order3":
        return is_order3(g)
    if spec.structure == "uniform_fan":
        return is_uniform_fan(RootedTree(g, r))
    return True


def family_trees(spec, cap: int) -> list[tuple[Graph, Optional[int]]]:
    """One member per isomorphism class (rooted classes for rooted families)."""
    spec = family(spec)
    out = []
    for n in range(1, cap + 1):
        cands = enumerate_rooted_trees(n) if spec.rooted else [(t, None) for t in enumerate_trees(n)]
        out.extend(c for c in cands if member(spec, c))
    return out


def family_maps(spec, dom, cod, limit=None) -> list[GraphMap]:
    spec = family(spec)
    (gd, rd), (gc, rc) = _split(dom), _split(cod)
    roots = (rd, rc) if spec.rooted else None
    return enumerate_epis(gd, gc, spec.constraints, roots=roots, max_vertices=max(gd.n, 10), limit=limit)


def is_family_map(spec, h: GraphMap) -> bool:
    spec = family(spec)
    if spec.rooted and h.roots is None:
        return False
    return satisfies(h, spec.constraints)


# ------------------------------------------------------------ surgery moves


def _collapse(h: Graph, t: Graph, assign, root):
    roots = None if root is None else (root, root)
    return GraphMap(h, t, tuple(assign), roots)


def subdivide_edge(t: Graph, edge, root: Optional[int] = None):
    """Replace the edge ``a-b`` by ``a-a'-b'-b`` with ``a' -> a`` and ``b' -> b``."""
    a, b = edge
    if a == b or not t.has_edge(a, b):
        raise GraphError(f"{edge!r} is not an edge")
    n = t.n
    edges = [e for e in t.edges if set(e) != {a, b}] + [(a, n), (n, n + 1), (n + 1, b)]
    h = Graph(n + 2, tuple(edges))
    return h, _collapse(h, t, list(range(n)) + [a, b], root)


def subdivide_all(t: Graph, root: Optional[int] = None):
    """Subdivide every edge at once as in :func:`subdivide_edge`.  No path
    ``p - q - r`` of the result lies over a path ``a - b - c`` of ``t``."""
    n = t.n
    edges = []
    assign = list(range(n))
    for a, b in t.edges:
        edges += [(a, n), (n, n + 1), (n + 1, b)]
        assign += [a, b]
        n += 2
    h = Graph(n, tuple(edges))
    return h, _collapse(h, t, assign, root)


def attach_leaf(t: Graph, v: int, root: Optional[int] = None):
    """A new leaf at ``v`` mapped onto ``v``."""
    if not 0 <= v < t.n:
        raise GraphError(f"vertex {v} out of range")
    h = Graph(t.n + 1, t.edges + ((v, t.n),))
    return h, _collapse(h, t, list(range(t.n)) + [v], root)


def attach_triod(t: Graph, v: int, root: Optional[int] = None):
    """A new vertex at ``v`` carrying two new leaves, all three mapped onto ``v``."""
    if not 0 <= v < t.n:
        raise GraphError(f"vertex {v} out of range")
    n = t.n
    h = Graph(n + 3, t.edges + ((v, n), (n, n + 1), (n, n + 2)))
    return h, _collapse(h, t, list(range(n)) + [v] * 3, root)


def double_tree(t: Graph, root: int):
    """Two copies of ``t`` glued at the root; each copy maps identically onto ``t``."""
    rt = RootedTree(t, root)
    copy = {}
    n = t.n
    for v in range(t.n):
        if v != rt.root:
            copy[v] = n
            n += 1
    copy[rt.root] = rt.root
    edges = list(t.edges) + [(copy[u], copy[v]) for u, v in t.edges]
    assign = list(range(t.n)) + [v for v in range(t.n) if v != rt.root]
    h = Graph(n, tuple(edges))
    return h, _collapse(h, t, assign, root)


def stretch_leaf(t: Graph, edge, root: Optional[int] = None):
    """Extend the end vertex ``e`` of the leaf edge ``(a, e)`` by a new leaf
    mapped onto ``e``, so ``a - e - e'`` lies over ``a - e``."""
    a, e = edge
    if not t.has_edge(a, e) or a == e or vertex_order(t, e) != 1:
        raise GraphError(f"{edge!r} is not a leaf edge ending at {e}")
    if e == root:
        raise GraphError("the stretched end must not be the root")
    h = Graph(t.n + 1, t.edges + ((e, t.n),))
    return h, _collapse(h, t, list(range(t.n)) + [e], root)


MOVES = {
    "subdivide_edge": subdivide_edge,
    "attach_leaf": attach_leaf,
    "attach_triod": attach_triod,
    "double_tree": double_tree,
    "stretch_leaf": stretch_leaf,
}


def move_sites(move: str, t: Graph, root: Optional[int]):
    """Every valid anchor of ``move`` in ``t`` (with the root for rooted moves)."""
    if move in ("attach_leaf", "attach_triod"):
        return list(range(t.n))
    if move == "subdivide_edge":
        return list(t.edges)
    if move == "double_tree":
        return [None] if root is not None else []
    if move == "stretch_leaf":
        return [
            (u, e)
            for e in range(t.n)
            if vertex_order(t, e) == 1 and e != root
            for u in t.neighbors[e]
        ]
    raise ValueError(f"unknown move {move!r}")


def apply_move(move: str, t: Graph, site, root: Optional[int]):
    if move == "double_tree":
        return double_tree(t, root)
    return MOVES[move](t, site, root)


def split_ramification(t: Graph):
    """Replace every vertex of order ``k > 3`` by a path of ``k - 2`` order-3
    vertices separated by order-2 spacers, and put a spacer on every edge
    joining two vertices of order at least 3.  Returns the new tree and the
    monotone collapse onto ``t``; members of the order-3 family come back
    unchanged with the identity.
    """
    if not is_tree(t):
        raise GraphError("split_ramification needs a tree")
    order = [vertex_order(t, v) for v in range(t.n)]
    assign = list(range(t.n))
    edges = []
    port = {}  # (v, neighbour) -> vertex of v's cluster carrying that edge

    def fresh(src):
        assign.append(src)
        return len(assign) - 1

    for v in range(t.n):
        nbrs = t.neighbors[v]
        k = len(nbrs)
        if k <= 3:
            for w in nbrs:
                port[v, w] = v
            continue
        rams = [v]
        for _ in range(k - 3):
            s = fresh(v)
            r = fresh(v)
            edges += [(rams[-1], s), (s, r)]
            rams.append(r)
        slots = [rams[0], rams[0]] + rams[1:-1] + [rams[-1], rams[-1]]
        for w, r in zip(nbrs, slots):
            port[v, w] = r
    for u, v in t.edges:
        pu, pv = port[u, v], port[v, u]
        if order[u] >= 3 and order[v] >= 3:
            s = fresh(min(u, v))
            edges += [(pu, s), (s, pv)]
        else:
            edges.append((pu, pv))
    h = Graph(len(assign), tuple(edges))
    return h, GraphMap(h, t, tuple(assign))


# ---------------------------------------------------------- amalgamators


def _monotone3(f, g):
    res = monotone_amalgamate(f, g)
    h, s = split_ramification(res.d)
    f0, g0 = compose(s, res.f0), compose(s, res.g0)
    return _result(f, g, h, f0.assign, g0.assign, None, ["monotone"], "monotone3")


AMALGAMATORS = {
    "monotone": monotone_amalgamate,
    "monotone3": _monotone3,
    "confluent": confluent_amalgamate,
    "confluent_end": lambda f, g: confluent_amalgamate(f, g, ends=True),
    "tree": tree_amalgamate,
    "endpreserving": end_preserving_amalgamate,
    "fan": lambda f, g: end_preserving_amalgamate(f, g, uniform=True),
}


def family_amalgamate(spec, f: GraphMap, g: GraphMap) -> AmalgamationResult:
    """Amalgamate with the family's construction and check the result is a
    family member with family maps."""
    spec = family(spec)
    res = AMALGAMATORS[spec.amalgamator](f, g)
    if not member(spec, res.d, res.root):
        raise AmalgamationError(f"{spec.name}: amalgamation left the family")
    if not (is_family_map(spec, res.f0) and is_family_map(spec, res.g0)):
        raise AmalgamationError(f"{spec.name}: projections are not family maps")
    return res


# ----------------------------------------------------------------- suites


def _instance(a, f, g):
    return {"A": list(a[0].edges), "n": a[0].n, "f": list(f.assign), "g": list(g.assign),
            "B": [f.dom.n, list(f.dom.edges)], "C": [g.dom.n, list(g.dom.edges)]}


def amalgamation_instances(spec, cap: int):
    """Every pair of family maps into a common family tree, with all trees
    up to ``cap`` vertices taken one per isomorphism class.  Unordered pairs
    of legs suffice because every amalgamator is symmetric up to swapping."""
    spec = family(spec)
    trees = family_trees(spec, cap)
    for a in trees:
        legs = []
        for b in trees:
            if b[0].n >= a[0].n:
                legs.extend(family_maps(spec, b, a))
        for i, j in itertools.combinations_with_replacement(range(len(legs)), 2):
            yield a, legs[i], legs[j]


def verify_amalgamation(spec, cap: int = 5, max_failures: int = 10) -> dict:
    spec = family(spec)
    count, failures = 0, []
    for a, f, g in amalgamation_instances(spec, cap):
        count += 1
        try:
            family_amalgamate(spec, f, g)
        except (AmalgamationError, PreconditionError) as exc:
            failures.append({"instance": _instance(a, f, g), "error": str(exc)})
            if len(failures) >= max_failures:
                break
    return {"family": spec.name, "suite": "amalgamation", "cap": cap,
            "instances": count, "failures": failures, "ok": not failures}


def _separated(h: Graph, f: GraphMap, a, b, c) -> bool:
    fib = f.fibers()
    return not any(
        h.has_edge(p, q) and h.has_edge(q, r)
        for p in fib[a] for q in fib[b] for r in fib[c]
    )


def _rooted_for(spec, g, r):
    # unrooted families are checked with vertex 0 as the root
    return r if r is not None else 0


def hypothesis_transitive(spec, cap: int = 5, report: bool = False):
    """For each family tree and each path ``a - b - c`` (``a != c``), subdividing
    ``a - b`` gives a family map under which no preimage triple is a path."""
    spec = family(spec)
    failures, checked = [], 0
    for g, r in family_trees(spec, cap):
        for b in range(g.n):
            for a in g.neighbors[b]:
                for c in g.neighbors[b]:
                    if a == c:
                        continue
                    checked += 1
                    h, f = subdivide_edge(g, (a, b), r)
                    ok = member(spec, h, r) and is_family_map(spec, f) and _separated(h, f, a, b, c)
                    if not ok:
                        failures.append({"tree": [g.n, list(g.edges)], "root": r, "triple": [a, b, c]})
    out = {"family": spec.name, "suite": "transitive", "cap": cap,
           "instances": checked, "failures": failures, "ok": not failures}
    return out if report else out["ok"]


def duplicated_end(h: Graph, f: GraphMap, root: int, a: int, e: int) -> bool:
    """Every ``p`` over ``a`` sits below two distinct comparable vertices over ``e``."""
    rt = RootedTree(h, root)
    fib = f.fibers()
    for p in fib[a]:
        if not any(
            q != s and rt.leq(p, q) and rt.leq(q, s)
            for q in fib[e] for s in fib[e]
        ):
            return False
    return True


def hypothesis_no_isolated_ends(spec, cap: int = 5, report: bool = False):
    """For each family tree and each leaf edge ``a - e`` with ``e`` not the
    root, stretching the leaf gives a family map duplicating ``e`` above
    every vertex over ``a``."""
    spec = family(spec)
    failures, checked = [], 0
    for g, r in family_trees(spec, cap):
        root = _rooted_for(spec, g, r)
        for a, e in move_sites("stretch_leaf", g, root):
            checked += 1
            h, f = stretch_leaf(g, (a, e), r if spec.rooted else None)
            ok = (
                member(spec, h, r)
                and is_family_map(spec, f)
                and duplicated_end(h, f, root, a, e)
            )
            if not ok:
                failures.append({"tree": [g.n, list(g.edges)], "root": r, "edge": [a, e]})
    out = {"family": spec.name, "suite": "ends", "cap": cap,
           "instances": checked, "failures": failures, "ok": not failures}
    return out if report else out["ok"]


SUITES = {
    "amalgamation": verify_amalgamation,
    "transitive": lambda spec, cap: hypothesis_transitive(spec, cap, report=True),
    "ends": lambda spec, cap: hypothesis_no_isolated_ends(spec, cap, report=True),
}


def run_suite(spec, suite: str, cap: int) -> dict:
    try:
        fn = SUITES[suite]
    except KeyError:
        raise ValueError(f"unknown suite {suite!r}") from None
    spec = family(spec)
    if suite != "amalgamation" and spec.structure == "uniform_fan":
        # surgery on one branch of a uniform fan leaves the family
        raise ValueError(f"suite {suite!r} is not defined for {spec.name}")
    return fn(spec, cap)
