"""Vertex maps between graphs and the map classes used for tree families.

Every checker returns a :class:`PropertyReport`; a false verdict carries a
witness that can be re-verified independently (see ``witness_holds``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .graph import (
    Graph,
    GraphError,
    NotATreeError,
    _members,
    component_masks,
    end_vertices,
    is_tree,
    mask_connected,
)
from .rooted import RootedTree

PROPERTIES = ("homomorphism", "epi", "monotone", "confluent", "light", "order", "end")

_ALIASES = {
    "epimorphism": "epi",
    "order-preserving": "order",
    "order_preserving": "order",
    "end-preserving": "end",
    "end_preserving": "end",
    "hom": "homomorphism",
}


def normalize_property(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in PROPERTIES:
        raise ValueError(f"unknown map property {name!r}")
    return name


class MorphismError(ValueError):
    pass


class NotHomomorphismError(MorphismError):
    pass


class NotEpimorphismError(MorphismError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphMap:
    dom: Graph
    cod: Graph
    assign: tuple
    roots: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        assign = tuple(int(x) for x in self.assign)
        if len(assign) != self.dom.n:
            raise MorphismError(f"assignment has {len(assign)} entries for {self.dom.n} vertices")
        for x in assign:
            if not 0 <= x < self.cod.n:
                raise MorphismError(f"image {x} outside codomain range 0..{self.cod.n - 1}")
        object.__setattr__(self, "assign", assign)
        if self.roots is not None:
            rd, rc = self.roots
            if not (0 <= rd < self.dom.n and 0 <= rc < self.cod.n):
                raise MorphismError("roots out of range")
            object.__setattr__(self, "roots", (int(rd), int(rc)))

    def __call__(self, v: int) -> int:
        return self.assign[v]

    def fiber_mask(self, y: int) -> int:
        m = 0
        for v, x in enumerate(self.assign):
            if x == y:
                m |= 1 << v
        return m

    def preimage_mask(self, ys: Iterable[int]) -> int:
        ys = set(ys)
        m = 0
        for v, x in enumerate(self.assign):
            if x in ys:
                m |= 1 << v
        return m

    def fibers(self) -> list[list[int]]:
        out = [[] for _ in range(self.cod.n)]
        for v, x in enumerate(self.assign):
            out[x].append(v)
        return out

    def verdict(self, prop: str) -> bool:
        """Memoised verdict.  Advisory only: guarantees come from the checkers."""
        prop = normalize_property(prop)
        if prop not in self._cache:
            self._cache[prop] = check(self, prop).verdict
        return self._cache[prop]

    def dom_rooted(self) -> RootedTree:
        return RootedTree(self.dom, self._roots()[0])

    def cod_rooted(self) -> RootedTree:
        return RootedTree(self.cod, self._roots()[1])

    def _roots(self):
        if self.roots is None:
            raise MorphismError("map carries no roots")
        return self.roots


def identity(g: Graph, root: Optional[int] = None) -> GraphMap:
    roots = None if root is None else (root, root)
    return GraphMap(g, g, tuple(range(g.n)), roots)


def constant_map(g: Graph, root: Optional[int] = None) -> GraphMap:
    """The map of ``g`` onto the one-vertex graph."""
    roots = None if root is None else (root, 0)
    return GraphMap(g, Graph(1), (0,) * g.n, roots)


def rooted_map(dom: RootedTree, cod: RootedTree, assign) -> GraphMap:
    return GraphMap(dom.tree, cod.tree, tuple(assign), roots=(dom.root, cod.root))


@dataclass(frozen=True)
class PropertyReport:
    property: str
    verdict: bool
    witness: Any = None

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        return {"property": self.property, "verdict": self.verdict, "witness": self.witness}


# ------------------------------------------------------------------ checkers


def is_homomorphism(f: GraphMap) -> PropertyReport:
    a, cod = f.assign, f.cod
    for u, v in f.dom.edges:
        if not cod.has_edge(a[u], a[v]):
            return PropertyReport("homomorphism", False, {"edge": [u, v]})
    return PropertyReport("homomorphism", True)


def is_epimorphism(f: GraphMap) -> PropertyReport:
    if not is_homomorphism(f):
        raise NotHomomorphismError("map does not send edges to edges")
    hit = set(f.assign)
    for y in range(f.cod.n):
        if y not in hit:
            return PropertyReport("epi", False, {"missed_vertex": y})
    a = f.assign
    covered = {(min(a[u], a[v]), max(a[u], a[v])) for u, v in f.dom.edges if a[u] != a[v]}
    for e in f.cod.edges:
        if e not in covered:
            return PropertyReport("epi", False, {"uncovered_edge": list(e)})
    return PropertyReport("epi", True)


def _require_epi(f: GraphMap):
    if not is_epimorphism(f):
        raise NotEpimorphismError("map is not an epimorphism")


def is_monotone(f: GraphMap) -> PropertyReport:
    _require_epi(f)
    for y in range(f.cod.n):
        m = f.fiber_mask(y)
        if not mask_connected(f.dom, m):
            return PropertyReport("monotone", False, {"vertex": y, "fiber": _members(m)})
    return PropertyReport("monotone", True)


def is_confluent(f: GraphMap) -> PropertyReport:
    """Edge form: every component of the preimage of a codomain edge contains
    a domain edge mapped onto it."""
    _require_epi(f)
    a, dom = f.assign, f.dom
    for x, y in f.cod.edges:
        pre = f.preimage_mask((x, y))
        for comp in component_masks(dom, pre):
            ok = False
            for u in _members(comp):
                if a[u] != x:
                    continue
                nb = dom.adj[u] & comp
                if any(a[w] == y for w in _members(nb)):
                    ok = True
                    break
            if not ok:
                return PropertyReport(
                    "confluent", False, {"edge": [x, y], "component": _members(comp)}
                )
    return PropertyReport("confluent", True)


def is_light(f: GraphMap) -> PropertyReport:
    _require_epi(f)
    a = f.assign
    for u, v in f.dom.edges:
        if a[u] == a[v]:
            return PropertyReport("light", False, {"edge": [u, v], "vertex": a[u]})
    return PropertyReport("light", True)


def _roots_of(f: GraphMap, root_dom, root_cod):
    if root_dom is None or root_cod is None:
        if f.roots is None:
            raise MorphismError("order checks need roots")
        return f.roots
    return root_dom, root_cod


def is_order_preserving(f: GraphMap, root_dom=None, root_cod=None) -> PropertyReport:
    rd, rc = _roots_of(f, root_dom, root_cod)
    if not (is_tree(f.dom) and is_tree(f.cod)):
        raise NotATreeError("order preservation is defined between rooted trees")
    s, t = RootedTree(f.dom, rd), RootedTree(f.cod, rc)
    a = f.assign
    if a[rd] != rc:
        return PropertyReport("order", False, {"root_image": a[rd]})
    for y in range(s.n):
        for x in _members(s.ancestors[y]):
            if not t.leq(a[x], a[y]):
                return PropertyReport("order", False, {"pair": [x, y]})
    return PropertyReport("order", True)


def map_ends(f: GraphMap, roots=None) -> tuple[frozenset, frozenset]:
    """End vertices of domain and codomain.  For rooted trees these are the
    maximal elements of the root order, so a root is an end only in a
    one-vertex tree; otherwise the vertices of order at most one."""
    if roots is None:
        roots = f.roots
    if roots is None:
        return end_vertices(f.dom), end_vertices(f.cod)
    rd, rc = roots
    return (frozenset(RootedTree(f.dom, rd).leaves()),
            frozenset(RootedTree(f.cod, rc).leaves()))


def is_end_preserving(f: GraphMap, roots=None) -> PropertyReport:
    """Ends go to ends; when roots are known the map must also preserve order."""
    if roots is None:
        roots = f.roots
    if roots is not None:
        rep = is_order_preserving(f, *roots)
        if not rep:
            return PropertyReport("end", False, {"order": rep.witness})
    dom_ends, cod_ends = map_ends(f, roots)
    for v in sorted(dom_ends):
        if f.assign[v] not in cod_ends:
            return PropertyReport("end", False, {"end_vertex": v, "image": f.assign[v]})
    return PropertyReport("end", True)


def check(f: GraphMap, prop: str) -> PropertyReport:
    prop = normalize_property(prop)
    if prop == "homomorphism":
        return is_homomorphism(f)
    if prop == "epi":
        return is_epimorphism(f)
    if prop == "monotone":
        return is_monotone(f)
    if prop == "confluent":
        return is_confluent(f)
    if prop == "light":
        return is_light(f)
    if prop == "order":
        return is_order_preserving(f)
    return is_end_preserving(f)


def satisfies(f: GraphMap, constraints: Iterable[str]) -> bool:
    """Epimorphism plus every named property."""
    if not is_homomorphism(f) or not is_epimorphism(f):
        return False
    return all(check(f, p).verdict for p in constraints)


def witness_holds(f: GraphMap, report: PropertyReport) -> bool:
    """Re-check a negative report's witness without calling the checker."""
    w, a, dom, cod = report.witness, f.assign, f.dom, f.cod
    p = report.property
    if report.verdict or w is None:
        return False
    if p == "homomorphism":
        u, v = w["edge"]
        return dom.has_edge(u, v) and not cod.has_edge(a[u], a[v])
    if p == "epi":
        if "missed_vertex" in w:
            return w["missed_vertex"] not in a
        x, y = w["uncovered_edge"]
        return not any({a[u], a[v]} == {x, y} for u, v in dom.edges)
    if p == "monotone":
        fib = w["fiber"]
        return all(a[v] == w["vertex"] for v in fib) and not mask_connected(
            dom, sum(1 << v for v in fib)
        )
    if p == "confluent":
        x, y = w["edge"]
        comp = set(w["component"])
        if not all(a[v] in (x, y) for v in comp):
            return False
        return not any(
            u in comp and v in comp and {a[u], a[v]} == {x, y} for u, v in dom.edges
        )
    if p == "light":
        u, v = w["edge"]
        return dom.has_edge(u, v) and u != v and a[u] == a[v]
    if p == "end" and f.roots is None:
        v = w["end_vertex"]
        return v in end_vertices(dom) and a[v] not in end_vertices(cod)
    if p in ("order", "end"):
        if "order" in w:
            w = w["order"]
        rd, rc = f.roots
        s, t = RootedTree(dom, rd), RootedTree(cod, rc)
        if "root_image" in w:
            return a[rd] != rc
        if "pair" in w:
            x, y = w["pair"]
            return s.leq(x, y) and not t.leq(a[x], a[y])
        v = w["end_vertex"]
        return v in s.leaves() and a[v] not in t.leaves()
    return False


# --------------------------------------------------------------- composition


def compose(f: GraphMap, g: GraphMap) -> GraphMap:
    """``g o f`` (apply ``f`` first)."""
    if f.cod != g.dom or f.cod.n != g.dom.n:
        raise MorphismError("codomain of the first map must be the domain of the second")
    roots = None
    if f.roots is not None and g.roots is not None:
        roots = (f.roots[0], g.roots[1])
    return GraphMap(f.dom, g.cod, tuple(g.assign[x] for x in f.assign), roots)


def compose_all(*maps: GraphMap) -> GraphMap:
    """``compose_all(f1, f2, f3) == f3 o f2 o f1``."""
    out = maps[0]
    for m in maps[1:]:
        out = compose(out, m)
    return out


# --------------------------------------------------------------- enumeration


def _search_order(g: Graph, start: int) -> tuple[list[int], list[int]]:
    """Vertex order in which every vertex after the first in its component has
    an earlier neighbour; also returns that neighbour (-1 for component starts)."""
    order, parent = [], [-2] * g.n
    starts = [start] + [v for v in range(g.n) if v != start]
    for s in starts:
        if parent[s] != -2:
            continue
        parent[s] = -1
        order.append(s)
        i = len(order) - 1
        while i < len(order):
            u = order[i]
            for w in g.neighbors[u]:
                if parent[w] == -2:
                    parent[w] = u
                    order.append(w)
            i += 1
    return order, parent


def enumerate_epis(
    dom: Graph,
    cod: Graph,
    constraints: Iterable[str] = (),
    roots: Optional[tuple] = None,
    max_vertices: int = 10,
    limit: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> list[GraphMap]:
    """All epimorphisms ``dom -> cod`` satisfying ``constraints``, sorted by assignment.

    Partial assignments are pruned on homomorphism, lightness, fiber
    connectivity (tree domains), root order and end vertices; every survivor
    is re-verified by the checkers.  ``limit`` stops after that many maps (the
    result is then the first ``limit`` maps in search order, not sorted order).
    ``node_budget`` caps the number of search nodes; the maps found so far
    are returned when it runs out, so the result is then incomplete.
    """
    cons = {normalize_property(c) for c in constraints} - {"epi", "homomorphism"}
    if dom.n > max_vertices:
        raise SearchBudgetExceeded(f"domain has {dom.n} vertices, budget is {max_vertices}")
    if ("order" in cons or "end" in cons) and roots is None:
        raise MorphismError("order/end constraints need roots")
    if cod.n > dom.n or len(cod.edges) > len(dom.edges):
        return []

    dom_tree = is_tree(dom)
    rooted = roots is not None and dom_tree and is_tree(cod)
    if rooted:
        s, t = RootedTree(dom, roots[0]), RootedTree(cod, roots[1])
    order, parent = _search_order(dom, roots[0] if roots else 0)
    closed = [cod.adj[y] | (1 << y) for y in range(cod.n)]
    dom_ends = cod_ends = None
    if "end" in cons:
        if roots is None:
            dom_ends, cod_ends = end_vertices(dom), end_vertices(cod)
        else:
            dom_ends = frozenset(RootedTree(dom, roots[0]).leaves())
            cod_ends = frozenset(RootedTree(cod, roots[1]).leaves())
    want_light = "light" in cons
    want_mono = "monotone" in cons and dom_tree
    want_order = rooted and ("order" in cons or "end" in cons)
    assign = [-1] * dom.n
    used = [0] * cod.n
    out: list[GraphMap] = []
    n = dom.n
    full_cod = cod.n
    nodes = [0]

    def candidates(i):
        v = order[i]
        if want_order and v == roots[0]:
            return [roots[1]]
        allowed = (1 << full_cod) - 1
        for w in dom.neighbors[v]:
            x = assign[w]
            if x >= 0:
                allowed &= closed[x]
                if want_light:
                    allowed &= ~(1 << x)
        p = parent[v]
        if want_order and p >= 0:
            fp = assign[p]
            allowed &= (1 << fp) | sum(1 << c for c in t.children[fp])
        if want_mono and p >= 0:
            fp = assign[p]
            free = 0
            for y in range(full_cod):
                if used[y] == 0:
                    free |= 1 << y
            allowed &= free | (1 << fp)
        if cod_ends is not None and v in dom_ends:
            allowed &= sum(1 << y for y in cod_ends)
        return _members(allowed)

    def rec(i, unhit):
        if limit is not None and len(out) >= limit:
            return
        if node_budget is not None:
            nodes[0] += 1
            if nodes[0] > node_budget:
                return
        if i == n:
            if unhit:
                return
            f = GraphMap(dom, cod, tuple(assign), roots)
            if satisfies(f, cons):
                out.append(f)
            return
        if unhit > n - i:
            return
        v = order[i]
        for x in candidates(i):
            assign[v] = x
            used[x] += 1
            rec(i + 1, unhit - (1 if used[x] == 1 else 0))
            used[x] -= 1
        assign[v] = -1

    rec(0, cod.n)
    if limit is None:
        out.sort(key=lambda f: f.assign)
    return out


def find_epi(dom, cod, constraints=(), roots=None, max_vertices=64) -> Optional[GraphMap]:
    found = enumerate_epis(dom, cod, constraints, roots, max_vertices=max_vertices, limit=1)
    return found[0] if found else None
