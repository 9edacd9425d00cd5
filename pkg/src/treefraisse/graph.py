"""Finite reflexive graphs: connectivity, arcs, trees and vertex orders.

Vertices are the integers ``0..n-1``.  Only nondegenerate edges are stored;
every loop ``<v, v>`` is implicitly present, so the full edge relation is
reflexive and symmetric by construction.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence


class GraphError(ValueError):
    """Invalid graph data or a precondition violated by a graph argument."""


class NotATreeError(GraphError):
    pass


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple = ()
    labels: Optional[tuple] = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise GraphError(f"vertex count must be a non-negative int, got {self.n!r}")
        seen = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {e!r} references a vertex outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"loop {e!r} must not be stored; loops are implicit")
            seen.add((min(u, v), max(u, v)))
        if len(seen) != len(self.edges):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise GraphError("labels must have one entry per vertex")
            object.__setattr__(self, "labels", labels)

    # equality ignores labels: they are display names only
    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"

    @cached_property
    def adj(self) -> tuple:
        """Open neighbourhood of every vertex as a bitmask."""
        nb = [0] * self.n
        for u, v in self.edges:
            nb[u] |= 1 << v
            nb[v] |= 1 << u
        return tuple(nb)

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(tuple(_members(m)) for m in self.adj)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        """Membership in the full (reflexive) edge relation."""
        return u == v or bool(self.adj[u] >> v & 1)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def with_labels(self, labels: Sequence) -> "Graph":
        return Graph(self.n, self.edges, tuple(labels))

    def index(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices`` (renumbered in sorted order) and the old ids."""
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        labels = None if self.labels is None else [self.labels[v] for v in keep]
        return Graph(len(keep), tuple(edges), labels), keep

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Relabel vertex ``v`` as ``perm[v]``."""
        edges = tuple((perm[u], perm[v]) for u, v in self.edges)
        labels = None
        if self.labels is not None:
            labels = [None] * self.n
            for v, p in enumerate(perm):
                labels[p] = self.labels[v]
        return Graph(self.n, edges, labels)


def labelled(names: Sequence[str], edges: Iterable[tuple[str, str]]) -> Graph:
    """Build a graph from vertex names; handy for transcribing worked examples."""
    idx = {name: i for i, name in enumerate(names)}
    return Graph(len(names), tuple((idx[a], idx[b]) for a, b in edges), tuple(names))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """Star with centre 0 and ``leaves`` end vertices."""
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


# ---------------------------------------------------------------- connectivity


@dataclass(frozen=True)
class ComponentPartition:
    """Vertex -> component id, ids numbered by smallest member."""

    comp: dict
    count: int

    @property
    def parts(self) -> list[frozenset]:
        out = [set() for _ in range(self.count)]
        for v, c in self.comp.items():
            out[c].add(v)
        return [frozenset(p) for p in out]


def _as_mask(g: Graph, s) -> int:
    if s is None:
        return g.full
    if isinstance(s, int):
        mask = s
    else:
        mask = 0
        for v in s:
            if not isinstance(v, int) or not 0 <= v < g.n:
                raise GraphError(f"vertex {v!r} out of range for graph on {g.n} vertices")
            mask |= 1 << v
    if mask >> g.n:
        raise GraphError("vertex set exceeds the graph's vertex range")
    return mask


def component_masks(g: Graph, mask: int) -> list[int]:
    """Components of the induced subgraph on ``mask``, as bitmasks."""
    adj = g.adj
    out = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adj[b.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        rest &= ~comp
    return out


def mask_connected(g: Graph, mask: int) -> bool:
    if mask == 0:
        return True
    adj = g.adj
    low = mask & -mask
    comp = frontier = low
    while frontier:
        b = frontier & -frontier
        frontier ^= b
        new = adj[b.bit_length() - 1] & mask & ~comp
        comp |= new
        frontier |= new
    return comp == mask


def components(g: Graph, s=None) -> ComponentPartition:
    mask = _as_mask(g, s)
    comp = {}
    masks = component_masks(g, mask)
    for i, m in enumerate(masks):
        for v in _members(m):
            comp[v] = i
    return ComponentPartition(comp, len(masks))


def is_connected(g: Graph, s=None) -> bool:
    return mask_connected(g, _as_mask(g, s))


def is_tree(g: Graph) -> bool:
    return g.n > 0 and len(g.edges) == g.n - 1 and mask_connected(g, g.full)


def vertex_order(g: Graph, v: int) -> int:
    return bin(g.adj[v]).count("1")


def end_vertices(g: Graph) -> frozenset:
    """Vertices of order at most one (an isolated vertex counts)."""
    return frozenset(v for v in range(g.n) if vertex_order(g, v) <= 1)


def ramification_vertices(g: Graph) -> frozenset:
    return frozenset(v for v in range(g.n) if vertex_order(g, v) >= 3)


def is_arc(g: Graph) -> Optional[tuple[int, int]]:
    """Endpoints of ``g`` if it is a finite arc (a path on >= 2 vertices), else None."""
    if g.n < 2 or not is_tree(g):
        return None
    orders = [vertex_order(g, v) for v in range(g.n)]
    if max(orders) > 2:
        return None
    ends = [v for v, k in enumerate(orders) if k == 1]
    return ends[0], ends[1]


def bfs_parents(g: Graph, root: int) -> list[int]:
    """Parent array of a breadth-first search (root's parent is -1; unreached are -2)."""
    parent = [-2] * g.n
    parent[root] = -1
    queue = deque([root])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if parent[w] == -2:
                parent[w] = u
                queue.append(w)
    return parent


def distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def unique_path(g: Graph, a: int, b: int) -> list[int]:
    if not is_tree(g):
        raise NotATreeError("unique_path needs a tree")
    parent = bfs_parents(g, a)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def find_cycle(g: Graph) -> Optional[list[int]]:
    """A cycle found by depth-first search, or None when ``g`` is a forest."""
    parent = [-2] * g.n
    nbrs = g.neighbors
    for s in range(g.n):
        if parent[s] != -2:
            continue
        parent[s] = -1
        stack = [(s, iter(nbrs[s]))]
        while stack:
            u, it = stack[-1]
            for w in it:
                if w == parent[u]:
                    continue
                if parent[w] != -2:
                    cyc = [u]
                    while cyc[-1] != w:
                        cyc.append(parent[cyc[-1]])
                        if cyc[-1] < 0:
                            break
                    if cyc[-1] == w:
                        return cyc
                    continue
                parent[w] = u
                stack.append((w, iter(nbrs[w])))
                break
            else:
                stack.pop()
    return None


# ------------------------------------------------------------ canonical forms


def _ahu(nbrs, v, parent) -> str:
    kids = sorted(_ahu(nbrs, w, v) for w in nbrs[v] if w != parent)
    return "(" + "".join(kids) + ")"


def tree_centers(g: Graph) -> list[int]:
    if g.n <= 2:
        return list(range(g.n))
    deg = [vertex_order(g, v) for v in range(g.n)]
    layer = [v for v in range(g.n) if deg[v] <= 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in g.neighbors[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _refine_colors(g: Graph) -> list[int]:
    colors = [vertex_order(g, v) for v in range(g.n)]
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in g.neighbors[v]))) for v in range(g.n)]
        table = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [table[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _graph_form(g: Graph) -> bytes:
    colors = _refine_colors(g)
    classes = sorted(set(colors))
    groups = [[v for v in range(g.n) if colors[v] == c] for c in classes]
    best = None
    for parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        order = [v for part in parts for v in part]
        pos = {v: i for i, v in enumerate(order)}
        bits = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges))
        if best is None or bits < best:
            best = bits
    body = ";".join(f"{u},{v}" for u, v in best or ())
    cls = ",".join(str(len(grp)) for grp in groups)
    return f"G{g.n}|{cls}|{body}".encode()


def canonical_form(g: Graph, root: Optional[int] = None) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic.

    With ``root`` the form is that of the rooted graph (isomorphisms must
    fix the root); only trees are supported in that case.
    """
    if root is not None:
        if not is_tree(g):
            raise NotATreeError("rooted canonical forms are defined for trees only")
        return b"R" + _ahu(g.neighbors, root, -1).encode()
    if g.n == 0:
        return b"T"
    if is_tree(g):
        return b"T" + min(_ahu(g.neighbors, c, -1) for c in tree_centers(g)).encode()
    return _graph_form(g)


def _grow(forms: dict, rooted: bool) -> dict:
    out = {}
    for key, (g, r) in forms.items():
        for v in range(g.n):
            h = Graph(g.n + 1, g.edges + ((v, g.n),))
            k = canonical_form(h, r if rooted else None)
            if k not in out:
                out[k] = (h, r)
    return out


def enumerate_trees(n: int) -> list[Graph]:
    """One representative per isomorphism class of trees on exactly ``n`` vertices."""
    if n < 1:
        raise GraphError("trees have at least one vertex")
    if n > 12:
        raise GraphError("tree enumeration is capped at 12 vertices")
    forms = {canonical_form(Graph(1)): (Graph(1), None)}
    for _ in range(n - 1):
        forms = _grow(forms, rooted=False)
    return [g for key, (g, _) in sorted(forms.items())]


def enumerate_rooted_trees(n: int) -> list[tuple[Graph, int]]:
    """One (tree, root) per isomorphism class of rooted trees on ``n`` vertices."""
    if n < 1:
        raise GraphError("trees have at least one vertex")
    if n > 12:
        raise GraphError("tree enumeration is capped at 12 vertices")
    forms = {canonical_form(Graph(1), 0): (Graph(1), 0)}
    for _ in range(n - 1):
        forms = _grow(forms, rooted=True)
    return [gr for key, gr in sorted(forms.items())]


def trees_up_to(n: int) -> list[Graph]:
    return [t for k in range(1, n + 1) for t in enumerate_trees(k)]


def rooted_trees_up_to(n: int) -> list[tuple[Graph, int]]:
    return [t for k in range(1, n + 1) for t in enumerate_rooted_trees(k)]
