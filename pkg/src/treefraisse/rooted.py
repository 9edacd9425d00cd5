"""Rooted trees, the root order, branches and fans."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .graph import Graph, GraphError, NotATreeError, bfs_parents, is_tree


@dataclass(frozen=True)
class RootedTree:
    tree: Graph
    root: int

    def __post_init__(self):
        if not is_tree(self.tree):
            raise NotATreeError("a rooted tree needs an underlying tree")
        if not 0 <= self.root < self.tree.n:
            raise GraphError(f"root {self.root} out of range")

    @property
    def n(self) -> int:
        return self.tree.n

    @cached_property
    def parent(self) -> tuple:
        return tuple(bfs_parents(self.tree, self.root))

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depth(self) -> tuple:
        d = [0] * self.n
        for v in self.bfs_order:
            p = self.parent[v]
            if p >= 0:
                d[v] = d[p] + 1
        return tuple(d)

    @cached_property
    def bfs_order(self) -> tuple:
        order = [self.root]
        for v in order:
            order.extend(self.children[v])
        return tuple(order)

    @cached_property
    def ancestors(self) -> tuple:
        """Bitmask of the vertices on the root path of each vertex (itself included)."""
        anc = [0] * self.n
        for v in self.bfs_order:
            p = self.parent[v]
            anc[v] = (anc[p] if p >= 0 else 0) | (1 << v)
        return tuple(anc)

    def leq(self, x: int, y: int) -> bool:
        """``x <= y`` iff ``x`` lies on the path from the root to ``y``."""
        return bool(self.ancestors[y] >> x & 1)

    def root_path(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] >= 0:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def leaves(self) -> list[int]:
        """Maximal elements of the root order."""
        return [v for v in range(self.n) if not self.children[v]]


def root_order(t: RootedTree):
    """Return the ``leq`` predicate of the root order."""
    return t.leq


@dataclass(frozen=True)
class Chain:
    """A root-anchored, strictly increasing, edge-adjacent vertex sequence."""

    verts: tuple

    def __len__(self):
        return len(self.verts)

    @property
    def top(self):
        return self.verts[-1]


def branches(t: RootedTree) -> list[Chain]:
    """All maximal chains, one per leaf of the root order, in leaf-index order."""
    return [Chain(tuple(t.root_path(v))) for v in t.leaves()]


def is_fan(t: RootedTree) -> bool:
    """Only the root may be adjacent to two incomparable vertices."""
    nbrs = t.tree.neighbors
    for p in range(t.n):
        if p == t.root:
            continue
        ns = nbrs[p]
        for i, s in enumerate(ns):
            for u in ns[i + 1:]:
                if not t.leq(s, u) and not t.leq(u, s):
                    return False
    return True


def is_uniform_fan(t: RootedTree) -> bool:
    return is_fan(t) and len({len(b) for b in branches(t)}) == 1


def _fan_from_lengths(sources: list[tuple], length: int):
    """Build a fan with one branch of ``length`` vertices per source chain.

    Vertex k of branch i maps to vertex ``min(k, len-1)`` of source chain i;
    returns the fan and the assignment.
    """
    edges = []
    assign = [sources[0][0]]
    n = 1
    for src in sources:
        prev = 0
        for k in range(1, length):
            edges.append((prev, n))
            assign.append(src[min(k, len(src) - 1)])
            prev = n
            n += 1
    return RootedTree(Graph(n, tuple(edges)), 0), assign


def tree_to_uniform_fan(t: RootedTree):
    """Uniform fan over ``t`` with one branch per branch of ``t``.

    Every branch has the length of the longest branch of ``t``; the surplus
    tail of a shorter branch maps onto that branch's leaf.
    """
    from .morphisms import GraphMap

    chains = [b.verts for b in branches(t)]
    length = max(len(c) for c in chains)
    fan, assign = _fan_from_lengths(chains, length)
    return fan, GraphMap(fan.tree, t.tree, tuple(assign), roots=(fan.root, t.root))


def stretch_fan(f: RootedTree, length: int):
    """Lengthen every branch of the uniform fan ``f`` to ``length`` vertices."""
    from .morphisms import GraphMap

    if not is_uniform_fan(f):
        raise GraphError("stretch_fan needs a uniform fan")
    chains = [b.verts for b in branches(f)]
    if length < len(chains[0]):
        raise GraphError(f"cannot stretch branches of length {len(chains[0])} to {length}")
    if length == len(chains[0]):
        return f, GraphMap(f.tree, f.tree, tuple(range(f.n)), roots=(f.root, f.root))
    fan, assign = _fan_from_lengths(chains, length)
    return fan, GraphMap(fan.tree, f.tree, tuple(assign), roots=(fan.root, f.root))
