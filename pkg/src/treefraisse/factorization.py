"""Monotone-light factorization of an epimorphism."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, _members, component_masks
from .morphisms import GraphMap, _require_epi


@dataclass(frozen=True)
class Factorization:
    middle: Graph
    m: GraphMap
    l: GraphMap
    classmap: tuple

    @property
    def middle_root(self):
        return None if self.m.roots is None else self.m.roots[1]


def ml_factorize(f: GraphMap) -> Factorization:
    """Split ``f`` as ``l o m``: ``m`` collapses each component of each fiber,
    ``l`` sends a class to the common image of its members.

    Classes are numbered by their smallest vertex.
    """
    _require_epi(f)
    dom = f.dom
    cls = [-1] * dom.n
    pieces = []
    for y in range(f.cod.n):
        pieces.extend(component_masks(dom, f.fiber_mask(y)))
    pieces.sort(key=lambda m: (m & -m).bit_length())
    for k, piece in enumerate(pieces):
        for v in _members(piece):
            cls[v] = k
    edges = {(min(cls[u], cls[v]), max(cls[u], cls[v])) for u, v in dom.edges if cls[u] != cls[v]}
    middle = Graph(len(pieces), tuple(sorted(edges)))
    images = [0] * len(pieces)
    for v in range(dom.n):
        images[cls[v]] = f.assign[v]
    m_roots = l_roots = None
    if f.roots is not None:
        rd, rc = f.roots
        m_roots = (rd, cls[rd])
        l_roots = (cls[rd], rc)
    m = GraphMap(dom, middle, tuple(cls), m_roots)
    l = GraphMap(middle, f.cod, tuple(images), l_roots)
    return Factorization(middle, m, l, tuple(cls))
