"""Brute-force reference implementations.

Nothing here imports the package's checkers: graphs are plain (n, edge set)
data, maps are tuples, and every predicate follows its textbook definition
by exhaustive enumeration.  networkx is used for isomorphism and tree
generation only.
"""

import itertools

import networkx as nx


def nxg(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def adjacent(edges, u, v):
    return u == v or (u, v) in edges or (v, u) in edges


def connected(n, edges, verts):
    verts = set(verts)
    if not verts:
        return True
    start = next(iter(verts))
    seen, todo = {start}, [start]
    while todo:
        u = todo.pop()
        for w in verts:
            if w not in seen and adjacent(edges, u, w):
                seen.add(w)
                todo.append(w)
    return seen == verts


def comps(edges, verts):
    verts, out = set(verts), []
    while verts:
        v = verts.pop()
        part, todo = {v}, [v]
        while todo:
            u = todo.pop()
            for w in list(verts):
                if adjacent(edges, u, w):
                    verts.discard(w)
                    part.add(w)
                    todo.append(w)
        out.append(part)
    return out


def connected_subsets(n, edges):
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            if connected(n, edges, s):
                yield set(s)


# ------------------------------------------------------------------ maps


def is_hom(dom, cod, a):
    return all(adjacent(cod.edges, a[u], a[v]) for u, v in dom.edges)


def is_epi(dom, cod, a):
    if not is_hom(dom, cod, a) or set(a) != set(range(cod.n)):
        return False
    hit = {frozenset((a[u], a[v])) for u, v in dom.edges}
    return all(frozenset(e) in hit for e in cod.edges)


def all_epis(dom, cod):
    for a in itertools.product(range(cod.n), repeat=dom.n):
        if is_epi(dom, cod, a):
            yield a


def fiber(a, y):
    return [v for v, x in enumerate(a) if x == y]


def monotone(dom, cod, a):
    return all(connected(dom.n, dom.edges, fiber(a, y)) for y in range(cod.n))


def light(dom, cod, a):
    return all(a[u] != a[v] for u, v in dom.edges)


def confluent(dom, cod, a):
    """Every component of the preimage of every connected set maps onto it."""
    for q in connected_subsets(cod.n, cod.edges):
        pre = [v for v in range(dom.n) if a[v] in q]
        for c in comps(dom.edges, pre):
            if {a[v] for v in c} != q:
                return False
    return True


def path(g, a, b):
    return nx.shortest_path(nxg(g), a, b)


def leq(g, root, x, y):
    return x in path(g, root, y)


def leaves(g, root):
    """Maximal elements of the root order."""
    return {y for y in range(g.n) if not any(z != y and leq(g, root, y, z) for z in range(g.n))}


def order_preserving(dom, cod, a, roots):
    rd, rc = roots
    if a[rd] != rc:
        return False
    return all(leq(cod, rc, a[x], a[y]) for x in range(dom.n) for y in range(dom.n) if leq(dom, rd, x, y))


def end_preserving(dom, cod, a, roots):
    ce = leaves(cod, roots[1])
    return order_preserving(dom, cod, a, roots) and all(a[x] in ce for x in leaves(dom, roots[0]))


PREDICATES = {"monotone": monotone, "light": light, "confluent": confluent}


# ------------------------------------------------------------------ trees


def free_trees(n):
    if n == 1:
        G = nx.Graph()
        G.add_node(0)
        return [G]
    return list(nx.nonisomorphic_trees(n))


def tree_count(n):
    return len(free_trees(n))


def isomorphic(g, h, roots=None):
    G, H = nxg(g), nxg(h)
    if roots is None:
        return nx.is_isomorphic(G, H)
    for X, r in ((G, roots[0]), (H, roots[1])):
        nx.set_node_attributes(X, {v: v == r for v in X.nodes}, "root")
    return nx.is_isomorphic(G, H, node_match=lambda p, q: p["root"] == q["root"])


def unicoherent(g):
    """Connected subgraphs covering ``g`` meet in a connected set."""
    subs = [frozenset(s) for s in connected_subsets(g.n, g.edges)]
    full = frozenset(range(g.n))
    return all(connected(g.n, g.edges, p & q) for p in subs for q in subs if p | q == full)


def blocks_complete(g):
    G = nxg(g)
    return all(G.subgraph(b).number_of_edges() == len(b) * (len(b) - 1) // 2 for b in nx.biconnected_components(G))
