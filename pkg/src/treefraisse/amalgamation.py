"""Amalgamation of two epimorphisms with a common codomain.

Given ``f: B -> A`` and ``g: C -> A`` every construction here returns a
graph ``D`` with ``f0: D -> B`` and ``g0: D -> C`` such that
``f o f0 == g o g0``, together with a recomputed certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .factorization import ml_factorize
from .graph import (
    Graph,
    _members,
    component_masks,
    components,
    enumerate_rooted_trees,
    enumerate_trees,
    is_tree,
)
from .morphisms import (
    GraphMap,
    MorphismError,
    check,
    compose,
    compose_all,
    enumerate_epis,
    is_homomorphism,
    normalize_property,
)
from .rooted import RootedTree, branches, stretch_fan, tree_to_uniform_fan


class AmalgamationError(RuntimeError):
    """A construction did not produce a certified result."""


class PreconditionError(ValueError):
    pass


class NoAmalgamationError(AmalgamationError):
    """The inputs provably admit no amalgamation of the requested kind."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Certificate:
    """Recomputed verdicts for both projections.  ``optional`` names
    properties that are reported but do not count towards ``ok``."""

    commutes: bool
    is_tree: bool
    f0: dict
    g0: dict
    optional: tuple = ()

    @property
    def ok(self) -> bool:
        need = [p for p in self.f0 if p not in self.optional]
        return self.commutes and all(self.f0[p] and self.g0[p] for p in need)

    def holds(self, prop) -> bool:
        prop = normalize_property(prop)
        return bool(self.f0.get(prop) and self.g0.get(prop))

    def to_dict(self) -> dict:
        out = {"commutes": self.commutes, "is_tree": self.is_tree, "f0": dict(self.f0), "g0": dict(self.g0)}
        if self.optional:
            out["optional"] = list(self.optional)
        return out


@dataclass(frozen=True)
class AmalgamationResult:
    d: Graph
    f0: GraphMap
    g0: GraphMap
    certificate: Certificate
    root: Optional[int] = None
    method: str = ""

    @property
    def ok(self) -> bool:
        return self.certificate.ok


def _verdicts(h: GraphMap, props) -> dict:
    out = {}
    if not is_homomorphism(h):
        out["epi"] = False
        out.update({p: False for p in props})
        return out
    out["epi"] = check(h, "epi").verdict
    for p in props:
        out[p] = check(h, p).verdict if out["epi"] else False
    return out


def certify(f: GraphMap, g: GraphMap, f0: GraphMap, g0: GraphMap, props=(), optional=()) -> Certificate:
    optional = tuple(normalize_property(p) for p in optional)
    props = [normalize_property(p) for p in props]
    props += [p for p in optional if p not in props]
    commutes = (
        f0.dom == g0.dom
        and f0.cod == f.dom
        and g0.cod == g.dom
        and all(f.assign[x] == g.assign[y] for x, y in zip(f0.assign, g0.assign))
    )
    return Certificate(commutes, is_tree(f0.dom), _verdicts(f0, props), _verdicts(g0, props), optional)


def _result(f, g, d, a, b, root, props, method, require_tree=True, optional=()) -> AmalgamationResult:
    roots_b = roots_c = None
    if root is not None:
        roots_b, roots_c = (root, f.roots[0]), (root, g.roots[0])
    f0 = GraphMap(d, f.dom, tuple(a), roots_b)
    g0 = GraphMap(d, g.dom, tuple(b), roots_c)
    cert = certify(f, g, f0, g0, props, optional)
    res = AmalgamationResult(d, f0, g0, cert, root, method)
    if not cert.ok or (require_tree and not cert.is_tree):
        raise AmalgamationError(f"{method}: construction failed its certificate {cert.to_dict()}")
    return res


def _same_codomain(f: GraphMap, g: GraphMap):
    if f.cod != g.cod:
        raise PreconditionError("the two maps must share their codomain")


def _rooted_pair(f: GraphMap, g: GraphMap) -> bool:
    return f.roots is not None and g.roots is not None


def _require(f, g, props, what):
    for name, h in (("f", f), ("g", g)):
        for p in props:
            try:
                ok = check(h, p).verdict
            except (MorphismError, ValueError) as exc:
                raise PreconditionError(f"{what}: {name} {exc}") from exc
            if not ok:
                raise PreconditionError(f"{what}: {name} is not {p}")


# ---------------------------------------------------------------- pullback


@dataclass(frozen=True)
class OrderedPullback:
    """Pairs ``(b, c)`` with ``f(b) == g(c)``, sorted, with componentwise edges."""

    graph: Graph
    pairs: tuple
    f0: GraphMap
    g0: GraphMap
    root: Optional[int] = None
    _orders: Optional[tuple] = field(default=None, compare=False, repr=False)

    def index(self, pair) -> int:
        return self.pairs.index(tuple(pair))

    def leq(self, u: int, v: int) -> bool:
        """Product of the two root orders."""
        if self._orders is None:
            raise PreconditionError("pullback of unrooted maps carries no order")
        sb, sc = self._orders
        (b1, c1), (b2, c2) = self.pairs[u], self.pairs[v]
        return sb.leq(b1, b2) and sc.leq(c1, c2)

    def as_result(self, f, g, props=()) -> AmalgamationResult:
        cert = certify(f, g, self.f0, self.g0, props)
        return AmalgamationResult(self.graph, self.f0, self.g0, cert, self.root, "pullback")


def pullback(f: GraphMap, g: GraphMap) -> OrderedPullback:
    _same_codomain(f, g)
    B, C = f.dom, g.dom
    by_image = {}
    for c in range(C.n):
        by_image.setdefault(g.assign[c], []).append(c)
    pairs = [(b, c) for b in range(B.n) for c in by_image.get(f.assign[b], ())]
    pos = {p: i for i, p in enumerate(pairs)}
    edges = []
    for i, (b, c) in enumerate(pairs):
        for b2 in (b,) + B.neighbors[b]:
            for c2 in (c,) + C.neighbors[c]:
                j = pos.get((b2, c2))
                if j is not None and j > i:
                    edges.append((i, j))
    labels = [f"({B.label(b)},{C.label(c)})" for b, c in pairs]
    d = Graph(len(pairs), tuple(edges), labels)
    root = orders = None
    rb = rc = None
    if _rooted_pair(f, g):
        rp = (f.roots[0], g.roots[0])
        if rp in pos:
            root = pos[rp]
            rb, rc = (root, rp[0]), (root, rp[1])
            if is_tree(B) and is_tree(C):
                orders = (RootedTree(B, rp[0]), RootedTree(C, rp[1]))
    f0 = GraphMap(d, B, tuple(p[0] for p in pairs), rb)
    g0 = GraphMap(d, C, tuple(p[1] for p in pairs), rc)
    return OrderedPullback(d, tuple(pairs), f0, g0, root, orders)


def component_amalgamate(f: GraphMap, g: GraphMap) -> AmalgamationResult:
    """One connected component of the pullback on which both projections are onto."""
    _same_codomain(f, g)
    _require(f, g, ["confluent"], "component amalgamation")
    pb = pullback(f, g)
    comps = component_masks(pb.graph, pb.graph.full)
    if pb.root is not None:
        comps.sort(key=lambda m: (not (m >> pb.root & 1), (m & -m).bit_length()))
    for comp in comps:
        sub, keep = pb.graph.subgraph(_members(comp))
        root = keep.index(pb.root) if pb.root is not None and pb.root in keep else None
        if _rooted_pair(f, g) and root is None:
            continue
        a = [pb.pairs[v][0] for v in keep]
        b = [pb.pairs[v][1] for v in keep]
        try:
            return _result(f, g, sub, a, b, root, ["confluent"], "component", require_tree=False)
        except AmalgamationError:
            continue
    raise AmalgamationError("no component of the pullback projects onto both factors")


# -------------------------------------------------------- tree amalgamation


def _proper_chains(pb: OrderedPullback, limit: int) -> tuple[list, list]:
    """Root-anchored chains whose consecutive elements are adjacent and strictly
    increasing; returns the chains in breadth-first order and the parent index."""
    g = pb.graph
    chains, parent = [(pb.root,)], [-1]
    i = 0
    while i < len(chains):
        c = chains[i]
        top = c[-1]
        for v in g.neighbors[top]:
            if pb.leq(top, v):
                chains.append(c + (v,))
                parent.append(i)
                if len(chains) > limit:
                    raise AmalgamationError(f"more than {limit} chains; raise the limit")
        i += 1
    return chains, parent


def tree_amalgamate(f: GraphMap, g: GraphMap, limit: int = 20000) -> AmalgamationResult:
    """The tree of proper chains of the ordered pullback.

    Two chains are joined when one extends the other by a single element;
    each chain maps to the coordinates of its largest element.
    """
    _same_codomain(f, g)
    if not _rooted_pair(f, g):
        raise PreconditionError("tree amalgamation needs rooted maps")
    _require(f, g, ["order"], "tree amalgamation")
    pb = pullback(f, g)
    chains, parent = _proper_chains(pb, limit)
    edges = tuple((p, i) for i, p in enumerate(parent) if p >= 0)
    labels = [pb.graph.label(c[-1]) for c in chains]
    d = Graph(len(chains), edges, labels)
    a = [pb.pairs[c[-1]][0] for c in chains]
    b = [pb.pairs[c[-1]][1] for c in chains]
    # confluence and ends are reported, not required: chain trees can lose
    # both even when the inputs have them
    extra = [p for p in ("confluent", "end") if f.verdict(p) and g.verdict(p)]
    return _result(f, g, d, a, b, 0, ["order"], "tree", optional=extra)


def chains_of(pb: OrderedPullback, limit: int = 20000) -> list[tuple]:
    return _proper_chains(pb, limit)[0]


# ---------------------------------------------------- monotone amalgamation


class _Budget(Exception):
    pass


def _lowbit(m: int) -> int:
    return (m & -m).bit_length() - 1


def _single(m: int) -> bool:
    return m != 0 and m & (m - 1) == 0


def _leaves(g: Graph, mask: int) -> list[int]:
    return [v for v in _members(mask) if bin(g.adj[v] & mask).count("1") == 1]


class _LeafRecursion:
    """Induction on the number of edges: strip a leaf edge of one side,
    amalgamate the rest, then grow the result back.

    When the stripped leaf keeps its image, a fresh leaf is attached at a
    vertex over its neighbour.  Otherwise the leaf's fiber on the other side
    is copied and bridged to a vertex lying over the leaf's neighbour and
    over the outer end of the other side's bridging edge; the search
    backtracks when no such vertex exists.
    """

    def __init__(self, f: GraphMap, g: GraphMap, budget: int):
        self.graphs = (f.dom, g.dom)
        self.maps = (f.assign, g.assign)
        self.budget = budget
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise _Budget

    def solutions(self, masks: tuple, am: int) -> Iterator[tuple]:
        self._tick()
        if _single(masks[0]) and _single(masks[1]):
            yield ([_lowbit(masks[0])], [_lowbit(masks[1])], [])
            return
        for side in (0, 1):
            xm = masks[side]
            if _single(xm):
                continue
            X, fX = self.graphs[side], self.maps[side]
            for b in _leaves(X, xm):
                a = _members(X.adj[b] & xm)[0]
                sub = list(masks)
                sub[side] = xm & ~(1 << b)
                if fX[b] == fX[a]:
                    yield from self._grow_leaf(side, tuple(sub), am, a, b)
                else:
                    yield from self._grow_fiber(side, sub, am, a, b)

    def _grow_leaf(self, side, sub, am, a, b):
        for sol in self.solutions(sub, am):
            for c in range(len(sol[0])):
                if sol[side][c] != a:
                    continue
                self._tick()
                maps = [list(sol[0]), list(sol[1])]
                maps[side].append(b)
                maps[1 - side].append(sol[1 - side][c])
                yield (maps[0], maps[1], sol[2] + [(c, len(sol[0]))])

    def _grow_fiber(self, side, sub, am, a, b):
        other = 1 - side
        Y, fY = self.graphs[other], self.maps[other]
        x = self.maps[side][b]
        ym = sub[other]
        fiber = [v for v in _members(ym) if fY[v] == x]
        fm = sum(1 << v for v in fiber)
        rest = ym & ~fm
        bridge = [(p, q) for q in fiber for p in _members(Y.adj[q] & rest)]
        if len(bridge) != 1:
            return
        p, q = bridge[0]
        sub[other] = rest
        for sol in self.solutions(tuple(sub), am & ~(1 << x)):
            n = len(sol[0])
            for p2 in range(n):
                if sol[side][p2] != a or sol[other][p2] != p:
                    continue
                self._tick()
                maps = [list(sol[0]), list(sol[1])]
                copy = {v: n + i for i, v in enumerate(fiber)}
                maps[side].extend([b] * len(fiber))
                maps[other].extend(fiber)
                edges = list(sol[2]) + [(p2, copy[q])]
                edges += [(copy[u], copy[v]) for u, v in Y.edges if u in copy and v in copy]
                yield (maps[0], maps[1], edges)


def _recursive_monotone(f, g, root_pair, budget):
    rec = _LeafRecursion(f, g, budget)
    try:
        for a, b, edges in rec.solutions((f.dom.full, g.dom.full), f.cod.full):
            if root_pair is None:
                return a, b, edges, None
            for v in range(len(a)):
                if (a[v], b[v]) == root_pair:
                    return a, b, edges, v
    except _Budget:
        return None
    return None


class _LocalSolver:
    """Tree ``T`` with monotone maps onto the subtrees ``P`` (of ``B``) and
    ``Q`` (of ``C``) realising every pair in ``R``.

    Complete: a leaf ``b`` of ``P`` with neighbour ``a`` pulls back to a
    subtree of ``T`` mapped by the second map onto some subtree ``Q2``; the
    rest of ``T`` maps onto a subtree ``Q1``, and ``Q1``, ``Q2`` either share
    exactly one vertex or are separated by one edge.  Unconstrained branches
    can always be given to ``Q2``, so only the split point is searched.
    """

    def __init__(self, P: Graph, pm: int, Q: Graph):
        self.P, self.Q = P, Q
        order = []
        m = pm
        while not _single(m):
            b = _leaves(P, m)[0]
            a = _members(P.adj[b] & m)[0]
            order.append((b, a))
            m &= ~(1 << b)
        self.order = order
        self.last = _lowbit(m)
        self.memo = {}

    def solve(self, qm: int, required: frozenset, k: int = 0):
        key = (k, qm, required)
        if key not in self.memo:
            self.memo[key] = self._solve(qm, required, k)
        return self.memo[key]

    def _copy_q(self, members):
        idx = {v: i for i, v in enumerate(members)}
        edges = [(idx[u], idx[v]) for u, v in self.Q.edges if u in idx and v in idx]
        return idx, edges

    def _solve(self, qm, required, k):
        Q = self.Q
        if k == len(self.order):
            p = self.last
            if any(x != p or not qm >> y & 1 for x, y in required):
                return None
            members = _members(qm)
            _, edges = self._copy_q(members)
            return ([p] * len(members), members, edges)
        b, a = self.order[k]
        need_b = {y for x, y in required if x == b}
        rest = frozenset(r for r in required if r[0] != b)
        need_rest = {y for _, y in rest}
        if not all(qm >> y & 1 for y in need_b | need_rest):
            return None
        # split at a shared vertex
        for s in _members(qm):
            q1 = 1 << s
            for br in component_masks(Q, qm & ~(1 << s)):
                if any(br >> y & 1 for y in need_rest):
                    q1 |= br
            if any(q1 >> y & 1 for y in need_b if y != s):
                continue
            q2 = (qm & ~q1) | (1 << s)
            sub = self.solve(q1, rest | {(a, s)}, k + 1)
            if sub is not None:
                return self._attach(sub, b, q2, (a, s), s)
        # split across an edge
        for u, v in Q.edges:
            if not (qm >> u & 1 and qm >> v & 1):
                continue
            for s, t in ((u, v), (v, u)):
                side = next(c for c in component_masks(Q, qm & ~(1 << t)) if c >> s & 1)
                q2 = qm & ~side
                if any(not side >> y & 1 for y in need_rest):
                    continue
                if any(not q2 >> y & 1 for y in need_b):
                    continue
                sub = self.solve(side, rest | {(a, s)}, k + 1)
                if sub is not None:
                    return self._attach(sub, b, q2, (a, s), t)
        return None

    def _attach(self, sub, b, q2, anchor_pair, bridge_to):
        alpha, beta, edges = list(sub[0]), list(sub[1]), list(sub[2])
        n = len(alpha)
        anchor = next(v for v in range(n) if (alpha[v], beta[v]) == anchor_pair)
        members = _members(q2)
        idx, new_edges = self._copy_q(members)
        alpha += [b] * len(members)
        beta += members
        edges += [(u + n, v + n) for u, v in new_edges]
        edges.append((anchor, n + idx[bridge_to]))
        return (alpha, beta, edges)


def fiberwise_monotone(f: GraphMap, g: GraphMap, root_pair=None):
    """Decide and build a monotone tree amalgamation one fiber at a time.

    Over each vertex ``x`` of ``A`` the amalgamation restricts to a tree
    mapped monotonically onto both fibers, and must contain, for each edge of
    ``A`` at ``x``, the pair of endpoints of the bridging edges of ``B`` and
    ``C``.  Returns ``(alpha, beta, edges, root)`` or raises
    :class:`NoAmalgamationError` naming the fiber that cannot be solved.
    """
    A, B, C = f.cod, f.dom, g.dom
    fa, ga = f.assign, g.assign
    required = [set() for _ in range(A.n)]
    bridges = []
    for x, y in A.edges:
        eb = [(u, v) if fa[u] == x else (v, u) for u, v in B.edges if {fa[u], fa[v]} == {x, y}]
        ec = [(u, v) if ga[u] == x else (v, u) for u, v in C.edges if {ga[u], ga[v]} == {x, y}]
        (b1, b2), (c1, c2) = eb[0], ec[0]
        required[x].add((b1, c1))
        required[y].add((b2, c2))
        bridges.append(((x, (b1, c1)), (y, (b2, c2))))
    if root_pair is not None:
        required[fa[root_pair[0]]].add(tuple(root_pair))
    alpha, beta, edges, offset = [], [], [], {}
    for x in range(A.n):
        pm, qm = f.fiber_mask(x), g.fiber_mask(x)
        sol = _LocalSolver(B, pm, C).solve(qm, frozenset(required[x]))
        if sol is None:
            raise NoAmalgamationError(
                f"no monotone amalgamation: the fiber over {A.label(x)} cannot realise "
                f"the required pairs {sorted(required[x])}",
                witness={"vertex": x, "required": sorted(required[x])},
            )
        n = len(alpha)
        offset[x] = n
        alpha += sol[0]
        beta += sol[1]
        edges += [(u + n, v + n) for u, v in sol[2]]

    def locate(x, pair):
        return next(
            v for v in range(offset[x], len(alpha)) if (alpha[v], beta[v]) == pair
        )

    for (x, px), (y, py) in bridges:
        edges.append((locate(x, px), locate(y, py)))
    root = None if root_pair is None else locate(fa[root_pair[0]], tuple(root_pair))
    return alpha, beta, edges, root


def monotone_amalgamate(f: GraphMap, g: GraphMap, budget: int = 4000) -> AmalgamationResult:
    """Monotone amalgamation of monotone epimorphisms between trees.

    Tries the leaf-stripping recursion first (bounded by ``budget`` steps)
    and falls back to the complete fiberwise solver.  Raises
    :class:`NoAmalgamationError` when no tree amalgamation exists.  With
    rooted inputs the result is rooted over both roots, which makes the
    projections order-preserving as well.
    """
    _same_codomain(f, g)
    if not (is_tree(f.dom) and is_tree(g.dom) and is_tree(f.cod)):
        raise PreconditionError("monotone amalgamation works on trees")
    _require(f, g, ["monotone"], "monotone amalgamation")
    rooted = _rooted_pair(f, g)
    root_pair = (f.roots[0], g.roots[0]) if rooted else None
    props = ["monotone"] + (["order"] if rooted else [])
    if f == g:
        ident = tuple(range(f.dom.n))
        return _result(f, g, f.dom, ident, ident, f.roots[0] if rooted else None, props, "diagonal")
    found = _recursive_monotone(f, g, root_pair, budget)
    method = "monotone-recursion"
    if found is None:
        found = fiberwise_monotone(f, g, root_pair)
        method = "monotone-fiberwise"
    a, b, edges, root = found
    d = Graph(len(a), tuple(edges))
    return _result(f, g, d, a, b, root, props, method)


# --------------------------------------------------- confluent amalgamation


def _composite(f, g, props):
    ff, fg = ml_factorize(f), ml_factorize(g)
    light = pullback(ff.l, fg.l)
    p2 = pullback(ff.m, light.f0)
    p3 = pullback(fg.m, light.g0)
    if not all(is_tree(x.graph) and x.root is not None for x in (light, p2, p3)):
        raise AmalgamationError("intermediate pullback is not a rooted tree")
    mono = monotone_amalgamate(p2.g0, p3.g0)
    f0 = compose(mono.f0, p2.f0)
    g0 = compose(mono.g0, p3.f0)
    return _result(f, g, mono.d, f0.assign, g0.assign, mono.root, props, "confluent-composite")


def confluent_amalgamate(f: GraphMap, g: GraphMap, ends: bool = False) -> AmalgamationResult:
    """Confluent order-preserving amalgamation of rooted trees (also
    end-preserving with ``ends``).

    Without ``ends`` this tries, in order: factor both maps as
    monotone-then-light, pull back the light parts, pull each monotone part
    back along the opposite projection and close with a rooted monotone
    amalgamation; the chain-tree amalgamation; the unfolding search.  The
    first two can fail (the monotone step may not exist, and chain trees may
    lose confluence), so every result is certified before it is returned.
    With ``ends`` the unfolding goes first and the chain tree is the
    fallback.
    """
    _same_codomain(f, g)
    if not _rooted_pair(f, g):
        raise PreconditionError("confluent amalgamation needs rooted maps")
    props = ["confluent", "order"] + (["end"] if ends else [])
    _require(f, g, props, "confluent amalgamation")
    if ends:
        # the unfolding is never larger than the chain tree on small inputs
        attempts = [lambda: unfolding_amalgamate(f, g, ends=True), lambda: _tree_checked(f, g, props)]
    else:
        attempts = [
            lambda: _composite(f, g, props),
            lambda: _tree_checked(f, g, props),
            lambda: unfolding_amalgamate(f, g),
        ]
    for attempt in attempts[:-1]:
        try:
            return attempt()
        except (AmalgamationError, PreconditionError):
            pass
    return attempts[-1]()


def _tree_checked(f, g, props):
    res = tree_amalgamate(f, g)
    if not all(res.certificate.holds(p) for p in props):
        raise AmalgamationError("chain tree lost confluence or ends")
    return _result(f, g, res.d, res.f0.assign, res.g0.assign, res.root, props, "confluent-tree")


class _Unfolding:
    """Grow an amalgamation of rooted order-preserving maps as a tree of pairs
    ``(b, c)`` with ``f(b) == g(c)``, every step increasing both coordinates
    weakly and at least one strictly.

    Confluence of an order-preserving map of rooted trees means every
    component of every fiber reaches each child of its image vertex.  A
    vertex carries the children of ``b`` (and of ``c``) its fiber component
    still has to reach; each is reached directly by a step, or handed to a
    child that stays in the same component.  With ``ends`` every leaf must
    lie over a leaf on both sides.
    """

    def __init__(self, f: GraphMap, g: GraphMap, ends: bool, budget: int):
        self.kb = f.dom_rooted().children
        self.kc = g.dom_rooted().children
        self.fa, self.ga = f.assign, g.assign
        self.ends = ends
        self.budget = budget
        self.steps = 0
        self.memo = {}

    def solve(self, b, c, na: frozenset, nc: frozenset):
        key = (b, c, na, nc)
        if key not in self.memo:
            self.memo[key] = None
            self.memo[key] = self._solve(b, c, na, nc)
        return self.memo[key]

    def _solve(self, b, c, na, nc):
        self.steps += 1
        if self.steps > self.budget:
            raise _Budget
        if not na and not nc:
            if not self.ends or not (self.kb[b] or self.kc[c]):
                return ((b, c), ())
            for x in self.kb[b]:
                t = self.solve(b, c, frozenset([x]), nc)
                if t is not None:
                    return t
            for y in self.kc[c]:
                t = self.solve(b, c, na, frozenset([y]))
                if t is not None:
                    return t
            return None
        needs = [(0, x) for x in sorted(na)] + [(1, y) for y in sorted(nc)]
        return self._assign(b, c, needs, 0, ())

    def _options(self, b, c, side, x):
        fa, ga = self.fa, self.ga
        level = fa[b]
        # diagonal steps first: one vertex can then serve both sides
        if side == 0:
            for y in self.kc[c]:
                if ga[y] == fa[x]:
                    yield (x, y), None
            if fa[x] == level:
                yield (x, c), None
            for y in self.kc[c]:
                if ga[y] == level:
                    yield (b, y), 0
        else:
            for y in self.kb[b]:
                if fa[y] == ga[x]:
                    yield (y, x), None
            if ga[x] == level:
                yield (b, x), None
            for y in self.kb[b]:
                if fa[y] == level:
                    yield (y, c), 1

    def _assign(self, b, c, needs, i, slots):
        # slots: tuple of (pair, handed alpha needs, handed beta needs); a
        # pair may repeat, which splits handed needs between copies
        if i == len(needs):
            kids = []
            for (x, y), da, dc in sorted(slots):
                na = frozenset(self.kb[x]) if x != b else da
                nc = frozenset(self.kc[y]) if y != c else dc
                t = self.solve(x, y, na, nc)
                if t is None:
                    return None
                kids.append(t)
            return ((b, c), tuple(kids))
        side, x = needs[i]
        for pair, handed in self._options(b, c, side, x):
            for k in self._placements(slots, pair, handed):
                if k < len(slots):
                    p, da, dc = slots[k]
                else:
                    p, da, dc = pair, frozenset(), frozenset()
                if handed == 0:
                    da = da | {x}
                elif handed == 1:
                    dc = dc | {x}
                trial = slots[:k] + ((p, da, dc),) + slots[k + 1:]
                t = self._assign(b, c, needs, i + 1, trial)
                if t is not None:
                    return t
        return None

    @staticmethod
    def _placements(slots, pair, handed):
        same = [k for k, sl in enumerate(slots) if sl[0] == pair]
        if handed is None:
            return same[:1] or [len(slots)]
        return same + [len(slots)]


def unfolding_amalgamate(f: GraphMap, g: GraphMap, ends: bool = False, budget: int = 200000):
    """Confluent order-preserving amalgamation built by :class:`_Unfolding`."""
    _same_codomain(f, g)
    if not _rooted_pair(f, g):
        raise PreconditionError("unfolding amalgamation needs rooted maps")
    props = ["confluent", "order"] + (["end"] if ends else [])
    _require(f, g, props, "unfolding amalgamation")
    rb, rc = f.roots[0], g.roots[0]
    u = _Unfolding(f, g, ends, budget)
    try:
        tree = u.solve(rb, rc, frozenset(u.kb[rb]), frozenset(u.kc[rc]))
    except _Budget:
        raise AmalgamationError(f"unfolding search exceeded {budget} steps") from None
    if tree is None:
        raise NoAmalgamationError("no amalgamation exists among unfoldings of the pullback")
    a, b, edges = [], [], []
    stack = [(tree, -1)]
    while stack:
        (pair, kids), parent = stack.pop()
        v = len(a)
        a.append(pair[0])
        b.append(pair[1])
        if parent >= 0:
            edges.append((parent, v))
        stack.extend((k, v) for k in reversed(kids))
    d = Graph(len(a), tuple(edges))
    return _result(f, g, d, a, b, 0, props, "unfolding")


# -------------------------------------------------- end-preserving (fans)


def _branch_key(chain, images):
    key = []
    for v in chain:
        y = images[v]
        if not key or key[-1] != y:
            key.append(y)
    return tuple(key)


def _staircase(ib, ic):
    """Path of index pairs walking two level sequences over the same branch.

    ``ib``/``ic`` give the level of each position of the two chains; both are
    non-decreasing, start at 0 and step by at most one.
    """
    path = [(0, 0)]
    i = j = 0
    top = ib[-1]
    for k in range(top + 1):
        while i + 1 < len(ib) and ib[i + 1] == k and j + 1 < len(ic) and ic[j + 1] == k:
            i += 1
            j += 1
            path.append((i, j))
        while i + 1 < len(ib) and ib[i + 1] == k:
            i += 1
            path.append((i, j))
        while j + 1 < len(ic) and ic[j + 1] == k:
            j += 1
            path.append((i, j))
        if k < top:
            i += 1
            j += 1
            path.append((i, j))
    return path


def end_preserving_amalgamate(f: GraphMap, g: GraphMap, uniform: bool = False) -> AmalgamationResult:
    """Pass to uniform fans of a common branch length, then join, at the root,
    one chain for every pair of fan branches lying over the same branch of ``A``.

    Each chain walks the two branches in lockstep level by level, which keeps
    both projections monotone on the chain.  With ``uniform`` the result is
    itself turned into a uniform fan.
    """
    _same_codomain(f, g)
    if not _rooted_pair(f, g):
        raise PreconditionError("end-preserving amalgamation needs rooted maps")
    _require(f, g, ["order", "end"], "end-preserving amalgamation")
    sides = []
    for h in (f, g):
        fan, to_tree = tree_to_uniform_fan(h.dom_rooted())
        sides.append((fan, to_tree))
    length = max(len(branches(fan)[0]) for fan, _ in sides)
    legs = []
    for (fan, to_tree), h in zip(sides, (f, g)):
        long_fan, to_fan = stretch_fan(fan, length)
        down = compose_all(to_fan, to_tree)
        images = compose(down, h).assign
        chains = [br.verts for br in branches(long_fan)]
        legs.append((long_fan, down, images, chains))
    (fb, downb, imb, chb), (fc, downc, imc, chc) = legs
    keys_b = [_branch_key(c, imb) for c in chb]
    keys_c = [_branch_key(c, imc) for c in chc]
    pairs = []
    for i, k in enumerate(keys_b):
        j = keys_c.index(k) if k in keys_c else None
        if j is None:
            raise AmalgamationError(f"no branch of the second fan lies over branch {k}")
        pairs.append((i, j))
    for j, k in enumerate(keys_c):
        if k not in keys_b:
            raise AmalgamationError(f"no branch of the first fan lies over branch {k}")
        if not any(p[1] == j for p in pairs):
            pairs.append((keys_b.index(k), j))
    alpha, beta, edges = [fb.root], [fc.root], []
    for i, j in pairs:
        cb, cc = chb[i], chc[j]
        key = keys_b[i]
        level = {y: n for n, y in enumerate(key)}
        path = _staircase([level[imb[v]] for v in cb], [level[imc[v]] for v in cc])
        prev = 0
        for s, t in path[1:]:
            alpha.append(cb[s])
            beta.append(cc[t])
            edges.append((prev, len(alpha) - 1))
            prev = len(alpha) - 1
    d = Graph(len(alpha), tuple(edges))
    a = GraphMap(d, fb.tree, tuple(alpha), (0, fb.root))
    b = GraphMap(d, fc.tree, tuple(beta), (0, fc.root))
    f0, g0 = compose(a, downb), compose(b, downc)
    root = 0
    if uniform:
        fan, to_d = tree_to_uniform_fan(RootedTree(d, 0))
        f0, g0 = compose(to_d, f0), compose(to_d, g0)
        d, root = fan.tree, fan.root
    props = ["order", "end"]
    return _result(f, g, d, f0.assign, g0.assign, root, props, "fan" if uniform else "end-preserving")


# ------------------------------------------------------------------ search


def search_amalgamations(
    f: GraphMap, g: GraphMap, constraints: Iterable[str] = (), max_verts: int = 8
) -> Iterator[AmalgamationResult]:
    """Every tree ``D`` (one per isomorphism class, up to ``max_verts``
    vertices) with every commuting pair of constrained epimorphisms onto the
    two domains."""
    _same_codomain(f, g)
    cons = [normalize_property(c) for c in constraints]
    rooted = _rooted_pair(f, g)
    for n in range(1, max_verts + 1):
        if rooted:
            cands = enumerate_rooted_trees(n)
        else:
            cands = [(t, None) for t in enumerate_trees(n)]
        for t, r in cands:
            rb = (r, f.roots[0]) if rooted else None
            left = enumerate_epis(t, f.dom, cons, roots=rb, max_vertices=max_verts)
            if not left:
                continue
            by_image = {}
            for h in left:
                by_image.setdefault(tuple(f.assign[x] for x in h.assign), []).append(h)
            rc = (r, g.roots[0]) if rooted else None
            for k in enumerate_epis(t, g.dom, cons, roots=rc, max_vertices=max_verts):
                for h in by_image.get(tuple(g.assign[y] for y in k.assign), ()):
                    cert = certify(f, g, h, k, cons)
                    yield AmalgamationResult(t, h, k, cert, r, "search")


def search_amalgamate(
    f: GraphMap, g: GraphMap, constraints: Iterable[str] = (), max_verts: int = 8
) -> Optional[AmalgamationResult]:
    """First certified amalgamation found by exhaustive search, or ``None``."""
    for res in search_amalgamations(f, g, constraints, max_verts):
        if res.ok and res.certificate.is_tree:
            return res
    return None


STRATEGIES = {
    "pullback": lambda f, g, **kw: pullback(f, g).as_result(f, g),
    "component": lambda f, g, **kw: component_amalgamate(f, g),
    "tree": lambda f, g, **kw: tree_amalgamate(f, g),
    "monotone": lambda f, g, **kw: monotone_amalgamate(f, g),
    "confluent": lambda f, g, ends=False, **kw: confluent_amalgamate(f, g, ends),
    "unfolding": lambda f, g, ends=False, **kw: unfolding_amalgamate(f, g, ends),
    "endpreserving": lambda f, g, **kw: end_preserving_amalgamate(f, g),
    "fan": lambda f, g, **kw: end_preserving_amalgamate(f, g, uniform=True),
    "search": lambda f, g, constraints=(), max_verts=8, **kw: search_amalgamate(
        f, g, constraints, max_verts
    ),
}


def amalgamate(f: GraphMap, g: GraphMap, strategy: str, **kw) -> Optional[AmalgamationResult]:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    return fn(f, g, **kw)
