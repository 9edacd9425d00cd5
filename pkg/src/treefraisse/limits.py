"""Fundamental sequences built by repeated amalgamation, and statistics of
their finite stages.

Stages are numbered from 1.  ``bonds[k]`` maps stage ``k + 2`` onto stage
``k + 1`` (so ``seq.bond(n)`` maps stage ``n + 1`` onto stage ``n``).
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .amalgamation import AmalgamationError, PreconditionError
from .families import (
    FamilySpec,
    family,
    family_amalgamate,
    family_maps,
    family_trees,
    split_ramification,
    subdivide_all,
)
from .graph import Graph, canonical_form, distances, end_vertices, ramification_vertices, vertex_order
from .morphisms import GraphMap, compose, constant_map, enumerate_epis, identity
from .rooted import RootedTree


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class BuildConfig:
    depth: int = 5
    cap: int = 3
    batch: int = 24              # tasks attempted per stage
    maps_per_target: int = 8     # epimorphisms F_n -> G taken per target G
    vertex_budget: int = 80      # amalgamations above this are deferred
    node_budget: int = 20000     # search nodes per map enumeration
    on_failure: str = "raise"    # or "log": record tasks with no amalgamation
    separate: bool = True        # subdivide F_m before building F_2m


@dataclass
class Task:
    id: int
    kind: str                # "cover", "factor" or "subdivide"
    stage: int               # stage on which f is defined
    g: GraphMap              # H -> G
    f: GraphMap              # F_stage -> G

    def describe(self) -> dict:
        return {"id": self.id, "kind": self.kind, "stage": self.stage,
                "H": [self.g.dom.n, [list(e) for e in self.g.dom.edges]],
                "G": [self.g.cod.n, [list(e) for e in self.g.cod.edges]],
                "g": list(self.g.assign), "f": list(self.f.assign)}


@dataclass
class InverseSequence:
    family: FamilySpec
    stages: list
    roots: list
    bonds: list = field(default_factory=list)
    log: list = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.stages)

    def stage(self, n: int) -> Graph:
        self._check_index(n)
        return self.stages[n - 1]

    def bond(self, n: int) -> GraphMap:
        """Map of stage ``n + 1`` onto stage ``n``."""
        if not 1 <= n < self.depth:
            raise SequenceError(f"no bond out of stage {n + 1}")
        return self.bonds[n - 1]

    def projection(self, m: int, n: int) -> GraphMap:
        """Composite bond from stage ``m`` down to stage ``n <= m``."""
        self._check_index(m)
        self._check_index(n)
        if n > m:
            raise SequenceError("projections go down the sequence")
        out = identity(self.stage(m), self.roots[m - 1])
        for k in range(m - 1, n - 1, -1):
            out = compose(out, self.bond(k))
        return out

    def _check_index(self, n):
        if not 1 <= n <= self.depth:
            raise SequenceError(f"stage {n} outside 1..{self.depth}")

    def check_bonds(self) -> list[int]:
        """Indices ``n`` whose bond fails the family's map class."""
        from .families import is_family_map

        return [n for n in range(1, self.depth) if not is_family_map(self.family, self.bond(n))]


# ------------------------------------------------------------------ builder


def _point(spec):
    return Graph(1), (0 if spec.rooted else None)


def _const(g: Graph, root):
    return constant_map(g, root)


def _cover_tasks(spec, cap, next_id):
    out = []
    for h, r in family_trees(spec, cap):
        out.append(Task(next_id(), "cover", 1, _const(h, r), _const(Graph(1), 0 if spec.rooted else None)))
    return out


def _subdivide_task(seq, m, next_id):
    g, r = seq.stage(m), seq.roots[m - 1]
    _, collapse = subdivide_all(g, r)
    return Task(next_id(), "subdivide", m, collapse, identity(g, r))


def _target_maps(spec, seq, n, gt, gr, per_target, node_budget):
    """Family maps from stage ``n`` onto ``(gt, gr)``: a budgeted direct
    search, topped up with maps of earlier small stages pulled back along
    the bonds (compositions of family maps stay in the family)."""
    stage, root = seq.stage(n), seq.roots[n - 1]
    roots = (root, gr) if spec.rooted else None
    found = enumerate_epis(stage, gt, spec.constraints, roots=roots,
                           max_vertices=max(stage.n, 10), limit=per_target,
                           node_budget=node_budget)
    seen = {f.assign for f in found}
    for k in range(n - 1, 0, -1):
        if len(found) >= per_target:
            break
        low = seq.stage(k)
        if low.n > 12:
            continue
        proj = seq.projection(n, k)
        lroots = (seq.roots[k - 1], gr) if spec.rooted else None
        for e in enumerate_epis(low, gt, spec.constraints, roots=lroots, max_vertices=12,
                                limit=per_target, node_budget=node_budget):
            f = compose(proj, e)
            if f.assign not in seen:
                seen.add(f.assign)
                found.append(f)
            if len(found) >= per_target:
                break
    return found


def _factor_tasks(spec, seq, n, cfg, next_id):
    """Tasks (f: F_n -> G, g: H -> G) with G, H family trees up to the cap
    and ``g`` not a bijection."""
    trees = family_trees(spec, cfg.cap)
    out = []
    for (gt, gr) in trees:
        if gt.n == 1:
            continue
        fs = _target_maps(spec, seq, n, gt, gr, cfg.maps_per_target, cfg.node_budget)
        if not fs:
            continue
        for (ht, hr) in trees:
            if ht.n <= gt.n:
                continue
            for g in family_maps(spec, (ht, hr), (gt, gr)):
                for f in fs:
                    out.append((canonical_form(ht, hr), g.assign, f.assign, g, f))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return [Task(next_id(), "factor", n, g, f) for *_k, g, f in out]


def build_sequence(spec, depth: int = 5, cap: int = 3, config: Optional[BuildConfig] = None) -> InverseSequence:
    """Build stages ``F_1 .. F_depth`` starting from the one-vertex tree.

    Coverage tasks amalgamate ``F_n -> point <- H`` for every family tree
    ``H`` up to ``cap``; factorization tasks amalgamate ``f: F_n -> G`` with
    ``g: H -> G``.  Before building ``F_2m`` a subdivision task for ``F_m``
    goes to the front of the queue, so no path of ``F_2m`` or ``F_2m+1``
    lies over a path of ``F_m``.  Each stage works through the oldest pending tasks (at
    most ``batch``), chaining amalgamations; a task whose result would exceed
    the vertex budget goes back to the end of the queue.  For each task the
    log records ``h: F_{m+1} -> H`` with ``g o h == f o projection``.
    """
    spec = family(spec)
    cfg = config or BuildConfig(depth=depth, cap=cap)
    if depth != cfg.depth or cap != cfg.cap:
        cfg = BuildConfig(**{**cfg.__dict__, "depth": depth, "cap": cap})
    counter = itertools.count()
    next_id = lambda: next(counter)  # noqa: E731

    g0, r0 = _point(spec)
    seq = InverseSequence(spec, [g0], [r0])
    if depth <= 1:
        return seq
    queue = deque(_cover_tasks(spec, cfg.cap, next_id))

    for n in range(1, depth):
        cur, root = seq.stage(n), seq.roots[n - 1]
        acc = identity(cur, root)            # current stage -> F_n
        done, deferred = [], []
        attempts = 0
        m = (n + 1) // 2
        if cfg.separate and (n + 1) % 2 == 0 and seq.stage(m).edges:
            queue.appendleft(_subdivide_task(seq, m, next_id))
        while queue and attempts < cfg.batch:
            task = queue.popleft()
            attempts += 1
            down = compose(acc, seq.projection(n, task.stage))
            f_now = compose(down, task.f)
            try:
                res = family_amalgamate(spec, f_now, task.g)
            except (AmalgamationError, PreconditionError) as exc:
                if cfg.on_failure == "raise":
                    raise AmalgamationError(f"task {task.id}: {exc}") from exc
                seq.log.append({**task.describe(), "status": "failed", "at": n, "error": str(exc)})
                continue
            if res.d.n > cfg.vertex_budget and task.kind != "subdivide":
                deferred.append(task)
                continue
            for item in done:
                item[1] = compose(res.f0, item[1])
            done.append([task, res.g0])
            acc = compose(res.f0, acc)
            cur, root = res.d, res.root
        queue.extend(deferred)
        seq.stages.append(cur)
        seq.roots.append(root)
        seq.bonds.append(acc)
        for task, h in done:
            seq.log.append({**task.describe(), "status": "done", "at": n, "h": list(h.assign)})
        for task in deferred:
            seq.log.append({"id": task.id, "status": "deferred", "at": n})
        queue.extend(_factor_tasks(spec, seq, n + 1, cfg, next_id))
    return seq


def task_commutes(seq: InverseSequence, entry: dict) -> bool:
    """Re-check ``g o h == f o projection`` for a completed log entry."""
    if entry.get("status") != "done":
        raise SequenceError("only completed tasks carry h")
    m, n = entry["at"] + 1, entry["stage"]
    proj = seq.projection(m, n)
    g, f, h = entry["g"], entry["f"], entry["h"]
    if len(h) != seq.stage(m).n:
        return False
    return all(g[h[v]] == f[proj.assign[v]] for v in range(len(h)))


def covered(seq: InverseSequence, cap: int) -> dict:
    """For each family tree up to ``cap``, the first stage mapping onto it by
    a family map (``None`` if none does), found by exhaustive search."""
    spec = seq.family
    out = {}
    for t, r in family_trees(spec, cap):
        hit = None
        for n in range(1, seq.depth + 1):
            s = seq.stage(n)
            if s.n < t.n:
                continue
            roots = (seq.roots[n - 1], r) if spec.rooted else None
            if enumerate_epis(s, t, spec.constraints, roots, max_vertices=max(s.n, 10), limit=1):
                hit = n
                break
        out[(canonical_form(t, r), t.n)] = hit
    return out


# ------------------------------------------------------------------ threads


@dataclass(frozen=True)
class Thread:
    points: tuple

    def __len__(self):
        return len(self.points)


def make_thread(seq: InverseSequence, points) -> Thread:
    points = tuple(points)
    if len(points) != seq.depth:
        raise SequenceError(f"thread needs {seq.depth} points, got {len(points)}")
    for n in range(1, seq.depth):
        if seq.bond(n).assign[points[n]] != points[n - 1]:
            raise SequenceError(f"points at stages {n} and {n + 1} are not compatible")
    return Thread(points)


def thread_from_top(seq: InverseSequence, v: int) -> Thread:
    pts = [v]
    for n in range(seq.depth - 1, 0, -1):
        pts.append(seq.bond(n).assign[pts[-1]])
    return Thread(tuple(reversed(pts)))


def thread_metric(t1: Thread, t2: Thread) -> Fraction:
    """``2 ** -n`` for the first stage ``n`` (from 1) where the threads differ."""
    if len(t1) != len(t2):
        raise SequenceError("threads of different depth")
    for n, (a, b) in enumerate(zip(t1.points, t2.points), start=1):
        if a != b:
            return Fraction(1, 2 ** n)
    return Fraction(0)


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class ApproximantReport:
    stage: int
    vertices: int
    ends: int
    ramification: int
    order_histogram: dict
    max_fiber_diameter: Fraction
    transitivity_violations: int
    separated_violations: int
    near_ramification: float

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["max_fiber_diameter"] = str(self.max_fiber_diameter)
        d["order_histogram"] = {str(k): v for k, v in sorted(self.order_histogram.items())}
        return d


def _paths2(g: Graph):
    for y in range(g.n):
        for x, z in itertools.permutations(g.neighbors[y], 2):
            if not g.has_edge(x, z):
                yield x, y, z


def approximant_report(seq: InverseSequence, n: int, split: bool = False) -> ApproximantReport:
    """Statistics of stage ``n``.  Fiber diameters are measured on threads
    through the top stage; separated violations are paths ``x-y-z`` at
    stage ``n`` whose images at stage ``n // 2`` are three distinct vertices
    forming a path.  With ``split`` the stage is first passed through
    :func:`split_ramification` (affects the vertex statistics only)."""
    g = seq.stage(n)
    root = seq.roots[n - 1]
    top = seq.depth
    proj = seq.projection(top, n)
    diam = Fraction(0)
    fibers = proj.fibers()
    threads = [thread_from_top(seq, v) for v in range(seq.stage(top).n)]
    for fib in fibers:
        for a, b in itertools.combinations(fib, 2):
            diam = max(diam, thread_metric(threads[a], threads[b]))

    sep = 0
    viol = 0
    m = n // 2
    down = seq.projection(n, m) if m >= 1 else None
    for x, y, z in _paths2(g):
        viol += 1
        if down is not None:
            a, b, c = (down.assign[v] for v in (x, y, z))
            if len({a, b, c}) == 3 and seq.stage(m).has_edge(a, b) and seq.stage(m).has_edge(b, c):
                sep += 1

    h = split_ramification(g)[0] if split else g
    orders = Counter(vertex_order(h, v) for v in range(h.n))
    if seq.family.rooted and not split:
        ends = len(RootedTree(g, root).leaves())
    else:
        ends = len(end_vertices(h))
    rams = ramification_vertices(h)
    near = 0
    if rams:
        dist = [min(d) for d in zip(*(distances(h, r) for r in rams))]
        near = sum(1 for d in dist if 0 <= d <= 2)
    return ApproximantReport(
        stage=n, vertices=h.n, ends=ends, ramification=len(rams),
        order_histogram=dict(orders), max_fiber_diameter=diam,
        transitivity_violations=viol, separated_violations=sep,
        near_ramification=near / h.n,
    )


def ends_lift(seq: InverseSequence, n: int) -> bool:
    """Every end of stage ``n`` is the image of an end of stage ``n + 1``."""
    bond = seq.bond(n)
    if seq.family.rooted:
        lo = RootedTree(seq.stage(n), seq.roots[n - 1]).leaves()
        hi = RootedTree(seq.stage(n + 1), seq.roots[n]).leaves()
    else:
        lo, hi = end_vertices(seq.stage(n)), end_vertices(seq.stage(n + 1))
    images = {bond.assign[v] for v in hi}
    return all(e in images for e in lo)
