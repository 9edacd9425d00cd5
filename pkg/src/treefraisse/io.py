"""JSON round-tripping, DOT export and self-checking fixtures.

Every ``*_to_dict`` emits keys in a fixed order and edges sorted, so
``dumps(to_dict(from_dict(d))) == dumps(d)`` for anything produced here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .amalgamation import AmalgamationResult, Certificate, pullback, search_amalgamations, tree_amalgamate
from .factorization import Factorization
from .graph import Graph, GraphError, components, end_vertices, is_tree, ramification_vertices
from .morphisms import GraphMap, MorphismError, PropertyReport, check
from .rooted import RootedTree

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class SchemaError(ValueError):
    """Malformed document.  ``path`` points at the offending field, e.g. ``$.f.dom.edges[2]``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ------------------------------------------------------------------ pretty


def _plain(x):
    if isinstance(x, (frozenset, set)):
        return sorted(_plain(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


def _flat(x) -> bool:
    if isinstance(x, list):
        return all(not isinstance(v, (list, dict)) or (isinstance(v, list) and _flat(v)) for v in x)
    return not isinstance(x, dict)


def _emit(x, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, list):
        if _flat(x):
            return json.dumps(x, separators=(", ", ": "))
        items = [pad + _emit(v, indent + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(x)


def dumps(doc) -> str:
    """Deterministic pretty JSON: short numeric lists stay on one line."""
    return _emit(_plain(doc), 0) + "\n"


def save(doc, path):
    Path(path).write_text(dumps(doc))


def read(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON ({exc})") from None


# ------------------------------------------------------------------ field helpers


def _get(d, key, path, kind=None, optional=False):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    if key not in d:
        if optional:
            return None
        raise SchemaError(f"{path}.{key}", "missing field")
    v = d[key]
    if kind is not None and (not isinstance(v, kind) or (kind is int and isinstance(v, bool))):
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}, got {type(v).__name__}")
    return v


def _int_list(v, path):
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list")
    for i, x in enumerate(v):
        if not isinstance(x, int) or isinstance(x, bool):
            raise SchemaError(f"{path}[{i}]", "expected int")
    return v


# ------------------------------------------------------------------ graphs and maps


def graph_to_dict(g: Graph, root: Optional[int] = None) -> dict:
    d = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if g.labels is not None:
        d["labels"] = list(g.labels)
    if root is not None:
        d["root"] = root
    return d


def graph_from_dict(d, path="$") -> tuple[Graph, Optional[int]]:
    """Graph and its optional root."""
    n = _get(d, "n", path, int)
    if n < 0:
        raise SchemaError(f"{path}.n", "must be non-negative")
    edges = _get(d, "edges", path, list)
    for i, e in enumerate(edges):
        ep = f"{path}.edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError(ep, "an edge is a pair [u, v]")
        _int_list(e, ep)
        for j, v in enumerate(e):
            if not 0 <= v < n:
                raise SchemaError(f"{ep}[{j}]", f"vertex {v} outside 0..{n - 1}")
        if e[0] == e[1]:
            raise SchemaError(ep, "loops are implicit and must not be listed")
    labels = _get(d, "labels", path, list, optional=True)
    if labels is not None:
        if len(labels) != n:
            raise SchemaError(f"{path}.labels", f"need {n} labels, got {len(labels)}")
        for i, s in enumerate(labels):
            if not isinstance(s, str):
                raise SchemaError(f"{path}.labels[{i}]", "expected string")
    root = _get(d, "root", path, int, optional=True)
    if root is not None and not 0 <= root < n:
        raise SchemaError(f"{path}.root", f"root {root} outside 0..{n - 1}")
    try:
        g = Graph(n, tuple(tuple(e) for e in edges), labels)
    except GraphError as exc:
        raise SchemaError(f"{path}.edges", str(exc)) from None
    return g, root


def load_graph(path) -> tuple[Graph, Optional[int]]:
    return graph_from_dict(read(path))


def map_to_dict(f: GraphMap) -> dict:
    d = {"dom": graph_to_dict(f.dom), "cod": graph_to_dict(f.cod), "assign": list(f.assign)}
    if f.roots is not None:
        d["roots"] = list(f.roots)
    return d


def map_from_dict(d, path="$") -> GraphMap:
    dom, rd = graph_from_dict(_get(d, "dom", path), f"{path}.dom")
    cod, rc = graph_from_dict(_get(d, "cod", path), f"{path}.cod")
    assign = _int_list(_get(d, "assign", path, list), f"{path}.assign")
    if len(assign) != dom.n:
        raise SchemaError(f"{path}.assign", f"need {dom.n} images, got {len(assign)}")
    for i, x in enumerate(assign):
        if not 0 <= x < cod.n:
            raise SchemaError(f"{path}.assign[{i}]", f"image {x} outside 0..{cod.n - 1}")
    roots = _get(d, "roots", path, list, optional=True)
    if roots is None and rd is not None and rc is not None:
        roots = [rd, rc]
    if roots is not None:
        _int_list(roots, f"{path}.roots")
        if len(roots) != 2:
            raise SchemaError(f"{path}.roots", "expected [dom_root, cod_root]")
    try:
        return GraphMap(dom, cod, tuple(assign), None if roots is None else tuple(roots))
    except MorphismError as exc:
        raise SchemaError(f"{path}.roots", str(exc)) from None


def load_map(path) -> GraphMap:
    return map_from_dict(read(path))


def report_to_dict(r: PropertyReport) -> dict:
    return _plain(r.to_dict())


def report_from_dict(d, path="$") -> PropertyReport:
    return PropertyReport(_get(d, "property", path, str), _get(d, "verdict", path, bool), d.get("witness"))


def factorization_to_dict(fz: Factorization) -> dict:
    return {
        "middle": graph_to_dict(fz.middle, fz.middle_root),
        "m": map_to_dict(fz.m),
        "l": map_to_dict(fz.l),
        "classmap": list(fz.classmap),
    }


def factorization_from_dict(d, path="$") -> Factorization:
    middle, _ = graph_from_dict(_get(d, "middle", path), f"{path}.middle")
    m = map_from_dict(_get(d, "m", path), f"{path}.m")
    l = map_from_dict(_get(d, "l", path), f"{path}.l")
    classmap = _int_list(_get(d, "classmap", path, list), f"{path}.classmap")
    return Factorization(middle, m, l, tuple(classmap))


# ------------------------------------------------------------------ amalgamations


def result_to_dict(r: AmalgamationResult) -> dict:
    return {
        "method": r.method,
        "d": graph_to_dict(r.d, r.root),
        "f0": map_to_dict(r.f0),
        "g0": map_to_dict(r.g0),
        "certificate": r.certificate.to_dict(),
    }


def result_from_dict(d, path="$") -> AmalgamationResult:
    g, root = graph_from_dict(_get(d, "d", path), f"{path}.d")
    f0 = map_from_dict(_get(d, "f0", path), f"{path}.f0")
    g0 = map_from_dict(_get(d, "g0", path), f"{path}.g0")
    for name, h in (("f0", f0), ("g0", g0)):
        if h.dom != g:
            raise SchemaError(f"{path}.{name}.dom", "domain differs from d")
    c = _get(d, "certificate", path, dict)
    cp = f"{path}.certificate"
    cert = Certificate(
        _get(c, "commutes", cp, bool),
        _get(c, "is_tree", cp, bool),
        dict(_get(c, "f0", cp, dict)),
        dict(_get(c, "g0", cp, dict)),
        tuple(_get(c, "optional", cp, list, optional=True) or ()),
    )
    return AmalgamationResult(g, f0, g0, cert, root, _get(d, "method", path, str))


# ------------------------------------------------------------------ sequences


def sequence_to_dict(seq) -> dict:
    return {
        "family": seq.family.name,
        "depth": seq.depth,
        "stages": [graph_to_dict(g, r) for g, r in zip(seq.stages, seq.roots)],
        "bonds": [map_to_dict(b) for b in seq.bonds],
        "log": [_plain(e) for e in seq.log],
    }


def sequence_from_dict(d, path="$"):
    from .families import family
    from .limits import InverseSequence

    try:
        spec = family(_get(d, "family", path, str))
    except ValueError as exc:
        raise SchemaError(f"{path}.family", str(exc)) from None
    raw = _get(d, "stages", path, list)
    stages, roots = [], []
    for i, s in enumerate(raw):
        g, r = graph_from_dict(s, f"{path}.stages[{i}]")
        stages.append(g)
        roots.append(r)
    bonds = [map_from_dict(b, f"{path}.bonds[{i}]") for i, b in enumerate(_get(d, "bonds", path, list))]
    if len(bonds) != max(len(stages) - 1, 0):
        raise SchemaError(f"{path}.bonds", f"need {len(stages) - 1} bonds, got {len(bonds)}")
    for i, b in enumerate(bonds):
        if b.dom != stages[i + 1] or b.cod != stages[i]:
            raise SchemaError(f"{path}.bonds[{i}]", f"does not map stage {i + 2} onto stage {i + 1}")
    return InverseSequence(spec, stages, roots, bonds, list(_get(d, "log", path, list)))


def load_sequence(path):
    return sequence_from_dict(read(path))


# ------------------------------------------------------------------ DOT


def export_dot(g: Graph, root: Optional[int] = None, styling: bool = True, name: str = "G") -> str:
    """Undirected DOT text.  With ``styling``, ends are boxes, ramification
    vertices diamonds and the root is filled.  Ends of a rooted tree are its
    leaves in the root order."""
    ends = ram = frozenset()
    if styling:
        if root is not None and is_tree(g):
            ends = frozenset(RootedTree(g, root).leaves())
        else:
            ends = end_vertices(g)
        ram = ramification_vertices(g)
    lines = [f"graph {name} {{"]
    if styling:
        lines.append("  node [shape=circle];")
    for v in range(g.n):
        attrs = [f"label={json.dumps(g.label(v))}"]
        if v in ends:
            attrs.append("shape=box")
        elif v in ram:
            attrs.append("shape=diamond")
        if styling and v == root:
            attrs.append('style=filled, fillcolor="gold"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ fixtures


class FixtureError(AssertionError):
    pass


@dataclass
class Fixture:
    """A named input with the outputs it must reproduce.

    ``source`` says where the numbers come from in plain words (a worked
    example, a hand computation, a search run).
    """

    name: str
    kind: str
    source: str
    inputs: dict
    expected: dict
    notes: str = ""
    _parsed: dict = field(default_factory=dict, repr=False, compare=False)

    def map(self, key) -> GraphMap:
        if key not in self._parsed:
            self._parsed[key] = map_from_dict(self.inputs[key], f"$.inputs.{key}")
        return self._parsed[key]

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind, "source": self.source,
             "inputs": self.inputs, "expected": self.expected}
        if self.notes:
            d["notes"] = self.notes
        return d


def _pair_labels(r, f, g):
    return [(f.dom.label(b), g.dom.label(c)) for b, c in zip(r.f0.assign, r.g0.assign)]


def _check_properties(fx: Fixture) -> list[str]:
    f = fx.map("map")
    bad = []
    for prop, want in fx.expected["verdicts"].items():
        rep = check(f, prop)
        if rep.verdict != want:
            bad.append(f"{prop}: expected {want}, got {rep.verdict}")
    return bad


def _check_amalgamation(fx: Fixture) -> list[str]:
    f, g = fx.map("f"), fx.map("g")
    exp, bad = fx.expected, []
    pb = pullback(f, g)
    if "pullback_vertices" in exp and pb.graph.n != exp["pullback_vertices"]:
        bad.append(f"pullback has {pb.graph.n} vertices")
    if "pullback_edges" in exp and len(pb.graph.edges) != exp["pullback_edges"]:
        bad.append(f"pullback has {len(pb.graph.edges)} edges")
    if "pullback_cycle" in exp:
        names = {(f.dom.label(b), g.dom.label(c)): i for i, (b, c) in enumerate(pb.pairs)}
        cyc = [names.get(tuple(p)) for p in exp["pullback_cycle"]]
        if None in cyc or not all(pb.graph.has_edge(cyc[i], cyc[i - 1]) for i in range(len(cyc))):
            bad.append("pullback lacks the expected cycle")
    if "surjective_components" in exp:
        parts = components(pb.graph)
        hits = 0
        for k in range(parts.count):
            vs = [v for v, c in parts.comp.items() if c == k]
            if {pb.pairs[v][0] for v in vs} == set(range(f.dom.n)) and {pb.pairs[v][1] for v in vs} == set(range(g.dom.n)):
                hits += 1
        if hits != exp["surjective_components"]:
            bad.append(f"{hits} pullback components project onto both legs")
    if "tree_vertices" in exp or "over" in exp or "leaves_over_non_ends" in exp:
        r = tree_amalgamate(f, g)
        labels = _pair_labels(r, f, g)
        if "tree_vertices" in exp and r.d.n != exp["tree_vertices"]:
            bad.append(f"tree amalgamation has {r.d.n} vertices")
        for key, want in exp.get("over", {}).items():
            got = labels.count(tuple(key.split(",")))
            if got != want:
                bad.append(f"{got} vertices over ({key}), expected {want}")
        if not r.certificate.commutes:
            bad.append("square does not commute")
        if "leaves_over_non_ends" in exp:
            leaves = RootedTree(r.d, r.root).leaves()
            bends = frozenset(f.dom_rooted().leaves())
            cends = frozenset(g.dom_rooted().leaves())
            odd = sorted(",".join(labels[v]) for v in leaves
                         if r.f0.assign[v] not in bends or r.g0.assign[v] not in cends)
            if odd != sorted(exp["leaves_over_non_ends"]):
                bad.append(f"leaves over non-ends: {odd}")
    return bad


def _check_search(fx: Fixture) -> list[str]:
    f, g = fx.map("f"), fx.map("g")
    cons = fx.inputs.get("constraints", [])
    hits = sum(1 for r in search_amalgamations(f, g, cons, fx.inputs["max_verts"])
               if r.certificate.commutes and r.ok)
    return [] if hits == fx.expected["count"] else [f"search found {hits} amalgamations"]


CHECKERS = {
    "properties": _check_properties,
    "amalgamation": _check_amalgamation,
    "search": _check_search,
}


def verify_fixture(fx: Fixture) -> list[str]:
    """Recompute the fixture and list every mismatch (empty when it holds)."""
    try:
        fn = CHECKERS[fx.kind]
    except KeyError:
        raise SchemaError("$.kind", f"unknown fixture kind {fx.kind!r}") from None
    return fn(fx)


def fixture_from_dict(d, verify: bool = True) -> Fixture:
    fx = Fixture(
        _get(d, "name", "$", str),
        _get(d, "kind", "$", str),
        _get(d, "source", "$", str),
        _get(d, "inputs", "$", dict),
        _get(d, "expected", "$", dict),
        d.get("notes", ""),
    )
    for key, v in fx.inputs.items():
        if isinstance(v, dict) and "assign" in v:
            fx.map(key)  # schema check
    if verify:
        bad = verify_fixture(fx)
        if bad:
            raise FixtureError(f"fixture {fx.name}: " + "; ".join(bad))
    return fx


def load_fixture(path, verify: bool = True) -> Fixture:
    return fixture_from_dict(read(path), verify)


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))
