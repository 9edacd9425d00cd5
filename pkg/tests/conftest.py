import functools
import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from treefraisse.graph import Graph  # noqa: E402
from treefraisse.morphisms import enumerate_epis, identity  # noqa: E402


@st.composite
def trees(draw, min_n=1, max_n=7):
    """Random labelled tree: vertex i > 0 hangs off an earlier vertex."""
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    perm = draw(st.permutations(range(n)))
    return Graph(n, tuple((perm[u], perm[v]) for u, v in edges))


@st.composite
def rooted_trees(draw, min_n=1, max_n=7):
    t = draw(trees(min_n, max_n))
    return t, draw(st.integers(0, t.n - 1))


@functools.lru_cache(maxsize=None)
def _epis(dom, cod, roots, cons):
    return enumerate_epis(dom, cod, cons, roots)


@st.composite
def epis(draw, max_dom=6, max_cod=4, rooted=False, constraints=()):
    """A random epimorphism between random trees satisfying ``constraints``."""
    for _ in range(20):
        if rooted:
            dom, rd = draw(rooted_trees(1, max_dom))
            cod, rc = draw(rooted_trees(1, min(max_cod, dom.n)))
            roots = (rd, rc)
        else:
            dom = draw(trees(1, max_dom))
            cod = draw(trees(1, min(max_cod, dom.n)))
            roots = None
        found = _epis(dom, cod, roots, tuple(constraints))
        if found:
            return found[draw(st.integers(0, len(found) - 1))]
    # identity satisfies every constraint
    return identity(dom, 0 if rooted else None)


def small_trees(cap):
    from treefraisse.graph import enumerate_trees

    return [t for k in range(1, cap + 1) for t in enumerate_trees(k)]


def small_rooted_trees(cap):
    from treefraisse.graph import rooted_trees_up_to

    return rooted_trees_up_to(cap)


def pairs_over(cap, constraints=(), rooted=False):
    """Every pair of constrained epimorphisms with a common codomain, all
    trees up to ``cap`` vertices (one per isomorphism class)."""
    if rooted:
        ts = small_rooted_trees(cap)
        for a, ra in ts:
            legs = [f for b, rb in ts if b.n >= a.n for f in enumerate_epis(b, a, constraints, (rb, ra))]
            for f in legs:
                for g in legs:
                    yield f, g
    else:
        ts = small_trees(cap)
        for a in ts:
            legs = [f for b in ts if b.n >= a.n for f in enumerate_epis(b, a, constraints)]
            for f in legs:
                for g in legs:
                    yield f, g
