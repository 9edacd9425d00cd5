import random
from fractions import Fraction

import pytest

from treefraisse.families import family_trees, subdivide_all
from treefraisse.graph import Graph, path_graph
from treefraisse.limits import (
    BuildConfig,
    SequenceError,
    Thread,
    approximant_report,
    build_sequence,
    covered,
    ends_lift,
    make_thread,
    task_commutes,
    thread_from_top,
    thread_metric,
)
from treefraisse.morphisms import check, enumerate_epis

_CACHE = {}


def seq_for(name, depth=5, cap=3):
    key = (name, depth, cap)
    if key not in _CACHE:
        _CACHE[key] = build_sequence(name, depth, cap)
    return _CACHE[key]


def test_depth_zero_is_a_point():
    seq = build_sequence("TM", 0, 3)
    assert seq.depth == 1 and seq.stage(1) == Graph(1)


def test_tm_depth_3_covers_small_trees():
    seq = seq_for("TM", 3)
    top = seq.stage(3)
    assert enumerate_epis(top, path_graph(3), ["monotone"], max_vertices=top.n, limit=1)
    assert enumerate_epis(top, path_graph(2), ["monotone"], max_vertices=top.n, limit=1)
    assert all(v is not None for v in covered(seq, 3).values())


def test_tce_depth_3_bonds():
    seq = seq_for("TCE", 3)
    for n in range(1, seq.depth):
        b = seq.bond(n)
        assert check(b, "confluent") and check(b, "order") and check(b, "end")


def test_projection_composes_bonds():
    seq = seq_for("TM")
    p = seq.projection(4, 2)
    assert p.assign == tuple(seq.bond(2).assign[x] for x in seq.bond(3).assign)
    with pytest.raises(SequenceError):
        seq.projection(2, 4)
    with pytest.raises(SequenceError):
        seq.bond(5)


def test_builds_are_deterministic():
    a, b = build_sequence("TM", 4, 3), build_sequence("TM", 4, 3)
    assert a.stages == b.stages and [x.assign for x in a.bonds] == [x.assign for x in b.bonds]
    assert a.log == b.log


def test_small_budget_defers_instead_of_dropping():
    cfg = BuildConfig(depth=4, cap=3, vertex_budget=10)
    seq = build_sequence("TM", 4, 3, cfg)
    deferred = {e["id"] for e in seq.log if e["status"] == "deferred"}
    assert deferred


def test_thread_metric_values():
    assert thread_metric(Thread((0, 1, 2)), Thread((0, 1, 2))) == 0
    assert thread_metric(Thread((0, 1)), Thread((1, 1))) == Fraction(1, 2)
    assert thread_metric(Thread((0, 0, 0, 1)), Thread((0, 0, 0, 2))) == Fraction(1, 16)


def test_make_thread_checks_bonds():
    seq = seq_for("TM")
    t = thread_from_top(seq, 0)
    assert make_thread(seq, t.points) == t
    bad = list(t.points)
    bad[1] = (bad[1] + 1) % seq.stage(2).n
    with pytest.raises(SequenceError):
        make_thread(seq, bad)


def test_thread_metric_is_an_ultrametric():
    seq = seq_for("TM")
    rng = random.Random(7)
    threads = [thread_from_top(seq, v) for v in range(seq.stage(seq.depth).n)]
    for _ in range(500):
        a, b, c = rng.sample(threads, 3)
        assert thread_metric(a, b) <= max(thread_metric(a, c), thread_metric(c, b))


def test_point_report():
    rep = approximant_report(build_sequence("TM", 1, 3), 1)
    assert (rep.vertices, rep.ends, rep.ramification, rep.transitivity_violations) == (1, 1, 0, 0)
    assert rep.max_fiber_diameter == 0


def test_near_ramification_grows_for_tm():
    seq = seq_for("TM")
    fracs = [approximant_report(seq, n).near_ramification for n in range(2, 6)]
    assert fracs == sorted(fracs)


@pytest.mark.parametrize("name", ["TM", "TC", "TCE", "TM3"])
def test_paths_are_separated_from_half_depth(name):
    seq = seq_for(name)
    assert [approximant_report(seq, n).separated_violations for n in range(1, 6)] == [0] * 5


@pytest.mark.parametrize("name", ["TE", "FE"])
def test_ends_lift_along_bonds(name):
    seq = seq_for(name, 4)
    assert all(ends_lift(seq, n) for n in range(1, seq.depth))
    assert not seq.check_bonds()


def test_full_subdivision_separates_every_path():
    for t, r in family_trees("TC", 5):
        h, f = subdivide_all(t, r)
        assert check(f, "monotone") and check(f, "order") and check(f, "end")
        for q in range(h.n):
            for p in h.neighbors[q]:
                for s in h.neighbors[q]:
                    a, b, c = f.assign[p], f.assign[q], f.assign[s]
                    assert len({a, b, c}) < 3 or not (t.has_edge(a, b) and t.has_edge(b, c))


def test_task_commutes_rejects_pending_entries():
    seq = seq_for("TM")
    with pytest.raises(SequenceError):
        task_commutes(seq, {"status": "deferred"})
