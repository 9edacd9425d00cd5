import json

import pytest

from treefraisse import io
from treefraisse.cli import BUDGET_ENV, main


def _fx(name):
    return io.read(io.fixture_path(name))


@pytest.fixture
def maps(tmp_path):
    out = {}
    for name in ("big_example", "no_confluent_search"):
        doc = _fx(name)
        for key in ("f", "g"):
            p = tmp_path / f"{name}_{key}.json"
            io.save(doc["inputs"][key], p)
            out[name, key] = p
    for name in ("no_confluent_f", "rooted_triod"):
        p = tmp_path / f"{name}.json"
        io.save(_fx(name)["inputs"]["map"], p)
        out[name] = p
    return out


def test_check_pass_and_fail(maps, tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "--map", str(maps["no_confluent_f"]), "--property", "confluent", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["reports"][0]["verdict"] is True
    assert main(["check", "--map", str(maps["no_confluent_f"]), "--property", "monotone", "--out", str(out)]) == 1
    rep = json.loads(out.read_text())["reports"][0]
    assert rep["verdict"] is False and rep["witness"] is not None


def test_check_rooted(maps, capsys):
    assert main(["check", "--map", str(maps["rooted_triod"]), "--property", "order"]) == 0
    assert '"verdict": true' in capsys.readouterr().out


def test_amalgamate_tree(maps, tmp_path):
    out = tmp_path / "res.json"
    f, g = maps["big_example", "f"], maps["big_example", "g"]
    assert main(["amalgamate", "--f", str(f), "--g", str(g), "--strategy", "tree", "--out", str(out)]) == 0
    res = io.result_from_dict(io.read(out))
    assert res.d.n == 11 and res.certificate.commutes


def test_amalgamate_pullback_exits_zero(maps, tmp_path):
    out = tmp_path / "pb.json"
    f, g = maps["big_example", "f"], maps["big_example", "g"]
    assert main(["amalgamate", "--f", str(f), "--g", str(g), "--strategy", "pullback", "--out", str(out)]) == 0
    assert io.result_from_dict(io.read(out)).d.n == 7


def test_amalgamate_search_without_solution(maps, tmp_path):
    out = tmp_path / "s.json"
    f, g = maps["no_confluent_search", "f"], maps["no_confluent_search", "g"]
    code = main(["amalgamate", "--f", str(f), "--g", str(g), "--strategy", "search",
                 "--constraint", "confluent", "--max-verts", "6", "--out", str(out)])
    assert code == 1 and json.loads(out.read_text())["ok"] is False


def test_budget_env(maps, monkeypatch):
    f, g = maps["big_example", "f"], maps["big_example", "g"]
    monkeypatch.setenv(BUDGET_ENV, "lots")
    assert main(["amalgamate", "--f", str(f), "--g", str(g), "--strategy", "search"]) == 2


def test_factorize(maps, tmp_path):
    out = tmp_path / "fz.json"
    assert main(["factorize", "--map", str(maps["no_confluent_f"]), "--out", str(out)]) == 0
    fz = io.factorization_from_dict(io.read(out))
    f = io.load_map(maps["no_confluent_f"])
    assert tuple(fz.l.assign[x] for x in fz.m.assign) == f.assign
    assert fz.middle.n == 3


def test_enumerate_trees(tmp_path):
    out = tmp_path / "t.json"
    assert main(["enumerate", "--trees", "6", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 6
    assert main(["enumerate", "--trees", "4", "--rooted", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 4


def test_enumerate_maps(tmp_path):
    dom, cod = tmp_path / "d.json", tmp_path / "c.json"
    io.save({"n": 3, "edges": [[0, 1], [1, 2]]}, dom)
    io.save({"n": 2, "edges": [[0, 1]]}, cod)
    out = tmp_path / "m.json"
    assert main(["enumerate", "--dom", str(dom), "--cod", str(cod), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 6
    assert main(["enumerate", "--dom", str(dom), "--cod", str(cod), "--constraint", "monotone", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["count"] == 4
    assert main(["enumerate", "--dom", str(dom)]) == 2


def test_build_report_export(tmp_path):
    seq = tmp_path / "seq.json"
    assert main(["build-limit", "--family", "TM", "--depth", "4", "--cap", "3", "--out", str(seq)]) == 0
    rep = tmp_path / "rep.json"
    assert main(["report", "--seq", str(seq), "--stage", "3", "--out", str(rep)]) == 0
    assert json.loads(rep.read_text())["stage"] == 3
    assert main(["report", "--seq", str(seq), "--split", "--out", str(rep)]) == 0
    dot = tmp_path / "s.dot"
    assert main(["export", "--seq", str(seq), "--stage", "2", "--out", str(dot)]) == 0
    assert dot.read_text().startswith("graph")
    assert main(["export", "--seq", str(seq), "--plain", "--out", str(dot)]) == 0
    assert "shape" not in dot.read_text()


def test_export_graph_and_result(maps, tmp_path, capsys):
    g = tmp_path / "g.json"
    io.save({"n": 1, "edges": []}, g)
    assert main(["export", "--graph", str(g)]) == 0
    assert capsys.readouterr().out.count("[label=") == 1
    res = tmp_path / "res.json"
    main(["amalgamate", "--f", str(maps["big_example", "f"]), "--g", str(maps["big_example", "g"]),
          "--strategy", "tree", "--out", str(res)])
    assert main(["export", "--result", str(res)]) == 0
    assert capsys.readouterr().out.count(" -- ") == 10
    assert main(["export"]) == 2
    assert main(["export", "--graph", str(g), "--format", "svg"]) == 2


def test_verify(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--family", "TM", "--suite", "amalgamation", "--cap", "4", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["ok"] is True


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["check", "--map", "x.json"],
    ["check", "--map", "x.json", "--property", "shiny"],
    ["build-limit", "--family", "XX"],
])
def test_bad_invocations(argv):
    assert main(argv) == 2


def test_missing_and_malformed_input(tmp_path, capsys):
    assert main(["check", "--map", str(tmp_path / "nope.json"), "--property", "epi"]) == 2
    bad = tmp_path / "bad.json"
    io.save({"dom": {"n": 2, "edges": [[0, 2]]}, "cod": {"n": 1, "edges": []}, "assign": [0, 0]}, bad)
    assert main(["check", "--map", str(bad), "--property", "epi"]) == 2
    assert "$.dom.edges[0][1]" in capsys.readouterr().err


def test_help_exits_zero():
    assert main(["--help"]) == 0
