import json

import pytest

from stabbond import catalog
from stabbond.cli import main
from stabbond.group import StabilizerState


@pytest.fixture
def run(tmp_path, capsys):
    def _run(*argv, session="s.json"):
        code = main(["--session", str(tmp_path / session), *argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def _error_code(err):
    line = err.strip().splitlines()[-1]
    return json.loads(line)["error"]


def test_build_counts(run, tmp_path):
    assert json.loads(run("build", "--named", "pentagon")[1])["elements"] == 31
    assert json.loads(run("build", "--named", "ghz", "3")[1])["elements"] == 7
    g = tmp_path / "path4.json"
    g.write_text(json.dumps({"n": 4, "edges": [[1, 2], [2, 3], [3, 4]]}))
    assert json.loads(run("build", "--graph", str(g))[1])["elements"] == 15


def test_export_round_trip(run, tmp_path):
    run("build", "--named", "cluster", "5")
    out = tmp_path / "state.json"
    assert run("export", "--out", str(out))[0] == 0
    assert run("build", "--state", str(out), session="t.json")[0] == 0
    a = StabilizerState.from_json(json.loads(out.read_text()))
    b = StabilizerState.from_json(json.loads((tmp_path / "t.json").read_text())["state"])
    assert a == b == catalog.named_state("cluster", 5)


def test_measure_outcome_flips(run):
    run("build", "--named", "ghz", "3")
    code, out, _ = run("measure", "1", "X", "--outcome", "-1")
    assert code == 0 and json.loads(out)["kept"] == 4
    code, out, _ = run("show", "--elements")
    assert json.loads(out)["group"] == ["+II", "-XX", "+ZZ", "+YY"]


def test_measure_halving_pipeline(run):
    run("build", "--named", "pentagon")
    sizes = []
    for k, b in [(1, "Z"), (2, "X"), (4, "Y")]:
        code, out, _ = run("measure", str(k), b, "--sample", "--seed", "3")
        assert code == 0
        rep = json.loads(out)
        sizes.append(rep["elements"] + 1)
        if not rep["determined"]:
            assert rep["kept"] == rep["discarded"]
    assert sizes[0] == 16


def test_error_codes(run):
    run("build", "--named", "ghz", "3")
    code, _, err = run("measure", "1", "W")
    assert code == 3 and _error_code(err) == "non_pauli_basis"
    run("build", "--generators=-ZI,IZ")
    code, _, err = run("measure", "1", "Z", "--outcome", "1")
    assert code == 4 and _error_code(err) == "contradicted_outcome"
    code, _, err = run("build", "--named", "nope")
    assert code == 3 and _error_code(err) == "invalid_state"
    code, _, err = run("analyze", "bonds", session="missing.json")
    assert code == 6 and _error_code(err) == "file_not_found"
    code, _, err = run("frobnicate")
    assert code == 3 and _error_code(err) == "usage"


def test_tampered_session_rejected(run, tmp_path):
    run("build", "--named", "bell")
    run("apply-cz", "1", "2")
    data = json.loads((tmp_path / "s.json").read_text())
    data["log"] = []
    (tmp_path / "s.json").write_text(json.dumps(data))
    code, _, err = run("show")
    assert code == 3 and _error_code(err) == "bad_session"


def test_analyze_reports(run, tmp_path):
    run("build", "--named", "bell")
    dot = tmp_path / "bell.dot"
    code, out, _ = run("analyze", "bonds", "--dot", str(dot))
    assert code == 0 and json.loads(out)["bond_count"] == 3
    assert dot.read_text().count(" -- ") == 3
    run("build", "--named", "pentagon")
    rep = json.loads(run("analyze", "core", "--about", "1")[1])
    assert len(rep["elements"]) == 7 and rep["rank"] == 2
    assert json.loads(run("analyze", "persistency")[1])["persistency"] == 3
    code, _, err = run("analyze", "core")
    assert code == 3


def test_analyze_partition_after_measurement(run):
    run("build", "--fixture", "cluster5_y5")
    run("measure", "5", "Y", "--outcome", "1")
    rep = json.loads(run("analyze", "partition")[1])
    assert rep["blocks"] == [[1, 2], [3, 4]]


def test_apply_local_and_replay(run):
    run("build", "--named", "cluster", "4")
    assert run("apply-local", "2", "HS")[0] == 0
    assert run("apply-cz", "1", "3")[0] == 0
    code, out, _ = run("show")
    assert code == 0 and len(json.loads(out)["log"]) == 2


def test_iso_exit_codes(run, tmp_path, monkeypatch):
    for name, args in [("a", ("ghz", "4")), ("b", ("cluster", "4")), ("c", ("cluster", "5")),
                       ("d", ("cluster_b5",)), ("p", ("pentagon",))]:
        run("build", "--named", *args, session=f"{name}.json")
    graph = tmp_path / "pent2.json"
    graph.write_text(json.dumps({"n": 5, "edges": [[1, 3], [3, 5], [5, 2], [2, 4], [4, 1]]}))
    run("build", "--graph", str(graph), session="q.json")

    def p(name):
        return str(tmp_path / f"{name}.json")

    assert run("iso", p("a"), p("b"))[0] == 1
    assert run("iso", p("c"), p("d"))[0] == 1
    code, out, _ = run("iso", p("p"), p("q"))
    assert code == 0 and "vertex_map" in json.loads(out)
    assert run("iso", "--compact", p("p"), p("q"))[0] == 0
    monkeypatch.setenv("STABBOND_BUDGET", "1")
    code, _, err = run("iso", p("p"), p("q"))
    assert code == 2 and _error_code(err) == "budget_exceeded"


def test_determinism(run, tmp_path):
    outs = []
    for name in ("x.json", "y.json"):
        run("build", "--named", "pentagon", session=name)
        run("measure", "3", "X", "--seed", "11", session=name)
        run("analyze", "bonds", "--out", str(tmp_path / (name + ".rep")),
            "--dot", str(tmp_path / (name + ".dot")), session=name)
        outs.append(((tmp_path / (name + ".rep")).read_bytes(), (tmp_path / (name + ".dot")).read_bytes()))
    assert outs[0] == outs[1]


def test_classify(run, tmp_path):
    code, out, _ = run("classify", "4", "--out", str(tmp_path / "c4"), "--workers", "2")
    assert code == 0 and json.loads(out)["class_count"] == 2
    assert sorted(p.name for p in (tmp_path / "c4").iterdir()) == ["class1.dot", "class2.dot", "summary.json"]
    assert json.loads(run("classify", "2")[1])["class_count"] == 1
