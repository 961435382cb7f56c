import json

import pytest

from app.config import settings
from app.main import main
from tests.conftest import BCN_M_F


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        return code, capsys.readouterr().out
    return _run


@pytest.fixture
def net(networks_dir):
    return lambda name: str(networks_dir / name)


# ─────────────────────────────────────────────
# compile
# ─────────────────────────────────────────────

def test_compile_emits_transition_matrix(run, net):
    code, out = run("compile", net("bcn_point.net"))
    assert code == 0
    doc = json.loads(out)
    assert doc["M_F"] == BCN_M_F
    assert (doc["N"], doc["M"]) == (16, 4)


def test_compile_mix_valued_header(run, net):
    code, out = run("compile", net("mix_valued.net"))
    doc = json.loads(out)
    assert code == 0
    assert (doc["N"], doc["M"]) == (6, 3)
    assert doc["radices"] == {"states": [2, 3], "controls": [3]}


def test_compile_malformed_file_exits_1(run, tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("state X bool\n", encoding="utf-8")
    code, out = run("compile", str(bad))
    assert code == 1
    assert out == ""


def test_compiled_json_is_accepted_as_input(run, net, tmp_path):
    compiled = tmp_path / "bcn.json"
    assert run("compile", net("bcn_point.net"), "--out", str(compiled))[0] == 0
    code, out = run("stabilize", str(compiled), "--index", "3")
    assert code == 0
    assert json.loads(out)["count"] == "1024"


def test_compiled_json_respects_state_cap(run, net, tmp_path, monkeypatch):
    compiled = tmp_path / "bcn.json"
    assert run("compile", net("bcn_point.net"), "--out", str(compiled))[0] == 0
    monkeypatch.setattr(settings, "MAX_STATES", 32)
    assert run("stabilize", str(compiled), "--index", "3")[0] == 1
    assert run("stabilize", net("bcn_point.net"), "--index", "3")[0] == 1


# ─────────────────────────────────────────────
# stabilize
# ─────────────────────────────────────────────

def test_stabilize_point(run, net):
    code, out = run("stabilize", net("bcn_point.net"), "--point", "1,1,0,1")
    report = json.loads(out)
    assert code == 0
    assert report["solvable"]
    assert report["count"] == "1024"
    assert report["convergence_time"] == 3
    assert report["target"] == ["(1,1,0,1)"]
    assert report["attractor"] == [3]
    assert set(report["feedback_formulas"]) == {"U1", "U2"}


@pytest.mark.parametrize("target", ["{6,7,12}", "{(1,0,1,0),(1,0,0,1),(0,1,0,0)}", "bcn_set.txt"])
def test_stabilize_set(run, net, target):
    spec = net(target) if target.endswith(".txt") else target
    code, out = run("stabilize", net("bcn_point.net"), "--set", spec)
    report = json.loads(out)
    assert code == 0
    assert report["count"] == "6144"
    assert report["core_W0"] == [6, 7, 12]
    assert report["attractor"]
    assert set(report["attractor"]) <= {6, 7, 12}


def test_stabilize_set_mixing_tuples_and_indices(run, net):
    code, out = run("stabilize", net("bcn_point.net"), "--set", "{(1,0,1,0), 7, 12}")
    report = json.loads(out)
    assert code == 0
    assert report["target_indices"] == [6, 7, 12]
    assert report["count"] == "6144"


@pytest.mark.parametrize("spec", ["{(1,0,1,0), 7, (0,1}", "{(1,0,1,0)), 7}", "{(1,0) 7}"])
def test_stabilize_malformed_set_exits_1(run, net, spec):
    assert run("stabilize", net("bcn_point.net"), "--set", spec)[0] == 1


def test_stabilize_mix_valued_without_formulas(run, net):
    code, out = run("stabilize", net("mix_valued.net"), "--point", "1,1")
    report = json.loads(out)
    assert code == 0
    assert report["selected_law"] == [1, 1, 3, 2, 2, 3]
    assert report["feedback_formulas"] is None


def test_stabilize_unsolvable_exits_2(run, tmp_path):
    negation = tmp_path / "neg.net"
    negation.write_text("state X: bool\nX' = !X\n", encoding="utf-8")
    code, out = run("stabilize", str(negation), "--index", "1")
    report = json.loads(out)
    assert code == 2
    assert not report["solvable"]
    assert report["reason"] == "NotFixedPoint"


@pytest.mark.parametrize("point", ["1,1,0", "1,1,0,2", "a,b,c,d"])
def test_stabilize_bad_target_exits_1(run, net, point):
    assert run("stabilize", net("bcn_point.net"), "--point", point)[0] == 1


def test_stabilize_needs_exactly_one_target(run, net):
    assert run("stabilize", net("bcn_point.net"))[0] == 1
    assert run("stabilize", net("bcn_point.net"), "--index", "3", "--point", "1,1,0,1")[0] == 1


def test_stabilize_enumerate_and_policy(run, net):
    code, out = run("stabilize", net("bcn_point.net"), "--index", "3", "--enumerate", "5", "--policy", "largest")
    report = json.loads(out)
    assert code == 0
    assert len(report["enumerated"]) == 5
    assert report["selected_law"][2] == 4


def test_stabilize_enumerate_default_limit(run, net):
    code, out = run("stabilize", net("bcn_point.net"), "--index", "3", "--enumerate")
    assert len(json.loads(out)["enumerated"]) == 1000


def test_stabilize_writes_report_and_dot(run, net, tmp_path):
    report_path, dot_path = tmp_path / "report.json", tmp_path / "loop.dot"
    code, out = run(
        "stabilize", net("bcn_point.net"), "--index", "3",
        "--json", str(report_path), "--dot", str(dot_path),
    )
    assert code == 0
    assert out == ""
    assert json.loads(report_path.read_text(encoding="utf-8"))["count"] == "1024"
    assert '"3" -> "3";' in dot_path.read_text(encoding="utf-8")


# ─────────────────────────────────────────────
# verify
# ─────────────────────────────────────────────

def test_verify_known_law_passes(run, net):
    code, out = run("verify", net("bcn_point.net"), "--law", net("bcn_point.law"), "--index", "3")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_known_set_law_passes(run, net):
    code, _ = run("verify", net("bcn_point.net"), "--law", net("bcn_set.law"), "--set", net("bcn_set.txt"))
    assert code == 0


def test_verify_bad_law_reports_violations(run, net, tmp_path):
    law = tmp_path / "bad.law"
    law.write_text("1 2 1 2 4 2 2 4 3 3 2 4 1 1 3 3\n", encoding="utf-8")
    code, out = run("verify", net("bcn_point.net"), "--law", str(law), "--point", "1,1,0,1")
    report = json.loads(out)
    assert code == 2
    assert [v["state"] for v in report["violations"]] == [3]


def test_verify_malformed_law_exits_1(run, net, tmp_path):
    law = tmp_path / "short.law"
    law.write_text("1 2 3\n", encoding="utf-8")
    assert run("verify", net("bcn_point.net"), "--law", str(law), "--index", "3")[0] == 1


# ─────────────────────────────────────────────
# graph
# ─────────────────────────────────────────────

def test_graph_from_law(run, net):
    code, out = run("graph", net("bcn_point.net"), "--law", net("bcn_set.law"), "--set", net("bcn_set.txt"))
    assert code == 0
    assert '"6" -> "12";' in out and '"12" -> "6";' in out


def test_graph_from_report(run, net, tmp_path):
    report_path = tmp_path / "report.json"
    run("stabilize", net("mix_valued.net"), "--index", "1", "--json", str(report_path))
    code, out = run("graph", net("mix_valued.net"), "--report", str(report_path))
    assert code == 0
    assert out.count(" -> ") == 6
    assert '"1" -> "1";' in out


def test_graph_law_without_target_exits_1(run, net):
    assert run("graph", net("bcn_point.net"), "--law", net("bcn_point.law"))[0] == 1


@pytest.mark.parametrize("target", [("--index", "1"), ("--point", "1,1"), ("--set", "{1}")])
def test_graph_report_with_target_exits_1(run, net, tmp_path, target):
    report_path = tmp_path / "report.json"
    run("stabilize", net("mix_valued.net"), "--index", "1", "--json", str(report_path))
    assert run("graph", net("mix_valued.net"), "--report", str(report_path), *target)[0] == 1
