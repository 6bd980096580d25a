import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from grsc import cli, fixtures

DATA = Path(__file__).parent / "data"


def call(*argv):
    buf = io.StringIO()
    code, report = cli.run(list(argv), stdout=buf)
    return code, report, buf.getvalue()


CHECK = {"FIX1": 0, "FIX2": 0, "FIX3": 0, "FIX4": 1, "FIX5": 0, "FIX6": 1}
CERT = {"FIX1": 0, "FIX2": 0, "FIX3": 0, "FIX4": 1, "FIX5": 0, "FIX6": 1}


@pytest.mark.parametrize("name", sorted(CHECK))
def test_exit_codes_on_fixtures(name):
    assert call("check", name, "--quiet")[0] == CHECK[name]
    assert call("certificate", name, "--quiet")[0] == CERT[name]
    assert call("pieces", name, "--quiet")[0] == 0
    assert call("presentation", name, "--quiet")[0] == 0


def test_check_fix4_witness():
    code, report, text = call("check", "FIX4.lgf")
    assert code == 1
    assert report["verdict"] == "fails"
    assert report["witness"]["piece"] == "a b a b"
    assert report["witness"]["cycle_length"] == 7
    assert "a b a b" in text


def test_unbounded_pieces_refuse_a_certificate():
    code, report, _ = call("certificate", "FIX6", "--quiet")
    assert code == 1 and report["verdict"] == "refused"
    assert "unbounded" in report["reason"]


def test_certificate_json(tmp_path):
    out = tmp_path / "out.json"
    code, report, _ = call("certificate", "FIX5.lgf", "--json", str(out), "--quiet")
    assert code == 0
    data = json.loads(out.read_text())
    assert data == json.loads(json.dumps(report, sort_keys=True))
    assert data["M"] == 2
    assert data["constants"] == {"contraction": 4, "lambda1": {"base": 10, "per_delta": 10}, "lambda2": 5}
    assert data["command"] == ["certificate", "FIX5.lgf", "--quiet"]
    assert data["exit_code"] == 0
    assert data["inputs"]["graph"]["source"] == "fixture:FIX5"


def test_cycle_cap_is_inconclusive():
    for cmd in ("check", "certificate", "presentation"):
        code, report, _ = call(cmd, "FIX5", "--cap-cycles", "1", "--quiet")
        assert code == 3
        assert report["verdict"] == "inconclusive"


def test_usage_errors(tmp_path):
    assert call("check", str(tmp_path / "missing.lgf"))[0] == 2
    assert call("check", "FIX1", "--bogus")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("ball", "FIX1")[0] == 2
    assert call("ball", "FIX1", "--radius", "-1")[0] == 2
    bad = tmp_path / "bad.lgf"
    bad.write_text("this is not a graph\n")
    assert call("check", str(bad))[0] == 2
    assert call("istrivial", "FIX1", "a", "z")[0] == 2


def test_word_commands():
    code, report, _ = call("reduce", "FIX1", "a a a a a", "--quiet")
    assert code == 0 and report["reduced"] == "-a -a"
    code, report, _ = call("istrivial", "--quiet", "FIX2", "--", "c", "d", "-c", "-d", "a", "b", "-a", "-b")
    assert code == 0 and report["trivial"] is True
    code, report, _ = call("istrivial", "FIX1", "a a", "--quiet")
    assert report["trivial"] is False


def test_word_commands_need_a_certified_presentation():
    code, report, _ = call("istrivial", "FIX4", "a", "--quiet")
    assert code in (0, 1)
    assert "certified" in report


def test_ball():
    code, report, _ = call("ball", "FIX2", "--radius", "2", "--quiet")
    assert code == 0
    assert report["ball"]["size"] == 65


def test_fill():
    code, report, _ = call("fill", "FIX1", "a a a a a a a", "--quiet")
    assert code == 0
    assert report["faces"] == 1 and report["interior_arcs_are_pieces"] is True
    code, report, _ = call("fill", "FIX1", "a a", "--quiet")
    assert code == 1 and report["verdict"] == "nontrivial"


def test_verify_small():
    code, report, text = call("verify", "FIX2", "--radius", "3", "--delta", "0", "--seed", "3")
    assert code == 0 and report["verdict"] == "pass"
    assert set(report["checks"]) >= {"contraction", "lambda1", "lambda2"}
    assert "contraction" in text


def test_verify_refuses_unbounded_pieces():
    code, report, _ = call("verify", "FIX6", "--radius", "2", "--quiet")
    assert code == 1 and report["verdict"] == "refused"


@pytest.mark.parametrize("action, name, code, key, value", [
    ("validate", "bigon_two_faces", 0, "is_ngon", True),
    ("validate", "bad_valence", 0, "is_37", False),
    ("classify", "triangle_IV", 0, "form", "IV"),
    ("classify", "bigon_two_faces", 0, "form", "I1"),
    ("reduce", "quad_special", 0, "irreducible", True),
    ("reduce", "ladders_cut", 0, "irreducible", False),
    ("cross", "quad_special", 0, "verdict", "ok"),
])
def test_diagram_actions(action, name, code, key, value):
    got, report, _ = call("diagram", action, str(DATA / f"{name}.dgf"), "--quiet")
    assert got == code
    assert report[key] == value


def test_diagram_precondition_errors(tmp_path):
    assert call("diagram", "cross", str(DATA / "quad_reducible.dgf"), "--quiet")[0] == 2
    assert call("diagram", "classify", str(DATA / "quad_special.dgf"), "--quiet")[0] == 2
    broken = tmp_path / "broken.dgf"
    broken.write_text("faces 3\nface 0: 0 1 2\nboundary: 0 1 2\n")
    assert call("diagram", "validate", str(broken), "--quiet")[0] == 2


def test_invalid_diagram_fails_validation(tmp_path):
    f = tmp_path / "twisted.dgf"
    f.write_text("faces 2\nface 0: 0 1 2 3\nface 1: 3 0 4 5\nboundary: 0 1 2 3 4 5\nsides: 1 4\n")
    code, report, _ = call("diagram", "validate", str(f), "--quiet")
    assert code == 1 and report["ok"] is False


@pytest.mark.parametrize("argv", [
    ["certificate", "FIX5"],
    ["verify", "FIX2", "--radius", "3", "--delta", "1", "--seed", "11"],
    ["diagram", "reduce", str(DATA / "quad_reducible.dgf")],
    ["fill", "FIX2", "a b -a -b c d -c -d"],
])
def test_json_reports_are_byte_identical(tmp_path, argv):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert cli.run(argv + ["--json", str(path), "--quiet"], stdout=io.StringIO())[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"time" not in outs[0]


def test_fixture_files_take_priority(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "FIX1.lgf").write_text(fixtures.text("FIX4"))
    code, report, _ = call("check", "FIX1.lgf", "--quiet")
    assert code == 1
    assert report["inputs"]["graph"]["source"] == "FIX1.lgf"


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "grsc.cli", "check", "FIX4", "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "grsc.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "certificate" in proc.stdout
