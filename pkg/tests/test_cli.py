from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hyperseed.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_elapsed(obj):
    if isinstance(obj, dict):
        return {k: strip_elapsed(v) for k, v in obj.items() if k != "elapsed_seconds"}
    if isinstance(obj, list):
        return [strip_elapsed(v) for v in obj]
    return obj


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "ramanujan-2-over-pi", "--digits", "25", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["pass"] is True and rep["achieved_digits"] >= 25
    assert isinstance(rep["lhs"], str)


def test_verify_text_truncates_to_digits_plus_two(capsys):
    code, out, _ = run(capsys, "verify", "levrie", "--param", "k=4", "--digits", "15")
    assert code == 0
    lhs = [l for l in out.splitlines() if "lhs =" in l][0].split("=")[1].strip()
    assert len(lhs.split(".")[1]) == 17


def test_transform_delta(tmp_path, capsys):
    src = tmp_path / "seq.txt"
    src.write_text("1\n0\n0\n0\n0\n")
    dst = tmp_path / "out.txt"
    code, _, _ = run(capsys, "transform", "--a", "1/2", "--input", str(src), "--output", str(dst))
    assert code == 0
    assert dst.read_text() == "1/1\n" * 5


def test_transform_inverse_round_trip(tmp_path, capsys):
    src = tmp_path / "x.txt"
    src.write_text("1\n1/2\n1/3\n1/4\n")
    code, y, _ = run(capsys, "transform", "--a", "5/7", "--input", str(src))
    ysrc = tmp_path / "y.txt"
    ysrc.write_text(y)
    code, x, _ = run(capsys, "transform", "--a", "5/7", "--input", str(ysrc), "--inverse")
    assert code == 0
    assert x == "1/1\n1/2\n1/3\n1/4\n"


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-id"],
    ["verify", "levrie", "--param", "k=0.5"],
    ["verify", "levrie", "--param", "zz=1"],
    ["transform", "--a", "1/2", "--input", "/nonexistent/file"],
    ["transform", "--a", "0", "--input", __file__],
    ["verify", "levrie", "--digits", "0"],
    ["eval", "--spec", "{not json"],
    ["derive", "--family", "explicit"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.strip()


def test_failure_exits_1(tmp_path, monkeypatch, capsys):
    bad = [{"id": "wrong", "lhs": {"upper": ["1/2", "1/2", "1/2"], "lower": ["1", "1"], "argument": "-1",
                                   "term_scale": {"num": [["1", "4"]]}},
            "rhs": "(div 3 pi)", "mode": "numeric", "params_schema": {"names": [], "sweep": [{}]}}]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(bad))
    monkeypatch.setenv("HYPERSEED_CATALOG", str(path))
    code, out, _ = run(capsys, "verify", "wrong", "--digits", "10")
    assert code == 1
    assert out.startswith("FAIL")


def test_json_reports_are_idempotent(capsys):
    argv = ["verify-all", "--digits", "12", "--format", "json"]
    c1, o1, _ = run(capsys, *argv)
    c2, o2, _ = run(capsys, *argv)
    assert c1 == c2 == 0
    assert strip_elapsed(json.loads(o1)) == strip_elapsed(json.loads(o2))
    ids = [r["id"] for r in json.loads(o1)["reports"]]
    assert ids == sorted(ids, key=ids.index)  # fixed order


def test_verify_all_text(capsys):
    code, out, _ = run(capsys, "verify-all", "--digits", "15")
    assert code == 0
    assert "FAIL" not in out
    assert out.rstrip().endswith("passed")


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--format", "json")
    assert code == 0
    ids = [r["id"] for r in json.loads(out)]
    assert "guillera-hn" in ids and "levrie-rewrite" in ids


def test_eval(capsys):
    spec = json.dumps({"upper": ["1/2", "1/2"], "lower": ["1"], "argument": "1/4"})
    code, out, _ = run(capsys, "eval", "--spec", spec, "--digits", "15", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"].startswith("1.073182007149364")
    code, out, _ = run(capsys, "eval", "--spec", json.dumps({"upper": ["-3", "a"], "lower": ["1"], "argument": "1"}),
                       "--param", "a=7/2")
    assert code == 0 and "= -5/16" in out


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "--family", "half-shift", "--param", "a=1/4", "--param", "n=1/4",
                       "--format", "json", "--confirm")
    body = json.loads(out)
    assert code == 0
    assert body["verification"]["pass"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperseed", "verify", "gauss-inner", "--param", "a=1/2",
                           "--param", "k=3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "-5/16" in proc.stdout
