import json
import subprocess
import sys

import pytest

from motint.cli import run
from motint.corpus import example_text


def run_json(capsys, *argv):
    code = run([*argv, "--output", "json"])
    out = capsys.readouterr().out
    assert out.count("\n") == 1  # exactly one canonical document
    doc = json.loads(out)
    assert doc["schema"] == "1"
    return code, doc


def test_integrate(capsys):
    code = run(["integrate", "--example", "a1-divisor-a1", "--precision", "6"])
    out = capsys.readouterr().out
    assert code == 0
    assert "closed form: (L^2 - L)/(L^2 - 1)" in out
    assert "series:      1 - L^-1 + L^-2 - L^-3 + L^-4 - L^-5  (mod L^-6)" in out


def test_integrate_json(capsys):
    code, doc = run_json(capsys, "integrate", "--example", "a2-axes", "--precision", "4")
    assert code == 0 and doc["precision"] == 4 and doc["exit_code"] == 0


def test_kequiv(capsys):
    code, doc = run_json(capsys, "kequiv-check", "--example", "atiyah-flop")
    assert code == 0 and doc["passed"]
    assert doc["common_class_text"] == "1 + L^-1  (mod L^-10)"


def test_kequiv_with_counts(capsys):
    code, doc = run_json(capsys, "kequiv-check", "--example", "atiyah-flop", "--q", "2", "--q", "3")
    assert code == 0
    assert [(r["left_count"], r["right_count"]) for r in doc["oracle"]] == [(12, 12), (36, 36)]


def test_kequiv_failure(capsys):
    assert run(["kequiv-check", "--example", "a2-vs-blowup"]) == 1


def test_wrong_discrepancy(capsys):
    code, doc = run_json(capsys, "transform-check", "--example", "bl-a2-wrong-discrepancy")
    assert code == 1 and not doc["passed"]
    assert doc["first_difference"] == [-2, -2, "1"]


@pytest.mark.parametrize("ident", ["bl-a2-origin", "bl-a3-origin", "bl-a3-line",
                                   "bl-a2-hyperplane-a1", "bl-a2-hyperplane-a2"])
def test_transform_pass(capsys, ident):
    assert run(["transform-check", "--example", ident]) == 0


def test_count(capsys):
    code, doc = run_json(capsys, "count", "--example", "node-threefold", "--q", "3")
    assert code == 0 and doc["count"] == 33 and doc["matches"]


def test_count_jets(capsys):
    code, doc = run_json(capsys, "count-jets", "--example", "hyperbola-jets", "--q", "5", "--m", "1")
    assert code == 0 and doc["count"] == 20 and doc["smooth_law_holds"]
    # singular: reported, not failed
    code, doc = run_json(capsys, "count-jets", "--example", "node-threefold", "--q", "2", "--m", "1")
    assert code == 0 and not doc["smooth_law_holds"] and not doc["smooth"]


def test_contact_count(capsys):
    code, doc = run_json(capsys, "contact-count", "--example", "a2-axes", "--q", "2", "--m", "2",
                         "--contact", "1,1")
    assert code == 0 and doc["count"] == 4
    code, doc = run_json(capsys, "contact-count", "--example", "a1-divisor-a1", "--q", "3", "--m", "2",
                         "--order", "1")
    assert code == 0 and doc["count"] == 6
    code, _ = run_json(capsys, "contact-count", "--example", "a2-axes", "--q", "3", "--m", "1",
                       "--contact", "0,0")
    assert code == 0


def test_fibration(capsys):
    code, doc = run_json(capsys, "fibration-check", "--q", "2", "--m", "2", "--e", "1")
    assert code == 0 and doc["fiber_sizes"] == {"2": doc["fiber_sizes"]["2"]}


def test_zeta(capsys):
    code, doc = run_json(capsys, "zeta", "--example", "atiyah-flop", "--q", "2")
    assert code == 0 and doc["identical"]
    code, doc = run_json(capsys, "zeta", "--example", "node-threefold", "--q", "2")
    assert doc["zeta"]["text"] == "(1 - 2t)/((1 - 8t)*(1 - 4t))"


def test_examples(capsys):
    code, doc = run_json(capsys, "examples")
    assert code == 0 and len(doc["examples"]) >= 11
    assert run(["examples", "--show", "a2-axes"]) == 0
    assert capsys.readouterr().out == example_text("a2-axes")


@pytest.mark.parametrize("argv", [
    ["integrate"],
    ["integrate", "--example", "nope"],
    ["integrate", "--example", "a2-axes", "--precision", "0"],
    ["integrate", "--example", "atiyah-flop"],
    ["frobnicate"],
    ["count", "--example", "node-threefold", "--q", "4"],
    ["contact-count", "--example", "a2-axes", "--q", "2", "--m", "0", "--contact", "1,1"],
    ["contact-count", "--example", "a2-axes", "--q", "2", "--m", "2"],
    ["count-jets", "--example", "node-threefold", "--q", "5", "--m", "3", "--max-states", "100"],
])
def test_input_errors_exit_2(capsys, argv):
    assert run(argv) == 2


def test_bad_file_reports_path(tmp_path, capsys):
    doc = json.loads(example_text("a2-axes"))
    del doc["snc"]["strata"]["0,1"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    code, out = run_json(capsys, "integrate", "--input", str(p))
    assert code == 2 and out["path"].startswith("$.snc")
    assert "missing subset" in out["error"]


def test_threads_flag_and_env(capsys, monkeypatch):
    monkeypatch.setenv("MOTINT_THREADS", "1")
    _, a = run_json(capsys, "count-jets", "--example", "node-threefold", "--q", "2", "--m", "1")
    _, b = run_json(capsys, "count-jets", "--example", "node-threefold", "--q", "2", "--m", "1",
                    "--threads", "3")
    assert a["count"] == b["count"] == 88
    monkeypatch.setenv("MOTINT_THREADS", "zero")
    assert run(["count", "--example", "node-threefold", "--q", "2"]) == 2
    assert run(["count", "--example", "node-threefold", "--q", "2", "--threads", "2"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "motint", "kequiv-check", "--example", "atiyah-flop"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "common class: 1 + L^-1" in proc.stdout
