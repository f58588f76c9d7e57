"""Tests for the command-line surface.

Exit codes: 0 success, 1 rejected verify / empty search, 2 errors.  The
JSON document is canonical (two-space indent, sorted keys, trailing
newline); the committed files under tests/golden/ freeze the exact
output bytes for the example scripts.
"""

import json
import pathlib
import subprocess
import sys

from lefweave.certify import Certificate
from lefweave.cli import (CliError, execute, export_json, format_move, main,
                          render)
from lefweave.dsl import parse
from lefweave.invariants import total_space_invariants
from lefweave.presets import x1

REPO = pathlib.Path(__file__).resolve().parent.parent
EXAMPLES = ("x1", "x2", "sf_t3s")

X1_TEXT = (
    "fiber a2 = ak 3 n=2\n"
    "datum X1 over a2 = [e1, tw(e2)^2 e1]\n"
    "print invariants X1\n"
)


def write(tmp_path, text):
    path = tmp_path / "script.lef"
    path.write_text(text, encoding="utf-8")
    return str(path)


def run_main(capsys, argv):
    status = main(argv)
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_run_examples_match_goldens():
    for name in EXAMPLES:
        proc = subprocess.run(
            [sys.executable, "-m", "lefweave.cli",
             "run", "examples/%s.lef" % name],
            cwd=REPO, capture_output=True)
        golden = (REPO / "tests" / "golden" / ("%s.json" % name)).read_bytes()
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout == golden, name


def test_run_x1_values(tmp_path, capsys):
    status, out, err = run_main(
        capsys, ["run", write(tmp_path, X1_TEXT)])
    assert status == 0 and err == ""
    doc = json.loads(out)
    assert doc["meta"]["tool"] == "lefweave"
    assert doc["meta"]["seed"] is None
    (entry,) = doc["results"]
    assert entry["command"] == "print invariants"
    assert entry["datum"] == "X1"
    assert entry["preset"] is False
    assert entry["n"] == 2 and entry["chi"] == 1
    assert entry["homology"] == [
        {"degree": 0, "free": 1, "torsion": []},
        {"degree": 1, "free": 0, "torsion": []},
        {"degree": 2, "free": 1, "torsion": []},
        {"degree": 3, "free": 1, "torsion": []},
    ]
    assert entry["middle_form"] == {
        "matrix": [[0]], "symmetry": "skew",
        "rank": 0, "abs_det": 1, "signature": None,
    }


def test_check_subcommand(tmp_path, capsys):
    good = write(tmp_path, X1_TEXT)
    status, out, err = run_main(capsys, ["check", good])
    assert (status, out, err) == (0, "", "")

    bad = tmp_path / "bad.lef"
    bad.write_text("fiber a = ak\n", encoding="utf-8")
    status, out, err = run_main(capsys, ["check", str(bad)])
    assert status == 2 and out == ""
    assert "line 1" in err

    status, out, err = run_main(capsys, ["check", str(tmp_path / "no.lef")])
    assert status == 2 and "no.lef" in err


def test_verify_rejection_exits_1(tmp_path, capsys):
    text = (
        "fiber a1 = ak 2 n=2\n"
        "datum D over a1 = [e1]\n"
        "script s on D { rotate }\n"
        "verify s\n"
    )
    status, out, err = run_main(capsys, ["run", write(tmp_path, text)])
    assert status == 1 and err == ""
    (entry,) = json.loads(out)["results"]
    assert entry["command"] == "verify"
    assert entry["script"] == "s" and entry["base"] == "D"
    assert entry["accepted"] is False
    assert "neither loose-certified" in entry["reason"]
    assert entry["moves"] == ["rotate"]
    assert entry["claim"] == "flexible"


def test_search_hit_and_miss(tmp_path, capsys):
    hit = (
        "fiber a2 = ak 3 n=2\n"
        "datum D over a2 = []\n"
        "search D depth=0 width=1\n"
    )
    status, out, err = run_main(capsys, ["run", write(tmp_path, hit)])
    assert status == 0
    (entry,) = json.loads(out)["results"]
    assert entry["found"] is True
    assert entry["depth"] == 0 and entry["width"] == 1
    assert entry["certificate"] == {
        "moves": [], "certifications": [], "claim": "subcritical"}

    miss = (
        "fiber a1 = ak 2 n=2\n"
        "datum D over a1 = [e1]\n"
        "search D depth=1 width=10\n"
    )
    status, out, err = run_main(capsys, ["run", write(tmp_path, miss)])
    assert status == 1
    (entry,) = json.loads(out)["results"]
    assert entry["found"] is False and entry["certificate"] is None


def test_runtime_error_exits_2(tmp_path, capsys):
    text = (
        "fiber a1 = ak 2 n=2\n"
        "datum D over a1 = [e1, e1]\n"
        "script s on D { hurwitzL 9 }\n"
    )
    status, out, err = run_main(capsys, ["run", write(tmp_path, text)])
    assert status == 2 and out == ""
    assert "line 3" in err
    assert "while defining 's'" in err
    assert "out of range" in err


def test_json_out_and_seed(tmp_path, capsys):
    path = write(tmp_path, X1_TEXT)
    copy = tmp_path / "copy.json"
    status, out, err = run_main(
        capsys, ["run", path, "--json-out", str(copy), "--seed", "7"])
    assert status == 0
    assert copy.read_text(encoding="utf-8") == out
    assert json.loads(out)["meta"]["seed"] == 7


def test_execute_api_and_preset_flag():
    ws = parse(
        "datum P = preset x2\n"
        "script flex on P { hurwitzR 2; certify-loose 2 }\n"
        "verify flex\n"
    )
    results, status = execute(ws)
    assert status == 0
    (entry,) = results
    assert entry["preset"] is True
    assert entry["accepted"] is True
    assert entry["moves"] == ["hurwitzR 2", "certify-loose 2"]
    assert entry["certifications"] == [[3, "loose_pair"]]
    assert entry["claim"] == "flexible"
    assert entry["trace"][0].startswith("1:")


def test_render_shape():
    blob = render([], "whatever.lef")
    assert blob.endswith("\n")
    assert json.loads(blob) == {
        "meta": {"tool": "lefweave", "version": "0.1.0",
                 "source": "whatever.lef", "seed": None},
        "results": [],
    }


def test_export_json():
    blob = export_json(total_space_invariants(x1()))
    doc = json.loads(blob)
    assert doc["chi"] == 1 and doc["middle_form"]["symmetry"] == "skew"

    cert = Certificate((("hurwitz_right", (2,)), ("certify_loose", (2,))),
                       ((3, "loose_pair"),), "flexible")
    doc = json.loads(export_json(cert))
    assert doc == {"moves": ["hurwitzR 2", "certify-loose 2"],
                   "certifications": [[3, "loose_pair"]],
                   "claim": "flexible"}

    try:
        export_json(42)
    except CliError as err:
        assert "cannot export" in str(err)
    else:
        raise AssertionError("expected CliError")


def test_format_move_all_tags():
    assert format_move(("rotate", ())) == "rotate"
    assert format_move(("hurwitz_left", (2,))) == "hurwitzL 2"
    assert format_move(("hurwitz_right", (1,))) == "hurwitzR 1"
    assert format_move(("certify_loose", (3,))) == "certify-loose 3"
    assert format_move(("insert_sphere", (2, "e2"))) == "insert-sphere 2 e2"
    assert format_move(("stabilize", ((0, 1), "s3"))) == "stabilize [0, 1] s3"
    assert format_move(("subflex", (((1,), None),))) == "subflex [[1], none]"
    assert format_move(("bsum", (None,)), label="D") == "bsum D"
    assert format_move(("bsum", (None,))) == "bsum <datum>"
