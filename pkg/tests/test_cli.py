import json
import subprocess
import sys

import pytest

from codingtrees.cli import run
from codingtrees.checks import duplicate_left_child, fixture_tree
from codingtrees.coding_tree import from_json, iso_code, to_json, validate


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, code", [
    (["loweriso", "Z^3", "w*.Z^2 + Z^2"], 0),
    (["iso", "Z^3", "w*.Z^2 + Z^2"], 1),
    (["iso", "Z^2", "Z.Z"], 0),
    (["loweriso", "Z^2", "Q.Z"], 1),
])
def test_predicates(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


def test_compare(capsys):
    assert call(capsys, "compare", "Z^2", "--p", "(0,0)", "--q", "(0,1)") == (0, "Less\n", "")
    assert call(capsys, "compare", "Qd.Z + w*", "--p", "(top, 0)", "--q", "(5, 3)")[1] == "Greater\n"


def test_compare_reads_point_files(capsys, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"values": [{"int": 2}, {"int": 2}]}))
    assert call(capsys, "compare", "Z^2", "--p", str(p), "--q", "(2,2)")[1] == "Equal\n"


def test_parse_echoes_canonical_form(capsys):
    assert call(capsys, "parse", "w* . Z^2+Z.Z") == (0, "w*.Z^2 + Z^2\n", "")


@pytest.mark.parametrize("argv", [
    ["parse", "Z +"],
    ["compile", "Q_2(Z, Z)"],
    ["iso", "Z^2", "Q_2(Z)"],
    ["compare", "Z^2", "--p", "(0)", "--q", "(0,1)"],
    ["validate", "/nonexistent/tree.json"],
    ["sample"],
    ["nonsense"],
])
def test_errors_exit_2_with_one_line(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    if argv[0] != "nonsense" and argv != ["sample"]:
        assert len(err.strip().splitlines()) == 1


def test_compile_validate_canon(capsys, tmp_path):
    jpath, dpath = tmp_path / "t.json", tmp_path / "t.dot"
    code, out, _ = call(capsys, "compile", "w*.Z + Z", "--json", str(jpath), "--dot", str(dpath))
    assert code == 0 and out.startswith("vertices: 5")
    assert from_json(jpath.read_bytes()) == fixture_tree("w*.Z + Z")
    assert dpath.read_text().startswith("digraph")
    assert call(capsys, "validate", str(jpath)) == (0, "valid\n", "")
    code, out, _ = call(capsys, "compile", "Z^2")
    assert from_json(out) == fixture_tree("Z^2")


def test_validate_and_canon_on_broken_tree(capsys, tmp_path):
    t = fixture_tree("Q_2(w*, Z)")
    first = iso_code(t, t.left_children(t.root)[0])
    path = tmp_path / "bad.json"
    path.write_bytes(to_json(duplicate_left_child(t, t.height, first, 1)))
    code, out, _ = call(capsys, "validate", str(path))
    assert code == 1 and out.startswith("V6")
    out_path = tmp_path / "canon.json"
    assert call(capsys, "canon", str(path), "--json", str(out_path))[0] == 0
    canon = from_json(out_path.read_bytes())
    assert validate(canon).ok and canon == t


def test_iso_accepts_json_paths(capsys, tmp_path):
    path = tmp_path / "z.json"
    path.write_bytes(to_json(fixture_tree("Z^3")))
    assert call(capsys, "iso", str(path), "Z^3")[0] == 0
    assert call(capsys, "loweriso", str(path), "w*.Z^2 + w*.Z + w*")[0] == 0


def test_sample_is_seeded(capsys):
    a = call(capsys, "sample", "Q_2(w*, Z) + w*", "--seed", "4", "--count", "5", "--magnitude", "3")
    b = call(capsys, "sample", "Q_2(w*, Z) + w*", "--seed", "4", "--count", "5", "--magnitude", "3")
    assert a == b and a[0] == 0
    lines = a[1].splitlines()
    assert len(lines) == 5 and all("values" in json.loads(s) for s in lines)


def test_witness(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    code, out, _ = call(capsys, "witness", "Z^2", "--f", "(0,0)", "--g", "(5,5)",
                        "--probes", "50", "--seed", "1", "--trace", str(trace))
    assert code == 0 and "violations: 0" in out
    rows = json.loads(trace.read_text())
    assert rows[0]["image"] == {"values": [{"int": 5}, {"int": 5}]}


@pytest.mark.parametrize("suite", ["order", "transitivity", "invariance"])
def test_check_suites(capsys, suite):
    code, out, _ = call(capsys, "check", "w*.Z + Z", "--suite", suite, "--seed", "2")
    assert code == 0 and out.startswith(f"{suite}: ") and ", 0 failed" in out


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "codingtrees", "sample", "Qd_2(Q, Qd)", "--seed", "9", "--count", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a.splitlines()) == 4
