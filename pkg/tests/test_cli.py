import io
import subprocess
import sys

import pytest
from pysat.formula import CNF
from pysat.solvers import Minisat22

from admissible.cli import main
from admissible.core import parse_family


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def verify_text(capsys, monkeypatch, text):
    return run(capsys, monkeypatch, ["verify", "-"], stdin=text)


def test_construct_pipes_into_verify(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["construct", "6", "5"])
    assert code == 0
    code, out, _ = verify_text(capsys, monkeypatch, out)
    assert code == 0
    assert "I(6,5): yes" in out and "ADMISSIBLE" in out


def test_shell_pipeline():
    exe = [sys.executable, "-m", "admissible"]
    built = subprocess.run(exe + ["construct", "6", "5"], capture_output=True, text=True, check=True)
    res = subprocess.run(exe + ["verify", "-"], input=built.stdout, capture_output=True, text=True)
    assert res.returncode == 0


def test_verify_reports_clash(capsys, monkeypatch):
    code, out, _ = verify_text(capsys, monkeypatch, "m 6\n121200\n120012\n001212\n")
    assert code == 1
    assert "NOT ADMISSIBLE: triple clash: 121200, 120012, 001212" in out


def test_verify_explicit_w(capsys, monkeypatch, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("m 3\n120\n102\n012\n")
    assert run(capsys, monkeypatch, ["verify", str(p), "--w", "2"])[0] == 0
    code, out, _ = run(capsys, monkeypatch, ["verify", str(p), "--w", "1"])
    assert code == 1 and "I(3,1): no" in out


@pytest.mark.parametrize("text", ["m 3\n12\n", "m 3\n103\n", "m 3\n120\n120\n", "hello\n"])
def test_verify_malformed(capsys, monkeypatch, text):
    code, _, err = verify_text(capsys, monkeypatch, text)
    assert code == 2 and err.count("\n") == 1


def test_missing_file(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["verify", "/no/such/file"])[0] == 2


def test_usage_errors(capsys, monkeypatch):
    assert run(capsys, monkeypatch, [])[0] == 2
    assert run(capsys, monkeypatch, ["construct", "x", "1"])[0] == 2
    assert run(capsys, monkeypatch, ["construct", "6", "4"])[0] == 2
    assert run(capsys, monkeypatch, ["typed-clash", "13", "0,1", "0,2", "1,2", "3"])[0] == 2
    assert run(capsys, monkeypatch, ["typed-clash", "1", "0,1", "0,9", "1,2", "3"])[0] == 2


def test_typed_clash(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["typed-clash", "11", "0,1,3,4", "0,2,3,4", "1,2,3,4", "5"])
    assert (code, out.strip()) == (0, "CLASH")
    code, out, _ = run(capsys, monkeypatch, ["typed-clash", "12", "0,1,3,4", "0,2,3,4", "1,2,3,4", "5"])
    assert (code, out.strip()) == (1, "NO CLASH")


def test_bound(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["bound", "330", "11", "7"])
    assert code == 0 and "2.2180" in out.replace("2.21798", "2.2180")
    code, out, _ = run(capsys, monkeypatch, ["bound", "330", "11", "7", "--format", "kv"])
    kv = dict(l.split("=", 1) for l in out.splitlines())
    assert round(float(kv["base"]), 4) == 2.2180


def test_search_found_exhausted_limit(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["search", "7", "4"])
    assert code == 0
    assert verify_text(capsys, monkeypatch, out)[0] == 0
    code, out, _ = run(capsys, monkeypatch, ["search", "12", "4", "--nodes", "20"])
    assert code == 3 and "LimitReached" in out


def test_fmax(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["fmax", "5", "3"])
    assert code == 0 and "f(5,3) = 10" in out
    assert verify_text(capsys, monkeypatch, out)[0] == 0
    code, out, _ = run(capsys, monkeypatch, ["fmax", "10", "5", "--nodes", "3"])
    assert code == 3 and "f(10,5) >=" in out
    assert verify_text(capsys, monkeypatch, out)[0] == 0


def test_monotype(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["monotype", "5", "4", "11"])
    assert code == 1 and out.startswith("NONE")
    code, out, _ = run(capsys, monkeypatch, ["monotype", "4", "3", "121"])
    assert code == 0
    assert verify_text(capsys, monkeypatch, out)[0] == 0
    code, out, _ = run(capsys, monkeypatch, ["monotype", "6", "4", "1212", "--nodes", "3"])
    assert code == 3


def test_reconstruct_and_colour(capsys, monkeypatch, tmp_path):
    code, out, err = run(capsys, monkeypatch, ["reconstruct", "6", "121"])
    assert code == 1 and "001111, 110011, 111100" in err
    assert verify_text(capsys, monkeypatch, out)[0] == 1
    code, out, _ = run(capsys, monkeypatch, ["reconstruct", "5", "121", "-o", str(tmp_path / "r.txt")])
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["colour", str(tmp_path / "r.txt")])
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(rows) == 10 and all(r.endswith(" 121") for r in rows)
    assert run(capsys, monkeypatch, ["verify", str(tmp_path / "r.txt")])[0] == 0


def test_colour_rejects_wrong_shape(capsys, monkeypatch):
    # an I(3,2) family is not I(3,1)
    code, _, err = run(capsys, monkeypatch, ["colour", "-"], stdin="m 3\n120\n102\n012\n")
    assert code == 2 and "not an I(3,1)" in err


def test_project(capsys, monkeypatch):
    _, built, _ = run(capsys, monkeypatch, ["construct", "6", "5"])
    code, out, _ = run(capsys, monkeypatch, ["project", "-", "5", "nonzero"], stdin=built)
    assert code == 0 and "# I(5,4)" in out
    code, out, _ = verify_text(capsys, monkeypatch, out)
    assert code == 0 and "I(5,4): yes" in out
    assert run(capsys, monkeypatch, ["project", "-", "9", "zero"], stdin=built)[0] == 2


def test_export_and_decode(capsys, monkeypatch, tmp_path):
    cnf = tmp_path / "i64.cnf"
    assert run(capsys, monkeypatch, ["export-cnf", "6", "4", "-o", str(cnf)])[0] == 0
    with Minisat22(bootstrap_with=CNF(from_file=str(cnf)).clauses) as s:
        assert s.solve()
        model = s.get_model()
    mfile = tmp_path / "model.txt"
    mfile.write_text("s SATISFIABLE\nv " + " ".join(map(str, model)) + " 0\n")
    code, out, _ = run(capsys, monkeypatch, ["decode", str(cnf), str(mfile)])
    assert code == 0
    assert parse_family(out).m == 6
    assert verify_text(capsys, monkeypatch, out)[0] == 0
    mfile.write_text("v 1 2 3 0\n")
    assert run(capsys, monkeypatch, ["decode", str(cnf), str(mfile)])[0] == 2
