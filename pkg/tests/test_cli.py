import csv
import io
import json

import pytest

from modcat.cli import run
from modcat.modular_data import ModularData, build_sl2_adjoint


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fib_file(tmp_path, capsys):
    path = tmp_path / "fib.json"
    code, _, _ = invoke(capsys, "construct", "sl2-adjoint", "--k", "3", "--l", "1", "--out", str(path))
    assert code == 0
    return path


def test_construct_matches_library(fib_file):
    C = ModularData.from_json(json.loads(fib_file.read_text()))
    assert C.S == build_sl2_adjoint(3, 1).S


def test_construct_is_deterministic(capsys):
    a = invoke(capsys, "construct", "sl2", "--k", "4", "--l", "1")[1]
    b = invoke(capsys, "construct", "sl2", "--k", "4", "--l", "1")[1]
    assert a == b


def test_approx_output(capsys):
    code, out, _ = invoke(capsys, "construct", "sl2-adjoint", "--k", "3", "--l", "1", "--approx")
    assert code == 0 and "approx" in out


def test_validate_exit_codes(fib_file, tmp_path, capsys):
    assert invoke(capsys, "validate", "--in", str(fib_file))[0] == 0
    svec = tmp_path / "svec.json"
    invoke(capsys, "construct", "svec", "--eps", "1", "--out", str(svec))
    code, out, _ = invoke(capsys, "validate", "--in", str(svec))
    assert code == 1 and json.loads(out)["ok"] is False


def test_galois(fib_file, capsys):
    code, out, _ = invoke(capsys, "galois", "--in", str(fib_file))
    assert code == 0
    assert json.loads(out) == {"group_order": 2, "orbits": [["V0", "V2"]], "transitive": True,
                               "regular": True, "h2_order": 1}


def test_rep_single_lift(fib_file, capsys):
    code, out, _ = invoke(capsys, "rep", "--in", str(fib_file), "--lift", "11")
    rep = json.loads(out)
    assert code == 0 and rep["level"] == 5 and rep["minimal"] and rep["irreducible"]
    assert set(rep["g_sigma_checks"].values()) == {"pass"}


def test_factor_product(fib_file, tmp_path, capsys):
    prod = tmp_path / "ff.json"
    assert invoke(capsys, "construct", "product", "--in", str(fib_file), "--in", str(fib_file),
                  "--out", str(prod))[0] == 0
    code, out, _ = invoke(capsys, "factor", "--in", str(prod))
    obj = json.loads(out)
    assert code == 0 and len(obj["factors"]) == 2 and obj["prime"] is False


def test_classify_csv(capsys):
    code, out, _ = invoke(capsys, "classify", "--max-ordt", "7", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["N", "primes", "l", "rank", "anomaly"]
    assert [r[0] for r in rows[1:]] == ["1"] + ["5"] * 4 + ["7"] * 6


def test_classify_pretty(capsys):
    code, out, _ = invoke(capsys, "classify", "--max-ordt", "5", "--format", "pretty")
    assert code == 0 and out.strip()


def test_super(capsys):
    code, out, _ = invoke(capsys, "super", "--k", "1", "--l", "1")
    obj = json.loads(out)
    assert code == 0 and obj["transitive"] and obj["s_simple"] and obj["split"] is None


def test_sproduct(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    invoke(capsys, "construct", "super-sl2", "--k", "1", "--l", "1", "--out", str(a))
    invoke(capsys, "construct", "super-sl2", "--k", "1", "--l", "3", "--out", str(b))
    code, out, _ = invoke(capsys, "construct", "sproduct", "--in", str(a), "--in", str(b))
    assert code == 0 and len(json.loads(out)["underlying"]["labels"]) == 8


def test_theorems(capsys):
    code, out, _ = invoke(capsys, "theorems", "--prime", "5")
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize("argv", [
    ["construct", "bogus"],
    ["construct", "sl2", "--k", "3"],
    ["construct", "sl2-adjoint", "--k", "4", "--l", "1"],
    ["classify", "--max-ordt", "100000"],
    ["theorems"],
    ["rep", "--in", "x", "--lift", "notanint"],
])
def test_usage_errors(argv, capsys):
    assert invoke(capsys, *argv)[0] == 2


def test_missing_input_file(tmp_path, capsys):
    code, _, err = invoke(capsys, "validate", "--in", str(tmp_path / "missing.json"))
    assert code == 2 and "modcat" in err
