import io
import json

import pytest

from besselprod import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_eval_and_zeros():
    code, out = run("eval", "--n", "0", "1.0")
    assert code == 0 and float(out.split()[1]) == pytest.approx(0.7651976865579666, rel=1e-15)
    code, out = run("zeros", "--q", "1", "--count", "2")
    assert code == 0 and out.splitlines()[0].startswith("1 3.83170597020751")


@pytest.mark.parametrize("argv", [
    ("validate", "bogus"),
    ("zeros", "--count", "0"),
    ("dbquery", "2", "1", "1", "1"),
    ("expand", "--i", "1", "--j", "1", "--k", "1", "--m", "1"),
    ("frobnicate",),
    (),
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_validate_json_deterministic():
    c1, a = run("validate", "two", "--draws", "3", "--seed", "7", "--format", "json")
    c2, b = run("validate", "two", "--draws", "3", "--seed", "7", "--format", "json")
    assert c1 == c2 == 0 and a == b
    reports = json.loads(a)
    assert len(reports) == 3 * 18 and all(r["pass"] and r["seed"] == 7 for r in reports)


def test_validate_approx_warns():
    code, out = run("validate", "approx", "--draws", "20", "--seed", "7")
    assert code == 0 and "WARN eq60" in out


def test_table1(tmp_path):
    csv_path = tmp_path / "fig1.csv"
    code, out = run("table1", "--csv", str(csv_path))
    row = next(line for line in out.splitlines() if line.split()[:3] == ["20", "20", "20"])
    assert row.split()[3:5] == ["9.061E-05", "8.071E-05"]
    assert len(csv_path.read_text(encoding="utf-8").splitlines()) == 30
    # the printed (70, 70, 70) entry and the prefactor disagreement are reported
    assert "DISCREPANCY" in out and "(70, 70, 70)" in out
    assert code == 1
    code, out = run("table1", "--format", "json")
    assert len(json.loads(out)["rows"]) == 29


def test_dbgen_and_query(tmp_path):
    out_csv, out_idx = tmp_path / "db.csv", tmp_path / "db.bpk"
    code, out = run("dbgen", "--max-mode", "10", "--out", str(out_csv), "--index", str(out_idx))
    assert code == 0 and "220 records" in out
    c1, a = run("dbquery", "1", "3", "1", "2", "--db", str(out_csv))
    c2, b = run("dbquery", "1", "3", "1", "2", "--db", str(out_idx))
    assert c1 == c2 == 0 and a == b
    assert run("dbquery", "1", "1", "1", "11", "--db", str(out_csv))[0] == 1
    code, out = run("dbquery", "1", "20", "20", "20")
    assert code == 0 and "c000=9.0614" in out


def test_expand(tmp_path):
    path = tmp_path / "e.csv"
    code, _ = run("expand", "--i", "1", "--j", "1", "--k", "1", "--m", "1", "--n", "2",
                  "--N", "64", "--out", str(path))
    assert code == 0
    assert len(path.read_text(encoding="utf-8").splitlines()) == 65


def test_missing_db_file(tmp_path):
    assert run("dbquery", "1", "1", "1", "1", "--db", str(tmp_path / "nope.csv"))[0] == 1
