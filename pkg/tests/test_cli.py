import json
import subprocess
import sys

import pytest

from qbip import treecore
from qbip.cli import main


@pytest.fixture
def p4_file(tmp_path, p4_attach):
    path = tmp_path / "p4.json"
    path.write_text(json.dumps(p4_attach.to_json()))
    return str(path)


@pytest.fixture
def star_file(tmp_path):
    path = tmp_path / "star.json"
    path.write_text(json.dumps({"edges": [[0, 1], [0, 2], [0, 3]]}))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- show ---------------------------------------------------------------------


def test_show_qL_json_encoding(capsys, p4_file):
    code, out, _ = run_cli(capsys, "show", "--tree", p4_file, "--matrix", "qL")
    assert code == 0
    data = json.loads(out)
    assert data["entries"] == [
        [["1"], ["-1"]],
        [["0", "0", "-1"], ["1"]],
    ]
    assert (data["row_kind"], data["col_kind"]) == ("R", "L")


def test_show_E_at_one_csv(capsys, p4_file):
    code, out, _ = run_cli(
        capsys, "show", "--tree", p4_file, "--matrix", "E",
        "--at", "1", "--format", "csv",
    )
    assert code == 0
    assert out.splitlines() == ["1,1", "1,1"]


def test_show_csv_needs_at(capsys, p4_file):
    code, _, err = run_cli(
        capsys, "show", "--tree", p4_file, "--matrix", "qB", "--format", "csv"
    )
    assert code == 2 and "csv" in err


def test_show_on_star_fails(capsys, star_file):
    code, _, err = run_cli(capsys, "show", "--tree", star_file, "--matrix", "qB")
    assert code == 2
    assert "unmatched" in err or "matching" in err


def test_show_full_matrices_accept_unmatched(capsys, star_file):
    code, out, _ = run_cli(capsys, "show", "--tree", star_file, "--matrix", "qD")
    assert code == 0
    assert json.loads(out)["rows"] == 4


def test_show_tau_and_mu(capsys, p4_file):
    code, out, _ = run_cli(capsys, "show", "--tree", p4_file, "--matrix", "tau")
    assert code == 0
    data = json.loads(out)
    assert data["tau_r"]["entries"] == [[], ["1"]]
    code, out, _ = run_cli(capsys, "show", "--tree", p4_file, "--matrix", "mu:0")
    assert code == 0
    assert json.loads(out)["kind"] == "R"


def test_show_pretty(capsys, p4_file):
    code, out, _ = run_cli(
        capsys, "show", "--tree", p4_file, "--matrix", "qB", "--format", "pretty"
    )
    assert code == 0
    assert "1 + q + q^2" in out


# -- invert -------------------------------------------------------------------


def test_invert_E_p2(capsys, tmp_path, p2):
    path = tmp_path / "p2.json"
    path.write_text(json.dumps(p2.to_json()))
    code, out, _ = run_cli(capsys, "invert", "--tree", str(path), "--matrix", "E")
    assert code == 0
    assert json.loads(out)["entries"] == [[{"num": ["1"], "den": ["0", "1"]}]]


def test_invert_excluded_points(capsys, p4_file):
    code, _, err = run_cli(
        capsys, "invert", "--tree", p4_file, "--matrix", "qB", "--at", "-1"
    )
    assert code == 2 and "excluded" in err
    code, _, err = run_cli(
        capsys, "invert", "--tree", p4_file, "--matrix", "E", "--at", "1"
    )
    assert code == 2 and "excluded" in err


def test_invert_bdq_root_excluded(capsys, tmp_path, p6_attach):
    path = tmp_path / "p6.json"
    path.write_text(json.dumps(p6_attach.to_json()))
    code, _, err = run_cli(
        capsys, "invert", "--tree", str(path), "--matrix", "qB", "--at", "-2"
    )
    assert code == 2 and "index" in err


def test_invert_with_oracle(capsys, p4_file):
    code, out, _ = run_cli(
        capsys, "invert", "--tree", p4_file, "--matrix", "qB", "--oracle"
    )
    assert code == 0
    assert json.loads(out)["equal"] is True


def test_invert_evaluated(capsys, p4_file):
    code, out, _ = run_cli(
        capsys, "invert", "--tree", p4_file, "--matrix", "qB",
        "--at", "2", "--format", "csv",
    )
    assert code == 0
    rows = out.splitlines()
    assert rows[0].split(",")[0] == "-1/6"


# -- verify -------------------------------------------------------------------


def test_verify_single_tree(capsys, p4_file):
    code, out, _ = run_cli(capsys, "verify", "--tree", p4_file)
    assert code == 0
    assert out.startswith("TREES 1 CHECKS 13 FAIL 0")


def test_verify_star_is_usage_error(capsys, star_file):
    code, _, err = run_cli(capsys, "verify", "--tree", star_file)
    assert code == 2


def test_verify_enumerated(capsys):
    code, out, _ = run_cli(capsys, "verify", "--enumerate-upto", "8")
    assert code == 0
    assert out.startswith("TREES 9 ")


def test_verify_enumerated_writes_report(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(
        capsys, "verify", "--enumerate-upto", "6", "--out", str(out_path)
    )
    assert code == 0
    reports = json.loads(out_path.read_text())
    assert len(reports) == 4
    assert all(c["pass"] for r in reports for c in r["checks"])


def test_verify_random(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--random", "8,2", "--seed", "5", "--at", "2", "--at", "5/3"
    )
    assert code == 0
    assert out.startswith("TREES 2 CHECKS 20 FAIL 0")


def test_verify_random_rejects_excluded(capsys):
    code, _, err = run_cli(capsys, "verify", "--random", "4,1", "--at", "1")
    assert code == 2


def test_verify_needs_exactly_one_source(capsys, p4_file):
    code, _, err = run_cli(capsys, "verify")
    assert code == 2
    code, _, err = run_cli(
        capsys, "verify", "--tree", p4_file, "--enumerate-upto", "4"
    )
    assert code == 2


def test_verify_bound(capsys):
    code, _, err = run_cli(capsys, "verify", "--enumerate-upto", "18")
    assert code == 2 and "capped" in err


# -- enum / gen ------------------------------------------------------------------


def test_enum_p1(capsys):
    code, out, _ = run_cli(capsys, "enum", "--p", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["edges"] == [[0, 1]]


def test_enum_p2(capsys):
    code, out, _ = run_cli(capsys, "enum", "--p", "2")
    assert code == 0
    assert len(out.strip().splitlines()) == 1


def test_enum_counts(capsys):
    code, out, _ = run_cli(capsys, "enum", "--p", "4")
    assert code == 0
    assert len(out.strip().splitlines()) == 5


def test_enum_bound_violation(capsys):
    assert run_cli(capsys, "enum", "--p", "0")[0] == 2
    assert run_cli(capsys, "enum", "--p", "9")[0] == 2


def test_gen_deterministic_bytes():
    cmd = [sys.executable, "-m", "qbip.cli", "gen", "--p", "5", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout
    tree = json.loads(a.stdout)
    mt = treecore.MatchedTree.from_json(tree)
    assert mt.p == 5


def test_gen_needs_valid_p(capsys):
    assert run_cli(capsys, "gen", "--p", "0")[0] == 2


# -- conjecture ----------------------------------------------------------------------


def test_conjecture_upto_4(capsys):
    code, out, _ = run_cli(capsys, "conjecture", "--upto", "4")
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert len(rows) == 2
    assert all(r["diagonalizable"] and r["all_eigen_nonneg"] for r in rows)


def test_conjecture_single_pair(capsys):
    code, out, _ = run_cli(capsys, "conjecture", "--upto", "2")
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert len(rows) == 1
    assert rows[0]["real_root_count"] == 1


def test_conjecture_pretty(capsys):
    code, out, _ = run_cli(capsys, "conjecture", "--upto", "4", "--format", "pretty")
    assert code == 0
    assert "diag=True" in out


def test_conjecture_bound(capsys):
    assert run_cli(capsys, "conjecture", "--upto", "99")[0] == 2
    assert run_cli(capsys, "conjecture")[0] == 2


# -- general -----------------------------------------------------------------------


def test_bad_rational(capsys, p4_file):
    code, _, err = run_cli(
        capsys, "show", "--tree", p4_file, "--matrix", "qB", "--at", "x/y"
    )
    assert code == 2


def test_missing_file(capsys):
    code, _, err = run_cli(capsys, "show", "--tree", "/no/such.json", "--matrix", "qB")
    assert code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2
