import json
import subprocess
import sys

import pytest

from weyl_equidist import cli, verify
from weyl_equidist.cli import main, summary_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_datum_text(capsys):
    code, out, _ = run(capsys, "datum", "--type", "A2")
    assert code == 0
    assert "positive_roots: [[0, 1], [1, 0], [1, 1]]" in out
    assert "two_rho: [2, 2]" in out and "weyl_order: 6" in out


def test_datum_json(capsys):
    code, out, _ = run(capsys, "datum", "--type", "A1", "--lattice", "weight", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["pi1_invariant_factors"] == [2] and report["weyl_order"] == 2
    _, out, _ = run(capsys, "datum", "--type", "A1", "--format", "json")
    assert json.loads(out)["pi1_invariant_factors"] == []


@pytest.mark.parametrize(
    "argv, gamma, h",
    [
        (["--scenario", "builtin:a1_root_z2"], 2, [2]),
        (["--scenario", "builtin:a1_weight_z2"], 2, []),
        (["--type", "A2", "--galois", "[[[0,-1],[1,-1]]]"], 3, [3]),
    ],
)
def test_action(capsys, argv, gamma, h):
    code, out, _ = run(capsys, "action", *argv, "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["gamma_order"] == gamma and report["H_invariant_factors"] == h
    assert report["elliptic"] is True


def test_action_not_elliptic(capsys):
    code, _, err = run(capsys, "action", "--type", "A1", "--galois", "[[[1]]]")
    assert code == 4 and "not elliptic" in err
    code, out, _ = run(capsys, "action", "--type", "A1", "--galois", "[[[1]]]", "--no-h")
    assert code == 0 and "elliptic: False" in out


def test_galois_from_file(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text("[[[-1]]]")
    code, out, _ = run(capsys, "action", "--type", "A1", "--galois", f"@{p}")
    assert code == 0 and "H_invariant_factors: [2]" in out


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["action", "--type", "A1", "--galois", "[[[2]]]"], 3),
        (["action", "--type", "A2", "--lattice", "weight", "--galois", "[[[0,-1],[1,-1]]]"], 3),
        (["datum", "--type", "Q7"], 3),
        (["action", "--type", "A1", "--galois", "[[[1]]"], 2),
        (["action", "--type", "A1", "--galois", "[[[true]]]"], 2),
        (["datum"], 2),
        (["datum", "--scenario", "builtin:nope"], 2),
        (["equidist", "--type", "A1", "--galois", "[[[1]]]"], 4),
        (["char", "--type", "A1", "--m", "-1"], 3),
        (["datum", "--scenario", "/nonexistent/s.json"], 5),
    ],
)
def test_exit_codes(capsys, argv, expected):
    assert main(argv) == expected
    capsys.readouterr()


def test_argparse_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["equidist", "--format", "xml"])
    assert exc.value.code == 2


def test_char_dump(capsys, tmp_path):
    out = tmp_path / "c.json"
    assert main(["char", "--type", "A1", "--m", "1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [t["exp"] for t in data["terms"]] == [[-2], [-1], [0], [1], [2]]
    assert all(t["coeff"] == "1" for t in data["terms"])


def test_equidist_csv(tmp_path):
    out = tmp_path / "a1.csv"
    assert main(["equidist", "--scenario", "builtin:a1_root_z2", "--m-min", "1", "--m-max", "3", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 1 + 6
    assert rows[1].split(",")[:4] == ["1", "0", "3", "5"]
    summary = summary_path(out).read_text().splitlines()
    assert summary[0] == "m,dim,max_pairwise_dev_float,chi_1" and len(summary) == 4


def test_equidist_a2_m1(tmp_path):
    out = tmp_path / "a2.csv"
    assert main(["equidist", "--scenario", "builtin:a2_root_z3", "--m-max", "1", "--out", str(out)]) == 0
    rows = [r.split(",") for r in out.read_text().splitlines()[1:]]
    assert len(rows) == 3 and {r[3] for r in rows} == {"125"}


def test_equidist_json(tmp_path):
    out = tmp_path / "a1.json"
    assert main(["equidist", "--scenario", "builtin:a1_root_z2", "--m-max", "2", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["H_order"] == 2
    assert (data["rows"][0]["S_num"], data["rows"][0]["S_den"]) == ("3", "5")
    summary = json.loads((tmp_path / "a1.summary.json").read_text())
    assert summary["summary"][0]["max_pairwise_dev_num"] == "1"


def test_equidist_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["equidist", "--scenario", "builtin:a2_root_z3", "--m-max", "6", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert summary_path(a).read_bytes() == summary_path(b).read_bytes()


def test_no_partial_files_on_failure(tmp_path, monkeypatch):
    out = tmp_path / "x.csv"

    def boom(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "replace", boom)
    assert main(["equidist", "--scenario", "builtin:a1_root_z2", "--m-max", "2", "--out", str(out)]) == 5
    assert list(tmp_path.iterdir()) == []


def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out
    for name in ("a1_root_z2", "a2_root_z3", "b2_root_inv", "g2_root_inv"):
        assert f"PASS {name} dimension_law" in out


def test_verify_reports_failures(capsys, monkeypatch):
    monkeypatch.setattr(verify, "freudenthal", lambda rd, mu: None)
    code, out, _ = run(capsys, "verify", "--scenario", "builtin:a1_root_z2", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["passed"] is False
    assert [f["name"] for f in report["failures"]] == ["product_vs_freudenthal"]


def test_verify_tampered_and_trivial(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "cartan_type": "A1", "galois_generators": [[[3]]]}))
    assert main(["verify", "--scenario", str(bad)]) == 3
    triv = tmp_path / "triv.json"
    triv.write_text(json.dumps({"name": "triv", "cartan_type": "A2", "galois_generators": []}))
    assert main(["verify", "--scenario", str(triv)]) == 4
    capsys.readouterr()


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "weyl_equidist", "datum", "--type", "G2", "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(res.stdout)["weyl_order"] == 12
