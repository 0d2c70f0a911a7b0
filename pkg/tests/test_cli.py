"""Tests for the command-line interface."""

import csv
import json

from qsl2.cli import cli_main


def test_usage_errors_exit_2(capsys):
    assert cli_main([]) == 2
    assert cli_main(["suite", "no-such-suite"]) == 2
    assert cli_main(["eval", "--family", "askey-wilson"]) == 2
    capsys.readouterr()


def test_help_exits_0(capsys):
    assert cli_main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "suite" in out and "eval" in out


def test_bad_q_value(capsys):
    rc = cli_main(["eval", "--family", "askey-wilson", "--n", "1",
                   "--params", "0.5,0.3,-0.2,0.1", "--q", "1.5",
                   "--x", "0.2"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_eval_prints_decimal(capsys):
    rc = cli_main(["eval", "--family", "askey-wilson", "--n", "3",
                   "--params", "0.5,0.3,-0.2,0.1", "--q", "0.5",
                   "--x", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    float(out)  # a plain decimal number


def test_suite_exact_json_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = cli_main(["suite", "duality", "--json", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["suite"] == "duality"
    assert report["env"]["q"] == "exact"
    assert report["checks"] and all(c["pass"] for c in report["checks"])
    assert "checks passed" in capsys.readouterr().out


def test_suite_failure_exits_1(tmp_path, capsys):
    rc = cli_main(["suite", "schur", "--tolerance", "0"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "FAILED" in err and "schur/" in err


def test_suite_reports_deterministic(tmp_path):
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for p in (p1, p2):
        assert cli_main(["suite", "schur", "--seed", "3",
                         "--json", str(p)]) == 0

    def strip(path):
        d = json.loads(path.read_text())
        for c in d["checks"]:
            c.pop("ms")
        return d
    assert strip(p1) == strip(p2)


def test_suite_csv(tmp_path):
    out = tmp_path / "report.csv"
    assert cli_main(["suite", "duality", "--csv", str(out)]) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["id", "params", "residual", "tol", "pass", "ms"]
    assert len(rows) > 1


def test_table_csv(tmp_path):
    out = tmp_path / "table.csv"
    rc = cli_main(["table", "--family", "al-salam-chihara",
                   "--params", "0.4,0.3", "--q", "1/2", "--n-max", "2",
                   "--points", "5", "--csv", str(out)])
    assert rc == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["family", "n", "x", "value"]
    assert len(rows) == 1 + 3 * 5


def test_ortho_table(capsys):
    rc = cli_main(["ortho", "--params", "0.4,0.3,-0.5,0.2", "--q", "0.5",
                   "--n-max", "2", "--precision-bits", "96"])
    assert rc == 0
    out = capsys.readouterr().out
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0] == ["n", "m", "value", "status"]
    assert all(r[3] != "FAIL" for r in rows[1:])


def test_haar_comparison(capsys):
    rc = cli_main(["haar", "--q", "1/2", "--sigma", "inf", "--tau", "1/10",
                   "--m-max", "2", "--truncation", "80"])
    assert rc == 0
    out = capsys.readouterr().out
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0][0] == "m"
    assert all(r[4] == "ok" for r in rows[1:])
