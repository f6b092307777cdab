import csv
import json
import subprocess
import sys

import pytest

from cremona_lab import cli

SCHEMA_KEYS = {"schema", "tool_version", "command", "checks", "data", "timing"}


def run(args, tmp_path=None):
    """Run the CLI in-process and return (exit code, parsed report or None)."""
    report = None
    if tmp_path is not None:
        path = tmp_path / "report.json"
        args = [*args, "--json", str(path)]
    code = cli.main(args)
    if tmp_path is not None and path.exists():
        report = json.loads(path.read_text())
    return code, report


def without_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cremona_lab", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "cremona-lab" in out.stdout


def test_analyze_sigma(tmp_path, capsys):
    code, report = run(["analyze", "sigma"], tmp_path)
    assert code == 0
    assert set(report) == SCHEMA_KEYS and report["schema"] == cli.SCHEMA
    assert report["data"]["degree_sequence"][:2] == [2, 1]
    assert report["data"]["growth"]["tag"] == "Bounded"
    assert report["data"]["stability"]["violated_at"] == 2


def test_analyze_dg_phi(tmp_path):
    code, report = run(["analyze", "dg_phi", "--n", "3"], tmp_path)
    assert code == 0
    assert set(report["data"]["degree_sequence"]) == {3}


def test_analyze_bk_fab_reports_vn(tmp_path, capsys):
    code, report = run(["analyze", "bk_fab", "--a", "0", "--b", "0", "--iters", "6"], tmp_path)
    assert code == 0
    assert "V_0 hit" in capsys.readouterr().out


@pytest.mark.parametrize("args", [
    ["analyze", "sigma", "--a", "1"],
    ["analyze", "bk_fab", "--a", "1/", "--b", "0"],
    ["analyze", "no_such_family"],
    ["analyze", "bk_fab", "--a", "1"],
    ["weyl", "2"],
    ["salem", "t^2 +"],
    ["orbit", "--alpha", "1", "--beta", "1", "--point", "0", "-N", "3", "--out", "-"],
    [],
])
def test_usage_errors_exit_two(args):
    with pytest.raises(SystemExit) as info:
        code = cli.main(args)
        raise SystemExit(code)
    assert info.value.code == 2


def test_verify_catalog_filter(tmp_path):
    code, report = run(["verify-catalog", "--filter", "weyl.*"], tmp_path)
    assert code == 0
    ids = [c["id"] for c in report["checks"]]
    assert ids == sorted(ids) and len(ids) == len(set(ids))
    assert ids and all(i.startswith("weyl.") for i in ids)
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verify_catalog_empty_filter(tmp_path):
    code, report = run(["verify-catalog", "--filter", "nothing.*"], tmp_path)
    assert code == 0
    assert report["checks"] == [] and report["data"]["empty_selection"] is True


def test_verify_catalog_discrepancies_do_not_fail(tmp_path):
    code, report = run(["verify-catalog", "--filter", "picard.catalog.*"], tmp_path)
    assert code == 0
    statuses = {c["id"]: c["status"] for c in report["checks"]}
    assert statuses["picard.catalog.M_rho"] == statuses["picard.catalog.M_tau"] == "recorded-discrepancy"


def test_verify_catalog_failure_exits_one(tmp_path):
    code, report = run(["verify-catalog", "--filter", "salem.chi_n_sequence"], tmp_path)
    assert code == 1
    assert report["checks"][0]["status"] == "fail"


def test_reports_are_reproducible(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    first.mkdir()
    second.mkdir()
    _, a = run(["verify-catalog", "--filter", "weyl.*"], first)
    _, b = run(["verify-catalog", "--filter", "weyl.*"], second)
    assert json.dumps(without_timing(a), sort_keys=True) == json.dumps(without_timing(b), sort_keys=True)


def test_orbit_csv(tmp_path):
    out = tmp_path / "orbit.csv"
    code = cli.main(["orbit", "--alpha", "exp(2*i*sqrt(3))", "--beta", "exp(2*i*sqrt(2))",
                     "--point", "10^-4*i,10^-4*i", "-N", "500", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert len(rows) == 501 and all(len(r) == 7 for r in rows)
    moduli = [abs(complex(float(r[5]), float(r[6]))) for r in rows[1:]]
    assert max(abs(m - 1e-4) for m in moduli) < 1e-15


def test_orbit_single_row(tmp_path):
    out = tmp_path / "orbit.csv"
    assert cli.main(["orbit", "--alpha", "1/2", "--beta", "i", "--point", "0,0", "-N", "1", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[1] == ["1", "0.0", "0.0", "0.0", "0.0", "0.0", "0.0"]


def test_salem_command(tmp_path, capsys):
    code, report = run(["salem", "t^10 + t^9 - t^7 - t^6 - t^5 - t^4 - t^3 + t + 1"], tmp_path)
    assert code == 0 and report["data"]["tag"] == "Salem"
    assert capsys.readouterr().out.startswith("Salem 1.17628081")


def test_salem_non_monic_is_usage_error():
    assert cli.main(["salem", "2*t^2 + 1"]) == 2


def test_weyl_command(tmp_path):
    code, report = run(["weyl", "10"], tmp_path)
    assert code == 0
    assert all(c["status"] == "pass" for c in report["checks"])


def test_catalog_command(tmp_path, capsys):
    assert cli.main(["catalog", "M_sigma"]) == 0
    assert "M_sigma" in capsys.readouterr().out
    assert cli.main(["catalog", "no_such"]) == 2


@pytest.mark.parametrize("text,value", [
    ("1/2 + 3*i", complex(0.5, 3)),
    ("exp(i*pi)", -1),
    ("sqrt(4) - (1 + i)^2", complex(2, -2)),
    ("10^-2", 0.01),
])
def test_parse_complex(text, value):
    assert abs(complex(cli.parse_complex(text)) - value) < 1e-12


@pytest.mark.parametrize("text", ["import os", "__import__('os')", "1 +", "foo(2)"])
def test_parse_complex_rejects(text):
    with pytest.raises(cli.UsageError):
        cli.parse_complex(text)
