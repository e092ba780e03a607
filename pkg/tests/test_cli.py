import csv
import io
import json
import subprocess
import sys

import pytest

from unitorder import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    return data


def test_mu(capsys):
    d = run_json(capsys, "mu", "1", "2")
    assert d["command"] == "mu"
    assert d["mu"] == {"num": "7", "den": "3"}


def test_group_order(capsys):
    d = run_json(capsys, "group-order", "2", "2")
    assert d["formula"] == d["brute_force"] == 18 and d["match"] is True
    d = run_json(capsys, "group-order", "5", "3")
    assert d["brute_force"] is None and d["formula"] > 0


def test_census(capsys):
    d = run_json(capsys, "census", "2", "2")
    assert d["order"] == 18
    assert sum(r["count"] for r in d["charpoly_counts"]) == 18
    assert sum(d["order_histogram"].values()) == 18
    assert d["mu"] == {"num": "67", "den": "18"}


def test_sigma_and_a0(capsys):
    assert run_json(capsys, "sigma2", "3", "2")["sigma2"] == {"num": "57", "den": "2"}
    assert run_json(capsys, "sigma1", "4", "2")["sigma1"] == {"num": "3", "den": "1"}
    d = run_json(capsys, "a0", "1", "2", "--direct")
    assert d["a0"] == {"num": "7", "den": "15"}
    assert abs(d["a0_approx"] - 7 / 15) < 1e-14


def test_a0_beyond_exact_guard(capsys):
    d = run_json(capsys, "a0", "13", "2")
    assert d["a0"] is None and 0 < d["a0_approx"] < 0.5


def test_bound_report(capsys):
    d = run_json(capsys, "bound-report", "4", "2", "2")
    assert d["holds"] is True
    assert d["sigma1"] == {"num": "3", "den": "1"}
    assert d["log_sigma1"] < d["log_rhs"]


def test_tail_and_expect(capsys):
    d = run_json(capsys, "tail-m", "4", "2", "3")
    assert d["probability"] == {"num": "64", "den": "405"} and d["holds"]
    from fractions import Fraction
    table = run_json(capsys, "omega-table", "3", "2")["entries"]
    for stat in ("X", "M"):
        d = run_json(capsys, "expect", stat, "3", "2")
        want = sum(Fraction(int(e["weight"]["num"]), int(e["weight"]["den"])) * e[stat] for e in table)
        assert Fraction(int(d["expectation"]["num"]), int(d["expectation"]["den"])) == want


def test_omega_pi_sub_lemma(capsys):
    d = run_json(capsys, "omega-table", "2", "2")
    assert d["size"] == 6 and d["total"] == {"num": "1", "den": "1"}
    d = run_json(capsys, "pi-sweep", "4", "2")
    assert d["failures"] == 0 and d["count"] == len(d["splits"])
    d = run_json(capsys, "sub-lemma", "4", "2")
    assert d["applicable"] == len(d["ratios"])


def test_csv_table_and_pairs(capsys):
    code, out, _ = run(capsys, "omega-table", "2", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6 and "weight" in rows[0]
    assert all("/" in r["weight"] for r in rows)
    code, out, _ = run(capsys, "mu", "2", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["key", "value"]
    assert ["mu", "599/96"] in rows


def test_exit_code_guard(capsys):
    code, out, err = run(capsys, "mu", "2", "4")
    assert code == 2 and out == "" and "guard" in err


def test_exit_code_bad_input(capsys):
    code, _, err = run(capsys, "a0", "3", "2", "--direct")
    assert code == 2 and "guard" in err
    code, _, err = run(capsys, "a0", "0", "2")
    assert code == 2 and "invalid" in err


def test_argparse_rejects_unknown(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["expect", "Y", "1", "2"])
    assert exc.value.code == 2


def test_exit_code_failed_check(capsys, monkeypatch):
    from unitorder import verify

    def bad():
        return verify.CheckResult(4, "forced", False, "forced failure")
    monkeypatch.setitem(verify.CHECKS, 4, bad)
    code, out, err = run(capsys, "verify", "4")
    assert code == 1
    assert json.loads(out)["passed"] is False
    assert "FAIL" in err


def test_verify_single(capsys):
    code, out, err = run(capsys, "verify", "1")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and d["criteria"][0]["status"] == "pass"
    assert "criterion  1 [PASS]" in err.splitlines()[-1]


def test_deterministic_output(capsys):
    a = run(capsys, "sub-lemma", "5", "3")
    b = run(capsys, "sub-lemma", "5", "3")
    assert a == b


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "unitorder", "sigma2", "3", "2"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["sigma2"] == {"num": "57", "den": "2"}
