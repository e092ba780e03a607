"""Acceptance criteria 1-12, one test per criterion.

The whole suite runs once in-process through the CLI (`verify all --seed 0`);
each test prints its criterion line and asserts on it.  Criterion 12 reruns
the same command in a fresh interpreter and compares the reports byte for byte.
"""

import contextlib
import io
import json
import subprocess
import sys

import pytest

from unitorder import cli, verify

ARGS = ["verify", "all", "--seed", "0"]


@pytest.fixture(scope="module")
def report():
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(ARGS)
    lines = {}
    for line in err.getvalue().splitlines():
        if line.startswith("criterion"):
            lines[int(line.split()[1])] = line
    return code, out.getvalue(), lines


def _check(report, cid):
    code, text, lines = report
    row = next(r for r in json.loads(text)["criteria"] if r["id"] == cid)
    print(lines[cid])
    return row


@pytest.mark.parametrize("cid", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
def test_criterion(report, cid):
    row = _check(report, cid)
    assert row["status"] == "pass", row["detail"]


def test_criterion_11_soft(report):
    # soft: a miss is reported as "warn" and annotated, it does not fail verify
    row = _check(report, 11)
    assert row["soft"] is True
    assert row["status"] == "pass", f"soft trend check needs annotation: {row['detail']}"


def test_verify_exit_status(report):
    code, text, _ = report
    assert code == 0 and json.loads(text)["passed"] is True
    assert [r["id"] for r in json.loads(text)["criteria"]] == list(verify.CHECKS)


def test_criterion_12_determinism(report):
    _, text, _ = report
    r = subprocess.run([sys.executable, "-m", "unitorder", *ARGS], capture_output=True, check=False)
    same = r.stdout == text.encode()
    print(f"criterion 12 [{'PASS' if same and r.returncode == 0 else 'FAIL'}] determinism: "
          f"two runs of verify all --seed 0, {len(r.stdout)} bytes, identical={same}")
    assert r.returncode == 0
    assert same
