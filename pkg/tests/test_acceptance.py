"""Acceptance battery: one line per criterion, run through the installed CLI."""

import json
import subprocess
import sys

import pytest

SEED = "42"
NAMES = {
    1: "interval-domain laws on random rational intervals",
    2: "interval point checks",
    3: "finite-poset collapse of way-below to the order",
    4: "subalgebra lattices and their domain properties",
    5: "matrix-context fragments, functor laws, directed sups",
    6: "daseinisation against the brute-force spectral-order oracle",
    7: "sections closed under directed sups, endpoint decomposition",
    8: "non-continuity witness for the even/odd context",
    9: "byte-identical reports for a fixed seed",
}


@pytest.fixture(scope="module")
def runs():
    cmd = [sys.executable, "-m", "unsharp", "suite", "all", "--seed", SEED]
    procs = [subprocess.Popen(cmd, stdout=subprocess.PIPE) for _ in range(2)]
    outs = [p.communicate(timeout=300)[0] for p in procs]
    return [(p.returncode, out) for p, out in zip(procs, outs)]


def _report(line_ok: bool, number: int, detail: str, capsys) -> None:
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if line_ok else 'FAIL'}  {NAMES[number]}  ({detail})")


@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(number, runs, capsys):
    (code, out), _ = runs
    report = json.loads(out)
    assert report["seed"] == int(SEED)
    entry = next(c for c in report["criteria"] if c["criterion"] == number)
    _report(entry["passed"], number, f"{entry['checks']} checks, {entry['failed']} failed", capsys)
    assert entry["passed"], entry["failures"]
    assert entry["checks"] > 0


def test_criterion_9_determinism(runs, capsys):
    (code1, out1), (code2, out2) = runs
    same = code1 == code2 == 0 and out1 == out2
    _report(same, 9, f"{len(out1)} bytes per report", capsys)
    assert code1 == 0
    assert out1 == out2
