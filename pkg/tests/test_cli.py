import json

import numpy as np
import pytest

from unsharp import cli
from unsharp import contexts as cx


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def diamond_file(tmp_path):
    return write(tmp_path, "diamond.json", {
        "elements": ["bot", "a", "b", "top"],
        "leq": [["bot", "a"], ["bot", "b"], ["a", "top"], ["b", "top"]],
    })


@pytest.fixture
def m3_files(tmp_path):
    a = write(tmp_path, "a.json", cx.matrix_to_json(np.diag([1.0, 2.0, 3.0])))
    frag = cx.fragment_build([cx.Context.diagonal([[0], [1, 2]])])
    f = write(tmp_path, "frag.json", frag.to_json())
    return a, f, frag


def test_poset_check_diamond(capsys, diamond_file):
    code, out = run(capsys, "poset", "check", diamond_file, "--expect", "is_complete_lattice",
                    "--expect", "is_algebraic")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["report"]["is_complete_lattice"] and rep["report"]["is_algebraic"]
    assert rep["seed"] == 0 and "tol" in rep


def test_poset_check_failed_expectation(capsys, tmp_path):
    f = write(tmp_path, "anti.json", {"elements": ["x", "y"], "leq": []})
    code, out = run(capsys, "poset", "check", f, "--expect", "is_complete_lattice")
    assert code == 1 and json.loads(out)["failed"] == ["is_complete_lattice"]


def test_poset_dot_is_hasse(capsys, tmp_path):
    f = write(tmp_path, "c3.json", {"elements": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"], ["a", "c"]]})
    code, out = run(capsys, "poset", "check", f, "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    assert out.count("->") == 2


def test_poset_cap(capsys, tmp_path):
    f = write(tmp_path, "big.json", {"elements": [str(i) for i in range(20)], "leq": []})
    code, out = run(capsys, "poset", "check", f)
    assert code == 3 and json.loads(out)["status"] == "cap_exceeded"


def test_malformed_inputs(capsys, tmp_path, m3_files):
    _, frag, _ = m3_files
    bad = write(tmp_path, "bad.json", {"dim": 2, "entries": [[1, 0]]})
    code, out = run(capsys, "dasein", "value", "--matrix", bad, "--contexts", frag)
    rep = json.loads(out)
    assert code == 2 and rep["path"].startswith("$.entries")
    code, _ = run(capsys, "poset", "check", str(tmp_path / "missing.json"))
    assert code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _ = run(capsys, "poset", "check", str(broken))
    assert code == 2


def test_ir_eval(capsys):
    code, out = run(capsys, "ir", "eval", "way_below", "0,3", "1,2")
    assert code == 0 and json.loads(out)["result"] is True
    code, out = run(capsys, "ir", "eval", "sup", "0,3", "1,3", "[1,5/2]")
    assert json.loads(out)["result"] == {"lo": "1", "hi": "5/2"}
    code, _ = run(capsys, "ir", "eval", "sup", "0,1", "2,3")
    assert code == 1


def test_subalg(capsys):
    code, out = run(capsys, "subalg", "enumerate", "builtin:Z4")
    assert code == 0 and json.loads(out)["count"] == 3
    code, out = run(capsys, "subalg", "enumerate", "builtin:S3", "--equations", "builtin:commutative")
    assert code == 0 and json.loads(out)["count"] == 5
    code, out = run(capsys, "subalg", "check", "builtin:D4")
    assert code == 0 and json.loads(out)["oracle_agrees"]


def test_contexts_commands(capsys, tmp_path):
    z = write(tmp_path, "z.json", {"diagonal": [[0], [1]]})
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    xb = write(tmp_path, "x.json", cx.context_to_json(cx.Context.from_basis(h, [[0], [1]])))
    code, out = run(capsys, "contexts", "join", z, xb)
    assert code == 0 and json.loads(out)["result"] == "Incompatible"
    code, out = run(capsys, "contexts", "meet", z, xb)
    assert len(json.loads(out)["result"]["cells"]) == 1
    frag = write(tmp_path, "frag.json", cx.fragment_build([cx.context_from_json({"diagonal": [[0], [1]]})]).to_json())
    code, out = run(capsys, "contexts", "build", frag)
    assert code == 0 and json.loads(out)["report"]["is_algebraic"]
    hom = write(tmp_path, "hom.json", cx.hom_to_json(cx.embedding_hom((2,), (2,))))
    code, out = run(capsys, "contexts", "functor", "--hom", hom, "--fragment", frag)
    rep = json.loads(out)
    assert code == 0 and rep["monotone"] and rep["identity_law"]


def test_dasein_commands(capsys, m3_files):
    a, f, frag = m3_files
    top = frag.label_of(cx.Context.diagonal([[0], [1, 2]]))
    idx = next(i for i, q in enumerate(frag[top].cells) if q[1, 1].real > 0.5)
    code, out = run(capsys, "dasein", "value", "--matrix", a, "--contexts", f, "--character", f"{top}:{idx}")
    rows = json.loads(out)["intervals"]
    assert code == 0
    assert {(r["context"], r["lo"], r["hi"]) for r in rows} == {(top, "2", "3"), ("V0", "1", "3")}
    code, out = run(capsys, "dasein", "value", "--matrix", a, "--contexts", f, "--format", "text")
    assert code == 0 and "[1, 1]" in out and "[2, 3]" in out
    code, out = run(capsys, "dasein", "section", "--matrix", a, "--contexts", f, "--character", f"{top}:{idx}")
    rep = json.loads(out)
    assert code == 0 and rep["intervals"][top] == {"lo": "2", "hi": "3"} and rep["scott_continuous"]
    code, _ = run(capsys, "dasein", "value", "--matrix", a, "--contexts", f, "--cap-dim", "2")
    assert code == 3


def test_witness(capsys, tmp_path):
    code, out = run(capsys, "witness", "sec6", "--bound", "128")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["parts"]) == 4
    mutant = write(tmp_path, "m.json", {"kind": "finite", "cells": [{"aps": [], "fin": [1]}, {"aps": [[2, 1]], "fin": []}]})
    code, out = run(capsys, "witness", "sec6", "--bound", "8", "--ve", mutant)
    assert code == 1 and json.loads(out)["first_failing_part"] == "not_below_members"
    code, out = run(capsys, "witness", "sec6", "--bound", "4", "--format", "text")
    assert out.strip().endswith("witness: PASS")


def test_determinism_and_out_flag(capsys, m3_files, tmp_path):
    a, f, _ = m3_files
    argv = ["dasein", "value", "--matrix", a, "--contexts", f, "--seed", "7"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second and json.loads(first)["seed"] == 7
    target = tmp_path / "report.json"
    code, out = run(capsys, *argv, "--out", str(target))
    assert code == 0 and out == "" and target.read_text() == first


def test_bad_flags_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["ir", "eval", "leq", "0,1", "0,1", "--tol", "-1"])
    with pytest.raises(SystemExit):
        cli.main(["poset", "check", "x.json", "--cap-poset", "0"])
