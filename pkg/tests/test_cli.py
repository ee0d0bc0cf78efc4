import csv
import io
import json
import subprocess
import sys

import pytest

from multicat.cli import main
from multicat.textformat import parse_dfa


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- verify / sweep


def test_verify_kp1(capsys):
    code, out, _ = run(capsys, "verify", "--family", "kp1", "--n", "3,3,3")
    assert code == 0
    (row,) = _rows(out)
    assert row["tau_formula"] == row["tau_enum"] == row["minimal_observed"] == "106"
    assert row["status"] == "match"
    assert row["wall_ms"] == ""


def test_verify_lower_bound_family(capsys):
    code, out, _ = run(capsys, "verify", "--family", "binary-lb", "--n", "3,4,3")
    assert code == 0
    (row,) = _rows(out)
    assert row["status"] == "lower-bound-ok"
    assert int(row["minimal_observed"]) >= 10


def test_verify_fixed_example(capsys):
    code, out, _ = run(capsys, "verify", "--family", "example-k5-14")
    assert code == 0
    (row,) = _rows(out)
    assert (row["n"], row["minimal_observed"], row["status"]) == ("3,3,1,1,3", "14", "match")


def test_verify_json_and_timing(capsys):
    code, out, _ = run(
        capsys, "verify", "--family", "kp1", "--n", "3,3", "--format", "json", "--timing"
    )
    assert code == 0
    (case,) = json.loads(out)
    assert case["status"] == "match"
    assert case["wall_ms"] >= 0


def test_verify_mismatch_exit(capsys):
    code, out, _ = run(capsys, "verify", "--family", "kletter-2state", "--n", "2,2,2")
    assert code == 1
    assert _rows(out)[0]["status"] == "mismatch"


def test_verify_writes_both_reports(tmp_path, capsys):
    out = tmp_path / "rep"
    out.mkdir()
    code, _, _ = run(capsys, "verify", "--family", "kp1", "--n", "3,3", "--out", str(out))
    assert code == 0
    assert _rows((out / "report.csv").read_text())[0]["status"] == "match"
    assert json.loads((out / "report.json").read_text())[0]["minimal_observed"] == 20


def test_sweep_grid(capsys):
    code, out, _ = run(
        capsys, "sweep", "--grid", "families=kletter-2state,kp1-two;k=2,3;n=2,3"
    )
    rows = _rows(out)
    assert [r["family"] for r in rows].count("kp1-two") == 12
    assert all(r["status"] == "match" for r in rows if r["family"] == "kp1-two")
    # the two-state family only exists for k >= 3, and misses tau at k = 3
    (two,) = [r for r in rows if r["family"] == "kletter-2state"]
    assert (two["n"], two["status"]) == ("2,2,2", "mismatch")
    assert code == 1


def test_sweep_empty_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--grid", "families=")
    assert code == 0
    assert out.strip() == "family,n,tau_formula,tau_enum,minimal_observed,status,wall_ms"


def test_sweep_cap_case_is_skipped(capsys):
    code, out, _ = run(capsys, "sweep", "--grid", "families=kp1;k=2;n=3", "--cap", "5")
    assert code == 0
    assert _rows(out)[0]["status"] == "skipped-cap"


def test_sweep_is_byte_identical(capsys, tmp_path):
    grid = "families=kp1,kletter;k=2,3;n=2,3"
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", "--grid", grid, "--out", str(a))
    run(capsys, "sweep", "--grid", grid, "--out", str(b), "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()


def test_sweep_bad_grid(capsys):
    code, _, err = run(capsys, "sweep", "--grid", "families=kp1;x=1")
    assert code == 2
    assert "unknown grid keys" in err


# -- bound / witness / concat / minimize


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--n", "3,3,3", "--closed-k3", "--enumerate")
    doc = json.loads(out)
    assert code == 0
    assert doc["tau"] == doc["closed_k3"] == doc["enumerated"] == 106
    assert doc["sandwich"] == [48, 144]


def test_bound_one_state_and_lower(capsys):
    _, out, _ = run(capsys, "bound", "--n", "3,3,1,1,3")
    assert json.loads(out) == {"bound": 14}
    _, out, _ = run(capsys, "bound", "--n", "3,4,3", "--lower", "ternary")
    assert json.loads(out)["ternary_lower_bound"] == 24


def test_bound_domain_error(capsys):
    code, _, err = run(capsys, "bound", "--n", "3,3", "--closed-k3")
    assert code == 2
    assert err.startswith("error:")


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["export", "x.txt", "--svg"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "witness", "--family", "nope", "--n", "3")
    assert code == 2
    code, _, _ = run(capsys, "witness", "--family", "kp1", "--n", "2,3")
    assert code == 2


def _witness_dir(tmp_path, capsys, family, n):
    out = tmp_path / family
    code, _, _ = run(capsys, "witness", "--family", family, "--n", n, "--out", str(out))
    assert code == 0
    return out


def test_witness_and_concat(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "kp1", "3,3,3")
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["expected"] == 106
    files = [str(out / f) for f in manifest["files"]]
    labels = tmp_path / "labels.json"
    code, text, _ = run(capsys, "concat", *files, "--labels", str(labels))
    doc = json.loads(text)
    assert code == 0
    assert doc["reachable"] == doc["minimal"] == doc["expected_bound"] == 106
    assert doc["epsilon_fallback"] is False
    assert len(json.loads(labels.read_text())) == 106


def test_concat_epsilon_matches(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "binary-k2", "4,4")
    files = sorted(str(p) for p in out.glob("A*.txt"))
    _, text, _ = run(capsys, "concat", *files, "--epsilon")
    assert json.loads(text)["minimal"] == 56


def test_concat_cap_exit_three(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "kp1", "3,3")
    files = sorted(str(p) for p in out.glob("A*.txt"))
    code, _, err = run(capsys, "concat", *files, "--cap", "4")
    assert code == 3
    assert "cap" in err


def test_concat_dfa_out_and_minimize(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "example-k5-14", "0")
    files = sorted(str(p) for p in out.glob("A*.txt"))
    dfa_path = tmp_path / "concat.txt"
    _, text, _ = run(capsys, "concat", *files, "--dfa-out", str(dfa_path))
    assert json.loads(text)["epsilon_fallback"] is True
    code, text, _ = run(capsys, "minimize", str(dfa_path))
    assert code == 0
    assert parse_dfa(text).state_count == 14


# -- unary


def test_unary_frobenius(capsys):
    _, out, _ = run(capsys, "unary", "frobenius", "6", "10", "15")
    assert json.loads(out) == {"g": 29, "f": 60}


def test_unary_cyclic(capsys):
    _, out, _ = run(capsys, "unary", "cyclic", "--n", "12,20,30", "--engine")
    doc = json.loads(out)
    assert (doc["lambda"], doc["mu"], doc["states"]) == (2, 118, 120)
    assert doc["engine"] == {"lambda": 2, "mu": 118, "states": 120}


def test_unary_tailed(capsys):
    _, out, _ = run(capsys, "unary", "tailed", "--sizes", "3:2,5:1", "--engine")
    doc = json.loads(out)
    assert doc["mu"] == doc["engine"]["mu"] == 17


def test_unary_tails(capsys):
    _, out, _ = run(
        capsys, "unary", "tails", "--sizes", "12:2,20:2,30:2", "--finals", "0,13;0,21;0,31"
    )
    doc = json.loads(out)
    assert (doc["lambda"], doc["mu"]) == (60, 124)
    assert doc["maximizers"] == [[1, 2, 3]]


def test_unary_split(capsys):
    _, out, _ = run(capsys, "unary", "split", "471", "315")
    doc = json.loads(out)
    assert doc["best_split"] == [[470, 1], [314, 1]]
    assert doc["certified"] is True


def test_unary_errors(capsys):
    assert run(capsys, "unary", "frobenius", "4", "6")[0] == 2
    assert run(capsys, "unary", "cyclic")[0] == 2
    assert run(capsys, "unary", "tails", "--sizes", "3:1", "--finals", "0;1")[0] == 2


# -- export


def test_export_dot_one_based(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "kp1", "3,3")
    code, text, _ = run(capsys, "export", str(out / "A1.txt"), "--dot")
    assert code == 0
    assert 'q3 [label="3", shape=doublecircle]' in text
    assert "q0" not in text.replace("init0", "")


def test_export_json_text_json(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "kletter", "2,3,2")
    conv = tmp_path / "conv"
    run(capsys, "export", str(out / "A2.txt"), "--json", "--out", str(conv))
    run(capsys, "export", str(conv / "A2.json"), "--text", "--out", str(tmp_path / "t"))
    run(capsys, "export", str(tmp_path / "t" / "A2.txt"), "--json", "--out", str(tmp_path / "j"))
    assert (conv / "A2.json").read_text() == (tmp_path / "j" / "A2.json").read_text()


def test_export_concat_nfa(tmp_path, capsys):
    out = _witness_dir(tmp_path, capsys, "kp1", "3,3")
    files = sorted(str(p) for p in out.glob("A*.txt"))
    dest = tmp_path / "exp"
    run(capsys, "export", *files, "--dot", "--nfa", "--out", str(dest))
    assert (dest / "concat.dot").read_text().startswith("digraph")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "multicat", "unary", "frobenius", "3", "5"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["g"] == 7
