import json

import pytest

from evokit.algebra import type_signature
from evokit.cli import main
from evokit.constructions import build_bnk, build_eub
from evokit.field import make_field
from evokit.io import dump_algebra, load_algebra, loads_algebra
from evokit.iso import fingerprint

F3 = make_field("F3")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# file format round trips
# ---------------------------------------------------------------------------

def test_evolution_round_trip(tmp_path):
    mat = build_eub(F3, 2, (1, 2))
    path = tmp_path / "eub.json"
    dump_algebra(mat, path)
    back = load_algebra(path)
    assert back == mat


def test_tensor_round_trip():
    t = build_bnk(make_field("Q"), 1, 3).to_tensor()
    text = dump_algebra(t)
    back = loads_algebra(text)
    assert back == t


def test_parse_errors():
    from evokit.errors import ParseError

    with pytest.raises(ParseError):
        loads_algebra("not json at all {")
    with pytest.raises(ParseError):
        loads_algebra(json.dumps({"field": "Q", "dim": 0, "kind": "evolution", "matrix": []}))
    with pytest.raises(ParseError):
        loads_algebra(json.dumps({"field": "Q", "dim": 1, "kind": "mystery"}))
    with pytest.raises(ParseError):
        loads_algebra(json.dumps(
            {"field": "Q", "dim": 2, "kind": "tensor",
             "tensor": [{"i": 2, "j": 1, "k": 1, "c": "1"}]}  # i > j
        ))


# ---------------------------------------------------------------------------
# build / analyze
# ---------------------------------------------------------------------------

def test_build_then_analyze_round_trip(tmp_path, capsys):
    out = tmp_path / "alg.json"
    code, _, _ = run_cli(
        capsys, "build", "eub", "--field", "F3",
        "--params", json.dumps({"n": 2, "gram": [1, 2]}),
        "--out", str(out),
    )
    assert code == 0
    on_disk = load_algebra(out)
    in_memory = build_eub(F3, 2, (1, 2))
    assert on_disk == in_memory
    assert type_signature(on_disk.to_tensor()) == type_signature(in_memory.to_tensor())
    assert fingerprint(on_disk) == fingerprint(in_memory)

    code, stdout, _ = run_cli(capsys, "analyze", str(out))
    assert code == 0
    assert "type: [2, 2]" in stdout
    assert "nilpotent: yes" in stdout


def test_analyze_not_nilpotent_exit_code(tmp_path, capsys):
    path = tmp_path / "idem.json"
    path.write_text(json.dumps(
        {"field": "Q", "dim": 1, "kind": "evolution", "matrix": [["1"]]}
    ))
    code, stdout, _ = run_cli(capsys, "analyze", str(path))
    assert code == 1
    assert "nilpotent: no" in stdout


def test_analyze_malformed_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    code, _, err = run_cli(capsys, "analyze", str(path))
    assert code == 2
    assert "error" in err


def test_build_bad_family(capsys):
    code, _, _ = run_cli(capsys, "build", "nonsense", "--params", "{}")
    assert code == 2


def test_build_missing_param(capsys):
    code, _, err = run_cli(capsys, "build", "eub", "--params", json.dumps({"n": 2}))
    assert code == 2
    assert "gram" in err


# ---------------------------------------------------------------------------
# graph export
# ---------------------------------------------------------------------------

def test_graph_dot_deterministic(tmp_path, capsys):
    path = tmp_path / "alg.json"
    dump_algebra(build_bnk(F3, 1, 3), path)
    code1, dot1, _ = run_cli(capsys, "graph", str(path))
    code2, dot2, _ = run_cli(capsys, "graph", str(path))
    assert code1 == code2 == 0
    assert dot1 == dot2
    assert '"e1" -> "e2";' in dot1


def test_graph_rejects_tensor_files(tmp_path, capsys):
    path = tmp_path / "tensor.json"
    dump_algebra(build_bnk(F3, 1, 3).to_tensor(), path)
    code, _, err = run_cli(capsys, "graph", str(path))
    assert code == 2


# ---------------------------------------------------------------------------
# fingerprint / iso / family commands
# ---------------------------------------------------------------------------

def test_fingerprint_command(tmp_path, capsys):
    path = tmp_path / "alg.json"
    dump_algebra(build_bnk(F3, 1, 4), path)
    code, stdout, _ = run_cli(capsys, "fingerprint", str(path))
    assert code == 0
    data = json.loads(stdout)
    assert data["type"] == [1, 1, 1, 1, 1]
    assert data["power_dims"][-1] == 0


def test_iso_command_found_and_not_found(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    dump_algebra(loads_algebra(json.dumps(
        {"field": "F3", "dim": 2, "kind": "evolution", "matrix": [["0", "1"], ["0", "0"]]}
    )), a)
    dump_algebra(loads_algebra(json.dumps(
        {"field": "F3", "dim": 2, "kind": "evolution", "matrix": [["0", "2"], ["0", "0"]]}
    )), b)
    code, stdout, _ = run_cli(capsys, "iso", "--src", str(a), "--dst", str(b))
    assert code == 0
    data = json.loads(stdout)
    assert data["verdict"] == "FOUND"
    assert data["witnesses"][0] == [["1", "0"], ["0", "2"]]

    c = tmp_path / "c.json"
    dump_algebra(build_eub(F3, 1, (1,)), c)  # dim 3: profiles differ
    code, stdout, _ = run_cli(capsys, "iso", "--src", str(a), "--dst", str(c))
    assert code == 1  # different profiles: never isomorphic
    assert json.loads(stdout)["verdict"] == "NOT_FOUND"


def test_iso_type_mismatch_is_mathematical_negative(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    dump_algebra(build_eub(F3, 2, (1, 2)), a)   # type [2, 2]
    dump_algebra(build_bnk(F3, 1, 3), b)        # type [1, 1, 1, 1]
    code, stdout, _ = run_cli(capsys, "iso", "--src", str(a), "--dst", str(b))
    assert code == 1
    assert json.loads(stdout)["verdict"] == "NOT_FOUND"


def test_noniso_family_command(tmp_path, capsys):
    src = tmp_path / "src.json"
    dump_algebra(build_bnk(F3, 1, 2), src)
    code, stdout, _ = run_cli(
        capsys, "noniso-family", "--src", str(src), "--family", "type_ones",
        "--params-grid", json.dumps({"n": 1, "k": 2}),
    )
    data = json.loads(stdout)
    # bnk(1, 2) is the plain chain of length 3: it IS a member of the
    # [1, 1, 1] family, so the search must find a witness.
    assert data["verdict"] == "WITNESSES_FOUND"
    assert code == 0


def test_noniso_family_negative(tmp_path, capsys):
    src = tmp_path / "src.json"
    dump_algebra(build_bnk(F3, 1, 4), src)
    code, stdout, _ = run_cli(
        capsys, "noniso-family", "--src", str(src), "--family", "elr",
        "--params-grid", json.dumps({"l": 1, "n": 1, "r": 2}),
    )
    data = json.loads(stdout)
    assert data["verdict"] == "NONE_ISOMORPHIC"
    assert code == 1


# ---------------------------------------------------------------------------
# verification suite plumbing
# ---------------------------------------------------------------------------

def test_verify_paper_fast_subset(capsys):
    code, stdout, _ = run_cli(capsys, "verify-paper", "--only", "1,2,3")
    assert code == 0
    lines = [l for l in stdout.splitlines() if l.startswith("[")]
    assert len(lines) == 3
    assert all(l.startswith("[PASS]") for l in lines)


def test_verify_paper_small_budget_skips(capsys):
    code, stdout, _ = run_cli(capsys, "verify-paper", "--only", "5", "--budget", "10")
    assert code == 1  # skipped is not a pass
    assert "[SKIPPED]" in stdout
