import json
from pathlib import Path

import pytest

from modsat.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bad_primes(capsys):
    code, out, _ = run(["bad-primes"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == 1
    table = {t: row["bound"] for row in data["excluded_primes"] for t in row["types"]}
    assert table == {
        "A_n": "1", "B_n": "2", "D_n": "2", "C_n": "n",
        "G_2": "3", "F_4": "3", "E_6": "3", "E_7": "19", "E_8": "31",
    }


@pytest.mark.parametrize(
    "setup,golden,bound",
    [
        ("setup_inner_a1_ell3.json", "golden_inner_a1_ell3.json", 2),
        ("setup_base_change_a1_ell3.json", "golden_base_change_a1_ell3.json", 2),
    ],
)
def test_brauer_matrix_golden(tmp_path, capsys, setup, golden, bound):
    out = tmp_path / "matrix.json"
    code, _, _ = run(["brauer", "matrix", "--setup", FIXTURES / setup, "--weight-bound", bound, "--out", out], capsys)
    assert code == 0
    got = json.loads(out.read_text())
    want = json.loads((FIXTURES / golden).read_text())
    for key in ("columns", "rows", "entries", "ell"):
        assert got[key] == want[key]
    assert all(r["nonnegative"] for r in got["liftability"])


def test_brauer_matrix_hypothesis_exit(capsys):
    code, _, err = run(["brauer", "matrix", "--setup", FIXTURES / "setup_c3_ell2.json", "--weight-bound", 2], capsys)
    assert code == 2
    assert "excluded-primes table" in err


def test_input_errors(tmp_path, capsys):
    code, _, _ = run(["brauer", "matrix", "--setup", tmp_path / "missing.json", "--weight-bound", 2], capsys)
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(["brauer", "matrix", "--setup", bad, "--weight-bound", 2], capsys)
    assert code == 1
    code, _, _ = run(["fold", "--type", "A", "--rank", 3, "--perm", "1,0,2", "--ell", 2], capsys)
    assert code == 1


def test_output_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out, threads in ((a, 1), (b, 3)):
        run(["brauer", "matrix", "--setup", FIXTURES / "setup_base_change_a1_ell3.json", "--weight-bound", 3,
             "--threads", threads, "--out", out], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_group_fold_auto(tmp_path, capsys):
    code, out, _ = run(["group", "--type", "G", "--rank", 2], capsys)
    data = json.loads(out)
    assert code == 0 and data["weyl_order"] == 12 and data["bad_prime_bound"] == 3
    code, out, _ = run(["fold", "--type", "D", "--rank", 4, "--perm", "2,1,3,0", "--ell", 3], capsys)
    data = json.loads(out)
    assert code == 0 and data["folded_type"] == "G2" and data["validation"]["ok"]
    auto = tmp_path / "a.json"
    auto.write_text(json.dumps({"kind": "pinned", "perm": [1, 0], "order": 2}))
    code, out, _ = run(["auto", "--type", "A", "--rank", 2, "--auto", auto], capsys)
    assert code == 0 and json.loads(out)["validation"]["ok"]


def test_tate_commands(tmp_path, capsys):
    code, out, _ = run(["tate", "--tensor-dim", 3, "--ell", 3, "--coeff", "Zl"], capsys)
    assert code == 0 and json.loads(out)["tensor_power"]["dims"] == {"0": 3, "1": 0}
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"coeff": "Zl", "ell": 3, "presentation": [[], [], []], "sigma": [[0, 0, 1], [1, 0, 0], [0, 1, 0]]}))
    code, out, _ = run(["tate", "--module", m, "--j", 0, 1], capsys)
    assert code == 0 and [g["dim"] for g in json.loads(out)["groups"]] == [0, 0]


def test_dl_gr_param(tmp_path, capsys):
    theta = tmp_path / "theta.json"
    theta.write_text(json.dumps({"datum": {"type": "A", "rank": 1}, "values": [{"num": 1, "den": 5}]}))
    code, out, _ = run(["dl", "tate", "--wx", "s1", "--twist", "s1", "--theta", theta], capsys)
    data = json.loads(out)
    assert code == 0 and data["size"] == 2
    auto = tmp_path / "a.json"
    auto.write_text(json.dumps({"kind": "pinned", "perm": [1, 0], "order": 2}))
    code, out, _ = run(["gr", "fixed", "--type", "A", "--rank", 2, "--auto", auto, "--lambda", "1,1"], capsys)
    data = json.loads(out)
    assert code == 0 and data["fixed"]["dim"] == 1 and data["dim_G"] == 4
    code, out, _ = run(["gr", "fixed", "--type", "A", "--rank", 2, "--auto", auto, "--lambda", "1,0"], capsys)
    assert json.loads(out)["fixed"] == {"empty": True}
    param = tmp_path / "p.json"
    param.write_text(json.dumps({"g_datum": {"type": "A", "rank": 1}, "values": ["1/5"]}))
    code, out, _ = run(["param", "toral", "--theta", param, "--w", "s1", "--inner-ell", 3], capsys)
    data = json.loads(out)
    assert code == 0 and data["torus_part"] == [{"num": 3, "den": 5}] and data["frob_twist"] == 1
    assert data["weyl_part"] == "s1"


def test_suite_negative_control(capsys):
    code, out, _ = run(["suite", "--corrupt-folding-table", "--br-pairs", 5, "--no-determinism"], capsys)
    data = json.loads(out)
    assert code == 3 and not data["passed"]
    failed = [r for r in data["results"] if not r["passed"]]
    assert [r["name"] for r in failed] == ["br_multiplicative_char_ell"]
    assert failed[0]["details"]["validation_failures"][0]["failed_axioms"] == ["folding_table"]
