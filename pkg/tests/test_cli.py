import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from bmattack.cli import main
from bmattack.serialize import dumps

GOLDEN = Path(__file__).parent / "golden"
BBS = ["--gen", "bbs", "--modulus", "21", "--j", "5"]
KAL = ["--gen", "kaliski", "--prime", "5", "--c", "1"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_generate():
    code, out = run("generate", *BBS, "--seed-state", "9", "--steps", "2", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"states": [18, 9], "bits": "01"}
    code, out = run("generate", *KAL, "--seed-state", "2", "--steps", "2", "--format", "json")
    assert json.loads(out) == {"states": [4, 3], "bits": "01"}
    code, out = run("generate", *BBS, "--seed-state", "9", "--steps", "0")
    assert code == 0
    assert out == "states: \nbits: \n"


def test_generate_bad_seed():
    code, _ = run("generate", *BBS, "--seed-state", "2", "--steps", "1")
    assert code == 2


@pytest.mark.parametrize("args, top, k", [(BBS + ["--bits", "10"], 9, 4),
                                          (KAL + ["--bits", "00"], 3, 2)])
def test_attack_json(args, top, k):
    code, out = run("attack", *args, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["top_outcome"] == top
    assert report["k"] == k
    assert report["agreement"] is True
    expected_keys = {"generator", "params", "bits", "n_qubits", "m", "k", "theta",
                     "predicted_success", "distribution", "top_outcome", "top_probability",
                     "classical_seeds", "recovered_states", "agreement"}
    assert expected_keys <= set(report)
    assert len(report["distribution"]) <= 10


def test_attack_single_bit_with_solution_count():
    code, out = run("attack", *BBS, "--bits", "1", "--solutions", "4", "--format", "json")
    report = json.loads(out)
    top4 = {row["outcome"] for row in report["distribution"][:4]}
    assert top4 == {1 * 1 % 21, 7 * 7 % 21, 9 * 9 % 21, 15 * 15 % 21}
    assert code == 0


def test_attack_disagreement_exit_code():
    code, _ = run("attack", *BBS, "--bits", "001")
    assert code == 3


def test_attack_resource_exit_code():
    code, _ = run("attack", *BBS, "--bits", "10", "--qubit-cap", "7")
    assert code == 4


def test_parameter_errors():
    assert run("attack", *BBS, "--bits", "")[0] == 2
    assert run("attack", "--gen", "bbs", "--modulus", "21", "--prime", "5", "--bits", "1")[0] == 2
    assert run("attack", "--gen", "kaliski", "--prime", "7", "--c", "1", "--bits", "1")[0] == 2


def test_json_round_trip_and_determinism():
    _, a = run("attack", *BBS, "--bits", "10", "--format", "json", "--rng-seed", "5")
    _, b = run("attack", *BBS, "--bits", "10", "--format", "json", "--rng-seed", "5")
    assert a == b
    assert dumps(json.loads(a)) == a


def test_formats_agree():
    _, js = run("attack", *KAL, "--bits", "00", "--format", "json")
    _, csv_out = run("attack", *KAL, "--bits", "00", "--format", "csv")
    _, text = run("attack", *KAL, "--bits", "00")
    report = json.loads(js)
    rows = dict(line.split(",", 1) for line in csv_out.strip().splitlines()[1:])
    assert float(rows["theta"]) == report["theta"]
    assert float(rows["top_probability"]) == report["top_probability"]
    assert int(rows["k"]) == report["k"]
    assert f"theta: {rows['theta']} rad" in text
    assert f"with probability {rows['top_probability']}" in text


@pytest.mark.parametrize("name, args", [
    ("kaliski_00", KAL + ["--bits", "00"]),
    ("bbs_10", BBS + ["--bits", "10"]),
])
def test_trace_golden(tmp_path, name, args):
    path = tmp_path / "t.trace"
    code, _ = run("trace", *args, "--trace-out", str(path))
    assert code == 0
    data = path.read_bytes()
    assert b"\r\n" not in data
    assert data == (GOLDEN / f"{name}.trace").read_bytes()


def test_trace_content():
    _, text = run("trace", *KAL, "--bits", "00")
    blocks = {b.split("\n", 1)[0].split()[0]: b for b in text.split("\n\n")}
    assert "domain=4 bits=11 ancilla=- amp=0.353553390593,0" in blocks["psi4"]
    assert len(blocks["psi0"].strip().splitlines()) == 2
    _, text = run("trace", *BBS, "--bits", "10")
    psi2 = next(b for b in text.split("\n\n") if b.startswith("psi2"))
    flagged = [line.split()[0] for line in psi2.splitlines() if "bits=10" in line]
    assert flagged == ["domain=1", "domain=7", "domain=9", "domain=15"]


def test_trace_unwritable(tmp_path):
    code, _ = run("trace", *KAL, "--bits", "00", "--trace-out", str(tmp_path / "no" / "dir" / "t"))
    assert code == 5


@pytest.mark.parametrize("name, args", [
    ("bbs_10_attack", BBS + ["--bits", "10"]),
    ("kaliski_00_attack", KAL + ["--qx", "2", "--qy", "2", "--bits", "00"]),
])
def test_attack_golden(name, args):
    _, out = run("attack", *args, "--format", "json")
    assert out == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("bits, seeds", [("10", [9])])
def test_bruteforce_bbs(bits, seeds):
    code, out = run("bruteforce", *BBS, "--bits", bits, "--format", "json")
    assert code == 0
    assert json.loads(out)["seeds"] == seeds


@pytest.mark.parametrize("bits, seeds", [("00", [2]), ("11", [6])])
def test_bruteforce_kaliski(bits, seeds):
    _, out = run("bruteforce", *KAL, "--bits", bits, "--format", "json")
    assert json.loads(out)["seeds"] == seeds


def test_verify_gates():
    code, out = run("verify-gates", *BBS, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["all_unitary"]
    assert all(g["max_deviation"] == 0 for g in report["gates"])
    code, out = run("verify-gates", *KAL, "--format", "json")
    rho = next(g for g in json.loads(out)["gates"] if g["name"] == "rho")
    # row x lists where x goes
    assert [row.index(1) for row in rho["rows"]] == [0, 6, 4, 2, 3, 1, 5, 7]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# reference instance\ngen = kaliski\nprime = 5\nc = 1\nbits = 11\nformat = json\n")
    _, out = run("bruteforce", "--config", str(cfg))
    assert json.loads(out)["seeds"] == [6]
    _, out = run("bruteforce", "--config", str(cfg), "--bits", "00")
    assert json.loads(out)["seeds"] == [2]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bmattack", "attack", *BBS, "--bits", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "top outcome: 9" in proc.stdout
