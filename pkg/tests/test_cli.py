import csv
import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from diffusion_factor.cli import main

SCHEMA = json.loads(
    (pathlib.Path(__file__).parent.parent / "schemas" / "run_record.json").read_text()
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    record = json.loads(out)
    jsonschema.validate(record, SCHEMA)
    return code, record


def test_factor_example(capsys):
    code, rec = run_json(capsys, "factor", "33", "--a", "5")
    assert code == 0
    o = rec["outcome"]
    assert (o["divisor"], o["path"], o["s"], o["q"], o["x"]) == (11, "step3", 1, 15, 23)
    assert rec["wall_time_ms"] == 0


def test_factor_n1363(capsys):
    code, rec = run_json(capsys, "factor", "1363", "--a", "991")
    assert code == 0
    assert rec["outcome"]["divisor"] == 47
    assert (rec["outcome"]["r_b"], rec["outcome"]["k"], rec["outcome"]["r_a"]) == (161, 1, 322)
    assert rec["ledger"]["matrix_applications"] == 347
    assert rec["ledger"]["measurements"] == 1


def test_factor_seeded(capsys):
    code, rec = run_json(capsys, "factor", "1363", "--seed", "3")
    assert code == 0
    assert rec["seed"] == 3
    assert rec["outcome"]["divisor"] in (29, 47)


def test_factor_text(capsys):
    code, out, _ = run(capsys, "factor", "33", "--a", "5")
    assert code == 0
    assert "11" in out and "step3" in out


def test_factor_no_answer(capsys):
    code, rec = run_json(capsys, "factor", "33", "--a", "1")
    assert code == 2
    assert rec["outcome"]["status"] == "no_answer"
    assert rec["outcome"]["reason"] == "s_zero"


@pytest.mark.parametrize("n", ["34", "31", "49", "1"])
def test_factor_screened(capsys, n):
    code, _, _ = run(capsys, "factor", n)
    assert code == 1


def test_order_full(capsys):
    code, rec = run_json(capsys, "order", "1363", "944")
    assert code == 0
    assert rec["outcome"]["order"] == 161


def test_order_early(capsys):
    code, rec = run_json(capsys, "order", "1363", "944", "--mode", "early")
    assert code == 0
    assert rec["outcome"]["decode_path"] == "early_stop"
    assert rec["ledger"]["diffusion_steps"] == 36


def test_order_errors(capsys):
    assert run(capsys, "order", "33", "2")[0] == 1
    assert run(capsys, "order", "33", "11")[0] == 1


def test_order_decode_failure(capsys):
    # one step is nowhere near uniform, so no candidate verifies
    code, _, err = run(capsys, "order", "1363", "944", "--steps", "1")
    assert code == 2
    assert err


def test_emit_probs(capsys, tmp_path):
    path = tmp_path / "p25.csv"
    code, _, _ = run(capsys, "order", "1363", "944", "--mode", "early", "--emit-probs",
                     str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == 161
    recips = [float(r["reciprocal"]) for r in rows]
    assert all(155 < x < 170 for x in recips)


def test_spectrum(capsys):
    code, rec = run_json(capsys, "spectrum", "15", "4", "--verify-bound")
    assert code == 0
    assert rec["outcome"]["korobov"]["holds"] is True
    assert len(rec["outcome"]["lambdas"]) == 15
    assert float(rec["outcome"]["lambda_star"]) < float(rec["outcome"]["eigenvalue_bound"])


@pytest.mark.parametrize("r", ["16", "4097"])
def test_spectrum_rejects(capsys, r):
    assert run(capsys, "spectrum", r, "4")[0] == 1


def test_success_rate(capsys):
    code, rec = run_json(capsys, "success-rate", "33")
    assert code == 0
    o = rec["outcome"]
    assert (o["bound"], o["rate_over_units"], o["bound_holds"]) == ("1/4", "1/2", True)
    assert sum(o["histogram"].values()) == 33


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1


def test_timing_flag(capsys):
    _, rec = run_json(capsys, "factor", "33", "--a", "5", "--timing")
    assert rec["wall_time_ms"] >= 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffusion_factor", "factor", "33", "--a", "5",
                           "--json"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["outcome"]["divisor"] == 11
