import json
import subprocess
import sys

import pytest

from sstlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--alphabet", "01", "--string", "001")
    doc = json.loads(out)
    assert code == 0
    assert doc["length"] == 3
    assert doc["info_bits"] == pytest.approx(2.7548875021634685)
    assert doc["h0"] == pytest.approx(0.9182958340544895)


def test_codebook_encode_decode(tmp_path, capsys):
    path = str(tmp_path / "cb.json")
    assert run(capsys, "codebook", "--alphabet", "01", "--n", "3", "--config", "1,-2",
               "--materialize", "--out", path)[0] == 0
    assert run(capsys, "encode", "--codebook", path, "--string", "000")[1] == "0\n"
    assert run(capsys, "encode", "--codebook", path, "--string", "001")[1] == "0000\n"
    assert run(capsys, "decode", "--codebook", path, "--string", "0111")[1] == "011\n"
    code, _, err = run(capsys, "decode", "--codebook", path, "--string", "01")
    assert code == 1 and "invalid codeword" in err


def test_table_and_check(tmp_path, capsys):
    code, out, _ = run(capsys, "table", "--alphabet", "012", "--n", "10", "--configs", "0;3")
    assert code == 0
    assert out.splitlines() == ["k_pos,k_neg,avg_info_y_bits", "0,0,14.262959", "3,0,13.693861"]
    check = tmp_path / "exp.csv"
    check.write_text("k_pos,k_neg,avg_info_y_bits\n0,0,14.263\n3,0,13.694\n")
    args = ["table", "--alphabet", "012", "--n", "10", "--configs", "0;3", "--check", str(check)]
    assert run(capsys, *args, "--tol", "0.005")[0] == 0
    check.write_text("k_pos,k_neg,avg_info_y_bits\n0,0,14.0\n3,0,13.694\n")
    code, _, err = run(capsys, *args, "--tol", "0.005")
    assert code == 2 and "0:" in err


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--alphabet", "01", "--n", "3", "--configs", "1,-2",
                       "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0]["avg_info_y"] == pytest.approx(1.6225562489182657)
    assert doc["ordering_rule"] == "canonical-v1"


def test_sweep_negative_range(capsys):
    code, out, _ = run(capsys, "sweep", "--alphabet", "012", "--n", "10",
                       "--kpos", "1..1", "--kneg", "-1..-3")
    rows = json.loads(out)
    assert code == 0
    assert [(r["k_pos"], r["k_neg"]) for r in rows][0] == (1, -1)
    assert len(rows) == 3


def test_testability(tmp_path, capsys):
    path = str(tmp_path / "cb.json")
    run(capsys, "codebook", "--alphabet", "01", "--n", "2", "--config", "1", "--out", path)
    code, out, _ = run(capsys, "testability", "--codebook", path, "--t", "1", "--exhaustive")
    doc = json.loads(out)
    assert code == 0 and doc["trials"] == 12 and doc["detected"] == 8
    code, out, _ = run(capsys, "testability", "--codebook", path, "--t", "1",
                       "--trials", "100", "--seed", "7")
    assert json.loads(out)["mode"] == "sampled"


def test_coding_cost(capsys):
    code, out, _ = run(capsys, "coding-cost", "--alphabet", "01", "--n", "3", "--config", "1,-2",
                       "--gram", "1", "--overhead", "none")
    doc = json.loads(out)
    assert code == 0
    assert doc["avg_info_y"] == pytest.approx(1.6225562489182657)


@pytest.mark.parametrize("argv", [["bogus"], ["info", "--alphabet", "01"], []])
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_bad_input_exit_1(capsys):
    assert run(capsys, "info", "--alphabet", "01", "--string", "012")[0] == 1
    assert run(capsys, "table", "--alphabet", "01", "--n", "2", "--configs", "1,-2")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sstlab", "info", "--alphabet", "ab", "--string", "aabb"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["info_bits"] == 4.0
