import subprocess
import sys
from pathlib import Path

import pytest

from soliton_rigidity.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


# --- analyze ------------------------------------------------------------------


def test_analyze_cp4(capsys):
    code, out, _ = run(capsys, "analyze", "CP4", "--format", "structured-text")
    f = fields(out)
    assert code == 0
    assert f["obstruction_verdict"] == "ALL_OBSTRUCTED" and f["rigid"] == "true"
    assert f["dim_ISD"] == "24"


def test_analyze_s2xs2(capsys):
    code, out, _ = run(capsys, "analyze", "S2xS2", "--format", "structured-text")
    f = fields(out)
    assert f["obstruction_verdict"] == "ALL_UNOBSTRUCTED_AT_ORDER_2" and f["dim_E2mu"] == "6"


def test_analyze_cp3(capsys):
    _, out, _ = run(capsys, "analyze", "CP3", "--format", "structured-text")
    f = fields(out)
    assert f["obstruction_verdict"] == "KERNEL_FAMILY_EXISTS"
    assert f["kernel_representative_lambda"] == "1,1,-1,-1"


def test_analyze_human_and_csv(capsys):
    _, human, _ = run(capsys, "analyze", "CP2")
    assert human.startswith("Rigidity report: CP2\n")
    _, csv_out, _ = run(capsys, "analyze", "CP2", "--format", "csv")
    assert csv_out.splitlines()[0] == "key,value"


def test_analyze_golden(capsys, tmp_path):
    out = tmp_path / "report.txt"
    assert main(["analyze", "CP4", "--format", "structured-text", "--out", str(out)]) == 0
    assert out.read_text() == (GOLDEN / "analyze_CP4.txt").read_text()
    assert capsys.readouterr().out == ""


# --- check --------------------------------------------------------------------


def test_check_cp2_self_witness(capsys):
    code, out, _ = run(capsys, "check", "CP2", "--lambda", "1,1,-2", "--format", "structured-text")
    f = fields(out)
    assert code == 0
    assert f["status"] == "OBSTRUCTED" and f["value"] == "-1/5"
    assert f["witness"] == "diag(1,1,-2)"
    assert out == (GOLDEN / "check_CP2_1_1_-2.txt").read_text()


def test_check_cp3_balanced(capsys):
    _, out, _ = run(capsys, "check", "CP3", "--lambda", "1,1,-1,-1", "--format", "structured-text")
    assert fields(out)["status"] == "UNOBSTRUCTED_AT_ORDER_2"


def test_check_coordinates(capsys):
    _, out, _ = run(capsys, "check", "S2xS2", "--coords", "1,0,0,0,2,0", "--format", "structured-text")
    assert fields(out)["status"] == "UNOBSTRUCTED_AT_ORDER_2"


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "CP2", "--lambda", "1,-1"],
        ["check", "CP2", "--lambda", "1,1,1"],
        ["check", "CP2", "--lambda", "1,x,-1"],
        ["check", "CP2", "--coords", "1,0"],
        ["check", "S2xS2", "--lambda", "1,-1"],
        ["analyze", "Q3"],
        ["moments", "--complex", "3", "1,1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_unsupported_manifold_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "S1")
    assert code == 3 and "unsupported" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "CP2", "--bogus"])
    assert exc.value.code == 2


# --- gram / moments / verify --------------------------------------------------


def test_gram_s2xs2(capsys):
    _, out, _ = run(capsys, "gram", "S2xS2", "--format", "structured-text")
    f = fields(out)
    assert f["entries"] == "56" and f["nonzero_entries"] == "0"


def test_gram_csv_golden(capsys):
    _, out, _ = run(capsys, "gram", "CP2", "--format", "csv")
    assert out == (GOLDEN / "gram_CP2.csv").read_text()


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["--complex", "3", "1,1,1"], "1/60"),
        (["--complex", "2", "1,0"], "1/2"),
        (["--complex", "3", "1,0,0", "0,1,0"], "0/1"),
        (["--real", "3", "4,0,0"], "1/5"),
    ],
)
def test_moments(capsys, argv, expected):
    code, out, _ = run(capsys, "moments", *argv)
    assert code == 0 and out == expected + "\n"


def test_verify_cp2(capsys):
    code, out, _ = run(capsys, "verify", "CP2", "--seed", "7", "--samples", "100000", "--format", "structured-text")
    assert code == 0 and fields(out)["result"] == "pass"


def test_verify_rejects_small_sample_count(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "CP2", "--samples", "10"])
    assert exc.value.code == 2


def test_output_is_deterministic(capsys):
    argv = ["verify", "S2xS2", "--seed", "3", "--samples", "20000"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "soliton_rigidity", "moments", "--complex", "3", "1,1,1"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout == "1/60\n"
