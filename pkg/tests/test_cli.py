import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from wittdisp.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", 7)
    assert code == 0
    assert "FAIL" not in out
    assert "seed=7" in out


def test_selftest_is_byte_deterministic(capsys):
    first = run(capsys, "selftest", "--seed", 3)[1]
    second = run(capsys, "selftest", "--seed", 3)[1]
    assert first == second
    assert first != run(capsys, "selftest", "--seed", 4)[1]


def test_unknown_flag_is_a_usage_error(capsys):
    code, _, err = run(capsys, "selftest", "--bogus")
    assert code == 2 and "unrecognized" in err
    assert run(capsys)[0] == 2


def test_missing_file_is_an_input_error(capsys):
    code, _, err = run(capsys, "frame", "check", DATA / "nope.txt")
    assert code == 2 and "cannot read" in err


def test_singular_datum_fails_with_witness(capsys):
    code, _, err = run(capsys, "display", "check", DATA / "datum_bad.txt")
    assert code == 1
    assert "witness: e, 0; 0, 1" in err


def test_good_datum_and_injected_fault(capsys):
    assert run(capsys, "display", "check", DATA / "datum_good.txt")[0] == 0
    code, out, _ = run(capsys, "display", "check", DATA / "datum_fault.txt")
    assert code == 1
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert fails and all("witness:" in line for line in fails)


def test_frame_report_lines_are_sorted(capsys):
    code, out, _ = run(capsys, "frame", "check", DATA / "frame_relative.txt")
    assert code == 0
    for block in out.strip().split("# ")[1:]:
        body = [line for line in block.splitlines()[1:] if line]
        names = [line.split(" ", 1)[1] for line in body]
        assert names == sorted(names)
    assert "frame (iii) sigma_dot(J) generates W" in out
    assert "verjungung (iv)" in out


def test_filtration_commands(capsys):
    code, out, _ = run(capsys, "fil", "compute", DATA / "lifting.txt")
    assert code == 0 and "PASS Fil^1 rank (1)" in out
    assert run(capsys, "fil", "admissible", DATA / "lifting.txt")[0] == 0
    code, out, _ = run(capsys, "fil", "lift", DATA / "lifting.txt")
    assert code == 0 and "Fil^1 = E^1" in out


def test_crystal_commands(capsys, tmp_path):
    h1 = DATA / "crystal_h1.txt"
    assert run(capsys, "cy", "validate", h1)[0] == 0
    code, out, _ = run(capsys, "cy", "validate", DATA / "crystal_bad.txt")
    assert code == 1 and "FAIL Griffiths transversality" in out
    code, out, _ = run(capsys, "cy", "transport", h1, "--to", "e")
    assert code == 0 and out.splitlines()[0] == "(1, e, 0, 0)"
    code, out, _ = run(capsys, "cy", "kappa", h1, "--line", "1,e,0,0")
    assert code == 0 and out.strip() == "(e, 0, 0)"
    assert run(capsys, "cy", "check", h1, "--line", "1,e,0,0")[0] == 0
    assert run(capsys, "cy", "check", h1, "--line", "1,0,e,0")[0] == 1
    cert = tmp_path / "cert.txt"
    code, _, _ = run(capsys, "cy", "classify", h1, "--exhaustive", "--cert", cert)
    assert code == 0
    text = cert.read_text().splitlines()
    assert text[:2] == ["deformations 2", "cy_lines 2"]
    assert sum(line.startswith("match ") for line in text) == 2
    code, out, _ = run(capsys, "cy", "classify", h1, "--samples", 3, "--seed", 2)
    assert code == 0 and "counts agree" not in out


def test_conflicting_modes_are_rejected(capsys):
    code, _, _ = run(capsys, "cy", "classify", DATA / "crystal_h1.txt", "--exhaustive", "--samples", 3)
    assert code == 2


def test_ring_and_witt_commands(capsys, tmp_path):
    out_file = tmp_path / "ring.txt"
    code, out, _ = run(capsys, "ring", "p=2 N=3", "--ideal", "2", "--pd", "p-adic", "--out", out_file)
    assert code == 0 and "PASS m! gamma_m(x) = x^m for m <= 5" in out
    assert out_file.read_text() == out
    code, out, _ = run(capsys, "witt", "add", "[1,0]@2", "[1,0]@2", "--ring", "p=2 N=2")
    assert code == 0 and out.strip() == "[2, 3]@2"
    code, out, _ = run(capsys, "witt", "frobenius", "[0,1]@2", "--ring", "p=2 N=2")
    assert out.strip() == "[2]@1"
    assert run(capsys, "witt", "ghost", "--p", 3, "--n", 3)[0] == 0
    assert run(capsys, "witt", "add", "[1,0]@2", "--ring", "p=2 N=2")[0] == 2
    assert run(capsys, "ring", "p=4 N=1")[0] == 2


@pytest.mark.skipif(shutil.which("wittdisp") is None, reason="console script not installed")
def test_console_script_exit_codes():
    ok = subprocess.run(["wittdisp", "witt", "ghost", "--p", "2", "--n", "2"], capture_output=True)
    assert ok.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "wittdisp.cli", "--bogus"], capture_output=True)
    assert bad.returncode == 2
