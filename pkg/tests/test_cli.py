import json
import subprocess
import sys

import pytest

from normgrad.cli import main
from normgrad.runner import CSV_COLUMNS, read_csv


def error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return json.loads(err[0])


def test_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "ng.csv"
    code = main(["run", "--problem", "narrow_gorge", "--qubits", "2", "--optimizer", "ngd2",
                 "--lr", "0.05", "--iters", "6", "--out", str(out)])
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 8
    assert "narrow_gorge_2/ngd2" in capsys.readouterr().out


def test_run_twice_is_byte_identical(tmp_path):
    args = ["run", "--problem", "h2", "--optimizer", "nnag", "--iters", "25", "--quiet"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_init_list_and_file_problem(tmp_path):
    ham = tmp_path / "h2.txt"
    ham.write_text("0.4 ZI\n0.4 IZ\n0.2 XX\n", encoding="utf-8")
    a, b = tmp_path / "file.csv", tmp_path / "h2.csv"
    assert main(["run", "--problem", "file", "--hamiltonian", str(ham), "--depth", "1",
                 "--init", "7pi/32,pi/2,0,0", "--optimizer", "gd", "--iters", "5",
                 "--quiet", "--out", str(a)]) == 0
    assert main(["run", "--problem", "h2", "--optimizer", "gd", "--iters", "5",
                 "--quiet", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_overrides(tmp_path):
    cfg = tmp_path / "exp.ini"
    cfg.write_text("[problem]\nproblem = narrow_gorge\nqubits = 3\n\n[optimizer]\n"
                   "optimizer = gd\n\n[run]\niters = 50\n", encoding="utf-8")
    out = tmp_path / "o.csv"
    assert main(["run", "--config", str(cfg), "--iters", "4", "--quiet", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 5


def test_failure_prints_json_error(tmp_path, capsys):
    code = main(["run", "--problem", "file", "--out", str(tmp_path / "x.csv")])
    assert code == 1
    err = error_line(capsys)
    assert err["error"] == "ValueError" and "Hamiltonian" in err["message"]


def test_missing_out(capsys):
    assert main(["run", "--problem", "h2", "--iters", "1"]) == 1
    assert "--out" in error_line(capsys)["message"]


def test_bad_hamiltonian_file(tmp_path, capsys):
    ham = tmp_path / "bad.txt"
    ham.write_text("0.5 XZ\n0.5 X\n", encoding="utf-8")
    assert main(["ground", str(ham)]) == 1
    assert error_line(capsys)["error"] == "HamiltonianParseError"


def test_usage_errors_are_json(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--problem", "lih"])
    assert info.value.code == 2
    assert error_line(capsys)["error"] == "UsageError"


def test_ground_and_summarize(tmp_path, capsys):
    ham = tmp_path / "h2.txt"
    ham.write_text("0.4 ZI\n0.4 IZ\n0.2 XX\n", encoding="utf-8")
    assert main(["ground", str(ham)]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(-(0.68**0.5), abs=1e-12)
    out = tmp_path / "h2_ngd.csv"
    main(["run", "--problem", "h2", "--optimizer", "ngd", "--iters", "40", "--quiet", "--out", str(out)])
    capsys.readouterr()
    assert main(["summarize", str(out), "--threshold", "-0.25"]) == 0
    text = capsys.readouterr().out
    assert "h2_ngd" in text and "<=-0.25" in text


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "normgrad.cli", "run", "--problem", "h2", "--lr", "0"],
        capture_output=True, text=True,
    )
    assert proc.returncode != 0
    assert json.loads(proc.stderr.strip().splitlines()[-1])["error"]
