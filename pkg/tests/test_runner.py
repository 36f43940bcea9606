import math

import numpy as np
import pytest

from normgrad.gradient import FunctionObjective
from normgrad.optimizers import GradientDescent, HistoricalNGD, NormalizedGD
from normgrad.problems import h2_toy, narrow_gorge
from normgrad.runner import (
    CSV_COLUMNS,
    STATUS_COMPLETED,
    STATUS_VANISHING,
    EnergyTrace,
    RunConfig,
    iterations_to_threshold,
    load_config,
    minimize,
    read_csv,
    run,
    summarize,
    trace_to_csv,
    write_csv,
)


def test_trace_rows_and_bookkeeping():
    p = narrow_gorge(3)
    trace = minimize(p.objective, NormalizedGD(0.05), p.initial_params, 4)
    assert len(trace) == 5
    assert trace.column("iter").tolist() == [0, 1, 2, 3, 4]
    # one energy plus 2 * 3 shifted evaluations per stepping row
    assert trace.column("evals").tolist() == [7, 14, 21, 28, 29]
    assert trace.step_norms[0] == 0.0
    np.testing.assert_allclose(trace.step_norms[1:], 0.05, atol=1e-12)
    assert trace.grad_norms[0] == pytest.approx(np.sqrt(3) / 8, abs=1e-12)
    assert math.isnan(trace.grad_norms[-1])
    assert np.all(trace.column("ms") == 0.0)
    assert trace.status == STATUS_COMPLETED
    np.testing.assert_array_equal(trace.params, trace.params)


def test_final_gradient_norm_on_request():
    p = narrow_gorge(2)
    trace = minimize(p.objective, GradientDescent(0.05), p.initial_params, 2, record_gradient_norm=True)
    assert not math.isnan(trace.grad_norms[-1])
    assert trace.column("evals")[-1] == trace.column("evals")[-2] + 5


def test_zero_iterations():
    p = h2_toy()
    trace = minimize(p.objective, NormalizedGD(), p.initial_params, 0)
    assert len(trace) == 1
    np.testing.assert_array_equal(trace.params, p.initial_params)
    with pytest.raises(ValueError):
        minimize(p.objective, NormalizedGD(), p.initial_params, -1)


def test_vanishing_gradient_flags_run():
    obj = FunctionObjective(lambda x: float(x @ x), lambda x: 2 * x, 2)
    trace = minimize(obj, NormalizedGD(0.05), np.zeros(2), 10)
    assert trace.status == STATUS_VANISHING
    assert len(trace) == 1 and trace.grad_norms[0] == 0.0


def test_vanishing_inside_block_reports_anchor():
    # gradient vanishes at the provisional point x0 - 0.05 * e1
    target = np.array([-0.05, 0.0])
    obj = FunctionObjective(
        lambda x: float((x - target) @ (x - target)), lambda x: 2 * (x - target), 2
    )
    trace = minimize(obj, HistoricalNGD(0.05, history_length=2), np.zeros(2), 10)
    assert trace.status == STATUS_VANISHING
    np.testing.assert_array_equal(trace.params, np.zeros(2))
    assert trace.column("iter").tolist() == [0, 1, 2]
    assert trace.energies[-1] == trace.energies[0]


def test_iterations_to_threshold():
    trace = EnergyTrace(rows=[[0, 1.0, 0, 0, 1, 0], [1, 0.4, 0, 0, 2, 0], [2, 0.3, 0, 0, 3, 0]])
    assert iterations_to_threshold(trace, 0.5) == 1
    assert iterations_to_threshold(trace, 0.3) == 2
    assert iterations_to_threshold(trace, 0.1) is None


def test_csv_round_trip(tmp_path):
    trace = run(RunConfig(problem="h2", optimizer="ngd2", iters=15, record_gradient_norm=True))
    path = tmp_path / "h2.csv"
    write_csv(trace, path)
    back = read_csv(path)
    assert len(back) == len(trace)
    for a, b in zip(trace.rows, back.rows):
        np.testing.assert_array_equal(np.array(a, dtype=float), np.array(b, dtype=float))
    assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(CSV_COLUMNS)


def test_empty_trace_is_header_only(tmp_path):
    assert trace_to_csv(EnergyTrace()) == ",".join(CSV_COLUMNS) + "\n"
    path = tmp_path / "empty.csv"
    write_csv(EnergyTrace(), path)
    assert len(read_csv(path)) == 0


def test_read_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_csv(path)


@pytest.mark.parametrize(
    "config",
    [
        RunConfig(problem="h2", optimizer="adam", iters=30),
        RunConfig(problem="narrow_gorge", qubits=4, optimizer="ngd3", iters=30),
        RunConfig(problem="tfim", qubits=3, optimizer="nnag", init="random", seed=7, iters=10),
    ],
)
def test_runs_are_byte_identical(config):
    assert trace_to_csv(run(config)) == trace_to_csv(run(config))


def test_random_init_depends_on_seed():
    a = run(RunConfig(problem="tfim", qubits=3, init="random", seed=1, iters=0))
    b = run(RunConfig(problem="tfim", qubits=3, init="random", seed=2, iters=0))
    assert a.energies[0] != b.energies[0]


def test_timing_fills_ms_column():
    trace = run(RunConfig(problem="narrow_gorge", qubits=2, iters=3, record_time=True))
    ms = trace.column("ms")
    assert np.all(ms > 0) and np.all(np.diff(ms) >= 0)


def test_load_config_text():
    text = """
[problem]
problem = narrow_gorge
qubits = 4
init = pi/2

[optimizer]
optimizer = ngdm
m = 3
k = -50
lr = 0.1

[run]
iters = 12
record_gradient_norm = true
"""
    cfg = load_config(text, is_text=True)
    assert (cfg.problem, cfg.qubits, cfg.optimizer, cfg.m, cfg.k, cfg.lr, cfg.iters) == (
        "narrow_gorge", 4, "ngdm", 3, -50.0, 0.1, 12,
    )
    assert cfg.record_gradient_norm is True
    assert len(run(cfg)) == 13


@pytest.mark.parametrize(
    "text",
    [
        "[bogus]\nx = 1\n",
        "[problem]\ncolour = red\n",
        "[problem]\nproblem = lih\n",
        "[problem]\nproblem = file\n",
        "[run]\niters = -3\n",
        "[problem]\nentanglement = ring\n",
    ],
)
def test_bad_configs(text):
    with pytest.raises(ValueError):
        load_config(text, is_text=True)


def test_file_problem_qubit_mismatch(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("1.0 ZZ\n", encoding="utf-8")
    with pytest.raises(ValueError):
        run(RunConfig(problem="file", hamiltonian=str(path), qubits=3, iters=1))
    trace = run(RunConfig(problem="file", hamiltonian=str(path), iters=1, depth=1))
    assert trace.energies[0] == pytest.approx(1.0)


def test_errors_carry_run_context():
    with pytest.raises(RuntimeError, match="h2/gd"):
        run(RunConfig(problem="h2", optimizer="gd", lr=-1.0, iters=2))


def test_summarize_table():
    a = run(RunConfig(problem="h2", optimizer="gd", iters=40))
    b = run(RunConfig(problem="h2", optimizer="ngd", iters=40))
    text = summarize([a, b], thresholds=[-0.25], reference=-0.8)
    lines = text.splitlines()
    assert lines[0].split()[:2] == ["run", "final"]
    assert "h2/gd" in lines[1] and "h2/ngd" in lines[2]
    assert lines[1].split()[-1] == "-"
    assert lines[2].split()[-1] == str(iterations_to_threshold(b, -0.25))
    assert lines[-1].startswith("reference energy")
