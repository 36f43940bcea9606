"""Experiment orchestration: run an optimizer on a problem and record a trace.

Trace rows are iterates. Row ``t`` holds the energy at ``theta_t``, the norm
of the gradient evaluated while stepping away from it (at the look-ahead
point for NAG), the distance from the previous row's iterate, the cumulative
number of cost evaluations and, when timing is enabled, elapsed wall-clock
milliseconds. Historical NGD provisional points are ordinary rows, so every
row costs exactly one gradient.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .ansatz import FULL_ANGLE, HALF_ANGLE, LAYER_MAJOR, QUBIT_MAJOR, AnsatzSpec
from .gradient import Objective
from .optimizers import Optimizer, VanishingGradient, make_optimizer
from .pauli import load_hamiltonian
from .problems import (
    BENCHMARK_ANGLE,
    BENCHMARK_ORDER,
    ProblemInstance,
    from_hamiltonian,
    h2_toy,
    initial_vector,
    narrow_gorge,
    tfim,
)

CSV_COLUMNS = ("iter", "energy", "grad_norm", "step_norm", "evals", "ms")

STATUS_COMPLETED = "completed"
STATUS_VANISHING = "vanishing_gradient"

PROBLEMS = ("narrow_gorge", "h2", "tfim", "file")


@dataclass
class EnergyTrace:
    rows: list = field(default_factory=list)
    status: str = STATUS_COMPLETED
    params: Optional[np.ndarray] = None
    label: str = ""

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        i = CSV_COLUMNS.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    @property
    def energies(self) -> np.ndarray:
        return self.column("energy")

    @property
    def grad_norms(self) -> np.ndarray:
        return self.column("grad_norm")

    @property
    def step_norms(self) -> np.ndarray:
        return self.column("step_norm")


def minimize(
    objective: Objective,
    optimizer: Optimizer,
    x0,
    max_iter: int,
    record_gradient_norm: bool = False,
    record_time: bool = False,
    label: str = "",
) -> EnergyTrace:
    """Run ``max_iter`` optimizer steps from ``x0`` and trace every iterate.

    Stops early with status ``vanishing_gradient`` when a normalized method
    meets a zero gradient; the point it reports becomes the final row.
    ``record_gradient_norm`` spends one extra gradient on the final iterate.
    """
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    start = time.perf_counter()
    state = optimizer.init_state(x0)
    trace = EnergyTrace(label=label)
    prev = state.x.copy()

    def elapsed():
        return (time.perf_counter() - start) * 1e3 if record_time else 0.0

    def add_row(t, x, grad_norm):
        energy = objective.evaluate(x)
        step = float(np.linalg.norm(x - prev)) if t else 0.0
        trace.rows.append([t, energy, grad_norm, step, objective.eval_count, 0.0])

    for t in range(max_iter):
        x_t = state.x.copy()
        add_row(t, x_t, math.nan)
        try:
            state = optimizer.step(state, objective.gradient)
        except VanishingGradient as exc:
            trace.rows[-1][2] = float(exc.norm)
            trace.status = STATUS_VANISHING
            point = x_t if exc.point is None else exc.point
            if not np.array_equal(point, x_t):
                prev = x_t
                add_row(t + 1, point, math.nan)
            trace.rows[-1][5] = elapsed()
            trace.params = point.copy()
            return trace
        trace.rows[-1][2] = state.grad_norm
        trace.rows[-1][4] = objective.eval_count
        trace.rows[-1][5] = elapsed()
        prev = x_t

    add_row(max_iter, state.x, math.nan)
    if record_gradient_norm:
        trace.rows[-1][2] = float(np.linalg.norm(objective.gradient(state.x)))
        trace.rows[-1][4] = objective.eval_count
    trace.rows[-1][5] = elapsed()
    trace.params = state.x.copy()
    return trace


def iterations_to_threshold(trace: EnergyTrace, threshold: float) -> Optional[int]:
    for row in trace.rows:
        if row[1] <= threshold:
            return int(row[0])
    return None


# --- configuration ---------------------------------------------------------


@dataclass
class RunConfig:
    problem: str = "h2"
    qubits: Optional[int] = None
    depth: Optional[int] = None
    entanglement: str = "linear"
    angle: str = BENCHMARK_ANGLE
    param_order: str = BENCHMARK_ORDER
    hamiltonian: Optional[str] = None
    init: Optional[str] = None
    optimizer: str = "ngd"
    lr: float = 0.05
    momentum: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    m: int = 2
    k: float = -1000.0
    norm_tolerance: float = 1e-12
    iters: Optional[int] = None
    record_gradient_norm: bool = False
    record_time: bool = False
    seed: int = 0
    out: Optional[str] = None

    def validate(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}; choose from {PROBLEMS}")
        if self.problem == "file" and not self.hamiltonian:
            raise ValueError("problem 'file' needs a Hamiltonian path")
        if self.iters is not None and self.iters < 0:
            raise ValueError("iters must be >= 0")
        if self.entanglement not in ("linear", "full"):
            raise ValueError("entanglement must be 'linear' or 'full'")
        if self.angle not in (HALF_ANGLE, FULL_ANGLE):
            raise ValueError("angle must be 'half' or 'full'")
        if self.param_order not in (LAYER_MAJOR, QUBIT_MAJOR):
            raise ValueError("param_order must be 'layer' or 'qubit'")
        return self


_SECTIONS = {
    "problem": (
        "problem", "qubits", "depth", "entanglement", "angle", "param_order", "hamiltonian",
        "init",
    ),
    "optimizer": (
        "optimizer", "lr", "momentum", "beta1", "beta2", "adam_epsilon", "m", "k",
        "norm_tolerance",
    ),
    "run": ("iters", "record_gradient_norm", "record_time", "seed", "out"),
}


def _coerce(name: str, value: str):
    ftype = {f.name: f.type for f in dataclasses.fields(RunConfig)}[name]
    if "bool" in ftype:
        return value.strip().lower() in ("1", "true", "yes", "on")
    if "int" in ftype:
        return int(value)
    if "float" in ftype:
        return float(value)
    return value.strip()


def load_config(path_or_text: str, is_text: bool = False) -> RunConfig:
    """Read an INI-style config with ``[problem]``, ``[optimizer]`` and ``[run]``."""
    parser = configparser.ConfigParser()
    if is_text:
        parser.read_string(path_or_text)
    else:
        with open(path_or_text, encoding="utf-8") as fh:
            parser.read_file(fh)
    values = {}
    for section in parser.sections():
        allowed = _SECTIONS.get(section)
        if allowed is None:
            raise ValueError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ValueError(f"unknown key {key!r} in [{section}]")
            values[key] = _coerce(key, raw)
    return RunConfig(**values).validate()


def build_problem(config: RunConfig) -> ProblemInstance:
    if config.problem == "narrow_gorge":
        problem = narrow_gorge(config.qubits or 8)
    elif config.problem == "h2":
        problem = h2_toy()
    elif config.problem == "tfim":
        problem = tfim(
            config.qubits or 8,
            2 if config.depth is None else config.depth,
            config.entanglement,
            config.angle,
            config.param_order,
        )
    else:
        h = load_hamiltonian(config.hamiltonian)
        if config.qubits is not None and config.qubits != h.n_qubits:
            raise ValueError(
                f"--qubits {config.qubits} does not match the {h.n_qubits}-qubit Hamiltonian"
            )
        spec = AnsatzSpec(
            n_qubits=h.n_qubits,
            depth=2 if config.depth is None else config.depth,
            entanglement=config.entanglement,
            angle=config.angle,
            param_order=config.param_order,
        )
        problem = from_hamiltonian(h, spec, "zeros", name=config.hamiltonian)
    if config.init is not None:
        n = problem.objective.n_params
        if config.init.strip().lower() == "random":
            rng = np.random.default_rng(config.seed)
            problem.initial_params = rng.uniform(0, 2 * np.pi, n)
        else:
            problem.initial_params = initial_vector(config.init, n)
    return problem


def build_optimizer(config: RunConfig) -> Optimizer:
    return make_optimizer(
        config.optimizer,
        config.lr,
        momentum=config.momentum,
        beta1=config.beta1,
        beta2=config.beta2,
        adam_epsilon=config.adam_epsilon,
        history_length=config.m,
        lower_bound=config.k,
        norm_tolerance=config.norm_tolerance,
    )


def run(config: RunConfig) -> EnergyTrace:
    config.validate()
    problem = build_problem(config)
    optimizer = build_optimizer(config)
    iters = problem.max_iter if config.iters is None else config.iters
    label = f"{problem.name}/{config.optimizer}"
    try:
        return minimize(
            problem.objective,
            optimizer,
            problem.initial_params,
            iters,
            record_gradient_norm=config.record_gradient_norm,
            record_time=config.record_time,
            label=label,
        )
    except Exception as exc:
        raise RuntimeError(f"run {label} failed: {exc}") from exc


# --- output ----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def trace_to_csv(trace: EnergyTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in trace.rows:
        writer.writerow([_fmt(row[0]), *map(_fmt, row[1:4]), _fmt(row[4]), _fmt(row[5])])
    return buf.getvalue()


def write_csv(trace: EnergyTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_to_csv(trace))


def read_csv(path) -> EnergyTrace:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        rows = [
            [int(r[0]), float(r[1]), float(r[2]), float(r[3]), int(r[4]), float(r[5])]
            for r in reader
        ]
    return EnergyTrace(rows=rows)


def summarize(
    traces: Iterable[EnergyTrace],
    thresholds: Sequence[float] = (),
    reference: Optional[float] = None,
) -> str:
    lines = []
    header = f"{'run':<32} {'final':>12} {'best':>12} {'rows':>6} {'status':<20}"
    for th in thresholds:
        header += f" {'<=' + format(th, 'g'):>10}"
    lines.append(header)
    for i, trace in enumerate(traces):
        e = trace.energies
        name = trace.label or f"trace{i}"
        final = e[-1] if e.size else math.nan
        best = e.min() if e.size else math.nan
        line = f"{name:<32} {final:>12.6f} {best:>12.6f} {len(trace):>6} {trace.status:<20}"
        for th in thresholds:
            hit = iterations_to_threshold(trace, th)
            line += f" {'-' if hit is None else hit:>10}"
        lines.append(line)
    if reference is not None:
        lines.append(f"reference energy: {reference:.6f}")
    return "\n".join(lines) + "\n"
