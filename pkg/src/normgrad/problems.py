"""Benchmark problem instances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .ansatz import FULL_ANGLE, PRODUCT_RX, QUBIT_MAJOR, AnsatzSpec, build
from .gradient import CircuitObjective, FunctionObjective, Objective
from .pauli import (
    Hamiltonian,
    ground_energy_exact,
    h2_hamiltonian,
    load_hamiltonian,
    spectrum,
    tfim_hamiltonian,
)

H2_INITIAL = (7 * np.pi / 32, np.pi / 2, 0.0, 0.0)

# Ry convention for the chemistry-style instances: exp(-i theta Y) rotations,
# slots numbered along each qubit's wire. Under it the H2 start point sits on
# the first-excited plateau and the all-pi/2 TFIM start has a gradient norm
# well above one.
BENCHMARK_ANGLE = FULL_ANGLE
BENCHMARK_ORDER = QUBIT_MAJOR
H2_ANSATZ = AnsatzSpec(n_qubits=2, depth=1, angle=BENCHMARK_ANGLE, param_order=BENCHMARK_ORDER)


@dataclass
class ProblemInstance:
    name: str
    objective: Objective
    initial_params: np.ndarray
    reference_energy: float
    n_qubits: int
    max_iter: int = 1000

    def __post_init__(self):
        self.initial_params = np.asarray(self.initial_params, dtype=float)
        if self.initial_params.shape != (self.objective.n_params,):
            raise ValueError(
                f"{self.name}: initial vector has length {self.initial_params.size}, "
                f"objective takes {self.objective.n_params}"
            )


class NarrowGorgeObjective(CircuitObjective):
    """Global fidelity cost ``1 - |<0|U(theta)|0>|^2`` for a product of RX gates.

    Closed form: ``1 - prod_k cos^2(theta_k / 2)``.
    """

    def __init__(self, n_qubits: int):
        super().__init__(build(AnsatzSpec(PRODUCT_RX, n_qubits)))

    def measure(self, psi):
        return float(1.0 - abs(psi[0]) ** 2)

    @staticmethod
    def closed_form(theta) -> float:
        theta = np.asarray(theta, dtype=float)
        return float(1.0 - np.prod(np.cos(theta / 2) ** 2))

    @staticmethod
    def analytic_gradient(theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        c2 = np.cos(theta / 2) ** 2
        others = np.array([np.prod(np.delete(c2, k)) for k in range(theta.size)])
        return 0.5 * np.sin(theta) * others


def narrow_gorge(n: int) -> ProblemInstance:
    if not 1 <= n <= 12:
        raise ValueError(f"narrow gorge supports 1 <= n <= 12, got {n}")
    return ProblemInstance(
        name=f"narrow_gorge_{n}",
        objective=NarrowGorgeObjective(n),
        initial_params=np.full(n, np.pi / 2),
        reference_energy=0.0,
        n_qubits=n,
        max_iter=100,
    )


def h2_toy(alpha: float = 0.4, beta: float = 0.2) -> ProblemInstance:
    h = h2_hamiltonian(alpha, beta)
    circuit = build(H2_ANSATZ)
    return ProblemInstance(
        name="h2",
        objective=CircuitObjective(circuit, h),
        initial_params=np.array(H2_INITIAL),
        reference_energy=ground_energy_exact(h),
        n_qubits=2,
    )


def h2_first_excited(alpha: float = 0.4, beta: float = 0.2) -> float:
    return float(spectrum(h2_hamiltonian(alpha, beta))[1])


def tfim(
    n: int,
    depth: int = 2,
    entanglement: str = "linear",
    angle: str = BENCHMARK_ANGLE,
    param_order: str = BENCHMARK_ORDER,
) -> ProblemInstance:
    if not 2 <= n <= 12:
        raise ValueError(f"TFIM supports 2 <= n <= 12, got {n}")
    h = tfim_hamiltonian(n)
    spec = AnsatzSpec(
        n_qubits=n, depth=depth, entanglement=entanglement, angle=angle, param_order=param_order
    )
    circuit = build(spec)
    return ProblemInstance(
        name=f"tfim_{n}",
        objective=CircuitObjective(circuit, h),
        initial_params=np.full(circuit.n_params, np.pi / 2),
        reference_energy=ground_energy_exact(h),
        n_qubits=n,
    )


def initial_vector(policy: Union[str, Sequence[float], None], n_params: int) -> np.ndarray:
    """Resolve ``zeros``, ``pi/2``, a comma-separated list or a sequence."""
    if policy is None or (isinstance(policy, str) and policy.strip() == "zeros"):
        return np.zeros(n_params)
    if isinstance(policy, str):
        text = policy.strip().lower()
        if text in ("pi/2", "halfpi"):
            return np.full(n_params, np.pi / 2)
        values = [_parse_angle(v) for v in text.split(",") if v.strip()]
    else:
        values = [float(v) for v in policy]
    vec = np.array(values, dtype=float)
    if vec.shape != (n_params,):
        raise ValueError(f"initial vector needs {n_params} entries, got {vec.size}")
    return vec


def _parse_angle(text: str) -> float:
    """Parse ``0.3``, ``pi``, ``-pi/2`` or ``7pi/32`` style angles."""
    t = text.strip().replace("*", "").replace(" ", "")
    if "pi" not in t:
        return float(t)
    num, _, den = t.partition("/")
    coeff = num.replace("pi", "")
    factor = {"": 1.0, "+": 1.0, "-": -1.0}.get(coeff)
    if factor is None:
        factor = float(coeff)
    return factor * np.pi / (float(den) if den else 1.0)


def from_file(
    path,
    ansatz_spec: AnsatzSpec,
    init: Union[str, Sequence[float], None] = "zeros",
    name: Optional[str] = None,
) -> ProblemInstance:
    h = load_hamiltonian(path)
    return from_hamiltonian(h, ansatz_spec, init, name or f"file:{path}")


def from_hamiltonian(
    h: Hamiltonian,
    ansatz_spec: AnsatzSpec,
    init: Union[str, Sequence[float], None] = "zeros",
    name: str = "hamiltonian",
) -> ProblemInstance:
    if ansatz_spec.n_qubits != h.n_qubits:
        raise ValueError(
            f"ansatz has {ansatz_spec.n_qubits} qubits, Hamiltonian {h.n_qubits}"
        )
    circuit = build(ansatz_spec)
    return ProblemInstance(
        name=name,
        objective=CircuitObjective(circuit, h),
        initial_params=initial_vector(init, circuit.n_params),
        reference_energy=ground_energy_exact(h) if h.n_qubits <= 12 else float("nan"),
        n_qubits=h.n_qubits,
    )


def synthetic_quadratic(dim: int, x_star=None, x0=None) -> ProblemInstance:
    """``f(x) = 0.5 |x - x*|^2`` with its analytic gradient."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    x_star = np.zeros(dim) if x_star is None else np.asarray(x_star, dtype=float)
    if x_star.shape != (dim,):
        raise ValueError("x_star has the wrong length")
    obj = FunctionObjective(
        lambda x: 0.5 * float(np.sum((x - x_star) ** 2)),
        lambda x: x - x_star,
        dim,
    )
    return ProblemInstance(
        name=f"quadratic_{dim}",
        objective=obj,
        initial_params=np.zeros(dim) if x0 is None else x0,
        reference_energy=0.0,
        n_qubits=0,
    )
