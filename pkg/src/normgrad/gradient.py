"""Cost functions and their gradients (parameter-shift and finite differences)."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .pauli import Hamiltonian, expectation
from .statevector import Circuit, apply_circuit


def check_parameters(theta, n_params: int) -> np.ndarray:
    """Return ``theta`` as a finite float vector of length ``n_params``."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.shape[0] != n_params:
        raise ValueError(
            f"expected a parameter vector of length {n_params}, got shape {theta.shape}"
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameter vector contains non-finite entries")
    return theta


class Objective:
    """Deterministic scalar cost with an evaluation counter."""

    n_params: int

    def __init__(self):
        self.eval_count = 0

    def __call__(self, theta) -> float:
        return self.evaluate(theta)

    def evaluate(self, theta) -> float:
        theta = check_parameters(theta, self.n_params)
        self.eval_count += 1
        return self._cost(theta)

    def gradient(self, theta) -> np.ndarray:
        """Gradient used by the optimization pipeline."""
        raise NotImplementedError

    def _cost(self, theta: np.ndarray) -> float:
        raise NotImplementedError


class CircuitObjective(Objective):
    """Energy ``<psi(theta)|H|psi(theta)>`` of a circuit started from ``|0..0>``."""

    def __init__(self, circuit: Circuit, hamiltonian: Optional[Hamiltonian] = None):
        super().__init__()
        if hamiltonian is not None and hamiltonian.n_qubits != circuit.n_qubits:
            raise ValueError(
                f"Hamiltonian acts on {hamiltonian.n_qubits} qubits, "
                f"circuit on {circuit.n_qubits}"
            )
        self.circuit = circuit
        self.hamiltonian = hamiltonian
        self.n_params = circuit.n_params

    def state(self, theta) -> np.ndarray:
        return apply_circuit(self.circuit, check_parameters(theta, self.n_params))

    def measure(self, psi: np.ndarray) -> float:
        return expectation(self.hamiltonian, psi)

    def _cost(self, theta, gate_offsets=None):
        return self.measure(apply_circuit(self.circuit, theta, gate_offsets=gate_offsets))

    def shifted_cost(self, theta, gate_position: int, shift: float) -> float:
        self.eval_count += 1
        return self._cost(theta, {gate_position: shift})

    def gradient(self, theta) -> np.ndarray:
        return parameter_shift_gradient(self, theta)


class FunctionObjective(Objective):
    """Closed-form cost with an analytic gradient."""

    def __init__(
        self,
        fun: Callable[[np.ndarray], float],
        grad: Callable[[np.ndarray], np.ndarray],
        n_params: int,
    ):
        super().__init__()
        self.fun = fun
        self.grad = grad
        self.n_params = n_params

    def _cost(self, theta):
        return float(self.fun(theta))

    def gradient(self, theta) -> np.ndarray:
        return np.asarray(self.grad(check_parameters(theta, self.n_params)), dtype=float)


def parameter_shift_gradient(obj: CircuitObjective, theta) -> np.ndarray:
    """Exact gradient via +-pi/2 shifts of each parameterized gate occurrence.

    Costs two evaluations per occurrence; occurrences sharing a slot add up,
    each weighted by its angle scale.
    """
    theta = check_parameters(theta, obj.n_params)
    grad = np.zeros(obj.n_params)
    for pos, gate in enumerate(obj.circuit.gates):
        if not gate.parameterized:
            continue
        plus = obj.shifted_cost(theta, pos, np.pi / 2)
        minus = obj.shifted_cost(theta, pos, -np.pi / 2)
        grad[gate.slot] += gate.scale * (plus - minus) / 2
    return grad


def finite_difference_gradient(obj: Callable, theta, h: float = 1e-5) -> np.ndarray:
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h}")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.shape[0]):
        e = np.zeros_like(theta)
        e[k] = h
        grad[k] = (obj(theta + e) - obj(theta - e)) / (2 * h)
    return grad
