"""Exact statevector simulation of parameterized circuits.

States are plain complex numpy vectors of length ``2**n``. Rotation gates use
the half-angle convention ``R_P(phi) = exp(-i phi P / 2)`` with
``phi = scale * theta[slot]``; ``scale=2`` gives the full-angle gate
``exp(-i theta P)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_QUBITS = 20
ROTATIONS = ("RX", "RY", "RZ")
ENTANGLERS = ("CX", "CZ")


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: Optional[int] = None
    slot: Optional[int] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind in ROTATIONS:
            if self.slot is None or self.control is not None:
                raise ValueError(f"{self.kind} needs a parameter slot and no control")
            if not self.scale > 0:
                raise ValueError("angle scale must be positive")
        elif self.kind in ENTANGLERS:
            if self.control is None or self.slot is not None:
                raise ValueError(f"{self.kind} needs a control and no parameter slot")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def parameterized(self) -> bool:
        return self.slot is not None


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}]")
        for g in self.gates:
            for q in (g.target, g.control):
                if q is not None and not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit index {q} out of range in {g}")
        slots = {g.slot for g in self.gates if g.parameterized}
        if slots != set(range(len(slots))):
            raise ValueError("parameter slots must be 0..n_params-1, each used")

    @property
    def n_params(self) -> int:
        return 1 + max((g.slot for g in self.gates if g.parameterized), default=-1)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)


def zero_state(n: int) -> np.ndarray:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"number of qubits must lie in [1, {MAX_QUBITS}], got {n}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    return psi


def rotation_matrix(kind: str, phi: float) -> np.ndarray:
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    raise ValueError(f"not a rotation: {kind!r}")


def _apply_1q(psi: np.ndarray, n: int, q: int, u: np.ndarray) -> np.ndarray:
    view = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    return np.einsum("ij,ajb->aib", u, view).reshape(-1)


def _apply_controlled(psi: np.ndarray, n: int, gate: Gate) -> np.ndarray:
    out = psi.copy()
    view = out.reshape((2,) * n)
    sel = [slice(None)] * n
    sel[gate.control] = 1
    sub = view[tuple(sel)]  # view with the control axis removed
    t = gate.target - (gate.target > gate.control)
    if gate.kind == "CX":
        sub[...] = np.flip(sub, axis=t).copy()
    else:
        tsel = [slice(None)] * (n - 1)
        tsel[t] = 1
        sub[tuple(tsel)] *= -1
    return out


def apply_gate(
    gate: Gate, psi: np.ndarray, n: int, angle: float = 0.0
) -> np.ndarray:
    if gate.kind in ROTATIONS:
        return _apply_1q(psi, n, gate.target, rotation_matrix(gate.kind, angle))
    return _apply_controlled(psi, n, gate)


def apply_circuit(
    circuit: Circuit,
    theta: Sequence[float],
    psi0: Optional[np.ndarray] = None,
    gate_offsets: Optional[dict[int, float]] = None,
) -> np.ndarray:
    """Apply ``circuit`` at parameters ``theta`` to ``psi0`` (default ``|0..0>``).

    ``gate_offsets`` maps a gate position to a rotation angle added to that
    single occurrence only; the parameter-shift rule uses it for shared slots.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise ValueError(
            f"expected {circuit.n_params} parameters, got shape {theta.shape}"
        )
    n = circuit.n_qubits
    if psi0 is None:
        psi = zero_state(n)
    else:
        psi = np.array(psi0, dtype=complex)
        if psi.shape != (1 << n,):
            raise ValueError(f"state of shape {psi.shape} does not match {n} qubits")
    offsets = gate_offsets or {}
    for pos, gate in enumerate(circuit.gates):
        if gate.parameterized:
            angle = gate.scale * theta[gate.slot] + offsets.get(pos, 0.0)
        else:
            angle = 0.0
        psi = apply_gate(gate, psi, n, angle)
    return psi


def amplitude_zero(psi: np.ndarray) -> complex:
    return complex(psi[0])
