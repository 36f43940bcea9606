"""Circuit families: hardware-efficient Ry ansatz and the product-RX ansatz."""

from __future__ import annotations

from dataclasses import dataclass

from .statevector import Circuit, Gate

RY_HARDWARE_EFFICIENT = "ry"
PRODUCT_RX = "product_rx"
LINEAR = "linear"
FULL = "full"
HALF_ANGLE = "half"  # exp(-i theta P / 2)
FULL_ANGLE = "full"  # exp(-i theta P)
LAYER_MAJOR = "layer"
QUBIT_MAJOR = "qubit"


@dataclass(frozen=True)
class AnsatzSpec:
    family: str = RY_HARDWARE_EFFICIENT
    n_qubits: int = 2
    depth: int = 1
    entanglement: str = LINEAR
    angle: str = HALF_ANGLE
    param_order: str = LAYER_MAJOR

    @property
    def n_params(self) -> int:
        if self.family == PRODUCT_RX:
            return self.n_qubits
        return (self.depth + 1) * self.n_qubits


def _entangler_pairs(n: int, entanglement: str) -> list[tuple[int, int]]:
    if entanglement == LINEAR:
        return [(i, i + 1) for i in range(n - 1)]
    if entanglement == FULL:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    raise ValueError(f"unknown entanglement {entanglement!r}")


def build(spec: AnsatzSpec) -> Circuit:
    """Build the circuit for ``spec``.

    The Ry family is ``depth`` repetitions of an RY layer followed by a CX
    layer, closed by one more RY layer. With ``param_order="layer"`` slots
    run through each layer, qubit 0 first; with ``"qubit"`` they run along
    each qubit's wire.
    """
    n = spec.n_qubits
    if n < 1:
        raise ValueError("n_qubits must be >= 1")
    scale = {HALF_ANGLE: 1.0, FULL_ANGLE: 2.0}.get(spec.angle)
    if scale is None:
        raise ValueError(f"unknown angle convention {spec.angle!r}")
    if spec.family == PRODUCT_RX:
        return Circuit(n, tuple(Gate("RX", k, slot=k, scale=scale) for k in range(n)))
    if spec.family != RY_HARDWARE_EFFICIENT:
        raise ValueError(f"unknown ansatz family {spec.family!r}")
    if spec.depth < 0:
        raise ValueError("depth must be >= 0")
    if spec.param_order not in (LAYER_MAJOR, QUBIT_MAJOR):
        raise ValueError(f"unknown parameter order {spec.param_order!r}")
    pairs = _entangler_pairs(n, spec.entanglement)
    layers = spec.depth + 1
    gates = []
    for layer in range(layers):
        for q in range(n):
            slot = layer * n + q if spec.param_order == LAYER_MAJOR else q * layers + layer
            gates.append(Gate("RY", q, slot=slot, scale=scale))
        if layer < spec.depth:
            gates.extend(Gate("CX", t, control=c) for c, t in pairs)
    return Circuit(n, tuple(gates))
