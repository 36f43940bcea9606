import numpy as np
import pytest

from normgrad.ansatz import (
    FULL,
    FULL_ANGLE,
    LAYER_MAJOR,
    PRODUCT_RX,
    QUBIT_MAJOR,
    AnsatzSpec,
    build,
)
from normgrad.statevector import apply_circuit, zero_state


@pytest.mark.parametrize(
    "spec, n_params, n_cx",
    [
        (AnsatzSpec(n_qubits=2, depth=1), 4, 1),
        (AnsatzSpec(n_qubits=4, depth=2), 12, 6),
        (AnsatzSpec(PRODUCT_RX, n_qubits=8), 8, 0),
        (AnsatzSpec(n_qubits=4, depth=2, entanglement=FULL), 12, 12),
        (AnsatzSpec(n_qubits=3, depth=0), 3, 0),
    ],
)
def test_counts(spec, n_params, n_cx):
    c = build(spec)
    assert c.n_params == spec.n_params == n_params
    assert c.count("CX") == n_cx


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("depth", range(0, 4))
def test_parameter_count_formula(n, depth):
    assert build(AnsatzSpec(n_qubits=n, depth=depth)).n_params == (depth + 1) * n


@pytest.mark.parametrize("order", [LAYER_MAJOR, QUBIT_MAJOR])
def test_zero_angles_leave_zero_state(order):
    c = build(AnsatzSpec(n_qubits=4, depth=3, entanglement=FULL, param_order=order))
    np.testing.assert_array_equal(apply_circuit(c, np.zeros(c.n_params)), zero_state(4))


def test_layer_structure():
    c = build(AnsatzSpec(n_qubits=3, depth=1))
    kinds = [(g.kind, g.target, g.control) for g in c.gates]
    assert kinds == [
        ("RY", 0, None), ("RY", 1, None), ("RY", 2, None),
        ("CX", 1, 0), ("CX", 2, 1),
        ("RY", 0, None), ("RY", 1, None), ("RY", 2, None),
    ]


def test_slot_orders():
    layer = build(AnsatzSpec(n_qubits=2, depth=1))
    qubit = build(AnsatzSpec(n_qubits=2, depth=1, param_order=QUBIT_MAJOR))
    rotations = lambda c: [(g.target, g.slot) for g in c.gates if g.parameterized]
    assert rotations(layer) == [(0, 0), (1, 1), (0, 2), (1, 3)]
    assert rotations(qubit) == [(0, 0), (1, 2), (0, 1), (1, 3)]


def test_full_angle_scale():
    c = build(AnsatzSpec(n_qubits=2, depth=1, angle=FULL_ANGLE))
    assert {g.scale for g in c.gates if g.parameterized} == {2.0}


@pytest.mark.parametrize(
    "spec",
    [
        AnsatzSpec(n_qubits=0),
        AnsatzSpec(depth=-1),
        AnsatzSpec(family="ucc"),
        AnsatzSpec(entanglement="ring"),
        AnsatzSpec(angle="quarter"),
        AnsatzSpec(param_order="random"),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(ValueError):
        build(spec)
