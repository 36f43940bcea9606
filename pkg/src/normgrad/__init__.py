"""Normalized and historical gradient descent for variational quantum eigensolvers."""

from .ansatz import AnsatzSpec, build
from .estimator import VQE
from .gradient import (
    CircuitObjective,
    FunctionObjective,
    finite_difference_gradient,
    parameter_shift_gradient,
)
from .optimizers import (
    Adam,
    GradientDescent,
    HistoricalNGD,
    Momentum,
    NesterovAG,
    NormalizedGD,
    NormalizedNAG,
    VanishingGradient,
    make_optimizer,
    normalize,
)
from .pauli import (
    Hamiltonian,
    PauliTerm,
    dense_matrix,
    expectation,
    ground_energy_exact,
    parse_hamiltonian,
)
from .problems import from_file, h2_toy, narrow_gorge, synthetic_quadratic, tfim
from .qp import build_qp, certified_decrease, ngd2_closed_form, solve_box_qp
from .runner import EnergyTrace, RunConfig, iterations_to_threshold, minimize, run
from .statevector import Circuit, Gate, apply_circuit, zero_state

__version__ = "0.1.0"
