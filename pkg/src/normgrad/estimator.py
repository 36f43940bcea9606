"""scikit-learn style front end for variational energy minimization."""

from __future__ import annotations

from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .ansatz import AnsatzSpec
from .optimizers import NormalizedGD, Optimizer
from .pauli import Hamiltonian
from .problems import ProblemInstance, from_hamiltonian
from .runner import STATUS_COMPLETED, EnergyTrace, minimize


class VQE(BaseEstimator):
    """Minimize ``<psi(theta)|H|psi(theta)>`` with a first-order optimizer.

    ``fit`` accepts either a :class:`ProblemInstance` (its circuit and start
    point are used) or a :class:`Hamiltonian` (built with ``ansatz`` and
    ``init``). Nested parameters work as usual, e.g.
    ``VQE(optimizer=NormalizedGD()).set_params(optimizer__learning_rate=0.1)``.

    Attributes set by ``fit``: ``params_``, ``energy_``, ``trace_``,
    ``status_``, ``n_evals_``, ``reference_energy_``.
    """

    def __init__(
        self,
        optimizer: Optional[Optimizer] = None,
        max_iter: Optional[int] = None,
        ansatz: Optional[AnsatzSpec] = None,
        init: Union[str, np.ndarray, None] = "zeros",
        record_gradient_norm: bool = False,
    ):
        self.optimizer = optimizer
        self.max_iter = max_iter
        self.ansatz = ansatz
        self.init = init
        self.record_gradient_norm = record_gradient_norm

    def _problem(self, X) -> ProblemInstance:
        if isinstance(X, ProblemInstance):
            return X
        if isinstance(X, Hamiltonian):
            spec = self.ansatz or AnsatzSpec(n_qubits=X.n_qubits, depth=2)
            return from_hamiltonian(X, spec, self.init)
        raise TypeError(f"expected a ProblemInstance or Hamiltonian, got {type(X).__name__}")

    def fit(self, X, y=None):
        problem = self._problem(X)
        optimizer = self.optimizer if self.optimizer is not None else NormalizedGD()
        max_iter = problem.max_iter if self.max_iter is None else self.max_iter
        start = problem.objective.eval_count
        trace: EnergyTrace = minimize(
            problem.objective,
            optimizer,
            problem.initial_params,
            max_iter,
            record_gradient_norm=self.record_gradient_norm,
            label=f"{problem.name}/{getattr(optimizer, 'name', type(optimizer).__name__)}",
        )
        self.trace_ = trace
        self.params_ = trace.params
        self.energy_ = float(trace.rows[-1][1])
        self.status_ = trace.status
        self.n_evals_ = problem.objective.eval_count - start
        self.reference_energy_ = problem.reference_energy
        self.objective_ = problem.objective
        return self

    @property
    def converged_(self) -> bool:
        check_is_fitted(self, "trace_")
        return self.status_ == STATUS_COMPLETED

    def predict(self, thetas) -> np.ndarray:
        """Energies of the fitted objective at each row of ``thetas``."""
        check_is_fitted(self, "objective_")
        thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
        return np.array([self.objective_.evaluate(t) for t in thetas])

    def score(self, X=None, y=None) -> float:
        """Negative final energy, so larger is better."""
        check_is_fitted(self, "energy_")
        return -self.energy_
