"""First-order optimizers behind one stepping contract.

Every optimizer is a scikit-learn style estimator (``get_params`` /
``set_params`` / ``clone`` work) with two methods::

    state = opt.init_state(x0)
    state = opt.step(state, grad_fn)    # one gradient evaluation per call

``grad_fn`` maps a point to the gradient there. Steps mutate and return
``state``. ``state.grad_norm`` holds the norm of the gradient consumed by the
last step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from sklearn.base import BaseEstimator

from .qp import DEFAULT_LOWER_BOUND, build_qp, solve_box_qp

GradFn = Callable[[np.ndarray], np.ndarray]

DEFAULT_NORM_TOLERANCE = 1e-12


class VanishingGradient(ArithmeticError):
    """The gradient norm fell below the tolerance; the direction is undefined."""

    def __init__(self, norm: float, point: Optional[np.ndarray] = None):
        super().__init__(f"gradient norm {norm:.3e} below tolerance")
        self.norm = norm
        self.point = point


def normalize(g, tol: float = DEFAULT_NORM_TOLERANCE) -> np.ndarray:
    if not tol > 0:
        raise ValueError("tol must be positive")
    g = np.asarray(g, dtype=float)
    norm = np.linalg.norm(g)
    if norm < tol:
        raise VanishingGradient(norm)
    return g / norm


def nag_coefficients(rho_prev: float) -> tuple[float, float]:
    """Return ``(rho_t, gamma_t)`` from ``rho_{t-1}``."""
    rho = (1.0 + np.sqrt(1.0 + 4.0 * rho_prev * rho_prev)) / 2.0
    return rho, (rho_prev - 1.0) / rho


@dataclass
class OptimizerState:
    x: np.ndarray
    t: int = 0
    grad_norm: float = float("nan")
    # momentum / adam first moment
    m: Optional[np.ndarray] = None
    # adam second moment
    v: Optional[np.ndarray] = None
    # NAG
    rho: float = 1.0
    gamma: float = 0.0
    x_prev: Optional[np.ndarray] = None
    # historical NGD
    anchor: Optional[np.ndarray] = None
    history: list = field(default_factory=list)
    rates: Optional[np.ndarray] = None


class Optimizer(BaseEstimator):
    name = "base"
    normalized = False

    def init_state(self, x0) -> OptimizerState:
        self._validate()
        x0 = np.array(x0, dtype=float)
        if x0.ndim != 1:
            raise ValueError("x0 must be a 1-D parameter vector")
        return OptimizerState(x=x0)

    def step(self, state: OptimizerState, grad_fn: GradFn) -> OptimizerState:
        raise NotImplementedError

    def _validate(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        tol = getattr(self, "norm_tolerance", None)
        if tol is not None and not tol > 0:
            raise ValueError("norm_tolerance must be positive")

    def _direction(self, g: np.ndarray, state: OptimizerState) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        state.grad_norm = float(np.linalg.norm(g))
        if not self.normalized:
            return g
        try:
            return normalize(g, self.norm_tolerance)
        except VanishingGradient as exc:
            exc.point = state.x.copy()
            raise


class GradientDescent(Optimizer):
    name = "gd"

    def __init__(self, learning_rate: float = 0.05):
        self.learning_rate = learning_rate

    def step(self, state, grad_fn):
        d = self._direction(grad_fn(state.x), state)
        state.x = state.x - self.learning_rate * d
        state.t += 1
        return state


class NormalizedGD(GradientDescent):
    """Fixed-length steps along the unit gradient direction."""

    name = "ngd"
    normalized = True

    def __init__(
        self, learning_rate: float = 0.05, norm_tolerance: float = DEFAULT_NORM_TOLERANCE
    ):
        self.learning_rate = learning_rate
        self.norm_tolerance = norm_tolerance


class Momentum(Optimizer):
    name = "momentum"

    def __init__(self, learning_rate: float = 0.05, momentum: float = 0.9):
        self.learning_rate = learning_rate
        self.momentum = momentum

    def _validate(self):
        super()._validate()
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")

    def step(self, state, grad_fn):
        if state.m is None:
            state.m = np.zeros_like(state.x)
        g = self._direction(grad_fn(state.x), state)
        state.m = self.momentum * state.m - self.learning_rate * g
        state.x = state.x + state.m
        state.t += 1
        return state


class NesterovAG(Optimizer):
    """Nesterov's accelerated gradient with the rho/gamma recursion, rho_0 = 1.

    ``state.rho`` and ``state.gamma`` hold rho_t and gamma_t of the last step.
    """

    name = "nag"

    def __init__(self, learning_rate: float = 0.05):
        self.learning_rate = learning_rate

    def step(self, state, grad_fn):
        if state.x_prev is None:
            state.x_prev = state.x.copy()
        if state.t > 0:
            # step t uses gamma_t; at t = 0 the displacement x_0 - x_{-1} is zero
            state.rho, state.gamma = nag_coefficients(state.rho)
        y = state.x + state.gamma * (state.x - state.x_prev)
        g = self._direction(grad_fn(y), state)
        state.x_prev = state.x
        state.x = y - self.learning_rate * g
        state.t += 1
        return state


class NormalizedNAG(NesterovAG):
    """NAG whose look-ahead gradient is normalized before the step."""

    name = "nnag"
    normalized = True

    def __init__(
        self, learning_rate: float = 0.05, norm_tolerance: float = DEFAULT_NORM_TOLERANCE
    ):
        self.learning_rate = learning_rate
        self.norm_tolerance = norm_tolerance


class Adam(Optimizer):
    name = "adam"

    def __init__(
        self,
        learning_rate: float = 0.05,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon

    def _validate(self):
        super()._validate()
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def step(self, state, grad_fn):
        if state.m is None:
            state.m = np.zeros_like(state.x)
            state.v = np.zeros_like(state.x)
        g = self._direction(grad_fn(state.x), state)
        state.m = self.beta1 * state.m + (1 - self.beta1) * g
        state.v = self.beta2 * state.v + (1 - self.beta2) * g * g
        m_hat = state.m / (1 - self.beta1 ** (state.t + 1))
        v_hat = state.v / (1 - self.beta2 ** (state.t + 1))
        state.x = state.x - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)
        state.t += 1
        return state


class HistoricalNGD(Optimizer):
    """NGD that recombines a block of ``history_length`` normalized gradients.

    Within a block the first ``m - 1`` steps are ordinary NGD steps from the
    anchor; the m-th gradient triggers a jump from the anchor with learning
    rates from the box QP. Blocks do not overlap. ``history_length=1``
    reproduces :class:`NormalizedGD` exactly.
    """

    name = "ngdm"
    normalized = True

    def __init__(
        self,
        learning_rate: float = 0.05,
        history_length: int = 2,
        lower_bound: float = DEFAULT_LOWER_BOUND,
        norm_tolerance: float = DEFAULT_NORM_TOLERANCE,
    ):
        self.learning_rate = learning_rate
        self.history_length = history_length
        self.lower_bound = lower_bound
        self.norm_tolerance = norm_tolerance

    def _validate(self):
        super()._validate()
        if int(self.history_length) != self.history_length or self.history_length < 1:
            raise ValueError("history_length must be a positive integer")
        if not self.lower_bound < 0:
            raise ValueError("lower_bound must be negative")

    def init_state(self, x0):
        state = super().init_state(x0)
        state.anchor = state.x.copy()
        return state

    def step(self, state, grad_fn):
        try:
            ghat = self._direction(grad_fn(state.x), state)
        except VanishingGradient as exc:
            # abandon the block and report its anchor
            state.x = state.anchor.copy()
            state.history.clear()
            exc.point = state.x.copy()
            raise
        state.history.append(ghat)
        if len(state.history) < self.history_length:
            state.x = state.x - self.learning_rate * ghat
        else:
            qp = build_qp(state.history, self.learning_rate, self.lower_bound)
            rates = solve_box_qp(qp)
            state.rates = rates
            state.x = state.anchor + rates @ np.array(state.history)
            state.anchor = state.x.copy()
            state.history.clear()
        state.t += 1
        return state


OPTIMIZERS = {
    "gd": GradientDescent,
    "momentum": Momentum,
    "nag": NesterovAG,
    "adam": Adam,
    "ngd": NormalizedGD,
    "nnag": NormalizedNAG,
    "ngdm": HistoricalNGD,
}


def make_optimizer(
    name: str,
    learning_rate: float = 0.05,
    *,
    momentum: float = 0.9,
    beta1: float = 0.9,
    beta2: float = 0.999,
    adam_epsilon: float = 1e-8,
    history_length: int = 2,
    lower_bound: float = DEFAULT_LOWER_BOUND,
    norm_tolerance: float = DEFAULT_NORM_TOLERANCE,
) -> Optimizer:
    """Instantiate an optimizer from its short name (``ngd2`` means ``ngdm`` with m=2)."""
    key = name.lower()
    if key.startswith("ngd") and key[3:].isdigit():
        key, history_length = "ngdm", int(key[3:])
    if key == "gd":
        return GradientDescent(learning_rate)
    if key == "ngd":
        return NormalizedGD(learning_rate, norm_tolerance)
    if key == "momentum":
        return Momentum(learning_rate, momentum)
    if key == "nag":
        return NesterovAG(learning_rate)
    if key == "nnag":
        return NormalizedNAG(learning_rate, norm_tolerance)
    if key == "adam":
        return Adam(learning_rate, beta1, beta2, adam_epsilon)
    if key == "ngdm":
        return HistoricalNGD(learning_rate, history_length, lower_bound, norm_tolerance)
    raise ValueError(f"unknown optimizer {name!r}; choose from {sorted(OPTIMIZERS)}")
