"""Learning-rate subproblem of historical NGD.

Minimize ``h(y) = y^T A y + C y`` over the box ``lower <= y <= 0`` where
``A`` is the Gram matrix of the normalized gradients in a block and
``C[j] = 2 (eps/kappa) (1 + sum_{i<j} <g_i, g_j>)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
DEFAULT_LOWER_BOUND = -1000.0


@dataclass(frozen=True)
class QpSubproblem:
    A: np.ndarray
    C: np.ndarray
    lower: float = DEFAULT_LOWER_BOUND
    upper: float = 0.0

    @property
    def m(self) -> int:
        return self.C.shape[0]

    def objective(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(y @ self.A @ y + self.C @ y)

    def gradient(self, y) -> np.ndarray:
        return 2.0 * self.A @ np.asarray(y, dtype=float) + self.C


def build_qp(
    ghat_history: Sequence[np.ndarray],
    eps_over_kappa: float,
    lower: float = DEFAULT_LOWER_BOUND,
) -> QpSubproblem:
    G = np.array([np.asarray(g, dtype=float) for g in ghat_history])
    if G.ndim != 2 or G.shape[0] == 0:
        raise ValueError("need at least one gradient vector")
    norms = np.linalg.norm(G, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-10):
        raise ValueError(f"gradient history must be unit-norm, got norms {norms}")
    if not lower < 0:
        raise ValueError("lower bound must be negative")
    A = G @ G.T
    A = 0.5 * (A + A.T)
    np.fill_diagonal(A, 1.0)
    m = A.shape[0]
    C = np.array([1.0 + A[:j, j].sum() for j in range(m)])
    return QpSubproblem(A, 2.0 * eps_over_kappa * C, float(lower))


def kkt_residual(qp: QpSubproblem, y) -> float:
    """Largest violation of the box-QP optimality conditions at ``y``."""
    y = np.asarray(y, dtype=float)
    g = qp.gradient(y)
    res = np.abs(g)
    res = np.where(y >= qp.upper, np.maximum(g, 0.0), res)
    res = np.where(y <= qp.lower, np.maximum(-g, 0.0), res)
    infeasible = np.maximum(y - qp.upper, 0.0) + np.maximum(qp.lower - y, 0.0)
    return float(np.max(res + infeasible))


def solve_box_qp(qp: QpSubproblem, tol: float = 1e-12, max_iter: int = 500) -> np.ndarray:
    """Primal active-set method for the box QP with PSD ``A``.

    Coordinates fixed at a bound form the working set. On the free
    coordinates either the Newton step is taken, or, when the reduced
    Hessian is singular and the reduced gradient has a component in its
    null space, the zero-curvature descent ray is followed to the box.
    """
    m = qp.m
    lo, hi = qp.lower, qp.upper
    if not lo < hi:
        raise ValueError("empty box")
    H = 2.0 * qp.A
    scale = max(1.0, float(np.max(np.abs(H))))
    y = np.full(m, hi)
    fixed = np.ones(m, dtype=bool)  # start with every coordinate at the upper bound

    for _ in range(max_iter):
        g = H @ y + qp.C
        free = np.flatnonzero(~fixed)
        p = np.zeros(m)
        if free.size:
            w, V = np.linalg.eigh(H[np.ix_(free, free)])
            nonzero = w > 1e-10 * scale
            coef = V.T @ g[free]
            null_part = V[:, ~nonzero] @ coef[~nonzero]
            if np.linalg.norm(null_part) > tol * max(1.0, np.linalg.norm(g)):
                ray = True
                p[free] = -null_part
            else:
                ray = False
                p[free] = -(V[:, nonzero] @ (coef[nonzero] / w[nonzero]))
        if np.linalg.norm(p) <= tol * max(1.0, np.linalg.norm(y)):
            # stationary on the working set: check multiplier signs
            viol = np.where(y >= hi, g, -g)
            viol[~fixed] = -np.inf
            i = int(np.argmax(viol))
            if viol[i] <= tol * scale:
                break
            fixed[i] = False
            continue
        alpha = np.inf if ray else 1.0
        block = -1
        for i in free:
            if p[i] > 0:
                step = (hi - y[i]) / p[i]
            elif p[i] < 0:
                step = (lo - y[i]) / p[i]
            else:
                continue
            if step < alpha:
                alpha, block = step, i
        y = y + alpha * p
        if block >= 0:
            y[block] = hi if p[block] > 0 else lo
            fixed[block] = True
    return np.clip(y, lo, hi)


def ngd2_closed_form(delta: float, eps_over_kappa: float) -> tuple[float, float]:
    """Two-gradient learning rates for overlap ``delta`` in (-1, 1]."""
    if not -1.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (-1, 1], got {delta}")
    r = eps_over_kappa
    if delta <= GOLDEN:
        d2 = 1.0 - delta * delta
        return -r * (1.0 - delta - delta * delta) / d2, -r / d2
    return 0.0, -r * (1.0 + delta)


def certified_decrease(delta: float, eps_over_kappa: float) -> float:
    """Guaranteed drop of the squared distance to the optimum over two steps."""
    if not -1.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (-1, 1], got {delta}")
    r2 = eps_over_kappa**2
    if delta <= GOLDEN:
        return (2.0 - delta * delta) / (1.0 - delta * delta) * r2
    return (1.0 + delta) ** 2 * r2
