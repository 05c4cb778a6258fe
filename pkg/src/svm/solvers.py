"""Optimizers: SMO for the kernel SVM dual, coordinate descent for L1 linear SVM."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog


logger = structlog.get_logger()

# Floor on the curvature of a two-variable subproblem (non-PSD kernels).
TAU = 1e-12


@dataclass
class DualSolution:
    alpha: np.ndarray
    bias: float
    objective: float
    converged: bool
    n_iter: int
    violation: float


def _rho(y: np.ndarray, grad: np.ndarray, alpha: np.ndarray, c: float) -> float:
    y_grad = y * grad
    upper = alpha >= c
    lower = alpha <= 0
    free = ~(upper | lower)
    if np.any(free):
        return float(y_grad[free].mean())
    ub_mask = (upper & (y < 0)) | (lower & (y > 0))
    lb_mask = (upper & (y > 0)) | (lower & (y < 0))
    ub = y_grad[ub_mask].min() if np.any(ub_mask) else np.inf
    lb = y_grad[lb_mask].max() if np.any(lb_mask) else -np.inf
    return float((ub + lb) / 2)


def smo(
    gram: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float,
    max_iter: int,
    alpha0: Optional[np.ndarray] = None,
) -> DualSolution:
    """Sequential minimal optimization with maximal violating pair selection.

    Solves max sum(a) - 1/2 a'Qa with Q = yy' * K, 0 <= a <= C, y'a = 0.
    Stops when the KKT violation m(a) - M(a) drops below ``tol``.

    Args:
        alpha0: Feasible starting point, e.g. a solution for a smaller C
            scaled by the ratio of the two C values
    """
    n = y.size
    pos = y > 0
    if alpha0 is None:
        alpha = np.zeros(n)
        score = y.astype(float)
    else:
        alpha = np.clip(np.asarray(alpha0, dtype=float), 0.0, c)
        score = y - gram @ (alpha * y)
    up = np.where(pos, alpha < c, alpha > 0)
    low = np.where(pos, alpha > 0, alpha < c)
    converged = False
    violation = np.inf
    iteration = 0

    while iteration < max_iter:
        upper = np.where(up, score, -np.inf)
        lower = np.where(low, score, np.inf)
        i = int(np.argmax(upper))
        j = int(np.argmin(lower))
        violation = float(upper[i] - lower[j])
        if not violation >= tol:
            converged = True
            break
        iteration += 1

        row_i, row_j = gram[i], gram[j]
        eta = row_i[i] + row_j[j] - 2.0 * row_i[j]
        step = violation / max(eta, TAU)
        bound_i = c - alpha[i] if pos[i] else alpha[i]
        bound_j = alpha[j] if pos[j] else c - alpha[j]
        step = min(step, bound_i, bound_j)

        if step == bound_i:
            alpha[i] = c if pos[i] else 0.0
        else:
            alpha[i] += y[i] * step
        if step == bound_j:
            alpha[j] = 0.0 if pos[j] else c
        else:
            alpha[j] -= y[j] * step
        score -= step * (row_i - row_j)

        for k in (i, j):
            if pos[k]:
                up[k], low[k] = alpha[k] < c, alpha[k] > 0
            else:
                up[k], low[k] = alpha[k] > 0, alpha[k] < c

    if not converged:
        logger.warning("SMO hit the iteration cap", max_iter=max_iter, violation=violation)
    grad = -y * score
    objective = float(-0.5 * alpha @ (grad - 1.0))
    return DualSolution(
        alpha=alpha,
        bias=-_rho(y, grad, alpha, c),
        objective=objective,
        converged=converged,
        n_iter=iteration,
        violation=violation,
    )


@dataclass
class PrimalSolution:
    weights: np.ndarray
    bias: float
    objective: float
    converged: bool
    n_iter: int
    violation: float


def _squared_hinge(margins: np.ndarray, c: float) -> float:
    slack = np.maximum(0.0, 1.0 - margins)
    return float(c * np.sum(slack * slack))


def _newton_direction(g: float, h: float, w_j: float) -> float:
    """Minimizer of g*d + h*d^2/2 + |w_j + d|."""
    if g + 1.0 <= h * w_j:
        return -(g + 1.0) / h
    if g - 1.0 >= h * w_j:
        return -(g - 1.0) / h
    return -w_j


def _min_norm_subgradient(g: float, w_j: float) -> float:
    if w_j > 0:
        return abs(g + 1.0)
    if w_j < 0:
        return abs(g - 1.0)
    return max(0.0, abs(g) - 1.0)


def l1_coordinate_descent(
    x: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float,
    max_sweeps: int,
    seed: int,
    start: Optional[tuple[np.ndarray, float]] = None,
) -> PrimalSolution:
    """L1-regularized squared-hinge linear SVM by coordinate Newton descent.

    Minimizes ||w||_1 + C * sum(max(0, 1 - y (w.x + b))^2); the bias is not
    penalized. Each coordinate takes a one-dimensional Newton step on the
    smooth part with the L1 term handled in closed form, followed by an
    Armijo backtracking search. Converges when the largest minimum-norm
    subgradient of a sweep falls below ``tol`` times that of the first sweep
    (of the zero point when started from ``start = (w, b)``).
    """
    n, d = x.shape
    columns = np.column_stack([x, np.ones(n)])
    signed = y[:, np.newaxis] * columns
    squared = columns * columns
    rng = np.random.default_rng(seed)
    initial = None
    if start is None:
        w = np.zeros(d)
        b = 0.0
        margins = np.zeros(n)
    else:
        w = np.array(start[0], dtype=float)
        b = float(start[1])
        margins = y * (x @ w + b)
        g0 = -2.0 * c * (columns.T @ y)
        initial = max(
            float(np.max(np.abs(g0[:d]) - 1.0, initial=0.0)), abs(float(g0[d])), 1e-12
        )
    violation = np.inf
    converged = False
    sweep = 0

    while sweep < max_sweeps:
        sweep += 1
        worst = 0.0
        for j in rng.permutation(d + 1):
            slack = np.maximum(0.0, 1.0 - margins)
            active = slack > 0.0
            g = -2.0 * c * float(signed[:, j] @ slack)
            h = 2.0 * c * float(squared[active, j].sum()) + TAU
            is_bias = j == d
            current = b if is_bias else w[j]

            if is_bias:
                worst = max(worst, abs(g))
                direction = -g / h
                decrease = g * direction
            else:
                worst = max(worst, _min_norm_subgradient(g, current))
                direction = _newton_direction(g, h, current)
                decrease = g * direction + abs(current + direction) - abs(current)
            if direction == 0.0:
                continue

            base = c * float(slack @ slack)
            shift = direction * signed[:, j]
            step = 1.0
            accepted = False
            for _ in range(30):
                penalty = 0.0 if is_bias else abs(current + step * direction) - abs(current)
                change = _squared_hinge(margins + step * shift, c) - base + penalty
                if change <= 0.01 * step * decrease:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                continue

            margins = margins + step * shift
            if is_bias:
                b = current + step * direction
            else:
                w[j] = current + step * direction

        if initial is None:
            initial = max(worst, 1e-12)
        violation = worst
        if worst <= tol * initial:
            converged = True
            break

    if not converged:
        logger.warning("L1 coordinate descent hit the sweep cap", sweeps=max_sweeps)
    return PrimalSolution(
        weights=w,
        bias=b,
        objective=float(np.abs(w).sum()) + _squared_hinge(margins, c),
        converged=converged,
        n_iter=sweep,
        violation=violation,
    )
