"""The student model: regularized primal fits and teaching-quality metrics.

Losses are summed (not averaged) over the training subset, with an
``lam/2 * ||theta||^2`` penalty.  The squared loss is solved in closed form
through the normal equations; the logistic loss with damped Newton steps.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import expit

from .errors import (
    ConvergenceError,
    NumericError,
    ParameterError,
    UndefinedMetricError,
)
from .losses import LOGISTIC, SQUARED, loss_sum, validate_kind

# Newton falls back to a plain gradient step when the Hessian is this
# ill-conditioned.
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Metrics:
    """Flat metric record; serializes to a JSON object with these keys."""

    risk_euclid: float
    risk_half_sq: float
    rho: float
    teaching_ratio: float
    runtime_seconds: float

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def fit_primal(kind, X, y, lam, tol=1e-8, max_iter=100):
    """Minimize ``sum_j loss(theta; x_j, y_j) + lam/2 ||theta||^2``.

    Returns the parameter vector.  An empty subset yields the zero model.
    Raises :class:`ConvergenceError` if the logistic solver exhausts
    ``max_iter`` without driving the gradient norm below ``tol``.
    """
    validate_kind(kind)
    if lam <= 0:
        raise ParameterError(f"lam must be > 0, got {lam}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ParameterError(f"feature matrix must be 2-D, got shape {X.shape}")
    n, d = X.shape
    if n == 0:
        return np.zeros(d)
    if kind == SQUARED:
        gram = X.T @ X + lam * np.eye(d)
        theta = np.linalg.solve(gram, X.T @ y)
        if not np.all(np.isfinite(theta)):
            raise NumericError("normal-equation solve produced non-finite parameters")
        return theta
    return _fit_logistic(X, y, lam, tol, max_iter)


def _fit_logistic(X, y, lam, tol, max_iter):
    n, d = X.shape
    theta = np.zeros(d)
    value = loss_sum(LOGISTIC, theta, X, y) + 0.5 * lam * float(theta @ theta)
    grad_norm = np.inf
    for _ in range(max_iter):
        margins = y * (X @ theta)
        sig = expit(-margins)  # d loss / d margin = -sig
        grad = X.T @ (-y * sig) + lam * theta
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= tol:
            return theta
        curv = sig * (1.0 - sig)
        hess = X.T @ (X * curv[:, None]) + lam * np.eye(d)
        if np.linalg.cond(hess) > _COND_LIMIT:
            direction = -grad
        else:
            direction = -np.linalg.solve(hess, grad)
        slope = float(grad @ direction)
        if slope >= 0:
            direction = -grad
            slope = -grad_norm**2
        step = 1.0
        for _ in range(60):
            cand = theta + step * direction
            cand_value = loss_sum(LOGISTIC, cand, X, y) + 0.5 * lam * float(cand @ cand)
            if cand_value <= value + 1e-4 * step * slope:
                break
            step *= 0.5
        theta = theta + step * direction
        value = loss_sum(LOGISTIC, theta, X, y) + 0.5 * lam * float(theta @ theta)
        if not np.isfinite(value):
            raise NumericError("logistic fit diverged to a non-finite objective")
    raise ConvergenceError(
        f"logistic fit did not reach tol={tol:g} in {max_iter} iterations",
        grad_norm=grad_norm,
    )


def teaching_risk(theta_hat, theta_star):
    """Distance from the learned model to the target: ``(||.||, ||.||^2/2)``."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    theta_star = np.asarray(theta_star, dtype=float)
    if theta_hat.shape != theta_star.shape:
        raise ParameterError(
            f"shape mismatch: {theta_hat.shape} vs {theta_star.shape}"
        )
    diff = theta_hat - theta_star
    euclid = float(np.linalg.norm(diff))
    return euclid, 0.5 * euclid * euclid


def consistency_clf(theta_hat, theta_star, X):
    """Fraction of examples whose predicted signs agree (sign(0) counts as +1)."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] == 0:
        raise ParameterError("consistency is undefined on an empty dataset")
    signs_hat = np.where(X @ np.asarray(theta_hat, dtype=float) >= 0, 1, -1)
    signs_star = np.where(X @ np.asarray(theta_star, dtype=float) >= 0, 1, -1)
    return float(np.mean(signs_hat == signs_star))


def rsquare_reg(theta_hat, theta_star, X):
    """R-square of the learned model's predictions against the target's."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ParameterError("r-square needs at least 2 examples")
    ref = X @ np.asarray(theta_star, dtype=float)
    pred = X @ np.asarray(theta_hat, dtype=float)
    ss_tot = float(np.square(ref - ref.mean()).sum())
    if ss_tot == 0.0:
        raise UndefinedMetricError("reference predictions have zero variance")
    ss_res = float(np.square(pred - ref).sum())
    return 1.0 - ss_res / ss_tot


def super_teaching_ratio(risk_subset, risk_full):
    """Subset risk over full-data risk; values below 1 mean teaching helped."""
    if risk_full <= 0.0:
        raise UndefinedMetricError(
            f"ratio undefined for full-data risk {risk_full:g}"
        )
    return risk_subset / risk_full
