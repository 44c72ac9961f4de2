"""Learning losses, their convex conjugates, and smoothness constants.

Two losses are supported, keyed by the strings ``"logistic"`` (binary
classification, labels in {+1, -1}) and ``"squared"`` (regression).  The
conjugate functions are parameterized by the per-example dual value ``a``:
for the logistic loss the conjugate is ``a*log(a) + (1-a)*log(1-a)`` on
[0, 1] (with 0*log(0) == 0), for the squared loss it is ``a**2/2 - a*y``
on the whole real line.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, ParameterError

LOGISTIC = "logistic"
SQUARED = "squared"
KINDS = (LOGISTIC, SQUARED)

# Box shrink used by iterative solvers: the logistic conjugate gradient is
# unbounded at 0 and 1, so solver iterates live in [eps, 1-eps].  Exact 0/1
# remain valid for plain evaluation.
BOUNDARY_EPS = 1e-6


@dataclass(frozen=True)
class ConjugateDomain:
    lower: float
    upper: float
    boundary_eps: float = BOUNDARY_EPS


def validate_kind(kind):
    if kind not in KINDS:
        raise ParameterError(f"unknown loss kind {kind!r}; expected one of {KINDS}")


def conjugate_domain(kind):
    """Domain of the dual value ``a`` for the given loss."""
    validate_kind(kind)
    if kind == LOGISTIC:
        return ConjugateDomain(0.0, 1.0)
    return ConjugateDomain(-math.inf, math.inf)


def loss(kind, theta, x, y):
    """Per-example loss: ``log(1+exp(-y*<theta,x>))`` or ``(<theta,x>-y)**2/2``.

    Overflow-safe: the logistic branch uses ``logaddexp`` so large margins
    saturate to 0 instead of overflowing.
    """
    validate_kind(kind)
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if theta.shape != x.shape:
        raise ParameterError(
            f"dimension mismatch: theta has shape {theta.shape}, x has shape {x.shape}"
        )
    margin = float(np.dot(theta, x))
    if kind == LOGISTIC:
        return float(np.logaddexp(0.0, -y * margin))
    return 0.5 * (margin - y) ** 2


def loss_sum(kind, theta, X, y):
    """Summed loss over a dataset; same conventions as :func:`loss`."""
    validate_kind(kind)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] == 0:
        return 0.0
    scores = X @ np.asarray(theta, dtype=float)
    if kind == LOGISTIC:
        return float(np.logaddexp(0.0, -y * scores).sum())
    return float(0.5 * np.square(scores - y).sum())


def _check_logistic_dual(a):
    a = np.asarray(a, dtype=float)
    eps = BOUNDARY_EPS
    if np.any(a < -eps) or np.any(a > 1.0 + eps):
        bad = a[(a < -eps) | (a > 1.0 + eps)]
        raise DomainError(
            f"logistic dual value {float(np.ravel(bad)[0]):g} outside [0, 1] "
            f"beyond clamp tolerance {eps:g}"
        )
    return np.clip(a, 0.0, 1.0)


def conjugate(kind, a, y=0.0):
    """Conjugate term for dual value ``a`` (vectorized over ``a`` and ``y``)."""
    validate_kind(kind)
    if kind == LOGISTIC:
        a = _check_logistic_dual(a)
        out = xlogy(a, a) + xlogy(1.0 - a, 1.0 - a)
        return float(out) if np.isscalar(a) or out.ndim == 0 else out
    a = np.asarray(a, dtype=float)
    out = 0.5 * a * a - a * np.asarray(y, dtype=float)
    return float(out) if out.ndim == 0 else out


def conjugate_grad(kind, a, y=0.0):
    """Derivative of :func:`conjugate` in ``a``.

    For the logistic loss the argument is clamped into
    ``[BOUNDARY_EPS, 1-BOUNDARY_EPS]`` where the derivative is finite.
    """
    validate_kind(kind)
    if kind == LOGISTIC:
        a = _check_logistic_dual(a)
        a = np.clip(a, BOUNDARY_EPS, 1.0 - BOUNDARY_EPS)
        out = np.log(a / (1.0 - a))
        return float(out) if out.ndim == 0 else out
    a = np.asarray(a, dtype=float)
    out = a - np.asarray(y, dtype=float)
    return float(out) if out.ndim == 0 else out


def smoothness_bound(kind, X):
    """Curvature bound for the summed loss as a function of the model.

    ``sum_j ||x_j||^2 / 4`` for logistic, ``sum_j ||x_j||^2`` for squared;
    both dominate the largest Hessian eigenvalue of the summed loss at any
    model point.  An empty set yields 0.
    """
    validate_kind(kind)
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return 0.0
    total = float(np.square(X).sum())
    return total / 4.0 if kind == LOGISTIC else total
