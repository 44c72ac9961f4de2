"""Teacher-side block machinery: dual columns, surrogate, solver dispatch.

Everything here sees a single teacher's data.  ``z_matrix`` builds the
dual column for each local example (label-signed features for
classification, raw features for regression); the model-space aggregate is
``theta(alpha) = (1/lam) * sum_ij alpha_ij z_ij``.
"""

from dataclasses import dataclass

import numpy as np

from ..data import CLASSIFICATION, validate_task
from ..errors import NumericError
from ..kernels import solve_block
from ..losses import BOUNDARY_EPS, LOGISTIC, conjugate, conjugate_grad
from ..data import loss_kind_for_task


def z_matrix(shard_or_X, y=None, task=None):
    """Dual columns for a shard (rows: ``y_j * x_j`` or ``x_j``)."""
    if y is None:
        X, y, task = shard_or_X.X, shard_or_X.y, shard_or_X.task
    else:
        X = shard_or_X
    validate_task(task)
    if task == CLASSIFICATION:
        return np.ascontiguousarray(y[:, None] * X)
    return np.ascontiguousarray(X, dtype=float)


def gram_max_eig(Z):
    """Largest eigenvalue of ``Z.T @ Z`` (d x d, cheap for small d)."""
    if Z.shape[0] == 0:
        return 0.0
    gram = Z.T @ Z
    return float(np.linalg.eigvalsh(gram)[-1])


def default_step(Z, config, task, conj_scale=1.0):
    """Initial proximal-gradient step from a curvature estimate.

    The smooth surrogate's Hessian is bounded by the conjugate curvature
    plus ``(1 + 2*lam_theta/lam)/lam`` times the block Gram; backtracking
    refines from there.
    """
    kind = loss_kind_for_task(task)
    conj_curv = (4.0 if kind == LOGISTIC else 1.0) * conj_scale
    quad = gram_max_eig(Z) * (1.0 + 2.0 * config.lam_theta / config.lam) / config.lam
    return 1.0 / (conj_curv + quad)


@dataclass(frozen=True)
class BlockResult:
    delta: np.ndarray
    iterations: int
    backtracks: int
    surrogate_start: float
    surrogate_end: float
    step: float


def local_block_update(
    Z,
    alpha_block,
    y_block,
    weights_block,
    theta_tilde,
    theta_star,
    config,
    task,
    *,
    conj_scale=1.0,
    step_init=None,
    round_index=None,
    teacher_id=None,
):
    """Solve one teacher's block subproblem against the previous aggregate.

    Returns a :class:`BlockResult` whose ``delta`` never increases the
    block surrogate (descent contract); numeric failures carry the round
    and teacher context.
    """
    kind = loss_kind_for_task(task)
    if step_init is None:
        step_init = default_step(Z, config, task, conj_scale)
    try:
        delta, iterations, backtracks, f0, f_final, step = solve_block(
            np.ascontiguousarray(Z, dtype=float),
            np.ascontiguousarray(alpha_block, dtype=float),
            np.ascontiguousarray(y_block, dtype=float),
            np.ascontiguousarray(weights_block, dtype=float),
            np.ascontiguousarray(theta_tilde, dtype=float),
            np.ascontiguousarray(theta_star, dtype=float),
            config.lam,
            config.lam_theta,
            config.lam_alpha,
            conj_scale,
            kind == LOGISTIC,
            BOUNDARY_EPS,
            config.inner_max_iter,
            config.inner_tol,
            step_init,
        )
    except FloatingPointError as exc:
        raise NumericError(
            str(exc), round_index=round_index, teacher_id=teacher_id
        ) from exc
    return BlockResult(delta, iterations, backtracks, f0, f_final, step)


def surrogate_smooth_value(Z, alpha_block, y_block, delta, theta_tilde, theta_star, config, task, conj_scale=1.0):
    """Smooth part of the block surrogate at ``delta`` (reference path).

    Used by gradient checks and tests; evaluates conjugates exactly, with
    solver-style clamping left to the caller.
    """
    kind = loss_kind_for_task(task)
    a = alpha_block + delta
    v = theta_tilde + (delta @ Z) / config.lam
    gap = v - theta_star
    return (
        conj_scale * float(np.sum(conjugate(kind, a, y_block)))
        + 0.5 * config.lam * float(v @ v)
        + config.lam_theta * float(gap @ gap)
    )


def surrogate_smooth_grad(Z, alpha_block, y_block, delta, theta_tilde, theta_star, config, task, conj_scale=1.0):
    """Analytic gradient of :func:`surrogate_smooth_value` in ``delta``."""
    kind = loss_kind_for_task(task)
    a = alpha_block + delta
    v = theta_tilde + (delta @ Z) / config.lam
    cg = conj_scale * np.asarray(conjugate_grad(kind, a, y_block))
    q = v + (2.0 * config.lam_theta / config.lam) * (v - theta_star)
    return cg + Z @ q
