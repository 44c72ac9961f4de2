"""Regularized dual teaching objective and the l1 prox scalar."""

import numpy as np

from ..data import loss_kind_for_task
from ..losses import conjugate


def soft_threshold(v, t):
    """Shrink ``v`` toward zero by ``t``: ``sign(v) * max(|v| - t, 0)``."""
    v = np.asarray(v, dtype=float)
    out = np.sign(v) * np.maximum(np.abs(v) - t, 0.0)
    return float(out) if out.ndim == 0 else out


def objective_blocks(
    alpha_blocks, Zblocks, yblocks, theta_star, config, weights, task, *, theta=None
):
    """Objective value with the engine's ``theta(alpha) = Z alpha / lam`` convention.

    ``theta`` may be supplied to reuse an incrementally maintained
    aggregate; otherwise it is recomputed from the blocks.
    """
    kind = loss_kind_for_task(task)
    conj_scale = 1.0
    if config.normalize_conjugate:
        conj_scale = 1.0 / max(1, sum(b.shape[0] for b in alpha_blocks))
    if theta is None:
        theta = np.zeros(theta_star.shape[0])
        for Z, block in zip(Zblocks, alpha_blocks):
            theta += block @ Z
        theta /= config.lam
    conj_term = 0.0
    l1_term = 0.0
    for block, y, w in zip(alpha_blocks, yblocks, weights):
        conj_term += float(np.sum(conjugate(kind, block, y)))
        l1_term += float(w @ np.abs(block))
    gap = theta - theta_star
    return (
        conj_scale * conj_term
        + 0.5 * config.lam * float(theta @ theta)
        + config.lam_theta * float(gap @ gap)
        + config.lam_alpha * l1_term
    )


def objective(alpha_blocks, shards, theta_star, config, weights):
    """Objective evaluated directly from shards (recomputes the aggregate)."""
    from .blocks import z_matrix

    Zblocks = [z_matrix(s) for s in shards]
    yblocks = [s.y for s in shards]
    return objective_blocks(
        alpha_blocks,
        Zblocks,
        yblocks,
        np.asarray(theta_star, dtype=float),
        config,
        weights,
        shards[0].task,
    )
