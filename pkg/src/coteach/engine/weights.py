"""Warm-start least-squares estimate and the adaptive l1 weights.

Privacy split: each teacher contributes only a d x d Gram aggregate of its
dual columns; the coordinator solves a d-dimensional system and broadcasts
the result, and teachers derive their own per-example weights locally.
Raw columns never leave a shard.
"""

import numpy as np

from ..errors import NumericError


def local_gram(Z):
    """Teacher-side d x d aggregate ``Z_i.T @ Z_i``."""
    return Z.T @ Z


def coordinator_solve(grams, theta_star, ols_eps):
    """Coordinator-side ridge-stabilized solve on summed Gram aggregates.

    ``eps = ols_eps * trace(sum grams) / d`` regularizes rank deficiency;
    as eps -> 0 the induced estimate is the minimum-norm least-squares
    solution matching ``theta_star``.
    """
    d = theta_star.shape[0]
    for gram in grams:
        if gram.shape != (d, d):
            raise NumericError(
                f"coordinator expected a {d}x{d} Gram aggregate, got {gram.shape}"
            )
    total = np.zeros((d, d))
    for gram in grams:
        total += gram
    eps = ols_eps * float(np.trace(total)) / d
    try:
        u = np.linalg.solve(total + eps * np.eye(d), theta_star)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"warm-start solve failed: {exc}") from exc
    if not np.all(np.isfinite(u)):
        raise NumericError("warm-start solve produced non-finite values")
    return u


def local_weights(Z, u, w_max):
    """Teacher-side back-projection and weight clip.

    Returns ``(alpha_hat, weights)`` with ``w = min(1/|alpha_hat|, w_max)``
    (exact zeros map to ``w_max``).
    """
    alpha_hat = Z @ u
    if not np.all(np.isfinite(alpha_hat)):
        raise NumericError("warm-start back-projection produced non-finite values")
    mag = np.abs(alpha_hat)
    with np.errstate(divide="ignore"):
        weights = np.where(mag > 0, np.minimum(1.0 / np.where(mag > 0, mag, 1.0), w_max), w_max)
    return alpha_hat, weights


def warm_start_weights(Zblocks, theta_star, ols_eps, w_max):
    """Adaptive l1 weights for every block; returns ``(weights, alpha_hat)``.

    Equivalent to ``alpha_hat = Z.T (Z Z.T + eps I)^{-1} theta_star`` on
    the stacked column matrix, assembled privately as described above.
    """
    grams = [local_gram(Z) for Z in Zblocks]
    u = coordinator_solve(grams, np.asarray(theta_star, dtype=float), ols_eps)
    weights, alpha_hat = [], []
    for Z in Zblocks:
        ah, w = local_weights(Z, u, w_max)
        alpha_hat.append(ah)
        weights.append(w)
    return weights, alpha_hat
