"""Engine configuration with task-dependent defaults."""

from dataclasses import dataclass, replace

import numpy as np

from ..data import validate_task
from ..errors import ParameterError

# Penalty defaults tuned per task: (lam_alpha, lam_theta).
_TASK_DEFAULTS = {
    "classification": (0.1, 1000.0),
    "regression": (1.0, 2000.0),
}


@dataclass(frozen=True)
class TeachingConfig:
    """All knobs of a consensus teaching run.

    ``lam`` is the learner's ridge weight, ``lam_alpha``/``lam_theta`` the
    sparsity and target-gap penalties, ``beta`` the per-teacher step scale
    in [1, K] (scalar broadcasts to all teachers).  ``rounds`` is the outer
    budget T; with ``outer_tol`` 0 (default) exactly T rounds run, a
    positive value stops early on small relative objective change.  With
    ``normalize_conjugate`` the conjugate term is averaged over N instead
    of summed.
    """

    lam: float = 1.0
    lam_alpha: float = 0.1
    lam_theta: float = 1000.0
    beta: float | tuple = 1.0
    rounds: int = 100
    inner_max_iter: int = 200
    inner_tol: float = 1e-8
    outer_tol: float = 0.0
    w_max: float = 1e6
    ols_eps: float = 1e-8
    normalize_conjugate: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.lam <= 0:
            raise ParameterError(f"lam must be > 0, got {self.lam}")
        if self.lam_alpha < 0 or self.lam_theta < 0:
            raise ParameterError("lam_alpha and lam_theta must be >= 0")
        if self.rounds < 0:
            raise ParameterError(f"rounds must be >= 0, got {self.rounds}")
        if self.inner_max_iter < 1:
            raise ParameterError("inner_max_iter must be >= 1")
        if self.inner_tol <= 0:
            raise ParameterError("inner_tol must be > 0")
        if self.outer_tol < 0:
            raise ParameterError("outer_tol must be >= 0")
        if self.w_max <= 0 or self.ols_eps <= 0:
            raise ParameterError("w_max and ols_eps must be > 0")

    @classmethod
    def for_task(cls, task, **overrides):
        """Config with the task's documented penalty defaults."""
        validate_task(task)
        lam_alpha, lam_theta = _TASK_DEFAULTS[task]
        base = {"lam_alpha": lam_alpha, "lam_theta": lam_theta}
        base.update(overrides)
        return cls(**base)

    def replace(self, **changes):
        return replace(self, **changes)

    def beta_for(self, K):
        """Per-teacher step scales, validated against [1, K]."""
        if np.isscalar(self.beta):
            betas = np.full(K, float(self.beta))
        else:
            betas = np.asarray(self.beta, dtype=float)
            if betas.shape != (K,):
                raise ParameterError(
                    f"beta has {betas.size} entries for K={K} teachers"
                )
        if np.any(betas < 1.0) or np.any(betas > K):
            raise ParameterError(f"each beta must lie in [1, K={K}]")
        return betas
