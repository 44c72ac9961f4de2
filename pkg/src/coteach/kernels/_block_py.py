"""Pure-numpy block subproblem solver (fallback backend).

One call approximately minimizes, over the update ``delta`` to a single
teacher's dual block, the local surrogate

    conj_scale * sum_j conj(a_j, y_j)
      + lam/2 * ||v||^2 + lam_theta * ||v - theta_star||^2
      + lam_alpha * sum_j w_j |a_j|

with ``a = alpha + delta`` and ``v = theta_tilde + Z.T @ delta / lam``,
using monotone backtracking proximal gradient steps (soft-threshold prox,
plus a box projection for the logistic loss).  The returned update never
increases the surrogate relative to ``delta = 0`` when the starting block
is feasible.
"""

import numpy as np
from scipy.special import xlogy

_STEP_MIN = 1e-30
_STEP_GROW = 1.5


def solve_block(
    Z,
    alpha,
    y,
    weights,
    theta_tilde,
    theta_star,
    lam,
    lam_theta,
    lam_alpha,
    conj_scale,
    logistic,
    eps_b,
    max_iter,
    tol,
    step_init,
):
    """Returns ``(delta, iterations, backtracks, f0, f_final, step_final)``."""
    a = alpha.copy()
    v = theta_tilde.copy()
    gap_coef = 2.0 * lam_theta / lam

    def conj_sum(vals):
        if logistic:
            return float((xlogy(vals, vals) + xlogy(1.0 - vals, 1.0 - vals)).sum())
        return float((0.5 * vals * vals - vals * y).sum())

    def smooth_value(vals, vec):
        gap = vec - theta_star
        return (
            conj_scale * conj_sum(vals)
            + 0.5 * lam * float(vec @ vec)
            + lam_theta * float(gap @ gap)
        )

    smooth = smooth_value(a, v)
    f = smooth + lam_alpha * float(weights @ np.abs(a))
    f0 = f
    feasible0 = (not logistic) or (
        a.size == 0 or (a.min() >= eps_b and a.max() <= 1.0 - eps_b)
    )
    step = step_init
    iterations = 0
    backtracks = 0
    for _ in range(max_iter):
        if logistic:
            ac = np.clip(a, eps_b, 1.0 - eps_b)
            cg = conj_scale * np.log(ac / (1.0 - ac))
        else:
            cg = conj_scale * (a - y)
        grad = cg + Z @ (v + gap_coef * (v - theta_star))
        if not np.all(np.isfinite(grad)):
            raise FloatingPointError("non-finite gradient in block solve")
        stalled = False
        while True:
            u = a - step * grad
            thresh = (step * lam_alpha) * weights
            a_new = np.sign(u) * np.maximum(np.abs(u) - thresh, 0.0)
            if logistic:
                np.clip(a_new, eps_b, 1.0 - eps_b, out=a_new)
            da = a_new - a
            sq = float(da @ da)
            if sq == 0.0:
                stalled = True
                break
            v_new = v + (da @ Z) / lam
            smooth_new = smooth_value(a_new, v_new)
            if np.isfinite(smooth_new) and smooth_new <= smooth + float(
                grad @ da
            ) + sq / (2.0 * step):
                break
            step *= 0.5
            backtracks += 1
            if step < _STEP_MIN:
                stalled = True
                break
        if stalled:
            break
        f_new = smooth_new + lam_alpha * float(weights @ np.abs(a_new))
        decrease = f - f_new
        a, v, smooth, f = a_new, v_new, smooth_new, f_new
        iterations += 1
        if decrease <= tol * max(1.0, abs(f)):
            break
        step *= _STEP_GROW
    delta = a - alpha
    if feasible0 and f > f0:
        delta = np.zeros_like(alpha)
        f = f0
    return delta, iterations, backtracks, f0, f, step
