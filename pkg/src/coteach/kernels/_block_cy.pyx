# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled block subproblem solver.

Same algorithm and call signature as the numpy fallback in
``_block_py.py``: monotone backtracking proximal gradient on one teacher's
dual block.  Kept loop-for-loop in sync with the fallback; results agree
to floating-point reordering noise.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, isfinite, log

cnp.import_array()

cdef double STEP_MIN = 1e-30
cdef double STEP_GROW = 1.5


cdef inline double _xlogy(double p) noexcept nogil:
    if p > 0.0:
        return p * log(p)
    return 0.0


cdef double _conj_sum(double[::1] a, double[::1] y, bint logistic) noexcept nogil:
    cdef Py_ssize_t j, n = a.shape[0]
    cdef double total = 0.0
    if logistic:
        for j in range(n):
            total += _xlogy(a[j]) + _xlogy(1.0 - a[j])
    else:
        for j in range(n):
            total += 0.5 * a[j] * a[j] - a[j] * y[j]
    return total


cdef double _smooth_value(
    double[::1] a,
    double[::1] y,
    double[::1] v,
    double[::1] theta_star,
    double lam,
    double lam_theta,
    double conj_scale,
    bint logistic,
) noexcept nogil:
    cdef Py_ssize_t k, d = v.shape[0]
    cdef double quad = 0.0, gap = 0.0, diff
    for k in range(d):
        quad += v[k] * v[k]
        diff = v[k] - theta_star[k]
        gap += diff * diff
    return conj_scale * _conj_sum(a, y, logistic) + 0.5 * lam * quad + lam_theta * gap


def solve_block(
    double[:, ::1] Z,
    double[::1] alpha,
    double[::1] y,
    double[::1] weights,
    double[::1] theta_tilde,
    double[::1] theta_star,
    double lam,
    double lam_theta,
    double lam_alpha,
    double conj_scale,
    bint logistic,
    double eps_b,
    int max_iter,
    double tol,
    double step_init,
):
    """Returns ``(delta, iterations, backtracks, f0, f_final, step_final)``."""
    cdef Py_ssize_t n = alpha.shape[0]
    cdef Py_ssize_t d = theta_tilde.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a_arr = np.asarray(alpha).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a_new_arr = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] grad_arr = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.asarray(theta_tilde).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_new_arr = np.empty(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q_arr = np.empty(d)
    cdef double[::1] a = a_arr
    cdef double[::1] a_new = a_new_arr
    cdef double[::1] grad = grad_arr
    cdef double[::1] v = v_arr
    cdef double[::1] v_new = v_new_arr
    cdef double[::1] q = q_arr

    cdef double gap_coef = 2.0 * lam_theta / lam
    cdef double smooth, smooth_new, f, f0, f_new, decrease
    cdef double step = step_init
    cdef double l1 = 0.0, l1_new, ac, cg, dot, sq, bound, u, thresh, daj
    cdef Py_ssize_t i, j, k
    cdef int iterations = 0, backtracks = 0
    cdef bint feasible0 = 1, stalled, ok

    smooth = _smooth_value(a, y, v, theta_star, lam, lam_theta, conj_scale, logistic)
    for j in range(n):
        l1 += weights[j] * fabs(a[j])
        if logistic and (a[j] < eps_b or a[j] > 1.0 - eps_b):
            feasible0 = 0
    if not logistic:
        feasible0 = 1
    f = smooth + lam_alpha * l1
    f0 = f

    for i in range(max_iter):
        for k in range(d):
            q[k] = v[k] + gap_coef * (v[k] - theta_star[k])
        ok = 1
        for j in range(n):
            if logistic:
                ac = a[j]
                if ac < eps_b:
                    ac = eps_b
                elif ac > 1.0 - eps_b:
                    ac = 1.0 - eps_b
                cg = conj_scale * log(ac / (1.0 - ac))
            else:
                cg = conj_scale * (a[j] - y[j])
            dot = 0.0
            for k in range(d):
                dot += Z[j, k] * q[k]
            grad[j] = cg + dot
            if not isfinite(grad[j]):
                ok = 0
        if not ok:
            raise FloatingPointError("non-finite gradient in block solve")
        stalled = 0
        while True:
            sq = 0.0
            dot = 0.0  # grad . da
            for j in range(n):
                u = a[j] - step * grad[j]
                thresh = step * lam_alpha * weights[j]
                if u > thresh:
                    u -= thresh
                elif u < -thresh:
                    u += thresh
                else:
                    u = 0.0
                if logistic:
                    if u < eps_b:
                        u = eps_b
                    elif u > 1.0 - eps_b:
                        u = 1.0 - eps_b
                a_new[j] = u
                daj = u - a[j]
                sq += daj * daj
                dot += grad[j] * daj
            if sq == 0.0:
                stalled = 1
                break
            for k in range(d):
                v_new[k] = v[k]
            for j in range(n):
                daj = a_new[j] - a[j]
                for k in range(d):
                    v_new[k] += daj * Z[j, k] / lam
            smooth_new = _smooth_value(
                a_new, y, v_new, theta_star, lam, lam_theta, conj_scale, logistic
            )
            bound = smooth + dot + sq / (2.0 * step)
            if isfinite(smooth_new) and smooth_new <= bound:
                break
            step *= 0.5
            backtracks += 1
            if step < STEP_MIN:
                stalled = 1
                break
        if stalled:
            break
        l1_new = 0.0
        for j in range(n):
            l1_new += weights[j] * fabs(a_new[j])
        f_new = smooth_new + lam_alpha * l1_new
        decrease = f - f_new
        a_arr, a_new_arr = a_new_arr, a_arr
        a = a_arr
        a_new = a_new_arr
        v_arr, v_new_arr = v_new_arr, v_arr
        v = v_arr
        v_new = v_new_arr
        smooth = smooth_new
        f = f_new
        iterations += 1
        if decrease <= tol * max(1.0, fabs(f)):
            break
        step *= STEP_GROW

    cdef cnp.ndarray[cnp.float64_t, ndim=1] delta = np.empty(n)
    if feasible0 and f > f0:
        delta[:] = 0.0
        f = f0
    else:
        for j in range(n):
            delta[j] = a[j] - alpha[j]
    return delta, iterations, backtracks, f0, f, step
