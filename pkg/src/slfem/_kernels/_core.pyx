# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel implementations; see slfem._kernels.pure for the contract."""

import numpy as np

cimport cython
from libc.math cimport fabs

from slfem.errors import SingularSystemError

NAME = "core"

cdef double PIVOT_TINY = 1e-300


def thomas(const double[::1] sub, const double[::1] diag, const double[::1] sup, const double[::1] rhs):
    cdef Py_ssize_t m = diag.shape[0]
    cdef Py_ssize_t i
    cdef double scale = 0.0, piv, tiny

    for i in range(m):
        if fabs(diag[i]) > scale:
            scale = fabs(diag[i])
    for i in range(m - 1):
        if fabs(sub[i]) > scale:
            scale = fabs(sub[i])
        if fabs(sup[i]) > scale:
            scale = fabs(sup[i])
    if scale == 0.0:
        raise SingularSystemError("all-zero system")
    tiny = PIVOT_TINY * scale

    c_arr = np.empty(m - 1 if m > 1 else 0)
    d_arr = np.empty(m)
    x_arr = np.empty(m)
    cdef double[::1] c = c_arr
    cdef double[::1] d = d_arr
    cdef double[::1] x = x_arr

    piv = diag[0]
    if fabs(piv) < tiny:
        raise SingularSystemError("zero pivot at row 0")
    d[0] = rhs[0] / piv
    for i in range(1, m):
        c[i - 1] = sup[i - 1] / piv
        piv = diag[i] - sub[i - 1] * c[i - 1]
        if fabs(piv) < tiny:
            raise SingularSystemError(f"zero pivot at row {i}")
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv

    x[m - 1] = d[m - 1]
    for i in range(m - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x_arr


def assemble_p1(const double[::1] h, const double[::1] ref_t, const double[::1] ref_w,
                const double[:, ::1] beta, const double[:, ::1] q, const double[:, ::1] f):
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t nq = ref_t.shape[0]
    cdef Py_ssize_t k, iq
    cdef double hk, jw, pl, pr, dp, a_ll, a_lr, a_rr, l_l, l_r, kd

    sub_arr = np.empty(n)
    diag_arr = np.zeros(n + 1)
    sup_arr = np.empty(n)
    rhs_arr = np.zeros(n + 1)
    cdef double[::1] sub = sub_arr
    cdef double[::1] diag = diag_arr
    cdef double[::1] sup = sup_arr
    cdef double[::1] rhs = rhs_arr

    for k in range(n):
        hk = h[k]
        dp = 1.0 / hk
        kd = 0.0
        a_ll = a_lr = a_rr = 0.0
        l_l = l_r = 0.0
        for iq in range(nq):
            jw = 0.5 * hk * ref_w[iq]
            pl = 0.5 * (1.0 - ref_t[iq])
            pr = 0.5 * (1.0 + ref_t[iq])
            kd += jw * beta[k, iq]
            a_ll += jw * q[k, iq] * pl * pl
            a_lr += jw * q[k, iq] * pl * pr
            a_rr += jw * q[k, iq] * pr * pr
            l_l += jw * f[k, iq] * pl
            l_r += jw * f[k, iq] * pr
        kd = kd * dp * dp
        diag[k] += kd + a_ll
        diag[k + 1] += kd + a_rr
        sup[k] = -kd + a_lr
        sub[k] = -kd + a_lr
        rhs[k] += l_l
        rhs[k + 1] += l_r
    return sub_arr, diag_arr, sup_arr, rhs_arr


def assemble_compact(const double[::1] h, const double[::1] ref_t, const double[::1] ref_w,
                     const double[:, ::1] beta, const double[:, ::1] dbeta,
                     const double[:, ::1] q, const double[:, ::1] f):
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t nq = ref_t.shape[0]
    cdef Py_ssize_t k, iq
    cdef double hk, jw, pl, pr, dpl, dpr, w
    cdef double bv, dv, qv, fv, dob, qob, fob
    cdef double p_l, p_r, m_l, m_r
    cdef double a_ll, a_lr, a_rl, a_rr, l_l, l_r

    sub_arr = np.empty(n)
    diag_arr = np.zeros(n + 1)
    sup_arr = np.empty(n)
    rhs_arr = np.zeros(n + 1)
    cdef double[::1] sub = sub_arr
    cdef double[::1] diag = diag_arr
    cdef double[::1] sup = sup_arr
    cdef double[::1] rhs = rhs_arr

    for k in range(n):
        hk = h[k]
        dpl = -1.0 / hk
        dpr = 1.0 / hk
        a_ll = a_lr = a_rl = a_rr = 0.0
        l_l = l_r = 0.0
        for iq in range(nq):
            jw = 0.5 * hk * ref_w[iq]
            pl = 0.5 * (1.0 - ref_t[iq])
            pr = 0.5 * (1.0 + ref_t[iq])
            w = 0.25 * hk * hk * (ref_t[iq] * ref_t[iq] - 1.0)
            bv = beta[k, iq]
            dv = dbeta[k, iq]
            qv = q[k, iq]
            fv = f[k, iq]
            dob = dv / bv
            qob = qv / bv
            fob = fv / bv

            p_l = bv * dpl + 0.5 * dv * dob * w * dpl - 0.5 * qv * dob * w * pl
            p_r = bv * dpr + 0.5 * dv * dob * w * dpr - 0.5 * qv * dob * w * pr
            m_l = qv * (pl - 0.5 * dob * w * dpl + 0.5 * qob * w * pl)
            m_r = qv * (pr - 0.5 * dob * w * dpr + 0.5 * qob * w * pr)

            a_ll += jw * (p_l * dpl + m_l * pl)
            a_lr += jw * (p_r * dpl + m_r * pl)
            a_rl += jw * (p_l * dpr + m_l * pr)
            a_rr += jw * (p_r * dpr + m_r * pr)

            l_l += jw * (fv * pl - 0.5 * dv * fob * w * dpl + 0.5 * qv * fob * w * pl)
            l_r += jw * (fv * pr - 0.5 * dv * fob * w * dpr + 0.5 * qv * fob * w * pr)

        diag[k] += a_ll
        diag[k + 1] += a_rr
        sup[k] = a_lr
        sub[k] = a_rl
        rhs[k] += l_l
        rhs[k + 1] += l_r
    return sub_arr, diag_arr, sup_arr, rhs_arr


def linear_eval(const double[::1] nodes, const double[::1] coeffs, const double[::1] x):
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t nn = nodes.shape[0]
    cdef Py_ssize_t i, lo, hi, mid, k
    cdef double xi, xl, hk, cl, sl

    val_arr = np.empty(m)
    slope_arr = np.empty(m)
    idx_arr = np.empty(m, dtype=np.intp)
    cdef double[::1] val = val_arr
    cdef double[::1] slope = slope_arr
    cdef Py_ssize_t[::1] idx = idx_arr

    for i in range(m):
        xi = x[i]
        # rightmost element whose left node is <= xi (nodes on the boundary
        # of two elements belong to the right one, like searchsorted 'right')
        lo = 0
        hi = nn
        while lo < hi:
            mid = (lo + hi) // 2
            if nodes[mid] <= xi:
                lo = mid + 1
            else:
                hi = mid
        k = lo - 1
        if k < 0:
            k = 0
        elif k > nn - 2:
            k = nn - 2
        xl = nodes[k]
        hk = nodes[k + 1] - xl
        cl = coeffs[k]
        sl = (coeffs[k + 1] - cl) / hk
        val[i] = cl + sl * (xi - xl)
        slope[i] = sl
        idx[i] = k
    return val_arr, slope_arr, idx_arr
