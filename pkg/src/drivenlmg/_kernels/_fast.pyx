# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled landscape kernels: same formulas as the pure backend, with the
Bessel evaluations and the refinement loop pushed into C."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, NAN

cnp.import_array()

cdef extern from "math.h" nogil:
    double j0(double x)
    double j1(double x)
    double jn(int n, double x)

BACKEND = "compiled"

cdef double U_MAX = 1.0 - 1e-6


cdef inline double _value(double q, double p, double h, double gx0,
                          double gx1, double gy, double omega) nogil:
    cdef double u = q * q + p * p
    cdef double r = 1.0 - u
    if r < 0.0:
        r = 0.0
    cdef double s = sqrt(r)
    cdef double g = u - 0.5
    cdef double w = (1.0 - u) * p * p
    cdef double a = 2.0 * gx1 / omega
    cdef double x = q * s
    cdef double f1 = j0(a * x)
    cdef double f2 = j0(2.0 * a * x)
    return (-h * g * f1
            - 0.5 * gy * (g * g + w)
            + 0.5 * gy * (g * g - w) * f2
            - gx0 * (1.0 - u) * q * q)


cdef inline void _grad(double q, double p, double h, double gx0, double gx1,
                       double gy, double omega, double* eq, double* ep) nogil:
    cdef double u = q * q + p * p
    cdef double s = sqrt(1.0 - u)
    cdef double x = q * s
    cdef double x_q = s - q * q / s
    cdef double x_p = -q * p / s
    cdef double g = u - 0.5
    cdef double a = 2.0 * gx1 / omega
    cdef double z1 = a * x
    cdef double z2 = 2.0 * a * x
    cdef double f1 = j0(z1)
    cdef double f2 = j0(z2)
    cdef double d1_1 = -j1(z1)
    cdef double d1_2 = -j1(z2)
    cdef double f1_q = d1_1 * a * x_q
    cdef double f1_p = d1_1 * a * x_p
    cdef double f2_q = d1_2 * 2.0 * a * x_q
    cdef double f2_p = d1_2 * 2.0 * a * x_p
    cdef double g_q = 2.0 * q
    cdef double g_p = 2.0 * p
    cdef double gsq_q = 4.0 * g * q
    cdef double gsq_p = 4.0 * g * p
    cdef double w = (1.0 - u) * p * p
    cdef double w_q = -2.0 * q * p * p
    cdef double w_p = 2.0 * p - 2.0 * p * q * q - 4.0 * p * p * p
    cdef double tau_q = -gx0 * (2.0 * q - 4.0 * q * q * q - 2.0 * q * p * p)
    cdef double tau_p = 2.0 * gx0 * q * q * p
    eq[0] = (-h * (g_q * f1 + g * f1_q)
             - 0.5 * gy * (gsq_q + w_q)
             + 0.5 * gy * ((gsq_q - w_q) * f2 + (g * g - w) * f2_q)
             + tau_q)
    ep[0] = (-h * (g_p * f1 + g * f1_p)
             - 0.5 * gy * (gsq_p + w_p)
             + 0.5 * gy * ((gsq_p - w_p) * f2 + (g * g - w) * f2_p)
             + tau_p)


cdef inline void _hess(double q, double p, double h, double gx0, double gx1,
                       double gy, double omega,
                       double* hqq, double* hqp, double* hpp) nogil:
    cdef double u = q * q + p * p
    cdef double s = sqrt(1.0 - u)
    cdef double s3 = s * s * s
    cdef double x = q * s
    cdef double x_q = s - q * q / s
    cdef double x_p = -q * p / s
    cdef double x_qq = -3.0 * q / s - q * q * q / s3
    cdef double x_qp = -p / s - q * q * p / s3
    cdef double x_pp = -q / s - q * p * p / s3
    cdef double g = u - 0.5
    cdef double a = 2.0 * gx1 / omega
    cdef double c1 = a
    cdef double c2 = 2.0 * a
    cdef double z1 = c1 * x
    cdef double z2 = c2 * x
    cdef double f1 = j0(z1)
    cdef double f2 = j0(z2)
    cdef double d1_1 = -j1(z1)
    cdef double d1_2 = -j1(z2)
    cdef double d2_1 = 0.5 * (jn(2, z1) - f1)
    cdef double d2_2 = 0.5 * (jn(2, z2) - f2)
    cdef double f1_q = d1_1 * c1 * x_q
    cdef double f1_p = d1_1 * c1 * x_p
    cdef double f2_q = d1_2 * c2 * x_q
    cdef double f2_p = d1_2 * c2 * x_p
    cdef double f1_qq = d2_1 * c1 * c1 * x_q * x_q + d1_1 * c1 * x_qq
    cdef double f1_qp = d2_1 * c1 * c1 * x_q * x_p + d1_1 * c1 * x_qp
    cdef double f1_pp = d2_1 * c1 * c1 * x_p * x_p + d1_1 * c1 * x_pp
    cdef double f2_qq = d2_2 * c2 * c2 * x_q * x_q + d1_2 * c2 * x_qq
    cdef double f2_qp = d2_2 * c2 * c2 * x_q * x_p + d1_2 * c2 * x_qp
    cdef double f2_pp = d2_2 * c2 * c2 * x_p * x_p + d1_2 * c2 * x_pp
    cdef double g_q = 2.0 * q
    cdef double g_p = 2.0 * p
    cdef double gsq_q = 4.0 * g * q
    cdef double gsq_p = 4.0 * g * p
    cdef double gsq_qq = 4.0 * g + 8.0 * q * q
    cdef double gsq_qp = 8.0 * q * p
    cdef double gsq_pp = 4.0 * g + 8.0 * p * p
    cdef double w = (1.0 - u) * p * p
    cdef double w_q = -2.0 * q * p * p
    cdef double w_p = 2.0 * p - 2.0 * p * q * q - 4.0 * p * p * p
    cdef double w_qq = -2.0 * p * p
    cdef double w_qp = -4.0 * q * p
    cdef double w_pp = 2.0 - 2.0 * q * q - 12.0 * p * p
    cdef double tau_qq = -gx0 * (2.0 - 12.0 * q * q - 2.0 * p * p)
    cdef double tau_qp = 4.0 * gx0 * q * p
    cdef double tau_pp = 2.0 * gx0 * q * q
    cdef double gmw = g * g - w
    hqq[0] = (-h * (2.0 * f1 + 2.0 * g_q * f1_q + g * f1_qq)
              - 0.5 * gy * (gsq_qq + w_qq)
              + 0.5 * gy * ((gsq_qq - w_qq) * f2 + 2.0 * (gsq_q - w_q) * f2_q + gmw * f2_qq)
              + tau_qq)
    hqp[0] = (-h * (g_q * f1_p + g_p * f1_q + g * f1_qp)
              - 0.5 * gy * (gsq_qp + w_qp)
              + 0.5 * gy * ((gsq_qp - w_qp) * f2 + (gsq_q - w_q) * f2_p
                            + (gsq_p - w_p) * f2_q + gmw * f2_qp)
              + tau_qp)
    hpp[0] = (-h * (2.0 * f1 + 2.0 * g_p * f1_p + g * f1_pp)
              - 0.5 * gy * (gsq_pp + w_pp)
              + 0.5 * gy * ((gsq_pp - w_pp) * f2 + 2.0 * (gsq_p - w_p) * f2_p + gmw * f2_pp)
              + tau_pp)


def qel_value(double q, double p, double h, double gx0, double gx1,
              double gy, double omega):
    return _value(q, p, h, gx0, gx1, gy, omega)


def qel_grad(double q, double p, double h, double gx0, double gx1,
             double gy, double omega):
    cdef double eq, ep
    _grad(q, p, h, gx0, gx1, gy, omega, &eq, &ep)
    return eq, ep


def qel_hess(double q, double p, double h, double gx0, double gx1,
             double gy, double omega):
    cdef double hqq, hqp, hpp
    _hess(q, p, h, gx0, gx1, gy, omega, &hqq, &hqp, &hpp)
    return hqq, hqp, hpp


def qel_grid(qs, ps, double h, double gx0, double gx1, double gy, double omega):
    cdef double[::1] qv = np.ascontiguousarray(qs, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(ps, dtype=np.float64)
    cdef Py_ssize_t nq = qv.shape[0], np_ = pv.shape[0], i, k
    out = np.empty((nq, np_), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double q, p
    with nogil:
        for i in range(nq):
            q = qv[i]
            for k in range(np_):
                p = pv[k]
                if q * q + p * p <= 1.0:
                    ov[i, k] = _value(q, p, h, gx0, gx1, gy, omega)
                else:
                    ov[i, k] = NAN
    return out


def newton_refine(double q0, double p0, double h, double gx0, double gx1,
                  double gy, double omega, double grad_tol=1e-10, int max_iter=200):
    cdef double q = q0, p = p0
    cdef double e = _value(q, p, h, gx0, gx1, gy, omega)
    cdef double gq, gp, gnorm, hqq, hqp, hpp, det, dq, dp, dnorm, slope
    cdef double step, qn, pn, en
    cdef int it, ls
    cdef bint ok
    for it in range(max_iter):
        _grad(q, p, h, gx0, gx1, gy, omega, &gq, &gp)
        gnorm = hypot(gq, gp)
        if gnorm < grad_tol:
            return q, p, True, it
        _hess(q, p, h, gx0, gx1, gy, omega, &hqq, &hqp, &hpp)
        det = hqq * hpp - hqp * hqp
        if hqq > 0.0 and det > 0.0:
            dq = -(hpp * gq - hqp * gp) / det
            dp = -(hqq * gp - hqp * gq) / det
        else:
            dq = -gq
            dp = -gp
        dnorm = hypot(dq, dp)
        if dnorm > 0.25:
            dq *= 0.25 / dnorm
            dp *= 0.25 / dnorm
        slope = gq * dq + gp * dp
        if slope >= 0.0:
            dq = -gq / gnorm * 0.01
            dp = -gp / gnorm * 0.01
            slope = gq * dq + gp * dp
        step = 1.0
        ok = False
        for ls in range(60):
            qn = q + step * dq
            pn = p + step * dp
            if qn * qn + pn * pn <= U_MAX:
                en = _value(qn, pn, h, gx0, gx1, gy, omega)
                if en <= e + 1e-4 * step * slope:
                    ok = True
                    break
            step *= 0.5
        if not ok:
            return q, p, False, it + 1
        q = qn
        p = pn
        e = en
    _grad(q, p, h, gx0, gx1, gy, omega, &gq, &gp)
    return q, p, hypot(gq, gp) < grad_tol, max_iter
