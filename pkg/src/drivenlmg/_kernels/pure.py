"""Pure numpy/scipy implementation of the landscape hot kernels.

The surface on the unit disk (u = Q^2 + P^2, s = sqrt(1-u), g = u - 1/2,
w = (1-u) P^2, a = 2*gx1/omega) is

    E(Q,P) = -h g J0(a Q s)
             - gy/2 (g^2 + w)
             + gy/2 (g^2 - w) J0(2 a Q s)
             - gx0 (1-u) Q^2,

and gradients/Hessians are the exact chain-rule derivatives using
J0' = -J1 and J0'' = (J2 - J0)/2.  The compiled backend re-implements the
same formulas; keep the two in sync (there is a cross-check test).
"""

import numpy as np
from scipy.special import j0, j1, jn

BACKEND = "pure"

_U_MAX = 1.0 - 1e-6  # interior guard used by the refiner


def qel_value(q, p, h, gx0, gx1, gy, omega):
    """Landscape value; valid on the closed disk u <= 1."""
    u = q * q + p * p
    s = np.sqrt(max(1.0 - u, 0.0))
    g = u - 0.5
    w = (1.0 - u) * p * p
    a = 2.0 * gx1 / omega
    x = q * s
    f1 = j0(a * x)
    f2 = j0(2.0 * a * x)
    return float(
        -h * g * f1
        - 0.5 * gy * (g * g + w)
        + 0.5 * gy * (g * g - w) * f2
        - gx0 * (1.0 - u) * q * q
    )


def _geometry(q, p):
    """Shared chain-rule pieces for the interior derivatives."""
    u = q * q + p * p
    s = np.sqrt(1.0 - u)
    x = q * s
    x_q = s - q * q / s
    x_p = -q * p / s
    s3 = s * s * s
    x_qq = -3.0 * q / s - q ** 3 / s3
    x_qp = -p / s - q * q * p / s3
    x_pp = -q / s - q * p * p / s3
    return u, s, x, x_q, x_p, x_qq, x_qp, x_pp


def qel_grad(q, p, h, gx0, gx1, gy, omega):
    """Analytic gradient (dE/dQ, dE/dP); interior points only (u < 1)."""
    u, s, x, x_q, x_p, _, _, _ = _geometry(q, p)
    g = u - 0.5
    a = 2.0 * gx1 / omega
    z1, z2 = a * x, 2.0 * a * x
    f1, f2 = j0(z1), j0(z2)
    d1_1, d1_2 = -j1(z1), -j1(z2)
    f1_q, f1_p = d1_1 * a * x_q, d1_1 * a * x_p
    f2_q, f2_p = d1_2 * 2.0 * a * x_q, d1_2 * 2.0 * a * x_p

    g_q, g_p = 2.0 * q, 2.0 * p
    gsq_q, gsq_p = 4.0 * g * q, 4.0 * g * p
    w = (1.0 - u) * p * p
    w_q = -2.0 * q * p * p
    w_p = 2.0 * p - 2.0 * p * q * q - 4.0 * p ** 3
    tau_q = -gx0 * (2.0 * q - 4.0 * q ** 3 - 2.0 * q * p * p)
    tau_p = 2.0 * gx0 * q * q * p

    eq = (
        -h * (g_q * f1 + g * f1_q)
        - 0.5 * gy * (gsq_q + w_q)
        + 0.5 * gy * ((gsq_q - w_q) * f2 + (g * g - w) * f2_q)
        + tau_q
    )
    ep = (
        -h * (g_p * f1 + g * f1_p)
        - 0.5 * gy * (gsq_p + w_p)
        + 0.5 * gy * ((gsq_p - w_p) * f2 + (g * g - w) * f2_p)
        + tau_p
    )
    return float(eq), float(ep)


def qel_hess(q, p, h, gx0, gx1, gy, omega):
    """Analytic Hessian entries (E_QQ, E_QP, E_PP); interior points only."""
    u, s, x, x_q, x_p, x_qq, x_qp, x_pp = _geometry(q, p)
    g = u - 0.5
    a = 2.0 * gx1 / omega
    c1, c2 = a, 2.0 * a
    z1, z2 = c1 * x, c2 * x
    f1, f2 = j0(z1), j0(z2)
    d1_1, d1_2 = -j1(z1), -j1(z2)
    d2_1 = 0.5 * (jn(2, z1) - f1)
    d2_2 = 0.5 * (jn(2, z2) - f2)
    f1_q, f1_p = d1_1 * c1 * x_q, d1_1 * c1 * x_p
    f2_q, f2_p = d1_2 * c2 * x_q, d1_2 * c2 * x_p
    f1_qq = d2_1 * c1 * c1 * x_q * x_q + d1_1 * c1 * x_qq
    f1_qp = d2_1 * c1 * c1 * x_q * x_p + d1_1 * c1 * x_qp
    f1_pp = d2_1 * c1 * c1 * x_p * x_p + d1_1 * c1 * x_pp
    f2_qq = d2_2 * c2 * c2 * x_q * x_q + d1_2 * c2 * x_qq
    f2_qp = d2_2 * c2 * c2 * x_q * x_p + d1_2 * c2 * x_qp
    f2_pp = d2_2 * c2 * c2 * x_p * x_p + d1_2 * c2 * x_pp

    g_q, g_p = 2.0 * q, 2.0 * p
    gsq_q, gsq_p = 4.0 * g * q, 4.0 * g * p
    gsq_qq, gsq_qp, gsq_pp = 4.0 * g + 8.0 * q * q, 8.0 * q * p, 4.0 * g + 8.0 * p * p
    w = (1.0 - u) * p * p
    w_q, w_p = -2.0 * q * p * p, 2.0 * p - 2.0 * p * q * q - 4.0 * p ** 3
    w_qq, w_qp, w_pp = -2.0 * p * p, -4.0 * q * p, 2.0 - 2.0 * q * q - 12.0 * p * p
    tau_qq = -gx0 * (2.0 - 12.0 * q * q - 2.0 * p * p)
    tau_qp = 4.0 * gx0 * q * p
    tau_pp = 2.0 * gx0 * q * q

    gmw = g * g - w
    hqq = (
        -h * (2.0 * f1 + 2.0 * g_q * f1_q + g * f1_qq)
        - 0.5 * gy * (gsq_qq + w_qq)
        + 0.5 * gy * ((gsq_qq - w_qq) * f2 + 2.0 * (gsq_q - w_q) * f2_q + gmw * f2_qq)
        + tau_qq
    )
    hqp = (
        -h * (g_q * f1_p + g_p * f1_q + g * f1_qp)
        - 0.5 * gy * (gsq_qp + w_qp)
        + 0.5
        * gy
        * ((gsq_qp - w_qp) * f2 + (gsq_q - w_q) * f2_p + (gsq_p - w_p) * f2_q + gmw * f2_qp)
        + tau_qp
    )
    hpp = (
        -h * (2.0 * f1 + 2.0 * g_p * f1_p + g * f1_pp)
        - 0.5 * gy * (gsq_pp + w_pp)
        + 0.5 * gy * ((gsq_pp - w_pp) * f2 + 2.0 * (gsq_p - w_p) * f2_p + gmw * f2_pp)
        + tau_pp
    )
    return float(hqq), float(hqp), float(hpp)


def qel_grid(qs, ps, h, gx0, gx1, gy, omega):
    """Vectorized landscape values; entry [i, k] is E(qs[i], ps[k]).

    Points outside the closed disk come back NaN.
    """
    qq = np.asarray(qs, dtype=float)[:, None]
    pp = np.asarray(ps, dtype=float)[None, :]
    u = qq * qq + pp * pp
    inside = u <= 1.0
    s = np.sqrt(np.where(inside, 1.0 - u, 0.0))
    g = u - 0.5
    w = (1.0 - u) * pp * pp
    a = 2.0 * gx1 / omega
    x = qq * s
    f1 = j0(a * x)
    f2 = j0(2.0 * a * x)
    out = (
        -h * g * f1
        - 0.5 * gy * (g * g + w)
        + 0.5 * gy * (g * g - w) * f2
        - gx0 * (1.0 - u) * qq * qq
    )
    out[~inside] = np.nan
    return out


def newton_refine(q0, p0, h, gx0, gx1, gy, omega, grad_tol=1e-10, max_iter=200):
    """Descend to a local minimum from (q0, p0).

    Damped Newton with the analytic Hessian when it is positive definite,
    steepest descent otherwise; Armijo backtracking keeps every iterate
    strictly inside the disk.  Returns (q, p, converged, iterations).
    """
    q, p = float(q0), float(p0)
    e = qel_value(q, p, h, gx0, gx1, gy, omega)
    for it in range(max_iter):
        gq, gp = qel_grad(q, p, h, gx0, gx1, gy, omega)
        gnorm = np.hypot(gq, gp)
        if gnorm < grad_tol:
            return q, p, True, it
        hqq, hqp, hpp = qel_hess(q, p, h, gx0, gx1, gy, omega)
        det = hqq * hpp - hqp * hqp
        if hqq > 0.0 and det > 0.0:
            dq = -(hpp * gq - hqp * gp) / det
            dp = -(hqq * gp - hqp * gq) / det
        else:
            dq, dp = -gq, -gp
        dnorm = np.hypot(dq, dp)
        if dnorm > 0.25:
            dq *= 0.25 / dnorm
            dp *= 0.25 / dnorm
        slope = gq * dq + gp * dp
        if slope >= 0.0:  # not a descent direction; fall back to -grad
            dq, dp = -gq / max(gnorm, 1e-300) * 0.01, -gp / max(gnorm, 1e-300) * 0.01
            slope = gq * dq + gp * dp
        step = 1.0
        for _ in range(60):
            qn, pn = q + step * dq, p + step * dp
            if qn * qn + pn * pn <= _U_MAX:
                en = qel_value(qn, pn, h, gx0, gx1, gy, omega)
                if en <= e + 1e-4 * step * slope:
                    break
            step *= 0.5
        else:
            return q, p, False, it + 1
        q, p, e = qn, pn, en
    gq, gp = qel_grad(q, p, h, gx0, gx1, gy, omega)
    return q, p, bool(np.hypot(gq, gp) < grad_tol), max_iter
