# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of `_kernels_py`: identical API, scalar C speed.

The grid evaluator releases the GIL and loops over the lattice with the
same e^{-beta}-factored formulas as the pure backend.
"""

import numpy as np

from libc.math cimport (M_E, cos, exp, expm1, fabs, log, log1p, sin,
                        sqrt, tanh)

BACKEND = "compiled"

MODEL_TRANSVERSE = 0
MODEL_DISPERSIVE = 1


cdef double _lambert_w0(double x) except? -2.0:
    cdef double branch = -1.0 / M_E
    cdef double w, p, lx, llx, ew, f, wp1, denom, tol
    cdef int i
    if x != x:
        raise ValueError("lambert_w0: argument is NaN")
    if x < branch:
        if x < branch * (1.0 + 1e-12) - 1e-300:
            raise ValueError(f"lambert_w0: argument {x} < -1/e")
        x = branch
    if x == 0.0:
        return 0.0
    if x < -0.25:
        p = sqrt(2.0 * (M_E * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    elif x < 3.0:
        w = log1p(x) * (1.0 - 0.24 / (1.0 + x))
    else:
        lx = log(x)
        llx = log(lx)
        w = lx - llx + llx / lx
    tol = 1e-13 * max(1.0, fabs(x))
    for i in range(60):
        ew = exp(w)
        f = w * ew - x
        if fabs(f) <= 0.25 * tol:
            break
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1) if wp1 != 0.0 else ew
        w -= f / denom
    if fabs(w * exp(w) - x) > tol:
        raise ArithmeticError(f"lambert_w0 failed to converge at x={x}")
    return w if w > -1.0 else -1.0


ZETA_OPT = 1.0 + 0.5 * _lambert_w0(-2.0 / (M_E * M_E))
cdef double _ZETA_OPT_C = ZETA_OPT


def lambert_w0(double x):
    return _lambert_w0(x)


def tau_opt_transverse(double beta):
    return sqrt(_ZETA_OPT_C * tanh(0.5 * beta))


cdef inline double _zeta(double beta, double tau) noexcept nogil:
    if beta > 700.0:  # coth(beta/2) indistinguishable from 1
        return tau * tau
    return (1.0 + 2.0 / expm1(beta)) * tau * tau


cdef inline double _zeta_db(double beta, double tau) noexcept nogil:
    cdef double q = exp(-beta)
    cdef double om = -expm1(-beta)
    return -2.0 * q / (om * om) * tau * tau


def zeta(double beta, double tau):
    return _zeta(beta, tau)


def transverse_entries(double beta, double theta, double phi, double tau,
                       double zscale=1.0):
    cdef double z = zscale * _zeta(beta, tau)
    cdef double e = exp(-z)
    cdef double one_minus_e = -expm1(-z)
    cdef double st = sin(theta)
    cdef double ch2 = cos(0.5 * theta) ** 2
    cdef double sh2 = sin(0.5 * theta) ** 2
    return (0.5 * one_minus_e + e * ch2,
            0.5 * one_minus_e + e * sh2,
            0.5 * st * cos(phi),
            -0.5 * st * sin(phi) * e)


def transverse_entries_dbeta(double beta, double theta, double phi,
                             double tau, double zscale=1.0):
    cdef double z = zscale * _zeta(beta, tau)
    cdef double de = -zscale * _zeta_db(beta, tau) * exp(-z)
    cdef double st = sin(theta), ct = cos(theta)
    return 0.5 * ct * de, 0.0, -0.5 * st * sin(phi) * de


cdef inline void _disp_csg(double beta, double tau, double *out) noexcept nogil:
    # out: gamma, C, S, dC, dS
    cdef double q = exp(-beta)
    cdef double omq = -expm1(-beta)
    cdef double complex z = cos(2.0 * tau) + 1j * sin(2.0 * tau)
    cdef double complex denom = 1.0 - q * z
    cdef double complex w = omq / denom
    cdef double complex wp = q * (1.0 - z) / (denom * denom)
    cdef double d = 1.0 - 2.0 * q * cos(2.0 * tau) + q * q
    out[0] = -q * omq / (2.0 * d)
    out[1] = w.real
    out[2] = w.imag
    out[3] = wp.real
    out[4] = wp.imag


def dispersive_kernel_values(double beta, double tau):
    cdef double v[5]
    _disp_csg(beta, tau, v)
    return v[0], v[1], v[2], v[3], v[4]


def dispersive_entries(double beta, double theta, double phi, double tau):
    cdef double q = exp(-beta)
    cdef double d = 1.0 - 2.0 * q * cos(2.0 * tau) + q * q
    cdef double one_minus_c = q * (1.0 - cos(2.0 * tau)) * (1.0 + q) / d
    cdef double c = 1.0 - one_minus_c
    cdef double s = (1.0 - q) * q * sin(2.0 * tau) / d
    cdef double st = sin(theta)
    cdef double sy = st * sin(phi)
    cdef double ch2 = cos(0.5 * theta) ** 2
    cdef double sh2 = sin(0.5 * theta) ** 2
    return (0.5 * (one_minus_c + s * sy) + c * ch2,
            0.5 * (one_minus_c - s * sy) + c * sh2,
            0.5 * st * cos(phi),
            -0.5 * (c * sy - s * cos(theta)))


def dispersive_entries_dbeta(double beta, double theta, double phi,
                             double tau):
    cdef double v[5]
    cdef double st = sin(theta), ct = cos(theta)
    cdef double ry, rz
    _disp_csg(beta, tau, v)
    ry = st * sin(phi)
    rz = ct
    return (0.5 * (v[4] * ry + v[3] * rz),
            0.0,
            -0.5 * (v[3] * ry - v[4] * rz))


cdef inline double _fisher_transverse(double beta, double theta, double tau,
                                      double zscale) noexcept nogil:
    cdef double z = zscale * _zeta(beta, tau)
    cdef double de = -zscale * _zeta_db(beta, tau) * exp(-z)
    cdef double ct = cos(theta)
    cdef double num = ct * ct * de * de
    cdef double e, st2
    if num == 0.0:
        return 0.0
    e = exp(-z)
    st2 = 1.0 - ct * ct
    return num / (-expm1(-2.0 * z) + e * e * st2)


cdef inline double _fisher_dispersive(double beta, double theta, double phi,
                                      double tau) noexcept nogil:
    cdef double v[5]
    cdef double st = sin(theta), ct = cos(theta)
    cdef double ry, rz, rzp, drz, denom
    _disp_csg(beta, tau, v)
    ry = st * sin(phi)
    rz = ct
    rzp = v[2] * ry + v[1] * rz
    drz = v[4] * ry + v[3] * rz
    denom = 1.0 - rzp * rzp
    if drz == 0.0 or denom <= 0.0:
        return 0.0  # pure-state limit (tau at a revival, or q underflow)
    return drz * drz / denom


cdef inline double _qfi_transverse(double beta, double theta, double phi,
                                   double tau, double zscale) noexcept nogil:
    cdef double z = zscale * _zeta(beta, tau)
    cdef double de = -zscale * _zeta_db(beta, tau) * exp(-z)
    cdef double st = sin(theta), cph = cos(phi)
    if de == 0.0:
        return 0.0
    return de * de * (1.0 - st * st * cph * cph) / (-expm1(-2.0 * z))


cdef inline double _qfi_dispersive(double beta, double theta, double phi,
                                   double tau) noexcept nogil:
    cdef double v[5]
    cdef double st = sin(theta), cph = cos(phi)
    cdef double q, d, one_minus_r2, radial
    _disp_csg(beta, tau, v)
    q = exp(-beta)
    d = 1.0 - 2.0 * q * cos(2.0 * tau) + q * q
    one_minus_r2 = 2.0 * q * (1.0 - cos(2.0 * tau)) / d
    if (v[3] == 0.0 and v[4] == 0.0) or one_minus_r2 <= 0.0:
        return 0.0
    radial = v[1] * v[3] + v[2] * v[4]
    return (v[3] * v[3] + v[4] * v[4] + radial * radial / one_minus_r2) \
        * (1.0 - st * st * cph * cph)


def p0_population(int model, double beta, double theta, double phi,
                  double tau, double zscale=1.0):
    if model == MODEL_TRANSVERSE:
        return transverse_entries(beta, theta, phi, tau, zscale)[0]
    return dispersive_entries(beta, theta, phi, tau)[0]


def dp0_population(int model, double beta, double theta, double phi,
                   double tau, double zscale=1.0):
    if model == MODEL_TRANSVERSE:
        return transverse_entries_dbeta(beta, theta, phi, tau, zscale)[0]
    return dispersive_entries_dbeta(beta, theta, phi, tau)[0]


def fisher_population(int model, double beta, double theta, double phi,
                      double tau, double zscale=1.0):
    if model == MODEL_TRANSVERSE:
        return _fisher_transverse(beta, theta, tau, zscale)
    return _fisher_dispersive(beta, theta, phi, tau)


def qfi_closed(int model, double beta, double theta, double phi, double tau,
               double zscale=1.0):
    if model == MODEL_TRANSVERSE:
        return _qfi_transverse(beta, theta, phi, tau, zscale)
    return _qfi_dispersive(beta, theta, phi, tau)


def one_minus_bloch_norm_sq(int model, double beta, double theta,
                            double phi, double tau, double zscale=1.0):
    cdef double st = sin(theta), cp = cos(phi)
    cdef double weight = 1.0 - st * st * cp * cp
    cdef double q, d
    if model == MODEL_TRANSVERSE:
        return weight * (-expm1(-2.0 * zscale * _zeta(beta, tau)))
    q = exp(-beta)
    d = 1.0 - 2.0 * q * cos(2.0 * tau) + q * q
    return weight * 2.0 * q * (1.0 - cos(2.0 * tau)) / d


def stable_eigenvalues(int model, double beta, double theta, double phi,
                       double tau, double zscale=1.0):
    cdef double omr2 = one_minus_bloch_norm_sq(model, beta, theta, phi,
                                               tau, zscale)
    cdef double r = sqrt(max(1.0 - omr2, 0.0))
    cdef double small = 0.5 * omr2 / (1.0 + r)
    return 1.0 - small, small


def fisher_qfi_grid(int model, double beta, thetas, phis, taus,
                    double zscale=1.0):
    """Vectorized (F, H) over a theta x phi x tau lattice at fixed beta.

    The tau-dependent transcendentals are hoisted out of the lattice
    loop; the inner loop is pure arithmetic.
    """
    cdef double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef double[::1] ta = np.ascontiguousarray(taus, dtype=np.float64)
    cdef Py_ssize_t nt = th.shape[0], np_ = ph.shape[0], nu = ta.shape[0]
    fout = np.empty((nt, np_, nu), dtype=np.float64)
    hout = np.empty((nt, np_, nu), dtype=np.float64)
    cdef double[:, :, ::1] fv = fout
    cdef double[:, :, ::1] hv = hout
    cdef Py_ssize_t i, j, k
    cdef int transverse = 1 if model == MODEL_TRANSVERSE else 0

    # per-tau precomputation
    pre = np.empty((6, nu), dtype=np.float64)
    cdef double[:, ::1] pv = pre
    cdef double v[5]
    cdef double z, de, omr2, radial
    for k in range(nu):
        if transverse:
            z = zscale * _zeta(beta, ta[k])
            de = -zscale * _zeta_db(beta, ta[k]) * exp(-z)
            pv[0, k] = de                  # d e^{-zeta} / d beta
            pv[1, k] = exp(-z)             # e^{-zeta}
            pv[2, k] = -expm1(-2.0 * z)    # 1 - e^{-2 zeta}
        else:
            _disp_csg(beta, ta[k], v)
            pv[0, k] = v[1]                # C
            pv[1, k] = v[2]                # S
            pv[2, k] = v[3]                # dC
            pv[3, k] = v[4]                # dS
            omr2 = 2.0 * exp(-beta) * (1.0 - cos(2.0 * ta[k])) \
                / (1.0 - 2.0 * exp(-beta) * cos(2.0 * ta[k]) + exp(-2.0 * beta))
            radial = v[1] * v[3] + v[2] * v[4]
            if (v[3] == 0.0 and v[4] == 0.0) or omr2 <= 0.0:
                pv[4, k] = 0.0             # H at theta = 0
            else:
                pv[4, k] = v[3] * v[3] + v[4] * v[4] + radial * radial / omr2

    cdef double st, ct, sy, cp2, weight, num, rzp, drz, denom
    with nogil:
        for i in range(nt):
            st = sin(th[i])
            ct = cos(th[i])
            for j in range(np_):
                cp2 = cos(ph[j])
                weight = 1.0 - st * st * cp2 * cp2
                sy = st * sin(ph[j])
                for k in range(nu):
                    if transverse:
                        num = ct * ct * pv[0, k] * pv[0, k]
                        if num == 0.0:
                            fv[i, j, k] = 0.0
                        else:
                            fv[i, j, k] = num / (pv[2, k]
                                + pv[1, k] * pv[1, k] * st * st)
                        if pv[0, k] == 0.0:
                            hv[i, j, k] = 0.0
                        else:
                            hv[i, j, k] = pv[0, k] * pv[0, k] * weight \
                                / pv[2, k]
                    else:
                        rzp = pv[1, k] * sy + pv[0, k] * ct
                        drz = pv[3, k] * sy + pv[2, k] * ct
                        denom = 1.0 - rzp * rzp
                        if drz == 0.0 or denom <= 0.0:
                            fv[i, j, k] = 0.0
                        else:
                            fv[i, j, k] = drz * drz / denom
                        hv[i, j, k] = pv[4, k] * weight
    return fout, hout
