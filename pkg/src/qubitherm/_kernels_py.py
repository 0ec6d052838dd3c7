"""Pure-Python twin of the compiled kernels.

Scalar closed forms use only the math module; the grid evaluator is
numpy-vectorized.  The compiled module `_kernels_cy` mirrors this API
exactly; `qubitherm.kernels` selects whichever is importable.

Model tags: 0 = transverse (quadrature coupling), 1 = dispersive
(number-operator coupling).  All formulas are written in the
e^{-beta}-factored forms so nothing overflows at large beta.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .qmath import lambert_w0

BACKEND = "pure"

MODEL_TRANSVERSE = 0
MODEL_DISPERSIVE = 1

# decoherence exponent at the optimal transverse interaction time,
# 1 + W(-2/e^2)/2; beta-independent
ZETA_OPT = 1.0 + 0.5 * lambert_w0(-2.0 / math.e**2)


def tau_opt_transverse(beta: float) -> float:
    """Interaction time maximizing the transverse population Fisher
    information: sqrt(zeta_opt * tanh(beta/2))."""
    return math.sqrt(ZETA_OPT * math.tanh(min(0.5 * beta, 30.0)))


def zeta(beta: float, tau: float) -> float:
    """Decoherence exponent coth(beta/2) * tau^2."""
    if beta > 700.0:  # coth(beta/2) indistinguishable from 1
        return tau * tau
    return (1.0 + 2.0 / math.expm1(beta)) * tau * tau


def _zeta_dbeta(beta: float, tau: float) -> float:
    # d/dbeta coth(beta/2) = -csch^2(beta/2)/2
    q = math.exp(-beta)
    om = -math.expm1(-beta)
    return -2.0 * q / (om * om) * tau * tau


def transverse_entries(beta, theta, phi, tau, zscale=1.0):
    """Probe-state entries (rho00, rho11, Re rho01, Im rho01), transverse
    model.  Both diagonals are assembled from nonnegative pieces so a
    near-pure state keeps its small population at full relative precision.
    """
    z = zscale * zeta(beta, tau)
    e = math.exp(-z)
    one_minus_e = -math.expm1(-z)
    st = math.sin(theta)
    ch2 = math.cos(0.5 * theta) ** 2
    sh2 = math.sin(0.5 * theta) ** 2
    return (
        0.5 * one_minus_e + e * ch2,
        0.5 * one_minus_e + e * sh2,
        0.5 * st * math.cos(phi),
        -0.5 * st * math.sin(phi) * e,
    )


def transverse_entries_dbeta(beta, theta, phi, tau, zscale=1.0):
    """Entrywise d/dbeta of the transverse probe state."""
    z = zscale * zeta(beta, tau)
    de = -zscale * _zeta_dbeta(beta, tau) * math.exp(-z)
    st, ct = math.sin(theta), math.cos(theta)
    return 0.5 * ct * de, 0.0, -0.5 * st * math.sin(phi) * de


def dispersive_kernel_values(beta, tau):
    """(Gamma, C, S, dC/dbeta, dS/dbeta) for the dispersive model.

    C + iS is the thermal sum over p_n e^{2 i n tau}; Gamma is the
    (negative) resonance prefactor of the probe matrix elements.
    """
    q = math.exp(-beta)
    omq = -math.expm1(-beta)  # 1 - q
    z = cmath.exp(2j * tau)
    denom = 1.0 - q * z
    w = omq / denom
    wp = q * (1.0 - z) / (denom * denom)
    d = 1.0 - 2.0 * q * math.cos(2.0 * tau) + q * q  # |1-qz|^2
    gamma = -q * omq / (2.0 * d)
    return gamma, w.real, w.imag, wp.real, wp.imag


def dispersive_entries(beta, theta, phi, tau):
    """Probe-state entries (rho00, rho11, Re rho01, Im rho01), dispersive
    model.  Uses the factored 1 - C = q (1 - cos 2 tau)(1 + q)/|1 - q z|^2
    so near-pure cold states keep their small population precise."""
    q = math.exp(-beta)
    d = 1.0 - 2.0 * q * math.cos(2.0 * tau) + q * q
    one_minus_c = q * (1.0 - math.cos(2.0 * tau)) * (1.0 + q) / d
    c = 1.0 - one_minus_c
    s = (1.0 - q) * q * math.sin(2.0 * tau) / d
    st = math.sin(theta)
    sy = st * math.sin(phi)
    ch2 = math.cos(0.5 * theta) ** 2
    sh2 = math.sin(0.5 * theta) ** 2
    return (
        0.5 * (one_minus_c + s * sy) + c * ch2,
        0.5 * (one_minus_c - s * sy) + c * sh2,
        0.5 * st * math.cos(phi),
        -0.5 * (c * sy - s * math.cos(theta)),
    )


def dispersive_entries_dbeta(beta, theta, phi, tau):
    """Entrywise d/dbeta of the dispersive probe state."""
    _, _, _, cp, sp = dispersive_kernel_values(beta, tau)
    st, ct = math.sin(theta), math.cos(theta)
    ry, rz = st * math.sin(phi), ct
    return 0.5 * (sp * ry + cp * rz), 0.0, -0.5 * (cp * ry - sp * rz)


def p0_population(model, beta, theta, phi, tau, zscale=1.0):
    """Ground-state population of the probe (outcome 0 probability)."""
    if model == MODEL_TRANSVERSE:
        return transverse_entries(beta, theta, phi, tau, zscale)[0]
    return dispersive_entries(beta, theta, phi, tau)[0]


def dp0_population(model, beta, theta, phi, tau, zscale=1.0):
    """d p0 / d beta, analytic."""
    if model == MODEL_TRANSVERSE:
        return transverse_entries_dbeta(beta, theta, phi, tau, zscale)[0]
    return dispersive_entries_dbeta(beta, theta, phi, tau)[0]


def fisher_population(model, beta, theta, phi, tau, zscale=1.0):
    """Fisher information of beta for the population measurement."""
    if model == MODEL_TRANSVERSE:
        z = zscale * zeta(beta, tau)
        de = -zscale * _zeta_dbeta(beta, tau) * math.exp(-z)
        ct = math.cos(theta)
        num = ct * ct * de * de
        if num == 0.0:
            return 0.0
        e = math.exp(-z)
        st2 = 1.0 - ct * ct
        den = -math.expm1(-2.0 * z) + e * e * st2  # 1 - e^2 cos^2
        return num / den
    _, c, s, cp, sp = dispersive_kernel_values(beta, tau)
    st, ct = math.sin(theta), math.cos(theta)
    ry, rz = st * math.sin(phi), ct
    rzp = s * ry + c * rz
    drz = sp * ry + cp * rz
    denom = 1.0 - rzp * rzp
    if drz == 0.0 or denom <= 0.0:
        return 0.0  # pure-state limit (tau at a revival, or q underflow)
    return drz * drz / denom


def qfi_closed(model, beta, theta, phi, tau, zscale=1.0):
    """Quantum Fisher information of beta, Bloch-vector closed form.

    For both couplings the initial state is pure and the rotation axis is
    x, so H factorizes as (1 - sin^2 theta cos^2 phi) times the theta=0
    value.
    """
    st = math.sin(theta)
    cph = math.cos(phi)
    weight = 1.0 - st * st * cph * cph
    if model == MODEL_TRANSVERSE:
        z = zscale * zeta(beta, tau)
        de = -zscale * _zeta_dbeta(beta, tau) * math.exp(-z)
        if de == 0.0:
            return 0.0
        return de * de * weight / (-math.expm1(-2.0 * z))
    _, c, s, cp, sp = dispersive_kernel_values(beta, tau)
    q = math.exp(-beta)
    d = 1.0 - 2.0 * q * math.cos(2.0 * tau) + q * q
    one_minus_r2 = 2.0 * q * (1.0 - math.cos(2.0 * tau)) / d
    if (cp == 0.0 and sp == 0.0) or one_minus_r2 <= 0.0:
        return 0.0
    radial = c * cp + s * sp
    return (cp * cp + sp * sp + radial * radial / one_minus_r2) * weight


def one_minus_bloch_norm_sq(model, beta, theta, phi, tau, zscale=1.0):
    """Stable 1 - |r|^2 of the probe Bloch vector.

    Factorizes as (1 - sin^2 theta cos^2 phi) times the coherence loss,
    so near-pure cold states keep full relative precision (the direct
    1 - |r|^2 would cancel catastrophically).
    """
    st, cp = math.sin(theta), math.cos(phi)
    transverse_weight = 1.0 - st * st * cp * cp
    if model == MODEL_TRANSVERSE:
        return transverse_weight * (-math.expm1(-2.0 * zscale * zeta(beta, tau)))
    q = math.exp(-beta)
    d = 1.0 - 2.0 * q * math.cos(2.0 * tau) + q * q
    return transverse_weight * 2.0 * q * (1.0 - math.cos(2.0 * tau)) / d


def stable_eigenvalues(model, beta, theta, phi, tau, zscale=1.0):
    """Probe-state eigenvalues ((1 + |r|)/2, (1 - |r|)/2) with the small
    one computed through the factored 1 - |r|^2."""
    omr2 = one_minus_bloch_norm_sq(model, beta, theta, phi, tau, zscale)
    r = math.sqrt(max(1.0 - omr2, 0.0))
    small = 0.5 * omr2 / (1.0 + r)
    return 1.0 - small, small


def fisher_qfi_grid(model, beta, thetas, phis, taus, zscale=1.0):
    """Vectorized (F, H) over a theta x phi x tau lattice at fixed beta.

    Returns two arrays of shape (len(thetas), len(phis), len(taus)).
    """
    th = np.asarray(thetas, dtype=float)[:, None, None]
    ph = np.asarray(phis, dtype=float)[None, :, None]
    ta = np.asarray(taus, dtype=float)[None, None, :]
    shape = (th.size, ph.size, ta.size)
    st, ct = np.sin(th), np.cos(th)
    weight = 1.0 - (st * np.cos(ph)) ** 2

    if model == MODEL_TRANSVERSE:
        q = math.exp(-beta)
        om = -math.expm1(-beta)
        coth = 1.0 if beta > 700.0 else 1.0 + 2.0 / math.expm1(beta)
        z = zscale * coth * ta * ta
        dz = -zscale * 2.0 * q / (om * om) * ta * ta
        e = np.exp(-z)
        de = -dz * e
        num = (ct * de) ** 2
        den = -np.expm1(-2.0 * z) + e * e * (st * st)
        with np.errstate(invalid="ignore", divide="ignore"):
            fisher = np.where(num == 0.0, 0.0, num / den)
            one_minus_e2 = -np.expm1(-2.0 * z)
            qfi = np.where(de == 0.0, 0.0,
                           de * de * weight / one_minus_e2)
        return (np.broadcast_to(fisher, shape).copy(),
                np.broadcast_to(qfi, shape).copy())

    q = math.exp(-beta)
    omq = -math.expm1(-beta)
    zc = np.exp(2j * ta)
    denom = 1.0 - q * zc
    w = omq / denom
    wp = q * (1.0 - zc) / (denom * denom)
    c, s = w.real, w.imag
    cp, sp = wp.real, wp.imag
    d = 1.0 - 2.0 * q * np.cos(2.0 * ta) + q * q
    ry, rz = st * np.sin(ph), ct
    rzp = s * ry + c * rz
    drz = sp * ry + cp * rz
    with np.errstate(invalid="ignore", divide="ignore"):
        fdenom = 1.0 - rzp * rzp
        fisher = np.where((drz == 0.0) | (fdenom <= 0.0), 0.0,
                          drz * drz / fdenom)
        one_minus_r2 = 2.0 * q * (1.0 - np.cos(2.0 * ta)) / d
        radial = c * cp + s * sp
        h0 = np.where(((cp == 0.0) & (sp == 0.0)) | (one_minus_r2 <= 0.0),
                      0.0, cp * cp + sp * sp + radial * radial / one_minus_r2)
    return (np.broadcast_to(fisher, shape).copy(),
            np.broadcast_to(h0 * weight, shape).copy())
