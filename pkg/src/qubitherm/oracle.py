"""Independent brute-force oracles used to validate every closed form.

Nothing in here reuses the analytic probe-state formulas: the transverse
oracle integrates the qubit rotation over the thermal quadrature
distribution with Gauss-Hermite nodes, the dispersive oracle sums over a
truncated Fock space, and the full Jaynes-Cummings oracle evolves the
joint state exactly, manifold by manifold.  All oracles are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models
from .estimation import qfi_from_state_derivative
from .models import DensityMatrix2, Model, QubitPrep
from .qmath import csch_half_sq, gauss_hermite_rule

__all__ = [
    "FockTruncation",
    "FullJcParams",
    "TruncationError",
    "probe_state_transverse_quadrature",
    "probe_state_dispersive_focksum",
    "full_jc_probe_state",
    "qfi_numeric",
    "fisher_population_numeric",
    "fd_step",
    "thermal_weights",
]

class TruncationError(RuntimeError):
    """The Fock-space truncation is too small for the evolved support."""


@dataclass(frozen=True)
class FockTruncation:
    """Fock-space cutoff: levels 0..dim-1 and the discarded thermal weight."""

    dim: int
    tail_bound: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("truncation dimension must be positive")

    @classmethod
    def for_tail(cls, beta, eps: float = 1e-15) -> "FockTruncation":
        """Cutoff with thermal tail sum_{n>=N} p_n = e^{-beta N} <= eps,
        plus a 10-level margin for manifold mixing."""
        b = models._beta(beta)
        dim = int(math.ceil(math.log(1.0 / eps) / b)) + 10
        return cls(dim=dim, tail_bound=math.exp(-b * dim))


@dataclass(frozen=True)
class FullJcParams:
    """Detuned Jaynes-Cummings parameters (rates lambda, Delta; time t)."""

    lambda_coupling: float
    delta: float
    time: float

    def __post_init__(self):
        if self.lambda_coupling < 0:
            raise ValueError("coupling rate must be nonnegative")
        if self.time < 0:
            raise ValueError("evolution time must be nonnegative")

    def is_dispersive(self, beta) -> bool:
        """Delta^2/4 > 100 lambda^2 (nbar + 1)."""
        nbar = 1.0 / math.expm1(models._beta(beta))
        return 0.25 * self.delta**2 > 100.0 * self.lambda_coupling**2 * (nbar + 1.0)


def thermal_weights(beta, dim: int) -> np.ndarray:
    """Thermal weights p_n = (1 - e^{-beta}) e^{-beta n}, n < dim."""
    b = models._beta(beta)
    n = np.arange(dim)
    return -math.expm1(-b) * np.exp(-b * n)


def _rotation_x(angle):
    """exp(-i angle sigma_x / 2) for an array of angles: (k, 2, 2)."""
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    u = np.zeros(angle.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 1] = c
    u[..., 0, 1] = -1j * s
    u[..., 1, 0] = -1j * s
    return u


def probe_state_transverse_quadrature(beta, prep: QubitPrep, time,
                                      alpha: float = 0.0,
                                      order: int = 128) -> DensityMatrix2:
    """Quadrature-average oracle for the transverse probe state.

    Averages e^{-i tau x sigma_x} |psi><psi| e^{i tau x sigma_x} over the
    thermal distribution of the oscillator quadrature: a Gaussian of
    variance nbar + 1/2 and mean sqrt(2) alpha, sampled at Gauss-Hermite
    nodes.
    """
    if order < 32:
        raise ValueError("need at least 32 quadrature nodes")
    b = models._beta(beta)
    t = models._tau(time)
    rule = gauss_hermite_rule(order)
    sigma2 = 1.0 / math.expm1(b) + 0.5
    x = math.sqrt(2.0) * float(alpha) + math.sqrt(2.0 * sigma2) * rule.nodes
    u = _rotation_x(2.0 * t * x)
    psi = models.pure_qubit_state(prep).matrix
    rotated = np.einsum("kab,bc,kdc->kad", u, psi, u.conj())
    rho = np.einsum("k,kad->ad", rule.weights / math.sqrt(math.pi), rotated)
    return DensityMatrix2(0.5 * (rho + rho.conj().T))


def probe_state_dispersive_focksum(beta, prep: QubitPrep, time,
                                   trunc: FockTruncation) -> DensityMatrix2:
    """Truncated Fock-sum oracle for the dispersive probe state.

    Sums p_n e^{-i tau n sigma_x} |psi><psi| e^{i tau n sigma_x} over the
    retained levels and renormalizes by the retained weight.
    """
    if trunc.tail_bound > 1e-15:
        raise ValueError("truncation tail must not exceed 1e-15")
    b = models._beta(beta)
    t = models._tau(time)
    w = thermal_weights(b, trunc.dim)
    u = _rotation_x(2.0 * t * np.arange(trunc.dim))
    psi = models.pure_qubit_state(prep).matrix
    rotated = np.einsum("kab,bc,kdc->kad", u, psi, u.conj())
    rho = np.einsum("k,kad->ad", w / w.sum(), rotated)
    return DensityMatrix2(0.5 * (rho + rho.conj().T))


def _hadamard_adapted_amplitudes(prep: QubitPrep):
    # The dispersive model dephases in the coupling (sigma_x) eigenbasis;
    # the physical JC dynamics dephases the bare qubit basis.  Preparation
    # angles are therefore interpreted relative to the coupling axis.
    c0, c1 = prep.amplitudes()
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return (c0 + c1) * inv_sqrt2, (c0 - c1) * inv_sqrt2


def full_jc_probe_state(beta, prep: QubitPrep, params: FullJcParams,
                        trunc: FockTruncation) -> DensityMatrix2:
    """Exact reduced probe state under the detuned Jaynes-Cummings model.

    Each excitation manifold {|1, n>, |0, n+1>} evolves as a 2x2 block
    with Rabi frequency Omega_{n+1} = sqrt(Delta^2/4 + lambda^2 (n+1))
    and sine kernel K = sin(Omega t)/Omega; |0, 0> only acquires a phase.
    Raises TruncationError when the evolved support reaches the top two
    retained levels.
    """
    b = models._beta(beta)
    lam, delta, t = params.lambda_coupling, params.delta, params.time
    dim = trunc.dim
    a0, a1 = _hadamard_adapted_amplitudes(prep)
    weights = thermal_weights(b, dim)
    if weights[-2:].sum() > 1e-10:
        raise TruncationError(
            f"population {weights[-2:].sum():.3e} in the top two Fock levels; "
            "increase the truncation")

    omega = np.sqrt(0.25 * delta**2 + lam**2 * np.arange(1, dim + 1))
    kern = np.sin(omega * t) / omega
    cos_t = np.cos(omega * t)

    rho = np.zeros((2, 2), dtype=complex)
    for m in range(dim):
        # amplitude table over (qubit, fock): m-1, m, m+1 can be populated
        amp0 = np.zeros(dim + 1, dtype=complex)  # qubit |0>
        amp1 = np.zeros(dim + 1, dtype=complex)  # qubit |1>
        if m == 0:
            amp0[0] += a0 * complex(math.cos(0.5 * delta * t),
                                    math.sin(0.5 * delta * t))
        else:
            om, kk, ct = omega[m - 1], kern[m - 1], cos_t[m - 1]
            amp1[m - 1] += a0 * (-1j * lam * math.sqrt(m) * kk)
            amp0[m] += a0 * (ct + 0.5j * delta * kk)
        om, kk, ct = omega[m], kern[m], cos_t[m]
        amp1[m] += a1 * (ct - 0.5j * delta * kk)
        amp0[m + 1] += a1 * (-1j * lam * math.sqrt(m + 1) * kk)

        norm = np.vdot(amp0, amp0).real + np.vdot(amp1, amp1).real
        if abs(norm - 1.0) > 1e-11:
            raise ArithmeticError(f"manifold evolution lost unitarity: {norm}")
        rho[0, 0] += weights[m] * np.vdot(amp0, amp0).real
        rho[1, 1] += weights[m] * np.vdot(amp1, amp1).real
        rho[0, 1] += weights[m] * np.vdot(amp1, amp0)

    rho[1, 0] = np.conj(rho[0, 1])
    rho /= rho.trace().real
    return DensityMatrix2(0.5 * (rho + rho.conj().T))


def _state_closure(model, prep, time):
    if callable(model):
        return lambda b: np.asarray(model(b, prep, time))
    if model is Model.TRANSVERSE:
        return lambda b: models.probe_state_transverse(b, prep, time).matrix
    if model is Model.DISPERSIVE:
        return lambda b: models.probe_state_dispersive(b, prep, time).matrix
    raise ValueError(f"unknown model {model}")


def fd_step(model: Model, beta, time) -> float:
    """Finite-difference step adapted to the local beta-scale of the state.

    The transverse state varies on the scale 1/|d zeta/d beta|, which can
    be much shorter than beta itself at high temperature; the dispersive
    state varies on an O(1) scale through e^{-beta}.
    """
    b = models._beta(beta)
    hi = 1e-3 * max(1.0, b)
    if model is Model.TRANSVERSE:
        t = models._tau(time)
        zrate = 0.5 * t * t * csch_half_sq(b)
        return min(hi, max(0.04 / max(1.0, zrate), 1e-7 * max(1.0, b)))
    return hi


def _five_point_states(rho_fn, beta, h):
    return [rho_fn(beta + k * h) for k in (-2.0, -1.0, 1.0, 2.0)]


def _check_step(b: float, h: float | None) -> float:
    if h is None:
        h = 1e-5 * max(1.0, b)
    if not 1e-7 * max(1.0, b) <= h <= 1e-3 * max(1.0, b):
        raise ValueError("step h outside [1e-7, 1e-3] * max(1, beta)")
    return h


def _dispersive_fd_parts(beta, prep, time, h):
    """Fock-resolved state and five-point derivative for the dispersive
    model.

    The rotation factors do not depend on beta, so the stencil acts on
    the (renormalized) thermal weights level by level; each level keeps
    its own relative precision and the cold-state derivative of scale
    e^{-beta} survives.  Differencing the assembled 2x2 entries instead
    would bury it under the 1-scale representation noise.
    """
    b = models._beta(beta)
    t = models._tau(time)
    trunc = FockTruncation.for_tail(b - 2.0 * h, 1e-15)
    u = _rotation_x(2.0 * t * np.arange(trunc.dim))
    psi = models.pure_qubit_state(prep).matrix
    rotated = np.einsum("kab,bc,kdc->kad", u, psi, u.conj())

    def wts(bb):
        w = thermal_weights(bb, trunc.dim)
        return w / w.sum()

    dw = (wts(b - 2.0 * h) - 8.0 * wts(b - h) + 8.0 * wts(b + h)
          - wts(b + 2.0 * h)) / (12.0 * h)
    # the n=0 weight is 1 - O(e^{-beta}); its variation drowns in the
    # 1-scale float, but normalization pins d w_0 = -sum_{n>=1} d w_n
    dw[0] = -dw[1:].sum()
    w0 = wts(b)
    rho = np.einsum("k,kad->ad", w0, rotated)
    drho = np.einsum("k,kad->ad", dw, rotated)

    # stable small eigenvalue: 1 - |r|^2 as a sum of nonnegative terms,
    # sum_{n<m} 2 p_n p_m (1 - r_n . r_m) with unit Bloch vectors r_n
    bloch = np.stack([2.0 * rotated[:, 0, 1].real,
                      -2.0 * rotated[:, 0, 1].imag,
                      (rotated[:, 0, 0] - rotated[:, 1, 1]).real], axis=1)
    dots = np.clip(1.0 - bloch @ bloch.T, 0.0, None)
    np.fill_diagonal(dots, 0.0)  # exactly zero for unit Bloch vectors
    omr2 = float(w0 @ dots @ w0)
    r = math.sqrt(max(1.0 - omr2, 0.0))
    small = 0.5 * omr2 / (1.0 + r)
    return rho, drho, (1.0 - small, small)


def qfi_numeric(model, beta, prep: QubitPrep, time, h: float | None = None) -> float:
    """QFI with the state derivative taken by five-point finite differences.

    `model` is a Model tag or a callable (beta, prep, time) -> 2x2 array
    (e.g. a full-JC closure).  The step defaults to 1e-5 * max(1, beta)
    and must stay within [1e-7, 1e-3] * max(1, beta).  The dispersive
    model is differenced in its Fock representation (see
    `_dispersive_fd_parts`).
    """
    b = models._beta(beta)
    h = _check_step(b, h)
    if model is Model.DISPERSIVE:
        rho, drho, eigenvalues = _dispersive_fd_parts(b, prep, time, h)
        return qfi_from_state_derivative(rho, drho, eigenvalues)
    rho_fn = _state_closure(model, prep, time)
    s = _five_point_states(rho_fn, b, h)
    drho = (s[0] - 8.0 * s[1] + 8.0 * s[2] - s[3]) / (12.0 * h)
    return qfi_from_state_derivative(rho_fn(b), drho)


def fisher_population_numeric(model, beta, prep: QubitPrep, time,
                              h: float | None = None) -> float:
    """Population Fisher information (d_beta p0)^2 / (p0 p1) with a
    five-point finite-difference derivative."""
    b = models._beta(beta)
    h = _check_step(b, h)
    if model is Model.DISPERSIVE:
        rho, drho, _ = _dispersive_fd_parts(b, prep, time, h)
        dp0 = drho[0, 0].real
        p0, p1 = rho[0, 0].real, rho[1, 1].real
    else:
        rho_fn = _state_closure(model, prep, time)
        s = _five_point_states(rho_fn, b, h)
        dp0 = (s[0][0, 0] - 8.0 * s[1][0, 0] + 8.0 * s[2][0, 0]
               - s[3][0, 0]).real / (12.0 * h)
        rho = rho_fn(b)
        p0, p1 = rho[0, 0].real, rho[1, 1].real
    if dp0 == 0.0:
        return 0.0
    return dp0 * dp0 / (p0 * p1)
