"""Parameter types and closed-form probe-state generators.

Basis convention: |0> = (1, 0)^T, |1> = (0, 1)^T, sigma_z = diag(1, -1).
The probe starts in the pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
and is reduced after interacting with a thermal oscillator under one of
two couplings:

* transverse  -- quadrature coupling; coherence decays with the exponent
  zeta = coth(beta/2) tau^2,
* dispersive  -- number-operator coupling; the Bloch vector precesses by
  the thermal trigonometric sums C, S (geometric series over Fock space).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .qmath import coth_half, sinc

__all__ = [
    "InverseTemperature",
    "QubitPrep",
    "ProtocolTime",
    "DensityMatrix2",
    "Model",
    "DispersiveKernel",
    "pure_qubit_state",
    "probe_state_transverse",
    "probe_state_transverse_displaced",
    "probe_state_dispersive",
    "dispersive_kernel",
    "state_derivative",
    "displacement_unitary",
]

# Test hook: multiplies the decoherence exponent in every analytic
# transverse-model formula.  The validation CLI's sensitivity canary
# perturbs this to verify the oracle comparisons actually bite.
_ZETA_SCALE = 1.0

_TOL = 1e-12


class Model(enum.Enum):
    """Coupling model selector."""

    TRANSVERSE = kernels.MODEL_TRANSVERSE
    DISPERSIVE = kernels.MODEL_DISPERSIVE

    @classmethod
    def parse(cls, name: str) -> "Model":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown model {name!r}; "
                             "expected 'transverse' or 'dispersive'") from None


@dataclass(frozen=True)
class InverseTemperature:
    """Dimensionless inverse temperature beta = Omega/(k_B T)."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")

    @property
    def nbar(self) -> float:
        """Mean thermal occupation 1/(e^beta - 1)."""
        return 1.0 / math.expm1(self.beta)


@dataclass(frozen=True)
class QubitPrep:
    """Bloch angles of the initial pure probe state."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def amplitudes(self):
        c0 = math.cos(0.5 * self.theta)
        c1 = complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(0.5 * self.theta)
        return c0, c1


@dataclass(frozen=True)
class ProtocolTime:
    """Dimensionless interaction time tau = g t."""

    tau: float

    def __post_init__(self):
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be nonnegative and finite, got {self.tau}")


@dataclass(frozen=True)
class DensityMatrix2:
    """A 2x2 density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("density matrix must be 2x2")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("density matrix entries must be finite")
        if abs(m[0, 1] - np.conj(m[1, 0])) > _TOL or \
                abs(m[0, 0].imag) > _TOL or abs(m[1, 1].imag) > _TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = m[0, 0].real + m[1, 1].real
        if abs(tr - 1.0) > _TOL:
            raise ValueError(f"trace must be 1, got {tr}")
        # eigenvalues (1 +- |r|)/2; positivity means |r| <= 1
        if min(self.eigenvalues()) < -_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self):
        m = np.asarray(self.matrix, dtype=complex)
        mean = 0.5 * (m[0, 0].real + m[1, 1].real)
        radius = math.hypot(0.5 * (m[0, 0].real - m[1, 1].real), abs(m[0, 1]))
        return mean + radius, mean - radius

    @property
    def p0(self) -> float:
        """Population of |0> (outcome probability of the 0 projector)."""
        return float(self.matrix[0, 0].real)

    def bloch(self):
        m = self.matrix
        return np.array([2.0 * m[0, 1].real, -2.0 * m[0, 1].imag,
                         (m[0, 0] - m[1, 1]).real])

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class DispersiveKernel:
    """Resonance prefactor and thermal trigonometric sums (Gamma, C, S)."""

    gamma_factor: float
    cosine_sum: float
    sine_sum: float

    def __post_init__(self):
        # strictly negative for beta > 0; -0.0 once e^{-beta} underflows
        if not self.gamma_factor <= 0:
            raise ValueError("Gamma must be negative for beta > 0")
        if self.cosine_sum**2 + self.sine_sum**2 > 1.0 + 1e-12:
            raise ValueError("C^2 + S^2 must not exceed 1")


def _beta(value) -> float:
    if isinstance(value, InverseTemperature):
        return value.beta
    return InverseTemperature(float(value)).beta


def _tau(value) -> float:
    if isinstance(value, ProtocolTime):
        return value.tau
    return ProtocolTime(float(value)).tau


def _matrix_from_entries(r00, r11, re01, im01) -> np.ndarray:
    off = complex(re01, im01)
    return np.array([[r00, off], [off.conjugate(), r11]], dtype=complex)


def pure_qubit_state(prep: QubitPrep) -> DensityMatrix2:
    """Rank-1 projector onto the prepared probe state."""
    c0, c1 = prep.amplitudes()
    v = np.array([c0, c1], dtype=complex)
    return DensityMatrix2(np.outer(v, v.conj()))


def probe_state_transverse(beta, prep: QubitPrep, time) -> DensityMatrix2:
    """Reduced probe state after quadrature coupling to the thermal mode.

    Diagonal (1 +- cos(theta) e^{-zeta})/2 and off-diagonal
    (sin(theta)/2)(cos(phi) -+ i sin(phi) e^{-zeta}).
    """
    entries = kernels.transverse_entries(
        _beta(beta), prep.theta, prep.phi, _tau(time), _ZETA_SCALE)
    return DensityMatrix2(_matrix_from_entries(*entries))


def displacement_unitary(alpha: float, time) -> np.ndarray:
    """Qubit-frame rotation exp(-i sqrt(2) alpha tau sigma_x) produced by
    an initial oscillator displacement of real amplitude alpha."""
    if isinstance(alpha, complex) or not math.isfinite(float(alpha)):
        raise ValueError("displacement amplitude must be a finite real number")
    a = math.sqrt(2.0) * float(alpha) * _tau(time)
    return np.array([[math.cos(a), -1j * math.sin(a)],
                     [-1j * math.sin(a), math.cos(a)]], dtype=complex)


def probe_state_transverse_displaced(beta, prep: QubitPrep, time,
                                     alpha: float) -> DensityMatrix2:
    """Transverse probe state for a displaced thermal oscillator.

    The displacement shifts the quadrature distribution by sqrt(2) alpha,
    which conjugates the undisplaced probe state by a beta-independent
    sigma_x rotation.
    """
    u = displacement_unitary(alpha, time)
    rho = probe_state_transverse(beta, prep, time).matrix
    return DensityMatrix2(u @ rho @ u.conj().T)


def probe_state_dispersive(beta, prep: QubitPrep, time) -> DensityMatrix2:
    """Reduced probe state after number-operator coupling; periodic in tau
    with period pi."""
    entries = kernels.dispersive_entries(
        _beta(beta), prep.theta, prep.phi, _tau(time))
    return DensityMatrix2(_matrix_from_entries(*entries))


def dispersive_kernel(beta, time) -> DispersiveKernel:
    """Gamma and the thermal sums C, S entering the dispersive state."""
    gamma, c, s, _, _ = kernels.dispersive_kernel_values(_beta(beta), _tau(time))
    return DispersiveKernel(gamma_factor=gamma, cosine_sum=c, sine_sum=s)


def state_derivative(model: Model, beta, prep: QubitPrep, time,
                     alpha: float = 0.0) -> np.ndarray:
    """Analytic d rho / d beta for either model (plain 2x2 array).

    For the transverse model a nonzero alpha applies the displacement
    conjugation to the derivative as well.
    """
    b, t = _beta(beta), _tau(time)
    if model is Model.TRANSVERSE:
        d00, dre, dim = kernels.transverse_entries_dbeta(
            b, prep.theta, prep.phi, t, _ZETA_SCALE)
    elif model is Model.DISPERSIVE:
        if alpha != 0.0:
            raise ValueError("displacement applies to the transverse model only")
        d00, dre, dim = kernels.dispersive_entries_dbeta(b, prep.theta, prep.phi, t)
    else:
        raise ValueError(f"unknown model {model}")
    off = complex(dre, dim)
    drho = np.array([[d00, off], [off.conjugate(), -d00]], dtype=complex)
    if model is Model.TRANSVERSE and alpha != 0.0:
        u = displacement_unitary(alpha, time)
        drho = u @ drho @ u.conj().T
    return drho


def zeta_identity_residual(beta, time) -> float:
    """|C - 1 - 4 Gamma zeta sinc^2 tau|: links the printed rho00 form to
    the geometric sums; used by property tests."""
    b, t = _beta(beta), _tau(time)
    gamma, c, _, _, _ = kernels.dispersive_kernel_values(b, t)
    z = coth_half(b) * t * t
    return abs(c - 1.0 - 4.0 * gamma * z * sinc(t) ** 2)
