"""Classical and quantum Fisher information, SLD operators, and optimal
probing protocols for both coupling models.

The quantum Fisher information is always computed two ways -- through the
eigen-decomposition formula applied to the analytic state derivative, and
through the Bloch-vector closed form -- and the two are asserted to agree
before a value is returned.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels, models
from .models import Model, ProtocolTime, QubitPrep
from .qmath import coth_half, csch_half_sq, eig_hermitian_2x2, finite_diff

__all__ = [
    "Povm2",
    "EstimationReport",
    "NoInformationError",
    "InternalConsistencyError",
    "population_povm",
    "outcome_probabilities",
    "fisher_information",
    "fisher_from_probabilities",
    "qfi",
    "qfi_from_state_derivative",
    "qfi_transverse_displaced",
    "fisher_population_transverse_displaced",
    "sld",
    "sld_from_state_derivative",
    "sld_transverse_diag_coeffs",
    "sld_dispersive_eigenframe_coeffs",
    "sld_eigenframe_coeffs",
    "tau_opt_transverse",
    "optimize_protocol",
    "fi_deficit",
    "golden_max",
]


class NoInformationError(ValueError):
    """The measurement record carries no information about beta."""


class InternalConsistencyError(AssertionError):
    """Two independent routes to the same quantity disagreed."""


_QFI_REL_TOL = 1e-8
_QFI_FLOOR = 1e-12
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class Povm2:
    """A qubit POVM: positive effects summing to the identity."""

    effects: tuple

    def __post_init__(self):
        effs = tuple(np.asarray(e, dtype=complex) for e in self.effects)
        if len(effs) < 1 or len(effs) > 8:
            raise ValueError("expected between 1 and 8 effects")
        total = np.zeros((2, 2), dtype=complex)
        for e in effs:
            if e.shape != (2, 2):
                raise ValueError("each effect must be 2x2")
            if abs(e[0, 1] - np.conj(e[1, 0])) > 1e-12 or \
                    abs(e[0, 0].imag) > 1e-12 or abs(e[1, 1].imag) > 1e-12:
                raise ValueError("each effect must be Hermitian")
            w, _ = eig_hermitian_2x2(e)
            if w[1] < -1e-12:
                raise ValueError("each effect must be positive semidefinite")
            total = total + e
        if np.max(np.abs(total - np.eye(2))) > 1e-12:
            raise ValueError("effects must sum to the identity")
        object.__setattr__(self, "effects", effs)


def population_povm() -> Povm2:
    """The sigma_z (population) measurement {|0><0|, |1><1|}."""
    return Povm2((np.diag([1.0, 0.0]).astype(complex),
                  np.diag([0.0, 1.0]).astype(complex)))


def outcome_probabilities(state, povm: Povm2) -> np.ndarray:
    """Outcome probabilities Tr[rho Pi_j]; clipped at 0, sum within 1e-12
    of one."""
    rho = state.matrix if hasattr(state, "matrix") else np.asarray(state)
    p = np.array([np.trace(rho @ e).real for e in povm.effects])
    p = np.clip(p, 0.0, None)
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    return p


def fisher_from_probabilities(probs, dprobs) -> float:
    """Sum_j (d_beta p_j)^2 / p_j with the zero-probability convention.

    A vanishing outcome (p_j < 1e-300) contributes nothing if its
    derivative also vanishes (|dp_j| < 1e-12 * scale); otherwise the
    Fisher information is flagged infinite, never silently truncated.
    """
    probs = np.asarray(probs, dtype=float)
    dprobs = np.asarray(dprobs, dtype=float)
    scale = max(1.0, float(np.max(np.abs(dprobs))))
    total = 0.0
    for p, dp in zip(probs, dprobs):
        if p < 1e-300:
            if abs(dp) < 1e-12 * scale:
                continue
            warnings.warn("zero-probability outcome with nonzero derivative; "
                          "Fisher information is infinite")
            return math.inf
        total += dp * dp / p
    return total


def _is_population(povm: Povm2) -> bool:
    ref = population_povm()
    if len(povm.effects) != 2:
        return False
    return all(np.max(np.abs(a - b)) < 1e-14
               for a, b in zip(povm.effects, ref.effects))


def fisher_information(model: Model, beta, prep: QubitPrep, time,
                       povm: Povm2 | None = None) -> float:
    """Fisher information of beta for the given measurement.

    The population POVM (the default) uses analytic derivatives of the
    outcome probabilities; any other POVM falls back to a five-point
    finite difference of p_j(beta) with step 1e-5 * max(1, beta).
    """
    b = models._beta(beta)
    t = models._tau(time)
    if povm is None or _is_population(povm):
        return kernels.fisher_population(
            model.value, b, prep.theta, prep.phi, t, models._ZETA_SCALE)

    generator = (models.probe_state_transverse if model is Model.TRANSVERSE
                 else models.probe_state_dispersive)
    rho = generator(b, prep, t).matrix
    probs = outcome_probabilities(rho, povm)
    h = 1e-5 * max(1.0, b)

    def prob_at(effect):
        return lambda bb: np.trace(
            generator(bb, prep, t).matrix @ effect).real

    dprobs = [finite_diff(prob_at(e), b, h) for e in povm.effects]
    return fisher_from_probabilities(probs, dprobs)


def qfi_from_state_derivative(rho: np.ndarray, drho: np.ndarray,
                              eigenvalues=None) -> float:
    """QFI from the eigen-decomposition of rho and a state derivative.

    Diagonalizes rho, projects drho onto the eigenbasis, and evaluates
    the spectral QFI formula; for a 2x2 unit-trace state the
    eigenvector-derivative term reduces to 4 |<+| drho |->|^2.  A caller
    holding the eigenvalues in a better-conditioned form (the small one
    of a near-pure state is not recoverable from the stored matrix) may
    pass them in; the eigenvectors always come from the matrix.
    """
    w, v = eig_hermitian_2x2(rho)
    if eigenvalues is not None:
        w = eigenvalues
    m = v.conj().T @ np.asarray(drho, dtype=complex) @ v
    total = 0.0
    for k in range(2):
        diag = m[k, k].real
        if w[k] > _RANK_TOL:
            total += diag * diag / w[k]
        elif abs(diag) > 1e-12:
            warnings.warn("state derivative leaks out of the support; "
                          "QFI is infinite")
            return math.inf
    total += 4.0 * abs(m[0, 1]) ** 2
    return total


def qfi(model: Model, beta, prep: QubitPrep, time) -> float:
    """Quantum Fisher information of beta.

    Computed through (a) the eigen-decomposition formula with the
    analytic state derivative and (b) the Bloch-vector closed form; the
    two must agree to 1e-8 relative wherever the value exceeds 1e-12.
    Returns (a).
    """
    b = models._beta(beta)
    t = models._tau(time)
    generator = (models.probe_state_transverse if model is Model.TRANSVERSE
                 else models.probe_state_dispersive)
    rho = generator(b, prep, t).matrix
    drho = models.state_derivative(model, b, prep, t)
    eigenvalues = kernels.stable_eigenvalues(
        model.value, b, prep.theta, prep.phi, t, models._ZETA_SCALE)
    h_eig = qfi_from_state_derivative(rho, drho, eigenvalues)
    h_bloch = kernels.qfi_closed(model.value, b, prep.theta, prep.phi, t,
                                 models._ZETA_SCALE)
    if max(h_eig, h_bloch) > _QFI_FLOOR and \
            abs(h_eig - h_bloch) > _QFI_REL_TOL * max(h_eig, h_bloch):
        raise InternalConsistencyError(
            f"QFI routes disagree: eigen {h_eig!r} vs Bloch {h_bloch!r} "
            f"at beta={b}, theta={prep.theta}, phi={prep.phi}, tau={t}")
    return h_eig


def qfi_transverse_displaced(beta, prep: QubitPrep, time, alpha: float) -> float:
    """QFI of the displaced-oscillator transverse probe state."""
    b = models._beta(beta)
    t = models._tau(time)
    rho = models.probe_state_transverse_displaced(b, prep, t, alpha).matrix
    drho = models.state_derivative(Model.TRANSVERSE, b, prep, t, alpha=alpha)
    eigenvalues = kernels.stable_eigenvalues(
        Model.TRANSVERSE.value, b, prep.theta, prep.phi, t, models._ZETA_SCALE)
    return qfi_from_state_derivative(rho, drho, eigenvalues)


def fisher_population_transverse_displaced(beta, prep: QubitPrep, time,
                                           alpha: float) -> float:
    """Population Fisher information for the displaced transverse state."""
    b = models._beta(beta)
    t = models._tau(time)
    rho = models.probe_state_transverse_displaced(b, prep, t, alpha).matrix
    drho = models.state_derivative(Model.TRANSVERSE, b, prep, t, alpha=alpha)
    probs = np.array([rho[0, 0].real, rho[1, 1].real])
    dprobs = np.array([drho[0, 0].real, drho[1, 1].real])
    return fisher_from_probabilities(probs, dprobs)


def sld_from_state_derivative(rho: np.ndarray, drho: np.ndarray,
                              eigenvalues=None) -> np.ndarray:
    """Solve d rho = (L rho + rho L)/2 for Hermitian L (2x2).

    A rank-deficient state restricts the solver to the support; the
    kernel-kernel component is set to zero and a warning is emitted.
    Better-conditioned eigenvalues may be passed in, as for
    `qfi_from_state_derivative`.
    """
    w, v = eig_hermitian_2x2(rho)
    if eigenvalues is not None:
        w = eigenvalues
    m = v.conj().T @ np.asarray(drho, dtype=complex) @ v
    l_eig = np.zeros((2, 2), dtype=complex)
    rank_deficient = False
    for i in range(2):
        for j in range(2):
            s = w[i] + w[j]
            if s > _RANK_TOL:
                l_eig[i, j] = 2.0 * m[i, j] / s
            else:
                rank_deficient = True
    if rank_deficient:
        warnings.warn("rank-deficient probe state: SLD restricted to the "
                      "support, kernel component zeroed")
    return v @ l_eig @ v.conj().T


def sld_quadratic_mean(rho: np.ndarray, l_op: np.ndarray,
                       eigenvalues=None) -> float:
    """Tr[rho L^2] evaluated in the eigenbasis of rho.

    Every term is nonnegative there; the computational-basis trace loses
    the result to cancellation for near-pure states (L grows like
    1/eigenvalue on the faint component).
    """
    w, v = eig_hermitian_2x2(np.asarray(rho, dtype=complex))
    if eigenvalues is not None:
        w = eigenvalues
    le = v.conj().T @ np.asarray(l_op, dtype=complex) @ v
    return (w[0] * (abs(le[0, 0]) ** 2 + abs(le[0, 1]) ** 2)
            + w[1] * (abs(le[1, 0]) ** 2 + abs(le[1, 1]) ** 2))


def sld(model: Model, beta, prep: QubitPrep, time) -> np.ndarray:
    """Symmetric logarithmic derivative of the probe state w.r.t. beta."""
    b = models._beta(beta)
    t = models._tau(time)
    generator = (models.probe_state_transverse if model is Model.TRANSVERSE
                 else models.probe_state_dispersive)
    rho = generator(b, prep, t).matrix
    drho = models.state_derivative(model, b, prep, t)
    eigenvalues = kernels.stable_eigenvalues(
        model.value, b, prep.theta, prep.phi, t, models._ZETA_SCALE)
    return sld_from_state_derivative(rho, drho, eigenvalues)


def sld_transverse_diag_coeffs(beta, time, theta: float = 0.0):
    """Closed-form (c0, cz) with L = c0 I + cz sigma_z, transverse model at
    theta in {0, pi}.

    c0 = -(tau^2/4) csch^2(beta/2) (coth(zeta) - 1) for both preparations;
    cz = +(tau^2/4) csch^2(beta/2) csch(zeta) at theta = 0 and the opposite
    sign at theta = pi (the Bloch vector points along -z there).
    """
    b = models._beta(beta)
    t = models._tau(time)
    if not (theta == 0.0 or theta == math.pi):
        raise ValueError("diagonal closed form applies at theta in {0, pi}")
    if t == 0.0:
        return 0.0, 0.0
    z = models._ZETA_SCALE * coth_half(b) * t * t
    pref = 0.25 * t * t * csch_half_sq(b) * models._ZETA_SCALE
    coth_z_minus_1 = 2.0 / math.expm1(2.0 * z)
    csch_z = 2.0 * math.exp(-z) / (-math.expm1(-2.0 * z))
    c0 = -pref * coth_z_minus_1
    cz = pref * csch_z if theta == 0.0 else -pref * csch_z
    return c0, cz


def sld_dispersive_eigenframe_coeffs(beta, time):
    """Closed-form (L0, Lx, Lz) of the dispersive theta=0 SLD decomposed in
    the eigenframe of the probe state (larger eigenvalue first):
    L = L0 I - Lx sigma_x + Lz sigma_z.

    L0 = sinh(beta) / (2 [cos 2 tau - cosh beta])
    Lz = (e^beta + 1) / (2 sqrt(1 + e^{2 beta} - 2 e^beta cos 2 tau))
    Lx = e^beta (e^beta - 1) |sin 2 tau| / (1 + e^{2 beta} - 2 e^beta cos 2 tau)^{3/2}

    evaluated through their e^{-beta}-factored equivalents.
    """
    b = models._beta(beta)
    t = models._tau(time)
    q = math.exp(-b)
    d = 1.0 - 2.0 * q * math.cos(2.0 * t) + q * q
    l0 = -(1.0 - q * q) / (2.0 * d)
    lz = (1.0 + q) / (2.0 * math.sqrt(d))
    lx = q * (1.0 - q) * abs(math.sin(2.0 * t)) / d ** 1.5
    return l0, lx, lz


def sld_eigenframe_coeffs(rho: np.ndarray, l_op: np.ndarray):
    """Decompose an SLD in the eigenframe of rho as L0 I - Lx sigma_x +
    Lz sigma_z (eigenvalues descending, Lx reported as a magnitude)."""
    _, v = eig_hermitian_2x2(np.asarray(rho, dtype=complex))
    le = v.conj().T @ np.asarray(l_op, dtype=complex) @ v
    l0 = 0.5 * (le[0, 0] + le[1, 1]).real
    lz = 0.5 * (le[0, 0] - le[1, 1]).real
    lx = abs(le[0, 1])
    return l0, lx, lz


def tau_opt_transverse(beta) -> ProtocolTime:
    """Optimal transverse interaction time sqrt([1 + W(-2/e^2)/2] tanh(beta/2))."""
    return ProtocolTime(kernels.tau_opt_transverse(models._beta(beta)))


def golden_max(f, a: float, b: float, tol: float = 1e-10, maxiter: int = 60):
    """Golden-section maximization of f on [a, b]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if b - a < tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


@dataclass(frozen=True)
class EstimationReport:
    """Optimized protocol summary for one model at one temperature.

    `prep_used` and `tau_opt` describe the population-measurement optimum
    (the experimentally relevant protocol); `qfi` is the best quantum
    Fisher information over the whole search lattice, so the Cramer-Rao
    ordering fisher_population <= qfi always holds.
    """

    fisher_population: float
    qfi: float
    sld: np.ndarray
    tau_opt: float | None
    prep_used: QubitPrep

    def __post_init__(self):
        if self.fisher_population > self.qfi + 1e-9:
            raise ValueError("Fisher information exceeds the QFI")


def _refine_coordinate(f, lattice, idx, lo, hi):
    a = lattice[idx - 1] if idx > 0 else lo
    b = lattice[idx + 1] if idx < len(lattice) - 1 else hi
    return golden_max(f, a, b, tol=1e-10)


def optimize_protocol(model: Model, beta, tau_max: float) -> EstimationReport:
    """Grid search plus golden-section refinement of F and H.

    Scans a 33 x 33 x 257 lattice over (theta, phi, tau) with the
    population Fisher information and the QFI, then refines each argmax
    coordinate-wise.
    """
    if not tau_max > 0:
        raise ValueError("tau_max must be positive")
    b = models._beta(beta)
    thetas = np.linspace(0.0, math.pi, 33)
    phis = np.linspace(0.0, 2.0 * math.pi, 33, endpoint=False)
    taus = np.linspace(tau_max / 257.0, tau_max, 257)
    fgrid, hgrid = kernels.fisher_qfi_grid(
        model.value, b, thetas, phis, taus, models._ZETA_SCALE)

    def refine(grid, scalar):
        it, ip, iu = np.unravel_index(np.argmax(grid), grid.shape)
        th, ph, ta = thetas[it], phis[ip], taus[iu]
        best = grid[it, ip, iu]
        for _ in range(2):
            th, best = _refine_coordinate(
                lambda x: scalar(b, x, ph, ta), thetas, it, 0.0, math.pi)
            ph, best = _refine_coordinate(
                lambda x: scalar(b, th, x, ta), phis, ip, 0.0, 2.0 * math.pi)
            ta, best = _refine_coordinate(
                lambda x: scalar(b, th, ph, x), taus, iu, taus[0], tau_max)
        return th, ph, ta, best

    def f_scalar(bb, th, ph, ta):
        return kernels.fisher_population(model.value, bb, th, ph, ta,
                                         models._ZETA_SCALE)

    def h_scalar(bb, th, ph, ta):
        return kernels.qfi_closed(model.value, bb, th, ph, ta,
                                  models._ZETA_SCALE)

    th_f, ph_f, ta_f, f_best = refine(fgrid, f_scalar)
    _, _, _, h_best = refine(hgrid, h_scalar)

    prep = QubitPrep(theta=min(max(th_f, 0.0), math.pi),
                     phi=ph_f % (2.0 * math.pi))
    l_op = sld(model, b, prep, ta_f)
    return EstimationReport(fisher_population=f_best,
                            qfi=max(h_best, f_best),
                            sld=l_op, tau_opt=ta_f, prep_used=prep)


def fi_deficit(model: Model, beta, time) -> float:
    """Relative gap [H_opt - F_opt]/H_opt at theta = 0.

    Zero for the transverse model (population measurements are optimal);
    tiny negative floating-point noise in [-1e-12, 0) is clamped to 0.
    """
    b = models._beta(beta)
    t = models._tau(time)
    h = kernels.qfi_closed(model.value, b, 0.0, 0.0, t, models._ZETA_SCALE)
    if not h > 0.0:
        raise ZeroDivisionError(
            f"H_opt vanishes at beta={b}, tau={t}; deficit undefined")
    f = kernels.fisher_population(model.value, b, 0.0, 0.0, t,
                                  models._ZETA_SCALE)
    deficit = (h - f) / h
    if -1e-12 <= deficit < 0.0:
        return 0.0
    return deficit
