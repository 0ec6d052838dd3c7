"""Monte Carlo population measurements and maximum-likelihood estimation
of the inverse temperature, with Cramer-Rao saturation experiments.

RNG contract: sampling uses numpy's Philox counter-based 64-bit
generator keyed directly with the user seed.  Replicate i of an
experiment draws from an independent stream keyed with
seed XOR (i * 0x9E3779B97F4A7C15) mod 2^64.  Identical inputs and seeds
reproduce identical counts bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, models
from .estimation import NoInformationError, fisher_information, golden_max, qfi
from .models import Model, QubitPrep

__all__ = [
    "OutcomeCounts",
    "CrlbReport",
    "GOLDEN_MIX",
    "replicate_seed",
    "sample_population_outcomes",
    "mle_beta",
    "crlb_experiment",
]

GOLDEN_MIX = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

DEFAULT_SEARCH = (0.05, 50.0)


@dataclass(frozen=True)
class OutcomeCounts:
    """Tally of a repeated population measurement."""

    n0: int
    n1: int

    def __post_init__(self):
        if self.n0 < 0 or self.n1 < 0:
            raise ValueError("counts must be nonnegative")
        if self.n0 + self.n1 < 1:
            raise ValueError("at least one measurement is required")

    @property
    def total(self) -> int:
        return self.n0 + self.n1


@dataclass(frozen=True)
class CrlbReport:
    """Monte Carlo Cramer-Rao comparison for one experiment setting."""

    beta_true: float
    beta_hat_mean: float
    empirical_variance: float
    crlb: float
    qcrlb: float
    ratio: float
    replicates: int
    excluded: int = 0

    def __post_init__(self):
        if self.crlb < self.qcrlb - 1e-15:
            raise ValueError("classical bound below the quantum bound")
        if not self.ratio > 0:
            raise ValueError("variance ratio must be positive")


def replicate_seed(seed: int, index: int) -> int:
    """Stream-split seed for replicate `index`."""
    return (int(seed) ^ ((index * GOLDEN_MIX) & _MASK64)) & _MASK64


def _p0(model: Model, beta: float, prep: QubitPrep, tau: float) -> float:
    return kernels.p0_population(model.value, beta, prep.theta, prep.phi,
                                 tau, models._ZETA_SCALE)


def sample_population_outcomes(model: Model, beta, prep: QubitPrep, time,
                               m: int, seed: int) -> OutcomeCounts:
    """Draw Binomial(m, p0) population outcomes with a Philox stream."""
    if m < 1:
        raise ValueError("need at least one measurement")
    b = models._beta(beta)
    t = models._tau(time)
    p0 = min(max(_p0(model, b, prep, t), 0.0), 1.0)
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
    n0 = int(rng.binomial(m, p0))
    return OutcomeCounts(n0=n0, n1=m - n0)


def _check_informative(model: Model, prep: QubitPrep, tau: float,
                       lo: float, hi: float):
    probes = np.linspace(lo, hi, 7)
    dp = [kernels.dp0_population(model.value, b, prep.theta, prep.phi, tau,
                                 models._ZETA_SCALE) for b in probes]
    if max(abs(d) for d in dp) < 1e-14:
        raise NoInformationError(
            "p0(beta) is flat for this preparation; beta cannot be estimated")


def _invert_transverse(p_hat: float, prep: QubitPrep, tau: float,
                       lo: float, hi: float):
    """Monotone inversion p0(beta) = p_hat at theta in {0, pi}.

    Returns (beta_hat, clamped).  p0 = (1 +- e^{-zeta})/2 is strictly
    monotone in beta for tau > 0, so the MLE is the plain inverse where
    attainable and the nearer search endpoint otherwise.
    """
    sign = 1.0 if prep.theta < 0.5 * math.pi else -1.0
    p_lo = _p0(Model.TRANSVERSE, lo, prep, tau)
    p_hi = _p0(Model.TRANSVERSE, hi, prep, tau)
    lo_val, hi_val = (p_lo, p_hi) if sign > 0 else (p_hi, p_lo)
    if p_hat <= lo_val:
        return (lo, True) if sign > 0 else (hi, True)
    if p_hat >= hi_val:
        return (hi, True) if sign > 0 else (lo, True)
    # e^{-zeta} = sign (2 p_hat - 1); coth(beta/2) = zeta / tau^2
    z = -math.log(sign * (2.0 * p_hat - 1.0)) / models._ZETA_SCALE
    x = z / (tau * tau)
    beta_hat = math.log((x + 1.0) / (x - 1.0))  # 2 artanh(1/x)
    return min(max(beta_hat, lo), hi), False


def _mle_with_flag(counts: OutcomeCounts, model: Model, prep: QubitPrep,
                   time, search=DEFAULT_SEARCH):
    lo, hi = search
    if not (0 < lo < hi):
        raise ValueError("search interval must satisfy 0 < lo < hi")
    t = models._tau(time)
    _check_informative(model, prep, t, lo, hi)
    p_hat = counts.n0 / counts.total

    if model is Model.TRANSVERSE and prep.theta in (0.0, math.pi) and t > 0:
        return _invert_transverse(p_hat, prep, t, lo, hi)

    def loglike(b):
        p0 = min(max(_p0(model, b, prep, t), 1e-300), 1.0 - 1e-16)
        return counts.n0 * math.log(p0) + counts.n1 * math.log1p(-p0)

    beta_hat, _ = golden_max(loglike, lo, hi, tol=1e-8, maxiter=200)
    clamped = beta_hat - lo < 1e-6 or hi - beta_hat < 1e-6
    return beta_hat, clamped


def mle_beta(counts: OutcomeCounts, model: Model, prep: QubitPrep, time,
             search=DEFAULT_SEARCH) -> float:
    """Maximum-likelihood estimate of beta from a binomial record.

    Transverse theta in {0, pi} uses the closed monotone inversion of
    p0(beta); anything else maximizes the log-likelihood by golden
    section.  Unattainable empirical frequencies clamp to the nearer
    search endpoint.
    """
    beta_hat, _ = _mle_with_flag(counts, model, prep, time, search)
    return beta_hat


def crlb_experiment(model: Model, beta_true, prep: QubitPrep, time,
                    m: int, replicates: int, seed: int,
                    search=DEFAULT_SEARCH) -> CrlbReport:
    """Repeated sample/estimate cycles against the Cramer-Rao bounds.

    Replicate i derives its seed from the documented stream-splitting
    rule.  Boundary-clamped estimates are excluded from the variance
    statistics and reported in `excluded`.
    """
    if replicates < 100:
        raise ValueError("need at least 100 replicates")
    b = models._beta(beta_true)
    t = models._tau(time)
    fisher = fisher_information(model, b, prep, t)
    if not fisher > 0 or math.isinf(fisher):
        raise NoInformationError("Fisher information vanishes or diverges "
                                 "at the requested protocol")
    quantum = qfi(model, b, prep, t)

    estimates = []
    excluded = 0
    for i in range(replicates):
        counts = sample_population_outcomes(model, b, prep, t, m,
                                            replicate_seed(seed, i))
        beta_hat, clamped = _mle_with_flag(counts, model, prep, t, search)
        if clamped:
            excluded += 1
        else:
            estimates.append(beta_hat)
    if len(estimates) < 2:
        raise RuntimeError("too few unclamped estimates to form a variance")

    estimates = np.asarray(estimates)
    emp_var = float(np.var(estimates, ddof=1))
    crlb = 1.0 / (m * fisher)
    qcrlb = 1.0 / (m * quantum)
    return CrlbReport(beta_true=b,
                      beta_hat_mean=float(estimates.mean()),
                      empirical_variance=emp_var,
                      crlb=crlb,
                      qcrlb=qcrlb,
                      ratio=emp_var / crlb,
                      replicates=replicates,
                      excluded=excluded)
