"""Special functions and small dense complex linear algebra.

Everything in here is a pure function of its value arguments and safe to
call concurrently.  The 2x2 eigensolver is written out in closed form
(descending eigenvalue order, stable branch selection) because it sits on
the hot path of every quantum-Fisher-information evaluation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "lambert_w0",
    "eig_hermitian_2x2",
    "thermal_phase_sum",
    "gauss_hermite_rule",
    "finite_diff",
    "coth_half",
    "csch_half_sq",
    "sinc",
    "trace_distance",
    "pauli_decomposition",
]

SQRT_PI = math.sqrt(math.pi)

_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a Gauss-Hermite rule for the weight e^{-x^2}."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("quadrature order must be positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if abs(float(np.sum(self.weights)) / SQRT_PI - 1.0) > 1e-12:
            raise ValueError("weights must sum to sqrt(pi)")
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)  # rules are shared via a cache

    def integrate(self, f):
        """Approximate integral of f(x) e^{-x^2} over the real line."""
        return np.sum(self.weights * f(self.nodes))


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function for real x >= -1/e.

    Halley iteration from a branch-point or log-asymptotic initial guess;
    converges to |w e^w - x| <= 1e-13 * max(1, |x|) in a handful of steps.

    Raises
    ------
    ValueError
        If x < -1/e (no real value on the principal branch).
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("lambert_w0: argument is NaN")
    branch_point = -1.0 / math.e
    if x < branch_point:
        # allow roundoff-level undershoot of the branch point
        if x < branch_point * (1.0 + 1e-12) - 1e-300:
            raise ValueError(f"lambert_w0: argument {x} < -1/e")
        x = branch_point
    if x == 0.0:
        return 0.0

    # initial guess
    if x < -0.25:
        # series around the branch point, Corless et al. style
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0
    elif x < 3.0:
        w = math.log1p(x) * (1.0 - 0.24 / (1.0 + x))
    else:
        # log asymptotics; only trustworthy once log(x) is O(1)
        lx = math.log(x)
        llx = math.log(lx)
        w = lx - llx + llx / lx

    tol = 1e-13 * max(1.0, abs(x))
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= 0.25 * tol:
            break
        wp1 = w + 1.0
        # Halley step; the wp1 guard only matters exactly at the branch point
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1) if wp1 != 0.0 else ew
        w -= f / denom
    if abs(w * math.exp(w) - x) > tol:
        raise ArithmeticError(f"lambert_w0 failed to converge at x={x}")
    return max(w, -1.0)


def eig_hermitian_2x2(m: np.ndarray):
    """Eigen-decomposition of a Hermitian 2x2 matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues in descending
    order and eigenvectors as the columns of a 2x2 unitary, so that
    m @ v[:, k] = w[k] * v[:, k].

    Raises
    ------
    ValueError
        If the matrix is not Hermitian within 1e-12 (max-norm).
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    herm_defect = max(
        abs(m[0, 1] - np.conj(m[1, 0])),
        abs(m[0, 0].imag),
        abs(m[1, 1].imag),
    )
    if herm_defect > _HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {herm_defect:.3e})")

    a = m[0, 0].real
    d = m[1, 1].real
    b = 0.5 * (m[0, 1] + np.conj(m[1, 0]))  # symmetrised off-diagonal
    mean = 0.5 * (a + d)
    half_gap = 0.5 * (a - d)
    radius = math.hypot(half_gap, abs(b))
    # anchor the larger-magnitude root, recover the other from the
    # determinant: keeps the small eigenvalue of a near-pure state at
    # full relative precision
    anchor = mean + math.copysign(radius, mean) if mean != 0.0 else radius
    if anchor != 0.0:
        other = (a * d - abs(b) ** 2) / anchor
    else:
        other = 0.0
    w = np.array(sorted((anchor, other), reverse=True))

    if radius == 0.0 or (abs(b) == 0.0 and half_gap == 0.0):
        v = np.eye(2, dtype=complex)
        return w, v

    if abs(b) == 0.0:
        # already diagonal; order columns by descending eigenvalue
        v = np.eye(2, dtype=complex)
        if a < d:
            v = v[:, ::-1]
        return w, v

    # pick the numerically larger component to avoid cancellation
    if half_gap >= 0.0:
        u = np.array([half_gap + radius, np.conj(b)])
    else:
        u = np.array([b, radius - half_gap])
    u = u / np.linalg.norm(u)
    v_minus = np.array([-np.conj(u[1]), np.conj(u[0])])
    v = np.column_stack([u, v_minus])
    return w, v


def thermal_phase_sum(beta: float, phase: float) -> complex:
    """Geometric sum sum_n p_n e^{i n phase} over thermal weights.

    The weights p_n = nbar^n / (nbar+1)^{n+1} give the closed form
    (1 - e^{-beta}) / (1 - e^{-beta} e^{i phase}); its modulus is <= 1.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    q = math.exp(-beta)
    return (1.0 - q) / (1.0 - q * complex(math.cos(phase), math.sin(phase)))


@functools.lru_cache(maxsize=16)
def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite nodes/weights (weight e^{-x^2}) of the given order.

    Exact for polynomials of degree <= 2*order - 1.  Orders up to 512 are
    supported; the Golub-Welsch reduction is delegated to numpy.  Rules
    are cached and their arrays frozen; treat them as read-only.
    """
    if not isinstance(order, (int, np.integer)):
        raise ValueError("order must be an integer")
    if order < 1 or order > 512:
        raise ValueError("order must be in [1, 512]")
    nodes, weights = np.polynomial.hermite.hermgauss(int(order))
    return QuadratureRule(nodes=nodes, weights=weights, order=int(order))


def finite_diff(f, x: float, h: float) -> float:
    """Five-point central-difference estimate of f'(x), error O(h^4)."""
    if not h > 0:
        raise ValueError("step h must be positive")
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def coth_half(beta: float) -> float:
    """coth(beta/2) computed as 1 + 2/(e^beta - 1): no overflow, no
    cancellation at large beta."""
    if beta > 700.0:  # 2/(e^beta - 1) underflows below double resolution
        return 1.0
    return 1.0 + 2.0 / math.expm1(beta)


def csch_half_sq(beta: float) -> float:
    """csch^2(beta/2) via the e^{-beta}-factored form 4 q / (1-q)^2."""
    q = math.exp(-beta)
    om = -math.expm1(-beta)  # 1 - q without cancellation
    return 4.0 * q / (om * om)


def sinc(tau: float) -> float:
    """sin(tau)/tau with a small-argument series guard."""
    if abs(tau) < 1e-4:
        t2 = tau * tau
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(tau) / tau


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of (a - b) for Hermitian 2x2 inputs."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    diff = 0.5 * (diff + diff.conj().T)  # drop roundoff anti-Hermitian part
    w, _ = eig_hermitian_2x2(diff)
    return 0.5 * (abs(w[0]) + abs(w[1]))


def pauli_decomposition(m: np.ndarray):
    """Coefficients (c0, cx, cy, cz) with m = c0 I + cx sx + cy sy + cz sz.

    Real for Hermitian input (imaginary parts are discarded).
    """
    m = np.asarray(m, dtype=complex)
    c0 = 0.5 * (m[0, 0] + m[1, 1]).real
    cz = 0.5 * (m[0, 0] - m[1, 1]).real
    cx = 0.5 * (m[0, 1] + m[1, 0]).real
    cy = 0.5 * (m[1, 0] - m[0, 1]).imag
    return c0, cx, cy, cz
