import math

import numpy as np
import pytest

from qubitherm import models, oracle
from qubitherm.models import (DensityMatrix2, DispersiveKernel,
                              InverseTemperature, Model, ProtocolTime,
                              QubitPrep, dispersive_kernel,
                              probe_state_dispersive, probe_state_transverse,
                              probe_state_transverse_displaced,
                              pure_qubit_state)
from qubitherm.qmath import thermal_phase_sum, trace_distance

BETAS = np.linspace(0.1, 20.0, 10)
THETAS = np.linspace(0.0, math.pi, 10)
PHIS = np.linspace(0.0, 2.0 * math.pi, 10, endpoint=False)
TAUS = np.linspace(0.0, math.pi, 10)

# frozen from the 128-node quadrature oracle (see test_expected_population)
RHO00_B2_T05 = 0.8600882992420508


class TestParameterTypes:
    def test_inverse_temperature(self):
        assert InverseTemperature(1.0).nbar == pytest.approx(1.0 / (math.e - 1.0))
        for bad in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(ValueError):
                InverseTemperature(bad)

    def test_qubit_prep_ranges(self):
        QubitPrep(0.0, 0.0)
        QubitPrep(math.pi, 6.28)
        for bad in ((-0.1, 0.0), (3.2, 0.0), (1.0,-0.1), (1.0, 7.0)):
            with pytest.raises(ValueError):
                QubitPrep(*bad)

    def test_prep_unit_norm(self):
        for th in THETAS:
            for ph in PHIS[::3]:
                c0, c1 = QubitPrep(th, ph).amplitudes()
                assert abs(abs(c0) ** 2 + abs(c1) ** 2 - 1.0) < 1e-15

    def test_protocol_time(self):
        ProtocolTime(0.0)
        for bad in (-0.1, math.inf):
            with pytest.raises(ValueError):
                ProtocolTime(bad)

    def test_density_matrix_validation(self):
        with pytest.raises(ValueError):
            DensityMatrix2(np.array([[0.6, 0.1], [0.3, 0.4]]))  # not Hermitian
        with pytest.raises(ValueError):
            DensityMatrix2(np.diag([0.7, 0.7]))  # trace 1.4
        with pytest.raises(ValueError):
            DensityMatrix2(np.array([[1.2, 0.0], [0.0, -0.2]]))  # negative

    def test_dispersive_kernel_invariants(self):
        with pytest.raises(ValueError):
            DispersiveKernel(gamma_factor=0.1, cosine_sum=0.0, sine_sum=0.0)
        with pytest.raises(ValueError):
            DispersiveKernel(gamma_factor=-0.1, cosine_sum=0.9, sine_sum=0.9)

    def test_model_parse(self):
        assert Model.parse("transverse") is Model.TRANSVERSE
        assert Model.parse("Dispersive") is Model.DISPERSIVE
        with pytest.raises(ValueError):
            Model.parse("other")


class TestPureState:
    def test_poles(self):
        assert np.allclose(pure_qubit_state(QubitPrep(0.0, 1.0)).matrix,
                           np.diag([1.0, 0.0]))
        assert np.allclose(pure_qubit_state(QubitPrep(math.pi, 0.0)).matrix,
                           np.diag([0.0, 1.0]), atol=1e-16)

    def test_plus_state(self):
        rho = pure_qubit_state(QubitPrep(math.pi / 2, 0.0)).matrix
        assert np.allclose(rho, 0.5 * np.ones((2, 2)))


class TestTransverseState:
    def test_zero_time_is_pure(self):
        prep = QubitPrep(0.7, 1.1)
        got = probe_state_transverse(2.0, prep, 0.0)
        assert trace_distance(got.matrix, pure_qubit_state(prep).matrix) < 1e-15

    def test_coupling_eigenstate_is_invariant(self):
        prep = QubitPrep(math.pi / 2, 0.0)
        for beta, tau in ((0.3, 0.2), (2.0, 1.4), (9.0, 3.0)):
            rho = probe_state_transverse(beta, prep, tau).matrix
            assert np.allclose(rho, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_expected_population(self):
        got = probe_state_transverse(2.0, QubitPrep(0.0), 0.5)
        ora = oracle.probe_state_transverse_quadrature(
            2.0, QubitPrep(0.0), 0.5, order=128)
        assert got.p0 == pytest.approx(RHO00_B2_T05, abs=1e-12)
        assert ora.p0 == pytest.approx(RHO00_B2_T05, abs=1e-12)

    def test_matches_quadrature_oracle_grid(self):
        worst = 0.0
        for beta in BETAS[BETAS >= 0.5][::2]:
            for th in THETAS[::3]:
                for ph in PHIS[::3]:
                    prep = QubitPrep(th, ph)
                    for tau in TAUS[TAUS <= 2.0]:
                        ana = probe_state_transverse(beta, prep, tau)
                        ora = oracle.probe_state_transverse_quadrature(
                            beta, prep, tau, order=128)
                        worst = max(worst,
                                    trace_distance(ana.matrix, ora.matrix))
        assert worst < 1e-10

    def test_purity_decreases_with_time(self):
        prep = QubitPrep(0.0)
        for beta in (0.4, 2.0, 11.0):
            # keep e^{-2 zeta} representable so the decrease stays strict
            coth = 1.0 + 2.0 / math.expm1(beta)
            taus = np.linspace(0.05, min(3.0, math.sqrt(18.0 / coth)), 40)
            purity = [probe_state_transverse(beta, prep, t).purity()
                      for t in taus]
            assert all(a > b for a, b in zip(purity, purity[1:]))
            expected = [(1.0 + math.exp(-2.0 * (1.0 + 2.0 / math.expm1(beta))
                                        * t * t)) / 2.0 for t in taus]
            assert np.allclose(purity, expected, atol=1e-13)


class TestDisplacedState:
    def test_zero_displacement(self):
        prep = QubitPrep(0.9, 0.4)
        a = probe_state_transverse_displaced(1.5, prep, 0.8, 0.0)
        b = probe_state_transverse(1.5, prep, 0.8)
        assert trace_distance(a.matrix, b.matrix) < 1e-15

    def test_coupling_eigenstate_unaffected(self):
        prep = QubitPrep(math.pi / 2, 0.0)
        rho = probe_state_transverse_displaced(2.0, prep, 0.7, 1.3).matrix
        assert np.allclose(rho, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_matches_shifted_gaussian_oracle(self):
        for alpha in (0.3, 0.8, 2.5):
            for beta in (0.5, 2.0, 8.0):
                for th in (0.0, 0.7, 2.6):
                    prep = QubitPrep(th, 0.4)
                    for tau in (0.3, 0.5, 1.5):
                        ana = probe_state_transverse_displaced(
                            beta, prep, tau, alpha)
                        ora = oracle.probe_state_transverse_quadrature(
                            beta, prep, tau, alpha=alpha, order=128)
                        assert trace_distance(ana.matrix, ora.matrix) < 1e-10

    def test_rejects_complex_alpha(self):
        with pytest.raises((TypeError, ValueError)):
            probe_state_transverse_displaced(1.0, QubitPrep(0.0), 0.5, 1.0j)


class TestDispersiveState:
    def test_zero_time_is_pure(self):
        prep = QubitPrep(1.2, 2.2)
        got = probe_state_dispersive(1.0, prep, 0.0)
        assert trace_distance(got.matrix, pure_qubit_state(prep).matrix) < 1e-15

    def test_coupling_eigenstate_is_invariant(self):
        prep = QubitPrep(math.pi / 2, 0.0)
        rho = probe_state_dispersive(1.0, prep, 0.9).matrix
        assert np.allclose(rho, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_population_equals_thermal_sum(self):
        got = probe_state_dispersive(1.0, QubitPrep(0.0), 0.7)
        expected = 0.5 + 0.5 * thermal_phase_sum(1.0, 1.4).real
        assert got.p0 == pytest.approx(expected, abs=1e-14)

    def test_matches_focksum_oracle(self):
        prep = QubitPrep(math.pi / 4, math.pi / 3)
        trunc = oracle.FockTruncation.for_tail(1.0)
        ana = probe_state_dispersive(1.0, prep, 0.7)
        ora = oracle.probe_state_dispersive_focksum(1.0, prep, 0.7, trunc)
        assert trace_distance(ana.matrix, ora.matrix) < 1e-13

    def test_matches_focksum_grid(self):
        worst = 0.0
        for beta in BETAS[::2]:
            trunc = oracle.FockTruncation.for_tail(beta)
            for th in THETAS[::3]:
                for ph in PHIS[::3]:
                    prep = QubitPrep(th, ph)
                    for tau in TAUS:
                        ana = probe_state_dispersive(beta, prep, tau)
                        ora = oracle.probe_state_dispersive_focksum(
                            beta, prep, tau, trunc)
                        worst = max(worst,
                                    trace_distance(ana.matrix, ora.matrix))
        assert worst < 1e-12

    def test_periodic_in_tau(self):
        prep = QubitPrep(1.9, 5.0)
        for beta in (0.3, 1.0, 6.0):
            for tau in (0.2, 0.9, 2.5):
                a = probe_state_dispersive(beta, prep, tau).matrix
                b = probe_state_dispersive(beta, prep, tau + math.pi).matrix
                assert np.max(np.abs(a - b)) < 1e-13


class TestDispersiveKernelValues:
    def test_zero_time(self):
        k = dispersive_kernel(1.0, 0.0)
        assert k.cosine_sum == pytest.approx(1.0, abs=1e-15)
        assert k.sine_sum == 0.0

    def test_cold_limit(self):
        k = dispersive_kernel(50.0, 0.7)
        assert abs(k.gamma_factor) < 1e-21
        assert k.cosine_sum == pytest.approx(1.0, abs=1e-20)

    def test_underflow_limit(self):
        # e^{-beta} underflows to zero: Gamma becomes -0.0, state is pure
        k = dispersive_kernel(800.0, 0.7)
        assert k.gamma_factor == 0.0 and k.cosine_sum == 1.0
        probe_state_dispersive(800.0, QubitPrep(0.3, 1.0), 0.7)
        probe_state_transverse(800.0, QubitPrep(0.3, 1.0), 0.7)

    def test_gamma_value(self):
        k = dispersive_kernel(1.0, 0.7)
        expected = (1.0 - math.exp(-1.0)) / (4.0 * (math.cos(1.4) - math.cosh(1.0)))
        assert k.gamma_factor == pytest.approx(expected, rel=1e-14)

    def test_sine_identity_grid(self):
        # S = -2 Gamma sin(2 tau)
        for beta in BETAS:
            for tau in TAUS:
                k = dispersive_kernel(beta, tau)
                assert abs(k.sine_sum + 2.0 * k.gamma_factor
                           * math.sin(2.0 * tau)) < 1e-13

    def test_cosine_identity_grid(self):
        # C = 1 + 4 Gamma zeta sinc^2 tau
        for beta in BETAS:
            for tau in TAUS:
                assert models.zeta_identity_residual(beta, tau) < 1e-12

    def test_matches_thermal_phase_sum(self):
        for beta in (0.2, 1.0, 13.0):
            for tau in (0.1, 0.7, 3.0):
                k = dispersive_kernel(beta, tau)
                ref = thermal_phase_sum(beta, 2.0 * tau)
                assert k.cosine_sum == pytest.approx(ref.real, abs=1e-14)
                assert k.sine_sum == pytest.approx(ref.imag, abs=1e-14)


def test_generators_valid_on_full_grid():
    # DensityMatrix2 construction enforces Hermiticity, unit trace, PSD
    for beta in BETAS:
        for th in THETAS[::3]:
            for ph in PHIS[::3]:
                prep = QubitPrep(th, ph)
                for tau in TAUS:
                    probe_state_transverse(beta, prep, tau)
                    probe_state_dispersive(beta, prep, tau)


def test_zeta_scale_hook_changes_state(monkeypatch):
    prep = QubitPrep(0.0)
    base = probe_state_transverse(2.0, prep, 0.5).p0
    monkeypatch.setattr(models, "_ZETA_SCALE", 1.01)
    assert abs(probe_state_transverse(2.0, prep, 0.5).p0 - base) > 1e-4
