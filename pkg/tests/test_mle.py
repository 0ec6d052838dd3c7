import math

import pytest

from qubitherm import estimation, oracle
from qubitherm.estimation import NoInformationError, tau_opt_transverse
from qubitherm.mle import (CrlbReport, OutcomeCounts, crlb_experiment,
                           mle_beta, replicate_seed, sample_population_outcomes)
from qubitherm.models import Model, QubitPrep


class TestCounts:
    def test_validation(self):
        OutcomeCounts(1, 0)
        with pytest.raises(ValueError):
            OutcomeCounts(0, 0)
        with pytest.raises(ValueError):
            OutcomeCounts(-1, 2)

    def test_total(self):
        assert OutcomeCounts(3, 4).total == 7


class TestSampling:
    def test_certain_outcome(self):
        counts = sample_population_outcomes(Model.TRANSVERSE, 1.0,
                                            QubitPrep(0.0), 0.0, 500, 1)
        assert counts.n0 == 500

    def test_deterministic_for_seed(self):
        args = (Model.TRANSVERSE, 1.0, QubitPrep(0.0), 0.6, 10_000, 987)
        assert sample_population_outcomes(*args) == \
            sample_population_outcomes(*args)

    def test_seed_changes_counts(self):
        a = sample_population_outcomes(Model.TRANSVERSE, 1.0, QubitPrep(0.0),
                                       0.6, 10_000, 1)
        b = sample_population_outcomes(Model.TRANSVERSE, 1.0, QubitPrep(0.0),
                                       0.6, 10_000, 2)
        assert a != b

    def test_mean_within_five_sigma_of_oracle(self):
        m = 10**6
        p0 = oracle.probe_state_transverse_quadrature(
            2.0, QubitPrep(0.0), 0.5, order=128).p0
        counts = sample_population_outcomes(Model.TRANSVERSE, 2.0,
                                            QubitPrep(0.0), 0.5, m, 4242)
        se = math.sqrt(p0 * (1 - p0) / m)
        assert abs(counts.n0 / m - 0.86009) < 5 * se + 1e-5

    def test_replicate_seed_mixing(self):
        seeds = {replicate_seed(7, i) for i in range(1000)}
        assert len(seeds) == 1000


class TestMle:
    def test_noiseless_consistency(self):
        m = 10**8
        p0 = estimation.outcome_probabilities(
            oracle.probe_state_transverse_quadrature(
                1.0, QubitPrep(0.0), 0.6, order=128),
            estimation.population_povm())[0]
        counts = OutcomeCounts(round(p0 * m), m - round(p0 * m))
        got = mle_beta(counts, Model.TRANSVERSE, QubitPrep(0.0), 0.6)
        assert got == pytest.approx(1.0, abs=1e-6)

    def test_noiseless_consistency_inverted_pole(self):
        # theta = pi prepares |1>: p0(beta) decreases, the inversion flips
        m = 10**8
        prep = QubitPrep(math.pi, 0.0)
        p0 = oracle.probe_state_transverse_quadrature(
            1.0, prep, 0.6, order=128).p0
        counts = OutcomeCounts(round(p0 * m), m - round(p0 * m))
        got = mle_beta(counts, Model.TRANSVERSE, prep, 0.6)
        assert got == pytest.approx(1.0, abs=1e-6)

    def test_noiseless_consistency_dispersive(self):
        m = 10**8
        p0 = estimation.outcome_probabilities(
            oracle.probe_state_dispersive_focksum(
                1.0, QubitPrep(0.0), 0.8, oracle.FockTruncation.for_tail(1.0)),
            estimation.population_povm())[0]
        counts = OutcomeCounts(round(p0 * m), m - round(p0 * m))
        got = mle_beta(counts, Model.DISPERSIVE, QubitPrep(0.0), 0.8)
        assert got == pytest.approx(1.0, abs=1e-5)

    def test_estimate_within_five_sigma(self):
        tau = tau_opt_transverse(1.0).tau
        m = 10**5
        counts = sample_population_outcomes(Model.TRANSVERSE, 1.0,
                                            QubitPrep(0.0), tau, m, 11)
        beta_hat = mle_beta(counts, Model.TRANSVERSE, QubitPrep(0.0), tau)
        fisher = estimation.fisher_information(Model.TRANSVERSE, 1.0,
                                               QubitPrep(0.0), tau)
        assert fisher == pytest.approx(0.1172, abs=2e-4)
        assert abs(beta_hat - 1.0) < 5.0 * math.sqrt(1.0 / (m * fisher))

    def test_saturated_record_clamps_to_endpoint(self):
        counts = OutcomeCounts(1000, 0)
        got = mle_beta(counts, Model.TRANSVERSE, QubitPrep(0.0), 0.5,
                       search=(0.05, 50.0))
        assert got == 50.0

    def test_no_information_error(self):
        counts = OutcomeCounts(40, 60)
        with pytest.raises(NoInformationError):
            mle_beta(counts, Model.TRANSVERSE, QubitPrep(math.pi / 2, 0.0), 0.5)
        with pytest.raises(NoInformationError):
            mle_beta(counts, Model.TRANSVERSE, QubitPrep(0.3, 0.0), 0.0)

    def test_bad_search_interval(self):
        with pytest.raises(ValueError):
            mle_beta(OutcomeCounts(5, 5), Model.TRANSVERSE, QubitPrep(0.0),
                     0.5, search=(2.0, 1.0))


class TestCrlbExperiment:
    def test_deterministic(self):
        args = dict(model=Model.TRANSVERSE, beta_true=1.0, prep=QubitPrep(0.0),
                    time=0.6, m=2000, replicates=150, seed=5)
        assert crlb_experiment(**args) == crlb_experiment(**args)

    def test_transverse_bounds_coincide(self):
        report = crlb_experiment(Model.TRANSVERSE, 1.0, QubitPrep(0.0),
                                 tau_opt_transverse(1.0).tau,
                                 m=2000, replicates=150, seed=3)
        assert report.crlb == pytest.approx(report.qcrlb, rel=1e-12)

    def test_efficiency_window(self):
        report = crlb_experiment(Model.TRANSVERSE, 1.0, QubitPrep(0.0),
                                 tau_opt_transverse(1.0).tau,
                                 m=10**5, replicates=300, seed=12)
        assert 0.8 < report.ratio < 1.2
        assert report.excluded == 0

    def test_dispersive_ratio_and_ordering(self):
        report = crlb_experiment(Model.DISPERSIVE, 1.0, QubitPrep(0.0), 0.8,
                                 m=10**5, replicates=300, seed=8)
        assert report.ratio >= 0.85
        assert report.crlb >= report.qcrlb

    def test_consistency_with_sample_size(self):
        # bias shrinks as M grows; mean stays within 3 combined standard
        # errors of the truth
        tau = tau_opt_transverse(1.0).tau
        for m in (10**3, 10**4, 10**5):
            report = crlb_experiment(Model.TRANSVERSE, 1.0, QubitPrep(0.0),
                                     tau, m=m, replicates=300, seed=21)
            se = math.sqrt(report.empirical_variance / report.replicates)
            assert abs(report.beta_hat_mean - 1.0) < 3.0 * se + 3.0 / m

    def test_no_superquantum_precision(self):
        report = crlb_experiment(Model.TRANSVERSE, 1.0, QubitPrep(0.0), 0.9,
                                 m=5000, replicates=400, seed=77)
        assert report.empirical_variance >= report.qcrlb * 0.9

    def test_requires_replicates(self):
        with pytest.raises(ValueError):
            crlb_experiment(Model.TRANSVERSE, 1.0, QubitPrep(0.0), 0.6,
                            m=100, replicates=10, seed=0)

    def test_report_validation(self):
        with pytest.raises(ValueError):
            CrlbReport(beta_true=1.0, beta_hat_mean=1.0,
                       empirical_variance=1.0, crlb=0.5, qcrlb=0.9,
                       ratio=2.0, replicates=100)
