import math

import numpy as np
import pytest

from fas.analytic import outage_exact, outage_mrc
from fas.channel import CorrelationProfile, FasConfig, correlation_profile
from fas.mc import (TARGET_FAILURES, TRIALS_CAP, ChiSquareResult,
                    HistogramSpec, McEstimate, McSettings,
                    mc_joint_density_check, mc_outage_fas, mc_outage_mrc,
                    plan_trials, worker_streams)


def within(est: McEstimate, truth: float, sigmas: float = 3.0) -> bool:
    se = math.sqrt(truth * (1.0 - truth) / est.trials)
    return abs(est.p_hat - truth) <= sigmas * se


class TestMcSettings:
    def test_rejects_small_trial_count(self):
        with pytest.raises(ValueError):
            McSettings(trials=500, seed=1)

    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            McSettings(trials=10_000, seed=1, workers=0)


class TestWorkerStreams:
    def test_count_and_independence(self):
        streams = worker_streams(seed=7, workers=4)
        assert len(streams) == 4
        draws = [s.standard_normal(8) for s in streams]
        for i in range(4):
            for j in range(i + 1, 4):
                assert not np.array_equal(draws[i], draws[j])

    def test_deterministic(self):
        a = worker_streams(3, 2)[1].standard_normal(16)
        b = worker_streams(3, 2)[1].standard_normal(16)
        assert np.array_equal(a, b)


class TestMcOutageFas:
    def test_bit_reproducible(self):
        c = FasConfig(n_ports=3, size_wavelengths=0.5, snr_ratio=1.0)
        s = McSettings(trials=50_000, seed=11, workers=3)
        assert mc_outage_fas(c, s) == mc_outage_fas(c, s)

    def test_single_port_rayleigh(self):
        c = FasConfig(n_ports=1, size_wavelengths=1.0, snr_ratio=1.0)
        est = mc_outage_fas(c, McSettings(trials=1_000_000, seed=1))
        assert within(est, 1.0 - math.exp(-1.0))

    def test_forced_independent_profile(self):
        c = FasConfig(n_ports=4, size_wavelengths=1.0, snr_ratio=1.0)
        forced = CorrelationProfile(mu=np.zeros(4),
                                    displacements=np.linspace(0.0, 1.0, 4))
        est = mc_outage_fas(c, McSettings(trials=1_000_000, seed=2),
                            profile=forced)
        assert within(est, (1.0 - math.exp(-1.0)) ** 4)

    def test_matches_exact_quadrature(self):
        c = FasConfig(n_ports=5, size_wavelengths=0.5, snr_ratio=1.0)
        est = mc_outage_fas(c, McSettings(trials=1_000_000, seed=3))
        assert within(est, outage_exact(c))

    def test_worker_invariance_within_noise(self):
        c = FasConfig(n_ports=3, size_wavelengths=1.0, snr_ratio=1.0)
        truth = outage_exact(c)
        for workers in (1, 8):
            est = mc_outage_fas(c, McSettings(trials=400_000, seed=5,
                                              workers=workers))
            assert within(est, truth)

    def test_half_width_formula(self):
        c = FasConfig(n_ports=2, size_wavelengths=0.5, snr_ratio=1.0)
        est = mc_outage_fas(c, McSettings(trials=10_000, seed=6))
        want = 1.96 * math.sqrt(est.p_hat * (1.0 - est.p_hat) / est.trials)
        assert est.half_width_95 == pytest.approx(want, rel=1e-12)
        assert est.trials == 10_000


class TestMcOutageMrc:
    def test_single_branch(self):
        est = mc_outage_mrc(1, 1.0, McSettings(trials=1_000_000, seed=7))
        assert within(est, 1.0 - math.exp(-1.0))

    def test_two_branches(self):
        est = mc_outage_mrc(2, 1.0, McSettings(trials=1_000_000, seed=8))
        assert within(est, 1.0 - 2.0 * math.exp(-1.0))

    def test_five_branches_deep(self):
        truth = outage_mrc(5, 1.0)
        est = mc_outage_mrc(5, 1.0, McSettings(trials=10_000_000, seed=9))
        assert within(est, truth)

    def test_reproducible(self):
        s = McSettings(trials=20_000, seed=10, workers=2)
        assert mc_outage_mrc(3, 0.5, s) == mc_outage_mrc(3, 0.5, s)


class TestPlanTrials:
    def test_common_depth_keeps_base(self):
        assert plan_trials(0.1, 1_000_000) == 1_000_000

    def test_rare_event_scales_up(self):
        planned = plan_trials(1e-5, 1_000_000)
        assert planned == TARGET_FAILURES * 10 ** 5

    def test_beyond_cap_skips(self):
        assert plan_trials(1e-9, 1_000_000) is None
        assert plan_trials(0.0, 1_000_000) is None

    def test_cap_boundary(self):
        assert plan_trials(TARGET_FAILURES / TRIALS_CAP, 1000) == TRIALS_CAP


class TestJointDensityCheck:
    def grid(self):
        return HistogramSpec(r_max=2.5, bins=12)

    def test_independent_ports_fit(self):
        p = CorrelationProfile(mu=np.array([0.0, 0.0]),
                               displacements=np.array([0.0, 0.5]))
        res = mc_joint_density_check(p, McSettings(trials=200_000, seed=12),
                                     self.grid())
        assert isinstance(res, ChiSquareResult)
        assert not res.rejected_at_1pct

    def test_strong_correlation_fit(self):
        p = CorrelationProfile(mu=np.array([0.0, 0.9]),
                               displacements=np.array([0.0, 0.1]))
        res = mc_joint_density_check(p, McSettings(trials=200_000, seed=13),
                                     self.grid())
        assert not res.rejected_at_1pct

    def test_mismatched_profile_rejected(self):
        # draws generated at mu=0.9 tested against the mu=0.5 density
        gen = CorrelationProfile(mu=np.array([0.0, 0.9]),
                                 displacements=np.array([0.0, 0.1]))
        test = CorrelationProfile(mu=np.array([0.0, 0.5]),
                                  displacements=np.array([0.0, 0.1]))

        from fas.channel import draw_channels_batch
        from fas.mc import _cell_probabilities, _partition, _CHUNK

        settings = McSettings(trials=200_000, seed=14)
        edges = np.linspace(0.0, 2.5, 13)
        rng = worker_streams(settings.seed, 1)[0]
        g = np.abs(draw_channels_batch(gen, rng, settings.trials))
        observed, _, _ = np.histogram2d(g[:, 0], g[:, 1], bins=(edges, edges))
        expected = _cell_probabilities(test, edges) * settings.trials
        keep = expected >= 5.0
        stat = float(np.sum((observed[keep] - expected[keep]) ** 2
                            / expected[keep]))
        from scipy import special as sp
        critical = float(sp.chdtri(int(keep.sum()) - 1, 0.01))
        assert stat > critical

    def test_requires_two_ports(self):
        p = CorrelationProfile(mu=np.array([0.0, 0.3, 0.3]),
                               displacements=np.array([0.0, 0.5, 1.0]))
        with pytest.raises(ValueError):
            mc_joint_density_check(p, McSettings(trials=10_000, seed=1),
                                   self.grid())

    def test_histogram_spec_validation(self):
        with pytest.raises(ValueError):
            HistogramSpec(r_max=0.0, bins=10)
        with pytest.raises(ValueError):
            HistogramSpec(r_max=1.0, bins=1)
