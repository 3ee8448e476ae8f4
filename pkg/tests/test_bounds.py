import math

import numpy as np
import pytest

from fas.analytic import outage_exact
from fas.bounds import (DEFAULT_KAPPA, BoundConstants, ConstantsError,
                        bound_constants, optimize_kappa, outage_upper_bound,
                        outage_upper_bound_profile, per_port_bound_factor)
from fas.channel import FasConfig


class TestBoundConstants:
    def test_default_kappa(self):
        c = bound_constants()
        assert c.kappa == DEFAULT_KAPPA
        # frozen from direct evaluation of e^{1/(pi+2)}/4 * sqrt((pi+2)/pi)
        assert c.rho == pytest.approx(0.3884908754395175, abs=1e-15)

    def test_closed_form_recomputation(self):
        for kappa in (1.2, 1.5, 2.0, 3.0, 8.0):
            c = bound_constants(kappa)
            km1 = kappa - 1.0
            want = (math.exp(1.0 / (math.pi * km1 + 2.0)) / (2.0 * kappa)
                    * math.sqrt(km1 * (math.pi * km1 + 2.0) / math.pi))
            assert c.rho == pytest.approx(want, rel=1e-15)
            assert 0.0 < c.rho < 0.5

    def test_rho_vanishes_toward_kappa_one(self):
        assert bound_constants(1.0 + 1e-10).rho < 1e-4

    def test_rejects_kappa_at_most_one(self):
        for bad in (1.0, 0.5, 0.0, -2.0, float("nan")):
            with pytest.raises(ValueError):
                bound_constants(bad)


class TestPerPortBoundFactor:
    def test_in_unit_interval(self):
        c = bound_constants()
        rng = np.random.default_rng(13)
        for _ in range(300):
            mu = rng.uniform(-0.999999, 0.999999)
            x = rng.uniform(1e-3, 20.0)
            f = per_port_bound_factor(mu, x, c)
            assert 0.0 < f <= 1.0

    def test_degenerate_limit_is_one(self):
        c = bound_constants()
        assert per_port_bound_factor(1.0 - 1e-12, 1.0, c) == pytest.approx(
            1.0, abs=1e-9)

    def test_large_snr_ratio_limit_is_one(self):
        c = bound_constants()
        assert per_port_bound_factor(0.5, 1e6, c) == pytest.approx(1.0,
                                                                   abs=1e-15)

    def test_primary_branch_value(self):
        # direct recomputation of 1 - rho/sqrt(mu) * exp(-kappa x/(1-mu^2))
        c = bound_constants()
        mu, x = 0.9, 1.0
        want = 1.0 - c.rho / math.sqrt(mu) * math.exp(-c.kappa * x / (1 - mu * mu))
        assert per_port_bound_factor(mu, x, c) == pytest.approx(want, rel=1e-15)

    def test_zero_mu_uses_fallback(self):
        c = bound_constants()
        want = 1.0 - c.rho * math.exp(-c.kappa * 1.0)
        assert per_port_bound_factor(0.0, 1.0, c) == pytest.approx(want,
                                                                   rel=1e-15)

    def test_small_mu_uses_fallback(self):
        # rho/sqrt(|mu|) >= 1 here, so the primary factor could go negative
        c = bound_constants()
        mu = 0.01
        assert c.rho / math.sqrt(mu) >= 1.0
        want = 1.0 - c.rho * math.exp(-c.kappa * 0.5 / (1 - mu * mu))
        assert per_port_bound_factor(mu, 0.5, c) == pytest.approx(want,
                                                                  rel=1e-15)

    def test_rejects_unit_mu(self):
        with pytest.raises(ValueError):
            per_port_bound_factor(1.0, 1.0, bound_constants())


class TestOutageUpperBound:
    def test_single_port(self):
        c = FasConfig(n_ports=1, size_wavelengths=1.0, snr_ratio=1.0)
        assert outage_upper_bound(c, bound_constants()) == pytest.approx(
            1.0 - math.exp(-1.0), abs=1e-15)

    def test_dominates_exact_on_grid(self):
        for kappa in (1.5, 2.0, 3.0):
            constants = bound_constants(kappa)
            for n in (2, 3, 5, 10):
                for w in (0.2, 1.0, 5.0):
                    for x in (0.1, 1.0, 10.0):
                        c = FasConfig(n_ports=n, size_wavelengths=w,
                                      snr_ratio=x)
                        assert outage_exact(c) <= \
                            outage_upper_bound(c, constants) + 1e-12

    def test_monotone_decreasing_in_ports(self):
        constants = bound_constants()
        vals = [outage_upper_bound(
            FasConfig(n_ports=n, size_wavelengths=5.0, snr_ratio=1.0),
            constants) for n in range(10, 101, 10)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_vanishes_geometrically_with_cloned_ports(self):
        # small snr_ratio keeps the per-port factor well below 1, so the
        # decay is visible within a few dozen ports
        constants = bound_constants()
        mu_port, x = 0.9, 0.05
        vals = [outage_upper_bound_profile([0.0] + [mu_port] * k, x,
                                           constants) for k in (1, 10, 50)]
        factor = per_port_bound_factor(mu_port, x, constants)
        assert factor < 0.8
        assert vals[1] == pytest.approx(vals[0] * factor ** 9, rel=1e-12)
        assert vals[2] < 1e-3 * vals[0]

    def test_skips_degenerate_ports(self):
        constants = bound_constants()
        with_degenerate = outage_upper_bound_profile([0.0, 0.5, 1.0], 1.0,
                                                     constants)
        without = outage_upper_bound_profile([0.0, 0.5], 1.0, constants)
        assert with_degenerate == without


class TestOptimizeKappa:
    def test_never_looser_than_default(self):
        c = FasConfig(n_ports=10, size_wavelengths=0.5, snr_ratio=1.0)
        best = optimize_kappa(c)
        assert outage_upper_bound(c, best) <= \
            outage_upper_bound(c, bound_constants()) + 1e-9

    def test_result_still_valid_bound(self):
        c = FasConfig(n_ports=5, size_wavelengths=1.0, snr_ratio=1.0)
        best = optimize_kappa(c)
        assert best.kappa > 1.0
        assert outage_exact(c) <= outage_upper_bound(c, best) + 1e-12

    def test_rejects_bad_bracket(self):
        c = FasConfig(n_ports=3, size_wavelengths=1.0, snr_ratio=1.0)
        with pytest.raises(ValueError):
            optimize_kappa(c, lo=0.5, hi=2.0)
