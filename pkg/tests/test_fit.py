"""BEMA and Gaussian-broadening scale estimators.

Monte Carlo recovery at full acceptance size lives in test_acceptance;
here the focus is exact identities, edge rules, and small seeded runs.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from rmt_spectre import (InputError, MpParams, SpikedSpec, bema, broaden,
                         gb_fit, gen_spiked, mp_upper_quantile, singular_values)


def unit_quantile_spectrum(m, q, sigma=1.0):
    """Descending spectrum placed exactly at upper k/m MP quantiles."""
    p = MpParams(sigma=1.0, q=q)
    return sigma * np.array([mp_upper_quantile(k / m, p) for k in range(1, m + 1)])


class TestBema:
    def test_exact_quantile_identity(self):
        # if gamma_k = c p_k exactly, the ratio formula returns c
        gam = unit_quantile_spectrum(100, q=0.5)
        for c in (0.05, 1.0, 3.7):
            fit = bema(c * gam, q=0.5, alpha=0.2)
            assert fit.sigma_hat == pytest.approx(c, rel=1e-12)

    def test_trim_window_alpha02_m100(self):
        # alpha = 0.2, m = 100: k runs 20..80, 61 points = 60% of the spectrum
        fit = bema(unit_quantile_spectrum(100, q=0.5), q=0.5, alpha=0.2)
        assert fit.diagnostics["k_lo"] == 20
        assert fit.diagnostics["k_hi"] == 80
        assert fit.diagnostics["points_used"] == 61

    def test_exact_linearity(self):
        rng = np.random.default_rng(0)
        gam = np.sort(rng.uniform(0.1, 2.0, size=100))[::-1]
        s1 = bema(gam, q=0.5).sigma_hat
        s2 = bema(2.0 * gam, q=0.5).sigma_hat
        assert s2 == pytest.approx(2.0 * s1, rel=1e-12)

    def test_independent_of_values_outside_window(self):
        gam = unit_quantile_spectrum(100, q=0.5)
        base = bema(gam, q=0.5, alpha=0.2).sigma_hat
        bumped = gam.copy()
        bumped[:19] *= 5.0          # k = 1..19 < ceil(alpha m)
        bumped[81:] *= 0.2          # k = 82..100 > floor((1-alpha) m)
        assert bema(bumped, q=0.5, alpha=0.2).sigma_hat == base

    def test_noise_recovery_small(self):
        matrix, _ = gen_spiked(SpikedSpec(n=800, m=400, sigma=0.05, seed=21))
        gam = singular_values(matrix)
        fit = bema(gam, q=0.5)
        assert fit.sigma_hat == pytest.approx(0.05, rel=0.02)

    def test_validation(self):
        gam = unit_quantile_spectrum(100, q=0.5)
        with pytest.raises(InputError):
            bema(gam, q=0.5, alpha=0.6)
        with pytest.raises(InputError):
            bema(gam[:3], q=0.5)
        with pytest.raises(InputError):
            bema(gam[::-1], q=0.5)   # ascending input


class TestBroaden:
    def test_window_width_rule(self):
        # a=1, ascending [1, 2, 4]: width at the middle point is (4 - 1)/2
        dens = broaden(np.array([1.0, 2.0, 4.0]), a=1)
        assert dens.widths[1] == pytest.approx(1.5)
        # clamped ends keep divisor 2: (2 - 1)/2 and (4 - 2)/2
        assert dens.widths[0] == pytest.approx(0.5)
        assert dens.widths[2] == pytest.approx(1.0)

    def test_single_point_is_one_gaussian(self):
        dens = broaden(np.array([2.0]), a=1)
        assert dens.widths.shape == (1,)
        assert dens.widths[0] > 0
        assert dens(2.0) == pytest.approx(1.0 / (np.sqrt(2 * np.pi) * dens.widths[0]))

    def test_integrates_to_one(self):
        rng = np.random.default_rng(1)
        gam = np.sort(rng.uniform(0.5, 2.5, size=60))
        dens = broaden(gam, a=5)
        total, _ = quad(dens, -2.0, 6.0, limit=400)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_constant_spectrum_rejected(self):
        with pytest.raises(InputError):
            broaden(np.full(10, 3.0), a=2)

    def test_requires_ascending(self):
        with pytest.raises(InputError):
            broaden(np.array([3.0, 1.0, 2.0]), a=1)


class TestGbFit:
    def test_exact_mp_quantile_sample(self):
        # deterministic oracle: spectrum placed at MP(sigma=2, q=0.5) quantiles
        m = 500
        p = MpParams(sigma=2.0, q=0.5)
        gam = np.array([mp_upper_quantile((k - 0.5) / m, p) for k in range(1, m + 1)])
        fit = gb_fit(gam, q=0.5, a=5)
        assert 1.9 <= fit.sigma_hat <= 2.1

    def test_scale_equivariance(self):
        matrix, _ = gen_spiked(SpikedSpec(n=1000, m=500, sigma=1.0, seed=5))
        gam = singular_values(matrix)
        base = gb_fit(gam, q=0.5).sigma_hat
        for c in (0.1, 10.0):
            assert gb_fit(c * gam, q=0.5).sigma_hat == pytest.approx(c * base, rel=0.01)

    def test_local_minimum_certificate(self):
        matrix, _ = gen_spiked(SpikedSpec(n=1000, m=500, sigma=1.0, seed=6))
        gam = singular_values(matrix)
        fit = gb_fit(gam, q=0.5, a=5)

        g_asc = gam[::-1]
        dens = broaden(g_asc, a=5)
        p_vals = dens(g_asc)
        mask = g_asc <= fit.sigma_hat * (1 + np.sqrt(0.5))

        def objective(sigma):
            from rmt_spectre import mp_density
            vals = mp_density(g_asc[mask], MpParams(sigma=sigma, q=0.5))
            return float(np.sum((p_vals[mask] - vals) ** 2))

        at_min = objective(fit.sigma_hat)
        assert at_min <= objective(0.9 * fit.sigma_hat)
        assert at_min <= objective(1.1 * fit.sigma_hat)

    def test_exclusion_recorded(self):
        # strong spikes get excluded from the objective within a few rounds
        matrix, _ = gen_spiked(
            SpikedSpec(n=1000, m=500, sigma=1.0, thetas=(4.0, 3.0), seed=7))
        gam = singular_values(matrix)
        fit = gb_fit(gam, q=0.5)
        assert fit.diagnostics["excluded"] >= 2
        assert fit.diagnostics["converged"]
        assert fit.sigma_hat == pytest.approx(1.0, rel=0.05)

    def test_noise_recovery_small(self):
        matrix, _ = gen_spiked(SpikedSpec(n=800, m=400, sigma=1.0, seed=22))
        fit = gb_fit(singular_values(matrix), q=0.5)
        assert fit.sigma_hat == pytest.approx(1.0, rel=0.05)
