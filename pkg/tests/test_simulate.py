"""Spiked-model generator and Monte Carlo harness.

Full-size Monte Carlo validation (n = 4000) runs in test_acceptance;
these tests keep dimensions moderate so the whole module stays fast.
"""

import numpy as np
import pytest

from rmt_spectre import InputError, SpikedSpec, gen_spiked, mc_verify, rho
from rmt_spectre.simulate import trial_seed


class TestSpec:
    def test_validation(self):
        with pytest.raises(InputError):
            SpikedSpec(n=10, m=20)          # n < m
        with pytest.raises(InputError):
            SpikedSpec(n=20, m=10, sigma=0.0)
        with pytest.raises(InputError):
            SpikedSpec(n=20, m=10, thetas=(1.0, 2.0))   # ascending
        with pytest.raises(InputError):
            SpikedSpec(n=20, m=3, thetas=(3.0, 2.0, 1.0))  # s >= m

    def test_q(self):
        assert SpikedSpec(n=2000, m=1000).q == 0.5


class TestGeneration:
    def test_deterministic(self):
        spec = SpikedSpec(n=100, m=50, thetas=(2.0,), seed=42)
        a, truth_a = gen_spiked(spec)
        b, truth_b = gen_spiked(spec)
        np.testing.assert_array_equal(a.data, b.data)
        np.testing.assert_array_equal(truth_a.left, truth_b.left)

    def test_different_seeds_differ(self):
        a, _ = gen_spiked(SpikedSpec(n=50, m=30, seed=1))
        b, _ = gen_spiked(SpikedSpec(n=50, m=30, seed=2))
        assert not np.array_equal(a.data, b.data)

    def test_planted_frames_orthonormal(self):
        _, truth = gen_spiked(SpikedSpec(n=300, m=200, thetas=(3.0, 2.0), seed=3))
        for frame in (truth.left, truth.right):
            gram = frame.T @ frame
            assert np.abs(gram - np.eye(frame.shape[1])).max() <= 1e-12

    def test_noise_entry_variance(self):
        # entries are drawn with variance sigma^2 / n
        spec = SpikedSpec(n=400, m=300, sigma=2.0, seed=4)
        matrix, _ = gen_spiked(spec)
        observed = matrix.data.var()
        assert observed == pytest.approx(4.0 / 400, rel=0.02)

    def test_uniform_noise_variance(self):
        spec = SpikedSpec(n=400, m=300, sigma=2.0, seed=5, noise="uniform")
        matrix, _ = gen_spiked(spec)
        assert matrix.data.var() == pytest.approx(4.0 / 400, rel=0.02)
        assert np.abs(matrix.data).max() <= 2.0 * np.sqrt(3.0 / 400) + 1e-12

    def test_pure_noise_edge(self):
        # largest singular value approaches sigma (1 + sqrt(q))
        matrix, _ = gen_spiked(SpikedSpec(n=4000, m=2000, sigma=1.0, seed=6))
        gamma1 = np.linalg.svd(matrix.data, compute_uv=False)[0]
        assert 1.70 <= gamma1 <= 1.72

    def test_uniform_noise_universality(self):
        # the same bulk edge emerges for non-Gaussian i.i.d. entries
        matrix, _ = gen_spiked(
            SpikedSpec(n=2000, m=1000, sigma=1.0, seed=61, noise="uniform"))
        gamma1 = np.linalg.svd(matrix.data, compute_uv=False)[0]
        assert abs(gamma1 - (1.0 + np.sqrt(0.5))) <= 0.03

    def test_subcritical_spike_sticks_to_bulk(self):
        # theta = 0.5 < q^(1/4) ~ 0.841 for q = 0.5: no outlier separates
        spec = SpikedSpec(n=2000, m=1000, sigma=1.0, thetas=(0.5,), seed=7)
        matrix, _ = gen_spiked(spec)
        gamma1 = np.linalg.svd(matrix.data, compute_uv=False)[0]
        edge = 1.0 + np.sqrt(0.5)
        assert abs(gamma1 - edge) <= 0.03

    def test_supercritical_spike_lands_at_rho(self):
        spec = SpikedSpec(n=2000, m=2000, sigma=1.0, thetas=(2.0,), seed=8)
        matrix, _ = gen_spiked(spec)
        gamma1 = np.linalg.svd(matrix.data, compute_uv=False)[0]
        assert gamma1 == pytest.approx(rho(2.0, 1.0, 1.0), abs=0.05)


class TestTrialSeeds:
    def test_deterministic_and_distinct(self):
        seeds_a = [trial_seed(99, i) for i in range(10)]
        seeds_b = [trial_seed(99, i) for i in range(10)]
        assert seeds_a == seeds_b
        assert len(set(seeds_a)) == 10
        assert all(0 <= s < 2 ** 64 for s in seeds_a)


class TestMcVerify:
    def test_comparison_rows(self):
        spec = SpikedSpec(n=600, m=300, sigma=1.0, thetas=(2.5, 0.5), seed=9)
        result = mc_verify(spec, trials=5)
        assert result.trials == 5
        assert len(result.rows) == 2
        strong, weak = result.rows
        assert strong.above_threshold
        assert strong.phi_theory > 0.5
        assert strong.rho_theory == pytest.approx(rho(2.5, 0.5, 1.0), rel=1e-12)
        assert strong.dev_gamma == pytest.approx(
            abs(strong.mean_gamma - strong.rho_theory))
        # sub-threshold: theory pinned to edge and zero overlap
        assert not weak.above_threshold
        assert weak.phi_theory == 0.0
        assert weak.rho_theory == pytest.approx(1.0 + np.sqrt(0.5))
        assert weak.mean_overlap <= 0.1

    def test_pure_noise_gamma1(self):
        result = mc_verify(SpikedSpec(n=600, m=300, sigma=1.0, seed=10), trials=4)
        assert result.rows == ()
        assert len(result.gamma1) == 4
        assert np.mean(result.gamma1) == pytest.approx(1.0 + np.sqrt(0.5), abs=0.05)

    def test_deterministic(self):
        spec = SpikedSpec(n=300, m=150, thetas=(2.0,), seed=11)
        a = mc_verify(spec, trials=3)
        b = mc_verify(spec, trials=3)
        assert a.gamma1 == b.gamma1
        np.testing.assert_array_equal(a.per_trial_overlaps, b.per_trial_overlaps)

    def test_deviation_shrinks_with_n(self):
        # per-trial RMS deviation from the limit shrinks as n doubles
        rms = {}
        for n in (1000, 2000, 4000):
            spec = SpikedSpec(n=n, m=n, sigma=1.0, thetas=(2.0,), seed=5)
            result = mc_verify(spec, trials=10)
            rms[n] = float(np.sqrt(np.mean(
                (result.per_trial_gammas[:, 0] - result.rows[0].rho_theory) ** 2)))
        assert rms[4000] < rms[2000] < rms[1000]

    def test_trials_validation(self):
        with pytest.raises(InputError):
            mc_verify(SpikedSpec(n=50, m=20, seed=0), trials=0)
