"""Rank-s truncation and parameter accounting."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmt_spectre import (InputError, export_factors, orient, param_savings,
                         svd, truncate)


def tail_norm_oracle(gamma, s):
    # Eckart-Young: Frobenius error of the best rank-s approximation
    return float(np.sqrt(np.sum(np.asarray(gamma[s:]) ** 2)))


class TestTruncate:
    def test_full_rank_exact(self):
        rng = np.random.default_rng(0)
        w = rng.normal(size=(40, 25))
        spectrum = svd(orient(w))
        factors = truncate(spectrum, 25)
        assert factors.recon_error <= 1e-10 * np.linalg.norm(w)
        np.testing.assert_allclose(factors.product(), w, atol=1e-10)

    def test_rank_zero_is_zero_matrix(self):
        rng = np.random.default_rng(1)
        w = rng.normal(size=(30, 20))
        spectrum = svd(orient(w))
        factors = truncate(spectrum, 0)
        assert factors.left.shape == (30, 0)
        assert factors.product().shape == (0, 0) or factors.s == 0
        assert factors.recon_error == pytest.approx(np.linalg.norm(w), rel=1e-12)

    def test_diagonal_example(self):
        spectrum = svd(orient(np.diag([3.0, 2.0, 1.0])))
        factors = truncate(spectrum, 2)
        # dropped tail is just gamma_3 = 1
        assert factors.recon_error == pytest.approx(1.0, rel=1e-12)

    def test_tail_formula_across_ranks(self):
        rng = np.random.default_rng(2)
        w = rng.normal(size=(50, 30))
        spectrum = svd(orient(w))
        previous = np.inf
        for s in range(0, 31, 5):
            factors = truncate(spectrum, s)
            oracle = tail_norm_oracle(spectrum.gamma, s)
            if oracle > 0:
                assert factors.recon_error == pytest.approx(oracle, rel=1e-10)
            else:
                assert factors.recon_error <= 1e-10 * np.linalg.norm(w)
            assert factors.recon_error <= previous + 1e-12
            previous = factors.recon_error

    def test_rank_too_large(self):
        spectrum = svd(orient(np.eye(4)))
        with pytest.raises(InputError):
            truncate(spectrum, 5)


class TestParamSavings:
    def test_example_1024x512(self):
        res = param_savings(1024, 512, 20)
        assert res.original == 524288
        assert res.factored == 30720
        assert res.saves

    def test_boundary_exact_not_saving(self):
        # s (n + m) == n m exactly: strict comparison says no saving
        res = param_savings(2, 2, 1)
        assert res.factored == res.original == 4
        assert not res.saves

    def test_rank_zero_saves(self):
        res = param_savings(100, 50, 0)
        assert res.factored == 0
        assert res.saves

    @given(st.integers(2, 500), st.integers(2, 500), st.integers(0, 500))
    @settings(max_examples=100, deadline=None)
    def test_exact_integer_arithmetic(self, n, m, s):
        if m > n:
            n, m = m, n
        if s > m:
            s = m
        res = param_savings(n, m, s)
        assert res.original == n * m
        assert res.factored == s * (n + m)
        assert res.saves == (s * (n + m) < n * m)


class TestExport:
    def test_files_and_sidecar(self, tmp_path):
        rng = np.random.default_rng(3)
        w = rng.normal(size=(40, 25))
        spectrum = svd(orient(w))
        factors = truncate(spectrum, 5)
        sidecar = export_factors(factors, tmp_path, "demo", source_path="demo.npy")

        left = np.load(tmp_path / "demo_left.npy")
        right = np.load(tmp_path / "demo_right.npy")
        np.testing.assert_array_equal(left, factors.left)
        np.testing.assert_array_equal(right, factors.right)

        on_disk = json.loads((tmp_path / "demo_factors.json").read_text())
        assert on_disk == sidecar
        assert on_disk["convention"] == "gamma-in-left"
        assert on_disk["s"] == 5
        assert on_disk["params_factored"] == 5 * (40 + 25)
        # factors reassemble the truncation under the recorded convention
        np.testing.assert_allclose(left @ right, factors.product(), atol=1e-12)
