"""Tracy-Widom table checks against two independent oracles.

Oracle 1 re-derives the order-1 CDF from the Hastings-McLeod solution of
Painleve II (a completely different route from the Fredholm determinant
used to generate the embedded table). Oracle 2 simulates largest
eigenvalues of finite GOE matrices and compares empirical tail
probabilities at the tabulated quantiles.
"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.special import airy

from rmt_spectre import InputError, TwTable, default_table, load_table, tw_quantile


def painleve_cdf(s_eval: np.ndarray) -> np.ndarray:
    """F1 via q'' = s q + 2 q^3 with q ~ Ai at +inf (independent oracle)."""
    s0 = 10.0
    ai0, aip0, _, _ = airy(s0)

    def rhs(s, y):
        q, qp, _, _, _ = y
        return [qp, s * q + 2.0 * q ** 3, q, q * q, s * q * q]

    sol = solve_ivp(rhs, [s0, float(np.min(s_eval)) - 1e-9],
                    [ai0, aip0, 0.0, 0.0, 0.0],
                    dense_output=True, rtol=1e-12, atol=1e-15, method="DOP853")
    out = []
    for s in np.atleast_1d(s_eval):
        _, _, i1, i2, xq2 = sol.sol(s)
        f2 = np.exp(-((-xq2) - s * (-i2)))
        out.append(np.sqrt(f2) * np.exp(-0.5 * (-i1)))
    return np.asarray(out)


class TestAgainstPainleveOracle:
    def test_all_knots(self):
        table = default_table()
        cdf = painleve_cdf(table.values)
        err = np.max(np.abs(cdf - table.levels))
        assert err <= 1e-3   # observed ~1e-6; tolerance per the contract

    def test_interpolated_quantiles(self):
        # off-knot levels go through the interpolator; check via the oracle
        levels = np.array([0.123, 0.456, 0.789, 0.9, 0.905])
        values = np.array([tw_quantile(p) for p in levels])
        cdf = painleve_cdf(values)
        assert np.max(np.abs(cdf - levels)) <= 1e-3


class TestGoeMonteCarlo:
    def test_tail_probabilities(self):
        # GOE largest eigenvalue: n^(2/3) (lmax - 2) -> TW1 for
        # A = (G + G') / sqrt(2 n). Coarse finite-n oracle.
        rng = np.random.default_rng(20260809)
        n, trials = 300, 1200
        scaled = np.empty(trials)
        for i in range(trials):
            g = rng.normal(size=(n, n))
            a = (g + g.T) / np.sqrt(2.0 * n)
            lmax = np.linalg.eigvalsh(a)[-1]
            scaled[i] = n ** (2.0 / 3.0) * (lmax - 2.0)
        for level in (0.1, 0.5, 0.9):
            empirical = float(np.mean(scaled <= tw_quantile(level)))
            assert empirical == pytest.approx(level, abs=0.06)


class TestTableProperties:
    def test_strictly_monotone_interpolant(self):
        table = default_table()
        grid = np.linspace(table.levels[0], table.levels[-1], 4001)
        values = np.array([table.quantile(float(p)) for p in grid])
        assert np.all(np.diff(values) > 0)

    def test_monotone_pair(self):
        assert tw_quantile(0.95) > tw_quantile(0.90)

    def test_level_validation(self):
        with pytest.raises(InputError):
            tw_quantile(0.0)
        with pytest.raises(InputError):
            tw_quantile(1.0)

    def test_extrapolation_refused(self):
        table = default_table()
        with pytest.raises(InputError):
            table.quantile(float(table.levels[0]) / 2.0)
        with pytest.raises(InputError):
            table.quantile(1.0 - (1.0 - float(table.levels[-1])) / 2.0)

    def test_malformed_tables_rejected(self):
        with pytest.raises(InputError):
            TwTable(levels=np.array([0.1, 0.1, 0.9]),
                    values=np.array([-1.0, 0.0, 1.0]))
        with pytest.raises(InputError):
            TwTable(levels=np.array([0.1, 0.9]), values=np.array([1.0, -1.0]))


class TestCsvOverride:
    def test_roundtrip(self, tmp_path):
        table = default_table()
        path = tmp_path / "tw.csv"
        lines = ["# level,value"]
        lines += [f"{lv},{v}" for lv, v in zip(table.levels, table.values)]
        path.write_text("\n".join(lines) + "\n")
        loaded = load_table(path)
        np.testing.assert_allclose(loaded.levels, table.levels)
        np.testing.assert_allclose(loaded.values, table.values)
        assert loaded.quantile(0.9) == table.quantile(0.9)

    def test_bad_file(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("not,a,number\n")
        with pytest.raises(InputError):
            load_table(path)
