"""Estimating the MP scale sigma from an observed singular spectrum.

Two estimators are provided:

* :func:`bema` regresses the trimmed, sorted singular values on unit-scale
  MP quantiles: with p_k the upper k/m quantile of MP(sigma=1, q) and
  gamma_k the k-th largest observed value,

      sigma_hat = sum(p_k gamma_k) / sum(p_k^2),  ceil(alpha m) <= k <= floor((1-alpha) m).

  The formula is exactly linear in the spectrum, so feeding it c * p_k
  returns c.

* :func:`gb_fit` smooths the empirical spectrum with data-adaptive
  Gaussian widths (:func:`broaden`) and least-squares fits the MP density
  to the smoothed values at the observed points, iterating an outlier
  exclusion so signal spikes do not drag sigma_hat upward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InputError, NumericalError
from .marchenko_pastur import MpParams, mp_density, mp_upper_quantile

GB_MAX_ROUNDS = 10


@dataclass(frozen=True)
class MpFit:
    """A fitted MP scale with the hyperparameters that produced it."""

    sigma_hat: float
    q: float
    method: str                    # "bema" | "gb"
    alpha: float | None = None     # BEMA trim fraction
    beta: float | None = None      # TW level used downstream, recorded for provenance
    window_a: int | None = None    # GB window half-width
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.isfinite(self.sigma_hat) and self.sigma_hat > 0):
            raise NumericalError(
                f"estimated sigma must be positive and finite, got {self.sigma_hat}")

    @property
    def params(self) -> MpParams:
        return MpParams(sigma=self.sigma_hat, q=self.q)


@lru_cache(maxsize=32)
def _unit_quantiles(m: int, q: float, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """k indices and upper-k/m quantiles of MP(sigma=1, q) for the trim window."""
    k_lo = int(np.ceil(alpha * m))
    k_hi = int(np.floor((1.0 - alpha) * m))
    ks = np.arange(max(k_lo, 1), k_hi + 1)
    params = MpParams(sigma=1.0, q=q)
    p = np.array([mp_upper_quantile(k / m, params) for k in ks])
    return ks, p


def bema(gamma: np.ndarray, q: float, alpha: float = 0.2) -> MpFit:
    """Estimate sigma by matching trimmed singular values to MP quantiles.

    ``gamma`` must be descending and non-negative; ``alpha`` in (0, 1/2)
    trims that fraction of the spectrum at both ends.
    """
    gamma = np.asarray(gamma, dtype=float)
    m = gamma.size
    if m < 5:
        raise InputError(f"BEMA needs at least 5 singular values, got {m}")
    if not 0.0 < alpha < 0.5:
        raise InputError(f"alpha must lie in (0, 1/2), got {alpha}")
    if np.any(np.diff(gamma) > 0) or np.any(gamma < 0):
        raise InputError("gamma must be descending and non-negative")

    ks, p = _unit_quantiles(m, float(q), float(alpha))
    if ks.size == 0:
        raise InputError(f"empty trim range: m={m} too small for alpha={alpha}")
    g = gamma[ks - 1]              # k-th largest pairs with the upper k/m quantile
    sigma_hat = float(np.sum(p * g) / np.sum(p * p))
    if not np.isfinite(sigma_hat) or sigma_hat <= 0:
        raise NumericalError(f"BEMA produced a non-positive scale: {sigma_hat}")
    residual = float(np.sqrt(np.mean((g - sigma_hat * p) ** 2)))
    return MpFit(sigma_hat=sigma_hat, q=float(q), method="bema", alpha=float(alpha),
                 diagnostics={"k_lo": int(ks[0]), "k_hi": int(ks[-1]),
                              "points_used": int(ks.size), "rms_residual": residual})


class GaussianBroadening:
    """Smoothed spectral density: mean of Gaussians centered at each value.

    The width at point k is half the spacing gamma_{k+a} - gamma_{k-a}
    (indices clamped to the ends, divisor kept at 2), floored at
    1e-12 * max(gamma) so coincident points cannot produce zero-width
    components. Callable on scalars or arrays; integrates to 1.
    """

    def __init__(self, gamma_ascending: np.ndarray, a: int):
        if a < 1:
            raise InputError(f"window half-width a must be >= 1, got {a}")
        g = np.asarray(gamma_ascending, dtype=float)
        if g.ndim != 1 or g.size < 1:
            raise InputError("need a 1-D, non-empty spectrum")
        if np.any(np.diff(g) < 0):
            raise InputError("gamma must be sorted ascending")
        m = g.size
        idx = np.arange(m)
        hi = np.minimum(idx + a, m - 1)
        lo = np.maximum(idx - a, 0)
        widths = (g[hi] - g[lo]) / 2.0
        if m == 1:
            floor = 1e-12 * max(abs(g[0]), 1.0)
        else:
            if not np.any(widths > 0):
                raise InputError("all spacings are zero: constant spectrum")
            floor = 1e-12 * float(np.max(g))
        self.centers = g
        self.widths = np.maximum(widths, floor)
        self.window_a = a

    def __call__(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        z = (x_arr[:, None] - self.centers[None, :]) / self.widths[None, :]
        vals = np.exp(-0.5 * z * z) / (np.sqrt(2.0 * np.pi) * self.widths[None, :])
        out = vals.mean(axis=1)
        return float(out[0]) if np.ndim(x) == 0 else out


def broaden(gamma_ascending: np.ndarray, a: int) -> GaussianBroadening:
    """Build the Gaussian-broadened density of an ascending spectrum."""
    return GaussianBroadening(gamma_ascending, a)


def gb_fit(gamma: np.ndarray, q: float, a: int = 5) -> MpFit:
    """Least-squares fit of the MP density to the broadened spectrum.

    ``gamma`` is descending. Each round minimizes
    sum_i (P(gamma_i) - g(gamma_i; sigma))^2 over sigma by bounded scalar
    minimization; points above the fitted bulk edge sigma (1 + sqrt(q))
    are then dropped from the objective and the fit repeats until the
    excluded set stabilizes (at most GB_MAX_ROUNDS rounds). Zero rounds
    means nothing was ever excluded.
    """
    gamma = np.asarray(gamma, dtype=float)
    m = gamma.size
    if m < 5:
        raise InputError(f"GB fit needs at least 5 singular values, got {m}")
    if np.any(np.diff(gamma) > 0) or np.any(gamma < 0):
        raise InputError("gamma must be descending and non-negative")

    g_asc = gamma[::-1].copy()
    density = broaden(g_asc, a)
    p_vals = density(g_asc)

    sqrt_q = np.sqrt(q)
    gamma_med = float(np.median(g_asc))
    lo = 0.2 * gamma_med / (1.0 + sqrt_q)
    hi = 2.0 * float(g_asc[-1]) / (1.0 + sqrt_q)
    if not (lo > 0 and hi > lo):
        raise NumericalError(
            f"degenerate sigma bracket [{lo}, {hi}] for this spectrum")

    mask = np.ones(m, dtype=bool)
    sigma_hat = None
    residual = np.inf
    rounds = 0
    converged = False
    for _ in range(GB_MAX_ROUNDS + 1):
        if mask.sum() < 5:
            raise NumericalError(
                "outlier exclusion left fewer than 5 points; objective degenerate")

        def objective(sigma: float) -> float:
            dens = mp_density(g_asc[mask], MpParams(sigma=sigma, q=q))
            return float(np.sum((p_vals[mask] - dens) ** 2))

        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-11 * hi, "maxiter": 500})
        if not res.success:
            raise NumericalError(f"sigma minimization failed: {res.message}")
        sigma_hat = float(res.x)
        residual = float(res.fun)

        new_mask = g_asc <= sigma_hat * (1.0 + sqrt_q)
        if np.array_equal(new_mask, mask):
            converged = True
            break
        mask = new_mask
        rounds += 1

    fit = MpFit(sigma_hat=sigma_hat, q=float(q), method="gb", window_a=int(a),
                diagnostics={"residual": residual, "rounds": rounds,
                             "excluded": int(m - mask.sum()), "converged": converged})
    return fit
