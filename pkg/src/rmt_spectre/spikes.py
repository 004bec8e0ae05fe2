"""Spike detection and signal/observed singular-vector similarity.

Given a fitted MP scale, this module draws the line between noise bulk
and signal spikes and quantifies how well each retained component tracks
the underlying signal:

* :func:`threshold` -- the squared singular-value cutoff
  gamma_plus^2 = sigma^2 [(1+sqrt(q))^2 + t n^{-2/3} q^{-1/6} (1+sqrt(q))^{4/3}],
  the bulk edge plus a Tracy-Widom finite-size correction t.
* :func:`theta_hat` -- the almost-sure limit mapping an observed outlier
  gamma back to the signal strength theta that produced it.
* :func:`rho` / :func:`phi` -- the inverse map and the limiting squared
  cosine similarity between observed and signal singular vectors
  (measured on the short side of a rectangular matrix; both sides agree
  when the matrix is square), computed through the D-transform

      D(z) = [z^2 - s2 (q+1) - sqrt((z^2 - s2 (q+1))^2 - 4 s2^2 q)] / (2 s2^2 q)

  (s2 = sigma^2), its derivative, and the Stieltjes-type integral
  h(z) = int z / (z^2 - t^2) g(t) dt over the MP bulk:
  phi = -2 h(rho) / (theta^2 D'(rho)) with rho = D^{-1}(1/theta^2).
* :func:`ave_w` -- the spike-strength-weighted mean of the phi values,
  the scalar figure of merit for a threshold choice.
* :func:`analyze` -- the four-step pipeline tying it all together.

For sigma = 1 the similarity has the closed form
phi = 1 - q (1 + theta^2) / (theta^2 (theta^2 + q)), used here as a
cross-check on the numeric path (which is required for general sigma).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import InputError, NumericalError
from .fit import MpFit, bema, gb_fit
from .marchenko_pastur import MpParams
from .matrices import MatrixSource, SingularSpectrum
from .tracy_widom import TwTable, tw_quantile

_PHI_CLAMP = 1e-9
_H_EPSABS = 1e-12
_H_EPSREL = 1e-11


@dataclass(frozen=True)
class ThresholdResult:
    """The spike/noise cutoff and everything needed to recompute it."""

    gamma_plus_sq: float
    t: float
    s_hat: int
    sigma_hat: float
    q: float
    n: int
    beta: float

    @property
    def gamma_plus(self) -> float:
        return math.sqrt(self.gamma_plus_sq)


@dataclass(frozen=True)
class Spike:
    """One retained singular value with its inferred signal strength and
    similarity limit."""

    index: int                    # 1-based rank in the spectrum
    gamma: float
    theta_hat: float
    phi_hat: float
    phi_closed_rescaled: float    # sigma=1 closed form at theta/sigma (diagnostic)


@dataclass(frozen=True)
class SimilarityReport:
    """Output of :func:`analyze`: spikes, weighted metric, provenance."""

    spikes: tuple[Spike, ...]
    ave_w: float | None
    threshold: ThresholdResult
    fit: MpFit
    source: MatrixSource = field(default_factory=MatrixSource)
    warnings: tuple[str, ...] = ()

    @property
    def s_hat(self) -> int:
        return self.threshold.s_hat


def threshold(sigma: float, q: float, n: int, t: float) -> float:
    """Squared cutoff gamma_plus^2; t = 0 gives the bare bulk edge squared."""
    if not sigma > 0:
        raise InputError(f"sigma must be positive, got {sigma}")
    if not 0 < q <= 1:
        raise InputError(f"q must lie in (0, 1], got {q}")
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    sq = math.sqrt(q)
    return sigma ** 2 * ((1.0 + sq) ** 2
                         + t * n ** (-2.0 / 3.0) * q ** (-1.0 / 6.0)
                         * (1.0 + sq) ** (4.0 / 3.0))


def count_spikes(gamma: np.ndarray, gamma_plus_sq: float) -> int:
    """Number of singular values with gamma^2 strictly above the cutoff."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(np.diff(gamma) > 0):
        raise InputError("gamma must be descending")
    return int(np.sum(gamma * gamma > gamma_plus_sq))


def theta_hat(gamma_i: float, q: float, sigma: float) -> float:
    """Signal strength whose outlier lands at gamma_i (limit formula).

    Requires gamma_i strictly outside the bulk, gamma_i > sigma (1 + sqrt(q)).
    """
    edge = sigma * (1.0 + math.sqrt(q))
    if gamma_i <= edge:
        raise InputError(
            f"gamma={gamma_i} is not outside the bulk edge {edge}; "
            "threshold the spectrum before inverting")
    x = (gamma_i / sigma) ** 2 - q - 1.0
    # gamma_i > edge guarantees x >= 2 sqrt(q); clamp the rounding residue
    rad = max(x * x - 4.0 * q, 0.0)
    return sigma / math.sqrt(2.0) * math.sqrt(x + math.sqrt(rad))


def d_transform(z: float, q: float, sigma: float) -> float:
    """D(z) for z at or above the bulk edge (decreasing branch).

    Evaluated through the conjugate form 2 / (A + R) with
    A = z^2 - sigma^2 (q+1) and R = sqrt(A^2 - 4 sigma^4 q), which is
    algebraically identical to (A - R) / (2 sigma^4 q) but avoids the
    catastrophic cancellation of A - R when z >> sigma.
    """
    s2 = sigma * sigma
    a = z * z - s2 * (q + 1.0)
    rad = a * a - 4.0 * s2 * s2 * q
    r = math.sqrt(max(rad, 0.0))   # clamp roundoff at the branch point
    return 2.0 / (a + r)


def d_transform_prime(z: float, q: float, sigma: float) -> float:
    """dD/dz on the same branch; -inf at the bulk edge.

    Same conjugate trick: z (R - A) / (R sigma^4 q) = -4 z / ((A + R) R).
    """
    s2 = sigma * sigma
    a = z * z - s2 * (q + 1.0)
    rad = a * a - 4.0 * s2 * s2 * q
    r = math.sqrt(max(rad, 0.0))
    if r == 0.0:
        return -math.inf
    return -4.0 * z / ((a + r) * r)


def rho(theta: float, q: float, sigma: float) -> float:
    """The unique z above the bulk edge with D(z) = 1 / theta^2.

    This is the limiting location of the outlier produced by a signal of
    strength theta; it inverts :func:`theta_hat`.
    """
    if theta <= sigma * q ** 0.25:
        raise NumericalError(
            f"theta={theta} at or below the detection threshold "
            f"{sigma * q ** 0.25}; D has no root above the bulk edge")
    edge = sigma * (1.0 + math.sqrt(q))
    target = 1.0 / (theta * theta)

    f_edge = d_transform(edge, q, sigma) - target
    if f_edge <= 0.0:
        # root is below float resolution above the edge
        return edge
    hi = max(2.0 * theta, 2.0 * edge)
    while d_transform(hi, q, sigma) > target:
        hi *= 2.0
    z = brentq(lambda zz: d_transform(zz, q, sigma) - target, edge, hi,
               xtol=1e-14 * edge, rtol=8.9e-16, maxiter=200)
    # Newton polish to push the defining residual to machine level
    for _ in range(3):
        dp = d_transform_prime(z, q, sigma)
        if not math.isfinite(dp) or dp == 0.0:
            break
        step = (d_transform(z, q, sigma) - target) / dp
        if z - step <= edge:
            break
        z -= step
    resid = abs(d_transform(z, q, sigma) - target)
    if resid > 1e-12 * target and (z - edge) > 1e-9 * edge:
        raise NumericalError(
            f"rho root-finding residual {resid:.2e} exceeds tolerance at "
            f"theta={theta}, q={q}, sigma={sigma}")
    return float(z)


def h_transform(z: float, params: MpParams) -> float:
    """h(z) = int z / (z^2 - t^2) g(t) dt over the MP support, z > x_max.

    Uses the same sin^2 endpoint substitution as the MP CDF so the
    square-root edge behavior integrates cleanly.
    """
    a = params.x_min ** 2
    b = params.x_max ** 2
    if z <= params.x_max:
        raise InputError(f"h(z) requires z above the bulk edge {params.x_max}")
    q, sigma = params.q, params.sigma

    def integrand(u: float) -> float:
        s = math.sin(u)
        c = math.cos(u)
        y = a + (b - a) * s * s    # t^2
        mass = (b - a) ** 2 * (s * c) ** 2 / (math.pi * q * sigma ** 2 * y)
        return z / (z * z - y) * mass

    val, err = quad(integrand, 0.0, math.pi / 2.0,
                    epsabs=_H_EPSABS, epsrel=_H_EPSREL, limit=200)
    if err > 1e-8:
        raise NumericalError(
            f"h(z) quadrature failed to converge (err={err:.2e}) at z={z}, {params}")
    return float(val)


def phi_closed_form(theta: float, q: float) -> float:
    """Similarity limit for sigma = 1: 1 - q (1 + theta^2) / (theta^2 (theta^2 + q))."""
    t2 = theta * theta
    return 1.0 - q * (1.0 + t2) / (t2 * (t2 + q))


def phi(theta: float, q: float, sigma: float) -> float:
    """Limiting squared cosine similarity between observed and signal
    singular vectors for a spike of strength theta.

    Computed through the general-sigma numeric path (rho, h, D'); the
    analytic D' is cross-checked by central finite differences away from
    the branch point. Values outside [0, 1] beyond 1e-9 raise instead of
    clamping -- they indicate broken quadrature or branch selection.
    """
    det = sigma * q ** 0.25
    if theta < det:
        raise InputError(
            f"theta={theta} below the detection threshold {det}")
    if theta <= det * (1.0 + 1e-12):
        return 0.0                 # boundary: similarity vanishes at the edge

    r = rho(theta, q, sigma)
    params = MpParams(sigma=sigma, q=q)
    edge = params.x_max
    if r <= edge * (1.0 + 1e-13):
        return 0.0                 # root pinned to the edge at float resolution

    dp = d_transform_prime(r, q, sigma)
    # skip the FD cross-check near the square-root branch point, where
    # central differences stop being meaningful
    if (r - edge) > 1e-3 * edge:
        h_step = 1e-6 * r
        fd = (d_transform(r + h_step, q, sigma)
              - d_transform(r - h_step, q, sigma)) / (2.0 * h_step)
        if abs(fd - dp) > 1e-6 * abs(dp):
            raise NumericalError(
                f"analytic D'(z) disagrees with finite differences at z={r}: "
                f"{dp} vs {fd}")

    value = -2.0 * h_transform(r, params) / (theta * theta * dp)
    if value < -_PHI_CLAMP or value > 1.0 + _PHI_CLAMP:
        raise NumericalError(
            f"phi={value} outside [0,1] beyond {_PHI_CLAMP}: broken quadrature "
            f"or branch selection at theta={theta}, q={q}, sigma={sigma}")
    return float(min(max(value, 0.0), 1.0))


def ave_w(phis, gammas, gamma_plus: float) -> float:
    """Weighted average of phi values with weights gamma_i - gamma_plus.

    All gammas must lie strictly above gamma_plus; the result is a convex
    combination and therefore stays in [0, 1].
    """
    phis = np.asarray(phis, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    if phis.size == 0:
        raise InputError("no spikes: the weighted similarity is undefined")
    if phis.shape != gammas.shape:
        raise InputError("phi and gamma lists must have the same length")
    weights = gammas - gamma_plus
    if np.any(weights <= 0):
        raise InputError("every spike must lie strictly above gamma_plus")
    return float(np.sum(phis * weights) / np.sum(weights))


def analyze(spectrum: SingularSpectrum, method: str = "bema", *,
            alpha: float = 0.2, beta: float = 0.1, window_a: int = 5,
            tw_table: TwTable | None = None) -> SimilarityReport:
    """Full pipeline: fit sigma, threshold, invert spikes, average.

    Steps: (1) estimate sigma_hat by ``method`` ("bema" or "gb") and
    compute gamma_plus^2 and the spike count; (2) invert each retained
    gamma_i to theta_hat_i; (3) evaluate phi_hat_i; (4) form the weighted
    average. A spike count of zero yields an empty spike list and a null
    metric rather than an error.
    """
    gamma = spectrum.gamma
    q = spectrum.q
    notes: list[str] = []

    if method == "bema":
        fit = bema(gamma, q, alpha=alpha)
    elif method == "gb":
        fit = gb_fit(gamma, q, a=window_a)
    else:
        raise InputError(f"unknown fit method {method!r}; expected 'bema' or 'gb'")
    fit = MpFit(sigma_hat=fit.sigma_hat, q=fit.q, method=fit.method,
                alpha=fit.alpha, beta=float(beta), window_a=fit.window_a,
                diagnostics=fit.diagnostics)

    t = tw_quantile(1.0 - beta, tw_table)
    gp2 = threshold(fit.sigma_hat, q, spectrum.n, t)
    s_hat = count_spikes(gamma, gp2)
    gamma_plus = math.sqrt(gp2)
    edge = fit.sigma_hat * (1.0 + math.sqrt(q))

    spikes: list[Spike] = []
    for i in range(s_hat):
        g_i = float(gamma[i])
        if g_i <= edge:
            # possible when t < 0 pulls gamma_plus below the bulk edge
            notes.append(
                f"spike {i + 1} (gamma={g_i:.6g}) lies inside the bulk edge "
                f"{edge:.6g}; excluded from the similarity computation")
            continue
        th = theta_hat(g_i, q, fit.sigma_hat)
        ph = phi(th, q, fit.sigma_hat)
        ph_closed = phi_closed_form(th / fit.sigma_hat, q)
        if abs(ph - ph_closed) > 1e-6:
            notes.append(
                f"spike {i + 1}: numeric phi={ph:.9f} differs from rescaled "
                f"closed form {ph_closed:.9f} by more than 1e-6")
        spikes.append(Spike(index=i + 1, gamma=g_i, theta_hat=th,
                            phi_hat=ph, phi_closed_rescaled=ph_closed))

    metric = None
    if spikes:
        metric = ave_w([s.phi_hat for s in spikes],
                       [s.gamma for s in spikes], gamma_plus)

    for note in notes:
        warnings.warn(note, stacklevel=2)

    thr = ThresholdResult(gamma_plus_sq=gp2, t=t, s_hat=s_hat,
                          sigma_hat=fit.sigma_hat, q=q, n=spectrum.n,
                          beta=float(beta))
    return SimilarityReport(spikes=tuple(spikes), ave_w=metric, threshold=thr,
                            fit=fit, source=spectrum.source, warnings=tuple(notes))
