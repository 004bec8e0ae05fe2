"""Spiked-model generator and Monte Carlo comparison harness.

Generates W = sum_i theta_i u_i v_i^T + W_noise with orthonormal planted
frames and i.i.d. noise of entry variance sigma^2 / n, the normalization
under which the noise singular values asymptotically fill the MP support
[sigma (1 - sqrt(q)), sigma (1 + sqrt(q))]. Everything is deterministic
under an explicit 64-bit seed; per-trial substreams are derived by
hashing (seed, trial index) so trials can run in any order (or in
parallel) and reduce to identical results.

The harness compares, for each planted strength above the detection
threshold sigma q^{1/4}, the observed outlier location and singular-vector
overlap against their almost-sure limits rho and phi. The overlap is
measured on the short (m-dimensional) side, which is the direction whose
limit the similarity formula describes; for square matrices the two sides
agree.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
import scipy.sparse.linalg

from .errors import InputError
from .matrices import MatrixSource, OrientedMatrix
from .spikes import phi, rho

_PARTIAL_SVD_MIN_DIM = 1500


@dataclass(frozen=True)
class SpikedSpec:
    """Dimensions, noise scale, planted strengths, and RNG seed."""

    n: int
    m: int
    sigma: float = 1.0
    thetas: tuple[float, ...] = ()
    seed: int = 0
    noise: Literal["gaussian", "uniform"] = "gaussian"

    def __post_init__(self):
        if self.n < self.m or self.m < 2:
            raise InputError(f"need n >= m >= 2, got {self.n}x{self.m}")
        if self.sigma <= 0:
            raise InputError(f"sigma must be positive, got {self.sigma}")
        ths = tuple(float(t) for t in self.thetas)
        if any(t < 0 for t in ths):
            raise InputError("planted strengths must be non-negative")
        if any(a < b for a, b in zip(ths, ths[1:])):
            raise InputError("planted strengths must be descending")
        if len(ths) >= self.m:
            raise InputError(f"number of spikes must be < m={self.m}")
        object.__setattr__(self, "thetas", ths)

    @property
    def q(self) -> float:
        return self.m / self.n

    @property
    def s(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class PlantedTruth:
    left: np.ndarray        # n x s orthonormal
    right: np.ndarray       # m x s orthonormal
    thetas: tuple[float, ...]


def trial_seed(seed: int, trial: int) -> int:
    """Deterministic 64-bit substream seed for one trial."""
    state = np.random.SeedSequence((seed, trial)).generate_state(2)
    return int(state[0]) | (int(state[1]) << 32)


def _orthonormal_frame(rng: np.random.Generator, dim: int, s: int) -> np.ndarray:
    g = rng.normal(size=(dim, s))
    qmat, r = np.linalg.qr(g)
    # fix signs so the frame is a deterministic function of g
    return qmat * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def gen_spiked(spec: SpikedSpec) -> tuple[OrientedMatrix, PlantedTruth]:
    """Draw one matrix from the spiked model along with its planted truth."""
    rng = np.random.default_rng(spec.seed)
    scale = spec.sigma / np.sqrt(spec.n)
    if spec.noise == "gaussian":
        noise = rng.normal(0.0, scale, size=(spec.n, spec.m))
    elif spec.noise == "uniform":
        half = scale * np.sqrt(3.0)   # variance sigma^2 / n
        noise = rng.uniform(-half, half, size=(spec.n, spec.m))
    else:
        raise InputError(f"unknown noise kind {spec.noise!r}")

    s = spec.s
    if s:
        u = _orthonormal_frame(rng, spec.n, s)
        v = _orthonormal_frame(rng, spec.m, s)
        w = (u * np.asarray(spec.thetas)) @ v.T + noise
    else:
        u = np.zeros((spec.n, 0))
        v = np.zeros((spec.m, 0))
        w = noise

    source = MatrixSource(path=f"<spiked n={spec.n} m={spec.m} seed={spec.seed}>")
    matrix = OrientedMatrix(data=w, transposed=False, source=source)
    return matrix, PlantedTruth(left=u, right=v, thetas=spec.thetas)


def _top_triplets(w: np.ndarray, k: int, rng: np.random.Generator
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Top-k singular values (descending) and short-side singular vectors."""
    n, m = w.shape
    if min(n, m) <= _PARTIAL_SVD_MIN_DIM or k > 8:
        _, gam, vt = np.linalg.svd(w, full_matrices=False)
        return gam[:k], vt[:k].T
    v0 = rng.normal(size=min(n, m))   # deterministic ARPACK start vector
    _, gam, vt = scipy.sparse.linalg.svds(w, k=k, v0=v0, tol=0, maxiter=10_000)
    order = np.argsort(gam)[::-1]
    return gam[order], vt[order].T


@dataclass(frozen=True)
class ThetaComparison:
    """Monte Carlo summary for one planted strength."""

    theta: float
    above_threshold: bool
    mean_gamma: float
    std_gamma: float
    mean_overlap: float
    std_overlap: float
    rho_theory: float       # bulk edge when below threshold
    phi_theory: float       # 0 when below threshold
    dev_gamma: float
    dev_overlap: float


@dataclass(frozen=True)
class McResult:
    spec: SpikedSpec
    trials: int
    rows: tuple[ThetaComparison, ...]
    trial_seeds: tuple[int, ...]
    gamma1: tuple[float, ...]          # largest observed value per trial
    per_trial_gammas: np.ndarray       # trials x max(s, 1)
    per_trial_overlaps: np.ndarray     # trials x s


def mc_verify(spec: SpikedSpec, trials: int) -> McResult:
    """Run seeded trials and compare observations with the limit theory."""
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    s = spec.s
    k = max(s, 1)
    seeds = tuple(trial_seed(spec.seed, i) for i in range(trials))

    gammas = np.empty((trials, k))
    overlaps = np.empty((trials, s))
    for i, seed_i in enumerate(seeds):
        matrix, truth = gen_spiked(replace(spec, seed=seed_i))
        rng = np.random.default_rng(trial_seed(seed_i, 1 << 32))
        gam, v_obs = _top_triplets(matrix.data, k, rng)
        gammas[i] = gam
        for j in range(s):
            overlaps[i, j] = float(v_obs[:, j] @ truth.right[:, j]) ** 2

    q = spec.q
    det = spec.sigma * q ** 0.25
    edge = spec.sigma * (1.0 + np.sqrt(q))
    rows = []
    for j, th in enumerate(spec.thetas):
        above = th > det
        if above:
            rho_th = rho(th, q, spec.sigma)
            phi_th = phi(th, q, spec.sigma)
        else:
            rho_th, phi_th = edge, 0.0
        mean_g = float(np.mean(gammas[:, j]))
        mean_o = float(np.mean(overlaps[:, j]))
        rows.append(ThetaComparison(
            theta=th, above_threshold=above,
            mean_gamma=mean_g, std_gamma=float(np.std(gammas[:, j])),
            mean_overlap=mean_o, std_overlap=float(np.std(overlaps[:, j])),
            rho_theory=rho_th, phi_theory=phi_th,
            dev_gamma=abs(mean_g - rho_th), dev_overlap=abs(mean_o - phi_th)))

    return McResult(spec=spec, trials=trials, rows=tuple(rows),
                    trial_seeds=seeds, gamma1=tuple(float(g) for g in gammas[:, 0]),
                    per_trial_gammas=gammas, per_trial_overlaps=overlaps)
