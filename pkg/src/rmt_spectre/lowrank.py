"""Rank-s truncation of a singular spectrum and parameter accounting.

The retained factors are stored as (U_s * diag(gamma_1..s), V_s^T), i.e.
the singular values are absorbed into the left factor; the convention is
recorded in the export sidecar so downstream consumers can reassemble
the product unambiguously.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .matrices import SingularSpectrum

FACTOR_CONVENTION = "gamma-in-left"


@dataclass(frozen=True)
class LowRankFactors:
    left: np.ndarray        # n x s, gamma-scaled left singular vectors
    right: np.ndarray       # s x m
    s: int
    recon_error: float      # Frobenius distance to the full reconstruction

    def product(self) -> np.ndarray:
        return self.left @ self.right


@dataclass(frozen=True)
class ParamSavings:
    original: int           # n * m
    factored: int           # s * (n + m)
    saves: bool             # strict: factored < original


def truncate(spectrum: SingularSpectrum, s: int) -> LowRankFactors:
    """Keep the top s singular triplets; s = 0 gives the zero matrix.

    The reconstruction error is measured directly as the Frobenius norm
    of (full reconstruction - truncated product), not inferred from the
    dropped singular values.
    """
    m = spectrum.m
    if not 0 <= s <= m:
        raise InputError(f"rank s must lie in [0, {m}], got {s}")
    left = spectrum.left_vectors[:, :s] * spectrum.gamma[:s]
    right = spectrum.right_vectors[:, :s].T
    full = spectrum.reconstruct()
    recon_error = float(np.linalg.norm(full - left @ right))
    return LowRankFactors(left=left, right=right, s=int(s), recon_error=recon_error)


def param_savings(n: int, m: int, s: int) -> ParamSavings:
    """Exact integer parameter counts for storing W vs its rank-s factors."""
    if n < 1 or m < 1:
        raise InputError(f"invalid dims {n}x{m}")
    if not 0 <= s <= m:
        raise InputError(f"rank s must lie in [0, {m}], got {s}")
    original = n * m
    factored = s * (n + m)
    return ParamSavings(original=original, factored=factored,
                        saves=factored < original)


def export_factors(factors: LowRankFactors, out_dir: str | Path, stem: str,
                   source_path: str = "", extra: dict | None = None) -> dict:
    """Write left/right factors as NPY plus a JSON sidecar.

    Returns the sidecar payload (convention, rank, shapes, provenance,
    parameter accounting).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    left_path = out_dir / f"{stem}_left.npy"
    right_path = out_dir / f"{stem}_right.npy"
    np.save(left_path, factors.left)
    np.save(right_path, factors.right)

    n = factors.left.shape[0]
    m = factors.right.shape[1]
    savings = param_savings(n, m, factors.s)
    sidecar = {
        "convention": FACTOR_CONVENTION,
        "s": factors.s,
        "n": n,
        "m": m,
        "left": left_path.name,
        "right": right_path.name,
        "recon_error": factors.recon_error,
        "source": source_path,
        "params_original": savings.original,
        "params_factored": savings.factored,
        "saves_parameters": savings.saves,
    }
    if extra:
        sidecar.update(extra)
    (out_dir / f"{stem}_factors.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return sidecar
