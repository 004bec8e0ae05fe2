"""Tracy-Widom order-1 quantiles for the edge-fluctuation correction.

The embedded table (see ``scripts/generate_tw_table.py`` for how it is
produced and cross-validated) is interpolated monotonically; levels
outside the tabulated range are refused rather than extrapolated. A
higher-precision table can be swapped in from a two-column CSV.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _tw_table
from .errors import InputError


@dataclass(frozen=True)
class TwTable:
    """A (levels, values) quantile grid; both strictly increasing."""

    levels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.levels.ndim != 1 or self.levels.shape != self.values.shape:
            raise InputError("levels and values must be 1-D arrays of equal length")
        if self.levels.size < 2:
            raise InputError("a quantile table needs at least 2 knots")
        if np.any(self.levels <= 0) or np.any(self.levels >= 1):
            raise InputError("levels must lie strictly inside (0, 1)")
        if np.any(np.diff(self.levels) <= 0) or np.any(np.diff(self.values) <= 0):
            raise InputError("levels and values must be strictly increasing")

    @cached_property
    def _interpolator(self) -> PchipInterpolator:
        # PCHIP preserves the strict monotonicity of the knots
        return PchipInterpolator(self.levels, self.values)

    def quantile(self, level: float) -> float:
        if not 0.0 < level < 1.0:
            raise InputError(f"level must lie in (0, 1), got {level}")
        if level < self.levels[0] or level > self.levels[-1]:
            raise InputError(
                f"level {level} outside the tabulated range "
                f"[{self.levels[0]}, {self.levels[-1]}]; refusing to extrapolate")
        return float(self._interpolator(level))


@lru_cache(maxsize=1)
def default_table() -> TwTable:
    """The embedded order-1 table."""
    return TwTable(levels=np.asarray(_tw_table.LEVELS),
                   values=np.asarray(_tw_table.VALUES))


def load_table(path: str | Path) -> TwTable:
    """Load a table from CSV with one ``level,value`` pair per line."""
    levels, values = [], []
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                levels.append(float(row[0]))
                values.append(float(row[1]))
    except (OSError, ValueError, IndexError) as exc:
        raise InputError(f"failed to read TW table from {path}: {exc}") from exc
    return TwTable(levels=np.asarray(levels), values=np.asarray(values))


def tw_quantile(level: float, table: TwTable | None = None) -> float:
    """Quantile of the Tracy-Widom order-1 law at ``level`` = 1 - beta."""
    return (table or default_table()).quantile(level)
