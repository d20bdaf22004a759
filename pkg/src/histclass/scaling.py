"""Column-wise standardization of a data matrix.

Every downstream step works on ``(x - mean) / std`` per column, i.e. on how
many standard deviations an entry sits away from its column mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import HistClassError

FULL = "full"
TRAIN = "train"
TRAIN_N15 = "train-n15"
STATS_MODES = (FULL, TRAIN, TRAIN_N15)

# divisor offset subtracted from the sample count when estimating variance
_DDOF = {FULL: 0.0, TRAIN: 1.0, TRAIN_N15: 1.5}


@dataclass(frozen=True)
class ColumnStats:
    mean: np.ndarray
    std: np.ndarray
    source: str = FULL

    def __post_init__(self):
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise HistClassError("mean and std must be 1-D arrays of equal length")
        if np.any(self.std < 0):
            raise HistClassError("std must be nonnegative")
        if self.source not in STATS_MODES:
            raise HistClassError(f"unknown stats source {self.source!r}")

    @property
    def n_cols(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class ScaledMatrix:
    """A scaled matrix together with the stats that produced it."""

    values: np.ndarray
    stats: ColumnStats
    quantize_digits: Optional[int] = None

    @property
    def shape(self):
        return self.values.shape

    def column(self, j: int, rows=None) -> np.ndarray:
        if rows is None:
            return self.values[:, j]
        return self.values[rows, j]


def as_matrix(X) -> np.ndarray:
    """Validate and convert *X* to a finite 2-D float array."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise HistClassError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise HistClassError("matrix contains NaN or infinite entries")
    return arr


def compute_column_stats(X, rows: Optional[Sequence[int]] = None, mode: str = FULL) -> ColumnStats:
    """Per-column mean and standard deviation.

    ``mode="full"`` uses the population formula (divisor k) over the selected
    rows. ``"train"`` uses the unbiased sample variance (divisor k-1) and
    ``"train-n15"`` the normal-theory corrected divisor k-1.5; the square
    root is taken after dividing in both cases.
    """
    return _column_stats(as_matrix(X), rows, mode)


def _column_stats(arr: np.ndarray, rows, mode: str) -> ColumnStats:
    if mode not in STATS_MODES:
        raise HistClassError(f"unknown stats mode {mode!r}; choose from {STATS_MODES}")
    if rows is not None:
        rows = np.asarray(rows, dtype=int)
        if rows.size == 0:
            raise HistClassError("empty stats sample")
        arr = arr[rows]
    k = arr.shape[0]
    divisor = k - _DDOF[mode]
    if divisor <= 0:
        raise HistClassError(f"stats mode {mode!r} needs more than {_DDOF[mode]:g} rows, got {k}")
    mean = arr.mean(axis=0)
    dev = arr - mean
    var = np.einsum("ij,ij->j", dev, dev) / divisor
    # the mean of a constant column may carry rounding noise; force std to exactly 0
    var[np.ptp(arr, axis=0) == 0] = 0.0
    return ColumnStats(mean=mean, std=np.sqrt(var), source=mode)


def round_significant(values, digits: int) -> np.ndarray:
    """Round to *digits* significant decimal digits, halves away from zero."""
    if digits < 1:
        raise HistClassError("quantize_digits must be >= 1")
    x = np.asarray(values, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0
    mag = np.floor(np.log10(np.abs(x[nz])))
    scale = 10.0 ** (digits - 1 - mag)
    scaled = np.abs(x[nz]) * scale
    # snap float noise such as 0.1235*1000 = 123.49999999999999 before rounding
    scaled = np.round(scaled, 9)
    out[nz] = np.sign(x[nz]) * np.floor(scaled + 0.5) / scale
    return out


def scale(X, stats: Optional[ColumnStats] = None, quantize_digits: Optional[int] = None) -> ScaledMatrix:
    """Standardize every column of *X* using *stats* (full-matrix stats if omitted).

    Columns with zero standard deviation map to exactly 0.
    """
    arr = as_matrix(X)
    if stats is None:
        stats = _column_stats(arr, None, FULL)
    if stats.n_cols != arr.shape[1]:
        raise HistClassError(f"stats cover {stats.n_cols} columns, matrix has {arr.shape[1]}")
    dead = stats.std == 0
    out = arr - stats.mean
    out /= np.where(dead, 1.0, stats.std)
    if dead.any():
        out[:, dead] = 0.0
    if quantize_digits is not None:
        out = round_significant(out, quantize_digits)
    return ScaledMatrix(values=out, stats=stats, quantize_digits=quantize_digits)

