"""Histograms with two unbounded outer bins.

A boundary vector ``a_1 < ... < a_{nb-1}`` splits the real line into ``nb``
half-open bins ``[a_k, a_{k+1})`` with ``a_0 = -inf`` and ``a_nb = +inf``.
Bin 0 catches everything below ``a_1`` and bin ``nb-1`` everything at or
above ``a_{nb-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HistClassError


def top_epsilon(x_max: float) -> float:
    """Offset added to the sample maximum so it stays inside the last inner bin."""
    return max(1e-9, 1e-9 * abs(x_max))


@dataclass(frozen=True)
class BinBoundaries:
    """Inner boundaries of an ``nb``-bin partition.

    ``origin`` and ``width`` are set for equal-width boundaries and enable the
    O(1) index formula in :meth:`bin_of`; otherwise lookup falls back to a
    binary search.
    """

    inner: np.ndarray
    origin: Optional[float] = None
    width: Optional[float] = None

    def __post_init__(self):
        inner = np.asarray(self.inner, dtype=float)
        object.__setattr__(self, "inner", inner)
        if inner.ndim != 1 or inner.size < 2:
            raise HistClassError("need at least 3 bins")
        if not np.all(np.isfinite(inner)):
            raise HistClassError("inner boundaries must be finite")
        if np.any(np.diff(inner) <= 0):
            raise HistClassError("boundaries must be strictly increasing")

    @property
    def nb(self) -> int:
        return self.inner.size + 1

    def lower(self, k: int) -> float:
        """Lower edge of bin *k* (``-inf`` for bin 0)."""
        return -np.inf if k == 0 else float(self.inner[k - 1])

    def upper(self, k: int) -> float:
        """Upper edge of bin *k* (``+inf`` for the last bin)."""
        return np.inf if k == self.nb - 1 else float(self.inner[k])

    def bin_of(self, values) -> np.ndarray:
        """Index of the bin containing each value."""
        x = np.asarray(values, dtype=float)
        if self.width is None:
            return self._search(x)
        return self._closed_form(x)

    def _search(self, x):
        # number of boundaries <= x is exactly the bin index
        return np.searchsorted(self.inner, x, side="right")

    def _closed_form(self, x):
        a = self.inner
        nb = self.nb
        out = np.where(x < a[0], 0, nb - 1)
        inside = (x >= a[0]) & (x < a[-1])
        xi = x[inside]
        k = 1 + np.floor((xi - self.origin) / self.width).astype(np.int64)
        k = np.clip(k, 1, nb - 2)
        # the division can be an ulp off at a boundary; settle against the stored edges
        while True:
            step = (xi >= a[k]).astype(np.int64) - (xi < a[k - 1])
            if not step.any():
                break
            k += step
        out[inside] = k
        return out


def equal_width_boundaries(x, nb: int) -> BinBoundaries:
    """Boundaries whose ``nb - 2`` inner bins span ``[min(x), max(x) + eps)``.

    Interior edges sit at ``min(x) + k*w`` with ``w = (max - min)/(nb - 2)``
    and the top edge at ``max(x) + eps``. When the range is below
    ``(nb - 2) * eps`` (a constant sample in particular) the width becomes
    ``eps``, which still keeps every value in an inner bin.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise HistClassError("empty sample")
    if nb < 3:
        raise HistClassError("need at least 3 bins")
    lo = float(x.min())
    hi = float(x.max())
    eps = top_epsilon(hi)
    w = (hi - lo) / (nb - 2)
    if w < eps:
        # zero or sub-resolution range: eps-wide bins still cover the whole sample
        w = eps
        inner = lo + w * np.arange(nb - 1)
    else:
        inner = lo + w * np.arange(nb - 1)
        inner[-1] = hi + eps
    return BinBoundaries(inner=inner, origin=lo, width=w)


@dataclass(frozen=True)
class Histogram:
    boundaries: BinBoundaries
    freqs: np.ndarray
    sample_count: int

    @property
    def nb(self) -> int:
        return self.boundaries.nb

    def peak_bin(self) -> int:
        """Smallest index among the bins of maximal frequency."""
        return int(np.argmax(self.freqs))


def histogram(x, boundaries: BinBoundaries) -> Histogram:
    """Relative frequency of *x* in each bin of *boundaries*."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise HistClassError("empty sample")
    counts = np.bincount(boundaries.bin_of(x), minlength=boundaries.nb)
    return Histogram(boundaries=boundaries, freqs=counts / x.size, sample_count=int(x.size))
