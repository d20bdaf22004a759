"""Synthetic measurement lots with planted indicator columns.

Non-planted columns are noise drawn identically for every object. In a
planted column the negatives follow the same noise while the positives sit
in a narrow band ``shift`` standard deviations away. All values are rounded
to ``decimals`` places, mimicking instrument resolution; a positive band
whose spread is small next to that resolution collapses onto a handful of
repeated readings, which is what lets one histogram bin capture it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import HistClassError

NOISE_KINDS = ("normal", "laplace")


class Planted(NamedTuple):
    col: int
    shift: float = 8.0
    spread: float = 2e-4


@dataclass(frozen=True)
class GeneratorSpec:
    m: int = 10_000
    n: int = 50
    positive_rate: float = 0.05
    planted: Tuple[Planted, ...] = ()
    noise: str = "normal"
    discrete_cols: int = 0
    discrete_levels: int = 5
    decimals: Optional[int] = 3
    seed: Optional[int] = 0

    def __post_init__(self):
        object.__setattr__(self, "planted", tuple(Planted(*p) for p in self.planted))
        if self.m < 2 or self.n < 1:
            raise HistClassError("need m >= 2 and n >= 1")
        if not 0 < self.positive_rate < 1:
            raise HistClassError("positive_rate must lie in (0, 1)")
        cols = [p.col for p in self.planted]
        if len(set(cols)) != len(cols):
            raise HistClassError("planted columns must be distinct")
        if any(not 0 <= c < self.n for c in cols):
            raise HistClassError(f"planted columns must lie in 0..{self.n - 1}")
        if any(p.spread < 0 for p in self.planted):
            raise HistClassError("spread must be >= 0")
        if self.noise not in NOISE_KINDS:
            raise HistClassError(f"unknown noise {self.noise!r}; choose from {NOISE_KINDS}")
        if not 0 <= self.discrete_cols <= self.n - len(cols):
            raise HistClassError("discrete_cols exceeds the number of unplanted columns")
        if self.discrete_levels < 2:
            raise HistClassError("discrete_levels must be >= 2")

    @property
    def planted_cols(self) -> List[int]:
        return sorted(p.col for p in self.planted)

    @property
    def discrete_col_indices(self) -> List[int]:
        """The last ``discrete_cols`` unplanted columns hold integer readings."""
        free = [j for j in range(self.n) if j not in set(self.planted_cols)]
        return free[len(free) - self.discrete_cols:] if self.discrete_cols else []


def planted_spec(m=10_000, n=50, positive_rate=0.05, n_planted=4, shift=8.0,
                 spread=2e-4, seed=0, **kw) -> GeneratorSpec:
    """Spec with *n_planted* separator columns spaced evenly across the matrix."""
    cols = np.linspace(0, n - 1, n_planted + 2)[1:-1].round().astype(int) if n_planted else []
    return GeneratorSpec(m=m, n=n, positive_rate=positive_rate, seed=seed,
                         planted=tuple(Planted(int(c), shift, spread) for c in cols), **kw)


def _noise(rng, kind, size):
    if kind == "normal":
        return rng.standard_normal(size)
    # unit-variance two-sided exponential
    return rng.laplace(0.0, 1.0 / np.sqrt(2.0), size)


def generate(spec: GeneratorSpec):
    """Return ``(X, labels, planted_cols)`` for *spec*; bit-identical per seed."""
    rng = np.random.default_rng(spec.seed)
    labels = (rng.random(spec.m) < spec.positive_rate).astype(np.int8)
    X = _noise(rng, spec.noise, (spec.m, spec.n))
    pos = labels == 1
    for p in spec.planted:
        X[pos, p.col] = p.shift + p.spread * rng.standard_normal(int(pos.sum()))
    if spec.decimals is not None:
        X = np.round(X, spec.decimals)
    for j in spec.discrete_col_indices:
        X[:, j] = rng.integers(0, spec.discrete_levels, spec.m)
    return X, labels, spec.planted_cols
