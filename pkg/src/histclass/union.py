"""Activity-pattern similarity against a reference set of positive objects.

Instead of counting active Cics, each object's activity bit pattern ``a_i``
is compared with the patterns of a positive reference set ``U``::

    q(i, j) = <a_i, a_j> / H(a_i)

``q_max`` and ``q_min`` are the max and min of ``q(i, j)`` over ``j`` in ``U``.
Objects with an all-zero pattern get 0 for both.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .classifier import RunConfig, PredictionReport, _finish, scale_for_run, select_cics, split_training
from .errors import HistClassError
from .indicators import activity_patterns
from .scaling import as_matrix

DEFAULT_GRID = np.linspace(0.0, 1.0, 101)

# rows of the domain processed per block, bounds the |domain| x |U| buffer
_BLOCK = 4096


@dataclass(frozen=True)
class PatternSimilarity:
    q_max: np.ndarray
    q_min: np.ndarray

    def indicator(self, which: str = "max") -> np.ndarray:
        if which == "max":
            return self.q_max
        if which == "min":
            return self.q_min
        raise HistClassError(f"unknown indicator {which!r}; choose 'max' or 'min'")


def pattern_similarity(domain_patterns, reference_patterns) -> PatternSimilarity:
    """Similarity of every domain pattern to a reference set.

    Both arguments are boolean matrices with one column per Cic: the first
    holds the patterns of the objects to score, the second those of the
    positive reference objects.
    """
    A = np.asarray(domain_patterns, dtype=bool)
    U = np.asarray(reference_patterns, dtype=bool)
    if U.ndim != 2 or U.shape[0] == 0:
        raise HistClassError("empty reference set")
    if A.ndim != 2 or A.shape[1] != U.shape[1]:
        raise HistClassError("pattern widths differ")
    Uf = U.astype(np.float64).T
    q_max = np.zeros(A.shape[0])
    q_min = np.zeros(A.shape[0])
    for start in range(0, A.shape[0], _BLOCK):
        block = A[start:start + _BLOCK].astype(np.float64)
        weight = block.sum(axis=1)
        live = weight > 0
        if not live.any():
            continue
        q = (block[live] @ Uf) / weight[live, None]
        idx = np.arange(start, start + block.shape[0])[live]
        q_max[idx] = q.max(axis=1)
        q_min[idx] = q.min(axis=1)
    return PatternSimilarity(q_max=q_max, q_min=q_min)


def union_classify(X, labels, config: RunConfig, indicator: str = "max",
                   grid: Optional[Sequence[float]] = None, column_names=None) -> PredictionReport:
    """Classify with pattern similarity to a reference positive set as the indicator.

    ``config.u_pos`` sets the size of the reference set, drawn from the
    positives disjoint from the positive training set. The cutoff is chosen
    over *grid* (101 points on [0, 1] by default).
    """
    labels = np.asarray(labels).astype(np.int8)
    arr = as_matrix(X)
    if labels.shape != (arr.shape[0],):
        raise HistClassError(f"{labels.size} labels for {arr.shape[0]} rows")
    if config.u_pos is None:
        raise HistClassError("union classification needs u_pos")
    if indicator not in ("max", "min"):
        raise HistClassError(f"unknown indicator {indicator!r}; choose 'max' or 'min'")
    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or grid.max() > 1:
        raise HistClassError("cutoff grid must be a nonempty subset of [0, 1]")
    timings = {}
    t0 = time.perf_counter()
    split = split_training(labels, config.train_pos, config.train_neg, config.u_pos, config.seed)
    S = scale_for_run(arr, split, config)
    timings["scale+split"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    found = select_cics(S, split, config)
    timings["cics"] = time.perf_counter() - t0

    domain = split.domain
    if domain.size == 0:
        raise HistClassError("nothing to classify: every object is a training object")
    t0 = time.perf_counter()
    sim = pattern_similarity(activity_patterns(S, found, domain), activity_patterns(S, found, split.u_pos))
    scores = sim.indicator(indicator)
    timings["scores"] = time.perf_counter() - t0
    return _finish(
        dict(split=split, cics=found, domain=domain, column_names=column_names,
             indicator_name=f"Q_{indicator}"),
        scores, labels[domain], config, grid, timings,
    )
