"""Indicator values: how many Cics an object activates.

A Cic ``(j, lo, hi)`` is active for row ``i`` when ``lo <= x[i, j] < hi``.
"""

from __future__ import annotations

import numpy as np

from .cics import CicList
from .errors import HistClassError
from .scaling import ScaledMatrix


def activity_patterns(S: ScaledMatrix, cics: CicList, domain) -> np.ndarray:
    """Boolean matrix of shape ``(len(domain), len(cics))``; entry ``[r, s]``
    tells whether Cic ``s`` is active for row ``domain[r]``."""
    domain = np.asarray(domain, dtype=np.int64)
    cols = cics.cols
    if cols.size and (cols.min() < 0 or cols.max() >= S.values.shape[1]):
        raise HistClassError("Cic column outside the matrix")
    if cols.size == 0:
        return np.zeros((domain.size, 0), dtype=bool)
    vals = S.values[np.ix_(domain, cols)]
    return (vals >= cics.lows) & (vals < cics.highs)


def indicator_scores(S: ScaledMatrix, cics: CicList, domain) -> np.ndarray:
    """Number of active Cics for every row in *domain* (same order)."""
    return activity_patterns(S, cics, domain).sum(axis=1).astype(np.int64)


def sats_rows(domain, labels, scores):
    """``(object_id, true_label, score)`` rows, true positives first.

    Within each class rows keep ascending object order.
    """
    domain = np.asarray(domain)
    truth = np.asarray(labels)[domain]
    order = np.concatenate([np.flatnonzero(truth == 1), np.flatnonzero(truth == 0)])
    return [(int(domain[r]), int(truth[r]), scores[r]) for r in order]
