"""Candidate indicator columns (Cics).

A Cic is a column ``j`` together with the most-frequent bin ``[lo, hi)`` of
the positive training values in that column. Three ways of picking them are
provided: frequency thresholds (:func:`find_cics`), the top of the ``n_diff``
ranking (:func:`auto_cics`) and an explicit column list (:func:`manual_cics`).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import HistClassError
from .histograms import BinBoundaries, equal_width_boundaries
from .scaling import ScaledMatrix


def _index_array(idx) -> np.ndarray:
    arr = np.unique(np.asarray(list(idx) if idx is not None else [], dtype=np.int64))
    return arr


@dataclass(frozen=True)
class TrainingSplit:
    """Positive/negative training rows and an optional second positive set.

    ``u_pos`` is only used by the union classifier; it must be disjoint from
    ``t_pos``.
    """

    labels: np.ndarray
    t_pos: np.ndarray
    t_neg: np.ndarray
    u_pos: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        labels = np.asarray(self.labels).astype(np.int8)
        if labels.ndim != 1 or not np.isin(labels, (0, 1)).all():
            raise HistClassError("labels must be a 1-D 0/1 vector")
        object.__setattr__(self, "labels", labels)
        for name in ("t_pos", "t_neg", "u_pos"):
            object.__setattr__(self, name, _index_array(getattr(self, name)))
        m = labels.size
        for name in ("t_pos", "t_neg", "u_pos"):
            idx = getattr(self, name)
            if idx.size and (idx.min() < 0 or idx.max() >= m):
                raise HistClassError(f"{name} holds indices outside 0..{m - 1}")
        if np.any(labels[self.t_pos] != 1) or np.any(labels[self.u_pos] != 1):
            raise HistClassError("positive training sets may only hold positive objects")
        if np.any(labels[self.t_neg] != 0):
            raise HistClassError("negative training set may only hold negative objects")
        if np.intersect1d(self.t_pos, self.u_pos).size:
            raise HistClassError("t_pos and u_pos must be disjoint")

    @property
    def m(self) -> int:
        return self.labels.size

    @property
    def train(self) -> np.ndarray:
        """Rows of both training sets (not including ``u_pos``)."""
        return np.union1d(self.t_pos, self.t_neg)

    @property
    def domain(self) -> np.ndarray:
        """Ascending indices of all rows outside every training set."""
        mask = np.ones(self.m, dtype=bool)
        mask[self.t_pos] = False
        mask[self.t_neg] = False
        mask[self.u_pos] = False
        return np.flatnonzero(mask)

    def require_training(self):
        if self.t_pos.size == 0 or self.t_neg.size == 0:
            raise HistClassError("empty training split")


class Cic(NamedTuple):
    col: int
    lo: float
    hi: float


class CicList:
    """Ordered, column-unique sequence of :class:`Cic` entries."""

    def __init__(self, entries: Iterable = ()):
        items = tuple(Cic(int(c), float(lo), float(hi)) for c, lo, hi in entries)
        seen = set()
        for c in items:
            if not c.lo < c.hi:
                raise HistClassError(f"Cic for column {c.col} has lo >= hi")
            if c.col in seen:
                raise HistClassError(f"duplicate Cic column {c.col}")
            seen.add(c.col)
        self._items = items

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __eq__(self, other):
        return isinstance(other, CicList) and self._items == other._items

    def __repr__(self):
        return f"CicList({list(self._items)!r})"

    @property
    def cols(self) -> np.ndarray:
        return np.array([c.col for c in self._items], dtype=np.int64)

    @property
    def lows(self) -> np.ndarray:
        return np.array([c.lo for c in self._items], dtype=float)

    @property
    def highs(self) -> np.ndarray:
        return np.array([c.hi for c in self._items], dtype=float)

    def sorted_by_col(self) -> "CicList":
        return CicList(sorted(self._items))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["col", "lo", "hi"])
            for c in self._items:
                w.writerow([c.col, repr(c.lo), repr(c.hi)])

    @classmethod
    def from_csv(cls, path) -> "CicList":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        try:
            return cls((int(r["col"]), float(r["lo"]), float(r["hi"])) for r in rows)
        except (KeyError, ValueError) as exc:
            raise HistClassError(f"{path}: malformed Cic file ({exc})") from None


class PeakBin(NamedTuple):
    """Per-column summary of the positive-training histogram peak."""

    col: int
    boundaries: BinBoundaries
    k: int
    pos_counts: np.ndarray
    neg_counts: np.ndarray

    @property
    def lo(self) -> float:
        return self.boundaries.lower(self.k)

    @property
    def hi(self) -> float:
        return self.boundaries.upper(self.k)

    @property
    def n_pos(self) -> int:
        return int(self.pos_counts[self.k])

    @property
    def n_neg(self) -> int:
        return int(self.neg_counts[self.k])

    @property
    def h_pos_max(self) -> float:
        return self.n_pos / self.pos_counts.sum()

    @property
    def h_neg_at_peak(self) -> float:
        return self.n_neg / self.neg_counts.sum()

    def as_cic(self) -> Cic:
        return Cic(self.col, self.lo, self.hi)


def peak_bin(S: ScaledMatrix, j: int, split: TrainingSplit, nb: int) -> PeakBin:
    """Histogram column *j* of the training rows on boundaries built from the positives."""
    x_pos = S.values[split.t_pos, j]
    x_neg = S.values[split.t_neg, j]
    b = equal_width_boundaries(x_pos, nb)
    pos_counts = np.bincount(b.bin_of(x_pos), minlength=nb)
    neg_counts = np.bincount(b.bin_of(x_neg), minlength=nb)
    # argmax returns the first maximum, i.e. the smallest tied index
    k = int(np.argmax(pos_counts))
    return PeakBin(j, b, k, pos_counts, neg_counts)


def _peaks(S: ScaledMatrix, split: TrainingSplit, nb: int, cols=None) -> List[PeakBin]:
    split.require_training()
    if S.values.shape[0] != split.m:
        raise HistClassError(f"matrix has {S.values.shape[0]} rows, labels have {split.m}")
    if cols is None:
        cols = range(S.values.shape[1])
    return [peak_bin(S, j, split, nb) for j in cols]


def find_cics(S: ScaledMatrix, split: TrainingSplit, b_pos: float, b_neg: float = 0.01,
              nb: int = 1000) -> CicList:
    """Columns whose positive peak frequency exceeds *b_pos* while the
    negative frequency in that same bin stays below *b_neg*."""
    return CicList(
        p.as_cic() for p in _peaks(S, split, nb)
        if p.h_pos_max > b_pos and p.h_neg_at_peak < b_neg
    )


class RelevanceRow(NamedTuple):
    col: int
    n_pos: int
    n_neg: int
    n_diff: int
    lo: float
    hi: float


class RelevanceTable:
    """Columns ordered by ``n_diff`` descending, ties by ascending column."""

    def __init__(self, rows: Sequence[RelevanceRow]):
        self.rows = sorted(rows, key=lambda r: (-r.n_diff, r.col))

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def top(self, t: int) -> CicList:
        return CicList((r.col, r.lo, r.hi) for r in self.rows[:t])

    def to_csv(self, path, names: Optional[Sequence[str]] = None):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rank", "col", "n_diff", "n_pos", "n_neg"] + (["name"] if names else []))
            for rank, r in enumerate(self.rows, 1):
                extra = [names[r.col]] if names else []
                w.writerow([rank, r.col, r.n_diff, r.n_pos, r.n_neg] + extra)


def relevance_table(S: ScaledMatrix, split: TrainingSplit, nb: int = 1000) -> RelevanceTable:
    """Count positive and negative training objects inside each column's positive peak bin."""
    return RelevanceTable([
        RelevanceRow(p.col, p.n_pos, p.n_neg, p.n_pos - p.n_neg, p.lo, p.hi)
        for p in _peaks(S, split, nb)
    ])


def default_top_count(n: int) -> int:
    """``ceil(n / 10)``, the number of top-ranked columns used when none is given."""
    return -(-n // 10)


def auto_cics(S: ScaledMatrix, split: TrainingSplit, nb: int = 1000, t: Optional[int] = None) -> CicList:
    """The *t* highest-``n_diff`` columns, in rank order."""
    n = S.values.shape[1]
    if t is None:
        t = default_top_count(n)
    if not 1 <= t <= n:
        raise HistClassError(f"t must lie in 1..{n}, got {t}")
    return relevance_table(S, split, nb).top(t)


def manual_cics(S: ScaledMatrix, split: TrainingSplit, nb: int, cols: Sequence[int]) -> CicList:
    """Peak-bin triples for the requested columns, no frequency test applied."""
    cols = [int(c) for c in cols]
    n = S.values.shape[1]
    if not cols:
        raise HistClassError("no columns given")
    bad = [c for c in cols if not 0 <= c < n]
    if bad:
        raise HistClassError(f"columns out of range 0..{n - 1}: {bad}")
    if len(set(cols)) != len(cols):
        raise HistClassError(f"duplicate columns in {cols}")
    return CicList(p.as_cic() for p in _peaks(S, split, nb, cols))
