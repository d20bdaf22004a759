"""Turning indicator values into predictions and choosing the cutoff."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import HistClassError
from .metrics import kappa_from_counts

MEASURES = ("kappa", "accuracy")
NAIVE_MODES = ("verbatim", "midpoint")


def predict(scores, c: float) -> np.ndarray:
    """1 where ``score >= c``, else 0; order follows *scores*."""
    return (np.asarray(scores) >= c).astype(np.int8)


def naive_cutoff(scores, truth, mode: str = "verbatim") -> float:
    """Cutoff from the class-average indicator values ``Av1`` and ``Av0``.

    ``"verbatim"`` returns ``(Av1 - Av0) / 2``; ``"midpoint"`` returns
    ``(Av1 + Av0) / 2``.
    """
    scores = np.asarray(scores, dtype=float)
    truth = np.asarray(truth)
    if scores.shape != truth.shape:
        raise HistClassError("scores and truth differ in length")
    pos, neg = scores[truth == 1], scores[truth == 0]
    if pos.size == 0 or neg.size == 0:
        raise HistClassError("naive cutoff needs both classes in the domain")
    av1, av0 = pos.mean(), neg.mean()
    if av1 < av0:
        warnings.warn(
            f"positives score lower on average than negatives ({av1:.3g} < {av0:.3g}); "
            "training sets may not be characteristic",
            stacklevel=2,
        )
    if mode == "verbatim":
        return float((av1 - av0) / 2)
    if mode == "midpoint":
        return float((av1 + av0) / 2)
    raise HistClassError(f"unknown naive cutoff mode {mode!r}")


def sweep_counts(scores, truth, cutoffs):
    """Confusion counts ``(tp, fp, tn, fn)`` arrays, one entry per cutoff."""
    scores = np.asarray(scores, dtype=float)
    truth = np.asarray(truth)
    pos = np.sort(scores[truth == 1])
    neg = np.sort(scores[truth == 0])
    cutoffs = np.asarray(cutoffs, dtype=float)
    # how many of each class score below c, i.e. are predicted negative
    fn = np.searchsorted(pos, cutoffs, side="left")
    tn = np.searchsorted(neg, cutoffs, side="left")
    return pos.size - fn, neg.size - tn, tn, fn


@dataclass(frozen=True)
class CutoffResult:
    c_opt: float
    q_opt: float
    measure: str
    cutoffs: np.ndarray
    accuracies: np.ndarray
    kappas: np.ndarray
    predictions: np.ndarray

    @property
    def q_values(self) -> np.ndarray:
        return self.kappas if self.measure == "kappa" else self.accuracies

    @property
    def sweep(self):
        """``(c, Q)`` pairs over the scanned cutoffs."""
        return list(zip(self.cutoffs.tolist(), self.q_values.tolist()))

    def sweep_rows(self):
        return list(zip(self.cutoffs.tolist(), self.accuracies.tolist(), self.kappas.tolist()))


def integer_cutoffs(scores) -> np.ndarray:
    scores = np.asarray(scores)
    if scores.size == 0:
        raise HistClassError("nothing to classify")
    lo, hi = int(np.floor(scores.min())), int(np.floor(scores.max()))
    return np.arange(lo, hi + 1, dtype=float)


def optimize_cutoff(scores, truth, measure: str = "kappa",
                    grid: Optional[Sequence[float]] = None) -> CutoffResult:
    """Scan cutoffs and keep the one maximizing *measure*.

    Without *grid* every integer from the minimum to the maximum score is
    tried. Ties go to the smallest cutoff.
    """
    if measure not in MEASURES:
        raise HistClassError(f"unknown measure {measure!r}; choose from {MEASURES}")
    scores = np.asarray(scores)
    truth = np.asarray(truth).astype(np.int8)
    if scores.size == 0:
        raise HistClassError("nothing to classify")
    if scores.shape != truth.shape:
        raise HistClassError("scores and truth differ in length")
    cutoffs = integer_cutoffs(scores) if grid is None else np.sort(np.asarray(grid, dtype=float))
    if cutoffs.size == 0:
        raise HistClassError("empty cutoff grid")
    tp, fp, tn, fn = sweep_counts(scores, truth, cutoffs)
    r = scores.size
    accs = (tp + tn) / r
    kappas = np.array([kappa_from_counts(*q)[0] for q in zip(tp.tolist(), fp.tolist(), tn.tolist(), fn.tolist())])
    q = kappas if measure == "kappa" else accs
    best = int(np.argmax(q))
    c_opt = float(cutoffs[best])
    return CutoffResult(
        c_opt=c_opt,
        q_opt=float(q[best]),
        measure=measure,
        cutoffs=cutoffs,
        accuracies=accs,
        kappas=kappas,
        predictions=predict(scores, c_opt),
    )


KAPPA_BUCKETS = ("1.0", "[0.9,1.0)", "[0.8,0.9)", "[0.7,0.8)", "<0.7")


def kappa_bucket(k: float) -> str:
    if k >= 1.0:
        return "1.0"
    if k >= 0.9:
        return "[0.9,1.0)"
    if k >= 0.8:
        return "[0.8,0.9)"
    if k >= 0.7:
        return "[0.7,0.8)"
    return "<0.7"


@dataclass(frozen=True)
class BatchResult:
    start: int
    stop: int
    c_opt: float
    kappa: float
    accuracy: float
    result: CutoffResult


@dataclass(frozen=True)
class BatchReport:
    """Per-batch cutoff optimization over consecutive slices of the domain.

    Each batch keeps its own cutoff; no lot-wide figure is derived from the
    mixed cutoffs.
    """

    batch_size: int
    batches: List[BatchResult]

    @property
    def kappas(self) -> np.ndarray:
        return np.array([b.kappa for b in self.batches])

    @property
    def max_kappa(self) -> float:
        return float(self.kappas.max())

    @property
    def min_kappa(self) -> float:
        return float(self.kappas.min())

    @property
    def census(self) -> Dict[str, int]:
        out = dict.fromkeys(KAPPA_BUCKETS, 0)
        for k in self.kappas:
            out[kappa_bucket(float(k))] += 1
        return out

    def format(self) -> str:
        lines = [f"batch size {self.batch_size}, {len(self.batches)} batches",
                 f"{'batch':>5} {'rows':>13} {'cutoff':>8} {'kappa':>7} {'acc%':>6}"]
        for i, b in enumerate(self.batches):
            lines.append(f"{i:>5} {f'{b.start}-{b.stop - 1}':>13} {b.c_opt:>8g} {b.kappa:>7.3f} {100 * b.accuracy:>6.1f}")
        lines.append(f"Max Kappa {self.max_kappa:.3f}")
        lines.append(f"Min Kappa {self.min_kappa:.3f}")
        for name, count in self.census.items():
            lines.append(f"#Batches with kappa {name}: {count}")
        return "\n".join(lines)


def batchwise_optimize(scores, truth, batch_size: int, measure: str = "kappa",
                       grid: Optional[Sequence[float]] = None) -> BatchReport:
    """Run :func:`optimize_cutoff` separately on consecutive batches of *batch_size* rows."""
    if batch_size < 1:
        raise HistClassError("batch_size must be >= 1")
    scores = np.asarray(scores)
    truth = np.asarray(truth)
    if scores.size == 0:
        raise HistClassError("nothing to classify")
    batches = []
    for start in range(0, scores.size, batch_size):
        stop = min(start + batch_size, scores.size)
        res = optimize_cutoff(scores[start:stop], truth[start:stop], measure, grid)
        i = int(np.searchsorted(res.cutoffs, res.c_opt))
        batches.append(BatchResult(start, stop, res.c_opt, float(res.kappas[i]), float(res.accuracies[i]), res))
    return BatchReport(batch_size, batches)
