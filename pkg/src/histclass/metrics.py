"""Agreement measures between two bit vectors and confusion-table statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HistClassError


def _bits(v, w):
    v = np.asarray(v).astype(np.int64).ravel()
    w = np.asarray(w).astype(np.int64).ravel()
    if v.size != w.size:
        raise HistClassError(f"length mismatch: {v.size} vs {w.size}")
    if v.size == 0:
        raise HistClassError("empty bit vectors")
    return v, w


def accuracy(v, w) -> float:
    """Fraction of positions where the two bit vectors coincide."""
    v, w = _bits(v, w)
    return float(np.mean(v == w))


def kappa_from_counts(tp: int, fp: int, tn: int, fn: int) -> tuple[float, bool]:
    """Cohen's kappa of truth vs. prediction given confusion counts.

    Returns ``(kappa, degenerate)``. When the chance agreement equals 1
    (both raters constant and equal) the ratio is 0/0; kappa is reported
    as 0 and ``degenerate`` is True.
    """
    r = tp + fp + tn + fn
    if r == 0:
        raise HistClassError("empty bit vectors")
    truth_pos, truth_neg = tp + fn, tn + fp
    pred_pos, pred_neg = tp + fp, tn + fn
    # integer numerators keep p_e == 1 detection exact
    pe_num = truth_neg * pred_neg + truth_pos * pred_pos
    if pe_num == r * r:
        return 0.0, True
    acc = (tp + tn) / r
    pe = pe_num / (r * r)
    return (acc - pe) / (1.0 - pe), False


def kappa(v, w) -> float:
    """Cohen's kappa of two binary raters (0 in the degenerate constant case)."""
    v, w = _bits(v, w)
    tp = int(np.sum((v == 1) & (w == 1)))
    tn = int(np.sum((v == 0) & (w == 0)))
    fp = int(np.sum((v == 0) & (w == 1)))
    fn = int(np.sum((v == 1) & (w == 0)))
    return kappa_from_counts(tp, fp, tn, fn)[0]


def _ratio(a, b):
    if b == 0:
        return math.inf if a > 0 else math.nan
    return a / b


@dataclass(frozen=True)
class ConfusionStats:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def tp_rate(self):
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def tn_rate(self):
        return _ratio(self.tn, self.tn + self.fp)

    @property
    def fp_over_pos(self):
        return _ratio(self.fp, self.tp + self.fn)

    @property
    def fn_over_neg(self):
        return _ratio(self.fn, self.tn + self.fp)

    @property
    def tp_fp_ratio(self):
        return _ratio(self.tp, self.fp)

    @property
    def tn_fn_ratio(self):
        return _ratio(self.tn, self.fn)

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def kappa(self) -> float:
        return kappa_from_counts(self.tp, self.fp, self.tn, self.fn)[0]

    @property
    def kappa_degenerate(self) -> bool:
        return kappa_from_counts(self.tp, self.fp, self.tn, self.fn)[1]

    def table_rows(self):
        """``(label, text)`` pairs in the layout of the classic result table."""
        def pct(x):
            return _fmt(100 * x if math.isfinite(x) else x)

        return [
            ("TP", str(self.tp)),
            ("FP", str(self.fp)),
            ("TN", str(self.tn)),
            ("FN", str(self.fn)),
            ("TP/(TP+FN)%", pct(self.tp_rate)),
            ("TN/(TN+FP)%", pct(self.tn_rate)),
            ("FP/(TP+FN)%", pct(self.fp_over_pos)),
            ("FN/(TN+FP)%", pct(self.fn_over_neg)),
            ("TP/FP", _fmt(self.tp_fp_ratio)),
            ("TN/FN", _fmt(self.tn_fn_ratio)),
            ("Accuracy%", _fmt(100 * self.accuracy)),
            ("Kappa", f"{self.kappa:.3f}"),
        ]

    def format_table(self) -> str:
        rows = self.table_rows()
        width = max(len(k) for k, _ in rows)
        vwidth = max(len(v) for _, v in rows)
        lines = []
        for i, (k, v) in enumerate(rows):
            if i in (4, 8, 10):
                lines.append("-" * (width + vwidth + 3))
            lines.append(f"{k:<{width}} | {v:>{vwidth}}")
        return "\n".join(lines)


def _fmt(x) -> str:
    if math.isnan(x):
        return "n/a"
    if math.isinf(x):
        return "inf"
    return f"{x:.1f}"


def confusion(truth, pred) -> ConfusionStats:
    """Tally truth vs. prediction bits."""
    v = np.asarray(truth).astype(np.int64).ravel()
    w = np.asarray(pred).astype(np.int64).ravel()
    if v.size != w.size:
        raise HistClassError(f"length mismatch: {v.size} vs {w.size}")
    return ConfusionStats(
        tp=int(np.sum((v == 1) & (w == 1))),
        fp=int(np.sum((v == 0) & (w == 1))),
        tn=int(np.sum((v == 0) & (w == 0))),
        fn=int(np.sum((v == 1) & (w == 0))),
    )
