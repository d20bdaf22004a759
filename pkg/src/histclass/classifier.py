"""End-to-end classification run.

scale -> draw training sets -> pick Cics -> score unseen rows -> choose
cutoff -> predict -> compare with the true labels.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from . import cics as cic_mod
from .cics import CicList, TrainingSplit
from .cutoff import (
    BatchReport,
    CutoffResult,
    batchwise_optimize,
    naive_cutoff,
    optimize_cutoff,
    predict,
)
from .errors import HistClassError, NoCicsError
from .indicators import indicator_scores
from .metrics import ConfusionStats, confusion, kappa_from_counts
from .scaling import FULL, ScaledMatrix, as_matrix, compute_column_stats, scale

Size = Union[int, float]

CIC_MODES = ("thresholds", "auto", "manual")
CUTOFF_MODES = ("optimize", "naive", "naive-midpoint")


@dataclass(frozen=True)
class RunConfig:
    """Parameters of a classification run.

    Training sizes given as ``int`` are absolute counts; ``float`` values are
    fractions of the class population in ``(0, 1]``, floored with a minimum
    of 1. In manual mode either ``cols`` or a ready-made ``cics`` list
    (e.g. imported from an earlier lot) must be supplied.
    """

    cic_mode: str = "thresholds"
    b_pos: float = 0.3
    b_neg: float = 0.01
    t: Optional[int] = None
    cols: Optional[Tuple[int, ...]] = None
    cics: Optional[CicList] = None
    nb: int = 1000
    train_pos: Size = 0.2
    train_neg: Size = 0.05
    u_pos: Optional[Size] = None
    measure: str = "kappa"
    cutoff: str = "optimize"
    seed: Optional[int] = 0
    stats: str = FULL
    quantize_digits: Optional[int] = None
    batch_size: Optional[int] = None

    def __post_init__(self):
        if self.cic_mode not in CIC_MODES:
            raise HistClassError(f"unknown cic_mode {self.cic_mode!r}; choose from {CIC_MODES}")
        if self.cic_mode == "manual" and not (self.cols or self.cics):
            raise HistClassError("manual mode needs cols or cics")
        if self.cic_mode != "manual" and (self.cols or self.cics):
            raise HistClassError(f"cols/cics only apply to manual mode, not {self.cic_mode!r}")
        if self.cic_mode != "auto" and self.t is not None:
            raise HistClassError("t only applies to auto mode")
        if self.cols is not None:
            object.__setattr__(self, "cols", tuple(int(c) for c in self.cols))
        if self.cutoff not in CUTOFF_MODES:
            raise HistClassError(f"unknown cutoff mode {self.cutoff!r}; choose from {CUTOFF_MODES}")
        if self.nb < 3:
            raise HistClassError("need at least 3 bins")
        for name in ("train_pos", "train_neg", "u_pos"):
            _check_size(name, getattr(self, name))

    def describe(self) -> Dict[str, str]:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, CicList):
                v = f"{len(v)} imported"
            out[f.name] = "-" if v is None else str(v)
        return out


def _check_size(name, value):
    if value is None:
        return
    if isinstance(value, bool):
        raise HistClassError(f"{name}: expected a count or fraction, got {value!r}")
    if isinstance(value, (int, np.integer)):
        if value < 1:
            raise HistClassError(f"{name}: absolute size must be >= 1")
    elif not 0 < value <= 1:
        raise HistClassError(f"{name}: fraction must lie in (0, 1], got {value}")


def resolve_size(value: Size, population: int) -> int:
    """Absolute training-set size for a count or fraction of *population*."""
    _check_size("size", value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    # tolerance guards against 0.29 * 100 = 28.999999999999996
    return max(1, math.floor(value * population + 1e-9))


def split_training(labels, t_pos: Size, t_neg: Size, u_pos: Optional[Size] = None,
                   seed: Optional[int] = None) -> TrainingSplit:
    """Draw training sets uniformly without replacement from each class."""
    labels = np.asarray(labels).astype(np.int8)
    pos = np.flatnonzero(labels == 1)
    neg = np.flatnonzero(labels == 0)
    n_tp = resolve_size(t_pos, pos.size)
    n_tn = resolve_size(t_neg, neg.size)
    n_u = 0 if u_pos is None else resolve_size(u_pos, pos.size)
    if n_tp + n_u > pos.size or n_tn > neg.size:
        raise HistClassError(
            f"infeasible split: requested {n_tp} (+{n_u} reference) positives and {n_tn} negatives, "
            f"population has {pos.size} positives and {neg.size} negatives"
        )
    rng = np.random.default_rng(seed)
    drawn = rng.choice(pos, size=n_tp + n_u, replace=False)
    tneg = rng.choice(neg, size=n_tn, replace=False)
    return TrainingSplit(labels=labels, t_pos=drawn[:n_tp], t_neg=tneg, u_pos=drawn[n_tp:])


def scale_for_run(arr: np.ndarray, split: TrainingSplit, config: RunConfig) -> ScaledMatrix:
    """Scale with full-matrix stats, or with stats of the training rows only."""
    if config.stats == FULL:
        stats = compute_column_stats(arr)
    else:
        stats = compute_column_stats(arr, rows=split.train, mode=config.stats)
    return scale(arr, stats, config.quantize_digits)


def select_cics(S: ScaledMatrix, split: TrainingSplit, config: RunConfig) -> CicList:
    if config.cic_mode == "thresholds":
        found = cic_mod.find_cics(S, split, config.b_pos, config.b_neg, config.nb)
    elif config.cic_mode == "auto":
        found = cic_mod.auto_cics(S, split, config.nb, config.t)
    elif config.cics is not None:
        found = config.cics
    else:
        found = cic_mod.manual_cics(S, split, config.nb, config.cols)
    if len(found) == 0:
        raise NoCicsError()
    return found


def choose_cutoff(scores, truth, config: RunConfig, grid=None) -> CutoffResult:
    if config.cutoff == "optimize":
        return optimize_cutoff(scores, truth, config.measure, grid)
    mode = "verbatim" if config.cutoff == "naive" else "midpoint"
    c = naive_cutoff(scores, truth, mode)
    pred = predict(scores, c)
    stats = confusion(truth, pred)
    k = kappa_from_counts(stats.tp, stats.fp, stats.tn, stats.fn)[0]
    q = k if config.measure == "kappa" else stats.accuracy
    return CutoffResult(
        c_opt=c, q_opt=q, measure=config.measure, cutoffs=np.array([c]),
        accuracies=np.array([stats.accuracy]), kappas=np.array([k]), predictions=pred,
    )


@dataclass(frozen=True)
class PredictionReport:
    config: RunConfig
    split: TrainingSplit
    cics: CicList
    domain: np.ndarray
    scores: np.ndarray
    cutoff: CutoffResult
    confusion: ConfusionStats
    batch: Optional[BatchReport] = None
    column_names: Optional[Sequence[str]] = None
    indicator_name: str = "S_C"
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def truth(self) -> np.ndarray:
        return self.split.labels[self.domain]

    @property
    def predictions(self) -> np.ndarray:
        return self.cutoff.predictions

    def col_label(self, j: int) -> str:
        if self.column_names is not None:
            return f"{j}:{self.column_names[j]}"
        return str(j)

    def to_kv(self) -> Dict[str, str]:
        """Flat deterministic summary (timings excluded)."""
        out = {f"config.{k}": v for k, v in self.config.describe().items()}
        out["train.pos"] = str(self.split.t_pos.size)
        out["train.neg"] = str(self.split.t_neg.size)
        out["train.ref_pos"] = str(self.split.u_pos.size)
        out["domain.size"] = str(self.domain.size)
        out["cics.count"] = str(len(self.cics))
        out["cics"] = ";".join(f"{c.col}[{c.lo!r},{c.hi!r})" for c in self.cics)
        out["indicator"] = self.indicator_name
        out["cutoff"] = repr(self.cutoff.c_opt)
        out["cutoff.measure"] = self.cutoff.measure
        out["cutoff.q_opt"] = repr(self.cutoff.q_opt)
        for k, v in self.confusion.table_rows():
            out[k] = v
        out["kappa.exact"] = repr(self.confusion.kappa)
        out["accuracy.exact"] = repr(self.confusion.accuracy)
        if self.batch is not None:
            out["batch.size"] = str(self.batch.batch_size)
            out["batch.count"] = str(len(self.batch.batches))
            out["batch.max_kappa"] = f"{self.batch.max_kappa:.3f}"
            out["batch.min_kappa"] = f"{self.batch.min_kappa:.3f}"
            for name, count in self.batch.census.items():
                out[f"batch.census.{name}"] = str(count)
        return out

    def format(self) -> str:
        lines = [
            f"training: {self.split.t_pos.size} positive, {self.split.t_neg.size} negative"
            + (f", {self.split.u_pos.size} reference positive" if self.split.u_pos.size else ""),
            f"classified objects: {self.domain.size}",
            f"Cics ({len(self.cics)}): " + ", ".join(self.col_label(c.col) for c in self.cics),
            f"cutoff: {self.cutoff.c_opt:g} ({self.config.cutoff}, {self.cutoff.measure} = {self.cutoff.q_opt:.3f})",
            "",
            self.confusion.format_table(),
        ]
        if self.batch is not None:
            lines += ["", self.batch.format()]
        return "\n".join(lines)


def _finish(report_kwargs, scores, truth, config, grid, timings):
    t0 = time.perf_counter()
    result = choose_cutoff(scores, truth, config, grid)
    batch = None
    if config.batch_size is not None:
        batch = batchwise_optimize(scores, truth, config.batch_size, config.measure, grid)
    timings["cutoff"] = time.perf_counter() - t0
    return PredictionReport(
        cutoff=result, confusion=confusion(truth, result.predictions), batch=batch,
        timings=timings, config=config, scores=scores, **report_kwargs,
    )


def classify(X, labels, config: RunConfig = RunConfig(), column_names=None) -> PredictionReport:
    """Run the full pipeline and evaluate predictions on the unseen rows."""
    labels = np.asarray(labels).astype(np.int8)
    arr = as_matrix(X)
    if labels.shape != (arr.shape[0],):
        raise HistClassError(f"{labels.size} labels for {arr.shape[0]} rows")
    if labels.min() == labels.max():
        raise HistClassError("both classes must be present")
    if config.u_pos is not None:
        raise HistClassError("u_pos is only used by union_classify")
    timings = {}
    t0 = time.perf_counter()
    split = split_training(labels, config.train_pos, config.train_neg, seed=config.seed)
    S = scale_for_run(arr, split, config)
    timings["scale+split"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    found = select_cics(S, split, config)
    timings["cics"] = time.perf_counter() - t0

    domain = split.domain
    if domain.size == 0:
        raise HistClassError("nothing to classify: every object is a training object")
    assert np.intersect1d(domain, split.train).size == 0
    t0 = time.perf_counter()
    scores = indicator_scores(S, found, domain)
    timings["scores"] = time.perf_counter() - t0
    return _finish(
        dict(split=split, cics=found, domain=domain, column_names=column_names),
        scores, labels[domain], config, None, timings,
    )
