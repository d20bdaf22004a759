"""Histogram-distribution binary classification.

Scale a data matrix, find columns whose positive-training histogram peak
separates positives from negatives (Cics), count how many Cics each unseen
object activates and threshold that count at an optimized cutoff.
"""

from .cics import (
    Cic,
    CicList,
    RelevanceTable,
    TrainingSplit,
    auto_cics,
    default_top_count,
    find_cics,
    manual_cics,
    relevance_table,
)
from .classifier import PredictionReport, RunConfig, classify, split_training
from .cutoff import batchwise_optimize, naive_cutoff, optimize_cutoff, predict
from .errors import HistClassError, NoCicsError
from .histograms import BinBoundaries, Histogram, equal_width_boundaries, histogram
from .indicators import activity_patterns, indicator_scores
from .metrics import ConfusionStats, accuracy, confusion, kappa
from .scaling import ColumnStats, ScaledMatrix, compute_column_stats, scale
from .union import pattern_similarity, union_classify

__version__ = "0.1.0"

__all__ = [
    "BinBoundaries", "Cic", "CicList", "ColumnStats", "ConfusionStats", "HistClassError",
    "Histogram", "NoCicsError", "PredictionReport", "RelevanceTable", "RunConfig",
    "ScaledMatrix", "TrainingSplit", "accuracy", "activity_patterns", "auto_cics",
    "batchwise_optimize", "classify", "compute_column_stats", "confusion",
    "default_top_count", "equal_width_boundaries", "find_cics", "histogram",
    "indicator_scores", "kappa", "manual_cics", "naive_cutoff", "optimize_cutoff",
    "pattern_similarity", "predict", "relevance_table", "scale", "split_training",
    "union_classify",
]
