"""CSV ingestion, column selection and report / plot-data files."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, replace
from importlib import resources
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .cics import TrainingSplit, peak_bin
from .errors import HistClassError
from .histograms import histogram
from .indicators import sats_rows


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    labels: np.ndarray
    columns: List[str]
    label_source: str
    step_map: Optional[Dict[str, str]] = None

    def __post_init__(self):
        if self.labels.shape != (self.X.shape[0],):
            raise HistClassError("label count differs from row count")
        if len(self.columns) != self.X.shape[1]:
            raise HistClassError("column names differ from column count")

    @property
    def n_pos(self) -> int:
        return int(self.labels.sum())


def _label_bits(raw: Sequence[str], pass_values=None, positive_values=None) -> np.ndarray:
    if (pass_values is None) == (positive_values is None):
        raise HistClassError("give exactly one of pass_values / positive_values")
    if positive_values is not None:
        pos = {str(v).strip() for v in positive_values}
        return np.array([v.strip() in pos for v in raw], dtype=np.int8)
    ok = {str(v).strip() for v in pass_values}
    return np.array([v.strip() not in ok for v in raw], dtype=np.int8)


def load_csv(path, label_column: str, pass_values: Optional[Iterable[str]] = ("0",),
             positive_values: Optional[Iterable[str]] = None,
             ignore_columns: Sequence[str] = ()) -> Dataset:
    """Read a headed CSV; every column except the label (and ignored ones) must be numeric.

    By default a row is positive when its label is anything other than a
    pass value. Passing *positive_values* (with ``pass_values=None``) flips
    this to: positive when the label is one of those values.
    """
    if positive_values is not None:
        pass_values = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise HistClassError(f"{path}: empty file") from None
        if label_column not in header:
            raise HistClassError(f"{path}: label column {label_column!r} not found in header")
        missing = [c for c in ignore_columns if c not in header]
        if missing:
            raise HistClassError(f"{path}: ignored columns not in header: {missing}")
        li = header.index(label_column)
        keep = [j for j, h in enumerate(header) if j != li and h not in set(ignore_columns)]
        if not keep:
            raise HistClassError(f"{path}: no feature columns")
        rows, raw_labels = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(header):
                raise HistClassError(f"{path}:{lineno}: expected {len(header)} fields, got {len(rec)}")
            vals = []
            for j in keep:
                cell = rec[j].strip()
                try:
                    x = float(cell)
                except ValueError:
                    x = math.nan
                if not math.isfinite(x):
                    raise HistClassError(
                        f"{path}: row {lineno}, column {header[j]!r}: cannot parse {cell!r} as a finite number")
                vals.append(x)
            rows.append(vals)
            raw_labels.append(rec[li])
    if not rows:
        raise HistClassError(f"{path}: no data rows")
    return Dataset(
        X=np.array(rows, dtype=float),
        labels=_label_bits(raw_labels, pass_values, positive_values),
        columns=[header[j] for j in keep],
        label_source=label_column,
    )


def load_iris(positive: str) -> Dataset:
    """The bundled iris data, one species against the other two."""
    names = ("setosa", "versicolor", "virginica")
    if positive not in names:
        raise HistClassError(f"unknown iris type {positive!r}; choose from {names}")
    ref = resources.files("histclass") / "data" / "iris.csv"
    with resources.as_file(ref) as p:
        return load_csv(p, "species", positive_values=[positive])


def load_step_map(path) -> Dict[str, str]:
    """Two-column ``column,step`` CSV assigning each feature to one measurement step."""
    out: Dict[str, str] = {}
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            try:
                col, step = rec["column"].strip(), rec["step"].strip()
            except (KeyError, AttributeError):
                raise HistClassError(f"{path}: expected header 'column,step'") from None
            if col in out and out[col] != step:
                raise HistClassError(f"{path}: column {col!r} assigned to steps {out[col]!r} and {step!r}")
            out[col] = step
    return out


def with_steps(ds: Dataset, step_map: Dict[str, str]) -> Dataset:
    unknown = sorted(set(step_map) - set(ds.columns))
    if unknown:
        raise HistClassError(f"step map names unknown columns: {unknown[:5]}")
    return replace(ds, step_map=dict(step_map))


def resolve_columns(ds: Dataset, selection: Sequence) -> List[int]:
    """Map names or 0-based indices to column indices, keeping the given order."""
    out = []
    for s in selection:
        if isinstance(s, (int, np.integer)) or (isinstance(s, str) and s.strip().lstrip("-").isdigit()):
            j = int(s)
            if not 0 <= j < len(ds.columns):
                raise HistClassError(f"column index {j} out of range 0..{len(ds.columns) - 1}")
        elif s in ds.columns:
            j = ds.columns.index(s)
        else:
            raise HistClassError(f"unknown column {s!r}")
        out.append(j)
    return out


def filter_columns(ds: Dataset, columns: Optional[Sequence] = None,
                   steps: Optional[Sequence[str]] = None) -> Dataset:
    """Restrict the matrix to the given columns and/or measurement steps."""
    if not columns and not steps:
        raise HistClassError("empty column selection")
    picked = set()
    if columns:
        picked.update(resolve_columns(ds, columns))
    if steps:
        if ds.step_map is None:
            raise HistClassError("step selection needs a step map")
        known = set(ds.step_map.values())
        bad = [s for s in steps if s not in known]
        if bad:
            raise HistClassError(f"unknown steps {bad}; known: {sorted(known)}")
        picked.update(j for j, c in enumerate(ds.columns) if ds.step_map.get(c) in set(steps))
    idx = sorted(picked)
    if not idx:
        raise HistClassError("selection matches no columns")
    step_map = None
    if ds.step_map is not None:
        step_map = {ds.columns[j]: ds.step_map[ds.columns[j]] for j in idx if ds.columns[j] in ds.step_map}
    return Dataset(ds.X[:, idx], ds.labels, [ds.columns[j] for j in idx], ds.label_source, step_map)


def write_csv(path, X, labels, columns=None, label_column="label"):
    """Write a matrix plus label column in the format :func:`load_csv` reads."""
    X = np.asarray(X, dtype=float)
    if columns is None:
        columns = [f"f{j}" for j in range(X.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(columns) + [label_column])
        for row, lab in zip(X.tolist(), np.asarray(labels).tolist()):
            w.writerow([repr(v) for v in row] + [int(lab)])


def write_kv(path, kv: Dict[str, str]):
    with open(path, "w") as fh:
        for k, v in kv.items():
            fh.write(f"{k}={v}\n")


def read_kv(path) -> Dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            k, _, v = line.rstrip("\n").partition("=")
            out[k] = v
    return out


def _fmt_score(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_sats(path, domain, labels, scores):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["object_id", "true_label", "score"])
        for oid, lab, sc in sats_rows(domain, labels, scores):
            w.writerow([oid, lab, _fmt_score(sc)])


def write_cutoffs(path, result):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cutoff", "accuracy", "kappa"])
        for c, a, k in result.sweep_rows():
            w.writerow([_fmt_score(c), repr(a), repr(k)])


def histpanel_rows(S, split: TrainingSplit, j: int, nb: int):
    """Per-bin frequencies of the positive, negative and combined training values.

    Bins are those built from the positive training values of column *j*.
    """
    pk = peak_bin(S, j, split, nb)
    b = pk.boundaries
    h_pos = pk.pos_counts / pk.pos_counts.sum()
    h_neg = pk.neg_counts / pk.neg_counts.sum()
    h_all = histogram(S.values[split.train, j], b).freqs
    diff = h_pos - h_neg
    return [(b.lower(k), b.upper(k), h_pos[k], h_neg[k], h_all[k], diff[k], abs(diff[k])) for k in range(nb)]


def write_histpanel(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_lo", "bin_hi", "h_pos", "h_neg", "h_all", "diff", "absdiff"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r])


def emit_plots(outdir, report, S=None):
    """Write ``sats.csv``, ``cutoffs.csv`` and, given the scaled matrix, one
    ``histpanel_<col>.csv`` per Cic column into *outdir*."""
    os.makedirs(outdir, exist_ok=True)
    write_sats(os.path.join(outdir, "sats.csv"), report.domain, report.split.labels, report.scores)
    write_cutoffs(os.path.join(outdir, "cutoffs.csv"), report.cutoff)
    written = ["sats.csv", "cutoffs.csv"]
    if S is not None:
        for c in report.cics:
            name = f"histpanel_{c.col}.csv"
            write_histpanel(os.path.join(outdir, name), histpanel_rows(S, report.split, c.col, report.config.nb))
            written.append(name)
    return written
