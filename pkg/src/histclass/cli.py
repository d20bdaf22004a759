"""Command line interface: ``histclass <subcommand> ...``."""

from __future__ import annotations

import argparse
import statistics
import sys
from typing import List, Optional

import numpy as np

from . import dataio
from .cics import CicList, default_top_count, relevance_table
from .classifier import RunConfig, classify, scale_for_run, split_training
from .datagen import Planted, GeneratorSpec, generate, planted_spec
from .errors import HistClassError
from .scaling import STATS_MODES
from .union import DEFAULT_GRID, union_classify

IRIS_TYPES = ("setosa", "versicolor", "virginica")


def parse_size(text: str):
    """``"20%"`` and ``"0.2"`` are fractions, ``"3"`` is an absolute count."""
    text = text.strip()
    try:
        if text.endswith("%"):
            return float(text[:-1]) / 100.0
        if "." in text or "e" in text.lower():
            return float(text)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a size: {text!r}") from None


def _csv_list(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _add_data_args(p):
    p.add_argument("data", help="CSV file with a header row")
    p.add_argument("--label-col", default="label", help="name of the label column (default: label)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pass-values", type=_csv_list, default=["0"],
                   help="comma-separated label values meaning 'pass'; anything else is positive (default: 0)")
    g.add_argument("--positive-values", type=_csv_list,
                   help="comma-separated label values counted as positive (inverse of --pass-values)")
    p.add_argument("--ignore-cols", type=_csv_list, default=[], help="non-feature columns to drop")
    p.add_argument("--step-map", help="CSV with header column,step assigning features to measurement steps")
    p.add_argument("--steps", type=_csv_list, help="keep only features of these steps (needs --step-map)")
    p.add_argument("--features", type=_csv_list, help="keep only these feature names or 0-based indices")


def _add_run_args(p, cic_default="thresholds"):
    p.add_argument("--cic-mode", choices=("thresholds", "auto", "manual"), default=cic_default)
    p.add_argument("--bpos", type=float, default=0.3, help="positive peak frequency bound (default: 0.3)")
    p.add_argument("--bneg", type=float, default=0.01, help="negative frequency bound (default: 0.01)")
    p.add_argument("--nb", type=int, default=1000, help="number of histogram bins (default: 1000)")
    p.add_argument("--t", type=int, help="top-ranked columns used in auto mode (default: ceil(n/10))")
    p.add_argument("--cols", type=_csv_list, help="manual mode: feature names or 0-based indices")
    p.add_argument("--import-cics", help="manual mode: reuse Cics from a col,lo,hi CSV")
    p.add_argument("--export-cics", help="write the chosen Cics to a col,lo,hi CSV")
    p.add_argument("--train-pos", type=parse_size, default=0.2, help="positive training size, e.g. 20%% or 2")
    p.add_argument("--train-neg", type=parse_size, default=0.05, help="negative training size, e.g. 5%% or 1")
    p.add_argument("--measure", choices=("kappa", "accuracy"), default="kappa")
    p.add_argument("--cutoff", choices=("optimize", "naive", "naive-midpoint"), default="optimize")
    p.add_argument("--batch-size", type=int, help="also optimize the cutoff per batch of this many objects")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quantize-digits", type=int, help="round scaled values to this many significant digits")
    p.add_argument("--profile", choices=("default", "wafer"), default="default",
                   help="wafer: 3 significant digits after scaling unless --quantize-digits is given")
    p.add_argument("--stats", choices=STATS_MODES, default="full",
                   help="full-matrix population stats, or training-row sample stats (divisor k-1 or k-1.5)")
    p.add_argument("--report", help="write a key=value summary to this file")
    p.add_argument("--emit-plots", metavar="DIR", help="write sats.csv, cutoffs.csv and histpanel_<col>.csv")


def load_dataset(args) -> dataio.Dataset:
    ds = dataio.load_csv(
        args.data, args.label_col,
        pass_values=None if args.positive_values else args.pass_values,
        positive_values=args.positive_values,
        ignore_columns=args.ignore_cols,
    )
    if args.step_map:
        ds = dataio.with_steps(ds, dataio.load_step_map(args.step_map))
    if args.steps or args.features:
        ds = dataio.filter_columns(ds, columns=args.features, steps=args.steps)
    return ds


def build_config(args, ds: dataio.Dataset, **over) -> RunConfig:
    cols = cics = None
    if args.cic_mode == "manual":
        if args.import_cics:
            cics = CicList.from_csv(args.import_cics)
        elif args.cols:
            cols = tuple(dataio.resolve_columns(ds, args.cols))
        else:
            raise HistClassError("manual mode needs --cols or --import-cics")
    quantize = args.quantize_digits
    if quantize is None and args.profile == "wafer":
        quantize = 3
    kw = dict(
        cic_mode=args.cic_mode, b_pos=args.bpos, b_neg=args.bneg,
        t=args.t if args.cic_mode == "auto" else None, cols=cols, cics=cics, nb=args.nb,
        train_pos=args.train_pos, train_neg=args.train_neg, measure=args.measure,
        cutoff=args.cutoff, seed=args.seed, stats=args.stats, quantize_digits=quantize,
        batch_size=args.batch_size,
    )
    kw.update(over)
    return RunConfig(**kw)


def _emit(args, ds, report, out):
    print(report.format(), file=out)
    if args.export_cics:
        report.cics.to_csv(args.export_cics)
    if args.report:
        dataio.write_kv(args.report, report.to_kv())
    if args.emit_plots:
        S = scale_for_run(ds.X, report.split, report.config)
        dataio.emit_plots(args.emit_plots, report, S)


def cmd_classify(args, out):
    ds = load_dataset(args)
    report = classify(ds.X, ds.labels, build_config(args, ds), column_names=ds.columns)
    _emit(args, ds, report, out)


def cmd_batch(args, out):
    cmd_classify(args, out)


def cmd_union(args, out):
    ds = load_dataset(args)
    config = build_config(args, ds, u_pos=args.u_pos)
    grid = np.linspace(0.0, 1.0, args.grid_points) if args.grid_points else DEFAULT_GRID
    report = union_classify(ds.X, ds.labels, config, args.indicator, grid, column_names=ds.columns)
    _emit(args, ds, report, out)


def _rank_inputs(args):
    ds = load_dataset(args)
    split = split_training(ds.labels, args.train_pos, args.train_neg, seed=args.seed)
    config = build_config(args, ds, cic_mode="auto", t=None, cols=None, cics=None)
    return ds, split, scale_for_run(ds.X, split, config)


def cmd_rank(args, out):
    ds, split, S = _rank_inputs(args)
    table = relevance_table(S, split, args.nb)
    rows = table.rows if args.top is None else table.rows[:args.top]
    print(f"{'Rank':>5} {'j':>6} {'n_diff':>8} {'n_pos':>7} {'n_neg':>7}  name", file=out)
    for rank, r in enumerate(rows, 1):
        print(f"{rank:>5} {r.col:>6} {r.n_diff:>8} {r.n_pos:>7} {r.n_neg:>7}  {ds.columns[r.col]}", file=out)
    if args.output:
        table.to_csv(args.output, ds.columns)


def cmd_autocics(args, out):
    ds = load_dataset(args)
    t = args.t if args.t is not None else default_top_count(ds.X.shape[1])
    config = build_config(args, ds, cic_mode="auto", t=t, cols=None, cics=None)
    report = classify(ds.X, ds.labels, config, column_names=ds.columns)
    print(f"AutoCics selection, t = {t} of n = {ds.X.shape[1]}", file=out)
    for s, c in enumerate(report.cics, 1):
        print(f"{s:>4}. column {c.col} ({ds.columns[c.col]}): [{c.lo:.6g}, {c.hi:.6g})", file=out)
    print(file=out)
    _emit(args, ds, report, out)


def cmd_gen(args, out):
    if args.planted_cols:
        planted = tuple(Planted(int(c), args.shift, args.spread) for c in args.planted_cols)
        spec = GeneratorSpec(m=args.m, n=args.n, positive_rate=args.positive_rate, planted=planted,
                             noise=args.noise, discrete_cols=args.discrete_cols,
                             decimals=args.decimals, seed=args.seed)
    else:
        spec = planted_spec(m=args.m, n=args.n, positive_rate=args.positive_rate, n_planted=args.planted,
                            shift=args.shift, spread=args.spread, seed=args.seed, noise=args.noise,
                            discrete_cols=args.discrete_cols, decimals=args.decimals)
    X, labels, planted_cols = generate(spec)
    dataio.write_csv(args.output, X, labels)
    print(f"wrote {args.output}: {spec.m} rows, {spec.n} features, {int(labels.sum())} positives; "
          f"planted columns {planted_cols}", file=out)


def cmd_iris(args, out):
    types = IRIS_TYPES if args.type == "all" else (args.type,)
    for typ in types:
        ds = dataio.load_iris(typ)
        cols = tuple(dataio.resolve_columns(ds, ["petal_length", "petal_width"]))
        kappas, accs = [], []
        report = None
        for s in range(args.seed, args.seed + args.runs):
            config = RunConfig(cic_mode="manual", cols=cols, nb=args.nb, train_pos=args.train_pos,
                               train_neg=args.train_neg, measure=args.measure, seed=s)
            report = classify(ds.X, ds.labels, config, column_names=ds.columns)
            kappas.append(report.confusion.kappa)
            accs.append(report.confusion.accuracy)
        print(f"== iris {typ} vs rest (nb={args.nb}, seed={args.seed}"
              + (f", {args.runs} runs" if args.runs > 1 else "") + ")", file=out)
        print(report.confusion.format_table() if args.runs == 1 else
              f"median kappa {statistics.median(kappas):.3f}, median accuracy {100 * statistics.median(accs):.1f}%",
              file=out)
        print(file=out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="histclass", description="Histogram-distribution binary classifier.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="full classification run")
    _add_data_args(p)
    _add_run_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("batch", help="classification with per-batch cutoff optimization")
    _add_data_args(p)
    _add_run_args(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("union", help="classification by activity-pattern similarity")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--u-pos", type=parse_size, required=True, help="reference positive set size")
    p.add_argument("--indicator", choices=("max", "min"), default="max")
    p.add_argument("--grid-points", type=int, help="cutoff grid resolution on [0, 1] (default: 101)")
    p.set_defaults(func=cmd_union)

    p = sub.add_parser("rank", help="n_diff relevance ranking of all features")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--top", type=int, help="print only the first rows")
    p.add_argument("--output", help="write the full ranking as CSV")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("autocics", help="classify with the top-t ranked features as Cics")
    _add_data_args(p)
    _add_run_args(p, cic_default="auto")
    p.set_defaults(func=cmd_autocics)

    p = sub.add_parser("gen", help="write a synthetic lot with planted indicator columns")
    p.add_argument("output")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--positive-rate", type=float, default=0.05)
    p.add_argument("--planted", type=int, default=4, help="number of planted columns (evenly spaced)")
    p.add_argument("--planted-cols", type=_csv_list, help="explicit 0-based planted columns")
    p.add_argument("--shift", type=float, default=8.0)
    p.add_argument("--spread", type=float, default=2e-4)
    p.add_argument("--noise", choices=("normal", "laplace"), default="normal")
    p.add_argument("--discrete-cols", type=int, default=0)
    p.add_argument("--decimals", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("iris", help="one-vs-rest iris runs with petal length/width as Cics")
    p.add_argument("--type", choices=IRIS_TYPES + ("all",), default="all")
    p.add_argument("--nb", type=int, default=5)
    p.add_argument("--train-pos", type=parse_size, default=0.6)
    p.add_argument("--train-neg", type=parse_size, default=0.01)
    p.add_argument("--measure", choices=("kappa", "accuracy"), default="kappa")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1, help="repeat over consecutive seeds and report medians")
    p.set_defaults(func=cmd_iris)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "batch" and args.batch_size is None:
        print("error: batch needs --batch-size", file=sys.stderr)
        return 2
    try:
        args.func(args, out)
    except (HistClassError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
