"""Command line interface.

Subcommands:
    bench   run an algorithm x function experiment grid, export CSV
    tune    tune the toy classifier's hyperparameters, export CSV reports
    eval    evaluate one benchmark function at a point
    diag    single diagnostic run with full telemetry CSVs

Exit codes: 0 success, 1 configuration error (bad arguments, unknown
function or algorithm, unreadable config) detected before any runs,
2 runtime failure (an objective aborted mid-experiment).
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import benchmarks
from .baselines import GwoConfig, PsoConfig, run_gwo, run_pso
from .engine import EngineConfig, ObjectiveError, run
from .harness import (ALGORITHMS, TELEMETRY_LEVELS, ConfigError,
                      ExperimentConfig, export_experiment,
                      load_experiment_config, run_experiment, summarize,
                      write_search_history)
from .hypertune import (confusion, export_dataset, make_toy_dataset, metrics,
                        roc_auc, roc_points, save_model, train_toy_model,
                        tune)
from .stochastic import ParameterError, make_rng


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default; 2 is reserved for
    # runtime aborts here, so remap usage problems to the config-error code.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _expand_functions(names):
    out = []
    for name in names:
        if name.lower() == "all":
            out.extend(benchmarks.BUILTIN_IDS)
        elif name.lower() == "scalable":
            out.extend(fid for fid in benchmarks.BUILTIN_IDS
                       if benchmarks.lookup(fid).scalable)
        elif name.lower() == "fixed":
            out.extend(fid for fid in benchmarks.BUILTIN_IDS
                       if not benchmarks.lookup(fid).scalable)
        else:
            out.append(name.upper())
    seen, unique = set(), []
    for fid in out:
        if fid not in seen:
            seen.add(fid)
            unique.append(fid)
    return tuple(unique)


def _cmd_bench(args) -> int:
    if args.config:
        config = load_experiment_config(args.config)
    else:
        config = ExperimentConfig()
    if args.algorithms:
        config.algorithms = tuple(a.lower() for a in args.algorithms)
    if args.functions:
        config.functions = _expand_functions(args.functions)
    for name in ("dim", "runs", "pop_size", "max_iter", "telemetry",
                 "workers", "composite_pack"):
        value = getattr(args, name)
        if value is not None:
            setattr(config, name, value)
    if args.seed is not None:
        config.base_seed = args.seed

    result = run_experiment(config)
    out_dir = Path(args.out)
    export_experiment(result, out_dir)
    for row in summarize(result.records):
        print(f"{row.algorithm:7s} {row.function:4s} d={row.dim:<5d} "
              f"ave={row.ave:.6g} std={row.std:.6g} best={row.best:.6g}")
    print(f"wrote {out_dir / 'stats.csv'}")
    if result.aborted:
        print(f"error: {result.aborted} run(s) aborted; see finals.csv",
              file=sys.stderr)
        return 2
    return 0


def _cmd_tune(args) -> int:
    data = make_toy_dataset(args.samples, args.features, args.data_seed,
                            args.separation)
    config = EngineConfig(algorithm=args.algorithm, pop_size=args.pop_size,
                          max_iter=args.max_iter, seed=args.seed)
    outcome = tune(config, data, trainer_seed=args.trainer_seed)
    model = train_toy_model(outcome.best_hyperparams, data,
                            seed=args.trainer_seed)
    scores = model.predict_proba(data.X_test)
    pred = model.predict(data.X_test)
    cm = confusion(pred, data.y_test)
    report = metrics(cm)
    points = roc_points(scores, data.y_test)
    auc = roc_auc(points)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "hyperparams.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "value"])
        for key, value in outcome.best_hyperparams.as_dict().items():
            writer.writerow([key, repr(value)])
        writer.writerow(["L_D", repr(outcome.best_L_D)])
        writer.writerow(["trainings", outcome.trainings])
    with open(out_dir / "confusion.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tp", "fn", "fp", "tn"])
        writer.writerow([cm.tp, cm.fn, cm.fp, cm.tn])
    with open(out_dir / "metrics.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value", "percent"])
        for key, value in report.as_dict().items():
            writer.writerow([key, repr(value), f"{100.0 * value:.2f}"])
        writer.writerow(["auc", repr(auc), f"{100.0 * auc:.2f}"])
    with open(out_dir / "roc.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in points:
            writer.writerow([repr(float(fpr)), repr(float(tpr))])
    save_model(model, out_dir / "model.txt")
    if args.export_data:
        export_dataset(data, out_dir / "dataset.csv")

    hp = outcome.best_hyperparams
    print(f"best L_D={outcome.best_L_D:.6g} after {outcome.trainings} "
          f"trainings")
    print(f"momentum={hp.momentum:.6g} learning_rate={hp.learning_rate:.6g} "
          f"epochs={hp.epochs} l2={hp.l2:.6g}")
    print(f"test accuracy={report.accuracy * 100:.2f}% "
          f"f1={report.f1 * 100:.2f}% auc={auc * 100:.2f}%")
    print(f"wrote {out_dir / 'hyperparams.csv'}")
    return 0


def _cmd_eval(args) -> int:
    func = benchmarks.lookup(args.function)
    rng = make_rng(args.seed, stream=1) if func.noisy else None
    value = func.evaluate(args.point, rng=rng)
    print(value)
    return 0


def _cmd_diag(args) -> int:
    func = benchmarks.lookup(args.function)
    space = func.space(args.dim if func.scalable else None)
    noise_rng = make_rng(args.seed, stream=1) if func.noisy else None
    objective = func.objective(rng=noise_rng) if func.noisy else func.objective()
    if args.algorithm in ("mfo", "nlcmfo"):
        config = EngineConfig(algorithm=args.algorithm, pop_size=args.pop_size,
                              max_iter=args.max_iter, seed=args.seed,
                              record_history=True)
        result = run(config, space, objective)
    elif args.algorithm == "pso":
        config = PsoConfig(pop_size=args.pop_size, max_iter=args.max_iter,
                           seed=args.seed, record_history=True)
        result = run_pso(config, space, objective)
    else:
        config = GwoConfig(pop_size=args.pop_size, max_iter=args.max_iter,
                           seed=args.seed, record_history=True)
        result = run_gwo(config, space, objective)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, header, curve in (
            ("convergence", "best_so_far", result.convergence),
            ("mean_fitness", "mean_fitness", result.mean_fitness),
            ("trajectory", "first_variable", result.trajectory)):
        with open(out_dir / f"{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", header])
            for l, value in enumerate(curve, start=1):
                writer.writerow([l, repr(float(value))])
    write_search_history(result.history, out_dir / "search_history.csv")
    print(f"best={result.best_fitness:.6g} evaluations={result.evaluations}")
    print(f"wrote telemetry to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlcmfo",
                     description="moth-flame optimization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", parents=[], help="run an experiment grid")
    bench.add_argument("--config", help="JSON experiment config file")
    bench.add_argument("--algorithms", nargs="+", metavar="ALG",
                       help=f"subset of {ALGORITHMS}")
    bench.add_argument("--functions", nargs="+", metavar="FID",
                       help="function ids (F1..F29) or all/scalable/fixed")
    bench.add_argument("--dim", type=int)
    bench.add_argument("--runs", type=int)
    bench.add_argument("--pop-size", dest="pop_size", type=int)
    bench.add_argument("--max-iter", dest="max_iter", type=int)
    bench.add_argument("--seed", type=int, help="base seed (run r adds r)")
    bench.add_argument("--telemetry", choices=TELEMETRY_LEVELS)
    bench.add_argument("--workers", type=int)
    bench.add_argument("--composite-pack", dest="composite_pack",
                       help="directory of composite *.json definitions")
    bench.add_argument("--out", default="results")
    bench.set_defaults(func=_cmd_bench)

    tune_p = sub.add_parser("tune", help="tune the toy classifier")
    tune_p.add_argument("--algorithm", choices=("mfo", "nlcmfo"),
                        default="nlcmfo")
    tune_p.add_argument("--pop-size", dest="pop_size", type=int, default=30)
    tune_p.add_argument("--max-iter", dest="max_iter", type=int, default=20)
    tune_p.add_argument("--seed", type=int, default=0)
    tune_p.add_argument("--trainer-seed", dest="trainer_seed", type=int,
                        default=0)
    tune_p.add_argument("--samples", type=int, default=600)
    tune_p.add_argument("--features", type=int, default=2)
    tune_p.add_argument("--data-seed", dest="data_seed", type=int, default=0)
    tune_p.add_argument("--separation", type=float, default=1.0)
    tune_p.add_argument("--export-data", dest="export_data",
                        action="store_true")
    tune_p.add_argument("--out", default="tune_results")
    tune_p.set_defaults(func=_cmd_tune)

    eval_p = sub.add_parser("eval", help="evaluate a function at a point")
    eval_p.add_argument("function")
    eval_p.add_argument("point", nargs="+", type=float)
    eval_p.add_argument("--seed", type=int, default=0,
                        help="noise seed (only F7 uses it)")
    eval_p.set_defaults(func=_cmd_eval)

    diag = sub.add_parser("diag", help="one run with full telemetry export")
    diag.add_argument("--algorithm", choices=ALGORITHMS, default="nlcmfo")
    diag.add_argument("--function", default="F1")
    diag.add_argument("--dim", type=int, default=None)
    diag.add_argument("--pop-size", dest="pop_size", type=int, default=30)
    diag.add_argument("--max-iter", dest="max_iter", type=int, default=100)
    diag.add_argument("--seed", type=int, default=0)
    diag.add_argument("--out", default="diag_results")
    diag.set_defaults(func=_cmd_diag)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError, benchmarks.UnknownFunctionError,
            benchmarks.CompositeUnavailableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ObjectiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
