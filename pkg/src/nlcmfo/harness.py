"""Batch experiment harness: run algorithm x function grids and export CSV.

A grid cell is (algorithm, function, dim); each cell is repeated for a fixed
number of independent runs with per-run seeds base_seed + run_index, so the
same seed set is used in every cell and cross-algorithm comparisons are
paired.  Results aggregate to mean/std summaries (sample std, ddof=1) and
can be exported at three telemetry levels:

    summary       final fitness per run only
    curves        + per-iteration best/mean/trajectory curves
    full-history  + full per-iteration population snapshots

All CSV output is deterministic for a fixed config and base seed except the
runtime columns, which report wall-clock measurements and are explicitly
outside the reproducibility contract.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import benchmarks
from .baselines import GwoConfig, PsoConfig, run_gwo, run_pso
from .engine import EngineConfig, ObjectiveError, run
from .stochastic import make_rng

ALGORITHMS = ("mfo", "nlcmfo", "pso", "gwo")
TELEMETRY_LEVELS = ("summary", "curves", "full-history")

WORKERS_ENV_VAR = "NLCMFO_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration (caught before any run starts)."""


@dataclass
class ExperimentConfig:
    algorithms: tuple = ("nlcmfo",)
    functions: tuple = ("F1",)
    dim: Optional[int] = None        # override for scalable functions only
    runs: int = 30
    pop_size: int = 30
    max_iter: int = 500
    base_seed: int = 0
    telemetry: str = "summary"
    workers: Optional[int] = None    # None: NLCMFO_WORKERS env var, else 1
    composite_pack: Optional[str] = None
    params: dict = field(default_factory=dict)  # overrides for config fields


@dataclass
class RunRecord:
    algorithm: str
    function: str
    dim: int
    run_index: int
    seed: int
    best_fitness: float
    best_position: Optional[np.ndarray]
    evaluations: int
    runtime_s: float
    aborted: bool = False
    error: str = ""
    convergence: Optional[np.ndarray] = None
    mean_curve: Optional[np.ndarray] = None
    trajectory: Optional[np.ndarray] = None
    history: Optional[np.ndarray] = None


@dataclass
class CellStats:
    ave: float
    std: float
    ave_runtime_s: float
    std_runtime_s: float
    single_sample: bool = False


@dataclass
class SummaryRow:
    algorithm: str
    function: str
    dim: int
    n_runs: int
    aborted: int
    ave: float
    std: float
    best: float
    worst: float
    median: float
    ave_runtime_s: float
    std_runtime_s: float
    single_sample: bool = False


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list

    @property
    def aborted(self) -> int:
        return sum(1 for r in self.records if r.aborted)


def load_experiment_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig from a JSON object; unknown keys are errors."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("algorithms", "functions"):
        if key in raw:
            value = raw[key]
            if isinstance(value, str):
                value = [value]
            raw[key] = tuple(value)
    return ExperimentConfig(**raw)


def _validate(config: ExperimentConfig) -> None:
    if not config.algorithms:
        raise ConfigError("no algorithms selected")
    for algorithm in config.algorithms:
        if algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}"
            )
    if not config.functions:
        raise ConfigError("no functions selected")
    if config.composite_pack is not None:
        _ensure_pack(config.composite_pack)
    for fid in config.functions:
        benchmarks.lookup(fid)  # raises on unknown / unavailable ids
    if config.runs < 1:
        raise ConfigError("runs must be >= 1")
    if config.pop_size < 1 or config.max_iter < 1:
        raise ConfigError("pop_size and max_iter must be >= 1")
    if config.telemetry not in TELEMETRY_LEVELS:
        raise ConfigError(
            f"telemetry must be one of {TELEMETRY_LEVELS}, got {config.telemetry!r}"
        )
    if config.dim is not None and config.dim < 1:
        raise ConfigError("dim must be >= 1")
    # reject override keys that fit no selected algorithm's config up front
    if config.params:
        legal = set()
        for algorithm in config.algorithms:
            legal |= {f.name for f in fields(_CONFIG_TYPES[algorithm])}
        unknown = set(config.params) - legal
        if unknown:
            raise ConfigError(f"unknown params keys: {sorted(unknown)}")


_CONFIG_TYPES = {"mfo": EngineConfig, "nlcmfo": EngineConfig,
                 "pso": PsoConfig, "gwo": GwoConfig}

_loaded_packs: set = set()


def _ensure_pack(directory) -> None:
    key = str(Path(directory).resolve())
    if key in _loaded_packs:
        return
    try:
        benchmarks.load_composite_pack(directory)
    except benchmarks.CompositeCollisionError:
        pass  # already registered in this process
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    _loaded_packs.add(key)


def _cell_dim(func: benchmarks.BenchmarkFunction, dim: Optional[int]) -> int:
    if dim is not None and func.scalable:
        return dim
    return func.dim


def _build_config(algorithm: str, pop_size: int, max_iter: int, seed: int,
                  record_history: bool, params: dict):
    cls = _CONFIG_TYPES[algorithm]
    legal = {f.name for f in fields(cls)}
    kwargs = {k: v for k, v in params.items() if k in legal}
    kwargs.update(pop_size=pop_size, max_iter=max_iter, seed=seed,
                  record_history=record_history)
    if cls is EngineConfig:
        kwargs["algorithm"] = algorithm
    return cls(**kwargs)


def _execute_task(task) -> RunRecord:
    (algorithm, fid, dim, run_index, seed, pop_size, max_iter, telemetry,
     params, pack_dir) = task
    if pack_dir is not None:
        _ensure_pack(pack_dir)
    func = benchmarks.lookup(fid)
    space = func.space(dim)
    noise_rng = make_rng(seed, stream=1) if func.noisy else None
    objective = func.objective(rng=noise_rng) if func.noisy else func.objective()
    config = _build_config(algorithm, pop_size, max_iter, seed,
                           telemetry == "full-history", params)
    runner = {"mfo": run, "nlcmfo": run, "pso": run_pso, "gwo": run_gwo}[algorithm]
    try:
        result = runner(config, space, objective)
    except ObjectiveError as exc:
        return RunRecord(algorithm, fid, dim, run_index, seed,
                         float("nan"), None, 0, 0.0, aborted=True,
                         error=str(exc))
    keep_curves = telemetry in ("curves", "full-history")
    return RunRecord(
        algorithm, fid, dim, run_index, seed,
        result.best_fitness, result.best_position,
        result.evaluations, result.wall_time,
        convergence=result.convergence if keep_curves else None,
        mean_curve=result.mean_fitness if keep_curves else None,
        trajectory=result.trajectory if keep_curves else None,
        history=result.history if telemetry == "full-history" else None,
    )


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    return workers


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full grid; per-run failures are recorded, not raised."""
    _validate(config)
    workers = resolve_workers(config.workers)
    tasks = []
    for algorithm in config.algorithms:
        for fid in config.functions:
            func = benchmarks.lookup(fid)
            dim = _cell_dim(func, config.dim)
            for r in range(config.runs):
                tasks.append((
                    algorithm, str(fid).upper(), dim, r, config.base_seed + r,
                    config.pop_size, config.max_iter, config.telemetry,
                    dict(config.params), config.composite_pack,
                ))
    if workers == 1 or len(tasks) == 1:
        records = [_execute_task(t) for t in tasks]
    else:
        # map() preserves task order, so output is independent of scheduling
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_execute_task, tasks))
    return ExperimentResult(config, records)


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def summarize_cell(finals, runtimes) -> CellStats:
    """Mean and sample std (ddof=1) of one cell's finals and runtimes.

    A single-run cell reports std 0 and is flagged single_sample.
    """
    finals = np.asarray(finals, dtype=np.float64)
    runtimes = np.asarray(runtimes, dtype=np.float64)
    if finals.size == 0 or finals.size != runtimes.size:
        raise ValueError("finals and runtimes must be equal-length and nonempty")
    single = finals.size == 1
    std = 0.0 if single else float(np.std(finals, ddof=1))
    std_rt = 0.0 if single else float(np.std(runtimes, ddof=1))
    return CellStats(float(np.mean(finals)), std,
                     float(np.mean(runtimes)), std_rt, single)


def summarize(records) -> list:
    """One SummaryRow per grid cell, in first-seen cell order.

    Aborted runs are counted but excluded from the fitness statistics.
    """
    cells: dict = {}
    for rec in records:
        cells.setdefault((rec.algorithm, rec.function, rec.dim), []).append(rec)
    rows = []
    for (algorithm, fid, dim), group in cells.items():
        finished = [r for r in group if not r.aborted]
        aborted = len(group) - len(finished)
        if not finished:
            nan = float("nan")
            rows.append(SummaryRow(algorithm, fid, dim, 0, aborted,
                                   nan, nan, nan, nan, nan, nan, nan))
            continue
        fits = np.array([r.best_fitness for r in finished])
        stats = summarize_cell(fits, [r.runtime_s for r in finished])
        rows.append(SummaryRow(
            algorithm, fid, dim, len(finished), aborted,
            stats.ave, stats.std,
            float(np.min(fits)), float(np.max(fits)), float(np.median(fits)),
            stats.ave_runtime_s, stats.std_runtime_s,
            single_sample=stats.single_sample,
        ))
    return rows


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

_STATS_HEADER = ("algorithm", "function", "dim", "ave", "std",
                 "ave_runtime_s", "std_runtime_s", "aborted_runs")


def _g6(value: float) -> str:
    return f"{value:.6g}"


def write_stats(rows, path, full_precision: bool = False) -> None:
    """Summary table; 6 significant digits by default, repr() when full.

    The runtime columns are wall-clock and not byte-reproducible across
    re-runs; every other column is.
    """
    fmt = repr if full_precision else _g6
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_STATS_HEADER)
        for row in rows:
            writer.writerow([
                row.algorithm, row.function, row.dim,
                fmt(row.ave), fmt(row.std),
                fmt(row.ave_runtime_s), fmt(row.std_runtime_s), row.aborted,
            ])


_FINALS_HEADER = ("algorithm", "function", "dim", "run", "seed",
                  "best_fitness", "evaluations", "runtime_s", "aborted")


def write_finals(records, path) -> None:
    """Per-run final results at full precision (runtime_s is wall-clock)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_FINALS_HEADER)
        for r in records:
            writer.writerow([
                r.algorithm, r.function, r.dim, r.run_index, r.seed,
                repr(r.best_fitness), r.evaluations, repr(r.runtime_s),
                int(r.aborted),
            ])


def export_curves(records, out_dir) -> list:
    """Write per-cell curve CSVs (iter column + one column per run).

    Returns the written paths.  Records without curve telemetry are skipped.
    Full-history snapshots go to one file per run with iter,moth,x1..xd rows.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells: dict = {}
    for rec in records:
        if rec.convergence is None:
            continue
        cells.setdefault((rec.algorithm, rec.function, rec.dim), []).append(rec)
    written = []
    for (algorithm, fid, dim), group in cells.items():
        group = sorted(group, key=lambda r: r.run_index)
        stem = f"{algorithm}_{fid}_d{dim}"
        for metric, attr in (("convergence", "convergence"),
                             ("mean_fitness", "mean_curve"),
                             ("trajectory", "trajectory")):
            path = out_dir / f"{stem}_{metric}.csv"
            curves = [getattr(r, attr) for r in group]
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["iter"] + [f"run{r.run_index}" for r in group])
                for l in range(len(curves[0])):
                    writer.writerow([l + 1] + [repr(float(c[l])) for c in curves])
            written.append(path)
        for rec in group:
            if rec.history is None:
                continue
            path = out_dir / f"{stem}_run{rec.run_index}_search_history.csv"
            write_search_history(rec.history, path)
            written.append(path)
    return written


def write_search_history(history: np.ndarray, path) -> None:
    """Long-format position snapshots: one (iter, moth, dim, value) row each."""
    n_iter, n_moths, d = history.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "moth", "dim", "value"])
        for l in range(n_iter):
            for m in range(n_moths):
                for j in range(d):
                    writer.writerow([l + 1, m, j + 1, repr(float(history[l, m, j]))])


def export_experiment(result: ExperimentResult, out_dir) -> dict:
    """Standard output bundle: stats.csv, stats_full.csv, finals.csv, curves."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = summarize(result.records)
    paths = {
        "stats": out_dir / "stats.csv",
        "stats_full": out_dir / "stats_full.csv",
        "finals": out_dir / "finals.csv",
    }
    write_stats(rows, paths["stats"])
    write_stats(rows, paths["stats_full"], full_precision=True)
    write_finals(result.records, paths["finals"])
    if result.config.telemetry in ("curves", "full-history"):
        paths["curves"] = export_curves(result.records, out_dir / "curves")
    return paths
