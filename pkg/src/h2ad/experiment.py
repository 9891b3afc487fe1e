"""Monte Carlo sweeps, per-trial records, summaries, CSV and plot output."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .array import ArrayConfig, GroupConfig
from .clustering import Method
from .crlb import PowerModel, aggregate_crlb, crlb_group, information_weights
from .pipeline import candidate_sets, estimate_doa, nearest_candidates
from .rootmusic import EstimationError
from .signal import SignalModel, SimulationConfig, synthesize

log = logging.getLogger(__name__)

SWEEP_VARIABLES = ("snr_db", "snapshots", "subarray_count")
SWEEP_ALIASES = {"snr": "snr_db", "snapshots": "snapshots", "subarrays": "subarray_count"}

TRIAL_COLUMNS = ("seed", "sweep_value", "method", "success", "theta_hat_deg", "sq_err_deg2", "runtime_us")
SUMMARY_COLUMNS = (
    "sweep_value",
    "method",
    "rmse_deg",
    "accuracy",
    "failure_rate",
    "crlb_deg",
    "aggregate_crlb_deg",
    "mean_runtime_us",
)

DEFAULT_TRIALS = 500
FULL_SCALE_TRIALS = 5000


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep.

    ``series`` optionally names a second variable and its values; the sweep
    is repeated for each, and outputs go to one subdirectory per value.
    """

    array: ArrayConfig
    sim: SimulationConfig
    sweep: str = "snr_db"
    grid: tuple = (0.0,)
    methods: tuple[Method, ...] = tuple(Method)
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    output_dir: Path | None = None
    series: tuple[str, tuple] | None = None
    record_timing: bool = False
    workers: int = 1
    dbscan_iterations: int = 20
    dbscan_degrees: bool = False
    power: PowerModel = field(default_factory=PowerModel)

    def __post_init__(self):
        sweep = SWEEP_ALIASES.get(self.sweep, self.sweep)
        if sweep not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.sweep!r}")
        object.__setattr__(self, "sweep", sweep)
        if len(self.grid) == 0:
            raise ValueError("sweep grid is empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        if self.series is not None:
            name, values = self.series
            name = SWEEP_ALIASES.get(name, name)
            if name not in SWEEP_VARIABLES or name == sweep:
                raise ValueError(f"invalid series variable {name!r}")
            object.__setattr__(self, "series", (name, tuple(values)))


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    sweep_value: float
    method: Method
    success: bool
    theta_hat: float
    squared_error_deg2: float | None
    selections: tuple[int, ...]
    correct_class: bool
    runtime_us: float
    series_value: float | None = None
    grid_index: int = 0
    trial_index: int = 0

    @property
    def theta_hat_deg(self) -> float:
        return math.degrees(self.theta_hat) if self.success else float("nan")


@dataclass(frozen=True)
class SummaryRow:
    sweep_value: float
    method: Method
    rmse_deg: float
    accuracy: float
    failure_rate: float
    crlb_deg: float
    aggregate_crlb_deg: float
    mean_runtime_us: float
    series_value: float | None = None


def apply_setting(array: ArrayConfig, sim: SimulationConfig, variable: str, value):
    """Return (array, sim) with one swept variable replaced."""
    if variable == "snr_db":
        return array, replace(sim, snr_db=float(value))
    if variable == "snapshots":
        return array, replace(sim, snapshot_count=int(value))
    groups = tuple(GroupConfig(int(value), g.antennas_per_subarray) for g in array.groups)
    return replace(array, groups=groups), sim


def trial_seed(seed: int, series_index: int, grid_index: int, trial_index: int) -> int:
    """64-bit trial seed; depends only on its coordinates, not on scheduling."""
    seq = np.random.SeedSequence(seed, spawn_key=(series_index, grid_index, trial_index))
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class _Point:
    series_index: int
    series_value: float | None
    grid_index: int
    sweep_value: float
    array: ArrayConfig
    sim: SimulationConfig


def _points(spec: ExperimentSpec) -> list[_Point]:
    series = [(None, None)] if spec.series is None else [(spec.series[0], v) for v in spec.series[1]]
    out = []
    for s_idx, (s_var, s_val) in enumerate(series):
        array, sim = spec.array, spec.sim
        if s_var is not None:
            array, sim = apply_setting(array, sim, s_var, s_val)
        for g_idx, value in enumerate(spec.grid):
            a, s = apply_setting(array, sim, spec.sweep, value)
            out.append(_Point(s_idx, s_val, g_idx, value, a, s))
    return out


def _run_trials(args) -> list[TrialRecord]:
    spec, point, trial_indices = args
    array, sim = point.array, point.sim
    weights = information_weights(array, sim)
    options = {"max_iterations": spec.dbscan_iterations, "degrees": spec.dbscan_degrees}
    records = []
    for t in trial_indices:
        seed = trial_seed(spec.seed, point.series_index, point.grid_index, t)
        batch = synthesize(array, sim, seed)
        start = time.perf_counter()
        try:
            cands = candidate_sets(batch)
        except EstimationError as exc:
            log.debug("trial %d failed in root-MUSIC: %s", t, exc)
            cands = None
        shared = time.perf_counter() - start
        truth = nearest_candidates(cands, sim.true_angle) if cands is not None else None
        for method in spec.methods:
            start = time.perf_counter()
            if cands is not None:
                est = estimate_doa(
                    array, cands, method, weights,
                    **(options if method is Method.IMPROVED_DBSCAN else {}),
                )
                success, theta = est.success, est.angle
                selections = est.selection.indices
            else:
                success, theta, selections = False, float("nan"), (-1,) * array.group_count
            elapsed = shared + time.perf_counter() - start
            sq = math.degrees(theta - sim.true_angle) ** 2 if success else None
            records.append(
                TrialRecord(
                    seed=seed,
                    sweep_value=point.sweep_value,
                    method=method,
                    success=success,
                    theta_hat=theta,
                    squared_error_deg2=sq,
                    selections=tuple(selections),
                    correct_class=success and tuple(selections) == truth,
                    runtime_us=elapsed * 1e6 if spec.record_timing else 0.0,
                    series_value=point.series_value,
                    grid_index=point.grid_index,
                    trial_index=t,
                )
            )
    return records


def _record_key(spec: ExperimentSpec):
    order = {m: i for i, m in enumerate(spec.methods)}
    return lambda r: (
        -1 if r.series_value is None else spec.series[1].index(r.series_value),
        r.grid_index,
        r.trial_index,
        order[r.method],
    )


def run_trials(spec: ExperimentSpec, chunk_size: int = 50) -> list[TrialRecord]:
    """Every (series, grid point, trial, method) record, in canonical order."""
    jobs = []
    for point in _points(spec):
        for lo in range(0, spec.trials, chunk_size):
            jobs.append((spec, point, range(lo, min(lo + chunk_size, spec.trials))))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            chunks = list(pool.map(_run_trials, jobs))
    else:
        chunks = [_run_trials(job) for job in jobs]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=_record_key(spec))
    return records


def analytic_columns(array: ArrayConfig, sim: SimulationConfig) -> tuple[float, float]:
    """(best single-group root-CRLB, aggregate root-CRLB), both in degrees.

    Computed from geometry and scenario only, never from trial outcomes.
    """
    best = min(crlb_group(array, sim, q) for q in range(array.group_count))
    return math.degrees(math.sqrt(best)), math.degrees(math.sqrt(aggregate_crlb(array, sim)))


def summarize(records: Sequence[TrialRecord], spec: ExperimentSpec) -> list[SummaryRow]:
    rows = []
    for point in _points(spec):
        crlb_deg, agg_deg = analytic_columns(point.array, point.sim)
        for method in spec.methods:
            sel = [
                r for r in records
                if r.method is method and r.grid_index == point.grid_index
                and r.series_value == point.series_value
            ]
            ok = [r.squared_error_deg2 for r in sel if r.success]
            n = len(sel)
            rows.append(
                SummaryRow(
                    sweep_value=point.sweep_value,
                    method=method,
                    rmse_deg=math.sqrt(math.fsum(ok) / len(ok)) if ok else float("nan"),
                    accuracy=sum(r.correct_class for r in sel) / n if n else float("nan"),
                    failure_rate=sum(not r.success for r in sel) / n if n else float("nan"),
                    crlb_deg=crlb_deg,
                    aggregate_crlb_deg=agg_deg,
                    mean_runtime_us=math.fsum(r.runtime_us for r in sel) / n if n else float("nan"),
                    series_value=point.series_value,
                )
            )
    return rows


def run_experiment(spec: ExperimentSpec) -> tuple[list[TrialRecord], list[SummaryRow]]:
    records = run_trials(spec)
    return records, summarize(records, spec)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, Method):
        return x.value
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def trial_rows(records: Iterable[TrialRecord]):
    for r in records:
        yield (
            r.seed, r.sweep_value, r.method, r.success,
            r.theta_hat_deg if r.success else None, r.squared_error_deg2, r.runtime_us,
        )


def summary_rows(rows: Iterable[SummaryRow]):
    for s in rows:
        yield (
            s.sweep_value, s.method, s.rmse_deg, s.accuracy, s.failure_rate,
            s.crlb_deg, s.aggregate_crlb_deg, s.mean_runtime_us,
        )


def write_csv(path_or_buffer, columns, rows) -> None:
    own = not isinstance(path_or_buffer, io.TextIOBase)
    fh = open(path_or_buffer, "w", newline="") if own else path_or_buffer
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def emit_outputs(
    records: Sequence[TrialRecord],
    spec: ExperimentSpec,
    summary: Sequence[SummaryRow] | None = None,
    plots: bool = True,
) -> list[Path]:
    """Write per-trial CSV, summary CSV and SVG plots under ``spec.output_dir``."""
    if spec.output_dir is None:
        raise ValueError("spec.output_dir is not set")
    out = Path(spec.output_dir)
    summary = summarize(records, spec) if summary is None else summary
    series_values = [None] if spec.series is None else list(spec.series[1])
    written = []
    for sv in series_values:
        target = out if sv is None else out / f"{spec.series[0]}={_fmt(sv)}"
        try:
            target.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {target}: {exc}") from exc
        recs = [r for r in records if r.series_value == sv]
        rows = [s for s in summary if s.series_value == sv]
        write_csv(target / "trials.csv", TRIAL_COLUMNS, trial_rows(recs))
        write_csv(target / "summary.csv", SUMMARY_COLUMNS, summary_rows(rows))
        written += [target / "trials.csv", target / "summary.csv"]
        if plots and rows:
            from . import plots as _plots

            written += _plots.sweep_plots(rows, spec, target)
    if plots:
        from . import plots as _plots

        written.append(_plots.energy_efficiency_plot(spec, out))
    return written
