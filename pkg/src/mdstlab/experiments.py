"""Replicated experiments: run, persist, resume, summarize.

A run is defined by (kind, d, alpha, s grid, replications, master seed). Each
(s, replicate) pair owns a seed derived by hashing the master seed with the
bit pattern of s and the replicate index, so a record is a pure function of
those three values: reruns reproduce it bit for bit, any worker may compute
it, and any subset of replicates can be regenerated in isolation.

Records go to CSV with a fixed header; floats are serialized with repr, whose
shortest round-trip form makes load(write(records)) lossless. Rows are written
in canonical (s, replicate) order no matter how workers finished. Rerunning a
config against an existing output file skips every completed pair and leaves
the final CSV byte-identical, timing column included.

The wall-clock column (elapsed_ms) is the one field not derived from the seed;
fresh runs to different paths agree on every other column.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .empirics import (
    DKW_COEFFICIENT,
    distance_report,
    rate_regression,
)
from .geometry import minimal_points_fast
from .sampling import derive_seed, dickman_cascade, sample_poisson_cube

__all__ = [
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "SIMULATE",
    "MEAN_SWEEP",
    "VARIANCE_SWEEP",
    "CLT_CONVERGENCE",
    "DICKMAN_COMPARE",
    "EXPERIMENT_KINDS",
    "RecordError",
    "ExperimentConfig",
    "ExperimentRecord",
    "run_replicate",
    "run_experiment",
    "load_records",
    "write_records",
    "summary_path_for",
]

SCHEMA_VERSION = 1

SIMULATE = "simulate"
MEAN_SWEEP = "mean_sweep"
VARIANCE_SWEEP = "variance_sweep"
CLT_CONVERGENCE = "clt"
DICKMAN_COMPARE = "dickman"
EXPERIMENT_KINDS = (SIMULATE, MEAN_SWEEP, VARIANCE_SWEEP, CLT_CONVERGENCE, DICKMAN_COMPARE)

CSV_COLUMNS = (
    "run_id",
    "d",
    "alpha",
    "s",
    "replicate_index",
    "seed",
    "n_points",
    "n_minimal",
    "statistic_value",
    "elapsed_ms",
)


class RecordError(Exception):
    """A records file is malformed or inconsistent with the requested run."""


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    dimension: int
    alpha: float
    s_grid: tuple[float, ...]
    replications: int
    master_seed: int
    worker_count: int = 1
    output_path: Optional[Path] = None
    dickman_threshold: float = 1e-12

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if int(self.dimension) < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.kind == DICKMAN_COMPARE and int(self.dimension) != 2:
            raise ValueError("the Dickman comparison is a d=2 experiment")
        if not (float(self.alpha) > 0.0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if len(self.s_grid) == 0:
            raise ValueError("s_grid must not be empty")
        grid = tuple(float(s) for s in self.s_grid)
        if any(not math.isfinite(s) or s <= 1.0 for s in grid):
            raise ValueError("every s must be finite and > 1")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("s_grid must be strictly increasing")
        if int(self.replications) < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if int(self.worker_count) < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")
        if not (0.0 < float(self.dickman_threshold) < 1.0):
            raise ValueError("dickman_threshold must be in (0, 1)")
        object.__setattr__(self, "s_grid", grid)
        if self.output_path is not None:
            object.__setattr__(self, "output_path", Path(self.output_path))

    @property
    def run_id(self) -> str:
        # Identifies the record-generating parameters only: worker count,
        # output location and summary knobs must not change the records.
        key = "|".join(
            [
                self.kind,
                str(int(self.dimension)),
                repr(float(self.alpha)),
                ",".join(repr(s) for s in self.s_grid),
                str(int(self.replications)),
                str(int(self.master_seed)),
            ]
        )
        return hashlib.sha256(key.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ExperimentRecord:
    run_id: str
    dimension: int
    alpha: float
    s: float
    replicate_index: int
    seed: int
    n_points: int
    n_minimal: int
    statistic_value: float
    elapsed_ms: int


def replicate_seed(master_seed: int, s: float, replicate_index: int) -> int:
    """Seed for one (s, replicate) cell, independent of grid and R."""
    s_bits = int(np.float64(s).view(np.uint64))
    return derive_seed(master_seed, s_bits, replicate_index)


def run_replicate(
    dimension: int, alpha: float, s: float, replicate_index: int, seed: int, run_id: str = ""
) -> ExperimentRecord:
    """Sample one Poisson cube, extract minima, evaluate the rooted statistic."""
    t0 = time.perf_counter()
    sample = sample_poisson_cube(dimension, s, seed)
    mins = minimal_points_fast(sample.points)
    norms = np.linalg.norm(sample.points[mins], axis=1)
    statistic = float(np.sum(norms ** float(alpha)))
    elapsed_ms = int(round((time.perf_counter() - t0) * 1000.0))
    return ExperimentRecord(
        run_id=run_id,
        dimension=int(dimension),
        alpha=float(alpha),
        s=float(s),
        replicate_index=int(replicate_index),
        seed=int(seed),
        n_points=sample.count,
        n_minimal=int(mins.shape[0]),
        statistic_value=statistic,
        elapsed_ms=elapsed_ms,
    )


def _task(args: tuple) -> ExperimentRecord:
    return run_replicate(*args)


# ============================================================
# CSV persistence
# ============================================================


def write_records(records: Sequence[ExperimentRecord], path: Path) -> None:
    """Write records in canonical order; atomic replace of the target file."""
    ordered = sorted(records, key=lambda r: (r.s, r.replicate_index))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in ordered:
            writer.writerow(
                [
                    r.run_id,
                    r.dimension,
                    repr(r.alpha),
                    repr(r.s),
                    r.replicate_index,
                    r.seed,
                    r.n_points,
                    r.n_minimal,
                    repr(r.statistic_value),
                    r.elapsed_ms,
                ]
            )
    os.replace(tmp, path)


def load_records(path: Path) -> list[ExperimentRecord]:
    """Parse a records CSV, validating the header and every row."""
    path = Path(path)
    records: list[ExperimentRecord] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RecordError(f"{path}: empty records file") from None
        if tuple(header) != CSV_COLUMNS:
            raise RecordError(f"{path}: unexpected header {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(CSV_COLUMNS):
                raise RecordError(f"{path}:{lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
            try:
                rec = ExperimentRecord(
                    run_id=row[0],
                    dimension=int(row[1]),
                    alpha=float(row[2]),
                    s=float(row[3]),
                    replicate_index=int(row[4]),
                    seed=int(row[5]),
                    n_points=int(row[6]),
                    n_minimal=int(row[7]),
                    statistic_value=float(row[8]),
                    elapsed_ms=int(row[9]),
                )
            except ValueError as exc:
                raise RecordError(f"{path}:{lineno}: {exc}") from None
            if rec.n_minimal > rec.n_points or rec.n_minimal < 0:
                raise RecordError(f"{path}:{lineno}: minimal count {rec.n_minimal} out of range")
            if not math.isfinite(rec.statistic_value) or rec.statistic_value < 0.0:
                raise RecordError(f"{path}:{lineno}: bad statistic value {rec.statistic_value}")
            records.append(rec)
    return records


def summary_path_for(output_path: Path) -> Path:
    output_path = Path(output_path)
    return output_path.with_name(output_path.stem + ".summary.json")


# ============================================================
# The runner
# ============================================================


def run_experiment(config: ExperimentConfig) -> tuple[list[ExperimentRecord], dict]:
    """Compute (or resume) all replicates, persist them, build the summary.

    Returns the canonical record list and the summary dict. When the config
    carries an output path, records are written there as CSV and the summary
    as JSON next to it.
    """
    run_id = config.run_id
    done: dict[tuple[float, int], ExperimentRecord] = {}
    if config.output_path is not None and Path(config.output_path).exists():
        for rec in load_records(config.output_path):
            if rec.run_id != run_id:
                raise RecordError(
                    f"{config.output_path}: holds run {rec.run_id}, refusing to mix with {run_id}"
                )
            done[(rec.s, rec.replicate_index)] = rec

    tasks = []
    for s in config.s_grid:
        for rep in range(config.replications):
            if (s, rep) in done:
                continue
            seed = replicate_seed(config.master_seed, s, rep)
            tasks.append((config.dimension, config.alpha, s, rep, seed, run_id))

    fresh: list[ExperimentRecord]
    if config.worker_count > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (config.worker_count * 8))
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            fresh = list(pool.map(_task, tasks, chunksize=chunk))
    else:
        fresh = [_task(t) for t in tasks]

    records = sorted(
        list(done.values()) + fresh, key=lambda r: (r.s, r.replicate_index)
    )
    if config.output_path is not None:
        write_records(records, config.output_path)
    summary = _summarize(config, records)
    if config.output_path is not None:
        with open(summary_path_for(config.output_path), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return records, summary


# ============================================================
# Summaries
# ============================================================


def _per_s_rows(config: ExperimentConfig, records: list[ExperimentRecord]) -> list[dict]:
    rows = []
    for s in config.s_grid:
        vals = np.array([r.statistic_value for r in records if r.s == s])
        counts = np.array([r.n_points for r in records if r.s == s])
        minima = np.array([r.n_minimal for r in records if r.s == s])
        rows.append(
            {
                "s": s,
                "replications": int(vals.shape[0]),
                "mean": float(vals.mean()),
                "variance": float(vals.var(ddof=1)) if vals.shape[0] > 1 else None,
                "mean_points": float(counts.mean()),
                "mean_minimal": float(minima.mean()),
            }
        )
    return rows


def _fit_against_log_power(xs, ys, power: int) -> dict:
    y = np.asarray(ys, dtype=np.float64)
    if power < 1:
        # d = 2: the leading term is already constant, nothing grows.
        return {"slope": None, "intercept": float(y.mean()) if y.size else None}
    x = np.log(np.asarray(xs, dtype=np.float64)) ** power
    if x.shape[0] < 2:
        return {"slope": None, "intercept": None}
    slope, intercept = np.polyfit(x, y, deg=1)
    return {"slope": float(slope), "intercept": float(intercept)}


def _summarize(config: ExperimentConfig, records: list[ExperimentRecord]) -> dict:
    per_s = _per_s_rows(config, records)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "run_id": config.run_id,
        "kind": config.kind,
        "d": config.dimension,
        "alpha": config.alpha,
        "s_grid": list(config.s_grid),
        "replications": config.replications,
        "master_seed": config.master_seed,
        "per_s": per_s,
        "diagnostics": {
            "records": len(records),
            "total_elapsed_ms": int(sum(r.elapsed_ms for r in records)),
        },
    }
    power = max(0, config.dimension - 2)

    if config.kind == MEAN_SWEEP:
        fit = _fit_against_log_power(
            [row["s"] for row in per_s], [row["mean"] for row in per_s], power
        )
        d = config.dimension
        fit["expected_slope"] = (
            d / (config.alpha * math.factorial(d - 2)) if d >= 2 else None
        )
        summary["mean_fit"] = fit

    elif config.kind == VARIANCE_SWEEP:
        usable = [row for row in per_s if row["variance"] is not None]
        fit = _fit_against_log_power(
            [row["s"] for row in usable], [row["variance"] for row in usable], power
        )
        summary["variance_fit"] = fit

    elif config.kind == CLT_CONVERGENCE:
        floor = DKW_COEFFICIENT / math.sqrt(config.replications)
        distances = []
        for s in config.s_grid:
            vals = np.array([r.statistic_value for r in records if r.s == s])
            rep = distance_report(vals)
            distances.append(
                {
                    "s": s,
                    "kolmogorov": rep.kolmogorov,
                    "wasserstein1": rep.wasserstein1,
                    "noise_floor": rep.noise_floor,
                }
            )
        masked = [(d["s"], d["kolmogorov"]) for d in distances if d["kolmogorov"] >= 3.0 * floor]
        relaxed = False
        if len(masked) < 2:
            masked = [(d["s"], d["kolmogorov"]) for d in distances if d["kolmogorov"] >= floor]
            relaxed = True
        regression = None
        if len(masked) >= 2:
            fit = rate_regression(masked)
            regression = {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "residual_rms": fit.residual_rms,
                "points_used": fit.points_used,
                "mask_relaxed": relaxed,
            }
        summary["clt"] = {
            "distances": distances,
            "final_kolmogorov": distances[-1]["kolmogorov"],
            "noise_floor": floor,
            "rate_regression": regression,
        }

    elif config.kind == DICKMAN_COMPARE:
        from .empirics import two_sample_ks

        s = config.s_grid[-1]
        vals = np.array([r.statistic_value for r in records if r.s == s])
        comparator = dickman_comparator(
            config.alpha,
            vals.shape[0],
            derive_seed(config.master_seed, 515),
            config.dickman_threshold,
        )
        summary["dickman"] = {
            "s": s,
            "ks_distance": float(two_sample_ks(vals, comparator)),
            "statistic_mean": float(vals.mean()),
            "statistic_variance": float(vals.var(ddof=1)) if vals.shape[0] > 1 else None,
            "comparator_mean": float(comparator.mean()),
            "comparator_variance": float(comparator.var(ddof=1)),
            "truncation_threshold": config.dickman_threshold,
        }
    return summary


def dickman_comparator(
    alpha: float, count: int, seed: int, threshold: float = 1e-12
) -> np.ndarray:
    """Limit-law comparator for the d=2 rooted statistic.

    The minimal points hug the two axes, and along each axis the alpha-powered
    projections form a multiplicative cascade with uniform^alpha factors. The
    limit is therefore the sum of two independent such cascades (each with
    mean 1/alpha and variance 1/(2 alpha)), not a single one.
    """
    a = dickman_cascade(count, derive_seed(seed, 1), threshold, factor_power=float(alpha))
    b = dickman_cascade(count, derive_seed(seed, 2), threshold, factor_power=float(alpha))
    return a + b
