"""Random datasets and the four-algorithm benchmark."""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .encoder import SolverError, SolverTimeout, make_backend
from .formula import print_formula
from .inference import (
    InferenceParams,
    StopReason,
    check_separable,
    classification_rate,
    dataset_separable,
    sample_dataset,
    tli_rs,
    tli_rs_dt,
    tli_ua,
    tli_ua_dt,
    tree_to_formula,
)
from .model import IntervalTrajectory, Label, LabeledDataset
from .objective import objective_dataset

log = logging.getLogger(__name__)

ALGORITHMS = ("TLI-UA", "TLI-UA-DT", "TLI-RS", "TLI-RS-DT")
SEPARABLE, NON_SEPARABLE = "separable", "non-separable"


class GenerationError(RuntimeError):
    pass


@dataclass
class GenConfig:
    kind: str = SEPARABLE
    dims: int = 2
    per_class: int = 3
    length: int = 10
    seed: int = 0
    low: float = 0.0  # box corners are drawn in [low, high]
    high: float = 10.0
    max_width: float = 3.0
    max_tries: int = 100

    def __post_init__(self):
        if self.kind not in (SEPARABLE, NON_SEPARABLE):
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if not 1 <= self.dims <= 2:
            raise ValueError("dims must be 1 or 2")
        if not 1 <= self.per_class <= 3:
            raise ValueError("entries per class must be between 1 and 3")
        if not 1 <= self.length <= 10:
            raise ValueError("length must be between 1 and 10")


def _boxes(rng, cfg: GenConfig, count: int):
    lo = rng.uniform(cfg.low, cfg.high, size=(count, cfg.length, cfg.dims))
    return lo, lo + rng.uniform(0.0, cfg.max_width, size=lo.shape)


def _separable(rng, cfg: GenConfig):
    """Random boxes, except at one planted (timestep, dimension) where the classes are apart."""
    lo, hi = _boxes(rng, cfg, 2 * cfg.per_class)
    j, k = rng.integers(cfg.length), rng.integers(cfg.dims)
    cut = rng.uniform(cfg.low + cfg.max_width, cfg.high - cfg.max_width)
    gap = rng.uniform(0.5, 2.0)
    widths = hi[:, j, k] - lo[:, j, k]
    up = rng.random() < 0.5
    for e in range(2 * cfg.per_class):
        above = (e < cfg.per_class) == up
        start = cut + gap / 2 + rng.uniform(0, 1) if above else cut - gap / 2 - rng.uniform(0, 1) - widths[e]
        lo[e, j, k], hi[e, j, k] = start, start + widths[e]
    return lo, hi


def _non_separable(rng, cfg: GenConfig):
    """Random boxes where the first +1 and first -1 entries meet at every coordinate."""
    lo, hi = _boxes(rng, cfg, 2 * cfg.per_class)
    p, q = 0, cfg.per_class
    # the -1 box straddles the lower corner of the +1 box
    lo[q] = lo[p] - rng.uniform(0, cfg.max_width / 2, size=lo[p].shape)
    hi[q] = lo[p] + rng.uniform(0, cfg.max_width / 2, size=lo[p].shape)
    return lo, hi


def gen_dataset(cfg: GenConfig | None = None, **kwargs) -> LabeledDataset:
    """Random labeled interval trajectories of the requested kind, validated after drawing."""
    cfg = replace(cfg, **kwargs) if cfg else GenConfig(**kwargs)
    rng = np.random.default_rng(cfg.seed)
    draw = _separable if cfg.kind == SEPARABLE else _non_separable
    for _ in range(cfg.max_tries):
        lo, hi = draw(rng, cfg)
        labels = [Label.POS] * cfg.per_class + [Label.NEG] * cfg.per_class
        data = LabeledDataset([(IntervalTrajectory(a, b), lab) for a, b, lab in zip(lo, hi, labels)])
        if cfg.kind == SEPARABLE and dataset_separable(data):
            return data
        if cfg.kind == NON_SEPARABLE and check_separable(data[0][0], data[cfg.per_class][0]) is None:
            return data
    raise GenerationError(f"no valid {cfg.kind} dataset after {cfg.max_tries} draws")


def default_suite(seed: int = 0, **kwargs) -> list[tuple[str, LabeledDataset]]:
    """Five separable and five non-separable datasets."""
    out = []
    for i in range(10):
        kind = SEPARABLE if i < 5 else NON_SEPARABLE
        out.append((f"{kind}-{i % 5}", gen_dataset(kind=kind, seed=seed * 1000 + i, **kwargs)))
    return out


# -- benchmark ------------------------------------------------------------------

@dataclass
class BenchResult:
    algorithm: str
    dataset: str
    seconds: float
    formula: str
    value: float  # F for the uncertainty-aware runs, s for the sampling runs
    stop: str
    error: str | None = None

    def __post_init__(self):
        if self.seconds < 0:
            raise ValueError("negative wall time")


@dataclass
class BenchConfig:
    params: InferenceParams = field(default_factory=InferenceParams)
    algorithms: tuple = ALGORITHMS
    solver: str = "internal"
    solver_cmd: str | None = None
    workers: int = 1


def _tree_stop(trace: list) -> StopReason | None:
    return StopReason.TIMEOUT if any(r.timed_out for r in trace) else None


def run_one(algorithm: str, name: str, data: LabeledDataset, cfg: BenchConfig) -> BenchResult:
    """One algorithm on one dataset; solver failures become an ``error`` entry."""
    params = cfg.params
    backend = make_backend(cfg.solver, cfg.solver_cmd)
    sample = None
    if algorithm.startswith("TLI-RS"):
        sample = sample_dataset(data, params.samples_per_interval, params.seed)
    start = time.monotonic()
    try:
        if algorithm == "TLI-UA":
            res = tli_ua(data, params, backend)
            secs = time.monotonic() - start
            return BenchResult(algorithm, name, secs, res.formula_text, res.value, res.stop.value)
        if algorithm == "TLI-RS":
            res = tli_rs(sample, params, backend)
            secs = time.monotonic() - start
            return BenchResult(algorithm, name, secs, res.formula_text, res.value, res.stop.value)
        trace: list = []
        if algorithm == "TLI-UA-DT":
            tree = tli_ua_dt(data, params, backend, trace=trace)
            secs = time.monotonic() - start
            phi = tree_to_formula(tree)
            value = objective_dataset(data, phi)
            done = value >= params.min_robustness
        elif algorithm == "TLI-RS-DT":
            tree = tli_rs_dt(sample, params, backend, trace=trace)
            secs = time.monotonic() - start
            phi = tree_to_formula(tree)
            value = classification_rate(sample, phi)
            done = value >= params.min_classification
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        stop = _tree_stop(trace) or (StopReason.MARGIN if done else StopReason.SIZE_CAP)
        return BenchResult(algorithm, name, secs, print_formula(phi), value, stop.value)
    except SolverTimeout as exc:
        secs = time.monotonic() - start
        partial = exc.partial.formula if exc.partial is not None and exc.partial.formula is not None else None
        text = print_formula(partial) if partial is not None else ""
        return BenchResult(algorithm, name, secs, text, math.nan, StopReason.TIMEOUT.value, str(exc))
    except (SolverError, ValueError) as exc:
        return BenchResult(algorithm, name, time.monotonic() - start, "", math.nan, "error", f"{type(exc).__name__}: {exc}")


def run_bench(datasets: list[tuple[str, LabeledDataset]], cfg: BenchConfig | None = None) -> list[BenchResult]:
    """Every configured algorithm on every dataset, in dataset-major order."""
    cfg = cfg or BenchConfig()
    jobs = [(alg, name, data) for name, data in datasets for alg in cfg.algorithms]
    if cfg.workers <= 1:
        out = []
        for alg, name, data in jobs:
            r = run_one(alg, name, data, cfg)
            log.info("%s %s %.3fs %s", name, alg, r.seconds, r.formula)
            out.append(r)
        return out
    with ProcessPoolExecutor(cfg.workers) as pool:
        futures = [pool.submit(run_one, alg, name, data, cfg) for alg, name, data in jobs]
        return [f.result() for f in futures]


def write_results(results: list[BenchResult], out_dir: str | Path) -> dict[str, Path]:
    """``results.json``, ``results.csv`` and the ``times.tsv`` plot data."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [asdict(r) for r in results]
    paths = {"json": out / "results.json", "csv": out / "results.csv", "tsv": out / "times.tsv"}
    with open(paths["json"], "w") as fh:
        json.dump(rows, fh, indent=1, default=str)
    with open(paths["csv"], "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else [f.name for f in BenchResult.__dataclass_fields__.values()])
        w.writeheader()
        w.writerows(rows)
    with open(paths["tsv"], "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(["dataset", "algorithm", "seconds"])
        for r in results:
            w.writerow([r.dataset, r.algorithm, f"{r.seconds:.6f}"])
    return paths


def summary_table(results: list[BenchResult]) -> str:
    """Plain-text table, one row per run."""
    head = f"{'dataset':<16} {'algorithm':<10} {'seconds':>9} {'value':>9}  {'stop':<14} formula"
    lines = [head, "-" * len(head)]
    for r in results:
        lines.append(f"{r.dataset:<16} {r.algorithm:<10} {r.seconds:>9.3f} {r.value:>9.4g}  {r.stop:<14} {r.formula}")
    return "\n".join(lines)
