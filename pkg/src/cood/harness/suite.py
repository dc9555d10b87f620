"""Multi-seed suite runs aggregated into confidence-banded curves.

Each (model, world) cell is trained once per seed; per (split, epoch) the
suite reports the across-seed mean exact match and a 95% Student-t
confidence half-width (0 by convention for a single seed).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ..gridworld import Dataset
from ..models import ModelKind, build_model, preset_config
from .train import TrainConfig, TrainLog, train

CONFIDENCE = 0.95


def ci95_halfwidth(values: np.ndarray) -> float:
    """Student-t 95% half-width over independent run values."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n < 2:
        return 0.0
    s = values.std(ddof=1)
    if s == 0.0:
        return 0.0
    t = stats.t.ppf(0.5 + CONFIDENCE / 2.0, df=n - 1)
    return float(t * s / np.sqrt(n))


@dataclass(frozen=True)
class SuiteCell:
    model: str
    world: str
    split: str
    epoch: int


@dataclass
class SuiteResult:
    n_seeds: dict[tuple[str, str], int] = field(default_factory=dict)
    mean: dict[SuiteCell, float] = field(default_factory=dict)
    halfwidth: dict[SuiteCell, float] = field(default_factory=dict)
    runs: dict[tuple[str, str], list[TrainLog]] = field(default_factory=dict)

    def add_runs(self, model: str, world: str, logs: list[TrainLog]) -> None:
        self.runs[(model, world)] = logs
        self.n_seeds[(model, world)] = len(logs)
        splits = logs[0].exact_match.keys()
        epochs = logs[0].epochs
        for log in logs:
            if log.epochs != epochs:
                raise ValueError("runs of one cell must share an epoch range")
        for split in splits:
            for i, epoch in enumerate(epochs):
                values = np.array([log.exact_match[split][i] for log in logs])
                cell = SuiteCell(model=model, world=world, split=split, epoch=epoch)
                self.mean[cell] = float(values.mean())
                self.halfwidth[cell] = ci95_halfwidth(values)

    def cells(self) -> list[SuiteCell]:
        return sorted(
            self.mean,
            key=lambda c: (c.model, c.world, c.split, c.epoch),
        )


def run_one_seed(kind: ModelKind, preset: str, dataset: Dataset, epochs: int,
                 batch_size: int, seed: int,
                 eval_splits: tuple[str, ...]) -> TrainLog:
    cfg = preset_config(kind, preset, grid=dataset.grid)
    model = build_model(cfg, seed=seed)
    tc = TrainConfig(
        epochs=epochs, batch_size=batch_size, seed=seed,
        eval_splits=eval_splits, model_preset=preset,
    )
    log, _ = train(model, dataset, tc)
    return log


def _worker(args) -> tuple[str, str, TrainLog]:
    kind_value, preset, dataset, world, epochs, batch, seed, eval_splits = args
    log = run_one_seed(
        ModelKind(kind_value), preset, dataset, epochs, batch, seed, eval_splits
    )
    return kind_value, world, log


def suite_workers() -> int:
    raw = os.environ.get("COOD_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_suite(
    kinds: list[ModelKind],
    datasets: dict[str, Dataset],
    n_seeds: int,
    epochs: int,
    preset: str = "desk",
    batch_size: int = 64,
    eval_splits: tuple[str, ...] = ("test_d0", "test_d1", "test_d2"),
) -> SuiteResult:
    """Train kinds x worlds x seeds and aggregate into a SuiteResult.

    Seed runs are independent; COOD_THREADS > 1 fans them out across
    processes without changing any result.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    jobs = [
        (kind.value, preset, dataset, world, epochs, batch_size, seed, eval_splits)
        for kind in kinds
        for world, dataset in datasets.items()
        for seed in range(n_seeds)
    ]
    by_cell: dict[tuple[str, str], list[TrainLog]] = {}
    workers = suite_workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(job) for job in jobs]
    for kind_value, world, log in results:
        by_cell.setdefault((kind_value, world), []).append(log)
    out = SuiteResult()
    for (kind_value, world), logs in by_cell.items():
        logs.sort(key=lambda log: log.seed)
        out.add_runs(kind_value, world, logs)
    return out
