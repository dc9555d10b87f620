"""CSV formats for per-run metrics and suite summaries."""

from __future__ import annotations

import csv
from pathlib import Path

from .suite import SuiteResult
from .train import TrainLog

METRICS_HEADER = ["epoch", "split", "exact_match", "mean_loss", "seconds", "seed"]
SUITE_HEADER = ["model", "world", "split", "epoch", "mean", "ci95_halfwidth", "n_seeds"]


def write_metrics_csv(log: TrainLog, path: str | Path) -> Path:
    """One row per (epoch, split) plus a train_loss pseudo-split row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRICS_HEADER)
        for i, epoch in enumerate(log.epochs):
            writer.writerow(
                [epoch, "train_loss", "", repr(log.train_loss[i]),
                 f"{log.seconds[i]:.3f}", log.seed]
            )
            for split, history in log.exact_match.items():
                writer.writerow(
                    [epoch, split, repr(history[i]), "", f"{log.seconds[i]:.3f}", log.seed]
                )
    return path


def read_metrics_csv(path: str | Path) -> TrainLog:
    log = TrainLog(seed=0)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != METRICS_HEADER:
            raise ValueError(f"unexpected metrics header {reader.fieldnames}")
        for row in reader:
            epoch = int(row["epoch"])
            log.seed = int(row["seed"])
            if row["split"] == "train_loss":
                log.epochs.append(epoch)
                log.train_loss.append(float(row["mean_loss"]))
                log.seconds.append(float(row["seconds"]))
            else:
                log.exact_match.setdefault(row["split"], []).append(
                    float(row["exact_match"])
                )
    return log


def write_suite_csv(result: SuiteResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUITE_HEADER)
        for cell in result.cells():
            writer.writerow(
                [
                    cell.model, cell.world, cell.split, cell.epoch,
                    repr(result.mean[cell]), repr(result.halfwidth[cell]),
                    result.n_seeds[(cell.model, cell.world)],
                ]
            )
    return path
