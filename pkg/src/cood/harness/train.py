"""Training loop and exact-match evaluation.

A run is a pure function of (model seed, shuffle seed, dataset): mini-batch
Adam on the per-pixel cross entropy, one evaluation pass per epoch over the
configured splits, and the best test_d0 checkpoint retained in memory.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .. import nn
from ..gridworld import Dataset, Sample
from ..models import Model, predict_batch

EVAL_BATCH = 96
DEFAULT_EVAL_SPLITS = ("train", "test_d0", "test_d1", "test_d2")


class TrainingDiverged(RuntimeError):
    """Non-finite loss encountered; training aborts with context."""


@dataclass
class TrainConfig:
    epochs: int
    batch_size: int = 64
    seed: int = 0
    eval_splits: tuple[str, ...] = DEFAULT_EVAL_SPLITS
    lr: float = nn.DEFAULT_LR
    # Provenance carried into manifests and CSV logs.
    model_preset: str = ""
    dataset_path: str = ""

    def validate(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")


@dataclass
class TrainLog:
    seed: int
    epochs: list[int] = field(default_factory=list)
    train_loss: list[float] = field(default_factory=list)
    exact_match: dict[str, list[float]] = field(default_factory=dict)
    seconds: list[float] = field(default_factory=list)

    def best_epoch(self, split: str = "test_d0") -> int:
        """1-based epoch with the highest exact match on a split."""
        history = self.exact_match[split]
        return int(np.argmax(history)) + 1

    def final(self, split: str) -> float:
        return self.exact_match[split][-1]

    def best(self, split: str) -> float:
        return max(self.exact_match[split])


def split_arrays(samples: list[Sample]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    inputs = np.stack([s.input for s in samples])
    actions = np.array([s.action for s in samples], dtype=np.int64)
    targets = np.stack([s.target for s in samples])
    return inputs, actions, targets


def evaluate_exact_match(model: Model, samples: list[Sample],
                         batch: int = EVAL_BATCH) -> float:
    """Fraction of samples whose prediction matches the target on every pixel.

    Iterates in file order; evaluation never mutates the model.
    """
    if not samples:
        raise ValueError("cannot evaluate an empty split")
    inputs, actions, targets = split_arrays(samples)
    hits = 0
    for lo in range(0, len(samples), batch):
        pred = predict_batch(model, inputs[lo:lo + batch], actions[lo:lo + batch])
        want = targets[lo:lo + batch]
        hits += int((pred == want).all(axis=(1, 2)).sum())
    return hits / len(samples)


def train(model: Model, dataset: Dataset, config: TrainConfig) -> tuple[TrainLog, dict]:
    """Train and evaluate per epoch; returns (log, best-d0 weight blob)."""
    config.validate()
    if dataset.grid != model.grid:
        raise ValueError(
            f"dataset grid {dataset.grid} does not match model grid {model.grid}"
        )
    inputs, actions, targets = split_arrays(dataset.splits["train"])
    n = len(inputs)
    opt = nn.Adam(model.store, lr=config.lr)
    shuffle_rng = np.random.default_rng([config.seed, 0xC00D])
    log = TrainLog(seed=config.seed)
    for split in config.eval_splits:
        log.exact_match[split] = []
    best_blob = model.store.clone_data()
    best_d0 = -1.0

    for epoch in range(1, config.epochs + 1):
        t0 = time.time()
        model.set_training(True)
        order = shuffle_rng.permutation(n)
        losses = []
        for lo in range(0, n, config.batch_size):
            idx = order[lo:lo + config.batch_size]
            opt.zero_grad()
            loss = model.loss_batch(inputs[idx], actions[idx], targets[idx])
            value = loss.item()
            if not np.isfinite(value):
                raise TrainingDiverged(
                    f"non-finite loss {value} at epoch {epoch}, step {lo // config.batch_size}"
                )
            loss.backward()
            opt.step()
            losses.append(value)
        model.set_training(False)

        log.epochs.append(epoch)
        log.train_loss.append(float(np.mean(losses)))
        for split in config.eval_splits:
            frac = evaluate_exact_match(model, dataset.splits[split])
            log.exact_match[split].append(frac)
        log.seconds.append(time.time() - t0)

        d0 = log.exact_match.get("test_d0", [None])[-1]
        if d0 is not None and d0 > best_d0:
            best_d0 = d0
            best_blob = model.store.clone_data()

    return log, best_blob
