"""Training, evaluation and multi-seed aggregation."""

from .train import (
    DEFAULT_EVAL_SPLITS,
    TrainConfig,
    TrainingDiverged,
    TrainLog,
    evaluate_exact_match,
    split_arrays,
    train,
)
from .suite import (
    SuiteCell,
    SuiteResult,
    ci95_halfwidth,
    run_one_seed,
    run_suite,
    suite_workers,
)
from .csvio import (
    METRICS_HEADER,
    SUITE_HEADER,
    read_metrics_csv,
    write_metrics_csv,
    write_suite_csv,
)

__all__ = [
    "DEFAULT_EVAL_SPLITS", "TrainConfig", "TrainingDiverged", "TrainLog",
    "evaluate_exact_match", "split_arrays", "train",
    "SuiteCell", "SuiteResult", "ci95_halfwidth", "run_one_seed", "run_suite",
    "suite_workers",
    "METRICS_HEADER", "SUITE_HEADER", "read_metrics_csv", "write_metrics_csv",
    "write_suite_csv",
]
