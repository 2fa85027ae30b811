"""Splits, the training loop and the experiment protocols."""

from .splits import SplitKind, SplitProtocol, SplitSpec, make_split
from .trainer import (
    DROPOUT_GRID,
    K_GRID,
    WEIGHT_DECAY_GRID,
    EarlyStopping,
    RunEntry,
    TrainConfig,
    train,
)
from .report import RunReport, sample_std
from .experiments import (
    GRID_FIELDS,
    SWEEP_FIELDS,
    GridResult,
    default_protocol,
    depth_sweep,
    grid_search,
    multi_run,
    train_size_sweep,
)

__all__ = [
    "SplitKind",
    "SplitProtocol",
    "SplitSpec",
    "make_split",
    "DROPOUT_GRID",
    "K_GRID",
    "WEIGHT_DECAY_GRID",
    "EarlyStopping",
    "RunEntry",
    "TrainConfig",
    "train",
    "RunReport",
    "sample_std",
    "GRID_FIELDS",
    "SWEEP_FIELDS",
    "GridResult",
    "default_protocol",
    "depth_sweep",
    "grid_search",
    "multi_run",
    "train_size_sweep",
]
