"""Single training run: Adam, early stopping on validation accuracy, best-epoch restore."""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..data import DatasetBundle
from ..errors import ConfigError, DivergenceError
from ..graph import OperatorKind, PropagationOperator, normalize
from ..models import MODEL_KINDS, build_model
from ..nn import AdamState, KernelStats, accuracy, adam_step, cross_entropy
from ..observability import logger
from ..smoothness import EXACT_LIMIT, smoothness_auto

K_GRID = (5, 10, 20)
WEIGHT_DECAY_GRID = (0.0, 2e-2, 5e-3, 5e-4, 5e-5)
DROPOUT_GRID = (0.5, 0.8)


class TrainConfig(BaseModel):
    """
    Hyperparameters of one training run.

    `depth` is the layer count for gcn and the hop count k for the
    decoupled models. Invalid values raise ConfigError.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: str = "dagnn"
    depth: int = 10
    lr: float = 0.01
    weight_decay: float = 5e-3
    dropout: float = 0.8
    hidden: int = 64
    max_epochs: int = 1500
    patience: int = 100
    seed: int = 0
    operator: OperatorKind = OperatorKind.SYMMETRIC
    grid_mode: bool = False
    smoothness_exact_limit: int = EXACT_LIMIT

    def __init__(self, **data):
        try:
            super().__init__(**data)
        except ValidationError as e:
            problems = []
            for err in e.errors():
                where = ".".join(str(part) for part in err["loc"])
                problems.append(f"{where}: {err['msg']}" if where else err["msg"])
            raise ConfigError("invalid training config: " + "; ".join(problems)) from None

    @field_validator("model")
    @classmethod
    def _known_model(cls, v: str) -> str:
        if v not in MODEL_KINDS:
            raise ValueError(f"unknown model {v!r}, expected one of {MODEL_KINDS}")
        return v

    @field_validator("dropout")
    @classmethod
    def _dropout_range(cls, v: float) -> float:
        if not 0.0 <= v < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {v}")
        return v

    @field_validator("lr")
    @classmethod
    def _positive_lr(cls, v: float) -> float:
        if v <= 0.0:
            raise ValueError(f"lr must be positive, got {v}")
        return v

    @field_validator("weight_decay")
    @classmethod
    def _non_negative_wd(cls, v: float) -> float:
        if v < 0.0:
            raise ValueError(f"weight_decay must be non-negative, got {v}")
        return v

    @field_validator("hidden", "max_epochs", "patience")
    @classmethod
    def _at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @field_validator("smoothness_exact_limit")
    @classmethod
    def _exact_limit_range(cls, v: int) -> int:
        if not 2 <= v <= EXACT_LIMIT:
            raise ValueError(f"smoothness_exact_limit must lie in [2, {EXACT_LIMIT}], got {v}")
        return v

    @model_validator(mode="after")
    def _depth_and_grid(self) -> "TrainConfig":
        if self.model == "dagnn" and self.depth < 1:
            raise ValueError(f"dagnn needs k >= 1, got {self.depth}")
        if self.model in ("gcn", "decoupled") and self.depth < 0:
            raise ValueError(f"{self.model} needs depth >= 0, got {self.depth}")
        if self.grid_mode:
            if self.model in ("decoupled", "dagnn") and self.depth not in K_GRID:
                raise ValueError(f"k={self.depth} is outside the grid {K_GRID}")
            if self.weight_decay not in WEIGHT_DECAY_GRID:
                raise ValueError(f"weight_decay={self.weight_decay} is outside the grid {WEIGHT_DECAY_GRID}")
            if self.dropout not in DROPOUT_GRID:
                raise ValueError(f"dropout={self.dropout} is outside the grid {DROPOUT_GRID}")
        return self

    def with_updates(self, **changes) -> "TrainConfig":
        """Validated copy with some fields replaced."""
        return TrainConfig(**{**self.model_dump(), **changes})


class EarlyStopping:
    """
    Tracks the best validation epoch.

    An epoch improves on the best one if its validation accuracy is higher,
    or equal with a strictly lower validation loss. Equal on both keeps the
    earlier epoch. Training stops after `patience` epochs without improvement.
    """

    def __init__(self, patience: int = 100):
        self.patience = patience
        self.counter = 0
        self.best_acc = -np.inf
        self.best_loss = np.inf
        self.best_epoch = -1

    def step(self, epoch: int, val_acc: float, val_loss: float) -> bool:
        """Record one epoch; returns True if it is the new best."""
        improved = val_acc > self.best_acc or (val_acc == self.best_acc and val_loss < self.best_loss)
        if improved:
            self.best_acc = val_acc
            self.best_loss = val_loss
            self.best_epoch = epoch
            self.counter = 0
        else:
            self.counter += 1
        return improved

    @property
    def should_stop(self) -> bool:
        return self.counter >= self.patience


@dataclass
class RunEntry:
    """Outcome of one training run."""

    seed: int
    test_acc: float
    val_acc: float
    best_epoch: int
    epochs_run: int
    initial_loss: float
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    smv_g: Optional[float] = None
    clamped_probabilities: int = 0
    best_params: Optional[dict[str, np.ndarray]] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop("best_params")
        return data


def train(
    cfg: TrainConfig,
    data: DatasetBundle,
    split: tuple[np.ndarray, np.ndarray, np.ndarray],
    op: Optional[PropagationOperator] = None,
    compute_smoothness: bool = True,
    keep_params: bool = False,
) -> RunEntry:
    """
    Train one model and evaluate it at its best validation epoch.

    The loss is the cross-entropy summed over the training nodes. Loss curves
    hold the dropout-free training and validation losses after each epoch.

    Args:
        cfg: hyperparameters and seed
        data: dataset bundle
        split: (train, val, test) node ids
        op: propagation operator; built from cfg.operator when omitted
        compute_smoothness: also report SMV_G of the final representations
        keep_params: attach the best-epoch tensors to the entry

    Raises:
        DivergenceError: on a non-finite loss or gradient, with the epoch
    """
    train_ids, val_ids, test_ids = (np.asarray(ids, dtype=np.int64) for ids in split)
    if len(train_ids) == 0 or len(val_ids) == 0:
        raise ConfigError("training needs non-empty train and validation sets")
    if op is None:
        op = normalize(data.graph, cfg.operator)

    x, labels = data.features, data.labels
    init_seq, dropout_seq = np.random.SeedSequence(cfg.seed).spawn(2)
    dropout_rng = np.random.default_rng(dropout_seq)

    model = build_model(cfg.model, cfg.depth, cfg.hidden, cfg.dropout)
    params = model.init_params(data.d, data.num_classes, np.random.default_rng(init_seq))
    tensors = params.named_tensors()
    adam = AdamState(lr=cfg.lr, weight_decay=cfg.weight_decay)
    stats = KernelStats()
    stopper = EarlyStopping(cfg.patience)

    try:
        probs, _ = model.forward(params, op, x, training=False)
    except DivergenceError as e:
        raise DivergenceError(f"training diverged at initialization: {e}") from e
    initial_loss = cross_entropy(probs, labels, train_ids, stats)

    best = params.snapshot()
    train_curve: list[float] = []
    val_curve: list[float] = []
    epoch = 0
    for epoch in range(cfg.max_epochs):
        try:
            probs, cache = model.forward(params, op, x, training=True, rng=dropout_rng)
            loss = cross_entropy(probs, labels, train_ids, stats)
            if not np.isfinite(loss):
                raise DivergenceError("non-finite training loss")
            grads = model.backward(params, op, cache, labels, train_ids)
            adam_step(tensors, grads, adam)

            probs, _ = model.forward(params, op, x, training=False)
        except DivergenceError as e:
            raise DivergenceError(f"training diverged at epoch {epoch}: {e}") from e

        train_loss = cross_entropy(probs, labels, train_ids, stats)
        val_loss = cross_entropy(probs, labels, val_ids, stats)
        val_acc = accuracy(probs, labels, val_ids)
        train_curve.append(train_loss)
        val_curve.append(val_loss)
        logger.debug(f"epoch {epoch}: train_loss={train_loss:.4f} val_loss={val_loss:.4f} val_acc={val_acc:.4f}")

        if stopper.step(epoch, val_acc, val_loss):
            best = params.snapshot()
        if stopper.should_stop:
            logger.debug(f"early stop at epoch {epoch}, best epoch {stopper.best_epoch}")
            break

    params.restore(best)
    probs, cache = model.forward(params, op, x, training=False)
    entry = RunEntry(
        seed=cfg.seed,
        test_acc=accuracy(probs, labels, test_ids),
        val_acc=accuracy(probs, labels, val_ids),
        best_epoch=stopper.best_epoch,
        epochs_run=epoch + 1,
        initial_loss=initial_loss,
        train_loss=train_curve,
        val_loss=val_curve,
        clamped_probabilities=stats.clamped_probabilities,
    )
    if compute_smoothness and data.n >= 2:
        entry.smv_g = smoothness_auto(model.representations(cache), seed=cfg.seed,
                                      exact_limit=cfg.smoothness_exact_limit).graph_value
    if keep_params:
        entry.best_params = params.snapshot()
    logger.info(f"{cfg.model}(depth={cfg.depth}) seed={cfg.seed}: test_acc={entry.test_acc:.4f} "
                f"best_epoch={entry.best_epoch}")
    return entry
