"""Train/validation/test splits.

Two random protocols are supported:
    citation   train_per_class per class, 500 validation, 1000 test
    per_class  train_per_class per class, 30 per class validation, rest test
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..data import FixedSplit
from ..errors import ConfigError, DatasetError


class SplitKind(str, Enum):
    FIXED = "fixed"
    RANDOM = "random"


class SplitProtocol(str, Enum):
    CITATION = "citation"
    PER_CLASS = "per_class"


@dataclass(frozen=True)
class SplitSpec:
    kind: SplitKind = SplitKind.FIXED
    seed: int = 0
    train_per_class: int = 20
    protocol: SplitProtocol = SplitProtocol.CITATION
    val_size: int = 500
    test_size: Optional[int] = 1000  # None means every remaining node
    val_per_class: int = 30

    @classmethod
    def fixed(cls) -> "SplitSpec":
        return cls(kind=SplitKind.FIXED)

    @classmethod
    def random(
        cls,
        seed: int,
        train_per_class: int = 20,
        protocol: SplitProtocol | str = SplitProtocol.CITATION,
    ) -> "SplitSpec":
        protocol = SplitProtocol(protocol)
        if protocol == SplitProtocol.PER_CLASS:
            return cls(kind=SplitKind.RANDOM, seed=seed, train_per_class=train_per_class,
                       protocol=protocol, test_size=None)
        return cls(kind=SplitKind.RANDOM, seed=seed, train_per_class=train_per_class,
                   protocol=protocol)


def make_split(
    labels: np.ndarray,
    spec: SplitSpec,
    num_classes: Optional[int] = None,
    fixed: Optional[FixedSplit] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Produce disjoint (train, val, test) node id arrays, each sorted.

    Args:
        labels: class id per node
        spec: split description
        num_classes: class count (defaults to labels.max() + 1)
        fixed: the dataset's fixed split, required for the fixed kind

    Raises:
        ConfigError: fixed kind without a fixed split, or train_per_class < 1
        DatasetError: a class has too few nodes, or too few nodes remain
            for the validation and test sets
    """
    labels = np.asarray(labels, dtype=np.int64)
    if spec.kind == SplitKind.FIXED:
        if fixed is None:
            raise ConfigError("fixed split requested but the dataset has no train/val/test files")
        return (np.sort(fixed.train), np.sort(fixed.val), np.sort(fixed.test))

    if spec.train_per_class < 1:
        raise ConfigError(f"train_per_class must be at least 1, got {spec.train_per_class}")
    c = int(num_classes if num_classes is not None else labels.max() + 1)
    per_class_val = spec.protocol == SplitProtocol.PER_CLASS
    needed = spec.train_per_class + (spec.val_per_class if per_class_val else 0)

    rng = np.random.default_rng(spec.seed)
    train, val = [], []
    for cls_id in range(c):
        members = np.flatnonzero(labels == cls_id)
        if len(members) < needed:
            raise DatasetError(f"class {cls_id} has {len(members)} nodes, the split needs {needed}")
        shuffled = rng.permutation(members)
        train.append(shuffled[:spec.train_per_class])
        if per_class_val:
            val.append(shuffled[spec.train_per_class:needed])

    train_ids = np.concatenate(train)
    taken = np.zeros(len(labels), dtype=bool)
    taken[train_ids] = True

    if per_class_val:
        val_ids = np.concatenate(val)
        taken[val_ids] = True
        rest = rng.permutation(np.flatnonzero(~taken))
    else:
        rest = rng.permutation(np.flatnonzero(~taken))
        if len(rest) < spec.val_size:
            raise DatasetError(f"only {len(rest)} nodes left for a validation set of {spec.val_size}")
        val_ids, rest = rest[:spec.val_size], rest[spec.val_size:]

    if spec.test_size is None:
        test_ids = rest
    else:
        if len(rest) < spec.test_size:
            raise DatasetError(f"only {len(rest)} nodes left for a test set of {spec.test_size}")
        test_ids = rest[:spec.test_size]

    return np.sort(train_ids), np.sort(val_ids), np.sort(test_ids)
