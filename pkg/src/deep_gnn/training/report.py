"""Aggregation of repeated runs."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import DataError
from .trainer import RunEntry


def sample_std(values: list[float]) -> float:
    """Sample standard deviation (ddof=1); 0 for a single value."""
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


@dataclass
class RunReport:
    """Per-run entries plus aggregates derived from them."""

    config: dict
    split_mode: str
    entries: list[RunEntry] = field(default_factory=list)

    @property
    def accuracies(self) -> list[float]:
        return [e.test_acc for e in self.entries]

    @property
    def acc_mean(self) -> float:
        return float(np.mean(self.accuracies)) if self.entries else 0.0

    @property
    def acc_std(self) -> float:
        return sample_std(self.accuracies)

    @property
    def val_mean(self) -> float:
        return float(np.mean([e.val_acc for e in self.entries])) if self.entries else 0.0

    @property
    def smv_mean(self) -> Optional[float]:
        values = [e.smv_g for e in self.entries if e.smv_g is not None]
        return float(np.mean(values)) if values else None

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "split_mode": self.split_mode,
            "runs": len(self.entries),
            "acc_mean": self.acc_mean,
            "acc_std": self.acc_std,
            "val_mean": self.val_mean,
            "smv_g_mean": self.smv_mean,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path: str | Path):
        """Save the report as JSON."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.to_json(), encoding="utf-8")
        except OSError as e:
            raise DataError(f"cannot write report {path}: {e}")
