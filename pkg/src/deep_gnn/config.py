"""Configuration defaults for experiments."""

import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class ExperimentConfig:
    """Defaults shared by the CLI and scripts. CLI flags override them."""

    # Data
    dataset_root: str = "data/datasets"
    normalize_features: bool = True

    # Reproducibility
    seed: int = 0
    threads: int = 1

    # Optimization
    lr: float = 0.01
    weight_decay: float = 5e-3
    dropout: float = 0.8
    hidden: int = 64
    max_epochs: int = 1500
    patience: int = 100

    # Propagation depth for decoupled models
    k: int = 10

    # Largest n for which SMV is computed over all pairs
    smoothness_exact_limit: int = 5000

    @classmethod
    def from_env(cls) -> "ExperimentConfig":
        """Load configuration from environment variables."""
        return cls(
            dataset_root=os.getenv("DEEP_GNN_DATASET_ROOT", "data/datasets"),
            normalize_features=_env_bool("DEEP_GNN_NORMALIZE_FEATURES", "true"),
            seed=int(os.getenv("DEEP_GNN_SEED", "0")),
            threads=int(os.getenv("DEEP_GNN_THREADS", "1")),
            lr=float(os.getenv("DEEP_GNN_LR", "0.01")),
            weight_decay=float(os.getenv("DEEP_GNN_WEIGHT_DECAY", "5e-3")),
            dropout=float(os.getenv("DEEP_GNN_DROPOUT", "0.8")),
            hidden=int(os.getenv("DEEP_GNN_HIDDEN", "64")),
            max_epochs=int(os.getenv("DEEP_GNN_MAX_EPOCHS", "1500")),
            patience=int(os.getenv("DEEP_GNN_PATIENCE", "100")),
            k=int(os.getenv("DEEP_GNN_K", "10")),
            smoothness_exact_limit=int(os.getenv("DEEP_GNN_SMOOTHNESS_EXACT_LIMIT", "5000")),
        )


def get_config() -> ExperimentConfig:
    """Get the current configuration."""
    return ExperimentConfig.from_env()
