"""Dataset loading, export and reference statistics."""

from .loader import (
    DatasetBundle,
    FixedSplit,
    largest_connected_component,
    load_dataset,
    write_dataset,
)
from .export import export_csv, export_embeddings, read_embeddings, write_csv
from .stats import (
    KNOWN_DATASETS,
    DatasetStatistics,
    KnownDataset,
    check_known_statistics,
    dataset_statistics,
    lookup_known,
    resolve_dataset,
)

__all__ = [
    "DatasetBundle",
    "FixedSplit",
    "largest_connected_component",
    "load_dataset",
    "write_dataset",
    "export_csv",
    "export_embeddings",
    "read_embeddings",
    "write_csv",
    "KNOWN_DATASETS",
    "DatasetStatistics",
    "KnownDataset",
    "check_known_statistics",
    "dataset_statistics",
    "lookup_known",
    "resolve_dataset",
]
