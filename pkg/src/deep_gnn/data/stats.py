"""Published statistics of the benchmark datasets and dataset lookup."""

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from ..errors import DatasetError
from ..graph import edge_density
from .loader import DatasetBundle


@dataclass(frozen=True)
class KnownDataset:
    """Reference statistics and the split protocol used for one benchmark."""

    name: str
    classes: int
    nodes: int
    edges: int
    density: float
    features: int
    protocol: str  # "citation" or "coauthor_copurchase"
    largest_component_only: bool = False


KNOWN_DATASETS: dict[str, KnownDataset] = {
    ds.name.lower().replace(" ", ""): ds
    for ds in (
        KnownDataset("Cora", 7, 2708, 5278, 0.0014, 1433, "citation"),
        KnownDataset("CiteSeer", 6, 3327, 4552, 0.0008, 3703, "citation"),
        KnownDataset("PubMed", 3, 19717, 44324, 0.0002, 500, "citation"),
        KnownDataset("Coauthor CS", 15, 18333, 81894, 0.0005, 6805, "coauthor_copurchase"),
        KnownDataset("Coauthor Physics", 5, 34493, 247962, 0.0004, 8415, "coauthor_copurchase"),
        KnownDataset("Amazon Computers", 10, 13381, 245778, 0.0027, 767, "coauthor_copurchase", True),
        KnownDataset("Amazon Photo", 8, 7487, 119043, 0.0042, 745, "coauthor_copurchase", True),
    )
}


def _key(name: str) -> str:
    return name.lower().replace(" ", "").replace("_", "").replace("-", "")


def lookup_known(name: str) -> Optional[KnownDataset]:
    """Find reference statistics by name, ignoring case, spaces, '-' and '_'."""
    return KNOWN_DATASETS.get(_key(name))


@dataclass
class DatasetStatistics:
    name: str
    n: int
    m: int
    c: int
    d: int
    edge_density: float
    has_fixed_split: bool

    def to_dict(self) -> dict:
        return asdict(self)


def dataset_statistics(bundle: DatasetBundle) -> DatasetStatistics:
    return DatasetStatistics(
        name=bundle.name,
        n=bundle.n,
        m=bundle.graph.m,
        c=bundle.num_classes,
        d=bundle.d,
        edge_density=edge_density(bundle.graph),
        has_fixed_split=bundle.fixed_split is not None,
    )


def check_known_statistics(bundle: DatasetBundle) -> list[str]:
    """
    Compare a bundle with the published row of the same name.

    Returns:
        one message per mismatching field; empty when the bundle matches
        or the name is not a known benchmark
    """
    known = lookup_known(bundle.name)
    if known is None:
        return []
    stats = dataset_statistics(bundle)
    expected = {"n": known.nodes, "m": known.edges, "c": known.classes, "d": known.features}
    return [
        f"{field}: expected {value}, found {getattr(stats, field)}"
        for field, value in expected.items()
        if getattr(stats, field) != value
    ]


def resolve_dataset(name_or_path: str, root: str | Path) -> Path:
    """
    Map a CLI dataset argument to a directory.

    An existing directory is used as is; otherwise the name is looked up
    under `root`, first verbatim and then lowercased.
    """
    direct = Path(name_or_path)
    if direct.is_dir():
        return direct
    root = Path(root)
    for candidate in (root / name_or_path, root / name_or_path.lower()):
        if candidate.is_dir():
            return candidate
    raise DatasetError(
        f"dataset {name_or_path!r} not found as a directory or under {root} "
        f"(set DEEP_GNN_DATASET_ROOT)"
    )
