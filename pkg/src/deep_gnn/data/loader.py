"""Dataset directories: loading, validation, writing and component filtering.

Directory layout:
    edges.txt      "i j" per line, '#' comments allowed
    features.csv   n rows of d comma-separated doubles
    labels.txt     one class id per line
    train.txt, val.txt, test.txt   optional fixed split, one node id per line
    meta.json      {"name": ..., "n": ..., "m": ..., "c": ..., "d": ...}; only name required
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import DatasetError, GraphError
from ..graph import Graph, build_graph, connected_components, induced_subgraph, read_edge_list
from ..observability import logger

SPLIT_FILES = ("train.txt", "val.txt", "test.txt")


@dataclass(frozen=True, eq=False)
class FixedSplit:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


@dataclass(frozen=True, eq=False)
class DatasetBundle:
    """Graph, features, labels and an optional fixed split. Immutable after load."""

    name: str
    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    num_classes: int
    fixed_split: Optional[FixedSplit] = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.features.shape[1]


def _read_ids(path: Path) -> np.ndarray:
    return np.loadtxt(path, dtype=np.int64, ndmin=1, comments="#")


def load_dataset(path: str | Path, normalize_features: bool = False) -> DatasetBundle:
    """
    Load and validate a dataset directory.

    Args:
        path: dataset directory
        normalize_features: scale each feature row to sum to 1 (zero rows stay zero)

    Raises:
        DatasetError: on missing files, count mismatches against meta.json,
            bad label ids, empty classes or an inconsistent split
        GraphError: on malformed or out-of-range edges
    """
    root = Path(path)
    if not root.is_dir():
        raise DatasetError(f"dataset directory not found: {root}")

    meta = {}
    meta_path = root / "meta.json"
    if meta_path.exists():
        with open(meta_path, "r", encoding="utf-8") as f:
            meta = json.load(f)
        if "name" not in meta:
            raise DatasetError(f"{meta_path}: missing required key 'name'")
    name = meta.get("name", root.name)

    try:
        labels = np.loadtxt(root / "labels.txt", dtype=np.int64, ndmin=1, comments="#")
        features = np.loadtxt(root / "features.csv", dtype=np.float64, delimiter=",", ndmin=2)
        edges = read_edge_list(root / "edges.txt")
    except (OSError, ValueError) as e:
        raise DatasetError(f"cannot read dataset {root}: {e}")

    n = len(labels)
    if n == 0:
        raise DatasetError(f"{name}: labels.txt holds no nodes")
    if features.shape[0] != n:
        raise DatasetError(f"{name}: features.csv has {features.shape[0]} rows, labels.txt has {n}")
    try:
        graph = build_graph(edges, n)
    except GraphError as e:
        raise GraphError(f"{name}: {e}")

    if labels.min() < 0:
        raise DatasetError(f"{name}: negative label id {int(labels.min())}")
    num_classes = int(labels.max()) + 1

    observed = {"n": n, "m": graph.m, "c": num_classes, "d": features.shape[1]}
    mismatched = [
        f"{key} (meta.json {meta[key]}, found {value})"
        for key, value in observed.items()
        if key in meta and int(meta[key]) != value
    ]
    if mismatched:
        raise DatasetError(f"{name}: statistics mismatch: " + ", ".join(mismatched))

    empty = np.flatnonzero(np.bincount(labels, minlength=num_classes) == 0)
    if len(empty):
        raise DatasetError(f"{name}: classes without nodes: {empty.tolist()}")

    fixed_split = _load_fixed_split(root, n, name)

    if normalize_features:
        sums = features.sum(axis=1, keepdims=True)
        features = np.where(sums != 0.0, features / np.where(sums != 0.0, sums, 1.0), 0.0)

    features.setflags(write=False)
    labels.setflags(write=False)
    logger.info(f"Loaded {name}: n={n}, m={graph.m}, c={num_classes}, d={features.shape[1]}"
                f"{', fixed split' if fixed_split else ''}")
    return DatasetBundle(
        name=name,
        graph=graph,
        features=features,
        labels=labels,
        num_classes=num_classes,
        fixed_split=fixed_split,
    )


def _load_fixed_split(root: Path, n: int, name: str) -> Optional[FixedSplit]:
    present = [(root / f).exists() for f in SPLIT_FILES]
    if not any(present):
        return None
    if not all(present):
        missing = [f for f, ok in zip(SPLIT_FILES, present) if not ok]
        raise DatasetError(f"{name}: incomplete fixed split, missing {missing}")

    parts = [_read_ids(root / f) for f in SPLIT_FILES]
    for fname, ids in zip(SPLIT_FILES, parts):
        if len(ids) and (ids.min() < 0 or ids.max() >= n):
            raise DatasetError(f"{name}: {fname} holds node ids outside [0, {n})")
    train, val, test = (set(p.tolist()) for p in parts)
    if train & val or train & test or val & test:
        raise DatasetError(f"{name}: fixed split sets overlap")
    return FixedSplit(*parts)


def write_dataset(bundle: DatasetBundle, path: str | Path):
    """Write `bundle` in the directory layout read by load_dataset."""
    root = Path(path)
    try:
        root.mkdir(parents=True, exist_ok=True)
        with open(root / "edges.txt", "w", encoding="utf-8") as f:
            for i, j in bundle.graph.edge_list():
                f.write(f"{i} {j}\n")
        with open(root / "features.csv", "w", encoding="utf-8") as f:
            for row in bundle.features:
                f.write(",".join(repr(float(v)) for v in row) + "\n")
        with open(root / "labels.txt", "w", encoding="utf-8") as f:
            f.writelines(f"{int(y)}\n" for y in bundle.labels)
        if bundle.fixed_split is not None:
            for fname, ids in zip(SPLIT_FILES, (bundle.fixed_split.train, bundle.fixed_split.val,
                                                bundle.fixed_split.test)):
                with open(root / fname, "w", encoding="utf-8") as f:
                    f.writelines(f"{int(i)}\n" for i in ids)
        meta = {"name": bundle.name, "n": bundle.n, "m": bundle.graph.m,
                "c": bundle.num_classes, "d": bundle.d}
        with open(root / "meta.json", "w", encoding="utf-8") as f:
            json.dump(meta, f, indent=2)
    except OSError as e:
        raise DatasetError(f"cannot write dataset to {root}: {e}")


def largest_connected_component(bundle: DatasetBundle) -> DatasetBundle:
    """
    Restrict the bundle to its largest component, relabeling nodes 0..n'-1
    in their original order. Ties go to the component with the smallest node.

    Raises:
        DatasetError: if a class has no node left in the component
    """
    labels = connected_components(bundle.graph)
    sizes = np.bincount(labels)
    keep = np.flatnonzero(labels == int(np.argmax(sizes)))
    if len(keep) == bundle.n:
        return bundle

    graph = induced_subgraph(bundle.graph, keep)
    fixed_split = None
    if bundle.fixed_split is not None:
        new_id = np.full(bundle.n, -1, dtype=np.int64)
        new_id[keep] = np.arange(len(keep))

        def remap(ids: np.ndarray) -> np.ndarray:
            mapped = new_id[ids]
            return mapped[mapped >= 0]

        fixed_split = FixedSplit(*(remap(ids) for ids in (bundle.fixed_split.train,
                                                          bundle.fixed_split.val,
                                                          bundle.fixed_split.test)))

    new_labels = bundle.labels[keep]
    absent = np.flatnonzero(np.bincount(new_labels, minlength=bundle.num_classes) == 0)
    if len(absent):
        raise DatasetError(
            f"{bundle.name}: classes {absent.tolist()} have no node in the largest component "
            f"({len(keep)} of {bundle.n} nodes)"
        )

    logger.info(f"{bundle.name}: largest component keeps {len(keep)} of {bundle.n} nodes")
    return replace(
        bundle,
        graph=graph,
        features=bundle.features[keep],
        labels=new_labels,
        fixed_split=fixed_split,
    )
