"""Test configuration and shared fixtures."""

import os
from pathlib import Path

import numpy as np
import pytest

from deep_gnn.data import DatasetBundle, FixedSplit, write_dataset
from deep_gnn.graph import GraphSpec, build_graph, is_connected, sbm_blocks, synth_graph


def connected_sbm(sizes, p_in, p_out, seed=0):
    """First seeded SBM at or after `seed` that is connected."""
    for s in range(seed, seed + 1000):
        spec = GraphSpec(kind="sbm", sizes=tuple(sizes), probs=(p_in, p_out), seed=s)
        graph = synth_graph(spec)
        if is_connected(graph):
            return spec, graph
    raise RuntimeError("no connected SBM sample found")


def sbm_bundle(sizes=(40, 40, 40), p_in=0.25, p_out=0.08, d=16, noise=1.0, seed=0, fixed=False):
    """Seeded SBM dataset whose features are noisy class means."""
    spec, graph = connected_sbm(sizes, p_in, p_out, seed)
    labels = sbm_blocks(spec)
    c = len(sizes)
    rng = np.random.default_rng(seed)
    means = rng.normal(scale=1.0, size=(c, d))
    features = means[labels] + noise * rng.normal(size=(graph.n, d))

    fixed_split = None
    if fixed:
        train = np.concatenate([np.flatnonzero(labels == k)[:5] for k in range(c)])
        rest = rng.permutation(np.setdiff1d(np.arange(graph.n), train))
        fixed_split = FixedSplit(np.sort(train), np.sort(rest[:30]), np.sort(rest[30:]))

    return DatasetBundle(
        name="sbm",
        graph=graph,
        features=features,
        labels=labels.astype(np.int64),
        num_classes=c,
        fixed_split=fixed_split,
    )


@pytest.fixture
def fixtures_path():
    """Path to fixture files."""
    return Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def toy_dataset_path(fixtures_path):
    """Three-node path with identical feature rows."""
    return fixtures_path / "datasets" / "toy"


@pytest.fixture
def two_components_path(fixtures_path):
    """Five nodes in components of sizes 3 and 2, with a fixed split."""
    return fixtures_path / "datasets" / "two_components"


@pytest.fixture
def path3():
    """P3: 0 - 1 - 2."""
    return build_graph([(0, 1), (1, 2)], 3)


@pytest.fixture
def k2():
    """A single edge."""
    return build_graph([(0, 1)], 2)


@pytest.fixture
def sbm_graph():
    """Connected 3-block SBM on 30 nodes."""
    _, graph = connected_sbm((10, 10, 10), 0.5, 0.1, seed=3)
    return graph


@pytest.fixture
def small_bundle():
    """Small SBM dataset with a fixed split, kept in memory."""
    return sbm_bundle(sizes=(20, 20, 20), p_in=0.3, p_out=0.05, d=8, seed=1, fixed=True)


@pytest.fixture
def sbm_dataset_dir(tmp_path, small_bundle):
    """The small SBM dataset written in the on-disk layout."""
    path = tmp_path / "sbm"
    write_dataset(small_bundle, path)
    return path


def citation_dir(name: str):
    """Directory of a real citation dataset, from DEEP_GNN_<NAME>_DIR, or None."""
    value = os.getenv(f"DEEP_GNN_{name.upper()}_DIR")
    return Path(value) if value else None
