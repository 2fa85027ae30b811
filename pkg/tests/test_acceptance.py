"""End-to-end accuracy and over-smoothing checks.

The citation checks need real dataset directories (with train/val/test
files for the fixed split) and are marked slow. Point DEEP_GNN_CORA_DIR,
DEEP_GNN_CITESEER_DIR and DEEP_GNN_PUBMED_DIR at them to enable them:

    DEEP_GNN_CORA_DIR=data/datasets/cora pytest -m slow
"""

import pytest

from deep_gnn.data import load_dataset
from deep_gnn.training import TrainConfig, depth_sweep, multi_run, train_size_sweep

from .conftest import citation_dir, sbm_bundle

RUNS = 10


def _citation(name: str):
    path = citation_dir(name)
    if path is None:
        pytest.skip(f"set DEEP_GNN_{name.upper()}_DIR to run the {name} checks")
    return load_dataset(path, normalize_features=True)


@pytest.fixture(scope="module")
def cora():
    return _citation("cora")


def _gcn(depth: int) -> TrainConfig:
    return TrainConfig(model="gcn", depth=depth, dropout=0.5, weight_decay=5e-4)


class TestSbmSurrogate:
    """Over-smoothing on a seeded stochastic block model."""

    def test_shallow_gcn_beats_deep_gcn(self):
        """Test that a 2-layer GCN beats an 8-layer GCN on the same splits."""
        data = sbm_bundle(fixed=True)
        cfg = TrainConfig(model="gcn", depth=2, hidden=16, dropout=0.5, weight_decay=5e-4,
                          max_epochs=200, patience=50)

        rows = depth_sweep(cfg, data, [2, 8], n_runs=3, split_mode="fixed")

        shallow, deep = rows
        assert shallow["acc_mean"] > deep["acc_mean"]
        assert shallow["smv_g"] > deep["smv_g"]


@pytest.mark.slow
class TestCitationHeadline:
    """Fixed-split accuracy over 10 runs."""

    def test_gcn_cora(self, cora):
        """Test the 2-layer GCN baseline."""
        report = multi_run(_gcn(2), cora, RUNS, "fixed")

        assert 0.798 <= report.acc_mean <= 0.826

    def test_dagnn_cora(self, cora):
        """Test DAGNN with its default k=10."""
        assert multi_run(TrainConfig(), cora, RUNS, "fixed").acc_mean >= 0.829

    def test_dagnn_citeseer(self):
        """Test DAGNN on CiteSeer."""
        data = _citation("citeseer")

        assert multi_run(TrainConfig(), data, RUNS, "fixed").acc_mean >= 0.718

    def test_dagnn_pubmed(self):
        """Test DAGNN on PubMed."""
        data = _citation("pubmed")

        assert multi_run(TrainConfig(), data, RUNS, "fixed").acc_mean >= 0.790


@pytest.mark.slow
class TestCitationDepth:
    """Depth behaviour on Cora."""

    def test_gcn_degrades_with_depth(self, cora):
        """Test that depth 2 beats depth 6 by 10 points and beats the MLP."""
        rows = {r["key"]: r for r in depth_sweep(_gcn(2), cora, [0, 2, 6], RUNS, "fixed")}

        assert rows[2]["acc_mean"] - rows[6]["acc_mean"] >= 0.10
        assert rows[2]["acc_mean"] > rows[0]["acc_mean"]

    def test_decoupled_large_k(self, cora):
        """Test that 50 hops stay within 2 points of 10 hops and 200 hops smooth everything."""
        cfg = TrainConfig(model="decoupled", depth=10)

        k10 = multi_run(cfg, cora, RUNS, "fixed")
        k50 = multi_run(cfg.with_updates(depth=50), cora, RUNS, "fixed")
        k200 = multi_run(cfg.with_updates(depth=200), cora, 3, "fixed")

        assert abs(k10.acc_mean - k50.acc_mean) <= 0.02
        assert k200.smv_mean < 0.1

    def test_dagnn_k100(self, cora):
        """Test that DAGNN at k=100 stays within 3 points of k=10."""
        k10 = multi_run(TrainConfig(depth=10), cora, RUNS, "fixed")
        k100 = multi_run(TrainConfig(depth=100), cora, RUNS, "fixed")

        assert abs(k10.acc_mean - k100.acc_mean) <= 0.03


@pytest.mark.slow
class TestCitationTrainSize:
    """Accuracy with very few labels."""

    def test_one_label_per_class(self, cora):
        """Test that DAGNN leads GCN by 15 points with one label per class."""
        dagnn = train_size_sweep(TrainConfig(), cora, [1], n_runs=20)[0]
        gcn = train_size_sweep(_gcn(2), cora, [1], n_runs=20)[0]

        assert dagnn["acc_mean"] - gcn["acc_mean"] >= 0.15

    def test_more_labels_do_not_hurt(self, cora):
        """Test the accuracy trend over training sizes, allowing one std of noise."""
        rows = train_size_sweep(TrainConfig(), cora, [1, 5, 20], n_runs=5)

        for smaller, larger in zip(rows, rows[1:]):
            assert larger["acc_mean"] >= smaller["acc_mean"] - larger["acc_std"]
