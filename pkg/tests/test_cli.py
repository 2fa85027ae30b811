"""Tests for the deep-gnn command line."""

import csv
import io
import json

import pytest

from deep_gnn.config import get_config
from deep_gnn.data import write_dataset
from deep_gnn.main import main
from deep_gnn.models import load_checkpoint

from .conftest import sbm_bundle

QUICK = ["--max-epochs", "10", "--patience", "5", "--hidden", "8", "--no-normalize-features"]


def _csv_rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


class TestTrain:
    """Tests for the train command."""

    def test_writes_report(self, capsys, sbm_dataset_dir):
        """Test that a report with the requested runs lands on stdout."""
        code = main(["train", "--dataset", str(sbm_dataset_dir), "--model", "gcn", "--runs", "2", *QUICK])

        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["runs"] == 2
        assert report["split_mode"] == "fixed"
        assert [e["seed"] for e in report["entries"]] == [0, 1]
        assert 0.0 <= report["acc_mean"] <= 1.0

    def test_byte_identical(self, tmp_path, sbm_dataset_dir):
        """Test that two identical invocations write identical files."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        args = ["train", "--dataset", str(sbm_dataset_dir), "--model", "dagnn", "--k", "3",
                "--runs", "2", *QUICK]

        assert main([*args, "--output", str(first)]) == 0
        assert main([*args, "--output", str(second)]) == 0

        assert first.read_bytes() == second.read_bytes()

    def test_dagnn_zero_hops(self, sbm_dataset_dir):
        """Test that DAGNN with k=0 is a usage error."""
        assert main(["train", "--dataset", str(sbm_dataset_dir), "--model", "dagnn", "--k", "0"]) == 1

    def test_dropout_out_of_range(self, sbm_dataset_dir):
        """Test that dropout 1.0 is a usage error."""
        assert main(["train", "--dataset", str(sbm_dataset_dir), "--model", "gcn", "--dropout", "1.0"]) == 1

    def test_missing_dataset(self, monkeypatch, tmp_path):
        """Test that an unknown dataset is a data error."""
        monkeypatch.setenv("DEEP_GNN_DATASET_ROOT", str(tmp_path))

        assert main(["train", "--dataset", "nowhere", "--model", "gcn"]) == 2

    def test_split_too_large(self, capsys, sbm_dataset_dir):
        """Test that a random citation split on a small graph is a data error."""
        code = main(["train", "--dataset", str(sbm_dataset_dir), "--model", "gcn", "--split", "random",
                     "--runs", "1", *QUICK])

        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_checkpoint_and_embeddings(self, tmp_path, sbm_dataset_dir):
        """Test the side outputs of the first run."""
        ckpt, emb = tmp_path / "model.ckpt", tmp_path / "emb.csv"

        code = main(["train", "--dataset", str(sbm_dataset_dir), "--model", "decoupled", "--k", "2",
                     "--runs", "1", "--checkpoint", str(ckpt), "--embeddings", str(emb),
                     "--output", str(tmp_path / "report.json"), *QUICK])

        assert code == 0
        header, tensors = load_checkpoint(ckpt)
        assert header["kind"] == "decoupled"
        assert set(tensors) == {"mlp.w0", "mlp.b0", "mlp.w1", "mlp.b1"}
        lines = emb.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "node_id,f0,f1,f2"
        assert len(lines) == 61


class TestSweeps:
    """Tests for the sweep commands."""

    def test_depth_sweep(self, capsys, sbm_dataset_dir):
        """Test one CSV row per depth under the sweep header."""
        code = main(["sweep-depth", "--dataset", str(sbm_dataset_dir), "--model", "gcn",
                     "--depths", "1,2", "--runs", "1", *QUICK])

        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "key,acc_mean,acc_std,smv_g"
        assert [row["key"] for row in _csv_rows(out)] == ["1", "2"]

    def test_train_size_sweep(self, capsys, tmp_path):
        """Test one CSV row per training size on per-class random splits."""
        write_dataset(sbm_bundle(sizes=(40, 40, 40), d=8, seed=1), tmp_path / "sbm40")

        code = main(["sweep-trainsize", "--dataset", str(tmp_path / "sbm40"), "--model", "gcn",
                     "--sizes", "1,2", "--runs", "1", "--protocol", "per_class", *QUICK])

        assert code == 0
        assert [row["key"] for row in _csv_rows(capsys.readouterr().out)] == ["1", "2"]

    def test_bad_depth_list(self, sbm_dataset_dir):
        """Test that a malformed list is rejected by the parser."""
        with pytest.raises(SystemExit) as exc:
            main(["sweep-depth", "--dataset", str(sbm_dataset_dir), "--model", "gcn", "--depths", "1,x"])

        assert exc.value.code == 1

    def test_grid(self, capsys, sbm_dataset_dir):
        """Test the grid CSV for a model without a hop count."""
        code = main(["grid", "--dataset", str(sbm_dataset_dir), "--model", "mlp", "--runs", "1",
                     "--max-epochs", "2", "--patience", "1", "--hidden", "4", "--no-normalize-features"])

        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "k,weight_decay,dropout,val_mean,acc_mean,acc_std"
        assert len(_csv_rows(out)) == 10


class TestSmoothness:
    """Tests for the smoothness command."""

    def test_identical_rows(self, capsys, toy_dataset_path):
        """Test that identical feature rows have zero smoothness."""
        code = main(["smoothness", "--dataset", str(toy_dataset_path), "--no-normalize-features"])

        assert code == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert rows == [{"layer_or_hop": "0", "smv_g": "0.0", "accuracy": ""}]

    def test_propagation_curve(self, capsys, sbm_dataset_dir):
        """Test that smoothness decreases over many propagation steps."""
        code = main(["smoothness", "--dataset", str(sbm_dataset_dir), "--hops", "0,50",
                     "--no-normalize-features", "--operator", "rowavg"])

        assert code == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert float(rows[1]["smv_g"]) < float(rows[0]["smv_g"])

    def test_model_depths_fill_accuracy(self, capsys, sbm_dataset_dir):
        """Test that a model sweep reports accuracy next to smoothness per depth."""
        code = main(["smoothness", "--dataset", str(sbm_dataset_dir), "--model", "gcn",
                     "--depths", "1,2", "--runs", "1", *QUICK])

        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "layer_or_hop,smv_g,accuracy"
        rows = _csv_rows(out)
        assert [r["layer_or_hop"] for r in rows] == ["1", "2"]
        assert all(0.0 <= float(r["accuracy"]) <= 1.0 for r in rows)
        assert all(0.0 <= float(r["smv_g"]) <= 1.0 for r in rows)


class TestSpectralCommands:
    """Tests for converge and verify."""

    def test_converge_path(self, capsys):
        """Test non-increasing residuals that end below the tolerance."""
        code = main(["converge", "--graph", "path:3", "--kind", "rowavg"])

        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "k,frobenius_residual"
        residuals = [float(r["frobenius_residual"]) for r in _csv_rows(out)]
        assert all(b <= a + 1e-15 for a, b in zip(residuals, residuals[1:]))
        assert residuals[-1] <= 1e-6

    def test_converge_cap(self, capsys):
        """Test that hitting the step cap is a numeric failure."""
        assert main(["converge", "--graph", "path:11", "--max-k", "2"]) == 3

    def test_disconnected(self, tmp_path):
        """Test that a disconnected edge list is a numeric failure."""
        edges = tmp_path / "edges.txt"
        edges.write_text("0 1\n2 3\n", encoding="utf-8")

        assert main(["converge", "--graph", f"file:{edges}"]) == 3

    def test_bad_graph_spec(self):
        """Test that an unknown graph spec is a usage error."""
        with pytest.raises(SystemExit) as exc:
            main(["converge", "--graph", "star:5"])

        assert exc.value.code == 1

    def test_verify(self, capsys):
        """Test both operator reports and the correspondence check."""
        code = main(["verify", "--graph", "cycle:5"])

        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert (out["n"], out["m"]) == (5, 5)
        assert {r["kind"] for r in out["reports"]} == {"symmetric", "rowavg"}
        assert out["correspondence_residual"] < 1e-8


class TestGradcheck:
    """Tests for the gradcheck command."""

    def test_dagnn(self, capsys):
        """Test that DAGNN gradients pass on the default graph."""
        code = main(["gradcheck", "--model", "dagnn", "--k", "5"])

        assert code == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert rows[0]["model"] == "dagnn"
        assert rows[0]["passed"] == "True"
        assert float(rows[0]["max_rel_error"]) < 1e-4

    def test_all_models(self, capsys):
        """Test one row per model kind."""
        assert main(["gradcheck", "--samples", "5"]) == 0

        rows = _csv_rows(capsys.readouterr().out)
        assert [r["model"] for r in rows] == ["mlp", "gcn", "decoupled", "dagnn"]


class TestStats:
    """Tests for the stats command."""

    def test_toy(self, capsys, toy_dataset_path):
        """Test the statistics of an unpublished dataset."""
        assert main(["stats", "--dataset", str(toy_dataset_path), "--check"]) == 0

        out = json.loads(capsys.readouterr().out)
        assert (out["n"], out["m"], out["c"], out["d"]) == (3, 2, 2, 2)
        assert out["known_mismatches"] == []

    def test_lcc(self, capsys, two_components_path):
        """Test that --lcc restricts the statistics to the largest component."""
        assert main(["stats", "--dataset", str(two_components_path), "--lcc"]) == 0

        assert json.loads(capsys.readouterr().out)["n"] == 3


class TestParser:
    """Tests for argument handling."""

    def test_help_lists_schemas(self, capsys):
        """Test that the epilog documents the output columns."""
        with pytest.raises(SystemExit) as exc:
            main(["--help"])

        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "key,acc_mean,acc_std,smv_g" in out
        assert "k,frobenius_residual" in out
        assert "layer_or_hop,smv_g,accuracy" in out

    def test_missing_command(self):
        """Test that a command is required."""
        with pytest.raises(SystemExit) as exc:
            main([])

        assert exc.value.code == 1

    def test_exact_limit_from_env(self, monkeypatch):
        """Test that the smoothness exact limit is read from the environment."""
        monkeypatch.setenv("DEEP_GNN_SMOOTHNESS_EXACT_LIMIT", "10")

        assert get_config().smoothness_exact_limit == 10

    def test_threads_must_be_positive(self):
        """Test that zero worker threads is rejected."""
        with pytest.raises(SystemExit) as exc:
            main(["converge", "--graph", "path:3", "--threads", "0"])

        assert exc.value.code == 1
