"""Tests for graph construction, normalization and propagation."""

import numpy as np
import pytest

from deep_gnn.errors import ConfigError, GraphError, ShapeError
from deep_gnn.graph import (
    GraphSpec,
    OperatorKind,
    build_graph,
    connected_components,
    edge_density,
    induced_subgraph,
    is_connected,
    load_graph_arg,
    normalize,
    parse_graph_spec,
    propagate,
    read_edge_list,
    sbm_blocks,
    synth_graph,
)


class TestBuildGraph:
    """Tests for build_graph."""

    def test_path_degrees(self, path3):
        """Test that P3 gets one self-loop per node on top of its edges."""
        assert path3.n == 3
        assert path3.m == 2
        assert path3.degrees_tilde.tolist() == [2, 3, 2]

    def test_single_edge(self, k2):
        """Test the two-node graph."""
        assert k2.m == 1
        assert k2.degrees_tilde.tolist() == [2, 2]

    def test_duplicates_and_self_loops_are_dropped(self):
        """Test that repeated edges, reversed pairs and input self-loops collapse."""
        graph = build_graph([(0, 1), (1, 0), (0, 1), (2, 2), (1, 2)], 3)

        assert graph.m == 2
        assert graph.degrees_tilde.tolist() == [2, 3, 2]

    def test_isolated_node_keeps_its_self_loop(self):
        """Test that a node without edges still has degree 1."""
        graph = build_graph([], 1)

        assert graph.m == 0
        assert graph.degrees_tilde.tolist() == [1]
        assert graph.neighbors(0).tolist() == [0]

    def test_rows_are_sorted(self, sbm_graph):
        """Test that column indices within each row are strictly increasing."""
        for i in range(sbm_graph.n):
            cols = sbm_graph.neighbors(i)
            assert np.all(np.diff(cols) > 0)
            assert i in cols

    def test_out_of_range_edge(self):
        """Test that a pair outside [0, n) is rejected."""
        with pytest.raises(GraphError, match="out of range"):
            build_graph([(0, 3)], 3)

    def test_empty_graph(self):
        """Test that n = 0 is rejected."""
        with pytest.raises(GraphError):
            build_graph([], 0)

    def test_arrays_are_read_only(self, path3):
        """Test that the CSR arrays cannot be modified."""
        with pytest.raises(ValueError):
            path3.degrees_tilde[0] = 7

    def test_edge_list_round_trip(self, sbm_graph):
        """Test that rebuilding from edge_list gives the same CSR."""
        rebuilt = build_graph(sbm_graph.edge_list(), sbm_graph.n)

        assert np.array_equal(rebuilt.row_offsets, sbm_graph.row_offsets)
        assert np.array_equal(rebuilt.col_indices, sbm_graph.col_indices)


class TestNormalize:
    """Tests for the propagation operators."""

    def test_row_avg_rows_sum_to_one(self, sbm_graph):
        """Test that the row-averaging operator is row-stochastic."""
        op = normalize(sbm_graph, OperatorKind.ROW_AVG)

        assert np.allclose(op.to_dense().sum(axis=1), 1.0, atol=1e-12)

    def test_symmetric_is_symmetric(self, sbm_graph):
        """Test that the symmetric operator equals its transpose."""
        dense = normalize(sbm_graph, "symmetric").to_dense()

        assert np.allclose(dense, dense.T, atol=1e-15)

    def test_path_values(self, path3):
        """Test the P3 operator entries."""
        row = normalize(path3, OperatorKind.ROW_AVG).to_dense()
        sym = normalize(path3, OperatorKind.SYMMETRIC).to_dense()

        assert row[1].tolist() == pytest.approx([1 / 3, 1 / 3, 1 / 3])
        assert row[0].tolist() == pytest.approx([0.5, 0.5, 0.0])
        assert sym[0, 1] == pytest.approx(1 / np.sqrt(6))

    def test_unknown_kind(self, path3):
        """Test that an unknown operator kind is rejected."""
        with pytest.raises(ValueError):
            normalize(path3, "laplacian")


class TestPropagate:
    """Tests for sparse propagation."""

    def test_matches_dense_product(self, sbm_graph):
        """Test that propagation equals the dense matrix product."""
        op = normalize(sbm_graph, OperatorKind.ROW_AVG)
        x = np.random.default_rng(0).normal(size=(sbm_graph.n, 4))

        assert np.allclose(propagate(op, x), op.to_dense() @ x, atol=1e-12)

    def test_transpose(self, sbm_graph):
        """Test that transpose=True applies the transposed operator."""
        op = normalize(sbm_graph, OperatorKind.ROW_AVG)
        x = np.random.default_rng(1).normal(size=(sbm_graph.n, 3))

        assert np.allclose(propagate(op, x, transpose=True), op.to_dense().T @ x, atol=1e-12)

    @pytest.mark.parametrize("kind", list(OperatorKind))
    def test_linear(self, sbm_graph, kind):
        """Test that propagation is linear in the features."""
        op = normalize(sbm_graph, kind)
        rng = np.random.default_rng(2)
        x, y = rng.normal(size=(2, sbm_graph.n, 3))

        assert np.allclose(propagate(op, 2.5 * x - 0.75 * y),
                           2.5 * propagate(op, x) - 0.75 * propagate(op, y), atol=1e-12)

    @pytest.mark.parametrize("kind", list(OperatorKind))
    def test_relabeling_commutes(self, sbm_graph, kind):
        """Test that relabeling nodes before or after propagation gives the same rows."""
        perm = np.random.default_rng(3).permutation(sbm_graph.n)
        inverse = np.argsort(perm)
        relabeled = build_graph([(inverse[i], inverse[j]) for i, j in sbm_graph.edge_list()], sbm_graph.n)
        x = np.random.default_rng(4).normal(size=(sbm_graph.n, 3))

        out = propagate(normalize(sbm_graph, kind), x)
        out_relabeled = propagate(normalize(relabeled, kind), x[perm])

        assert np.allclose(out_relabeled, out[perm], atol=1e-12)

    def test_constant_is_fixed_point(self, path3):
        """Test that the row-averaging operator maps constant columns to themselves."""
        op = normalize(path3, OperatorKind.ROW_AVG)
        x = np.full((3, 2), 5.0)

        assert np.allclose(propagate(op, x), x)

    def test_shape_mismatch(self, path3):
        """Test that a row-count mismatch is a shape error."""
        op = normalize(path3, OperatorKind.SYMMETRIC)

        with pytest.raises(ShapeError):
            propagate(op, np.ones((4, 2)))


class TestComponents:
    """Tests for connectivity helpers."""

    def test_two_components(self):
        """Test component labels in first-seen order."""
        graph = build_graph([(0, 1), (1, 2), (3, 4)], 5)

        assert connected_components(graph).tolist() == [0, 0, 0, 1, 1]
        assert not is_connected(graph)

    def test_connected(self, path3):
        """Test that a path is connected."""
        assert is_connected(path3)

    def test_edge_density(self, path3):
        """Test 2m / n² on P3."""
        assert edge_density(path3) == pytest.approx(4 / 9)

    def test_induced_subgraph_relabels(self):
        """Test that the induced subgraph uses contiguous ids in the given order."""
        graph = build_graph([(0, 1), (1, 2), (2, 3), (3, 4)], 5)
        sub = induced_subgraph(graph, [2, 3, 4])

        assert sub.n == 3
        assert sub.edge_list() == [(0, 1), (1, 2)]


class TestSynthetic:
    """Tests for synthetic graph specs."""

    def test_parse_forms(self):
        """Test the accepted graph spec forms."""
        assert parse_graph_spec("path:5") == GraphSpec(kind="path", sizes=(5,))
        spec = parse_graph_spec("sbm:10,20,0.5,0.1,3")
        assert spec.sizes == (10, 20)
        assert spec.probs == (0.5, 0.1)
        assert spec.seed == 3

    @pytest.mark.parametrize("text", ["path", "torus:4", "sbm:10,0.5", "cycle:x"])
    def test_parse_rejects(self, text):
        """Test that malformed specs are usage errors."""
        with pytest.raises(ConfigError):
            parse_graph_spec(text)

    def test_cycle_and_complete(self):
        """Test edge counts of cycles and complete graphs."""
        assert synth_graph(GraphSpec(kind="cycle", sizes=(6,))).m == 6
        assert synth_graph(GraphSpec(kind="complete", sizes=(5,))).m == 10

    def test_sbm_is_seeded(self):
        """Test that the same seed gives the same graph and another seed a different one."""
        spec = GraphSpec(kind="sbm", sizes=(15, 15), probs=(0.4, 0.1), seed=11)
        a, b = synth_graph(spec), synth_graph(spec)
        c = synth_graph(GraphSpec(kind="sbm", sizes=(15, 15), probs=(0.4, 0.1), seed=12))

        assert np.array_equal(a.col_indices, b.col_indices)
        assert a.edge_list() != c.edge_list()

    def test_sbm_blocks(self):
        """Test block labels follow the size order."""
        spec = GraphSpec(kind="sbm", sizes=(2, 3), probs=(0.5, 0.5), seed=0)

        assert sbm_blocks(spec).tolist() == [0, 0, 1, 1, 1]

    def test_bad_probability(self):
        """Test that probabilities outside [0, 1] are rejected."""
        with pytest.raises(GraphError):
            synth_graph(GraphSpec(kind="sbm", sizes=(5, 5), probs=(1.5, 0.1), seed=0))


class TestEdgeListFiles:
    """Tests for reading edge lists."""

    def test_comments_and_blank_lines(self, tmp_path):
        """Test that comments and blank lines are skipped."""
        path = tmp_path / "edges.txt"
        path.write_text("# header\n0 1\n\n1 2  # trailing\n", encoding="utf-8")

        assert read_edge_list(path) == [(0, 1), (1, 2)]

    def test_malformed_line(self, tmp_path):
        """Test that a malformed line names the file position."""
        path = tmp_path / "edges.txt"
        path.write_text("0 1\n1 2 3\n", encoding="utf-8")

        with pytest.raises(GraphError, match=":2:"):
            read_edge_list(path)

    def test_graph_arg_from_file(self, tmp_path):
        """Test the file: graph argument."""
        path = tmp_path / "edges.txt"
        path.write_text("0 1\n1 2\n2 3\n", encoding="utf-8")

        graph = load_graph_arg(f"file:{path}")

        assert graph.n == 4
        assert graph.m == 3
