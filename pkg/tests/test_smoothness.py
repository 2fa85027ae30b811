"""Tests for the smoothness metric."""

import numpy as np
import pytest

from deep_gnn.errors import ConfigError, ShapeError
from deep_gnn.graph import OperatorKind, normalize
from deep_gnn.smoothness import (
    graph_smoothness,
    node_smoothness,
    pair_distance,
    propagation_smoothness_curve,
    smoothness_auto,
)


@pytest.fixture
def features():
    """Random 60×5 representations."""
    return np.random.default_rng(4).normal(size=(60, 5))


class TestPairDistance:
    """Tests for the normalized pair distance."""

    def test_orthogonal(self):
        """Test that orthogonal unit vectors are sqrt(2)/2 apart."""
        assert pair_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(np.sqrt(2) / 2)

    def test_opposite(self):
        """Test that opposite vectors reach the maximum of 1."""
        assert pair_distance([2.0, 0.0], [-5.0, 0.0]) == pytest.approx(1.0)

    def test_same_direction(self):
        """Test that parallel vectors of different length are 0 apart."""
        assert pair_distance([1.0, 1.0], [3.0, 3.0]) == pytest.approx(0.0, abs=1e-15)

    def test_zero_row_counts_as_zero_vector(self):
        """Test that a zero row stays zero instead of producing NaN."""
        assert pair_distance([0.0, 0.0], [0.0, 4.0]) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        """Test that vectors of different length are rejected."""
        with pytest.raises(ShapeError):
            pair_distance([1.0, 0.0], [1.0, 0.0, 0.0])


class TestGraphSmoothness:
    """Tests for whole-graph smoothness."""

    def test_identical_rows(self):
        """Test that identical rows give 0."""
        x = np.tile([1.0, 2.0], (3, 1))

        assert graph_smoothness(x).graph_value == 0.0

    def test_two_nodes(self):
        """Test the two-node value against the pair distance."""
        x = np.array([[1.0, 0.0], [0.0, 1.0]])

        assert graph_smoothness(x).graph_value == pytest.approx(np.sqrt(2) / 2)

    def test_scale_invariance_is_exact(self, features):
        """Test that rescaling rows by powers of two leaves the value unchanged bit for bit."""
        scales = 2.0 ** np.random.default_rng(0).integers(-4, 5, size=(features.shape[0], 1))

        assert graph_smoothness(features * scales).graph_value == graph_smoothness(features).graph_value

    def test_range(self, features):
        """Test that values lie in [0, 1]."""
        result = graph_smoothness(features)

        assert 0.0 <= result.graph_value <= 1.0
        assert np.all((result.per_node >= 0.0) & (result.per_node <= 1.0))

    def test_antipodal_rows_stay_in_range(self):
        """Test that opposite vectors give at most 1 despite rounding."""
        rng = np.random.default_rng(11)
        for _ in range(2000):
            x = rng.normal(size=7)
            pair = np.stack([x, -x])

            assert pair_distance(x, -x) <= 1.0
            assert graph_smoothness(pair).graph_value <= 1.0
            assert node_smoothness(pair, 0) <= 1.0
            assert graph_smoothness(pair, mode="sampled", pairs=1000, seed=0).graph_value <= 1.0

    def test_permutation_invariance(self, features):
        """Test that reordering nodes does not change the value."""
        perm = np.random.default_rng(2).permutation(features.shape[0])

        assert graph_smoothness(features[perm]).graph_value == pytest.approx(
            graph_smoothness(features).graph_value, abs=1e-12
        )

    def test_per_node_mean(self, features):
        """Test that the graph value is the mean of per-node values."""
        result = graph_smoothness(features)

        assert result.graph_value == pytest.approx(result.per_node.mean())
        assert node_smoothness(features, 7) == pytest.approx(result.per_node[7])

    def test_sampled_agrees_with_exact(self):
        """Test sampled and exact modes agree within 0.01 on 100 nodes."""
        x = np.random.default_rng(9).normal(size=(100, 6))
        exact = graph_smoothness(x, mode="exact").graph_value
        sampled = graph_smoothness(x, mode="sampled", pairs=200_000, seed=1)

        assert sampled.per_node is None
        assert abs(sampled.graph_value - exact) < 0.01

    def test_sampled_is_seeded(self, features):
        """Test that the sampling seed fixes the result."""
        a = graph_smoothness(features, mode="sampled", pairs=5000, seed=3).graph_value
        b = graph_smoothness(features, mode="sampled", pairs=5000, seed=3).graph_value

        assert a == b

    def test_too_few_pairs(self, features):
        """Test that sampled mode needs at least 1000 pairs."""
        with pytest.raises(ConfigError):
            graph_smoothness(features, mode="sampled", pairs=999)

    def test_exact_size_cap(self):
        """Test that exact mode refuses more than 5000 nodes."""
        with pytest.raises(ConfigError):
            graph_smoothness(np.ones((5001, 1)), mode="exact")

    def test_single_node(self):
        """Test that one node has no pairs."""
        with pytest.raises(ShapeError):
            graph_smoothness(np.ones((1, 3)))

    def test_auto_mode(self, features):
        """Test that auto picks exact mode on small inputs."""
        assert smoothness_auto(features).mode == "exact"
        assert smoothness_auto(features, exact_limit=10).mode == "sampled"


class TestPropagationCurve:
    """Tests for smoothness of repeatedly propagated features."""

    def test_hop_zero_is_input(self, sbm_graph):
        """Test that hop 0 is the smoothness of the raw features."""
        x = np.random.default_rng(5).normal(size=(sbm_graph.n, 4))
        op = normalize(sbm_graph, OperatorKind.SYMMETRIC)

        curve = propagation_smoothness_curve(op, x, [0])

        assert curve == [(0, pytest.approx(graph_smoothness(x).graph_value))]

    def test_exact_limit_switches_to_sampling(self, sbm_graph):
        """Test that graphs above the exact limit are measured on sampled pairs."""
        x = np.random.default_rng(5).normal(size=(sbm_graph.n, 4))
        op = normalize(sbm_graph, OperatorKind.SYMMETRIC)

        curve = propagation_smoothness_curve(op, x, [0], seed=3, exact_limit=10)

        assert curve == [(0, graph_smoothness(x, mode="sampled", seed=3).graph_value)]

    def test_deep_propagation_over_smooths(self, sbm_graph):
        """Test that many row-averaging hops drive the value towards 0."""
        x = np.random.default_rng(6).normal(size=(sbm_graph.n, 4))
        op = normalize(sbm_graph, OperatorKind.ROW_AVG)

        curve = dict(propagation_smoothness_curve(op, x, [200, 0, 2]))

        assert sorted(curve) == [0, 2, 200]
        assert curve[200] < 1e-3
        assert curve[2] < curve[0]

    def test_negative_hops(self, sbm_graph):
        """Test that negative hop counts are rejected."""
        op = normalize(sbm_graph, OperatorKind.ROW_AVG)

        with pytest.raises(ConfigError):
            propagation_smoothness_curve(op, np.ones((sbm_graph.n, 2)), [-1])
