"""Smoothness of node representations.

The distance between two representations is half the Euclidean distance of
their unit-normalized vectors, so magnitude plays no part:

    D(xᵢ, xⱼ) = ½ ‖xᵢ/‖xᵢ‖ − xⱼ/‖xⱼ‖‖ ∈ [0, 1]

A node's value is its mean distance to every other node and the graph value
is the mean over nodes. Lower values mean smoother representations.
Zero rows normalize to the zero vector.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ConfigError, ShapeError
from .graph import PropagationOperator, propagate

EXACT_LIMIT = 5000
MIN_SAMPLED_PAIRS = 1000
DEFAULT_SAMPLED_PAIRS = 200_000

# Target size of one block of the pairwise distance matrix
_BLOCK_ELEMENTS = 1 << 22


@dataclass
class SmoothnessResult:
    """Per-node and whole-graph smoothness values."""

    graph_value: float
    per_node: Optional[np.ndarray]  # None in sampled mode
    mode: str  # "exact" or "sampled"
    pairs: int
    seed: Optional[int] = None


def _unit_rows(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    safe = np.where(norms > 0.0, norms, 1.0)
    return np.where(norms > 0.0, x / safe, 0.0)


def _half_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # antipodal unit rows can round past 1
    return np.minimum(0.5 * cdist(a, b), 1.0)


def pair_distance(x_i: np.ndarray, x_j: np.ndarray) -> float:
    """Half the distance between the normalized vectors."""
    x_i = np.asarray(x_i, dtype=np.float64).ravel()
    x_j = np.asarray(x_j, dtype=np.float64).ravel()
    if x_i.shape != x_j.shape:
        raise ShapeError(f"pair_distance needs equal dimensions, got {x_i.shape} and {x_j.shape}")
    units = _unit_rows(np.stack([x_i, x_j]))
    return min(0.5 * float(np.linalg.norm(units[0] - units[1])), 1.0)


def node_smoothness(x: np.ndarray, i: int) -> float:
    """Mean distance from node i to the other n − 1 nodes."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise ShapeError(f"smoothness needs at least 2 nodes, got {n}")
    units = _unit_rows(x)
    dists = _half_distances(units[i:i + 1], units)[0]
    return float(dists.sum() / (n - 1))


def graph_smoothness(
    x: np.ndarray,
    mode: str = "exact",
    pairs: int = DEFAULT_SAMPLED_PAIRS,
    seed: int = 0,
) -> SmoothnessResult:
    """
    Whole-graph smoothness.

    Args:
        x: n×d representations
        mode: "exact" averages all n(n−1)/2 pairs (n ≤ 5000);
              "sampled" averages a seeded uniform sample of distinct pairs
        pairs: sample size in sampled mode (≥ 1000)
        seed: sampling seed

    Raises:
        ShapeError: for fewer than 2 nodes
        ConfigError: for too few sampled pairs, an unknown mode, or exact
            mode on more than 5000 nodes
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ShapeError(f"smoothness needs an n×d matrix with n ≥ 2, got shape {x.shape}")
    n = x.shape[0]
    units = _unit_rows(x)

    if mode == "exact":
        if n > EXACT_LIMIT:
            raise ConfigError(f"exact smoothness is limited to n ≤ {EXACT_LIMIT}; use sampled mode")
        totals = np.zeros(n)
        block = max(1, _BLOCK_ELEMENTS // n)
        for start in range(0, n, block):
            totals[start:start + block] = _half_distances(units[start:start + block], units).sum(axis=1)
        per_node = totals / (n - 1)
        return SmoothnessResult(
            graph_value=float(per_node.mean()),
            per_node=per_node,
            mode="exact",
            pairs=n * (n - 1) // 2,
        )

    if mode == "sampled":
        if pairs < MIN_SAMPLED_PAIRS:
            raise ConfigError(f"sampled smoothness needs at least {MIN_SAMPLED_PAIRS} pairs, got {pairs}")
        rng = np.random.default_rng(seed)
        first = rng.integers(0, n, size=pairs)
        second = rng.integers(0, n - 1, size=pairs)
        second += second >= first  # uniform over the other n − 1 nodes
        dists = np.minimum(0.5 * np.linalg.norm(units[first] - units[second], axis=1), 1.0)
        return SmoothnessResult(
            graph_value=float(dists.mean()),
            per_node=None,
            mode="sampled",
            pairs=pairs,
            seed=seed,
        )

    raise ConfigError(f"unknown smoothness mode {mode!r}")


def smoothness_auto(x: np.ndarray, seed: int = 0, exact_limit: int = EXACT_LIMIT) -> SmoothnessResult:
    """Exact smoothness when affordable, sampled otherwise."""
    if np.asarray(x).shape[0] <= exact_limit:
        return graph_smoothness(x, mode="exact")
    return graph_smoothness(x, mode="sampled", seed=seed)


def propagation_smoothness_curve(
    op: PropagationOperator,
    x: np.ndarray,
    hops: Sequence[int],
    seed: int = 0,
    exact_limit: int = EXACT_LIMIT,
) -> list[tuple[int, float]]:
    """
    SMV_G of Âᵏx for each requested k, without any training.

    Hop 0 is the smoothness of the input itself. Powers are reached by
    sequential propagation, so the cost grows with max(hops).
    Graphs above `exact_limit` nodes use sampled pairs.
    """
    wanted = sorted(set(int(h) for h in hops))
    if wanted and wanted[0] < 0:
        raise ConfigError(f"hops must be non-negative, got {wanted[0]}")

    curve = []
    current = np.asarray(x, dtype=np.float64)
    done = 0
    for hop in wanted:
        for _ in range(hop - done):
            current = propagate(op, current)
        done = hop
        curve.append((hop, smoothness_auto(current, seed=seed, exact_limit=exact_limit).graph_value))
    return curve
