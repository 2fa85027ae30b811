"""Undirected graphs in CSR form and their normalized propagation operators."""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _scipy_components

from ..errors import GraphError, ShapeError


class OperatorKind(str, Enum):
    """Normalization schemes for the self-loop augmented adjacency."""
    ROW_AVG = "rowavg"  # D^-1 (A + I)
    SYMMETRIC = "symmetric"  # D^-1/2 (A + I) D^-1/2


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable undirected graph stored as the CSR of A + I.

    Every node carries exactly one self-loop, so `degrees_tilde[i] >= 1` and
    equals the CSR row length of node i. `m` counts undirected edges without
    self-loops.
    """

    n: int
    m: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    degrees_tilde: np.ndarray

    def neighbors(self, i: int) -> np.ndarray:
        """Column indices of row i (self-loop included)."""
        return self.col_indices[self.row_offsets[i]:self.row_offsets[i + 1]]

    def adjacency(self) -> sp.csr_matrix:
        """A + I as a scipy CSR matrix of ones."""
        data = np.ones(len(self.col_indices), dtype=np.float64)
        return sp.csr_matrix(
            (data, self.col_indices.copy(), self.row_offsets.copy()), shape=(self.n, self.n)
        )

    def edge_list(self) -> list[tuple[int, int]]:
        """Undirected edges as (i, j) pairs with i < j."""
        rows = np.repeat(np.arange(self.n), np.diff(self.row_offsets))
        keep = rows < self.col_indices
        return list(zip(rows[keep].tolist(), self.col_indices[keep].tolist()))


@dataclass(frozen=True, eq=False)
class PropagationOperator:
    """A normalized operator with values aligned to the graph's CSR layout."""

    kind: OperatorKind
    graph: Graph
    values: np.ndarray
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def to_dense(self) -> np.ndarray:
        """Dense copy of the operator (small graphs only)."""
        return self.matrix.toarray()


def _freeze(*arrays: np.ndarray):
    for arr in arrays:
        arr.setflags(write=False)


def build_graph(edges: Iterable[Sequence[int]], n: int) -> Graph:
    """
    Build the symmetric, deduplicated CSR of A + I.

    Args:
        edges: (i, j) pairs; order, duplicates and self-loops are tolerated
        n: node count

    Raises:
        GraphError: if n < 1 or a pair references a node outside [0, n)
    """
    if n < 1:
        raise GraphError(f"graph must have at least one node, got n={n}")

    pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if len(pairs):
        bad = np.flatnonzero((pairs < 0).any(axis=1) | (pairs >= n).any(axis=1))
        if len(bad):
            i, j = pairs[bad[0]].tolist()
            raise GraphError(f"edge ({i}, {j}) out of range for n={n}")

    # Input self-loops are dropped; the canonical one is added below
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    loops = np.arange(n, dtype=np.int64)
    rows = np.concatenate([pairs[:, 0], pairs[:, 1], loops])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0], loops])

    keys = np.unique(rows * n + cols)  # sorted, so rows and columns come out ordered
    rows, cols = keys // n, keys % n

    degrees = np.bincount(rows, minlength=n).astype(np.int64)
    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=row_offsets[1:])
    col_indices = cols.astype(np.int64)
    _freeze(row_offsets, col_indices, degrees)

    return Graph(
        n=n,
        m=int((len(keys) - n) // 2),
        row_offsets=row_offsets,
        col_indices=col_indices,
        degrees_tilde=degrees,
    )


def normalize(graph: Graph, kind: OperatorKind | str) -> PropagationOperator:
    """Build the row-averaging or symmetric operator on the pattern of A + I."""
    kind = OperatorKind(kind)
    deg = graph.degrees_tilde.astype(np.float64)
    rows = np.repeat(np.arange(graph.n), np.diff(graph.row_offsets))

    if kind is OperatorKind.ROW_AVG:
        values = 1.0 / deg[rows]
    else:
        values = 1.0 / np.sqrt(deg[rows] * deg[graph.col_indices])
    _freeze(values)

    matrix = sp.csr_matrix(
        (values.copy(), graph.col_indices.copy(), graph.row_offsets.copy()), shape=(graph.n, graph.n)
    )
    return PropagationOperator(kind=kind, graph=graph, values=values, matrix=matrix)


def propagate(op: PropagationOperator, x: np.ndarray, transpose: bool = False) -> np.ndarray:
    """
    Compute Â·x (or Âᵀ·x) by sparse row accumulation.

    Cost is O((m + n)·c); powers of Â are never materialized.

    Raises:
        ShapeError: if x does not have n rows
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != op.n:
        raise ShapeError(f"propagate expects an ({op.n}, c) matrix, got shape {x.shape}")
    if transpose:
        return np.asarray(op.matrix.T @ x)
    return np.asarray(op.matrix @ x)


def connected_components(graph: Graph) -> np.ndarray:
    """
    Component id per node, numbered 0..K-1 by smallest contained node index.
    """
    _, labels = _scipy_components(graph.adjacency(), directed=False)
    # Renumber so that component ids follow the first node of each component
    _, first_seen = np.unique(labels, return_index=True)
    order = np.argsort(first_seen)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    return remap[labels].astype(np.int64)


def is_connected(graph: Graph) -> bool:
    return bool(connected_components(graph).max() == 0)


def edge_density(graph: Graph) -> float:
    """2m / n², with m excluding self-loops."""
    return 2.0 * graph.m / float(graph.n) ** 2


def induced_subgraph(graph: Graph, nodes: Sequence[int]) -> Graph:
    """
    Subgraph on `nodes`, relabeled so that nodes[k] becomes node k.

    Also used with a full permutation to relabel a graph.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    new_id = np.full(graph.n, -1, dtype=np.int64)
    new_id[nodes] = np.arange(len(nodes))

    edges = [
        (new_id[i], new_id[j])
        for i, j in graph.edge_list()
        if new_id[i] >= 0 and new_id[j] >= 0
    ]
    return build_graph(edges, len(nodes))


def read_edge_list(path: str | Path) -> list[tuple[int, int]]:
    """
    Read a whitespace separated "i j" edge list. '#' starts a comment.

    Raises:
        GraphError: on lines that are not two integers
    """
    path = Path(path)
    edges = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{line_no}: expected 'i j', got {raw.strip()!r}")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise GraphError(f"{path}:{line_no}: non-integer node id in {raw.strip()!r}")
    return edges
