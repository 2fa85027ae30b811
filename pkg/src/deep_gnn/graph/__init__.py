"""Graph construction, normalization and sparse propagation."""

from .core import (
    Graph,
    OperatorKind,
    PropagationOperator,
    build_graph,
    connected_components,
    edge_density,
    induced_subgraph,
    is_connected,
    normalize,
    propagate,
    read_edge_list,
)
from .synth import GraphSpec, load_graph_arg, parse_graph_spec, sbm_blocks, synth_graph

__all__ = [
    "Graph",
    "OperatorKind",
    "PropagationOperator",
    "build_graph",
    "connected_components",
    "edge_density",
    "induced_subgraph",
    "is_connected",
    "normalize",
    "propagate",
    "read_edge_list",
    "GraphSpec",
    "load_graph_arg",
    "parse_graph_spec",
    "sbm_blocks",
    "synth_graph",
]
