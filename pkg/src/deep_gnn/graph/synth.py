"""Seeded synthetic graphs: path, cycle, complete and stochastic block model."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, GraphError
from .core import Graph, build_graph, read_edge_list


SYNTH_KINDS = ("path", "cycle", "complete", "sbm")


@dataclass(frozen=True)
class GraphSpec:
    """
    Recipe for a synthetic graph.

    `sizes` holds one entry for path/cycle/complete and the block sizes for
    sbm. `probs` is (p_in, p_out) for sbm and empty otherwise.
    """

    kind: str
    sizes: tuple[int, ...]
    probs: tuple[float, ...] = field(default_factory=tuple)
    seed: int = 0

    @property
    def n(self) -> int:
        return int(sum(self.sizes))


def synth_graph(spec: GraphSpec) -> Graph:
    """
    Generate the graph described by `spec`.

    sbm samples every unordered pair once from a seeded generator, so repeated
    calls give the same CSR. Connectivity is not guaranteed.

    Raises:
        GraphError: for an empty graph, bad sizes or probabilities
    """
    if spec.kind not in SYNTH_KINDS:
        raise GraphError(f"unknown graph kind {spec.kind!r}; expected one of {SYNTH_KINDS}")
    if not spec.sizes or any(s < 0 for s in spec.sizes) or spec.n == 0:
        raise GraphError(f"graph {spec.kind} needs a positive node count, got sizes={spec.sizes}")

    n = spec.n
    if spec.kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif spec.kind == "cycle":
        edges = [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(i, i + 1) for i in range(n - 1)]
    elif spec.kind == "complete":
        iu, ju = np.triu_indices(n, k=1)
        edges = list(zip(iu.tolist(), ju.tolist()))
    else:
        edges = _sample_sbm(spec)

    return build_graph(edges, n)


def _sample_sbm(spec: GraphSpec) -> list[tuple[int, int]]:
    if len(spec.probs) != 2:
        raise GraphError(f"sbm needs (p_in, p_out), got {spec.probs}")
    p_in, p_out = spec.probs
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise GraphError(f"sbm probabilities must lie in [0, 1], got p_in={p_in}, p_out={p_out}")

    block = np.repeat(np.arange(len(spec.sizes)), spec.sizes)
    iu, ju = np.triu_indices(spec.n, k=1)
    prob = np.where(block[iu] == block[ju], p_in, p_out)

    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    keep = rng.random(len(iu)) < prob
    return list(zip(iu[keep].tolist(), ju[keep].tolist()))


def sbm_blocks(spec: GraphSpec) -> np.ndarray:
    """Block id of every node of an sbm spec (useful as labels)."""
    return np.repeat(np.arange(len(spec.sizes)), spec.sizes).astype(np.int64)


def parse_graph_spec(text: str) -> GraphSpec:
    """
    Parse the CLI graph notation.

    Accepted forms: `path:n`, `cycle:n`, `complete:n` and
    `sbm:a,b,...,p_in,p_out,seed` (block sizes first, then the two
    probabilities, then the seed).

    Raises:
        ConfigError: if the text does not match any form
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind in ("path", "cycle", "complete"):
            return GraphSpec(kind=kind, sizes=(int(rest),))
        if kind == "sbm":
            parts = [p.strip() for p in rest.split(",") if p.strip()]
            if len(parts) < 4:
                raise ValueError("need at least one block size, p_in, p_out and seed")
            sizes = tuple(int(p) for p in parts[:-3])
            p_in, p_out = float(parts[-3]), float(parts[-2])
            return GraphSpec(kind="sbm", sizes=sizes, probs=(p_in, p_out), seed=int(parts[-1]))
    except ValueError as e:
        raise ConfigError(f"invalid graph spec {text!r}: {e}")
    raise ConfigError(
        f"invalid graph spec {text!r}; use path:n, cycle:n, complete:n, "
        f"sbm:a,b,...,p_in,p_out,seed or file:<edge list>"
    )


def load_graph_arg(text: str) -> Graph:
    """Resolve a `--graph` argument: a synthetic spec or `file:<edge list>`."""
    if text.startswith("file:"):
        edges = read_edge_list(Path(text[len("file:"):]))
        n = 1 + max((max(i, j) for i, j in edges), default=-1)
        return build_graph(edges, n)
    return synth_graph(parse_graph_spec(text))
