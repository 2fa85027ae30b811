"""Uniform model interface used by training, sweeps and gradient checks."""

from abc import ABC, abstractmethod
from typing import Any, Optional

import numpy as np

from ..errors import ConfigError
from ..graph import PropagationOperator
from ..nn import cross_entropy, softmax_cross_entropy_grad, softmax_rows
from .dagnn import dagnn_backward, dagnn_forward
from .decoupled import decoupled_backward, decoupled_forward
from .gcn import gcn_backward, gcn_forward
from .mlp import mlp_backward, mlp_forward
from .params import DagnnParams, GcnParams, MlpParams, ParamBundle

MODEL_KINDS = ("mlp", "gcn", "decoupled", "dagnn")


class GraphModel(ABC):
    """
    Base class for the node classifiers.

    A model object only holds architecture hyperparameters; parameters live
    in a separate bundle so that independent runs never share state.
    """

    kind: str = ""

    def __init__(self, hidden: int = 64, dropout: float = 0.0):
        self.hidden = hidden
        self.dropout = dropout

    @property
    @abstractmethod
    def depth(self) -> int:
        """Layers (GCN) or propagation hops (decoupled models)."""
        pass

    @abstractmethod
    def init_params(self, in_dim: int, num_classes: int, rng: np.random.Generator) -> ParamBundle:
        pass

    @abstractmethod
    def forward(
        self,
        params: ParamBundle,
        op: PropagationOperator,
        x: np.ndarray,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> tuple[np.ndarray, Any]:
        """Returns (class probabilities, cache)."""
        pass

    @abstractmethod
    def backward(
        self,
        params: ParamBundle,
        op: PropagationOperator,
        cache: Any,
        labels: np.ndarray,
        mask: np.ndarray,
    ) -> dict[str, np.ndarray]:
        pass

    @abstractmethod
    def representations(self, cache: Any) -> np.ndarray:
        """Final pre-softmax node representations."""
        pass

    def hyperparameters(self) -> dict:
        return {"kind": self.kind, "depth": self.depth, "hidden": self.hidden, "dropout": self.dropout}

    def loss_and_grad(
        self,
        params: ParamBundle,
        op: PropagationOperator,
        x: np.ndarray,
        labels: np.ndarray,
        mask: np.ndarray,
    ) -> tuple[float, dict[str, np.ndarray]]:
        """Deterministic loss and gradients (dropout off)."""
        probs, cache = self.forward(params, op, x, training=False)
        loss = cross_entropy(probs, labels, mask)
        return loss, self.backward(params, op, cache, labels, mask)


class MlpModel(GraphModel):
    """Depth-0 baseline: the graph is ignored."""

    kind = "mlp"

    @property
    def depth(self) -> int:
        return 0

    def init_params(self, in_dim, num_classes, rng):
        return MlpParams.init([in_dim, self.hidden, num_classes], rng)

    def forward(self, params, op, x, training=False, rng=None):
        out, cache = mlp_forward(params, x, self.dropout, training, rng)
        probs = softmax_rows(out)
        return probs, (cache, out, probs)

    def backward(self, params, op, cache, labels, mask):
        mlp_cache, _, probs = cache
        return mlp_backward(params, mlp_cache, softmax_cross_entropy_grad(probs, labels, mask))

    def representations(self, cache):
        return cache[1]


class GcnModel(GraphModel):
    kind = "gcn"

    def __init__(self, layers: int = 2, hidden: int = 64, dropout: float = 0.0):
        super().__init__(hidden, dropout)
        if layers < 1:
            raise ConfigError(f"gcn needs at least one layer, got {layers}")
        self.layers = layers

    @property
    def depth(self) -> int:
        return self.layers

    def init_params(self, in_dim, num_classes, rng):
        dims = [in_dim] + [self.hidden] * (self.layers - 1) + [num_classes]
        return GcnParams.init(dims, rng)

    def forward(self, params, op, x, training=False, rng=None):
        return gcn_forward(params, op, x, self.dropout, training, rng)

    def backward(self, params, op, cache, labels, mask):
        return gcn_backward(params, op, cache, labels, mask)

    def representations(self, cache):
        return cache.pre_activations[-1]


class DecoupledModel(GraphModel):
    """MLP followed by k parameter-free propagation hops."""

    kind = "decoupled"

    def __init__(self, k: int = 10, hidden: int = 64, dropout: float = 0.0):
        super().__init__(hidden, dropout)
        if k < 0:
            raise ConfigError(f"decoupled model needs k >= 0, got {k}")
        self.k = k

    @property
    def depth(self) -> int:
        return self.k

    def init_params(self, in_dim, num_classes, rng):
        return MlpParams.init([in_dim, self.hidden, num_classes], rng)

    def forward(self, params, op, x, training=False, rng=None):
        return decoupled_forward(params, op, x, self.k, self.dropout, training, rng)

    def backward(self, params, op, cache, labels, mask):
        return decoupled_backward(params, op, cache, labels, mask)

    def representations(self, cache):
        return cache.propagated


class DagnnModel(GraphModel):
    kind = "dagnn"

    def __init__(self, k: int = 10, hidden: int = 64, dropout: float = 0.0):
        super().__init__(hidden, dropout)
        if k < 1:
            raise ConfigError(f"dagnn needs k >= 1, got {k}")
        self.k = k
        self.gate_override: Optional[np.ndarray] = None

    @property
    def depth(self) -> int:
        return self.k

    def init_params(self, in_dim, num_classes, rng):
        return DagnnParams.init([in_dim, self.hidden, num_classes], rng)

    def forward(self, params, op, x, training=False, rng=None):
        return dagnn_forward(params, op, x, self.k, self.dropout, training, rng, self.gate_override)

    def backward(self, params, op, cache, labels, mask):
        return dagnn_backward(params, op, cache, labels, mask)

    def representations(self, cache):
        return cache.output


def build_model(kind: str, depth: int, hidden: int = 64, dropout: float = 0.0) -> GraphModel:
    """
    Construct a model by name.

    `depth` means layers for gcn and hops for decoupled/dagnn; it is ignored
    for mlp. A gcn of depth 0 is the MLP baseline.
    """
    if kind == "mlp" or (kind == "gcn" and depth == 0):
        return MlpModel(hidden=hidden, dropout=dropout)
    if kind == "gcn":
        return GcnModel(layers=depth, hidden=hidden, dropout=dropout)
    if kind == "decoupled":
        return DecoupledModel(k=depth, hidden=hidden, dropout=dropout)
    if kind == "dagnn":
        return DagnnModel(k=depth, hidden=hidden, dropout=dropout)
    raise ConfigError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
