"""Transform first, then propagate k hops: softmax(Âᵏ MLP(X))."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError
from ..graph import PropagationOperator, propagate
from ..nn import check_finite, softmax_cross_entropy_grad, softmax_rows
from .mlp import MlpCache, mlp_backward, mlp_forward
from .params import MlpParams


@dataclass
class DecoupledCache:
    mlp: MlpCache
    k: int
    propagated: np.ndarray  # Âᵏ Z, the pre-softmax representation
    probs: np.ndarray


def decoupled_forward(
    params: MlpParams,
    op: PropagationOperator,
    x: np.ndarray,
    k: int,
    dropout_rate: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[np.ndarray, DecoupledCache]:
    """Exactly k propagate calls after the MLP; k = 0 is MLP + softmax."""
    if k < 0:
        raise ConfigError(f"propagation depth k must be non-negative, got {k}")

    z, mlp_cache = mlp_forward(params, x, dropout_rate, training, rng)
    h = z
    for _ in range(k):
        h = propagate(op, h)
    check_finite(h, f"propagation after {k} hops")

    probs = softmax_rows(h)
    return probs, DecoupledCache(mlp=mlp_cache, k=k, propagated=h, probs=probs)


def decoupled_backward(
    params: MlpParams,
    op: PropagationOperator,
    cache: DecoupledCache,
    labels: np.ndarray,
    mask: np.ndarray,
) -> dict[str, np.ndarray]:
    """Pull the logit gradient back through k transposed hops into the MLP."""
    grad = softmax_cross_entropy_grad(cache.probs, labels, mask)
    for _ in range(cache.k):
        grad = propagate(op, grad, transpose=True)
    return mlp_backward(params, cache.mlp, grad)
