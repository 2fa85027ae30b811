"""Decoupled propagation with adaptive per-hop retainment.

    Z  = MLP(X)                         n × c
    Hℓ = Â Hℓ₋₁,  H₀ = Z                 ℓ = 1..k
    H  = stack(Z, H₁, ..., Hₖ)           n × (k+1) × c
    S  = sigmoid(H s)                   n × (k+1)
    X_out = softmax(Σℓ S[:, ℓ] Hℓ)      n × c

The projection vector s is the only parameter outside the MLP, so the
parameter count does not depend on k.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError, ShapeError
from ..graph import PropagationOperator, propagate
from ..nn import check_finite, sigmoid, softmax_cross_entropy_grad, softmax_rows
from .mlp import MlpCache, mlp_backward, mlp_forward
from .params import DagnnParams


@dataclass
class DagnnCache:
    mlp: MlpCache
    hops: np.ndarray  # H, n × (k+1) × c
    scores: np.ndarray  # S, n × (k+1)
    output: np.ndarray  # pre-softmax, n × c
    probs: np.ndarray
    gated_by_override: bool = False


def dagnn_forward(
    params: DagnnParams,
    op: PropagationOperator,
    x: np.ndarray,
    k: int,
    dropout_rate: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    gate_override: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, DagnnCache]:
    """
    Forward pass. Hops are computed incrementally, never as dense powers.

    Args:
        gate_override: fixed scores replacing sigmoid(H s), broadcast to
            n × (k+1); for reduction tests only

    Raises:
        ConfigError: if k < 1
        ShapeError: if s does not match the class count
        DivergenceError: on non-finite scores
    """
    if k < 1:
        raise ConfigError(f"dagnn needs k >= 1, got {k}")
    c = params.mlp.out_dim
    if params.s.shape != (c,):
        raise ShapeError(f"projection vector must have length {c}, got shape {params.s.shape}")

    z, mlp_cache = mlp_forward(params.mlp, x, dropout_rate, training, rng)
    hops = [z]
    for _ in range(k):
        hops.append(propagate(op, hops[-1]))
    stacked = np.stack(hops, axis=1)

    if gate_override is None:
        scores = check_finite(sigmoid(stacked @ params.s), "retainment scores")
    else:
        scores = np.broadcast_to(np.asarray(gate_override, dtype=np.float64), stacked.shape[:2]).copy()

    output = np.einsum("nl,nlc->nc", scores, stacked)
    probs = softmax_rows(output)
    cache = DagnnCache(
        mlp=mlp_cache,
        hops=stacked,
        scores=scores,
        output=output,
        probs=probs,
        gated_by_override=gate_override is not None,
    )
    return probs, cache


def dagnn_backward(
    params: DagnnParams,
    op: PropagationOperator,
    cache: DagnnCache,
    labels: np.ndarray,
    mask: np.ndarray,
) -> dict[str, np.ndarray]:
    """Gradients for s and every MLP tensor."""
    d_out = softmax_cross_entropy_grad(cache.probs, labels, mask)
    hops, scores = cache.hops, cache.scores

    d_scores = np.einsum("nc,nlc->nl", d_out, hops)
    d_hops = scores[:, :, None] * d_out[:, None, :]

    if cache.gated_by_override:
        d_s = np.zeros_like(params.s)
    else:
        d_logits = d_scores * scores * (1.0 - scores)
        d_s = np.einsum("nl,nlc->c", d_logits, hops)
        d_hops += d_logits[:, :, None] * params.s[None, None, :]

    # Hℓ = Â Hℓ₋₁, so accumulate from the deepest hop back to Z
    k = hops.shape[1] - 1
    grad = d_hops[:, k]
    for hop in range(k - 1, -1, -1):
        grad = d_hops[:, hop] + propagate(op, grad, transpose=True)

    grads = mlp_backward(params.mlp, cache.mlp, grad)
    grads["s"] = d_s
    return grads
