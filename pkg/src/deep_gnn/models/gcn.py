"""Stacked graph convolutions: X⁽ˡ⁾ = σ(Â X⁽ˡ⁻¹⁾ W⁽ˡ⁾)."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ShapeError
from ..graph import PropagationOperator, propagate
from ..nn import check_finite, dropout, matmul, relu, relu_backward, softmax_cross_entropy_grad, softmax_rows
from .params import GcnParams


@dataclass
class GcnCache:
    inputs: list[np.ndarray] = field(default_factory=list)
    masks: list[Optional[np.ndarray]] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    probs: Optional[np.ndarray] = None


def gcn_forward(
    params: GcnParams,
    op: PropagationOperator,
    x: np.ndarray,
    dropout_rate: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[np.ndarray, GcnCache]:
    """
    L layers of propagate-and-transform; ReLU between layers, softmax at the end.

    Each layer computes Â (H W) rather than (Â H) W, which is the same product
    with a narrower sparse multiply.

    Raises:
        DivergenceError: on a non-finite activation, naming the layer
    """
    if x.ndim != 2 or x.shape[1] != params.weights[0].shape[0]:
        raise ShapeError(f"gcn expects {params.weights[0].shape[0]} input features, got shape {x.shape}")

    cache = GcnCache()
    h = x
    last = len(params.weights) - 1
    for i, w in enumerate(params.weights):
        h_in, mask = dropout(h, dropout_rate, rng, training)
        z = check_finite(propagate(op, matmul(h_in, w)), f"gcn layer {i + 1}")
        cache.inputs.append(h_in)
        cache.masks.append(mask)
        cache.pre_activations.append(z)
        h = relu(z) if i < last else z

    cache.probs = softmax_rows(h)
    return cache.probs, cache


def gcn_backward(
    params: GcnParams,
    op: PropagationOperator,
    cache: GcnCache,
    labels: np.ndarray,
    mask: np.ndarray,
) -> dict[str, np.ndarray]:
    """Gradients of the summed cross-entropy w.r.t. every W⁽ˡ⁾."""
    grads = {}
    dz = softmax_cross_entropy_grad(cache.probs, labels, mask)
    for i in range(len(params.weights) - 1, -1, -1):
        d_hw = propagate(op, dz, transpose=True)
        grads[f"gcn.w{i}"] = matmul(cache.inputs[i].T, d_hw)
        if i == 0:
            break
        dh = matmul(d_hw, params.weights[i].T)
        if cache.masks[i] is not None:
            dh = dh * cache.masks[i]
        dz = relu_backward(dh, cache.pre_activations[i - 1])
    return grads
