"""Feed-forward transformation shared by the MLP baseline and the decoupled models."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ShapeError
from ..nn import check_finite, dropout, matmul, relu, relu_backward
from .params import MlpParams


@dataclass
class MlpCache:
    """Activations kept for the backward pass."""
    inputs: list[np.ndarray] = field(default_factory=list)  # input of each linear layer, after dropout
    masks: list[Optional[np.ndarray]] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)


def mlp_forward(
    params: MlpParams,
    x: np.ndarray,
    dropout_rate: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[np.ndarray, MlpCache]:
    """
    Dropout -> linear -> ReLU per hidden layer; the last layer has no activation.

    Returns:
        (n×out output, cache)
    """
    if x.ndim != 2 or x.shape[1] != params.weights[0].shape[0]:
        raise ShapeError(f"mlp expects {params.weights[0].shape[0]} input features, got shape {x.shape}")

    cache = MlpCache()
    h = x
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        h_in, mask = dropout(h, dropout_rate, rng, training)
        z = check_finite(matmul(h_in, w) + b, f"mlp layer {i + 1}")
        cache.inputs.append(h_in)
        cache.masks.append(mask)
        cache.pre_activations.append(z)
        h = relu(z) if i < last else z
    return h, cache


def mlp_backward(params: MlpParams, cache: MlpCache, grad_out: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of every MLP tensor given dLoss/dOutput."""
    grads = {}
    dz = grad_out
    for i in range(len(params.weights) - 1, -1, -1):
        grads[f"mlp.w{i}"] = matmul(cache.inputs[i].T, dz)
        grads[f"mlp.b{i}"] = dz.sum(axis=0)
        if i == 0:
            break
        dh = matmul(dz, params.weights[i].T)
        if cache.masks[i] is not None:
            dh = dh * cache.masks[i]
        dz = relu_backward(dh, cache.pre_activations[i - 1])
    return grads
