"""Adam with L2 weight decay folded into the gradient."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError, ShapeError


@dataclass
class AdamState:
    """Moment accumulators and hyperparameters, keyed by parameter name."""

    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    step_count: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray], state: AdamState) -> None:
    """
    One bias-corrected Adam update, applied to `params` in place.

    weight_decay·param is added to each gradient before the moments, for
    every tensor.

    Raises:
        DivergenceError: if a gradient holds NaN or Inf, naming the tensor
        ShapeError: if a gradient does not match its parameter
    """
    for name, g in grads.items():
        if g.shape != params[name].shape:
            raise ShapeError(f"gradient for {name} has shape {g.shape}, parameter has {params[name].shape}")
        if not np.all(np.isfinite(g)):
            raise DivergenceError(f"non-finite gradient for parameter tensor {name!r}")

    state.step_count += 1
    bc1 = 1.0 - state.beta1 ** state.step_count
    bc2 = 1.0 - state.beta2 ** state.step_count

    for name, param in params.items():
        g = grads[name]
        if state.weight_decay:
            g = g + state.weight_decay * param

        if name not in state.first_moment:
            state.first_moment[name] = np.zeros_like(param)
            state.second_moment[name] = np.zeros_like(param)
        m = state.first_moment[name]
        v = state.second_moment[name]

        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)

        param -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
