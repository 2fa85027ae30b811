"""Central finite-difference verification of analytic gradients."""

from typing import Callable

import numpy as np

LossFn = Callable[[], tuple[float, dict[str, np.ndarray]]]


def finite_diff_check(
    loss_fn: LossFn,
    params: dict[str, np.ndarray],
    epsilon: float = 1e-5,
    samples: int = 20,
    seed: int = 0,
) -> float:
    """
    Compare analytic gradients to (L(θ+ε) − L(θ−ε)) / 2ε.

    Args:
        loss_fn: evaluates the loss at the current values of `params` and
            returns (loss, gradients keyed like params)
        params: tensors perturbed in place and restored afterwards
        epsilon: perturbation size
        samples: coordinates sampled per tensor (all of them if fewer)
        seed: coordinate sampling seed

    Returns:
        the maximum relative error |a − n| / max(|a|, |n|, 1e-8)
    """
    _, analytic = loss_fn()
    analytic = {name: g.copy() for name, g in analytic.items()}
    rng = np.random.default_rng(seed)
    worst = 0.0

    for name in sorted(params):
        param = params[name]
        flat = param.reshape(-1)  # view, so writes reach the tensor
        count = min(samples, flat.size)
        coords = rng.choice(flat.size, size=count, replace=False)

        for c in coords:
            original = flat[c]
            flat[c] = original + epsilon
            loss_plus, _ = loss_fn()
            flat[c] = original - epsilon
            loss_minus, _ = loss_fn()
            flat[c] = original

            numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
            exact = float(analytic[name].reshape(-1)[c])
            denom = max(abs(exact), abs(numeric), 1e-8)
            worst = max(worst, abs(exact - numeric) / denom)

    return worst
