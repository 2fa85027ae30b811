"""Dense kernels with their hand-derived backward counterparts.

All arrays are float64 numpy matrices. Forward kernels validate shapes and
refuse to return non-finite values.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DivergenceError, ShapeError
from ..observability import logger

PROB_FLOOR = 1e-12

Seed = int | np.random.Generator | None


@dataclass
class KernelStats:
    """Counters for numerically suspicious events."""
    clamped_probabilities: int = 0


def check_finite(x: np.ndarray, where: str) -> np.ndarray:
    """Raise if x holds NaN or Inf."""
    if not np.all(np.isfinite(x)):
        raise DivergenceError(f"non-finite values in {where}")
    return x


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shapes {a.shape} and {b.shape} are not conformable")
    return a @ b


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(grad: np.ndarray, pre_activation: np.ndarray) -> np.ndarray:
    return grad * (pre_activation > 0.0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # exp of a non-positive argument only, so neither branch overflows
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax_rows(x: np.ndarray) -> np.ndarray:
    """Row-wise softmax; every row sums to 1."""
    shifted = x - x.max(axis=1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=1, keepdims=True)


def dropout(
    x: np.ndarray,
    rate: float,
    seed: Seed = None,
    training: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """
    Inverted dropout.

    Surviving entries are scaled by 1 / (1 − rate) so inference needs no
    rescaling. Returns the output and the scaled mask (None when inactive),
    which is exactly the backward multiplier.
    """
    if not 0.0 <= rate < 1.0:
        raise ConfigError(f"dropout rate must lie in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x, None
    rng = np.random.default_rng(seed)
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def cross_entropy(
    probs: np.ndarray,
    labels: np.ndarray,
    mask: np.ndarray,
    stats: KernelStats | None = None,
) -> float:
    """
    Summed negative log-likelihood over the labeled nodes.

    Args:
        probs: n×c row-stochastic matrix
        labels: class id per node
        mask: labeled node ids (or a boolean mask)

    Probabilities at or below 1e-12 on a labeled position are clamped and
    counted in `stats`.
    """
    idx = _labeled_ids(mask, probs.shape[0])
    picked = probs[idx, labels[idx]]
    low = picked <= PROB_FLOOR
    if low.any():
        if stats is not None:
            stats.clamped_probabilities += int(low.sum())
        logger.debug(f"cross_entropy: clamped {int(low.sum())} probabilities at {PROB_FLOOR}")
        picked = np.maximum(picked, PROB_FLOOR)
    return float(-np.log(picked).sum())


def softmax_cross_entropy_grad(probs: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Gradient of the summed loss w.r.t. the pre-softmax logits: probs − onehot on labeled rows."""
    idx = _labeled_ids(mask, probs.shape[0])
    grad = np.zeros_like(probs)
    grad[idx] = probs[idx]
    grad[idx, labels[idx]] -= 1.0
    return grad


def _labeled_ids(mask: np.ndarray, n: int) -> np.ndarray:
    mask = np.asarray(mask)
    idx = np.flatnonzero(mask) if mask.dtype == bool else mask.astype(np.int64)
    if len(idx) == 0:
        raise ConfigError("loss needs at least one labeled node")
    if idx.min() < 0 or idx.max() >= n:
        raise ShapeError(f"labeled ids must lie in [0, {n})")
    return idx


def accuracy(probs: np.ndarray, labels: np.ndarray, ids: np.ndarray) -> float:
    ids = np.asarray(ids, dtype=np.int64)
    if len(ids) == 0:
        return 0.0
    return float(np.mean(probs[ids].argmax(axis=1) == labels[ids]))


def glorot_init(rows: int, cols: int, seed: Seed = None) -> np.ndarray:
    """Uniform on ±sqrt(6 / (rows + cols))."""
    if rows < 1 or cols < 1:
        raise ShapeError(f"glorot_init needs positive extents, got ({rows}, {cols})")
    bound = np.sqrt(6.0 / (rows + cols))
    rng = np.random.default_rng(seed)
    return rng.uniform(-bound, bound, size=(rows, cols))
