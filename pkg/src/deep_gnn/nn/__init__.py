"""Dense kernels, optimizer and gradient checking."""

from .kernels import (
    KernelStats,
    accuracy,
    check_finite,
    cross_entropy,
    dropout,
    glorot_init,
    matmul,
    relu,
    relu_backward,
    sigmoid,
    softmax_cross_entropy_grad,
    softmax_rows,
)
from .optim import AdamState, adam_step
from .gradcheck import finite_diff_check

__all__ = [
    "KernelStats",
    "accuracy",
    "check_finite",
    "cross_entropy",
    "dropout",
    "glorot_init",
    "matmul",
    "relu",
    "relu_backward",
    "sigmoid",
    "softmax_cross_entropy_grad",
    "softmax_rows",
    "AdamState",
    "adam_step",
    "finite_diff_check",
]
