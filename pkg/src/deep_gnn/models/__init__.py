"""Node classification models with hand-written backward passes."""

from .params import DagnnParams, GcnParams, MlpParams, ParamBundle, count_parameters
from .mlp import MlpCache, mlp_backward, mlp_forward
from .gcn import GcnCache, gcn_backward, gcn_forward
from .decoupled import DecoupledCache, decoupled_backward, decoupled_forward
from .dagnn import DagnnCache, dagnn_backward, dagnn_forward
from .base import (
    MODEL_KINDS,
    DagnnModel,
    DecoupledModel,
    GcnModel,
    GraphModel,
    MlpModel,
    build_model,
)
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "DagnnParams",
    "GcnParams",
    "MlpParams",
    "ParamBundle",
    "count_parameters",
    "MlpCache",
    "mlp_backward",
    "mlp_forward",
    "GcnCache",
    "gcn_backward",
    "gcn_forward",
    "DecoupledCache",
    "decoupled_backward",
    "decoupled_forward",
    "DagnnCache",
    "dagnn_backward",
    "dagnn_forward",
    "MODEL_KINDS",
    "DagnnModel",
    "DecoupledModel",
    "GcnModel",
    "GraphModel",
    "MlpModel",
    "build_model",
    "load_checkpoint",
    "save_checkpoint",
]
