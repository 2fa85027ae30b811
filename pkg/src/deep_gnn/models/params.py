"""Trainable parameter bundles.

Every bundle exposes its tensors as an ordered name -> array mapping. The
arrays are the live storage, so the optimizer and the gradient checker update
the model by writing into them.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from ..nn import glorot_init


class ParamBundle(ABC):
    """Base class for parameter bundles."""

    @abstractmethod
    def named_tensors(self) -> dict[str, np.ndarray]:
        """Live tensors keyed by stable names."""
        pass

    def snapshot(self) -> dict[str, np.ndarray]:
        """Independent copies of every tensor."""
        return {name: t.copy() for name, t in self.named_tensors().items()}

    def restore(self, tensors: dict[str, np.ndarray]):
        """Write a snapshot back into the live tensors."""
        for name, t in self.named_tensors().items():
            t[...] = tensors[name]


@dataclass
class MlpParams(ParamBundle):
    """Weights and biases of a feed-forward network, layer by layer."""

    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def init(cls, dims: list[int], rng: np.random.Generator) -> "MlpParams":
        """Glorot weights and zero biases for the shape chain dims[0] -> ... -> dims[-1]."""
        weights = [glorot_init(a, b, rng) for a, b in zip(dims[:-1], dims[1:])]
        biases = [np.zeros(b) for b in dims[1:]]
        return cls(weights=weights, biases=biases)

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[1]

    def named_tensors(self) -> dict[str, np.ndarray]:
        tensors = {}
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            tensors[f"mlp.w{i}"] = w
            tensors[f"mlp.b{i}"] = b
        return tensors


@dataclass
class GcnParams(ParamBundle):
    """One weight matrix per graph convolution layer, no biases."""

    weights: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def init(cls, dims: list[int], rng: np.random.Generator) -> "GcnParams":
        return cls(weights=[glorot_init(a, b, rng) for a, b in zip(dims[:-1], dims[1:])])

    def named_tensors(self) -> dict[str, np.ndarray]:
        return {f"gcn.w{i}": w for i, w in enumerate(self.weights)}


@dataclass
class DagnnParams(ParamBundle):
    """Feature MLP plus the projection vector that scores each hop."""

    mlp: MlpParams
    s: np.ndarray

    @classmethod
    def init(cls, dims: list[int], rng: np.random.Generator) -> "DagnnParams":
        mlp = MlpParams.init(dims, rng)
        s = glorot_init(dims[-1], 1, rng)[:, 0].copy()
        return cls(mlp=mlp, s=s)

    def named_tensors(self) -> dict[str, np.ndarray]:
        tensors = self.mlp.named_tensors()
        tensors["s"] = self.s
        return tensors


def count_parameters(params: ParamBundle) -> int:
    """Total number of trainable scalars."""
    return int(sum(t.size for t in params.named_tensors().values()))
