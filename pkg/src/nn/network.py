"""
Multilayer perceptron with explicit forward caches.
"""
import uuid
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.nn.layers import LayerSpec, activate, activation_derivative
from src.nn.optimizers import OptimizerSpec
from src.utils.errors import CacheError, InputError, ShapeError

ParamGrads = List[Tuple[np.ndarray, np.ndarray]]


def as_matrix(values: Any, name: str = "batch") -> np.ndarray:
    """
    Coerce values into a 2-D float64 matrix.

    Args:
        values: Array-like values (a 1-D vector becomes a single row)
        name: Name used in error messages

    Returns:
        np.ndarray: Row-major float64 matrix
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


@dataclass(eq=False)
class ForwardCache:
    """Everything a backward pass needs from one forward pass."""

    network_token: str
    network_version: int
    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    post_activations: List[np.ndarray]
    masks: List[Optional[np.ndarray]]

    @property
    def batch_size(self) -> int:
        return self.inputs[0].shape[0]


@dataclass(eq=False)
class MlpNetwork:
    """Ordered dense layers, their parameters and optimizer state."""

    layers: List[LayerSpec]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    optimizer: OptimizerSpec = field(default_factory=OptimizerSpec)
    optimizer_state: Dict[str, Any] = field(default_factory=dict)
    version: int = 0
    token: str = field(default_factory=lambda: uuid.uuid4().hex)

    def __post_init__(self):
        if not self.layers:
            raise ShapeError("a network needs at least one layer")
        if not (len(self.layers) == len(self.weights) == len(self.biases)):
            raise ShapeError("layers, weights and biases must have equal length")
        for idx, spec in enumerate(self.layers):
            if idx > 0 and self.layers[idx - 1].out_dim != spec.in_dim:
                raise ShapeError(
                    f"layer {idx} in_dim {spec.in_dim} does not chain with "
                    f"layer {idx - 1} out_dim {self.layers[idx - 1].out_dim}"
                )
            if spec.activation == "softmax" and idx != len(self.layers) - 1:
                raise ShapeError("softmax is only allowed on the final layer")
            if self.weights[idx].shape != (spec.in_dim, spec.out_dim):
                raise ShapeError(f"layer {idx} weight shape {self.weights[idx].shape} mismatch")
            if self.biases[idx].shape != (1, spec.out_dim):
                raise ShapeError(f"layer {idx} bias shape {self.biases[idx].shape} mismatch")

    @classmethod
    def initialize(
        cls,
        layers: Sequence[LayerSpec],
        optimizer: OptimizerSpec,
        rng: np.random.Generator,
    ) -> "MlpNetwork":
        """
        Build a network with uniform ±sqrt(6/(in+out)) weights and zero biases.

        Args:
            layers: Layer specifications
            optimizer: Optimizer used by ``optimizer_step``
            rng: Seeded generator

        Returns:
            MlpNetwork: Initialized network
        """
        weights, biases = [], []
        for spec in layers:
            limit = np.sqrt(6.0 / (spec.in_dim + spec.out_dim))
            weights.append(rng.uniform(-limit, limit, size=(spec.in_dim, spec.out_dim)))
            biases.append(np.zeros((1, spec.out_dim)))
        return cls(list(layers), weights, biases, optimizer)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def output_activation(self) -> str:
        return self.layers[-1].activation

    @property
    def n_parameters(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "MlpNetwork":
        """Deep copy with a fresh identity (caches of the original do not apply)."""
        state = {}
        for key, value in self.optimizer_state.items():
            if isinstance(value, list):
                state[key] = [(a.copy(), b.copy()) for a, b in value]
            else:
                state[key] = value
        return MlpNetwork(
            layers=list(self.layers),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            optimizer=self.optimizer,
            optimizer_state=state,
            version=self.version,
        )

    def forward(
        self,
        batch: Any,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, ForwardCache]:
        """
        Run a batch through the network.

        Args:
            batch: Input rows (batch x in_dim)
            training: Apply dropout masks when set
            rng: Generator for dropout masks (required when dropout is active)

        Returns:
            Tuple[np.ndarray, ForwardCache]: Output rows and the cache for backward
        """
        x = as_matrix(batch)
        if x.shape[1] != self.in_dim:
            raise ShapeError(f"batch has {x.shape[1]} columns, network expects {self.in_dim}")
        if not np.all(np.isfinite(x)):
            raise InputError("batch contains non-finite values")

        inputs, pre, post, masks = [], [], [], []
        h = x
        for spec, w, b in zip(self.layers, self.weights, self.biases):
            mask = None
            if training and spec.dropout_keep < 1.0:
                if rng is None:
                    raise InputError("a training forward pass with dropout needs an rng")
                mask = (rng.random(h.shape) < spec.dropout_keep) / spec.dropout_keep
                h = h * mask
            z = h @ w + b
            a = activate(spec, z)
            inputs.append(h)
            pre.append(z)
            post.append(a)
            masks.append(mask)
            h = a

        if not np.all(np.isfinite(h)):
            raise InputError("forward pass produced non-finite activations")
        cache = ForwardCache(self.token, self.version, inputs, pre, post, masks)
        return h, cache

    def predict(self, batch: Any) -> np.ndarray:
        """Inference-mode forward pass returning outputs only."""
        out, _ = self.forward(batch, training=False)
        return out

    def backward(self, cache: ForwardCache, output_grad: Any) -> Tuple[ParamGrads, np.ndarray]:
        """
        Backpropagate a gradient from the output to parameters and input.

        For a softmax output layer ``output_grad`` is the gradient w.r.t. the
        logits (as returned by ``cross_entropy_loss``).

        Args:
            cache: Cache from ``forward`` on this network
            output_grad: Gradient w.r.t. the network output

        Returns:
            Tuple[ParamGrads, np.ndarray]: Per-layer (dW, db) and the input gradient
        """
        if cache.network_token != self.token or cache.network_version != self.version:
            raise CacheError("forward cache is stale or belongs to another network")
        if len(cache.inputs) != len(self.layers):
            raise CacheError("forward cache does not match the network depth")

        g = as_matrix(output_grad, "output_grad")
        if g.shape != cache.post_activations[-1].shape:
            raise ShapeError(
                f"output_grad shape {g.shape} does not match output "
                f"{cache.post_activations[-1].shape}"
            )

        grads: ParamGrads = [None] * len(self.layers)  # type: ignore[list-item]
        for idx in range(len(self.layers) - 1, -1, -1):
            spec = self.layers[idx]
            if spec.activation == "softmax":
                dz = g
            else:
                dz = g * activation_derivative(
                    spec, cache.pre_activations[idx], cache.post_activations[idx]
                )
            grads[idx] = (cache.inputs[idx].T @ dz, dz.sum(axis=0, keepdims=True))
            g = dz @ self.weights[idx].T
            if cache.masks[idx] is not None:
                g = g * cache.masks[idx]
        return grads, g


def scale_grads(grads: ParamGrads, factor: float) -> ParamGrads:
    """Multiply every gradient array by a scalar."""
    return [(factor * gw, factor * gb) for gw, gb in grads]


def add_grads(left: ParamGrads, right: ParamGrads) -> ParamGrads:
    """Elementwise sum of two gradient lists."""
    return [(lw + rw, lb + rb) for (lw, lb), (rw, rb) in zip(left, right)]
