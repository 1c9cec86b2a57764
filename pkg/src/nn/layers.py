"""
Layer specifications and activation functions.
"""
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

ActivationName = Literal["linear", "leaky_relu", "sigmoid", "tanh", "softmax"]

ACTIVATIONS = ("linear", "leaky_relu", "sigmoid", "tanh", "softmax")


class LayerSpec(BaseModel):
    """One dense layer: ``activation(dropout(x) @ W + b)``."""

    in_dim: int = Field(gt=0)
    out_dim: int = Field(gt=0)
    activation: ActivationName = "linear"
    slope: float = Field(default=0.1, gt=0.0)
    dropout_keep: float = Field(default=1.0, gt=0.0, le=1.0)

    model_config = {"frozen": True}


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    neg = ~pos
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[neg])
    out[neg] = ez / (1.0 + ez)
    return out


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction."""
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def activate(spec: LayerSpec, z: np.ndarray) -> np.ndarray:
    """
    Apply a layer's activation to its pre-activations.

    Args:
        spec: Layer specification
        z: Pre-activations (batch x out_dim)

    Returns:
        np.ndarray: Post-activations
    """
    if spec.activation == "linear":
        return z
    if spec.activation == "leaky_relu":
        return np.where(z > 0, z, spec.slope * z)
    if spec.activation == "sigmoid":
        return sigmoid(z)
    if spec.activation == "tanh":
        return np.tanh(z)
    return softmax(z)


def activation_derivative(spec: LayerSpec, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """
    Elementwise derivative of an activation.

    Softmax has no elementwise derivative; its backward pass is fused with
    the cross-entropy loss and never calls this function.
    """
    if spec.activation == "linear":
        return np.ones_like(z)
    if spec.activation == "leaky_relu":
        return np.where(z > 0, 1.0, spec.slope)
    if spec.activation == "sigmoid":
        return a * (1.0 - a)
    if spec.activation == "tanh":
        return 1.0 - a * a
    raise ValueError("softmax derivative is fused with the cross-entropy loss")
