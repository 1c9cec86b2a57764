"""
Loss functions returning (loss, gradient) pairs.

Probabilities are clamped to [EPS, 1 - EPS] before logarithms.
"""
from typing import Any, Tuple

import numpy as np

from src.nn.network import as_matrix
from src.utils.errors import ConfigurationError, InputError

EPS = 1e-7
MAX_SMOOTHING = 0.3


def _check_smoothing(smoothing: float) -> None:
    if not 0.0 <= smoothing <= MAX_SMOOTHING:
        raise InputError(f"smoothing must lie in [0, {MAX_SMOOTHING}], got {smoothing}")


def bce_loss(pred: Any, target: Any, smoothing: float = 0.0) -> Tuple[float, np.ndarray]:
    """
    Binary cross-entropy with one-sided label smoothing.

    Positive targets become ``1 - smoothing``; negative targets stay 0.

    Args:
        pred: Probabilities (batch x k)
        target: Targets in {0, 1}, same shape as ``pred``
        smoothing: One-sided smoothing in [0, 0.3]

    Returns:
        Tuple[float, np.ndarray]: Mean loss over the batch and d(loss)/d(pred)
    """
    _check_smoothing(smoothing)
    p = as_matrix(pred, "pred")
    t = as_matrix(target, "target")
    if p.shape != t.shape:
        raise InputError(f"pred shape {p.shape} and target shape {t.shape} differ")
    if np.any((p < 0.0) | (p > 1.0)) or not np.all(np.isfinite(p)):
        raise InputError("pred entries must be probabilities")
    if np.any((t != 0.0) & (t != 1.0)):
        raise InputError("targets must be 0 or 1")
    if p.shape[0] == 0:
        raise InputError("empty batch")

    n = p.shape[0]
    p = np.clip(p, EPS, 1.0 - EPS)
    t = t * (1.0 - smoothing)
    loss = -np.sum(t * np.log(p) + (1.0 - t) * np.log(1.0 - p)) / n
    grad = (p - t) / (p * (1.0 - p)) / n
    return float(loss), grad


def cross_entropy_loss(pred: Any, target_labels: Any, smoothing: float = 0.0) -> Tuple[float, np.ndarray]:
    """
    Categorical cross-entropy on softmax rows with one-sided smoothing.

    The returned gradient is taken w.r.t. the softmax pre-activations (fused),
    which is what ``MlpNetwork.backward`` expects for a softmax output.

    Args:
        pred: Softmax rows (batch x classes)
        target_labels: Class index per row
        smoothing: The true-class target becomes ``1 - smoothing``

    Returns:
        Tuple[float, np.ndarray]: Mean loss and d(loss)/d(logits)
    """
    _check_smoothing(smoothing)
    p = as_matrix(pred, "pred")
    labels = np.asarray(target_labels).reshape(-1)
    n, k = p.shape
    if n == 0:
        raise InputError("empty batch")
    if labels.shape[0] != n:
        raise InputError(f"{labels.shape[0]} labels for {n} prediction rows")
    if n and (labels.min() < 0 or labels.max() >= k):
        raise InputError(f"labels must lie in [0, {k})")
    if not np.allclose(p.sum(axis=1), 1.0, atol=1e-6):
        raise InputError("pred rows must sum to 1")

    t = np.zeros_like(p)
    t[np.arange(n), labels.astype(np.int64)] = 1.0 - smoothing
    clipped = np.clip(p, EPS, 1.0 - EPS)
    loss = -np.sum(t * np.log(clipped)) / n
    grad = (t.sum(axis=1, keepdims=True) * p - t) / n
    return float(loss), grad


def squared_loss(pred: Any, target: Any) -> Tuple[float, np.ndarray]:
    """Half mean squared error per row: ``sum((pred - target)^2) / (2n)``."""
    p = as_matrix(pred, "pred")
    t = as_matrix(target, "target")
    if p.shape != t.shape:
        raise InputError(f"pred shape {p.shape} and target shape {t.shape} differ")
    n = p.shape[0]
    diff = p - t
    return float(0.5 * np.sum(diff * diff) / n), diff / n


def classifier_loss(
    output_activation: str,
    pred: np.ndarray,
    labels: np.ndarray,
    smoothing: float = 0.0,
) -> Tuple[float, np.ndarray]:
    """
    Loss L_C for a classifier, chosen by its output activation.

    A single sigmoid unit uses binary cross-entropy on {0, 1} labels; a
    softmax output uses categorical cross-entropy.

    Args:
        output_activation: Activation of the classifier's final layer
        pred: Classifier outputs
        labels: Class index per row
        smoothing: One-sided smoothing of the positive targets

    Returns:
        Tuple[float, np.ndarray]: Mean loss and the gradient to feed ``backward``
    """
    labels = np.asarray(labels).reshape(-1)
    if output_activation == "sigmoid":
        if labels.size and (labels.min() < 0 or labels.max() > 1):
            raise InputError("a sigmoid classifier needs labels in {0, 1}")
        return bce_loss(pred, labels.reshape(-1, 1).astype(np.float64), smoothing)
    if output_activation == "softmax":
        return cross_entropy_loss(pred, labels, smoothing)
    raise ConfigurationError(
        f"classifier output activation must be sigmoid or softmax, got {output_activation}"
    )


def predict_labels(output_activation: str, pred: np.ndarray) -> np.ndarray:
    """Hard labels from classifier outputs (threshold 0.5 or argmax)."""
    if output_activation == "sigmoid":
        return (pred[:, 0] > 0.5).astype(np.int64)
    return np.argmax(pred, axis=1).astype(np.int64)
