"""
Central finite-difference gradient checks.
"""
from dataclasses import dataclass
from typing import Any, Callable, Literal, Optional, Tuple

import numpy as np

from src.nn.losses import bce_loss, cross_entropy_loss, squared_loss
from src.nn.network import MlpNetwork, as_matrix
from src.utils.errors import InputError

LossKind = Literal["squared", "bce", "cross_entropy"]

MAX_CHECK_PARAMETERS = 10_000


@dataclass
class GradCheckReport:
    """Outcome of a gradient check."""

    max_rel_error: float
    tolerance: float
    n_checked: int
    n_skipped: int

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def relative_error(analytic: float, numeric: float, atol: float = 1e-9, floor: float = 1e-8) -> float:
    """Relative error with an absolute floor for numerically-zero differences."""
    diff = abs(analytic - numeric)
    if diff <= atol:
        return 0.0
    return diff / max(abs(analytic), abs(numeric), floor)


def _default_targets(loss_kind: LossKind, out_dim: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(0)
    if loss_kind == "squared":
        return rng.normal(size=(n, out_dim))
    if loss_kind == "bce":
        return (rng.random((n, out_dim)) < 0.5).astype(np.float64)
    return rng.integers(0, out_dim, size=n)


def _loss_fn(loss_kind: LossKind, targets: np.ndarray, smoothing: float) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
    if loss_kind == "squared":
        return lambda out: squared_loss(out, targets)
    if loss_kind == "bce":
        return lambda out: bce_loss(out, targets, smoothing)
    if loss_kind == "cross_entropy":
        return lambda out: cross_entropy_loss(out, targets, smoothing)
    raise InputError(f"unknown loss kind {loss_kind!r}")


def _kink_signs(net: MlpNetwork, cache) -> list:
    return [
        np.sign(z) for spec, z in zip(net.layers, cache.pre_activations)
        if spec.activation == "leaky_relu"
    ]


def grad_check(
    net: MlpNetwork,
    loss_kind: LossKind,
    batch: Any,
    tolerance: float = 1e-4,
    targets: Optional[np.ndarray] = None,
    step: float = 1e-5,
    smoothing: float = 0.0,
    atol: float = 1e-9,
) -> GradCheckReport:
    """
    Compare analytic parameter gradients with central differences.

    Parameters whose perturbation moves a leaky-ReLU pre-activation across
    zero are skipped (the loss is not differentiable there).

    Args:
        net: Small network (dropout is ignored: inference-mode passes only)
        loss_kind: ``squared``, ``bce`` or ``cross_entropy``
        batch: Input rows
        tolerance: Pass threshold for the maximum relative error
        targets: Loss targets (generated from a fixed seed when omitted)
        step: Finite-difference step
        smoothing: Label smoothing for bce / cross_entropy
        atol: Differences at or below this are treated as exact

    Returns:
        GradCheckReport: Maximum relative error and counts
    """
    if net.n_parameters >= MAX_CHECK_PARAMETERS:
        raise InputError(f"gradient checks are limited to fewer than {MAX_CHECK_PARAMETERS} parameters")
    if (loss_kind == "cross_entropy") != (net.output_activation == "softmax"):
        raise InputError("cross_entropy pairs with a softmax output and only with it")

    x = as_matrix(batch)
    if targets is None:
        targets = _default_targets(loss_kind, net.out_dim, x.shape[0])
    loss_fn = _loss_fn(loss_kind, targets, smoothing)

    out, cache = net.forward(x, training=False)
    _, out_grad = loss_fn(out)
    grads, _ = net.backward(cache, out_grad)
    base_signs = _kink_signs(net, cache)

    def perturbed_loss(param: np.ndarray, index: tuple, delta: float):
        original = param[index]
        param[index] = original + delta
        try:
            out_p, cache_p = net.forward(x, training=False)
            value, _ = loss_fn(out_p)
            signs = _kink_signs(net, cache_p)
        finally:
            param[index] = original
        crossed = any(np.any(a != b) for a, b in zip(signs, base_signs))
        return value, crossed

    max_err, checked, skipped = 0.0, 0, 0
    for layer_idx in range(len(net.layers)):
        for param, grad in ((net.weights[layer_idx], grads[layer_idx][0]),
                            (net.biases[layer_idx], grads[layer_idx][1])):
            for index in np.ndindex(param.shape):
                plus, crossed_plus = perturbed_loss(param, index, step)
                minus, crossed_minus = perturbed_loss(param, index, -step)
                if crossed_plus or crossed_minus:
                    skipped += 1
                    continue
                numeric = (plus - minus) / (2.0 * step)
                max_err = max(max_err, relative_error(float(grad[index]), numeric, atol))
                checked += 1

    return GradCheckReport(max_err, tolerance, checked, skipped)
