"""
SGD with momentum and Adam.

Both write their moment buffers into ``net.optimizer_state`` so that state
persists across calls and travels with the network.
"""
from typing import TYPE_CHECKING, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.utils.errors import InputError, ShapeError

if TYPE_CHECKING:
    from src.nn.network import MlpNetwork, ParamGrads

Direction = Literal["ascend", "descend"]


class OptimizerSpec(BaseModel):
    """Optimizer kind and hyperparameters."""

    kind: Literal["sgd_momentum", "adam"] = "sgd_momentum"
    lr: float = Field(default=1e-3, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)

    model_config = {"frozen": True}

    @classmethod
    def sgd(cls, lr: float = 1e-3, momentum: float = 0.9) -> "OptimizerSpec":
        return cls(kind="sgd_momentum", lr=lr, momentum=momentum)

    @classmethod
    def adam(cls, lr: float = 1e-4, beta1: float = 0.9, beta2: float = 0.999,
             eps: float = 1e-8) -> "OptimizerSpec":
        return cls(kind="adam", lr=lr, beta1=beta1, beta2=beta2, eps=eps)


def _zeros_like_params(net: "MlpNetwork") -> List[Tuple[np.ndarray, np.ndarray]]:
    return [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(net.weights, net.biases)]


def _ensure_state(net: "MlpNetwork", spec: OptimizerSpec) -> dict:
    state = net.optimizer_state
    if state.get("kind") != spec.kind:
        state.clear()
        state["kind"] = spec.kind
        if spec.kind == "sgd_momentum":
            state["velocity"] = _zeros_like_params(net)
        else:
            state["step"] = 0
            state["m"] = _zeros_like_params(net)
            state["v"] = _zeros_like_params(net)
    return state


def _check_grads(net: "MlpNetwork", grads: "ParamGrads") -> None:
    if len(grads) != len(net.layers):
        raise ShapeError(f"expected gradients for {len(net.layers)} layers, got {len(grads)}")
    for idx, ((gw, gb), w, b) in enumerate(zip(grads, net.weights, net.biases)):
        if gw.shape != w.shape or gb.shape != b.shape:
            raise ShapeError(
                f"layer {idx}: gradient shapes {gw.shape}/{gb.shape} "
                f"do not match parameters {w.shape}/{b.shape}"
            )


def optimizer_step(
    net: "MlpNetwork",
    grads: "ParamGrads",
    spec: Optional[OptimizerSpec] = None,
    direction: Direction = "descend",
) -> "MlpNetwork":
    """
    Apply one optimizer update to a network in place.

    Args:
        net: Network to update
        grads: Per-layer (dW, db) gradients of the objective
        spec: Optimizer to use (defaults to the network's own)
        direction: ``descend`` to minimize, ``ascend`` to maximize

    Returns:
        MlpNetwork: The updated network
    """
    if direction not in ("ascend", "descend"):
        raise InputError(f"direction must be 'ascend' or 'descend', got {direction!r}")
    spec = spec or net.optimizer
    _check_grads(net, grads)
    state = _ensure_state(net, spec)
    sign = 1.0 if direction == "ascend" else -1.0

    if spec.kind == "sgd_momentum":
        velocity = state["velocity"]
        for idx, (gw, gb) in enumerate(grads):
            vw, vb = velocity[idx]
            vw = spec.momentum * vw + gw
            vb = spec.momentum * vb + gb
            velocity[idx] = (vw, vb)
            net.weights[idx] = net.weights[idx] + sign * spec.lr * vw
            net.biases[idx] = net.biases[idx] + sign * spec.lr * vb
    else:
        state["step"] += 1
        t = state["step"]
        c1 = 1.0 - spec.beta1 ** t
        c2 = 1.0 - spec.beta2 ** t
        for idx, (gw, gb) in enumerate(grads):
            (mw, mb), (vw, vb) = state["m"][idx], state["v"][idx]
            mw = spec.beta1 * mw + (1.0 - spec.beta1) * gw
            mb = spec.beta1 * mb + (1.0 - spec.beta1) * gb
            vw = spec.beta2 * vw + (1.0 - spec.beta2) * gw * gw
            vb = spec.beta2 * vb + (1.0 - spec.beta2) * gb * gb
            state["m"][idx] = (mw, mb)
            state["v"][idx] = (vw, vb)
            step_w = (mw / c1) / (np.sqrt(vw / c2) + spec.eps)
            step_b = (mb / c1) / (np.sqrt(vb / c2) + spec.eps)
            net.weights[idx] = net.weights[idx] + sign * spec.lr * step_w
            net.biases[idx] = net.biases[idx] + sign * spec.lr * step_b

    net.version += 1
    return net
