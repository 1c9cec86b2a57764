"""
Minimal dense neural-network engine.

Fixed MLP topologies only: forward/backward passes, activations, losses,
dropout, SGD-momentum and Adam, finite-difference checks and a binary
container format.
"""
from src.nn.layers import LayerSpec, ACTIVATIONS
from src.nn.optimizers import OptimizerSpec, optimizer_step
from src.nn.network import MlpNetwork, ForwardCache, ParamGrads
from src.nn.losses import bce_loss, cross_entropy_loss, squared_loss, classifier_loss
from src.nn.gradcheck import grad_check, GradCheckReport

__all__ = [
    "ACTIVATIONS",
    "LayerSpec",
    "OptimizerSpec",
    "optimizer_step",
    "MlpNetwork",
    "ForwardCache",
    "ParamGrads",
    "bce_loss",
    "cross_entropy_loss",
    "squared_loss",
    "classifier_loss",
    "grad_check",
    "GradCheckReport",
]
