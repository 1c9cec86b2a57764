"""
Network architectures used by the attack, the defense experiments and the
victims, with width overrides for reduced-scale runs.
"""
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.nn.layers import LayerSpec
from src.nn.network import MlpNetwork
from src.nn.optimizers import OptimizerSpec
from src.utils.errors import ConfigurationError

PRESETS: Dict[str, Dict[str, Any]] = {
    # Synthetic two-Gaussian experiment
    "synthetic_generator": {
        "hidden": [20], "output_activation": "linear",
        "optimizer": {"kind": "adam", "lr": 1e-4},
    },
    "synthetic_discriminator": {
        "hidden": [250], "output_activation": "sigmoid",
        "optimizer": {"kind": "sgd_momentum", "lr": 1e-3, "momentum": 0.9},
    },
    "logistic": {
        "hidden": [], "output_activation": "sigmoid",
        "optimizer": {"kind": "sgd_momentum", "lr": 1e-3, "momentum": 0.9},
    },
    "victim_logistic": {
        "hidden": [], "output_activation": "sigmoid",
        "optimizer": {"kind": "sgd_momentum", "lr": 0.01, "momentum": 0.0},
    },
    # MNIST / FMNIST attack components
    "mnist_generator": {
        "hidden": [784, 1024], "output_activation": "tanh", "dropout_keep": 0.5,
        "optimizer": {"kind": "adam", "lr": 1e-4},
    },
    "mnist_discriminator": {
        "hidden": [1024, 512], "output_activation": "sigmoid", "dropout_keep": 0.5,
        "optimizer": {"kind": "sgd_momentum", "lr": 1e-3, "momentum": 0.9},
    },
    "mnist_classifier": {
        "hidden": [1024, 512], "output_activation": "sigmoid", "dropout_keep": 0.5,
        "optimizer": {"kind": "sgd_momentum", "lr": 1e-3, "momentum": 0.9},
    },
    # Victims
    "victim_binary": {
        "hidden": [1024, 512], "output_activation": "sigmoid", "dropout_keep": 0.5,
        "optimizer": {"kind": "sgd_momentum", "lr": 1e-3, "momentum": 0.9},
    },
    "victim_multiclass": {
        "hidden": [1024, 512], "output_activation": "softmax", "dropout_keep": 0.5,
        "optimizer": {"kind": "sgd_momentum", "lr": 0.01, "momentum": 0.9},
    },
}


class NetworkConfig(BaseModel):
    """
    Shape and optimizer of one MLP.

    ``preset`` fills every field not given explicitly, so a config can name
    a published architecture and override only its widths.
    """

    preset: Optional[str] = None
    hidden: List[int] = Field(default_factory=list)
    activation: Literal["leaky_relu", "tanh", "sigmoid", "linear"] = "leaky_relu"
    slope: float = Field(default=0.1, gt=0.0)
    output_activation: Literal["linear", "sigmoid", "tanh", "softmax"] = "linear"
    dropout_keep: float = Field(default=1.0, gt=0.0, le=1.0)
    input_dropout_keep: float = Field(default=1.0, gt=0.0, le=1.0)
    optimizer: OptimizerSpec = Field(default_factory=OptimizerSpec)

    @model_validator(mode="before")
    @classmethod
    def _apply_preset(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("preset"):
            name = data["preset"]
            if name not in PRESETS:
                raise ValueError(f"unknown architecture preset {name!r}")
            merged = dict(PRESETS[name])
            merged.update(data)
            return merged
        return data

    @classmethod
    def from_preset(cls, name: str, **overrides: Any) -> "NetworkConfig":
        return cls(preset=name, **overrides)

    def layer_specs(self, in_dim: int, out_dim: int) -> List[LayerSpec]:
        """Expand into layer specs for the given input and output widths."""
        dims = [in_dim, *self.hidden, out_dim]
        specs = []
        for idx in range(len(dims) - 1):
            last = idx == len(dims) - 2
            specs.append(LayerSpec(
                in_dim=dims[idx],
                out_dim=dims[idx + 1],
                activation=self.output_activation if last else self.activation,
                slope=self.slope,
                dropout_keep=self.input_dropout_keep if idx == 0 else self.dropout_keep,
            ))
        return specs

    def build(self, in_dim: int, out_dim: int, rng: np.random.Generator) -> MlpNetwork:
        """
        Initialize a network for the given widths.

        Args:
            in_dim: Input features
            out_dim: Output units
            rng: Seeded generator for weight initialization

        Returns:
            MlpNetwork: Fresh network
        """
        if self.output_activation == "softmax" and out_dim < 2:
            raise ConfigurationError("a softmax output needs at least two units", "output_activation")
        return MlpNetwork.initialize(self.layer_specs(in_dim, out_dim), self.optimizer, rng)


def classifier_out_dim(config: NetworkConfig, n_classes: int) -> int:
    """Output width for a classifier: one unit for sigmoid, one per class for softmax."""
    if config.output_activation == "sigmoid":
        if n_classes != 2:
            raise ConfigurationError(
                f"a sigmoid classifier handles two classes, got {n_classes}", "output_activation"
            )
        return 1
    if config.output_activation == "softmax":
        return n_classes
    raise ConfigurationError("classifiers need a sigmoid or softmax output", "output_activation")
