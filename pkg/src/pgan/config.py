"""
Training configuration of the three-player poisoning GAN.
"""
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from src.nn.architectures import NetworkConfig


class PganConfig(BaseModel):
    """
    Every knob of the training loop.

    ``poison_classes`` and ``source_classes`` are label values as they appear
    in the source data (e.g. MNIST digits), not relabelled indices.
    """

    alpha: float = Field(default=0.1, ge=0.0, le=1.0)
    lam: float = Field(default=0.8, ge=0.0, le=1.0, alias="lambda")
    lambda_prime: Optional[float] = Field(default=None, gt=0.0)
    poison_classes: List[int] = Field(default_factory=lambda: [1])
    source_classes: Optional[List[int]] = None
    i_steps: int = Field(default=1, ge=1)
    j_steps: int = Field(default=1, ge=1)
    k_steps: int = Field(default=1, ge=1)
    batch_m: int = Field(default=500, ge=1)
    epochs: int = Field(default=3000, ge=0)
    noise_dim: int = Field(default=2, ge=1)
    smoothing: float = Field(default=0.1, ge=0.0, le=0.3)
    seed: int = 0
    non_saturating: bool = True
    generator: NetworkConfig = Field(
        default_factory=lambda: NetworkConfig.from_preset("synthetic_generator"))
    discriminator: NetworkConfig = Field(
        default_factory=lambda: NetworkConfig.from_preset("synthetic_discriminator"))
    classifier: NetworkConfig = Field(
        default_factory=lambda: NetworkConfig.from_preset("logistic"))
    log_every: int = Field(default=100, ge=1)
    show_progress: bool = False

    model_config = {"populate_by_name": True}

    @field_validator("poison_classes")
    @classmethod
    def _nonempty(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("poison_classes must name at least one class")
        return sorted(set(value))

    def resolve_lambda(self, poison_prior: float) -> float:
        """
        Effective λ for a training set.

        With ``lambda_prime`` set, λ = λ′ · Pr(Y_p), capped at 1.
        """
        if self.lambda_prime is None:
            return self.lam
        return min(1.0, self.lambda_prime * poison_prior)
