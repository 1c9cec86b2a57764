"""
Config-file schemas of the CLI commands.
"""
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from src.data.sources import DatasetConfig
from src.data.synthetic import TWO_GAUSSIANS, GaussianMixtureSpec
from src.eval.config import ExperimentConfig, LabelFlipConfig, VictimConfig
from src.pgan.config import PganConfig


def _synthetic_pgan() -> PganConfig:
    return PganConfig(alpha=0.0, lam=0.8, poison_classes=[1], epochs=3000, batch_m=500, noise_dim=2)


class SynthDemoConfig(BaseModel):
    """Two-Gaussian illustration: pGAN per α, poisoned logistic victims."""

    pgan: PganConfig = Field(default_factory=_synthetic_pgan)
    alphas: List[float] = Field(default_factory=lambda: [0.0, 0.2, 0.8, 1.0])
    mixture: GaussianMixtureSpec = Field(default_factory=lambda: TWO_GAUSSIANS.model_copy())
    pgan_per_class: int = Field(default=500, ge=1)
    victim_per_class: int = Field(default=20, ge=1)
    test_per_class: int = Field(default=500, ge=1)
    n_poison: int = Field(default=8, ge=0)
    victim: VictimConfig = Field(default_factory=VictimConfig.synthetic_logistic)
    cloud_size: int = Field(default=500, ge=2)
    grid_size: int = Field(default=100, ge=2)
    grid_margin: float = Field(default=1.0, ge=0.0)
    match_epochs: int = Field(default=500, ge=1)
    match_tolerance: float = Field(default=0.1, gt=0.0, le=0.5)
    check_distribution_match: bool = True
    seed: int = 0
    out: Optional[Path] = None

    @model_validator(mode="after")
    def _alphas_in_range(self) -> "SynthDemoConfig":
        bad = [a for a in self.alphas if not 0.0 <= a <= 1.0]
        if bad or not self.alphas:
            raise ValueError(f"alphas must be a non-empty list in [0, 1], got {self.alphas}")
        return self


class TrainPganRunConfig(BaseModel):
    """Dataset plus pGAN training settings."""

    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    pgan: PganConfig = Field(default_factory=PganConfig)
    name: str = "pgan"
    out: Optional[Path] = None


Protocol = Literal["fractions", "alpha", "lambda", "size"]


class EvalRunConfig(BaseModel):
    """
    Sweep settings plus the generators to evaluate.

    ``protocol`` picks what varies between reports: ``fractions`` runs one
    fraction sweep per attack; ``alpha`` and ``lambda`` train
    ``experiment.n_generators`` models from ``pgan`` per value of ``alphas``
    or ``lambda_primes``; ``size`` sweeps the victim's rows per class over
    ``sizes`` at ``size_fraction`` with the given generators.
    """

    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)
    generators: List[Path] = Field(default_factory=list)
    attacks: List[Literal["pgan", "label_flip"]] = Field(default_factory=lambda: ["pgan"])
    label_flip: Optional[LabelFlipConfig] = None
    protocol: Protocol = "fractions"
    pgan: Optional[PganConfig] = None
    alphas: List[float] = Field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7, 0.9])
    lambda_primes: List[float] = Field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7, 0.9, 1.0])
    sizes: List[int] = Field(default_factory=lambda: [100, 200, 500, 1000])
    size_fraction: float = Field(default=0.2, ge=0.0, lt=1.0)
    out: Optional[Path] = None

    @model_validator(mode="after")
    def _attack_inputs(self) -> "EvalRunConfig":
        if not self.attacks:
            raise ValueError("attacks must name at least one attack")
        trains = self.protocol in ("alpha", "lambda")
        if trains:
            if self.attacks != ["pgan"]:
                raise ValueError(f"the {self.protocol} protocol only runs the pgan attack")
            if self.pgan is None:
                raise ValueError(f"the {self.protocol} protocol trains generators and needs a [pgan] table")
        if "pgan" in self.attacks and not trains and not self.generators:
            raise ValueError("the pgan attack needs generator model files in 'generators'")
        if "label_flip" in self.attacks and self.label_flip is None:
            raise ValueError("the label_flip attack needs a [label_flip] table")
        if self.protocol == "alpha" and (not self.alphas or any(not 0.0 <= a <= 1.0 for a in self.alphas)):
            raise ValueError(f"alphas must be a non-empty list in [0, 1], got {self.alphas}")
        if self.protocol == "lambda" and (not self.lambda_primes or any(v <= 0.0 for v in self.lambda_primes)):
            raise ValueError(f"lambda_primes must be a non-empty list of positive values, got {self.lambda_primes}")
        if self.protocol == "size" and (not self.sizes or any(s < 1 for s in self.sizes)):
            raise ValueError(f"sizes must be a non-empty list of positive counts, got {self.sizes}")
        return self

    def protocol_values(self) -> List[Union[int, float]]:
        """Values the protocol varies, empty for a plain fraction sweep."""
        return {
            "fractions": [],
            "alpha": self.alphas,
            "lambda": self.lambda_primes,
            "size": self.sizes,
        }[self.protocol]
