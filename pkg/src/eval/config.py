"""
Experiment and victim configuration.
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from src.data.splits import SplitSpec
from src.defense.detector import DefenseConfig
from src.nn.architectures import NetworkConfig


class VictimConfig(BaseModel):
    """Architecture and training schedule of the attacked classifier."""

    network: NetworkConfig = Field(default_factory=lambda: NetworkConfig.from_preset("victim_binary"))
    epochs: int = Field(default=200, ge=0)
    batch_size: int = Field(default=200, ge=1)
    seed: int = 0

    @classmethod
    def binary(cls, **overrides) -> "VictimConfig":
        return cls(**{"network": NetworkConfig.from_preset("victim_binary"), "epochs": 200,
                      "batch_size": 200, **overrides})

    @classmethod
    def multiclass(cls, **overrides) -> "VictimConfig":
        return cls(**{"network": NetworkConfig.from_preset("victim_multiclass"), "epochs": 100,
                      "batch_size": 500, **overrides})

    @classmethod
    def synthetic_logistic(cls, **overrides) -> "VictimConfig":
        """Plain SGD, learning rate 0.01, 1,000 full-batch epochs."""
        return cls(**{"network": NetworkConfig.from_preset("victim_logistic"), "epochs": 1000,
                      "batch_size": 10_000, **overrides})


class LabelFlipConfig(BaseModel):
    """Rows of ``target_class`` nearest to ``source_class`` get relabelled."""

    source_class: int
    target_class: int


class ExperimentConfig(BaseModel):
    """One poison-fraction sweep."""

    victim: VictimConfig = Field(default_factory=VictimConfig)
    fractions: List[float] = Field(default_factory=lambda: [0.0, 0.1, 0.2, 0.3, 0.4])
    n_generators: int = Field(default=1, ge=1)
    n_runs: int = Field(default=10, ge=1)
    defense: DefenseConfig = Field(default_factory=DefenseConfig)
    split: SplitSpec = Field(default_factory=SplitSpec)
    attack: Literal["pgan", "label_flip", "none"] = "pgan"
    label_flip: Optional[LabelFlipConfig] = None
    # Label value FPR/FNR are measured against. Unset, sweeps use the first
    # poison class of the generator (pgan), the flip source class (label_flip)
    # or the value at class index 1 of a two-class test set.
    positive_class: Optional[int] = None
    error_specific: Optional[List[int]] = None
    jobs: int = Field(default=1, ge=1)
    seed: int = 0

    @field_validator("fractions")
    @classmethod
    def _fractions_in_range(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one fraction is required")
        bad = [f for f in value if not 0.0 <= f < 1.0]
        if bad:
            raise ValueError(f"fractions must lie in [0, 1), got {bad}")
        return value

    @field_validator("error_specific")
    @classmethod
    def _pair(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and len(value) != 2:
            raise ValueError("error_specific takes [from_class, to_class]")
        return value

    @property
    def n_cells(self) -> int:
        return len(self.fractions) * self.n_generators * self.n_runs
