"""
Noise sampling and poison generation.
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np
import pandas as pd

from src.data.dataset import NormalizationInfo
from src.utils.errors import InputError

if TYPE_CHECKING:
    from src.pgan.model import PganModel


@dataclass(eq=False)
class PoisonBatch:
    """Generated samples and the label values they will carry."""

    samples: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    def to_frame(self, normalization: Optional[NormalizationInfo] = None) -> pd.DataFrame:
        """
        Tabulate samples as ``f0..f{d-1}`` columns plus ``label``.

        Args:
            normalization: When given, samples are mapped back to raw pixel range
        """
        values = self.samples if normalization is None else normalization.invert(self.samples)
        frame = pd.DataFrame(values, columns=[f"f{i}" for i in range(values.shape[1])])
        frame["label"] = self.labels.astype(np.int64)
        return frame


def sample_noise(m: int, noise_dim: int, rng: np.random.Generator) -> np.ndarray:
    """
    Standard normal generator input.

    Args:
        m: Rows
        noise_dim: Columns
        rng: Seeded generator

    Returns:
        np.ndarray: m x noise_dim draws
    """
    if m < 1 or noise_dim < 1:
        raise InputError(f"noise shape must be positive, got {m}x{noise_dim}")
    return rng.standard_normal((m, noise_dim))


def generate_poison(model: "PganModel", n: int, rng: np.random.Generator) -> PoisonBatch:
    """
    Draw poison samples from the generator in inference mode.

    Labels cycle through the sorted poison label values (a single poison
    class gives a constant label).

    Args:
        model: Trained or initialized model
        n: Number of samples
        rng: Seeded generator

    Returns:
        PoisonBatch: Samples and label values
    """
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    dim = model.generator.out_dim
    if n == 0:
        return PoisonBatch(np.zeros((0, dim)), np.zeros(0, dtype=np.int64))
    z = sample_noise(n, model.noise_dim, rng)
    samples = model.generator.predict(z)
    return PoisonBatch(samples, model.poison_values_for(n))
