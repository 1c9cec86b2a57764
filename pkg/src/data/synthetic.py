"""
Gaussian-mixture data for the two-dimensional synthetic experiment.
"""
from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.data.dataset import LabeledDataset
from src.utils.errors import SpecError


class GaussianMixtureSpec(BaseModel):
    """One multivariate normal per class with a per-class sample count."""

    means: List[List[float]]
    covariances: List[List[List[float]]]
    counts: List[int] = Field(default_factory=lambda: [500, 500])

    @model_validator(mode="after")
    def _check_lengths(self) -> "GaussianMixtureSpec":
        if not (len(self.means) == len(self.covariances) == len(self.counts)):
            raise ValueError("means, covariances and counts need one entry per class")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")
        return self

    def with_counts(self, counts: List[int]) -> "GaussianMixtureSpec":
        return self.model_copy(update={"counts": list(counts)})


TWO_GAUSSIANS = GaussianMixtureSpec(
    means=[[2.5, -1.0], [0.5, 1.0]],
    covariances=[[[0.8, 0.7], [0.7, 2.0]], [[1.0, 0.3], [0.3, 1.4]]],
    counts=[500, 500],
)


def _cholesky(cov: np.ndarray, label: int) -> np.ndarray:
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise SpecError(f"class {label}: covariance must be square")
    if not np.allclose(cov, cov.T):
        raise SpecError(f"class {label}: covariance is not symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        raise SpecError(f"class {label}: covariance is not positive definite") from e


def sample_synthetic(spec: GaussianMixtureSpec, rng: np.random.Generator) -> LabeledDataset:
    """
    Draw every class from its Gaussian via the Cholesky factor of its covariance.

    Args:
        spec: Mixture parameters and counts
        rng: Seeded generator

    Returns:
        LabeledDataset: Class 0 rows first, then class 1, ...
    """
    features, labels = [], []
    for label, (mean, cov, count) in enumerate(zip(spec.means, spec.covariances, spec.counts)):
        mu = np.asarray(mean, dtype=np.float64)
        factor = _cholesky(np.asarray(cov, dtype=np.float64), label)
        if factor.shape[0] != mu.size:
            raise SpecError(f"class {label}: mean and covariance dimensions differ")
        z = rng.standard_normal((count, mu.size))
        features.append(mu + z @ factor.T)
        labels.append(np.full(count, label, dtype=np.int64))
    return LabeledDataset(
        features=np.vstack(features),
        labels=np.concatenate(labels),
        class_values=np.arange(len(spec.means)),
    )
