"""
Inserting generated poison into training sets.
"""
from typing import TYPE_CHECKING

import numpy as np

from src.data.dataset import LabeledDataset
from src.utils.errors import CapacityError, InputError, ShapeError

if TYPE_CHECKING:
    from src.pgan.poison import PoisonBatch


def poison_count(fraction: float, n_rows: int) -> int:
    """Number of poisoned rows, ``floor(fraction * n_rows)``."""
    return int(np.floor(fraction * n_rows + 1e-9))


def _poison_indices(dataset: LabeledDataset, poison: "PoisonBatch") -> np.ndarray:
    samples = np.asarray(poison.samples, dtype=np.float64)
    if samples.ndim != 2 or (samples.shape[0] and samples.shape[1] != dataset.n_features):
        raise ShapeError(
            f"poison samples of shape {samples.shape} do not fit {dataset.n_features} features"
        )
    return np.array([dataset.index_of_value(int(v)) for v in poison.labels], dtype=np.int64)


def substitute_poison(
    dataset: LabeledDataset,
    poison: "PoisonBatch",
    fraction: float,
    rng: np.random.Generator,
) -> LabeledDataset:
    """
    Replace random poisoning-class rows by poison samples.

    ``floor(fraction * n)`` rows whose class is one of the poison labels are
    chosen uniformly without replacement and overwritten by poison samples of
    the same label, so the row count and the class ratio are preserved.

    Args:
        dataset: Genuine training set
        poison: Generated samples with their label values
        fraction: Fraction of the whole dataset to poison, in [0, 1)
        rng: Seeded generator

    Returns:
        LabeledDataset: Poisoned copy with ``poison_mask`` marking replaced rows
    """
    if not 0.0 <= fraction < 1.0:
        raise InputError(f"fraction must lie in [0, 1), got {fraction}")
    n_replace = poison_count(fraction, dataset.n_rows)
    mask = np.zeros(dataset.n_rows, dtype=bool) if dataset.poison_mask is None else dataset.poison_mask.copy()
    if n_replace == 0:
        return dataset.with_rows(dataset.features.copy(), dataset.labels.copy(), mask)

    poison_labels = _poison_indices(dataset, poison)
    candidates = dataset.rows_of(np.unique(poison_labels))
    if candidates.size < n_replace:
        raise CapacityError(
            f"{n_replace} replacements requested but only {candidates.size} poisoning-class rows exist"
        )
    chosen = np.sort(rng.choice(candidates, size=n_replace, replace=False))

    features = dataset.features.copy()
    samples = np.asarray(poison.samples, dtype=np.float64)
    for label in np.unique(dataset.labels[chosen]):
        rows = chosen[dataset.labels[chosen] == label]
        pool = samples[poison_labels == label]
        if pool.shape[0] < rows.size:
            raise CapacityError(
                f"{rows.size} poison samples of class {dataset.value_of_index(label)} needed, "
                f"{pool.shape[0]} generated"
            )
        features[rows] = pool[:rows.size]
    mask[chosen] = True
    return dataset.with_rows(features, dataset.labels.copy(), mask)


def append_poison(dataset: LabeledDataset, poison: "PoisonBatch") -> LabeledDataset:
    """Add poison rows to the end of a dataset (class ratio not preserved)."""
    labels = _poison_indices(dataset, poison)
    samples = np.asarray(poison.samples, dtype=np.float64).reshape(labels.size, dataset.n_features)
    mask = np.concatenate([~dataset.genuine_mask(), np.ones(labels.size, dtype=bool)])
    return dataset.with_rows(
        np.vstack([dataset.features, samples]),
        np.concatenate([dataset.labels, labels]),
        mask,
    )
