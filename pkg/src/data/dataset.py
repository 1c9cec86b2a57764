"""
Labelled dataset container.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Literal, Optional, Tuple

import numpy as np

from src.utils.errors import InputError, ShapeError

NormalizationMode = Literal["tanh_range", "unit"]


@dataclass(frozen=True)
class NormalizationInfo:
    """Affine map ``normalized = raw * scale + offset`` applied to raw pixels."""

    mode: NormalizationMode
    scale: float
    offset: float

    def apply(self, raw: np.ndarray) -> np.ndarray:
        return raw * self.scale + self.offset

    def invert(self, normalized: np.ndarray) -> np.ndarray:
        return (normalized - self.offset) / self.scale

    @property
    def value_range(self) -> Tuple[float, float]:
        return (self.offset, 255.0 * self.scale + self.offset)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """
    Feature rows with one class index per row.

    ``class_values`` maps each class index back to the label value it had in
    the source data (identity unless the dataset was relabelled).
    ``poison_mask`` marks rows that carry injected poison, when known.
    """

    features: np.ndarray
    labels: np.ndarray
    class_values: np.ndarray = None  # type: ignore[assignment]
    class_names: Optional[Dict[int, str]] = None
    normalization: Optional[NormalizationInfo] = None
    image_shape: Optional[Tuple[int, int]] = None
    poison_mask: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise ShapeError(f"features must be 2-D, got shape {features.shape}")
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if labels.shape[0] != features.shape[0]:
            raise ShapeError(f"{labels.shape[0]} labels for {features.shape[0]} feature rows")
        if self.class_values is None:
            n_classes = int(labels.max()) + 1 if labels.size else 0
            class_values = np.arange(n_classes, dtype=np.int64)
        else:
            class_values = np.asarray(self.class_values, dtype=np.int64).reshape(-1)
        if labels.size and (labels.min() < 0 or labels.max() >= class_values.size):
            raise InputError(f"labels must lie in [0, {class_values.size})")
        if self.poison_mask is not None:
            mask = np.asarray(self.poison_mask, dtype=bool).reshape(-1)
            if mask.shape[0] != labels.shape[0]:
                raise ShapeError("poison mask length differs from the row count")
            object.__setattr__(self, "poison_mask", mask)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_values", class_values)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.class_values.size)

    def present_classes(self) -> np.ndarray:
        """Sorted class indices that occur in the rows."""
        return np.unique(self.labels)

    def class_counts(self) -> Dict[int, int]:
        """Row count per class index, including absent classes as 0."""
        counts = np.bincount(self.labels, minlength=self.n_classes)
        return {idx: int(c) for idx, c in enumerate(counts)}

    def rows_of(self, classes: Iterable[int]) -> np.ndarray:
        """Row indices whose class index is in ``classes``."""
        return np.flatnonzero(np.isin(self.labels, np.asarray(list(classes), dtype=np.int64)))

    def index_of_value(self, value: int) -> int:
        """Class index carrying an original label value."""
        hits = np.flatnonzero(self.class_values == value)
        if hits.size == 0:
            raise InputError(f"label value {value} is not a class of this dataset")
        return int(hits[0])

    def value_of_index(self, index: int) -> int:
        return int(self.class_values[index])

    def subset(self, rows: np.ndarray) -> "LabeledDataset":
        """Rows selected by index, in the given order."""
        rows = np.asarray(rows, dtype=np.int64)
        mask = None if self.poison_mask is None else self.poison_mask[rows]
        return replace(self, features=self.features[rows], labels=self.labels[rows], poison_mask=mask)

    def with_rows(self, features: np.ndarray, labels: np.ndarray,
                  poison_mask: Optional[np.ndarray] = None) -> "LabeledDataset":
        """Same class metadata, new rows."""
        return replace(self, features=features, labels=labels, poison_mask=poison_mask)

    def genuine_mask(self) -> np.ndarray:
        if self.poison_mask is None:
            return np.ones(self.n_rows, dtype=bool)
        return ~self.poison_mask

    def prior(self, classes: Iterable[int]) -> float:
        """Fraction of rows whose class index is in ``classes``."""
        if self.n_rows == 0:
            return 0.0
        return float(self.rows_of(classes).size) / self.n_rows


def concat_datasets(first: LabeledDataset, second: LabeledDataset) -> LabeledDataset:
    """Stack two datasets that share class metadata."""
    if not np.array_equal(first.class_values, second.class_values):
        raise InputError("datasets have different class sets")
    if first.n_features != second.n_features:
        raise ShapeError("datasets have different feature widths")
    mask = np.concatenate([~first.genuine_mask(), ~second.genuine_mask()])
    return first.with_rows(
        np.vstack([first.features, second.features]),
        np.concatenate([first.labels, second.labels]),
        mask if mask.any() else None,
    )
