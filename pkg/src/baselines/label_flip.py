"""
Label flipping constrained to stay close to the source class.

Rows of the target class nearest to the source-class mean are relabelled as
the source class, so the flipped points are unlikely to look like outliers
of the class they now claim.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from src.data.dataset import LabeledDataset
from src.utils.errors import CapacityError, InputError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class FlipPlan:
    """Which target-class rows were relabelled, in ranking order."""

    source_class: int
    target_class: int
    rows: np.ndarray
    distances: np.ndarray

    @property
    def n_flips(self) -> int:
        return int(self.rows.size)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source_class": int(self.source_class),
            "target_class": int(self.target_class),
            "rows": self.rows.tolist(),
            "distances": self.distances.tolist(),
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2))
        return path


def label_flip_nearest(
    dataset: LabeledDataset,
    source_class: int,
    target_class: int,
    n_flips: int,
) -> Tuple[LabeledDataset, FlipPlan]:
    """
    Flip the ``n_flips`` target-class rows closest to the source-class mean.

    Distances are Euclidean in the dataset's (normalized) feature space; ties
    go to the lower row index. Flipped rows are marked in ``poison_mask``.

    Args:
        dataset: Training set
        source_class: Label value the flipped rows receive
        target_class: Label value of the rows that get flipped
        n_flips: Number of rows to flip

    Returns:
        Tuple[LabeledDataset, FlipPlan]: Poisoned copy and the flip record
    """
    if n_flips < 0:
        raise InputError(f"n_flips must be non-negative, got {n_flips}")
    if source_class == target_class:
        raise InputError("source and target class must differ")
    source_idx = dataset.index_of_value(source_class)
    target_idx = dataset.index_of_value(target_class)

    target_rows = dataset.rows_of([target_idx])
    if n_flips > target_rows.size:
        raise CapacityError(
            f"{n_flips} flips requested but class {target_class} has {target_rows.size} rows"
        )
    mask = np.zeros(dataset.n_rows, dtype=bool) if dataset.poison_mask is None else dataset.poison_mask.copy()
    if n_flips == 0:
        empty = FlipPlan(source_class, target_class, np.zeros(0, dtype=np.int64), np.zeros(0))
        return dataset.with_rows(dataset.features.copy(), dataset.labels.copy(), dataset.poison_mask), empty

    source_rows = dataset.rows_of([source_idx])
    if source_rows.size == 0:
        raise InputError(f"class {source_class} has no rows to take the mean of")
    center = dataset.features[source_rows].mean(axis=0)
    diff = dataset.features[target_rows] - center
    dist = np.sqrt(np.sum(diff * diff, axis=1))
    order = np.lexsort((target_rows, dist))[:n_flips]

    chosen = target_rows[order]
    labels = dataset.labels.copy()
    labels[chosen] = source_idx
    mask[chosen] = True
    logger.debug(
        f"Flipped {n_flips} rows of class {target_class} to {source_class}, "
        f"max distance {dist[order[-1]]:.4f}"
    )
    plan = FlipPlan(source_class, target_class, chosen.astype(np.int64), dist[order])
    return dataset.with_rows(dataset.features.copy(), labels, mask), plan
