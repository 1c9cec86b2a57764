"""
Stratified, seed-controlled splits for victim training, detector training
and testing.
"""
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.data.dataset import LabeledDataset
from src.utils.errors import SpecError


class SplitSpec(BaseModel):
    """Per-class sample counts for one independent split."""

    victim_train_per_class: int = Field(default=500, ge=0)
    detector_train_per_class: int = Field(default=500, ge=0)
    test_fraction: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    seed: int = 0


def split(
    dataset: LabeledDataset,
    spec: SplitSpec,
    held_out: Optional[LabeledDataset] = None,
) -> Tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """
    Split a dataset into disjoint, per-class stratified subsets.

    The test set is ``held_out`` when given; otherwise it is drawn from the
    rows left after the two training subsets (all of them, or
    ``test_fraction`` of them per class).

    Args:
        dataset: Pool to split
        spec: Per-class counts and seed
        held_out: Separate test set (e.g. the IDX test files)

    Returns:
        Tuple[LabeledDataset, LabeledDataset, LabeledDataset]: victim_train, detector_train, test
    """
    rng = np.random.default_rng(spec.seed)
    victim, detector, test = [], [], []
    needed = spec.victim_train_per_class + spec.detector_train_per_class
    for label in dataset.present_classes():
        rows = dataset.rows_of([label])
        if rows.size < needed:
            raise SpecError(
                f"class {dataset.value_of_index(label)}: {needed} rows requested, {rows.size} available"
            )
        perm = rng.permutation(rows)
        victim.append(perm[:spec.victim_train_per_class])
        detector.append(perm[spec.victim_train_per_class:needed])
        if held_out is None:
            rest = perm[needed:]
            if spec.test_fraction is not None:
                rest = rest[:int(np.floor(spec.test_fraction * rest.size + 1e-9))]
            test.append(rest)

    def take(parts):
        if not parts:
            return dataset.subset(np.array([], dtype=np.int64))
        return dataset.subset(np.sort(np.concatenate(parts)))

    test_set = held_out if held_out is not None else take(test)
    return take(victim), take(detector), test_set
