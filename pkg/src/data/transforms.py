"""
Dataset transforms: pixel normalization, class filtering, per-class caps.
"""
from dataclasses import replace
from typing import Iterable, Optional

import numpy as np

from src.data.dataset import LabeledDataset, NormalizationInfo, NormalizationMode
from src.utils.errors import CapacityError, InputError

PIXEL_MAX = 255.0

_MODES = {
    "tanh_range": NormalizationInfo("tanh_range", 2.0 / PIXEL_MAX, -1.0),
    "unit": NormalizationInfo("unit", 1.0 / PIXEL_MAX, 0.0),
}


def normalize(dataset: LabeledDataset, mode: NormalizationMode = "tanh_range") -> LabeledDataset:
    """
    Map raw pixels in [0, 255] to [-1, 1] (``tanh_range``) or [0, 1] (``unit``).

    Args:
        dataset: Raw-pixel dataset
        mode: Target range

    Returns:
        LabeledDataset: Normalized copy carrying the inverse map
    """
    if mode not in _MODES:
        raise InputError(f"unknown normalization mode {mode!r}")
    if dataset.normalization is not None:
        raise InputError(f"dataset is already normalized ({dataset.normalization.mode})")
    x = dataset.features
    if x.size and (x.min() < 0.0 or x.max() > PIXEL_MAX):
        raise InputError("raw pixel values must lie in [0, 255]")
    info = _MODES[mode]
    return replace(dataset, features=info.apply(x), normalization=info)


def denormalize(dataset: LabeledDataset) -> LabeledDataset:
    """Invert ``normalize``."""
    if dataset.normalization is None:
        return dataset
    return replace(
        dataset,
        features=dataset.normalization.invert(dataset.features),
        normalization=None,
    )


def filter_classes(
    dataset: LabeledDataset,
    keep: Iterable[int],
    relabel: bool = False,
) -> LabeledDataset:
    """
    Keep only rows whose class is in ``keep``.

    With ``relabel`` the kept classes become 0..len(keep)-1 in sorted order and
    ``class_values`` remembers the original values.

    Args:
        dataset: Source dataset
        keep: Class indices to keep
        relabel: Compact the label space

    Returns:
        LabeledDataset: Filtered dataset
    """
    keep_sorted = np.array(sorted(set(int(k) for k in keep)), dtype=np.int64)
    if keep_sorted.size == 0:
        raise InputError("keep must name at least one class")
    rows = dataset.rows_of(keep_sorted)
    if rows.size == 0:
        raise InputError(f"no rows carry any of the classes {keep_sorted.tolist()}")
    subset = dataset.subset(rows)
    if not relabel:
        return subset

    if keep_sorted.max() >= dataset.n_classes:
        raise InputError(f"classes {keep_sorted.tolist()} exceed the label space")
    remap = np.full(dataset.n_classes, -1, dtype=np.int64)
    remap[keep_sorted] = np.arange(keep_sorted.size)
    names = None
    if dataset.class_names:
        names = {
            int(remap[idx]): name for idx, name in dataset.class_names.items()
            if idx < remap.size and remap[idx] >= 0
        }
    return replace(
        subset,
        labels=remap[subset.labels],
        class_values=dataset.class_values[keep_sorted],
        class_names=names,
    )


def cap_per_class(
    dataset: LabeledDataset,
    per_class: Optional[int],
    rng: np.random.Generator,
) -> LabeledDataset:
    """
    Randomly keep at most ``per_class`` rows of every class.

    Row order of the result follows the original order.
    """
    if per_class is None:
        return dataset
    keep = []
    for label in dataset.present_classes():
        rows = dataset.rows_of([label])
        if rows.size < per_class:
            raise CapacityError(
                f"class {dataset.value_of_index(label)} has {rows.size} rows, {per_class} requested"
            )
        keep.append(rng.choice(rows, size=per_class, replace=False))
    return dataset.subset(np.sort(np.concatenate(keep)))
