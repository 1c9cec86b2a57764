"""
Binary dataset cache.

Layout (little-endian): magic ``PGAN-DS\\0``, version byte, int64 rows,
int64 cols, int64 class count, int64 class values, float64 features
row-major, int64 labels.
"""
import struct
from pathlib import Path
from typing import Union

import numpy as np

from src.data.dataset import LabeledDataset
from src.utils.errors import FormatError

MAGIC = b"PGAN-DS\0"
VERSION = 1


def dumps_dataset(dataset: LabeledDataset) -> bytes:
    """Serialize features, labels and class values."""
    return b"".join([
        MAGIC,
        struct.pack("<B", VERSION),
        struct.pack("<qqq", dataset.n_rows, dataset.n_features, dataset.n_classes),
        dataset.class_values.astype("<i8").tobytes(),
        np.ascontiguousarray(dataset.features, dtype="<f8").tobytes(),
        dataset.labels.astype("<i8").tobytes(),
    ])


def loads_dataset(data: bytes) -> LabeledDataset:
    """Deserialize a dataset cache."""
    header = len(MAGIC) + 1 + 24
    if len(data) < header:
        raise FormatError("dataset cache header: truncated file")
    if data[:len(MAGIC)] != MAGIC:
        raise FormatError("magic: not a PGAN-DS container")
    if data[len(MAGIC)] != VERSION:
        raise FormatError(f"version: unsupported dataset cache version {data[len(MAGIC)]}")
    rows, cols, n_classes = struct.unpack("<qqq", data[len(MAGIC) + 1:header])
    expected = header + 8 * (n_classes + rows * cols + rows)
    if len(data) != expected:
        raise FormatError(f"payload: expected {expected} bytes, got {len(data)}")
    offset = header
    class_values = np.frombuffer(data, dtype="<i8", count=n_classes, offset=offset)
    offset += 8 * n_classes
    features = np.frombuffer(data, dtype="<f8", count=rows * cols, offset=offset)
    offset += 8 * rows * cols
    labels = np.frombuffer(data, dtype="<i8", count=rows, offset=offset)
    return LabeledDataset(
        features=features.astype(np.float64).reshape(rows, cols),
        labels=labels.astype(np.int64),
        class_values=class_values.astype(np.int64),
    )


def save_dataset(dataset: LabeledDataset, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_dataset(dataset))
    return path


def load_dataset(path: Union[str, Path]) -> LabeledDataset:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"dataset cache not found: {path}")
    return loads_dataset(path.read_bytes())
