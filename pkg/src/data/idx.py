"""
IDX file format (MNIST / Fashion-MNIST).

Big-endian header: 4-byte magic (0x00000803 images, 0x00000801 labels),
32-bit dimension sizes, then unsigned bytes.
"""
import gzip
import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from src.data.dataset import LabeledDataset
from src.utils.errors import FormatError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

PathLike = Union[str, Path]


def _read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as f:
            return f.read()
    return path.read_bytes()


def parse_idx_images(data: bytes) -> Tuple[np.ndarray, Tuple[int, int]]:
    """
    Parse an IDX image file.

    Args:
        data: Raw file bytes

    Returns:
        Tuple[np.ndarray, Tuple[int, int]]: uint8 images (count x rows*cols) and (rows, cols)
    """
    if len(data) < 16:
        raise FormatError("images header: truncated file")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGES_MAGIC:
        raise FormatError(f"images magic: expected 0x{IMAGES_MAGIC:08x}, got 0x{magic:08x}")
    expected = count * rows * cols
    if len(data) - 16 < expected:
        raise FormatError(f"images payload: expected {expected} bytes, got {len(data) - 16}")
    pixels = np.frombuffer(data, dtype=np.uint8, count=expected, offset=16)
    return pixels.reshape(count, rows * cols), (rows, cols)


def parse_idx_labels(data: bytes) -> np.ndarray:
    """Parse an IDX label file into a uint8 vector."""
    if len(data) < 8:
        raise FormatError("labels header: truncated file")
    magic, count = struct.unpack(">II", data[:8])
    if magic != LABELS_MAGIC:
        raise FormatError(f"labels magic: expected 0x{LABELS_MAGIC:08x}, got 0x{magic:08x}")
    if len(data) - 8 < count:
        raise FormatError(f"labels payload: expected {count} bytes, got {len(data) - 8}")
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=8)


def load_idx(images_path: PathLike, labels_path: PathLike) -> LabeledDataset:
    """
    Load an IDX image/label file pair (plain or gzip-compressed).

    Args:
        images_path: Path to the images file
        labels_path: Path to the labels file

    Returns:
        LabeledDataset: Raw pixel values in [0, 255], one row per image
    """
    pixels, shape = parse_idx_images(_read_bytes(images_path))
    labels = parse_idx_labels(_read_bytes(labels_path))
    if pixels.shape[0] != labels.shape[0]:
        raise FormatError(
            f"count: images file holds {pixels.shape[0]} items, labels file holds {labels.shape[0]}"
        )
    n_classes = int(labels.max()) + 1 if labels.size else 0
    logger.info(f"Loaded {pixels.shape[0]} images of {shape[0]}x{shape[1]} from {images_path}")
    return LabeledDataset(
        features=pixels.astype(np.float64),
        labels=labels.astype(np.int64),
        class_values=np.arange(n_classes),
        image_shape=shape,
    )


def encode_idx_images(pixels: np.ndarray, shape: Tuple[int, int]) -> bytes:
    """Encode uint8 image rows as an IDX image file."""
    pixels = np.asarray(pixels)
    rows, cols = shape
    header = struct.pack(">IIII", IMAGES_MAGIC, pixels.shape[0], rows, cols)
    return header + pixels.astype(np.uint8).tobytes()


def encode_idx_labels(labels: np.ndarray) -> bytes:
    """Encode labels as an IDX label file."""
    labels = np.asarray(labels)
    return struct.pack(">II", LABELS_MAGIC, labels.shape[0]) + labels.astype(np.uint8).tobytes()


def save_idx(dataset: LabeledDataset, images_path: PathLike, labels_path: PathLike) -> None:
    """
    Write a raw-pixel dataset back to an IDX file pair.

    Args:
        dataset: Dataset with integral pixel values in [0, 255] and an image shape
        images_path: Output images path
        labels_path: Output labels path
    """
    if dataset.normalization is not None:
        raise FormatError("pixels: only raw (unnormalized) datasets can be written as IDX")
    if dataset.image_shape is None:
        raise FormatError("image shape: dataset has no image shape")
    values = dataset.class_values[dataset.labels]
    Path(images_path).write_bytes(encode_idx_images(dataset.features, dataset.image_shape))
    Path(labels_path).write_bytes(encode_idx_labels(values))
